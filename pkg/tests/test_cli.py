import json
import math

import pytest

from legval.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_delannoy_range(self, capsys):
        code, out, _ = run(capsys, "eval", "--seq", "delannoy", "--n", "0..4")
        assert code == 0
        assert out.splitlines() == ["0 1", "1 3", "2 13", "3 63", "4 321"]

    def test_rational_output(self, capsys):
        code, out, _ = run(capsys, "eval", "--seq", "legendre", "--r", "2", "--n", "2..2")
        assert code == 0
        assert out.strip() == "2 11/2"

    def test_single_index_range(self, capsys):
        code, out, _ = run(capsys, "eval", "--seq", "cigler", "--r", "3", "--n", "2")
        assert code == 0
        assert out.strip() == "2 13"

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "--format", "csv", "eval", "--seq", "delannoy", "--n", "0..2")
        assert code == 0
        assert out.splitlines() == ["n,value", "0,1", "1,3", "2,13"]

    def test_jsonl_format(self, capsys):
        code, out, _ = run(capsys, "--format", "jsonl", "eval", "--seq", "delannoy", "--n", "0..1")
        rows = [json.loads(line) for line in out.splitlines()]
        assert rows == [{"n": 0, "value": "1"}, {"n": 1, "value": "3"}]

    def test_missing_r_is_usage_error(self, capsys):
        code, _, err = run(capsys, "eval", "--seq", "legendre", "--n", "0..3")
        assert code == 2
        assert "evaluation point" in err

    def test_bad_range(self, capsys):
        code, _, err = run(capsys, "eval", "--seq", "delannoy", "--n", "5..2")
        assert code == 2


class TestValuate:
    def test_delannoy(self, capsys):
        code, out, _ = run(capsys, "valuate", "--seq", "delannoy", "--p", "3", "--n", "0..4")
        assert code == 0
        assert [line.split()[1] for line in out.splitlines()] == ["0", "1", "0", "2", "1"]

    def test_infinite_entry(self, capsys):
        code, out, _ = run(capsys, "valuate", "--seq", "dsum", "--p", "3", "--n", "0..0")
        assert code == 0
        assert out.strip() == "0 inf"

    def test_negative_valuation(self, capsys):
        code, out, _ = run(capsys, "valuate", "--seq", "legendre", "--r", "2", "--p", "2", "--n", "2..2")
        assert code == 0
        assert out.strip() == "2 -1"

    def test_composite_p_rejected(self, capsys):
        code, _, err = run(capsys, "valuate", "--seq", "delannoy", "--p", "9", "--n", "0..2")
        assert code == 2
        assert "not a prime" in err


class TestPredict:
    def test_thm4(self, capsys):
        code, out, _ = run(capsys, "predict", "--predictor", "thm4", "--p", "3", "--n", "0..4")
        assert code == 0
        assert [line.split()[1] for line in out.splitlines()] == ["0", "1", "0", "2", "1"]

    def test_thm3_requires_r(self, capsys):
        code, _, err = run(capsys, "predict", "--predictor", "thm3", "--p", "3", "--n", "0..4")
        assert code == 2

    def test_strauss_rejects_zero(self, capsys):
        code, _, err = run(capsys, "predict", "--predictor", "strauss", "--n", "0..4")
        assert code == 2


class TestVerify:
    def test_thm4_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "thm4", "--p", "3", "--n", "0..100")
        assert code == 0
        assert "pass" in out
        assert "101 checked" in out

    def test_thm3_hypothesis_violation(self, capsys):
        code, _, err = run(capsys, "verify", "--theorem", "thm3", "--p", "3",
                           "--r", "1/3", "--n", "0..10")
        assert code == 2
        assert "vp" in err

    def test_conj1_digits_mode(self, capsys):
        code, out, _ = run(capsys, "verify", "--theorem", "conj1", "--n", "0..2000",
                           "--against", "digits")
        assert code == 0

    def test_parallel_sweep_matches_serial(self, capsys):
        base = ("--no-timestamp", "verify", "--theorem", "thm4", "--p", "3", "--n", "0..400")
        _, serial, _ = run(capsys, *base)
        code, parallel, _ = run(capsys, "--jobs", "2", *base)
        assert code == 0
        assert serial == parallel

    def test_csv_deterministic_without_timestamp(self, capsys):
        args = ("--format", "csv", "--no-timestamp", "verify", "--theorem", "thm5", "--n", "0..50")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2
        assert out1.splitlines()[0] == "theorem,parameters,checked,mismatch_count,status,timestamp"

    def test_jsonl_report(self, capsys):
        code, out, _ = run(capsys, "--format", "jsonl", "--no-timestamp",
                           "verify", "--theorem", "lemma6", "--p", "3", "--n", "0..40")
        assert code == 0
        row = json.loads(out)
        assert row["status"] == "pass"
        assert row["mismatches"] == []
        assert "timestamp" not in row


class TestMine:
    def test_dsum_text_output(self, capsys):
        code, out, _ = run(capsys, "mine", "--seq", "dsum", "--p", "3",
                           "--N", "729", "--max-e", "2", "--min-support", "50")
        assert code == 0
        assert "V(3n) = V(n) + 2" in out
        assert "V(9n+2) = V(3n+1) + 1" in out
        assert "artifact-chosen defaults" in out

    def test_constant_style_relations(self, capsys):
        code, out, _ = run(capsys, "mine", "--seq", "cube2k", "--p", "5",
                           "--N", "400", "--max-e", "1", "--min-support", "20")
        assert code == 0

    def test_cache_round_trip(self, capsys, tmp_path):
        cache = str(tmp_path / "tables")
        args = ("--cache", cache, "--no-timestamp", "mine", "--seq", "dsum", "--p", "3",
                "--N", "729", "--max-e", "2")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert list((tmp_path / "tables").glob("*.table"))

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "mined.txt"
        code, out, _ = run(capsys, "--out", str(target), "mine", "--seq", "dsum",
                           "--p", "3", "--N", "729", "--max-e", "1")
        assert code == 0
        assert out == ""
        assert "V(3n) = V(n) + 2" in target.read_text()


class TestRank:
    def test_legendre_rank(self, capsys):
        code, out, _ = run(capsys, "rank", "--seq", "legendre", "--r", "3", "--p", "3",
                           "--max-e", "2", "--prefix-len", "60")
        assert code == 0
        assert "rank legendre(3) p=3" in out

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "--format", "csv", "--no-timestamp",
                           "rank", "--seq", "legendre", "--r", "3", "--p", "3",
                           "--max-e", "1", "--prefix-len", "40")
        assert code == 0
        header, row = out.splitlines()
        assert header.startswith("spec,p,max_e,prefix_len,rank")


class TestOeisCheck:
    def test_pass(self, capsys, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("".join(f"{n} {sum(math.comb(2*k, k) for k in range(n))}\n"
                                for n in range(1, 20)))
        code, out, _ = run(capsys, "oeis-check", "--seq", "dsum", "--bfile", str(path))
        assert code == 0
        assert "pass" in out

    def test_missing_file_skips_exit_zero(self, capsys, tmp_path):
        code, out, _ = run(capsys, "oeis-check", "--seq", "delannoy",
                           "--bfile", str(tmp_path / "none.txt"))
        assert code == 0
        assert "skipped" in out

    def test_mismatch_exit_one(self, capsys, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("0 1\n1 4\n")
        code, out, _ = run(capsys, "oeis-check", "--seq", "delannoy", "--bfile", str(path))
        assert code == 1

    def test_malformed_exit_two(self, capsys, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("0 1 junk\n")
        code, _, err = run(capsys, "oeis-check", "--seq", "delannoy", "--bfile", str(path))
        assert code == 2
        assert ":1:" in err


class TestArgparseContract:
    def test_unknown_subcommand_exits_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2

    def test_bad_seq_choice_exits_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["eval", "--seq", "nope", "--n", "0..3"])
        assert info.value.code == 2

    def test_bad_rational_exits_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["eval", "--seq", "legendre", "--r", "x/y", "--n", "0..3"])
        assert info.value.code == 2
