import math

import pytest

from legval.arith import Prime
from legval.oeis import BFileError, oeis_check, parse_bfile
from legval.sequences import SequenceSpec


def v3(x):
    v = 0
    while x % 3 == 0:
        x //= 3
        v += 1
    return v


def delannoy_lattice(n):
    row = [1] * (n + 1)
    for _ in range(n):
        new = [1] * (n + 1)
        for j in range(1, n + 1):
            new[j] = new[j - 1] + row[j] + row[j - 1]
        row = new
    return row[n]


def write_bfile(path, pairs, comment=None):
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.extend(f"{i} {v}" for i, v in pairs)
    path.write_text("\n".join(lines) + "\n")
    return path


class TestParse:
    def test_basic(self, tmp_path):
        path = write_bfile(tmp_path / "b.txt", [(0, 1), (1, 3), (2, 13)], comment="test")
        records = parse_bfile(path)
        assert [(r.index, r.value) for r in records] == [(0, 1), (1, 3), (2, 13)]

    def test_tolerates_whitespace(self, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("\n#c\n  0   1 \n\n1\t3\n")
        assert [(r.index, r.value) for r in parse_bfile(path)] == [(0, 1), (1, 3)]

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("0 1\n1 2 3\n")
        with pytest.raises(BFileError, match=":2:"):
            parse_bfile(path)

    def test_non_integer(self, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("0 x\n")
        with pytest.raises(BFileError):
            parse_bfile(path)

    def test_decreasing_indices(self, tmp_path):
        path = tmp_path / "b.txt"
        path.write_text("3 1\n2 1\n")
        with pytest.raises(BFileError, match="increasing"):
            parse_bfile(path)


class TestCheck:
    def test_delannoy_raw_values(self, tmp_path):
        pairs = [(n, delannoy_lattice(n)) for n in range(30)]
        path = write_bfile(tmp_path / "b001850.txt", pairs)
        report = oeis_check(SequenceSpec.delannoy(), path)
        assert report.status == "pass"
        assert report.checked == 30

    def test_inclusive_partial_sums_with_offset(self, tmp_path):
        # file index n holds sum of C(2k,k) for k <= n, which is d(n+1)
        pairs = [(n, sum(math.comb(2 * k, k) for k in range(n + 1))) for n in range(25)]
        path = write_bfile(tmp_path / "b006134.txt", pairs)
        report = oeis_check(SequenceSpec.dsum(), path, offset=1)
        assert report.status == "pass"

    def test_dsum_valuations(self, tmp_path):
        pairs = [(n, v3(sum(math.comb(2 * k, k) for k in range(n)))) for n in range(1, 40)]
        path = write_bfile(tmp_path / "b082490.txt", pairs)
        report = oeis_check(SequenceSpec.dsum(), path, p=Prime(3))
        assert report.status == "pass"

    def test_delannoy_valuations(self, tmp_path):
        pairs = [(n, v3(delannoy_lattice(n))) for n in range(30)]
        path = write_bfile(tmp_path / "b358360.txt", pairs)
        report = oeis_check(SequenceSpec.delannoy(), path, p=Prime(3))
        assert report.status == "pass"

    def test_mismatch_reported(self, tmp_path):
        pairs = [(0, 1), (1, 3), (2, 14)]
        path = write_bfile(tmp_path / "bad.txt", pairs)
        report = oeis_check(SequenceSpec.delannoy(), path)
        assert report.status == "fail"
        assert len(report.mismatches) == 1
        assert report.mismatches[0].n == 2

    def test_missing_file_skips(self, tmp_path):
        report = oeis_check(SequenceSpec.delannoy(), tmp_path / "nope.txt")
        assert report.status == "skipped"
        assert report.passed

    def test_empty_file_skips(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# only a comment\n")
        report = oeis_check(SequenceSpec.delannoy(), path)
        assert report.status == "skipped"

    def test_limit_caps_work(self, tmp_path):
        pairs = [(n, delannoy_lattice(n)) for n in range(30)]
        path = write_bfile(tmp_path / "b.txt", pairs)
        report = oeis_check(SequenceSpec.delannoy(), path, limit=10)
        assert report.status == "pass"
        assert report.checked == 11

    def test_sparse_indices(self, tmp_path):
        pairs = [(n, delannoy_lattice(n)) for n in (1, 4, 9, 20)]
        path = write_bfile(tmp_path / "b.txt", pairs)
        report = oeis_check(SequenceSpec.delannoy(), path)
        assert report.status == "pass"
        assert report.checked == 4

    def test_infinite_valuation_is_mismatch(self, tmp_path):
        path = write_bfile(tmp_path / "b.txt", [(0, 0), (1, 0)])
        report = oeis_check(SequenceSpec.dsum(), path, p=Prime(3))
        assert report.status == "fail"  # our v3(d(0)) is infinite
