"""Verification campaigns: closed-form predictors against the exact oracle.

Each campaign sweeps an inclusive index range, compares a predictor with the
independently computed exact valuation (or two independent exact evaluations
with each other), and returns a ``VerificationReport`` listing every
mismatch.  Campaigns for open conjectures report a mismatch as
``counterexample-found`` rather than ``fail`` and dump the full exact value
so the finding can be scrutinized independently of this code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .arith import Prime, digit_sum, format_rational, vp_int, vp_rat
from .miner import build_table
from .predictors import (
    PredictionContext,
    predict_b_conjecture1,
    predict_b_conjecture1_prefix,
    predict_by_recurrence,
    predict_cube_sum_v3,
    predict_strauss_shallit,
    predict_vp_Q,
    predict_vp_legendre_at_2,
    predict_vp_legendre_at_p_cases,
    predict_vp_legendre_at_p_digits,
    predict_vp_legendre_at_p_digits_prefix,
    predict_vp_legendre_general,
    predict_vp_legendre_general_oneline,
    recurrence_step,
)
from .sequences import (
    SequenceSpec,
    cigler_eval,
    cube_sum_2k,
    iter_sequence_valuations,
    legendre_eval_binomial,
    legendre_eval_rodrigues,
    legendre_eval_square_form,
)

__all__ = [
    "UsageError",
    "Mismatch",
    "VerificationReport",
    "THEOREM_IDS",
    "CONJECTURE_IDS",
    "DEFAULT_RATIONAL_POINTS",
    "run_verification",
]


class UsageError(ValueError):
    """Invalid parameters or hypothesis violations; the CLI maps this to exit 2."""


@dataclass(frozen=True)
class Mismatch:
    n: int
    predicted: str
    actual: str
    detail: str = ""


@dataclass
class VerificationReport:
    theorem_id: str
    parameters: dict[str, str]
    checked: int
    mismatches: list[Mismatch] = field(default_factory=list)
    status: str = "pass"

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "skipped")


CONJECTURE_IDS = frozenset({"conj1", "conj2"})

DEFAULT_RATIONAL_POINTS: tuple[Fraction, ...] = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(3),
    Fraction(-3),
    Fraction(9),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(3, 2),
    Fraction(2, 3),
    Fraction(-5, 7),
    Fraction(11, 4),
)


def _report(theorem_id: str, parameters: dict[str, str], checked: int,
            mismatches: list[Mismatch]) -> VerificationReport:
    if not mismatches:
        status = "pass"
    elif theorem_id in CONJECTURE_IDS:
        status = "counterexample-found"
    else:
        status = "fail"
    return VerificationReport(theorem_id, parameters, checked, mismatches, status)


def _require_odd(p: Prime | None, theorem_id: str) -> Prime:
    if p is None:
        raise UsageError(f"{theorem_id} requires --p")
    if p < 3:
        raise UsageError(f"{theorem_id} requires an odd prime p >= 3, got p={int(p)}")
    return p


def _range_params(lo: int, hi: int, **extra: str) -> dict[str, str]:
    if lo < 0 or hi < lo:
        raise UsageError(f"bad index range {lo}..{hi}")
    params = {"n": f"{lo}..{hi}"}
    params.update(extra)
    return params


def verify_thm4(p: Prime, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """All three predictors for vp(P_n(p)), odd p, against the exact oracle."""
    p = _require_odd(p, "thm4")
    params = _range_params(lo, hi, p=str(int(p)))
    table = build_table(SequenceSpec.legendre(p), p, hi, jobs=jobs)
    mismatches = []
    for n in range(lo, hi + 1):
        actual = table.values[n]
        cases = predict_vp_legendre_at_p_cases(p, n)
        digits = predict_vp_legendre_at_p_digits(p, n)
        rec = predict_by_recurrence(p, n)
        if not (cases == digits == rec == actual):
            mismatches.append(Mismatch(
                n, f"cases={cases} digits={digits} recurrence={rec}", str(actual)))
    return _report("thm4", params, hi - lo + 1, mismatches)


def verify_thm5(lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """The 2-adic formula for vp(P_n(2)) against the exact oracle."""
    params = _range_params(lo, hi)
    p2 = Prime(2)
    table = build_table(SequenceSpec.legendre(2), p2, hi, jobs=jobs)
    mismatches = []
    for n in range(lo, hi + 1):
        predicted = predict_vp_legendre_at_2(n)
        actual = table.values[n]
        if predicted != actual:
            mismatches.append(Mismatch(n, str(predicted), str(actual)))
    return _report("thm5", params, hi - lo + 1, mismatches)


def verify_thm3(p: Prime, r: Fraction, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """Both general predictors for vp(P_n(r)), vp(r) >= 1, against the oracle."""
    if p is None or r is None:
        raise UsageError("thm3 requires --p and --r")
    try:
        ctx = PredictionContext(p, r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    params = _range_params(lo, hi, p=str(int(p)), r=format_rational(r))
    table = build_table(SequenceSpec.legendre(r), p, hi, jobs=jobs)
    mismatches = []
    for n in range(lo, hi + 1):
        actual = table.values[n]
        four_case = predict_vp_legendre_general(ctx, n)
        oneline = predict_vp_legendre_general_oneline(ctx, n)
        if not (four_case == oneline == actual):
            mismatches.append(Mismatch(
                n, f"cases={four_case} oneline={oneline}", str(actual)))
    return _report("thm3", params, hi - lo + 1, mismatches)


def verify_thm6(p: Prime, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """The digit recurrence step f(pn+a) from f(n), against the exact oracle."""
    p = _require_odd(p, "thm6")
    params = _range_params(lo, hi, p=str(int(p)))
    table = build_table(SequenceSpec.legendre(p), p, int(p) * hi + int(p) - 1, jobs=jobs)
    mismatches = []
    checked = 0
    for n in range(lo, hi + 1):
        f_n = table.values[n]
        for a in range(int(p)):
            checked += 1
            predicted = recurrence_step(p, f_n, n, a)
            actual = table.values[int(p) * n + a]
            if predicted != actual:
                mismatches.append(Mismatch(
                    int(p) * n + a, str(predicted), str(actual), detail=f"n={n} a={a}"))
    return _report("thm6", params, checked, mismatches)


def verify_thm7(p: Prime, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """vp of the Cigler value M_n(p) vs vp of P_n(p), both by direct summation.

    The two sides use unrelated formulas (squared-binomial sum vs Rodrigues
    alternating sum), so their agreement is a genuine cross-check.
    """
    p = _require_odd(p, "thm7")
    params = _range_params(lo, hi, p=str(int(p)))
    mismatches = []
    x = Fraction(int(p))
    for n in range(lo, hi + 1):
        left = vp_rat(p, cigler_eval(n, x))
        right = vp_rat(p, legendre_eval_rodrigues(n, x))
        if left != right:
            mismatches.append(Mismatch(n, str(left), str(right)))
    return _report("thm7", params, hi - lo + 1, mismatches)


def verify_conj1(lo: int, hi: int, jobs: int = 1, against: str = "oracle") -> VerificationReport:
    """Conjectured 3-adic Delannoy valuations, either against the exact
    Delannoy oracle or against the digit formula (fast, for huge ranges)."""
    if against not in ("oracle", "digits"):
        raise UsageError(f"conj1 comparison must be 'oracle' or 'digits', got {against!r}")
    params = _range_params(lo, hi, against=against)
    p3 = Prime(3)
    mismatches = []
    if against == "oracle":
        table = build_table(SequenceSpec.delannoy(), p3, hi, jobs=jobs)
        for i in range(lo, hi + 1):
            predicted = predict_b_conjecture1(i)
            actual = table.values[i]
            if predicted != actual:
                mismatches.append(Mismatch(i, str(predicted), str(actual)))
    else:
        bs = predict_b_conjecture1_prefix(hi + 1)
        digits = predict_vp_legendre_at_p_digits_prefix(p3, hi + 1)
        for i in range(lo, hi + 1):
            if bs[i] != digits[i]:
                mismatches.append(Mismatch(i, str(bs[i]), str(digits[i])))
    return _report("conj1", params, hi - lo + 1, mismatches)


def verify_conj2(lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """Open conjecture: digit formula for v3 of sum C(n,k)**3 * 2**k.

    A mismatch dumps the full exact integer for independent scrutiny.
    """
    params = _range_params(lo, hi)
    p3 = Prime(3)
    mismatches = []
    for n in range(lo, hi + 1):
        value = cube_sum_2k(n)
        predicted = predict_cube_sum_v3(n)
        actual = vp_int(p3, value)
        if predicted != actual:
            mismatches.append(Mismatch(
                n, str(predicted), str(actual), detail=f"value={value}"))
    return _report("conj2", params, hi - lo + 1, mismatches)


def verify_strauss(lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """v3 of partial sums of central binomials vs v3(C(2n,n)) + 2*v3(n)."""
    if lo < 1:
        raise UsageError("strauss is defined for n >= 1 (the n = 0 sum is zero)")
    params = _range_params(lo, hi)
    p3 = Prime(3)
    mismatches = []
    vals = iter_sequence_valuations(SequenceSpec.dsum(), p3, hi + 1, lo)
    for n, actual in zip(range(lo, hi + 1), vals):
        predicted = predict_strauss_shallit(n)
        if predicted != actual:
            mismatches.append(Mismatch(n, str(predicted), str(actual)))
    return _report("strauss", params, hi - lo + 1, mismatches)


def verify_lemma6(p: Prime, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """The odd-index binomial valuation identity, all three expressions,
    plus the exact valuation of the actual binomial coefficients.

    The binomials are maintained by exact ratio updates (from-scratch
    ``comb`` anchors every 512 steps) so long sweeps stay linear.
    """
    if p is None:
        raise UsageError("lemma6 requires --p")
    params = _range_params(lo, hi, p=str(int(p)))
    mismatches = []
    central = 1  # C(2m, m)
    for m in range(0, hi + 1):
        if m:
            central = central * 2 * (2 * m - 1) // m
        if m % 512 == 0:
            assert central == comb(2 * m, m), "ratio update drifted from comb()"
        if m < lo:
            continue
        odd = central * (2 * m + 1) // (m + 1)  # C(2m+1, m)
        lhs = vp_int(p, 2 * m + 1) + vp_int(p, central)
        mid = vp_int(p, m + 1) + vp_int(p, odd)
        num = 2 * digit_sum(p, m) - digit_sum(p, 2 * m + 1) + 1
        q, rem = divmod(num, int(p) - 1)
        if rem != 0 or not (lhs == mid == q):
            mismatches.append(Mismatch(m, f"{lhs} / {mid}", f"digit form {num}/(p-1)"))
    return _report("lemma6", params, hi - lo + 1, mismatches)


def _verify_q_parity(theorem_id: str, parity: int, p: Prime, r: Fraction,
                     lo: int, hi: int, jobs: int) -> VerificationReport:
    if p is None or r is None:
        raise UsageError(f"{theorem_id} requires --p and --r")
    if not vp_rat(p, r) >= 1:
        raise UsageError(
            f"hypothesis violated: vp(r) >= 1 required, but v_{int(p)}({format_rational(r)}) = {vp_rat(p, r)}")
    params = _range_params(lo, hi, p=str(int(p)), r=format_rational(r))
    table = build_table(SequenceSpec.q(r), p, hi, jobs=jobs)
    mismatches = []
    checked = 0
    for n in range(lo, hi + 1):
        if n % 2 != parity:
            continue
        checked += 1
        predicted = predict_vp_Q(p, r, n)
        actual = table.values[n]
        if predicted != actual:
            mismatches.append(Mismatch(n, str(predicted), str(actual)))
    return _report(theorem_id, params, checked, mismatches)


def verify_lemma8(p: Prime, r: Fraction, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """vp(Q_n(r)) at even n equals vp of the central binomial coefficient."""
    return _verify_q_parity("lemma8", 0, p, r, lo, hi, jobs)


def verify_lemma9(p: Prime, r: Fraction, lo: int, hi: int, jobs: int = 1) -> VerificationReport:
    """vp(Q_n(r)) at odd n, including the extra +1 for p = 2."""
    return _verify_q_parity("lemma9", 1, p, r, lo, hi, jobs)


def verify_eq_ma(lo: int, hi: int, points: tuple[Fraction, ...] | None = None,
                 jobs: int = 1) -> VerificationReport:
    """Substitution identity M_n(x) = (2-x)**n * P_n(x/(2-x)) for x != 2."""
    points = tuple(x for x in (points or DEFAULT_RATIONAL_POINTS) if x != 2)
    params = _range_params(lo, hi, points=",".join(format_rational(x) for x in points))
    mismatches = []
    checked = 0
    for x in points:
        sub = x / (2 - x)
        for n in range(lo, hi + 1):
            checked += 1
            left = cigler_eval(n, x)
            right = (2 - x) ** n * legendre_eval_rodrigues(n, sub)
            if left != right:
                mismatches.append(Mismatch(
                    n, format_rational(left), format_rational(right),
                    detail=f"x={format_rational(x)}"))
    return _report("eq-ma", params, checked, mismatches)


def verify_formula_agreement(lo: int, hi: int, points: tuple[Fraction, ...] | None = None,
                             jobs: int = 1) -> VerificationReport:
    """The three Legendre evaluation formulas agree exactly on a point set."""
    points = tuple(points or DEFAULT_RATIONAL_POINTS)
    params = _range_params(lo, hi, points=",".join(format_rational(x) for x in points))
    mismatches = []
    checked = 0
    for x in points:
        for n in range(lo, hi + 1):
            checked += 1
            a = legendre_eval_binomial(n, x)
            b = legendre_eval_rodrigues(n, x)
            c = legendre_eval_square_form(n, x)
            if not (a == b == c):
                mismatches.append(Mismatch(
                    n, f"binomial={format_rational(a)} rodrigues={format_rational(b)}",
                    f"square={format_rational(c)}", detail=f"x={format_rational(x)}"))
    return _report("formula-agreement", params, checked, mismatches)


THEOREM_IDS = (
    "thm3", "thm4", "thm5", "thm6", "thm7",
    "conj1", "conj2", "strauss",
    "lemma6", "lemma8", "lemma9",
    "eq-ma", "formula-agreement",
)


def run_verification(
    theorem_id: str,
    lo: int,
    hi: int,
    *,
    p: Prime | None = None,
    r: Fraction | None = None,
    jobs: int = 1,
    against: str = "oracle",
) -> VerificationReport:
    """Dispatches a campaign by id, validating the parameters it needs."""
    if theorem_id == "thm3":
        return verify_thm3(p, r, lo, hi, jobs)
    if theorem_id == "thm4":
        return verify_thm4(p, lo, hi, jobs)
    if theorem_id == "thm5":
        return verify_thm5(lo, hi, jobs)
    if theorem_id == "thm6":
        return verify_thm6(p, lo, hi, jobs)
    if theorem_id == "thm7":
        return verify_thm7(p, lo, hi, jobs)
    if theorem_id == "conj1":
        return verify_conj1(lo, hi, jobs, against=against)
    if theorem_id == "conj2":
        return verify_conj2(lo, hi, jobs)
    if theorem_id == "strauss":
        return verify_strauss(lo, hi, jobs)
    if theorem_id == "lemma6":
        return verify_lemma6(p, lo, hi, jobs)
    if theorem_id == "lemma8":
        return verify_lemma8(p, r, lo, hi, jobs)
    if theorem_id == "lemma9":
        return verify_lemma9(p, r, lo, hi, jobs)
    if theorem_id == "eq-ma":
        return verify_eq_ma(lo, hi, jobs=jobs)
    if theorem_id == "formula-agreement":
        return verify_formula_agreement(lo, hi, jobs=jobs)
    raise UsageError(f"unknown theorem id {theorem_id!r}; known: {', '.join(THEOREM_IDS)}")
