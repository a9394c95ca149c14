"""Exact evaluation of Legendre-family polynomials and companion sequences.

Three independent summation formulas are provided for the Legendre value
P_n(x) so they can cross-check one another: the binomial double-product sum,
the Rodrigues alternating sum (also exposed unscaled as Q_n = 2**n * P_n),
and the squared-binomial two-power sum.  Alongside them live the Cigler
polynomial M_n(x), the central Delannoy numbers, the partial sums of central
binomial coefficients, and the cube-weighted power sum.

Everything is exact.  Each evaluator accumulates one big integer numerator
over a common denominator and builds a single ``Fraction`` at the end, so no
intermediate rational reductions happen.  Binomial coefficients are updated
incrementally along k (ratio updates, exact integer divisions); powers are
running products, giving O(n) large-integer multiplications per evaluation.

For batch work (valuation tables, verification sweeps) the ``iter_sequence_*``
generators walk a whole index range in O(1) big-integer operations per step
using scaled three-term recurrences; they agree with the direct formulas and
are cross-checked against them in the test suite.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .arith import INF, PadicVal, Prime, vp_int

__all__ = [
    "SequenceKind",
    "SequenceSpec",
    "EvalCache",
    "legendre_eval_binomial",
    "legendre_eval_rodrigues",
    "legendre_eval_square_form",
    "q_eval",
    "cigler_eval",
    "central_delannoy",
    "partial_sum_central_binomial",
    "cube_sum_2k",
    "eval_sequence",
    "iter_sequence_values",
    "iter_sequence_valuations",
]


class SequenceKind(Enum):
    LEGENDRE = "legendre"  # P_n(r)
    Q = "q"                # 2**n * P_n(r)
    CIGLER = "cigler"      # M_n(r)
    DELANNOY = "delannoy"  # central Delannoy numbers
    DSUM = "dsum"          # partial sums of central binomial coefficients
    CUBE2K = "cube2k"      # sum of C(n,k)**3 * 2**k


_ARGUMENT_KINDS = frozenset(
    {SequenceKind.LEGENDRE, SequenceKind.Q, SequenceKind.CIGLER}
)


@dataclass(frozen=True)
class SequenceSpec:
    """Selects one concrete sequence, optionally pinned at a rational point."""

    kind: SequenceKind
    r: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind in _ARGUMENT_KINDS:
            if self.r is None:
                raise ValueError(f"{self.kind.value} requires an evaluation point r")
            object.__setattr__(self, "r", Fraction(self.r))
        elif self.r is not None:
            raise ValueError(f"{self.kind.value} takes no evaluation point")

    @classmethod
    def legendre(cls, r: Fraction | int) -> "SequenceSpec":
        return cls(SequenceKind.LEGENDRE, Fraction(r))

    @classmethod
    def q(cls, r: Fraction | int) -> "SequenceSpec":
        return cls(SequenceKind.Q, Fraction(r))

    @classmethod
    def cigler(cls, r: Fraction | int) -> "SequenceSpec":
        return cls(SequenceKind.CIGLER, Fraction(r))

    @classmethod
    def delannoy(cls) -> "SequenceSpec":
        return cls(SequenceKind.DELANNOY)

    @classmethod
    def dsum(cls) -> "SequenceSpec":
        return cls(SequenceKind.DSUM)

    @classmethod
    def cube2k(cls) -> "SequenceSpec":
        return cls(SequenceKind.CUBE2K)

    def canonical(self) -> str:
        """Stable text form, e.g. 'legendre(3/5)' or 'delannoy'."""
        if self.r is None:
            return self.kind.value
        if self.r.denominator == 1:
            return f"{self.kind.value}({self.r.numerator})"
        return f"{self.kind.value}({self.r.numerator}/{self.r.denominator})"

    @classmethod
    def parse(cls, text: str) -> "SequenceSpec":
        m = re.fullmatch(r"([a-z0-9]+)(?:\(([^()]+)\))?", text.strip())
        if not m:
            raise ValueError(f"malformed sequence spec: {text!r}")
        name, arg = m.group(1), m.group(2)
        try:
            kind = SequenceKind(name)
        except ValueError:
            raise ValueError(f"unknown sequence {name!r}") from None
        if arg is None:
            return cls(kind)
        try:
            r = Fraction(arg)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed evaluation point in {text!r}") from exc
        return cls(kind, r)


class EvalCache:
    """Bounded memo for point evaluations, keyed by (spec, n).

    Eviction is FIFO.  Concurrent readers are safe; concurrent writers may
    race but only ever insert identical values for a given key (evaluation
    is deterministic), so the cache never holds a wrong entry.
    """

    def __init__(self, max_entries: int):
        if max_entries <= 0:
            raise ValueError("cache budget must be positive")
        self.max_entries = max_entries
        self._store: dict[tuple[SequenceSpec, int], Fraction] = {}

    def __len__(self) -> int:
        return len(self._store)

    def lookup(self, spec: SequenceSpec, n: int) -> Fraction | None:
        return self._store.get((spec, n))

    def insert(self, spec: SequenceSpec, n: int, value: Fraction) -> None:
        if (spec, n) not in self._store and len(self._store) >= self.max_entries:
            self._store.pop(next(iter(self._store)))
        self._store[(spec, n)] = value


def _require_nonneg(n: int) -> None:
    if n < 0:
        raise ValueError(f"sequence index must be >= 0, got {n}")


def legendre_eval_binomial(n: int, x: Fraction | int) -> Fraction:
    """P_n(x) as sum of C(n,k) * C(n+k,k) * ((x-1)/2)**k."""
    _require_nonneg(n)
    x = Fraction(x)
    d = x - 1
    u, w = d.numerator, d.denominator  # (x-1)/2 = u / (2w)
    coeffs = [1] * (n + 1)
    c = 1
    for k in range(1, n + 1):
        c = c * (n - k + 1) * (n + k) // (k * k)
        coeffs[k] = c
    # Horner in u over the common denominator (2w)**n.
    v = 2 * w
    total = 0
    pw = 1  # v**(n-k)
    for k in range(n, -1, -1):
        total = total * u + coeffs[k] * pw
        pw *= v
    return Fraction(total, v**n)


def _rodrigues_parts(n: int, x: Fraction) -> tuple[int, int]:
    """Integer numerator and denominator b**n of the alternating sum
    giving Q_n(x) = 2**n * P_n(x), with x = a/b."""
    a, b = x.numerator, x.denominator
    half = n // 2
    coeffs = [0] * (half + 1)
    c = math.comb(2 * n, n)
    coeffs[0] = c
    for k in range(1, half + 1):
        c = (
            c
            * ((n - k + 1) * (n - 2 * k + 1) * (n - 2 * k + 2))
            // (k * (2 * n - 2 * k + 1) * (2 * n - 2 * k + 2))
        )
        coeffs[k] = c
    # Sum over k of (-1)**k * c_k * a**(n-2k) * b**(2k), Horner in b**2.
    bb = b * b
    total = 0
    pa = a ** (n % 2)  # a**(n-2k), lowest exponent first
    aa = a * a
    for k in range(half, -1, -1):
        term = coeffs[k] * pa
        total = total * bb + (-term if k % 2 else term)
        pa *= aa
    return total, b**n


def legendre_eval_rodrigues(n: int, x: Fraction | int) -> Fraction:
    """P_n(x) from the Rodrigues alternating sum, divided by 2**n."""
    _require_nonneg(n)
    num, den = _rodrigues_parts(n, Fraction(x))
    return Fraction(num, den << n)


def q_eval(n: int, x: Fraction | int) -> Fraction:
    """Q_n(x) = 2**n * P_n(x), the integer-coefficient alternating sum."""
    _require_nonneg(n)
    num, den = _rodrigues_parts(n, Fraction(x))
    return Fraction(num, den)


def legendre_eval_square_form(n: int, x: Fraction | int) -> Fraction:
    """P_n(x) as (1/2**n) * sum of C(n,k)**2 * (x-1)**k * (x+1)**(n-k)."""
    _require_nonneg(n)
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    u = a - b
    w = a + b
    coeffs = [1] * (n + 1)
    c = 1
    for k in range(1, n + 1):
        c = c * (n - k + 1) ** 2 // (k * k)
        coeffs[k] = c
    total = 0
    pw = 1  # w**(n-k)
    for k in range(n, -1, -1):
        total = total * u + coeffs[k] * pw
        pw *= w
    return Fraction(total, (2 * b) ** n)


def _cigler_parts(n: int, x: Fraction) -> tuple[int, int]:
    """Integer numerator and denominator b**n of M_n(x), with x = a/b."""
    a, b = x.numerator, x.denominator
    u = a - b
    total = 0
    c = 1  # C(n,k)**2
    pu = 1  # u**k
    pb = b**n  # b**(n-k)
    for k in range(0, n + 1):
        if k:
            c = c * (n - k + 1) ** 2 // (k * k)
            pu *= u
            pb //= b
        total += c * pu * pb
    return total, b**n


def cigler_eval(n: int, x: Fraction | int) -> Fraction:
    """M_n(x) as sum of C(n,k)**2 * (x-1)**k."""
    _require_nonneg(n)
    num, den = _cigler_parts(n, Fraction(x))
    return Fraction(num, den)


def central_delannoy(n: int) -> int:
    """Central Delannoy number: sum of C(n,i) * C(n+i,i)."""
    _require_nonneg(n)
    total = 1
    c = 1
    for i in range(1, n + 1):
        c = c * (n - i + 1) * (n + i) // (i * i)
        total += c
    return total


def partial_sum_central_binomial(n: int) -> int:
    """d(n) = sum of C(2i,i) over 0 <= i < n; d(0) = 0."""
    _require_nonneg(n)
    total = 0
    c = 1  # C(2i,i)
    for i in range(n):
        total += c
        c = c * 2 * (2 * i + 1) // (i + 1)
    return total


def cube_sum_2k(n: int) -> int:
    """Sum of C(n,k)**3 * 2**k over 0 <= k <= n."""
    _require_nonneg(n)
    total = 1
    t = 1  # C(n,k)**3, updated by the cubed ratio
    for k in range(1, n + 1):
        t = t * (n - k + 1) ** 3 // (k * k * k)
        total += t << k
    return total


def eval_sequence(spec: SequenceSpec, n: int, cache: EvalCache | None = None) -> Fraction:
    """Exact value of the selected sequence at index n."""
    _require_nonneg(n)
    if cache is not None:
        hit = cache.lookup(spec, n)
        if hit is not None:
            return hit
    kind = spec.kind
    if kind is SequenceKind.LEGENDRE:
        value = legendre_eval_rodrigues(n, spec.r)
    elif kind is SequenceKind.Q:
        value = q_eval(n, spec.r)
    elif kind is SequenceKind.CIGLER:
        value = cigler_eval(n, spec.r)
    elif kind is SequenceKind.DELANNOY:
        value = Fraction(central_delannoy(n))
    elif kind is SequenceKind.DSUM:
        value = Fraction(partial_sum_central_binomial(n))
    else:
        value = Fraction(cube_sum_2k(n))
    if cache is not None:
        cache.insert(spec, n, value)
    return value


# ---------------------------------------------------------------------------
# Batch iteration.
#
# P_n satisfies n*P_n(x) = (2n-1)*x*P_{n-1}(x) - (n-1)*P_{n-2}(x).  With
# x = a/b the scaled values U_n = (2b)**n * P_n(a/b) are integers obeying
#     n*U_n = 2a*(2n-1)*U_{n-1} - 4*b*b*(n-1)*U_{n-2},
# and the Cigler scaling C_n = b**n * M_n(a/b) obeys
#     n*C_n = a*(2n-1)*C_{n-1} - (2b-a)**2 * (n-1)*C_{n-2}.
# Both divisions by n are exact.  Seeds for a mid-range start come from the
# direct summation formulas, so range partitioning stays deterministic.
# ---------------------------------------------------------------------------


def _iter_scaled_legendre(r: Fraction, start: int, stop: int) -> Iterator[int]:
    """Yields U_n = (2b)**n * P_n(a/b) for n in [start, stop)."""
    a, b = r.numerator, r.denominator
    m1 = _rodrigues_parts(start - 1, r)[0] if start >= 1 else None
    m2 = _rodrigues_parts(start - 2, r)[0] if start >= 2 else None
    c1 = 2 * a
    c2 = 4 * b * b
    for n in range(start, stop):
        if n == 0:
            u = 1
        elif n == 1:
            u = c1
        else:
            t = c1 * (2 * n - 1) * m1 - c2 * (n - 1) * m2
            u, rem = divmod(t, n)
            assert rem == 0, "scaled Legendre recurrence lost exactness"
        yield u
        m2, m1 = m1, u


def _iter_scaled_cigler(r: Fraction, start: int, stop: int) -> Iterator[int]:
    """Yields C_n = b**n * M_n(a/b) for n in [start, stop)."""
    a, b = r.numerator, r.denominator
    m1 = _cigler_parts(start - 1, r)[0] if start >= 1 else None
    m2 = _cigler_parts(start - 2, r)[0] if start >= 2 else None
    c2 = (2 * b - a) ** 2
    for n in range(start, stop):
        if n == 0:
            u = 1
        elif n == 1:
            u = a
        else:
            t = a * (2 * n - 1) * m1 - c2 * (n - 1) * m2
            u, rem = divmod(t, n)
            assert rem == 0, "scaled Cigler recurrence lost exactness"
        yield u
        m2, m1 = m1, u


def _iter_delannoy(start: int, stop: int) -> Iterator[int]:
    """Yields central Delannoy numbers for n in [start, stop)."""
    m1 = central_delannoy(start - 1) if start >= 1 else None
    m2 = central_delannoy(start - 2) if start >= 2 else None
    for n in range(start, stop):
        if n == 0:
            u = 1
        elif n == 1:
            u = 3
        else:
            t = 3 * (2 * n - 1) * m1 - (n - 1) * m2
            u, rem = divmod(t, n)
            assert rem == 0, "Delannoy recurrence lost exactness"
        yield u
        m2, m1 = m1, u


def _iter_dsum(start: int, stop: int) -> Iterator[int]:
    total = partial_sum_central_binomial(start)
    c = math.comb(2 * start, start)
    for i in range(start, stop):
        yield total
        total += c
        c = c * 2 * (2 * i + 1) // (i + 1)


def _iter_cube2k(start: int, stop: int) -> Iterator[int]:
    for n in range(start, stop):
        yield cube_sum_2k(n)


def iter_sequence_values(spec: SequenceSpec, stop: int, start: int = 0) -> Iterator[Fraction]:
    """Exact values for n in [start, stop), amortized O(1) big-int steps."""
    if start < 0 or stop < start:
        raise ValueError(f"bad index range [{start}, {stop})")
    kind = spec.kind
    if kind is SequenceKind.LEGENDRE:
        tb = 2 * spec.r.denominator
        for n, u in enumerate(_iter_scaled_legendre(spec.r, start, stop), start):
            yield Fraction(u, tb**n)
    elif kind is SequenceKind.Q:
        b = spec.r.denominator
        for n, u in enumerate(_iter_scaled_legendre(spec.r, start, stop), start):
            yield Fraction(u, b**n)
    elif kind is SequenceKind.CIGLER:
        b = spec.r.denominator
        for n, u in enumerate(_iter_scaled_cigler(spec.r, start, stop), start):
            yield Fraction(u, b**n)
    elif kind is SequenceKind.DELANNOY:
        for u in _iter_delannoy(start, stop):
            yield Fraction(u)
    elif kind is SequenceKind.DSUM:
        for u in _iter_dsum(start, stop):
            yield Fraction(u)
    else:
        for u in _iter_cube2k(start, stop):
            yield Fraction(u)


def _scaled_iter_and_correction(
    spec: SequenceSpec, p: Prime, start: int, stop: int
) -> tuple[Iterator[int], int]:
    """Integer iterator plus the per-index valuation shift it carries.

    The n-th scaled integer satisfies vp(value_n) = vp(int_n) - n * shift.
    """
    kind = spec.kind
    if kind is SequenceKind.LEGENDRE:
        return (
            _iter_scaled_legendre(spec.r, start, stop),
            vp_int(p, 2 * spec.r.denominator).value,
        )
    if kind is SequenceKind.Q:
        return (
            _iter_scaled_legendre(spec.r, start, stop),
            vp_int(p, spec.r.denominator).value,
        )
    if kind is SequenceKind.CIGLER:
        return (
            _iter_scaled_cigler(spec.r, start, stop),
            vp_int(p, spec.r.denominator).value,
        )
    if kind is SequenceKind.DELANNOY:
        return _iter_delannoy(start, stop), 0
    if kind is SequenceKind.DSUM:
        return _iter_dsum(start, stop), 0
    return _iter_cube2k(start, stop), 0


def iter_sequence_valuations(
    spec: SequenceSpec, p: Prime, stop: int, start: int = 0
) -> Iterator[PadicVal]:
    """vp of the exact sequence values for n in [start, stop)."""
    for val, _bits in iter_valuations_with_bits(spec, p, stop, start):
        yield val


def iter_valuations_with_bits(
    spec: SequenceSpec, p: Prime, stop: int, start: int = 0
) -> Iterator[tuple[PadicVal, int]]:
    """Like ``iter_sequence_valuations`` but also reports each underlying
    integer's bit length, so callers can enforce a computation budget."""
    if start < 0 or stop < start:
        raise ValueError(f"bad index range [{start}, {stop})")
    ints, shift = _scaled_iter_and_correction(spec, p, start, stop)
    for n, u in enumerate(ints, start):
        if u == 0:
            yield INF, 0
        else:
            v = vp_int(p, u).value - n * shift
            yield PadicVal(v), u.bit_length()
