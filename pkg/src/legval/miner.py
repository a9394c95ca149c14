"""Valuation tables, affine p-kernel relation mining, and kernel rank.

A ``ValuationTable`` stores vp of a sequence's exact values on 0..N.  The
miner searches the table for affine relations of the single-term shape

    V(p**e * n + i) = V(p**e2 * n + j) + c      for all n,

the same family a residue-class search over the base-p index tree produces.
Classes are explored breadth-first: once a class (e, i) is explained by a
relation, its refinements are not descended into, so each relation is
reported at the shallowest level that explains it and the output is
canonical.  Kernel rank is estimated by exact fraction-free (division
delayed, Bareiss) elimination over the integers.

Mining gives heuristic evidence only: a relation that holds on a finite
table is a conjecture about the infinite sequence, not a theorem.
"""

from __future__ import annotations

import concurrent.futures
import re
from dataclasses import dataclass, field
from pathlib import Path

from .arith import PadicVal, Prime
from .sequences import SequenceSpec, iter_valuations_with_bits

__all__ = [
    "TableBudgetError",
    "ValuationTable",
    "RelationCandidate",
    "MinedRelation",
    "KernelRankEstimate",
    "build_table",
    "mine_relations",
    "verify_relation",
    "estimate_kernel_rank",
    "format_relation",
    "DEFAULT_MIN_SUPPORT",
]

DEFAULT_MIN_SUPPORT = 50


class TableBudgetError(RuntimeError):
    """Raised when building a table would exceed the configured bit budget.

    Distinct from ValueError so callers can tell resource exhaustion apart
    from mathematically invalid requests.
    """


@dataclass(frozen=True)
class ValuationTable:
    """vp of one sequence on the contiguous index range 0..N."""

    spec: SequenceSpec
    p: Prime
    values: tuple[PadicVal, ...]

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def save(self, path: str | Path) -> None:
        lines = [f"# spec={self.spec.canonical()} p={int(self.p)} N={self.N}"]
        lines.extend(f"{n} {v}" for n, v in enumerate(self.values))
        Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")

    @classmethod
    def load(cls, path: str | Path) -> "ValuationTable":
        text = Path(path).read_text(encoding="ascii")
        lines = text.splitlines()
        if not lines:
            raise ValueError(f"{path}: empty table file")
        m = re.fullmatch(r"# spec=(\S+) p=(\d+) N=(\d+)", lines[0].strip())
        if not m:
            raise ValueError(f"{path}: malformed table header: {lines[0]!r}")
        spec = SequenceSpec.parse(m.group(1))
        p = Prime(int(m.group(2)))
        n_expected = int(m.group(3))
        values: list[PadicVal] = []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2 or int(parts[0]) != len(values):
                raise ValueError(f"{path}:{lineno}: expected '{len(values)} <value>', got {line!r}")
            values.append(PadicVal.parse(parts[1]))
        if len(values) != n_expected + 1:
            raise ValueError(f"{path}: header says N={n_expected} but {len(values)} entries present")
        return cls(spec, p, tuple(values))

    def truncated(self, N: int) -> "ValuationTable":
        if N > self.N:
            raise ValueError(f"cannot extend table of length {self.N} to {N}")
        return ValuationTable(self.spec, self.p, self.values[: N + 1])


def _chunk_worker(spec_text: str, p_int: int, start: int, stop: int) -> list[PadicVal]:
    spec = SequenceSpec.parse(spec_text)
    p = Prime(p_int)
    return [v for v, _bits in iter_valuations_with_bits(spec, p, stop, start)]


def build_table(
    spec: SequenceSpec,
    p: Prime,
    N: int,
    *,
    jobs: int = 1,
    max_total_bits: int | None = None,
) -> ValuationTable:
    """Table of vp(value at n) for n = 0..N.

    With jobs > 1 the index range is split into contiguous chunks computed
    in worker processes; each chunk reseeds its recurrence from the direct
    formulas, so the result is identical for any worker count.
    """
    if N < 0:
        raise ValueError("table length must be >= 0")
    # budget accounting is cumulative in index order, so it runs serially
    if jobs <= 1 or N < 256 or max_total_bits is not None:
        values = []
        total_bits = 0
        for v, bits in iter_valuations_with_bits(spec, p, N + 1):
            total_bits += bits
            if max_total_bits is not None and total_bits > max_total_bits:
                raise TableBudgetError(
                    f"table for {spec.canonical()} exceeded {max_total_bits} total bits at n={len(values)}"
                )
            values.append(v)
        return ValuationTable(spec, p, tuple(values))

    bounds = [0]
    step, extra = divmod(N + 1, jobs)
    for k in range(jobs):
        bounds.append(bounds[-1] + step + (1 if k < extra else 0))
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_chunk_worker, spec.canonical(), int(p), lo, hi)
            for lo, hi in zip(bounds, bounds[1:])
            if hi > lo
        ]
        values = [v for f in futures for v in f.result()]
    return ValuationTable(spec, p, tuple(values))


@dataclass(frozen=True)
class RelationCandidate:
    """The claim V(p**e * n + i) = V(p**e2 * n + j) + c for every n >= 0."""

    e: int
    i: int
    e2: int
    j: int
    c: int


@dataclass(frozen=True)
class MinedRelation:
    candidate: RelationCandidate
    support: int
    violations: int
    skipped: int = 0  # indices where either side was infinite


@dataclass(frozen=True)
class KernelRankEstimate:
    prefix_len: int
    max_e: int
    rank: int
    basis_labels: tuple[tuple[int, int], ...]
    dropped: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def format_relation(cand: RelationCandidate, p: Prime) -> str:
    """Human form, e.g. 'V(9n+4) = V(3n+1) + 1'."""

    def side(e: int, i: int) -> str:
        pe = p**e
        head = "n" if pe == 1 else f"{pe}n"
        return f"V({head})" if i == 0 else f"V({head}+{i})"

    eq = f"{side(cand.e, cand.i)} = {side(cand.e2, cand.j)}"
    if cand.c > 0:
        return f"{eq} + {cand.c}"
    if cand.c < 0:
        return f"{eq} - {-cand.c}"
    return eq


def verify_relation(table: ValuationTable, cand: RelationCandidate) -> MinedRelation:
    """Exhaustively checks a candidate on every testable index of the table."""
    p = table.p
    pe, pe2 = p**cand.e, p**cand.e2
    if not 0 <= cand.i < pe or not 0 <= cand.j < pe2:
        raise ValueError(f"candidate offsets out of range for p={int(p)}: {cand}")
    n_max = min((table.N - cand.i) // pe, (table.N - cand.j) // pe2)
    support = violations = skipped = 0
    values = table.values
    for n in range(n_max + 1):
        lhs = values[pe * n + cand.i]
        rhs = values[pe2 * n + cand.j]
        if lhs.is_infinite or rhs.is_infinite:
            skipped += 1
            continue
        support += 1
        if lhs.value != rhs.value + cand.c:
            violations += 1
    return MinedRelation(cand, support, violations, skipped)


def _best_relation(
    table: ValuationTable, e: int, i: int, min_support: int, c_bound: int
) -> MinedRelation | None:
    """Shallowest relation explaining class (e, i), or None.

    Candidates are scanned by (e2 ascending, j ascending); the offset c is
    forced by the first testable index, so this realizes the preference
    order: smallest e2, then smallest j, then the unique admissible c.
    """
    p = table.p
    values = table.values
    pe = p**e
    for e2 in range(e + 1):
        pe2 = p**e2
        for j in range(pe2):
            if e2 == e and j == i:
                continue  # the identity relation explains nothing
            n_max = min((table.N - i) // pe, (table.N - j) // pe2)
            c = None
            support = 0
            ok = True
            for n in range(n_max + 1):
                lhs = values[pe * n + i]
                rhs = values[pe2 * n + j]
                if lhs.is_infinite or rhs.is_infinite:
                    continue
                diff = lhs.value - rhs.value
                if c is None:
                    c = diff
                    if abs(c) > c_bound:
                        ok = False
                        break
                elif diff != c:
                    ok = False
                    break
                support += 1
            if ok and c is not None and support >= min_support:
                cand = RelationCandidate(e, i, e2, j, c)
                return MinedRelation(cand, support, 0, (n_max + 1) - support)
    return None


def mine_relations(
    table: ValuationTable,
    max_e: int,
    min_support: int = DEFAULT_MIN_SUPPORT,
    *,
    c_bound: int | None = None,
) -> list[MinedRelation]:
    """Affine kernel relations found by resolved-class breadth-first search.

    Level e of the search looks at every residue class p**e * n + i not
    already explained at a shallower level; an accepted relation stops the
    descent below its class.  Relations are exact on the whole table (zero
    violations) with at least ``min_support`` finite test indices; indices
    with an infinite entry on either side are skipped and tallied.
    """
    if max_e < 0:
        raise ValueError("max_e must be >= 0")
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    p = table.p
    if c_bound is None:
        c_bound = 2 * int(p)
    deepest = p**max_e
    if (table.N - (deepest - 1)) // deepest + 1 < min_support:
        raise ValueError(
            f"table too short: level-{max_e} classes have fewer than {min_support} indices"
        )
    accepted: list[MinedRelation] = []
    frontier: list[tuple[int, int]] = [(0, 0)]
    for e in range(max_e + 1):
        next_frontier: list[tuple[int, int]] = []
        for ce, ci in frontier:
            found = _best_relation(table, ce, ci, min_support, c_bound)
            if found is not None:
                accepted.append(found)
            elif e < max_e:
                base = p**ce
                next_frontier.extend((ce + 1, ci + t * base) for t in range(p))
        frontier = next_frontier
    accepted.sort(key=lambda rel: (rel.candidate.e, rel.candidate.i))
    return accepted


def _labels_up_to(p: Prime, max_e: int) -> list[tuple[int, int]]:
    return [(e, i) for e in range(max_e + 1) for i in range(p**e)]


def integer_matrix_rank(rows: list[list[int]]) -> tuple[int, list[int]]:
    """Rank of an integer matrix by fraction-free elimination.

    Returns (rank, indices of input rows that became pivots).  All
    intermediate entries stay integers; the division by the previous pivot
    is exact (Bareiss), asserted as such.  Among candidate pivot rows the
    one with the smallest original index wins, so the pivot set is canonical.
    """
    m = [list(r) for r in rows]
    idx = list(range(len(m)))
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    prev = 1
    pivots: list[int] = []
    for col in range(ncols):
        if rank == nrows:
            break
        candidates = [r for r in range(rank, nrows) if m[r][col] != 0]
        if not candidates:
            continue
        pr = min(candidates, key=lambda r: idx[r])
        m[rank], m[pr] = m[pr], m[rank]
        idx[rank], idx[pr] = idx[pr], idx[rank]
        pivot_row = m[rank]
        piv = pivot_row[col]
        for r in range(rank + 1, nrows):
            row = m[r]
            factor = row[col]
            for c in range(col, ncols):
                num = piv * row[c] - factor * pivot_row[c]
                q, rem = divmod(num, prev)
                assert rem == 0, "fraction-free elimination lost exactness"
                row[c] = q
        prev = piv
        pivots.append(idx[rank])
        rank += 1
    return rank, pivots


def kernel_rank_from_values(
    values: tuple[PadicVal, ...] | list[PadicVal],
    p: Prime,
    max_e: int,
    prefix_len: int,
) -> KernelRankEstimate:
    """Rank of the kernel-subsequence prefix matrix built from raw values."""
    if prefix_len < 1:
        raise ValueError("prefix_len must be >= 1")
    if max_e < 0:
        raise ValueError("max_e must be >= 0")
    deepest = p**max_e
    needed = deepest * (prefix_len - 1) + deepest - 1
    if needed > len(values) - 1:
        raise ValueError(
            f"table too short: need index {needed} for max_e={max_e}, prefix_len={prefix_len}"
        )
    rows: list[list[int]] = []
    labels: list[tuple[int, int]] = []
    dropped: list[tuple[int, int]] = []
    for e, i in _labels_up_to(p, max_e):
        pe = p**e
        picked = [values[pe * n + i] for n in range(prefix_len)]
        if any(v.is_infinite for v in picked):
            dropped.append((e, i))
            continue
        rows.append([v.value for v in picked])
        labels.append((e, i))
    rank, pivots = integer_matrix_rank(rows)
    basis = tuple(sorted(labels[r] for r in pivots))
    return KernelRankEstimate(prefix_len, max_e, rank, basis, tuple(dropped))


def estimate_kernel_rank(table: ValuationTable, max_e: int, prefix_len: int) -> KernelRankEstimate:
    """Rank over the rationals of the kernel subsequences of a table.

    Rows containing an infinite entry are excluded and reported in
    ``dropped``; rank of integer rows over Q equals their rank over Z's
    fraction field, so fraction-free elimination is exact here.
    """
    return kernel_rank_from_values(table.values, table.p, max_e, prefix_len)
