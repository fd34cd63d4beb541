"""Connected sums of Legendrian-simple knots as quotients of factor tuples.

A connected sum of prime summands is described by tuples of factor classes,
one per summand copy, taken modulo two moves:

1. moving one stabilization between two positions: replace a factor by one
   of its parents and stabilize any other factor with the same sign;
2. permuting factors that belong to the same knot type.

Both moves preserve the summed invariants

    tb = sum(tb_i) + (n - 1),        r = sum(r_i)

so the quotient is graded by (tb, r).  This module enumerates canonical
tuples, partitions them into equivalence classes with a union-find over the
moves, and assembles truncated windows of the quotient poset.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .errors import InvalidSummand, MultiplicityMismatch, WindowEmpty
from .poset import Edge, PosetNode, QuotientPoset
from .ranges import NEG, POS, MountainRange, SimpleClass, stabilize


@dataclass(frozen=True)
class Summand:
    knot_id: str
    count: int


@dataclass(frozen=True)
class SumSpec:
    """A formal connected sum: distinct prime summands with multiplicities.

    Summand order is significant only for canonical presentation; the sum
    itself is commutative.  Construction rejects invalid ranges, non-prime
    declarations, and repeated knot ids.
    """

    summands: tuple[Summand, ...]
    ranges: tuple[MountainRange, ...]

    def __post_init__(self) -> None:
        if not self.summands or len(self.summands) != len(self.ranges):
            raise InvalidSummand("spec needs matching summand and range lists")
        seen: set[str] = set()
        for s, rng in zip(self.summands, self.ranges):
            if s.count < 1:
                raise InvalidSummand(f"summand {s.knot_id} has multiplicity {s.count}")
            if s.knot_id != rng.knot_id:
                raise InvalidSummand(f"summand {s.knot_id} paired with range {rng.knot_id}")
            if s.knot_id in seen:
                raise InvalidSummand(f"summand {s.knot_id} repeated; use a multiplicity instead")
            seen.add(s.knot_id)
            if not rng.prime:
                raise InvalidSummand(f"summand {s.knot_id} is not declared prime")
            report = rng.validate()
            if not report.ok:
                raise InvalidSummand(
                    f"summand {s.knot_id} has an invalid range: "
                    + "; ".join(v.code for v in report.violations)
                )

    @classmethod
    def of(cls, parts: Sequence[tuple[MountainRange, int]]) -> "SumSpec":
        return cls(
            tuple(Summand(rng.knot_id, count) for rng, count in parts),
            tuple(rng for rng, _count in parts),
        )

    @property
    def n(self) -> int:
        """Total number of factors."""
        return sum(s.count for s in self.summands)

    @property
    def top_tb(self) -> int:
        """The largest tb in the quotient: all factors at maximal peaks."""
        return sum(s.count * rng.top_tb for s, rng in zip(self.summands, self.ranges)) + self.n - 1

    @property
    def point_parity(self) -> int:
        """Parity of tb + r shared by every point of the quotient."""
        p = sum(s.count * rng.parity for s, rng in zip(self.summands, self.ranges))
        return (p + self.n - 1) % 2

    def range_of(self, knot_id: str) -> MountainRange:
        for s, rng in zip(self.summands, self.ranges):
            if s.knot_id == knot_id:
                return rng
        raise KeyError(knot_id)

    def label(self) -> str:
        return "#".join(
            s.knot_id if s.count == 1 else f"{s.knot_id}^{s.count}"
            for s in self.summands
        )

    def factor_floor(self, tb_min: int, knot_id: str) -> int:
        """Least tb a factor of the given knot can have in a window tuple.

        Tuples at sum level tb_min have factor tb sum tb_min - (n - 1); one
        factor is smallest when every other factor sits at its top.
        """
        others = sum(
            s.count * rng.top_tb for s, rng in zip(self.summands, self.ranges)
        ) - self.range_of(knot_id).top_tb
        return tb_min - (self.n - 1) - others


@dataclass(frozen=True)
class TupleClass:
    """A canonical factor tuple: grouped by summand, each group ordered.

    The in-group order is descending tb, then ascending r; build these with
    :func:`canonicalize_tuple` rather than directly.
    """

    factors: tuple[SimpleClass, ...]

    def invariants(self) -> tuple[int, int]:
        tb = sum(f.tb for f in self.factors) + len(self.factors) - 1
        r = sum(f.r for f in self.factors)
        return (tb, r)

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        return tuple((-f.tb, f.r) for f in self.factors)

    def id_string(self) -> str:
        return "|".join(str(f) for f in self.factors)

    def __str__(self) -> str:
        return self.id_string()


def sum_invariants(t: TupleClass) -> tuple[int, int]:
    """Summed invariants of a factor tuple: (sum tb + n - 1, sum r)."""
    return t.invariants()


def _factor_key(f: SimpleClass) -> tuple[int, int]:
    return (-f.tb, f.r)


def canonicalize_tuple(spec: SumSpec, factors: Iterable[SimpleClass]) -> TupleClass:
    """Canonical form of a factor multiset for the given spec.

    Validates multiplicities and membership; groups factors by summand in
    spec order and sorts each group by descending tb, ascending r.
    """
    groups: dict[str, list[SimpleClass]] = {s.knot_id: [] for s in spec.summands}
    for f in factors:
        if f.knot_id not in groups:
            raise MultiplicityMismatch(f"factor knot {f.knot_id!r} is not a summand")
        groups[f.knot_id].append(f)
    ordered: list[SimpleClass] = []
    for s, rng in zip(spec.summands, spec.ranges):
        grp = groups[s.knot_id]
        if len(grp) != s.count:
            raise MultiplicityMismatch(
                f"summand {s.knot_id} needs {s.count} factors, got {len(grp)}"
            )
        for f in grp:
            rng.point(f.tb, f.r)  # raises NotAMember on junk input
        ordered.extend(sorted(grp, key=_factor_key))
    return TupleClass(tuple(ordered))


def relation_neighbors(spec: SumSpec, t: TupleClass) -> set[TupleClass]:
    """Tuples one move away: destabilize factor i, stabilize factor j, same sign.

    Every neighbor has the same summed invariants.  The tuple itself is not
    reported as its own neighbor.
    """
    out: set[TupleClass] = set()
    fs = t.factors
    for i, fi in enumerate(fs):
        rng_i = spec.range_of(fi.knot_id)
        for sign in (POS, NEG):
            parent = rng_i.destabilize(fi, sign)
            if parent is None:
                continue
            for j, fj in enumerate(fs):
                if j == i:
                    continue
                moved = list(fs)
                moved[i] = parent
                moved[j] = stabilize(fj, sign)
                out.add(canonicalize_tuple(spec, moved))
    out.discard(t)
    return out


# --- canonical tuple enumeration -----------------------------------------------


def _iter_group(rng: MountainRange, count: int, tb_sum: int) -> Iterator[tuple[SimpleClass, ...]]:
    """Canonically ordered factor groups of one summand with the given tb sum.

    Factors are non-increasing in (tb, -r); within the recursion each factor
    tb is at least ceil(budget / remaining) because later factors cannot
    exceed it.
    """
    top = rng.top_tb

    def rec(m: int, budget: int, prev: tuple[int, int] | None) -> Iterator[list[SimpleClass]]:
        if m == 0:
            if budget == 0:
                yield []
            return
        hi = min(top, prev[0]) if prev else top
        lo = -(-budget // m)
        for tb in range(hi, lo - 1, -1):
            for r in rng.level_points(tb):
                if prev and tb == prev[0] and r < prev[1]:
                    continue
                head = SimpleClass(rng.knot_id, tb, r)
                for tail in rec(m - 1, budget - tb, (tb, r)):
                    yield [head] + tail

    for grp in rec(count, tb_sum, None):
        yield tuple(grp)


def iter_canonical_tuples(spec: SumSpec, factor_tb_sum: int) -> Iterator[TupleClass]:
    """All canonical tuples whose factor tb values sum to the given total."""
    groups = [(rng, s.count) for rng, s in zip(spec.ranges, spec.summands)]
    gmax = [count * rng.top_tb for rng, count in groups]
    suffix = [0] * (len(groups) + 1)
    for i in range(len(groups) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + gmax[i]

    def rec(gi: int, remaining: int) -> Iterator[list[SimpleClass]]:
        rng, count = groups[gi]
        if gi == len(groups) - 1:
            for grp in _iter_group(rng, count, remaining):
                yield list(grp)
            return
        lo = remaining - suffix[gi + 1]
        for s in range(gmax[gi], lo - 1, -1):
            for grp in _iter_group(rng, count, s):
                head = list(grp)
                for tail in rec(gi + 1, remaining - s):
                    yield head + tail

    for fs in rec(0, factor_tb_sum):
        yield TupleClass(tuple(fs))


# --- equivalence classes ----------------------------------------------------------


@dataclass(frozen=True)
class EquivClass:
    """One equivalence class of tuples, members sorted, representative first."""

    members: tuple[TupleClass, ...]

    @property
    def representative(self) -> TupleClass:
        return self.members[0]

    @property
    def point(self) -> tuple[int, int]:
        return self.members[0].invariants()


def _partition(spec: SumSpec, tuples: Sequence[TupleClass]) -> list[EquivClass]:
    """Union-find partition of one fiber under the relation moves."""
    parent: dict[TupleClass, TupleClass] = {t: t for t in tuples}

    def find(x: TupleClass) -> TupleClass:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for t in tuples:
        for nb in relation_neighbors(spec, t):
            ra, rb = find(t), find(nb)
            if ra != rb:
                parent[ra] = rb
    groups: dict[TupleClass, list[TupleClass]] = {}
    for t in tuples:
        groups.setdefault(find(t), []).append(t)
    classes = [
        EquivClass(tuple(sorted(g, key=TupleClass.sort_key))) for g in groups.values()
    ]
    classes.sort(key=lambda c: c.representative.sort_key())
    return classes


def enumerate_fiber(spec: SumSpec, tb: int, r: int) -> list[EquivClass]:
    """All equivalence classes with summed invariants exactly (tb, r)."""
    tuples = [
        t
        for t in iter_canonical_tuples(spec, tb - (spec.n - 1))
        if t.invariants()[1] == r
    ]
    return _partition(spec, tuples)


def peaks_of_sum(spec: SumSpec) -> list[TupleClass]:
    """Canonical all-peak tuples; these are exactly the quotient's peaks."""

    def group_choices(rng: MountainRange, count: int) -> list[tuple[SimpleClass, ...]]:
        pts = sorted(rng.peaks, key=lambda p: (-p.tb, p.r))
        choices = []
        for combo in combinations_with_replacement(pts, count):
            choices.append(tuple(SimpleClass(rng.knot_id, p.tb, p.r) for p in combo))
        return choices

    out: list[TupleClass] = [TupleClass(())]
    for s, rng in zip(spec.summands, spec.ranges):
        out = [
            TupleClass(t.factors + grp)
            for t in out
            for grp in group_choices(rng, s.count)
        ]
    out.sort(key=TupleClass.sort_key)
    return out


# --- quotient windows ----------------------------------------------------------------


def build_quotient(spec: SumSpec, tb_min: int, workers: int = 0) -> QuotientPoset:
    """The window of the quotient poset from its top level down to tb_min.

    Nodes are equivalence classes keyed by their representative; edges are
    the signed stabilization steps between classes.  ``workers`` > 1 runs
    the per-fiber partitioning on a thread pool; results are identical to
    the serial order.
    """
    top = spec.top_tb
    if tb_min > top:
        raise WindowEmpty(f"window floor {tb_min} lies above the top level {top}")
    n = spec.n
    buckets: dict[tuple[int, int], list[TupleClass]] = {}
    for tb in range(top, tb_min - 1, -1):
        for t in iter_canonical_tuples(spec, tb - (n - 1)):
            buckets.setdefault(t.invariants(), []).append(t)
    order = sorted(buckets, key=lambda pt: (-pt[0], pt[1]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda pt: _partition(spec, buckets[pt]), order))
    else:
        parts = [_partition(spec, buckets[pt]) for pt in order]

    nodes: list[PosetNode] = []
    locate: dict[TupleClass, str] = {}
    for pt, classes in zip(order, parts):
        for c in classes:
            key = c.representative.id_string()
            nodes.append(PosetNode(key, pt[0], pt[1], members=c.members))
            for t in c.members:
                locate[t] = key
    edges: list[Edge] = []
    for node in nodes:
        if node.tb <= tb_min:
            continue
        rep: TupleClass = node.members[0]
        for sign in (POS, NEG):
            moved = (stabilize(rep.factors[0], sign),) + rep.factors[1:]
            child = canonicalize_tuple(spec, moved)
            edges.append(Edge(node.key, sign, locate[child]))
    return QuotientPoset(nodes, edges, tb_min, top, spec=spec, top_is_global=True)
