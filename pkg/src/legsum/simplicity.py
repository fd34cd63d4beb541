"""Deciding Legendrian simplicity of connected sums.

Two independent routes are provided and deliberately kept apart:

* :func:`criterion` evaluates the closed-form classification on the shape
  of the summands alone (how many peaks each has, with what multiplicity);
  its verdict is global.
* :func:`simplicity_in_window` decides by brute force whether any (tb, r)
  point in a truncated window carries two distinct classes; its verdict is
  about the window only.

For sums that are not simple, :func:`nonsimplicity_witness` builds the
explicit colliding pair: two tuples assembled from valley parents that share
their invariants but are not related by any sequence of transfer moves.

For powers of a single two-peak knot every class has a normal form
``(a, b, p, q)``: a positive and b negative stabilizations applied to the
sum of p copies of the left peak and q copies of the right one.  The pair
of diagonal coordinates (X, Y) determines the class, and
:func:`canonical_form` picks the minimal-q representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LegsumError, NotApplicable, WrongPeakCount
from .poset import find_nmax
from .ranges import NEG, POS, MountainRange, SimpleClass
from .sums import SumSpec, TupleClass, build_quotient, canonicalize_tuple

CASE_ONE_PEAK = "all-one-peak"
CASE_TWO_PEAK = "one-two-peak-with-multiplicity>=2"
CASE_BIG_PEAK = "one-big-peak-multiplicity-1"
CASE_NONE = "none"


@dataclass(frozen=True)
class CriterionVerdict:
    """Global verdict of the shape criterion.

    ``peak_counts`` lists (knot_id, multiplicity, peak count) per summand.
    """

    simple: bool
    matched_case: str
    peak_counts: tuple[tuple[str, int, int], ...]


def criterion(spec: SumSpec) -> CriterionVerdict:
    """Classify a sum by its summand peak counts.

    The sum is simple exactly when at most one summand has several peaks,
    and that summand either has exactly two peaks, or occurs only once.
    """
    counts = tuple(
        (s.knot_id, s.count, rng.peak_count)
        for s, rng in zip(spec.summands, spec.ranges)
    )
    multi = [(count, peaks) for _id, count, peaks in counts if peaks >= 2]
    if not multi:
        return CriterionVerdict(True, CASE_ONE_PEAK, counts)
    if len(multi) == 1:
        count, peaks = multi[0]
        if count == 1:
            return CriterionVerdict(True, CASE_BIG_PEAK, counts)
        if peaks == 2:
            return CriterionVerdict(True, CASE_TWO_PEAK, counts)
    return CriterionVerdict(False, CASE_NONE, counts)


@dataclass(frozen=True)
class WitnessPair:
    """Two tuples with equal invariants lying in distinct classes."""

    point: tuple[int, int]
    tuple_a: TupleClass
    tuple_b: TupleClass


@dataclass(frozen=True)
class WindowVerdict:
    """Result of the brute-force window oracle."""

    simple_in_window: bool
    tb_min: int
    top_tb: int
    witness: WitnessPair | None


def simplicity_in_window(spec: SumSpec, tb_min: int, workers: int = 0) -> WindowVerdict:
    """Check fiber sizes across the whole window.

    When some point carries two classes, the reported witness sits at a
    maximal nonsimple point (every strict ancestor class is alone at its
    point) and names the first two class representatives there.
    """
    poset = build_quotient(spec, tb_min, workers=workers)
    candidates = find_nmax(poset)
    if not candidates:
        return WindowVerdict(True, tb_min, poset.top_tb, None)
    pt = candidates[0]
    first, second = poset.fiber(*pt)[:2]
    witness = WitnessPair(pt, first.members[0], second.members[0])
    return WindowVerdict(False, tb_min, poset.top_tb, witness)


def _valley_parents(rng: MountainRange, which: int) -> tuple[SimpleClass, SimpleClass]:
    """(left, right) parents of the given valley of a range."""
    v = rng.valleys()[which]
    left = rng.destabilize(SimpleClass(rng.knot_id, v.tb, v.r), POS)
    right = rng.destabilize(SimpleClass(rng.knot_id, v.tb, v.r), NEG)
    assert left is not None and right is not None
    return left, right


def nonsimplicity_witness(spec: SumSpec) -> WitnessPair:
    """The explicit colliding pair behind a negative criterion verdict.

    With two multi-peak summands, one valley of each is split: tuple A takes
    the left parent of the first valley and the right parent of the second,
    tuple B the other diagonal.  With a single multi-peak summand (several
    peaks, several copies) its first two valleys play those roles.  All
    remaining positions are filled with a fixed maximal peak of their knot.
    """
    if criterion(spec).simple:
        raise NotApplicable("the sum is simple; no witness exists")
    multi = [
        (s, rng) for s, rng in zip(spec.summands, spec.ranges) if rng.peak_count >= 2
    ]

    factors_a: list[SimpleClass] = []
    factors_b: list[SimpleClass] = []

    def fill(rng: MountainRange, count: int) -> None:
        p = rng.max_peak()
        for _ in range(count):
            cls = SimpleClass(rng.knot_id, p.tb, p.r)
            factors_a.append(cls)
            factors_b.append(cls)

    if len(multi) >= 2:
        (s1, rng1), (s2, rng2) = multi[0], multi[1]
        l1, r1 = _valley_parents(rng1, 0)
        l2, r2 = _valley_parents(rng2, 0)
        factors_a += [l1, r2]
        factors_b += [r1, l2]
        fill(rng1, s1.count - 1)
        fill(rng2, s2.count - 1)
        used = {s1.knot_id, s2.knot_id}
        for s, rng in zip(spec.summands, spec.ranges):
            if s.knot_id not in used:
                fill(rng, s.count)
    else:
        s1, rng1 = multi[0]
        l1, r1 = _valley_parents(rng1, 0)
        l2, r2 = _valley_parents(rng1, 1)
        factors_a += [l1, r2]
        factors_b += [r1, l2]
        fill(rng1, s1.count - 2)
        for s, rng in zip(spec.summands, spec.ranges):
            if s.knot_id != s1.knot_id:
                fill(rng, s.count)

    tuple_a = canonicalize_tuple(spec, factors_a)
    tuple_b = canonicalize_tuple(spec, factors_b)
    return WitnessPair(tuple_a.invariants(), tuple_a, tuple_b)


# --- two-peak powers: normal forms and diagonal coordinates ---------------------


@dataclass(frozen=True)
class CanonicalForm:
    """S+^a S-^b applied to p copies of the left peak and q of the right."""

    a: int
    b: int
    p: int
    q: int


@dataclass(frozen=True)
class XYInvariants:
    x: int
    y: int


def _two_peak_data(rng: MountainRange):
    rng.require_valid()
    if rng.peak_count != 2:
        raise WrongPeakCount(
            f"{rng.knot_id} has {rng.peak_count} peaks; this needs exactly 2"
        )
    p1, p2 = rng.peaks
    v = rng.valleys()[0]
    return p1, p2, v


def xy_invariants(rng: MountainRange, n: int, tb: int, r: int) -> XYInvariants:
    """Diagonal coordinates of a point of the n-fold self-sum.

    X counts right-slope steps and Y left-slope steps relative to the sum of
    n valleys; they are invariant across all (a, b, p, q) representations:
    X = q*(r(P2) - r(V)) - b and Y = p*(r(P1) - r(V)) + a.
    """
    _p1, _p2, v = _two_peak_data(rng)
    if n < 1:
        raise LegsumError(f"n must be at least 1, got {n}")
    sx = (tb + r) - n * (v.tb + v.r) - (n - 1)
    sy = (tb - r) - n * (v.tb - v.r) - (n - 1)
    if sx % 2 or sy % 2:
        raise LegsumError(
            f"({tb},{r}) has the wrong parity for the {n}-fold sum of {rng.knot_id}"
        )
    return XYInvariants(sx // 2, -(sy // 2))


def canonical_form(rng: MountainRange, n: int, tb: int, r: int) -> CanonicalForm | None:
    """Minimal-q normal form of a point of the n-fold self-sum, if it is one.

    Returns None when (tb, r) is not a member point (including parity
    obstructions).
    """
    p1, p2, v = _two_peak_data(rng)
    if n < 1:
        raise LegsumError(f"n must be at least 1, got {n}")
    try:
        inv = xy_invariants(rng, n, tb, r)
    except LegsumError:
        return None
    r1 = p1.r - v.r  # negative: left peak sits left of the valley
    r2 = p2.r - v.r  # positive
    q = max(0, -(-inv.x // r2))
    if q > n:
        return None
    p = n - q
    b = q * r2 - inv.x
    a = inv.y - p * r1
    if a < 0 or b < 0:
        return None
    return CanonicalForm(a, b, p, q)


def form_point(rng: MountainRange, n: int, form: CanonicalForm) -> tuple[int, int]:
    """The (tb, r) invariants of a normal form of the n-fold self-sum."""
    p1, p2, _v = _two_peak_data(rng)
    if form.p + form.q != n or min(form.a, form.b, form.p, form.q) < 0:
        raise LegsumError(f"{form} is not a normal form for n={n}")
    tb = form.p * p1.tb + form.q * p2.tb + (n - 1) - form.a - form.b
    r = form.p * p1.r + form.q * p2.r + form.a - form.b
    return (tb, r)


def form_tuple(rng: MountainRange, n: int, form: CanonicalForm) -> TupleClass:
    """A concrete factor tuple realizing a normal form.

    All stabilizations are applied to the first factor; any other placement
    is a transfer move away, hence in the same class.
    """
    p1, p2, _v = _two_peak_data(rng)
    peaks = [p1] * form.p + [p2] * form.q
    factors = [SimpleClass(rng.knot_id, p.tb, p.r) for p in peaks]
    first = factors[0]
    factors[0] = SimpleClass(
        rng.knot_id,
        first.tb - form.a - form.b,
        first.r + form.a - form.b,
    )
    spec = SumSpec.of([(rng, n)])
    return canonicalize_tuple(spec, factors)


def peak_count_formula(spec: SumSpec) -> int:
    """Number of quotient peaks: a product of multiset coefficients."""
    out = 1
    for s, rng in zip(spec.summands, spec.ranges):
        out *= math.comb(rng.peak_count + s.count - 1, s.count)
    return out
