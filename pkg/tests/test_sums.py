from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import legsum as L

from oracles import bfs_members, fiber_signatures


def fiber_as_signatures(classes: list[L.EquivClass]) -> set[frozenset[str]]:
    return {frozenset(m.id_string() for m in c.members) for c in classes}


def oracle_signatures(spec: L.SumSpec, tb: int, r: int) -> set[frozenset[str]]:
    slot_knots: list[str] = []
    for s in spec.summands:
        slot_knots.extend([s.knot_id] * s.count)
    tops = {rng.knot_id: rng.top_tb for rng in spec.ranges}
    factor_tb = tb - (spec.n - 1)
    members = {}
    for rng in spec.ranges:
        floor = factor_tb - sum(
            tops[k] for i, k in enumerate(slot_knots) if k != rng.knot_id
        ) - tops[rng.knot_id] * (slot_knots.count(rng.knot_id) - 1)
        members[rng.knot_id] = bfs_members([(p.tb, p.r) for p in rng.peaks], floor)
    return fiber_signatures(slot_knots, members, tops, tb, r)


# --- spec construction ---------------------------------------------------------------


def test_spec_construction(A, B):
    spec = L.SumSpec.of([(A, 2), (B, 1)])
    assert spec.n == 3
    assert spec.label() == "A^2#B"
    assert spec.top_tb == 0 + 0 + 0 + 2
    assert spec.point_parity == (0 + 0 + 0 + 2) % 2
    assert spec.range_of("B") is B
    with pytest.raises(KeyError):
        spec.range_of("nope")


def test_spec_rejects_bad_input(A, B):
    with pytest.raises(L.InvalidSummand):
        L.SumSpec.of([])
    with pytest.raises(L.InvalidSummand):
        L.SumSpec.of([(A, 0)])
    with pytest.raises(L.InvalidSummand):
        L.SumSpec.of([(A, 1), (A, 2)])  # repeated id
    with pytest.raises(L.InvalidSummand):
        L.SumSpec.of([(L.make_range("N", [(0, 0)], prime=False), 1)])
    with pytest.raises(L.InvalidSummand):
        L.SumSpec.of([(L.make_range("X", [(0, 2), (0, -2)]), 1)])  # invalid range
    with pytest.raises(L.InvalidSummand):
        L.SumSpec((L.Summand("Y", 1),), (A,))  # id mismatch


def test_factor_floor(A, B, C):
    spec = L.SumSpec.of([(B, 2)])
    assert spec.factor_floor(-2, "B") == -3
    two = L.SumSpec.of([(A, 1), (C, 1)])
    assert two.factor_floor(-2, "A") == -4
    assert two.factor_floor(-2, "C") == -3


# --- sum invariants -----------------------------------------------------------------


def test_sum_invariants_frozen(A, B, C):
    t = L.TupleClass((L.SimpleClass("B", -1, -3), L.SimpleClass("B", -1, 3)))
    assert L.sum_invariants(t) == (-1, 0)
    single = L.TupleClass((L.SimpleClass("C", 1, 0),))
    assert L.sum_invariants(single) == (1, 0)
    triple = L.TupleClass(
        (
            L.SimpleClass("A", 0, -2),
            L.SimpleClass("A", 0, 2),
            L.SimpleClass("C", 1, 0),
        )
    )
    assert L.sum_invariants(triple) == (3, 0)


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=4))
def test_sum_invariants_additive(pts):
    t = L.TupleClass(tuple(L.SimpleClass("K", tb, r) for tb, r in pts))
    tb, r = L.sum_invariants(t)
    assert tb == sum(p[0] for p in pts) + len(pts) - 1
    assert r == sum(p[1] for p in pts)


# --- canonicalization ---------------------------------------------------------------


def test_canonicalize_frozen(A, C):
    spec = L.SumSpec.of([(A, 2)])
    got = L.canonicalize_tuple(spec, [A.point(-1, 1), A.point(0, -2)])
    assert got.id_string() == "A(0,-2)|A(-1,1)"
    assert L.canonicalize_tuple(spec, got.factors) == got  # idempotent
    mixed = L.SumSpec.of([(A, 1), (C, 1)])
    one = L.canonicalize_tuple(mixed, [C.point(1, 0), A.point(0, 2)])
    two = L.canonicalize_tuple(mixed, [A.point(0, 2), C.point(1, 0)])
    assert one == two
    assert one.id_string() == "A(0,2)|C(1,0)"


def test_canonicalize_orders_equal_tb_by_ascending_r(A):
    spec = L.SumSpec.of([(A, 2)])
    got = L.canonicalize_tuple(spec, [A.point(-1, 1), A.point(-1, -1)])
    assert got.id_string() == "A(-1,-1)|A(-1,1)"


def test_canonicalize_rejects_mismatches(A, B):
    spec = L.SumSpec.of([(A, 2)])
    with pytest.raises(L.MultiplicityMismatch):
        L.canonicalize_tuple(spec, [A.point(0, 2)])
    with pytest.raises(L.MultiplicityMismatch):
        L.canonicalize_tuple(spec, [A.point(0, 2), L.SimpleClass("B", 0, 0)])
    with pytest.raises(L.NotAMember):
        L.canonicalize_tuple(spec, [L.SimpleClass("A", 0, 0), A.point(0, 2)])


@given(st.data())
def test_canonicalize_permutation_invariant(cat, data):
    A, B = cat["A"], cat["B"]
    spec = L.SumSpec.of([(A, 2), (B, 1)])
    pool_a = [(tb, r) for tb in range(-4, 1) for r in A.level_points(tb)]
    pool_b = [(tb, r) for tb in range(-4, 1) for r in B.level_points(tb)]
    pa = data.draw(st.lists(st.sampled_from(pool_a), min_size=2, max_size=2))
    pb = data.draw(st.sampled_from(pool_b))
    factors = [L.SimpleClass("A", *pa[0]), L.SimpleClass("A", *pa[1]), L.SimpleClass("B", *pb)]
    perm = data.draw(st.permutations(factors))
    assert L.canonicalize_tuple(spec, perm) == L.canonicalize_tuple(spec, factors)


# --- relation neighbors ---------------------------------------------------------------


def test_relation_neighbors_frozen(A):
    spec = L.SumSpec.of([(A, 2)])
    t = L.canonicalize_tuple(spec, [A.point(-1, -1), A.point(0, 2)])
    nbs = {n.id_string() for n in L.relation_neighbors(spec, t)}
    assert nbs == {"A(0,-2)|A(-1,3)"}

    v = L.canonicalize_tuple(spec, [A.point(-2, 0), A.point(0, 2)])
    nbs2 = {n.id_string() for n in L.relation_neighbors(spec, v)}
    assert nbs2 == {"A(-1,-1)|A(-1,3)", "A(-1,1)|A(-1,1)"}


def test_relation_neighbors_single_factor(C):
    spec = L.SumSpec.of([(C, 1)])
    t = L.canonicalize_tuple(spec, [C.point(0, 1)])
    assert L.relation_neighbors(spec, t) == set()


@given(st.data())
def test_relation_neighbors_preserve_invariants(cat, data):
    A, B = cat["A"], cat["B"]
    spec = L.SumSpec.of([(A, 1), (B, 1)])
    pool_a = [(tb, r) for tb in range(-4, 1) for r in A.level_points(tb)]
    pool_b = [(tb, r) for tb in range(-4, 1) for r in B.level_points(tb)]
    fa = data.draw(st.sampled_from(pool_a))
    fb = data.draw(st.sampled_from(pool_b))
    t = L.canonicalize_tuple(spec, [L.SimpleClass("A", *fa), L.SimpleClass("B", *fb)])
    for nb in L.relation_neighbors(spec, t):
        assert nb.invariants() == t.invariants()
        assert nb != t


# --- canonical tuple enumeration ------------------------------------------------------


def brute_canonical_tuples(spec: L.SumSpec, factor_tb_sum: int) -> set[L.TupleClass]:
    per_slot: list[list[L.SimpleClass]] = []
    for s, rng in zip(spec.summands, spec.ranges):
        floor = spec.factor_floor(factor_tb_sum + spec.n - 1, s.knot_id)
        pts = [
            L.SimpleClass(s.knot_id, tb, r)
            for tb in range(rng.top_tb, floor - 1, -1)
            for r in rng.level_points(tb)
        ]
        per_slot.extend([pts] * s.count)
    out = set()
    for combo in itertools.product(*per_slot):
        if sum(f.tb for f in combo) == factor_tb_sum:
            out.add(L.canonicalize_tuple(spec, combo))
    return out


def test_iter_canonical_tuples_matches_brute_force(A, B, C):
    for spec in (
        L.SumSpec.of([(A, 2)]),
        L.SumSpec.of([(B, 2)]),
        L.SumSpec.of([(A, 1), (C, 1)]),
        L.SumSpec.of([(A, 2), (C, 1)]),
    ):
        for depth in range(0, 4):
            budget = spec.top_tb - depth - (spec.n - 1)
            got = list(L.iter_canonical_tuples(spec, budget))
            assert len(got) == len(set(got)), "duplicates yielded"
            for t in got:
                assert L.canonicalize_tuple(spec, t.factors) == t
                assert sum(f.tb for f in t.factors) == budget
            assert set(got) == brute_canonical_tuples(spec, budget), (
                spec.label(),
                depth,
            )


# --- fibers ----------------------------------------------------------------------------


def test_fiber_B2_top_frozen(B):
    spec = L.SumSpec.of([(B, 2)])
    classes = L.enumerate_fiber(spec, 1, 0)
    assert [c.representative.id_string() for c in classes] == [
        "B(0,-4)|B(0,4)",
        "B(0,0)|B(0,0)",
    ]
    assert [len(c.members) for c in classes] == [1, 1]


def test_fiber_B2_one_below_frozen(B):
    spec = L.SumSpec.of([(B, 2)])
    classes = L.enumerate_fiber(spec, 0, 1)
    assert len(classes) == 2
    assert sorted(len(c.members) for c in classes) == [1, 2]


def test_fiber_B2_witness_pair_distinct(B):
    spec = L.SumSpec.of([(B, 2)])
    classes = L.enumerate_fiber(spec, -1, 0)
    assert len(classes) >= 2
    ids = [frozenset(m.id_string() for m in c.members) for c in classes]
    outer = [s for s in ids if "B(-1,-3)|B(-1,3)" in s]
    inner = [s for s in ids if "B(-1,-1)|B(-1,1)" in s]
    assert len(outer) == 1 and len(inner) == 1
    assert outer[0] != inner[0]


def test_fiber_A_C_always_single(A, C):
    spec = L.SumSpec.of([(A, 1), (C, 1)])
    for tb in range(spec.top_tb, spec.top_tb - 5, -1):
        for r in range(-8, 9):
            classes = L.enumerate_fiber(spec, tb, r)
            assert len(classes) <= 1


def test_fiber_empty_point(A):
    spec = L.SumSpec.of([(A, 2)])
    assert L.enumerate_fiber(spec, 1, 1) == []  # wrong parity
    assert L.enumerate_fiber(spec, 2, 0) == []  # above the top


def test_fibers_match_adjacent_generator_oracle(cat):
    A, B, C, U1 = cat["A"], cat["B"], cat["C"], cat["U1"]
    probes = [
        (L.SumSpec.of([(A, 2)]), 4),
        (L.SumSpec.of([(B, 2)]), 4),
        (L.SumSpec.of([(A, 1), (B, 1)]), 4),
        (L.SumSpec.of([(A, 1), (C, 1)]), 4),
        (L.SumSpec.of([(U1, 1), (A, 1), (B, 1)]), 3),
        (L.SumSpec.of([(A, 2), (B, 1)]), 3),
    ]
    for spec, depth in probes:
        for tb in range(spec.top_tb, spec.top_tb - depth - 1, -1):
            rs = sorted(
                {
                    L.sum_invariants(t)[1]
                    for t in L.iter_canonical_tuples(spec, tb - (spec.n - 1))
                }
            )
            for r in rs:
                lib = fiber_as_signatures(L.enumerate_fiber(spec, tb, r))
                assert lib == oracle_signatures(spec, tb, r), (spec.label(), tb, r)


# --- peaks of the sum --------------------------------------------------------------------


def test_peaks_of_sum_frozen(A, B):
    spec = L.SumSpec.of([(A, 2)])
    peaks = L.peaks_of_sum(spec)
    assert [t.invariants() for t in peaks] == [(1, -4), (1, 0), (1, 4)]
    assert len(L.peaks_of_sum(L.SumSpec.of([(B, 2)]))) == 6
    assert len(L.peaks_of_sum(L.SumSpec.of([(A, 1), (B, 1)]))) == 6


def test_peak_tuples_are_singleton_classes(B):
    spec = L.SumSpec.of([(B, 2)])
    for t in L.peaks_of_sum(spec):
        tb, r = t.invariants()
        classes = L.enumerate_fiber(spec, tb, r)
        match = [c for c in classes if t in c.members]
        assert len(match) == 1
        assert match[0].members == (t,)


# --- quotient windows -----------------------------------------------------------------


def test_build_quotient_single_peak(C):
    poset = L.build_quotient(L.SumSpec.of([(C, 1)]), -1)
    assert len(poset) == 6
    assert all(node.size == 1 for node in poset)
    assert sorted(node.point for node in poset) == [
        (-1, -2),
        (-1, 0),
        (-1, 2),
        (0, -1),
        (0, 1),
        (1, 0),
    ]


def test_build_quotient_n1_matches_range(A):
    poset = L.build_quotient(L.SumSpec.of([(A, 1)]), -4)
    for tb in range(0, -5, -1):
        level = sorted(node.r for node in poset if node.tb == tb)
        assert level == A.level_points(tb)
    assert all(node.size == 1 for node in poset)


def test_build_quotient_windows_frozen(A, B):
    a2 = L.build_quotient(L.SumSpec.of([(A, 2)]), -3)
    assert all(a2.fiber_size(node.tb, node.r) == 1 for node in a2)
    b2 = L.build_quotient(L.SumSpec.of([(B, 2)]), -2)
    assert len(b2) == 42
    assert max(node.size for node in b2) >= 2
    assert b2.fiber_size(1, 0) == 2


def test_build_quotient_empty_window(A):
    with pytest.raises(L.WindowEmpty):
        L.build_quotient(L.SumSpec.of([(A, 2)]), 2)


def test_build_quotient_edges_and_structure(cat):
    A, B = cat["A"], cat["B"]
    for spec in (L.SumSpec.of([(A, 2)]), L.SumSpec.of([(B, 2)])):
        poset = L.build_quotient(spec, spec.top_tb - 3)
        assert L.structure_violations(poset) == []
        for node in poset:
            assert node.point == node.members[0].invariants()
            if node.tb > poset.tb_min:
                for sign in ("+", "-"):
                    kids = poset.children(node.key, sign)
                    assert len(kids) == 1
                    child = poset.node(kids[0])
                    assert child.tb == node.tb - 1
                    assert child.r == node.r + (1 if sign == "+" else -1)


def test_workers_agree(B):
    spec = L.SumSpec.of([(B, 2)])
    serial = L.build_quotient(spec, -2, workers=1)
    threaded = L.build_quotient(spec, -2, workers=3)
    assert [(n.key, n.point, n.size) for n in serial] == [
        (n.key, n.point, n.size) for n in threaded
    ]
    assert L.dump_json(L.to_jsonable(serial)) == L.dump_json(L.to_jsonable(threaded))


def test_fiber_sizes_translation_invariant(A, B):
    base = L.SumSpec.of([(A, 1), (B, 1)])
    moved_rng = L.make_range("A", [(p.tb, p.r + 2) for p in A.peaks])
    moved = L.SumSpec.of([(moved_rng, 1), (B, 1)])
    p1 = L.build_quotient(base, base.top_tb - 4)
    p2 = L.build_quotient(moved, moved.top_tb - 4)
    sizes1 = sorted((n.tb, n.r, n.size) for n in p1)
    sizes2 = sorted((n.tb, n.r - 2, n.size) for n in p2)
    assert sizes1 == sizes2
