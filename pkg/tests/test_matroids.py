"""Matroid families: closure answers, derived primitives, and the axioms."""

import random
from fractions import Fraction

import pytest

from matroid_tverberg import (
    AffineMatroid,
    DirectSumMatroid,
    UniformMatroid,
    UnknownElement,
    VectorMatroidGFp,
    VectorMatroidRational,
    add_coloops,
    restrict_rank,
)
from matroid_tverberg.matroids import call_counting_enabled, set_call_counting

from conftest import family_zoo, gfp_matroid, triangle_graph


def test_gf2_membership_example(gf2_plane):
    # (1,1) is the sum of the two unit vectors.
    assert gf2_plane.in_closure("z", {"x", "y"})
    assert not gf2_plane.in_closure("y", {"x"})


def test_uniform_membership_example(u24):
    assert u24.in_closure("e2", {"e0", "e1"})
    assert not u24.in_closure("e2", {"e0"})
    assert u24.in_closure("e0", {"e0"})


def test_graphic_membership_example():
    tri = triangle_graph()
    assert tri.in_closure("e13", {"e12", "e23"})
    assert not tri.in_closure("e13", {"e12"})


def test_graphic_self_loop_is_loop():
    g = triangle_graph()
    from matroid_tverberg import GraphicMatroid

    g = GraphicMatroid(2, {"a": (0, 1), "l": (1, 1)})
    assert g.is_loop("l")
    assert not g.is_loop("a")
    assert g.rank_bound == 1


def test_rank_examples(gf2_plane, u24):
    assert gf2_plane.rank({"x", "y", "z"}) == 2
    assert u24.rank({"e0", "e1", "e2"}) == 2
    assert u24.rank(()) == 0
    assert gf2_plane.rank(()) == 0


def test_zero_vector_is_loop():
    m = VectorMatroidGFp(3, 2, {"o": (0, 0), "x": (1, 0)})
    assert m.is_loop("o")
    assert not m.is_loop("x")


def test_affine_has_no_loops():
    aff = AffineMatroid("rational", 1, {"p": (Fraction(0),), "q": (Fraction(1),)})
    assert not aff.is_loop("p")
    assert aff.rank_bound == 2
    # A point is in the affine hull of a single point only if equal.
    assert not aff.in_closure("q", {"p"})
    assert aff.in_closure("q", {"p", "q"})


def test_affine_gfp_three_collinear():
    # On the GF(3) affine line all three points are affinely dependent.
    aff = AffineMatroid(3, 1, {"p0": (0,), "p1": (1,), "p2": (2,)})
    assert aff.rank_bound == 2
    assert aff.in_closure("p2", {"p0", "p1"})


def test_coloop_example():
    base = UniformMatroid(1, 2)
    summed = add_coloops(base, 1)
    fresh = summed.ground[-1]
    assert summed.is_coloop(fresh)
    assert not summed.is_coloop("e0")


def test_add_coloops_identity():
    base = UniformMatroid(1, 2)
    assert add_coloops(base, 0) is base


def test_add_coloops_rank_via_oracle():
    # Rank of the extended ground set, measured through the oracle itself.
    base = VectorMatroidGFp(2, 1, {"x": (1,)})
    extended = add_coloops(base, 2)
    assert extended.rank(extended.ground) == 3
    assert extended.rank_bound == 3
    # Closure restricted to old elements is unchanged.
    assert extended.in_closure("x", {"x"})
    assert not extended.in_closure("x", set(extended.ground[1:]))


def test_add_coloops_avoids_id_collisions():
    base = UniformMatroid(1, 2, ids=("x1", "x2"))
    extended = add_coloops(base, 2)
    assert len(set(extended.ground)) == 4


def test_restrict_rank():
    m = gfp_matroid(3, 2, {"d": (2, 0)})
    view, rank = restrict_rank(m, {"b1", "d"})
    assert rank == 1  # both on the same line through the origin
    assert set(view.ground) == {"b1", "d"}
    assert view.rank_bound == 1
    view_all, rank_all = restrict_rank(m, m.ground)
    assert rank_all == m.rank_bound
    view_none, rank_none = restrict_rank(m, ())
    assert rank_none == 0


def test_restriction_flattens():
    m = gfp_matroid(2, 3)
    v1 = m.restrict({"b1", "b2"})
    v2 = v1.restrict({"b1"})
    assert v2.parent is m


def test_unknown_element_errors(gf2_plane):
    with pytest.raises(UnknownElement):
        gf2_plane.in_closure("nope", {"x"})
    with pytest.raises(UnknownElement):
        gf2_plane.in_closure("x", {"nope"})
    with pytest.raises(UnknownElement):
        gf2_plane.rank({"nope"})
    with pytest.raises(UnknownElement):
        gf2_plane.is_coloop("nope")


def test_direct_sum_requires_disjoint_ids():
    with pytest.raises(ValueError):
        DirectSumMatroid(UniformMatroid(1, 2), UniformMatroid(1, 2))


def test_direct_sum_componentwise():
    left = UniformMatroid(1, 2, ids=("l0", "l1"))
    right = UniformMatroid(2, 3, ids=("r0", "r1", "r2"))
    ds = DirectSumMatroid(left, right)
    assert ds.rank_bound == 3
    assert ds.in_closure("l1", {"l0"})
    assert not ds.in_closure("l1", {"r0", "r1", "r2"})
    assert ds.in_closure("r2", {"r0", "r1"})


def test_call_counting_and_disable(gf2_plane):
    before = gf2_plane.oracle_calls
    gf2_plane.in_closure("x", {"y"})
    gf2_plane.in_closure("x", {"y"})  # memo hit still counts as a query
    assert gf2_plane.oracle_calls == before + 2
    assert call_counting_enabled()
    set_call_counting(False)
    try:
        gf2_plane.in_closure("x", {"y"})
        assert gf2_plane.oracle_calls == before + 2
    finally:
        set_call_counting(True)


def test_restriction_counts_in_parent(gf2_plane):
    view = gf2_plane.restrict({"x", "y"})
    before = gf2_plane.oracle_calls
    view.in_closure("x", {"y"})
    assert gf2_plane.oracle_calls == before + 1
    assert view.oracle_calls == gf2_plane.oracle_calls


# ---------------------------------------------------------------------------
# Sampled axioms, across every family.


def _random_subset(rng, ground, max_size=None):
    limit = len(ground) if max_size is None else min(max_size, len(ground))
    k = rng.randrange(0, limit + 1)
    return frozenset(rng.sample(list(ground), k))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_closure_axioms_sampled(m):
    rng = random.Random(100 + m)
    for name, (matroid, _) in family_zoo(m).items():
        ground = matroid.ground
        for _ in range(20):
            y = _random_subset(rng, ground, 5)
            cl_y = matroid.closure(y)
            # extensivity
            assert y <= cl_y, name
            # idempotence
            assert matroid.closure(cl_y) == cl_y, name
            # monotonicity against a superset
            bigger = y | _random_subset(rng, ground, 3)
            assert cl_y <= matroid.closure(bigger), name


@pytest.mark.parametrize("m", [2, 3])
def test_exchange_property_sampled(m):
    rng = random.Random(200 + m)
    for name, (matroid, _) in family_zoo(m).items():
        ground = list(matroid.ground)
        for _ in range(30):
            y = _random_subset(rng, ground, 4)
            u = rng.choice(ground)
            x = rng.choice(ground)
            if matroid.in_closure(x, y | {u}) and not matroid.in_closure(x, y):
                assert matroid.in_closure(u, y | {x}), (name, y, u, x)


@pytest.mark.parametrize("m", [2, 3])
def test_closure_of_closure_union_law(m):
    # cl(B u C) = cl(B u cl C), tested by membership agreement on the ground.
    rng = random.Random(300 + m)
    for name, (matroid, _) in family_zoo(m).items():
        ground = matroid.ground
        for _ in range(10):
            b = _random_subset(rng, ground, 3)
            c = _random_subset(rng, ground, 3)
            lhs = matroid.closure(b | c)
            rhs = matroid.closure(b | matroid.closure(c))
            assert lhs == rhs, name


@pytest.mark.parametrize("m", [1, 2, 3])
def test_rank_is_monotone_submodular_bounded(m):
    rng = random.Random(400 + m)
    for name, (matroid, _) in family_zoo(m).items():
        ground = matroid.ground
        for _ in range(15):
            a = _random_subset(rng, ground, 4)
            b = _random_subset(rng, ground, 4)
            ra, rb = matroid.rank(a), matroid.rank(b)
            assert ra <= len(a) and ra <= matroid.rank_bound, name
            if a <= b:
                assert ra <= rb, name
            assert matroid.rank(a | b) + matroid.rank(a & b) <= ra + rb, name


def test_rank_bound_matches_greedy_rank():
    for m in (1, 2, 3):
        for name, (matroid, _) in family_zoo(m).items():
            assert matroid.rank(matroid.ground) == matroid.rank_bound == m, name


def test_rational_scaling_invariance():
    rng = random.Random(7)
    base = {"a": (1, 2), "b": (3, 4), "c": (2, 4), "d": (0, 1)}
    scaled = {k: tuple(Fraction(5, 3) * Fraction(c) for c in v) if k == "b" else v for k, v in base.items()}
    m1 = VectorMatroidRational(2, base)
    m2 = VectorMatroidRational(2, scaled)
    ids = list(base)
    for _ in range(40):
        x = rng.choice(ids)
        y = frozenset(rng.sample(ids, rng.randrange(0, 4)))
        assert m1.in_closure(x, y) == m2.in_closure(x, y)


def test_direct_sum_rank_additivity_sampled():
    rng = random.Random(9)
    left = gfp_matroid(2, 2)
    right = UniformMatroid(2, 3, ids=("u0", "u1", "u2"))
    ds = DirectSumMatroid(left, right)
    for _ in range(25):
        y = _random_subset(rng, ds.ground)
        expected = left.rank(y & left.ground_set) + right.rank(y & right.ground_set)
        assert ds.rank(y) == expected


def test_prime_validation():
    with pytest.raises(ValueError):
        VectorMatroidGFp(4, 1, {"x": (1,)})
    with pytest.raises(ValueError):
        VectorMatroidGFp(1, 1, {"x": (1,)})
