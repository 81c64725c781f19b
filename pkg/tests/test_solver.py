"""The constructive solvers and the independent partition verifier."""

import pytest

from matroid_tverberg import (
    AffineMatroid,
    Coloring,
    IndexedSequence,
    LoopInInput,
    PreconditionViolated,
    SeedInvalid,
    SolveStats,
    UniformMatroid,
    VectorMatroidGFp,
    brute_force_solve,
    max_rainbow_independent,
    solve_general,
    solve_noncolor,
    solve_special,
    verify_partition,
)

from conftest import gfp_matroid


def seq_of(elements):
    return IndexedSequence.from_elements(elements)


def coloring_of(colors):
    return Coloring({i: c for i, c in enumerate(colors)})


# ---------------------------------------------------------------------------
# solve_special


def test_rank_one_base_case_three_parallel_copies():
    m = VectorMatroidGFp(2, 1, {"p1": (1,), "p2": (1,), "p3": (1,)})
    s = seq_of(["p1", "p2", "p3"])
    c = coloring_of(["red", "red", "red"])
    part = solve_special(m, s, c, 3)
    assert part.part_indices() == ((0,), (1,), (2,))
    assert verify_partition(m, s, c, 3, part.parts).ok


def test_golden_gf3_example():
    m = VectorMatroidGFp(3, 2, {"a": (1, 0), "b": (2, 0), "c": (0, 1)})
    s = seq_of(["a", "b", "c"])
    c = coloring_of(["c1", "c1", "c2"])
    part = solve_special(m, s, c, 2)
    # Deterministic tie-breaks pin the exact output.
    assert part.part_indices() == ((1,), (0, 2))
    assert verify_partition(m, s, c, 2, part.parts).ok
    # Brute force confirms a valid partition exists at all.
    assert brute_force_solve(m, s, c, 2) is not None


def test_special_profile_violation_raises():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b2"])
    c = coloring_of(["u", "v"])
    with pytest.raises(PreconditionViolated):
        solve_special(m, s, c, 2)  # needs 2 of the first color, 1 of the other


def test_special_rejects_loops():
    m = VectorMatroidGFp(2, 2, {"o": (0, 0), "x": (1, 0), "y": (0, 1)})
    s = seq_of(["o", "x", "y"])
    c = coloring_of(["u", "u", "v"])
    with pytest.raises(LoopInInput):
        solve_special(m, s, c, 2)


def test_special_multi_round_normalization():
    # Colors A, A, B on one line, C on another: rank(S) = 2 but the top two
    # color classes only span rank 1, so normalization must iterate.
    m = VectorMatroidGFp(5, 3, {"a1": (1, 0, 0), "a2": (2, 0, 0), "b1": (3, 0, 0), "c1": (0, 1, 0)})
    s = seq_of(["a1", "a2", "b1", "c1"])
    c = coloring_of(["A", "A", "B", "C"])
    part = solve_special(m, s, c, 2)
    assert verify_partition(m, s, c, 2, part.parts).ok


def test_special_flat_recursion_case():
    # The greedy rainbow independent set picks g0 and g2 and cannot span.
    # The first cycle pass shrinks the free colors' span onto the line of
    # g0, the second pass finds every remaining candidate inside that flat
    # and recurses there with g0 and g1 merged into a fresh color.
    m = VectorMatroidGFp(2, 3, {
        "g0": (1, 0, 0), "g1": (1, 0, 0), "g2": (1, 0, 1), "g3": (0, 1, 0),
    })
    s = seq_of(["g0", "g1", "g2", "g3"])
    c = coloring_of(["c3", "c2", "c1", "c1"])
    stats = SolveStats()
    part = solve_special(m, s, c, 2, stats=stats)
    assert part.part_indices() == ((0,), (1,))
    assert verify_partition(m, s, c, 2, part.parts).ok
    labels = [label for _, label, _ in stats.events]
    assert labels == ["case_c", "case_a"]


def test_special_exchange_grows_ri():
    # g2 duplicates g0, so the greedy rainbow independent set stalls at
    # size two; the cycle first swaps the exchange rules (g3 escapes
    # cl(RI)) and the rebuilt RI spans.
    m = VectorMatroidGFp(2, 3, {
        "g0": (1, 1, 1), "g1": (0, 1, 1), "g2": (1, 1, 1), "g3": (0, 1, 0),
    })
    s = seq_of(["g0", "g1", "g2", "g3"])
    c = coloring_of(["c1", "c3", "c2", "c1"])
    stats = SolveStats()
    part = solve_special(m, s, c, 2, stats=stats)
    assert part.part_indices() == ((0,), (1, 2, 3))
    assert verify_partition(m, s, c, 2, part.parts).ok
    labels = [label for _, label, _ in stats.events]
    assert labels == ["case_c", "case_b", "spanning"]
    assert stats.restarts == 1


def test_special_chained_advances_compose_exchanges():
    # The cycle must advance its rules twice before an entry escapes
    # cl(RI), so the final exchange sequence is assembled from an earlier
    # one; the runtime rule checks vet each step.
    m = VectorMatroidGFp(2, 3, {
        "g0": (0, 1, 0), "g1": (1, 1, 0), "g2": (0, 0, 1),
        "g3": (1, 1, 0), "g4": (1, 0, 0),
    })
    s = seq_of(["g0", "g1", "g2", "g3", "g4"])
    c = coloring_of(["c1", "c2", "c1", "c3", "c2"])
    stats = SolveStats()
    part = solve_special(m, s, c, 2, stats=stats, check=True)
    assert part.part_indices() == ((0,), (2, 3, 4))
    assert verify_partition(m, s, c, 2, part.parts).ok
    labels = [label for _, label, _ in stats.events]
    assert labels == ["case_c", "case_c", "case_b", "spanning"]
    assert stats.invariant_checks >= 3


def test_stats_bounds_hold():
    # The exchange instance runs the cycle, so rule checks must have fired.
    m = VectorMatroidGFp(2, 3, {
        "g0": (1, 1, 1), "g1": (0, 1, 1), "g2": (1, 1, 1), "g3": (0, 1, 0),
    })
    s = seq_of(["g0", "g1", "g2", "g3"])
    c = coloring_of(["c1", "c3", "c2", "c1"])
    stats = SolveStats()
    part = solve_special(m, s, c, 2, stats=stats)
    assert verify_partition(m, s, c, 2, part.parts).ok
    assert 0 < stats.max_cycle_iterations <= 3
    assert stats.max_restarts_per_level <= 3
    assert stats.recursion_depth <= 2 + 3
    assert stats.oracle_calls > 0
    assert stats.invariant_checks > 0


# ---------------------------------------------------------------------------
# solve_general


def test_general_no_coloops_needed():
    # Number of colors equals the rank: the reduction only trims.
    m = gfp_matroid(2, 2, {"s": (1, 1)})
    s = seq_of(["b1", "b2", "s"])
    c = coloring_of(["u", "v", "u"])
    part = solve_general(m, s, c, 2)
    assert verify_partition(m, s, c, 2, part.parts).ok


def test_general_pads_and_strips_coloops():
    # Four colors over a rank-2 matroid: two coloops get adjoined, and the
    # answer must not contain padded entries.
    m = gfp_matroid(2, 2, {"s": (1, 1)})
    s = seq_of(["b1", "b2", "s"])
    c = coloring_of(["u", "v", "w"])
    part = solve_general(m, s, c, 2)
    assert verify_partition(m, s, c, 2, part.parts).ok
    for p in part.parts:
        assert p.indices <= s.indices


def test_general_trims_highest_indices():
    m = UniformMatroid(2, 4)
    s = seq_of(["e0", "e1", "e2", "e3", "e0", "e1"])
    c = coloring_of(["u", "v", "w", "x", "y", "z"])
    part = solve_general(m, s, c, 2)
    assert verify_partition(m, s, c, 2, part.parts).ok
    used = set()
    for p in part.parts:
        used |= p.indices
    assert used <= {0, 1, 2}  # m(r-1)+1 = 3 lowest indices survive the trim


def test_general_tight_length_rejected():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b1", "b2", "b2"])  # length m(r-1) for r = 3
    c = coloring_of(["u", "v", "u", "v"])
    with pytest.raises(PreconditionViolated):
        solve_general(m, s, c, 3)


def test_general_first_color_cap_enforced():
    # Real-line style: n reds and one blue admit no three parts, and the
    # count precondition rejects the instance up front.
    pts = {f"p{i}": (i,) for i in range(1, 6)}
    m = AffineMatroid("rational", 1, pts)
    s = seq_of(sorted(pts))
    c = coloring_of(["red", "red", "red", "red", "blue"])
    with pytest.raises(PreconditionViolated):
        solve_general(m, s, c, 3)


def test_general_r1_takes_single_entry():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b2", "b1"])
    c = coloring_of(["u", "u", "u"])
    part = solve_general(m, s, c, 1)
    assert part.part_indices() == ((0,),)


# ---------------------------------------------------------------------------
# solve_noncolor


def test_noncolor_r1():
    m = gfp_matroid(2, 2)
    part = solve_noncolor(m, seq_of(["b2", "b1"]), 1)
    assert part.part_indices() == ((0,),)


def test_noncolor_uniform_threshold():
    m = UniformMatroid(3, 7)
    s = seq_of([f"e{i}" for i in range(7)])  # m(r-1)+1 = 7 for r = 3
    part = solve_noncolor(m, s, 3)
    assert verify_partition(m, s, None, 3, part.parts).ok
    short = seq_of([f"e{i}" for i in range(6)])
    with pytest.raises(PreconditionViolated):
        solve_noncolor(m, short, 3)


def test_noncolor_rejects_loops():
    m = VectorMatroidGFp(2, 1, {"o": (0,), "x": (1,)})
    with pytest.raises(LoopInInput):
        solve_noncolor(m, seq_of(["o", "x"]), 1)


# ---------------------------------------------------------------------------
# verify_partition


def _valid_setup():
    m = gfp_matroid(2, 2, {"s": (1, 1)})
    s = seq_of(["b1", "b2", "s", "b1"])
    c = coloring_of(["u", "v", "w", "x"])
    parts = [s.with_indices({0}), s.with_indices({1, 2})]
    return m, s, c, parts


def test_verify_passes_on_valid_parts():
    m, s, c, parts = _valid_setup()
    assert verify_partition(m, s, c, 2, parts).ok


def test_verify_wrong_part_count():
    m, s, c, parts = _valid_setup()
    report = verify_partition(m, s, c, 3, parts)
    assert not report.ok and report.failure == "part_count"


def test_verify_shared_index_fails():
    m, s, c, _ = _valid_setup()
    parts = [s.with_indices({0}), s.with_indices({0, 1})]
    report = verify_partition(m, s, c, 2, parts)
    assert report.failure == "disjointness"


def test_verify_rainbow_violation():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b2", "b1"])
    c = coloring_of(["u", "u", "v"])
    parts = [s.with_indices({2}), s.with_indices({0, 1})]
    report = verify_partition(m, s, c, 2, parts)
    assert report.failure == "rainbow"


def test_verify_empty_first_part_fails_strictness():
    m, s, c, _ = _valid_setup()
    parts = [s.with_indices(()), s.with_indices({0, 1})]
    report = verify_partition(m, s, c, 2, parts)
    assert report.failure == "strictness"


def test_verify_chain_violation():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b2"])
    c = coloring_of(["u", "v"])
    parts = [s.with_indices({0}), s.with_indices({1})]
    report = verify_partition(m, s, c, 2, parts)
    assert report.failure == "chain"


def test_verify_foreign_entries_fail():
    m, s, c, _ = _valid_setup()
    other = seq_of(["b1", "b2", "s", "b1", "s"])
    parts = [other.with_indices({4}), other.with_indices({0, 1})]
    report = verify_partition(m, s, c, 2, parts)
    assert report.failure == "not_subsequence"


def test_verify_without_coloring_skips_rainbow():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b1", "b2"])
    parts = [s.with_indices({0}), s.with_indices({1, 2})]
    assert verify_partition(m, s, None, 2, parts).ok


# ---------------------------------------------------------------------------
# max_rainbow_independent


def test_mri_parallel_entries_single_pick():
    m = VectorMatroidGFp(2, 1, {"p1": (1,), "p2": (1,)})
    s = seq_of(["p1", "p2"])
    c = coloring_of(["u", "v"])
    ri = max_rainbow_independent(m, s, c)
    assert ri.entries == ((0, "p1"),)


def test_mri_takes_whole_basis():
    m = gfp_matroid(2, 3)
    s = seq_of(["b1", "b2", "b3"])
    c = coloring_of(["u", "v", "w"])
    ri = max_rainbow_independent(m, s, c)
    assert ri == s


def test_mri_seed_is_fixpoint():
    m = gfp_matroid(2, 2)
    s = seq_of(["b1", "b2"])
    c = coloring_of(["u", "u"])
    seed = s.with_indices({1})
    assert max_rainbow_independent(m, s, c, seed) == seed


def test_mri_invalid_seeds():
    m = gfp_matroid(2, 2, {"s": (1, 1)})
    s = seq_of(["b1", "b2", "s"])
    c = coloring_of(["u", "u", "v"])
    with pytest.raises(SeedInvalid):
        max_rainbow_independent(m, s, c, s.with_indices({0, 1}))  # same color
    c2 = coloring_of(["u", "v", "w"])
    with pytest.raises(SeedInvalid):
        max_rainbow_independent(m, s, c2, s)  # dependent
    foreign = seq_of(["s"])  # entry (0, "s") does not occur in s
    with pytest.raises(SeedInvalid):
        max_rainbow_independent(m, s, c2, foreign)
