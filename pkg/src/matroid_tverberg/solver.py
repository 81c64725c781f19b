"""Constructive Tverberg partitions of colored sequences in matroids.

Given a sequence S of non-loops whose color counts meet the documented
profile, ``solve_special`` produces r pairwise disjoint rainbow subsequences
S_1..S_r whose closures form a chain strictly above the closure of the empty
set.  ``solve_general`` reduces the loose-profile form to it by padding the
matroid with fresh coloops, and ``solve_noncolor`` colors every entry
distinctly and delegates.

The engine behind ``solve_special`` grows an inclusion-maximal rainbow
independent subsequence RI.  If RI spans the working matroid it becomes the
top part and the rest recurses with r-1.  Otherwise a replacement cycle
maintains a color set K, a subsequence I of RI, and for each eligible entry
p an exchange sequence I^p that could replace I while gaining a color new to
RI.  Each cycle pass either finds the answer inside a smaller flat, grows RI
by one (and restarts), or advances (K, I) to a strictly larger flat, so a
cycle runs at most rank-many passes.

``verify_partition`` checks any candidate output using nothing beyond the
closure oracle, independently of how it was produced.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .errors import (
    InternalInvariantBroken,
    LoopInInput,
    PreconditionViolated,
    SeedInvalid,
    UnknownElement,
)
from .matroids import RestrictionView, add_coloops
from .sequences import (
    ColorCountProfile,
    Coloring,
    IndexedSequence,
    ProfileCheck,
    check_general_profile,
    check_special_profile,
    color_class,
    is_rainbow,
)

_CHECKS_DEFAULT = os.environ.get("MATROID_TVERBERG_CHECKS", "1").strip().lower() not in (
    "0",
    "false",
    "off",
    "no",
)


def _resolve_check(check):
    return _CHECKS_DEFAULT if check is None else bool(check)


@dataclass(frozen=True)
class ChainCertificate:
    """Oracle-checkable witnesses for the nested-closure chain.

    ``spanning_subsets[i]`` is a maximal independent subset of part i; every
    element of subsets 0..r-2 was verified to lie in the closure of the next
    part.  ``witness_nonloop`` is an entry of the first part outside cl(empty).
    """

    spanning_subsets: tuple
    witness_nonloop: tuple


@dataclass(frozen=True)
class Partition:
    """An ordered list of pairwise disjoint rainbow subsequences plus its certificate."""

    parts: tuple
    certificate: ChainCertificate

    def part_indices(self):
        return tuple(tuple(sorted(p.indices)) for p in self.parts)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failure: str | None = None
    detail: str | None = None

    def __bool__(self):
        return self.ok


@dataclass
class SolveStats:
    """Instrumentation collected across one outermost solve call."""

    oracle_calls: int = 0
    cycle_iterations: int = 0
    restarts: int = 0
    recursion_depth: int = 0
    max_cycle_iterations: int = 0
    max_restarts_per_level: int = 0
    invariant_checks: int = 0
    wall_time: float = 0.0
    events: list = field(default_factory=list)

    def note(self, depth, label, **payload):
        self.events.append((depth, label, payload))


def build_partition(matroid, parts):
    """Assemble a Partition, computing its chain certificate via the oracle."""
    parts = tuple(parts)
    subsets = []
    for part in parts:
        indep = []
        elems = []
        for entry in part:
            if not matroid.in_closure(entry[1], elems):
                indep.append(entry)
                elems.append(entry[1])
        subsets.append(tuple(indep))
    witness = None
    if parts:
        for entry in parts[0]:
            if not matroid.in_closure(entry[1], ()):
                witness = entry
                break
    if witness is None:
        raise InternalInvariantBroken("first part has no non-loop entry")
    return Partition(parts=parts, certificate=ChainCertificate(tuple(subsets), witness))


def verify_partition(matroid, seq, coloring, r, parts):
    """Check a candidate partition; reports the first violated predicate.

    Predicates, in order: part count, subsequence containment, pairwise
    disjointness, rainbowness (skipped without a coloring), strictness at the
    bottom (some entry of the first part is a non-loop), and the closure
    chain itself, checked through oracle membership of a maximal independent
    subset of each part in the closure of the next.
    """
    if isinstance(parts, Partition):
        parts = parts.parts
    parts = tuple(parts)
    if r < 1 or len(parts) != r:
        return VerificationReport(False, "part_count", f"expected {r} parts, got {len(parts)}")
    entry_pool = set(seq.entries)
    for i, part in enumerate(parts):
        if not set(part.entries) <= entry_pool:
            return VerificationReport(False, "not_subsequence", f"part {i + 1} is not a subsequence of S")
    total = sum(len(p) for p in parts)
    combined = set()
    for part in parts:
        combined |= part.indices
    if len(combined) != total:
        return VerificationReport(False, "disjointness", "two parts share an entry")
    if coloring is not None:
        for i, part in enumerate(parts):
            if not is_rainbow(part, coloring):
                return VerificationReport(False, "rainbow", f"part {i + 1} repeats a color")
    strict = any(not matroid.in_closure(e, ()) for _, e in parts[0])
    if not strict:
        return VerificationReport(False, "strictness", "closure of the first part equals cl(empty)")
    for i in range(r - 1):
        basis = matroid.max_independent(parts[i].set_image)
        target = parts[i + 1].set_image
        for e in basis:
            if not matroid.in_closure(e, target):
                return VerificationReport(
                    False, "chain", f"cl(part {i + 1}) is not contained in cl(part {i + 2})"
                )
    return VerificationReport(True)


def max_rainbow_independent(matroid, seq, coloring, seed=None):
    """Extend ``seed`` to an inclusion-maximal rainbow independent subsequence.

    Scans entries in ascending index order; deterministic.
    """
    if seed is None:
        seed = seq.with_indices(())
    if not seed.is_subsequence_of(seq):
        raise SeedInvalid("seed is not a subsequence of S")
    if not is_rainbow(seed, coloring):
        raise SeedInvalid("seed is not rainbow")
    if matroid.rank(seed.set_image) != len(seed):
        raise SeedInvalid("seed is not independent")
    chosen = list(seed.entries)
    used_colors = {coloring.of(entry) for entry in seed}
    elems = list(seed.set_image)
    for entry in seq:
        color = coloring.of(entry)
        if color in used_colors:
            continue
        if matroid.in_closure(entry[1], elems):
            continue
        chosen.append(entry)
        used_colors.add(color)
        elems.append(entry[1])
    return seq.with_indices(i for i, _ in chosen)


def _validate_input(matroid, seq, coloring, r):
    if not isinstance(r, int) or r < 1:
        raise PreconditionViolated(f"r must be a positive integer, got {r!r}")
    if len(seq) == 0:
        raise PreconditionViolated("the sequence is empty")
    for i, e in seq:
        if e not in matroid.ground_set:
            raise UnknownElement(f"sequence entry ({i}, {e!r}) is not in the ground set")
    if coloring is not None:
        for entry in seq:
            coloring.of(entry)
    for i, e in seq:
        if matroid.in_closure(e, ()):
            raise LoopInInput(f"entry ({i}, {e!r}) is a loop")


def _normalize(matroid, seq, coloring):
    """Drop whole color classes until #colors == rank of the sequence.

    Afterwards the working matroid is the restriction to the elements of the
    surviving sequence, whose rank equals the number of colors whenever the
    instance satisfies the special profile.  Dropping keeps the most
    frequent colors, so the r / r-1 count thresholds survive each round.
    """
    while True:
        rank = matroid.rank(seq.set_image)
        used = coloring.colors_of(seq)
        if len(used) <= rank:
            break
        profile = ColorCountProfile.of(seq, coloring, palette=used)
        seq = color_class(seq, coloring, profile.top(rank))
    view = RestrictionView(matroid, seq.set_image)
    return view, seq, coloring.narrowed_to(seq)


def special_precondition(matroid, seq, coloring, r):
    """Evaluate the exact-profile precondition the way solve_special will."""
    try:
        _validate_input(matroid, seq, coloring, r)
    except (PreconditionViolated, LoopInInput) as exc:
        return ProfileCheck(False, str(exc))
    view, nseq, ncol = _normalize(matroid, seq, coloring)
    return check_special_profile(nseq, ncol, r, view.rank_bound)


def general_precondition(matroid, seq, coloring, r):
    """Evaluate the loose-profile precondition the way solve_general will."""
    try:
        _validate_input(matroid, seq, coloring, r)
    except (PreconditionViolated, LoopInInput) as exc:
        return ProfileCheck(False, str(exc))
    return check_general_profile(seq, coloring, r, matroid.rank_bound)


def solve_special(matroid, seq, coloring, r, *, stats=None, check=None):
    """Partition under the exact-profile hypothesis (m colors, counts >= r / r-1)."""
    stats = SolveStats() if stats is None else stats
    check = _resolve_check(check)
    start = time.perf_counter()
    calls0 = matroid.oracle_calls
    _validate_input(matroid, seq, coloring, r)
    view, nseq, ncol = _normalize(matroid, seq, coloring)
    profile_ok = check_special_profile(nseq, ncol, r, view.rank_bound)
    if not profile_ok:
        raise PreconditionViolated(f"special profile violated: {profile_ok.reason}")
    parts = _solve(view, nseq, ncol, r, 1, stats, check)
    parts = [seq.with_indices(p.indices) for p in parts]
    partition = build_partition(matroid, parts)
    if check:
        report = verify_partition(matroid, seq, coloring, r, partition.parts)
        if not report:
            raise InternalInvariantBroken(f"output failed verification: {report.failure}")
    stats.oracle_calls = matroid.oracle_calls - calls0
    stats.wall_time = time.perf_counter() - start
    return partition


def solve_general(matroid, seq, coloring, r, *, stats=None, check=None):
    """Partition under the loose-profile hypothesis (counts <= r / r-1, |S| > m(r-1)).

    Trims S to exactly m(r-1)+1 entries, adjoins one fresh coloop per color
    beyond the rank (each appended r-1 times and colored so that counts
    become exactly r / r-1), solves the exact-profile instance, and drops
    the padded entries from the answer.
    """
    stats = SolveStats() if stats is None else stats
    check = _resolve_check(check)
    start = time.perf_counter()
    calls0 = matroid.oracle_calls
    _validate_input(matroid, seq, coloring, r)
    m = matroid.rank_bound
    profile_ok = check_general_profile(seq, coloring, r, m)
    if not profile_ok:
        raise PreconditionViolated(f"general profile violated: {profile_ok.reason}")
    if r == 1:
        partition = build_partition(matroid, [seq.take_first(1)])
        stats.oracle_calls = matroid.oracle_calls - calls0
        stats.wall_time = time.perf_counter() - start
        return partition

    keep = m * (r - 1) + 1
    trimmed = seq.take_first(keep)
    used = coloring.colors_of(trimmed)
    d = len(used)
    if d < m:
        raise InternalInvariantBroken("color count fell below the rank after trimming")

    padded_matroid = add_coloops(matroid, d - m)
    coloops = padded_matroid.ground[len(matroid.ground):]
    next_index = (max(i for i, _ in seq) + 1) if len(seq) else 0
    extra_entries = []
    for x in coloops:
        for _ in range(r - 1):
            extra_entries.append((next_index, x))
            next_index += 1

    profile = ColorCountProfile.of(trimmed, coloring, palette=used)
    deficits = []
    for pos, (col, count) in enumerate(profile.counts):
        target = r if pos == 0 else r - 1
        if count > target:
            raise InternalInvariantBroken(f"color {col!r} exceeds its padded target")
        deficits.extend([col] * (target - count))
    if len(deficits) != len(extra_entries):
        raise InternalInvariantBroken("coloop padding does not match the color deficits")

    padded_seq = IndexedSequence(list(trimmed.entries) + extra_entries)
    assignment = {i: coloring.of_index(i) for i in trimmed.indices}
    assignment.update({entry[0]: col for entry, col in zip(extra_entries, deficits)})
    padded_coloring = Coloring(assignment)

    inner = solve_special(padded_matroid, padded_seq, padded_coloring, r, stats=stats, check=check)
    kept_indices = trimmed.indices
    parts = [seq.with_indices(p.indices & kept_indices) for p in inner.parts]
    partition = build_partition(matroid, parts)
    if check:
        report = verify_partition(matroid, seq, coloring, r, partition.parts)
        if not report:
            raise InternalInvariantBroken(f"output failed verification: {report.failure}")
    stats.oracle_calls = padded_matroid.oracle_calls - calls0
    stats.wall_time = time.perf_counter() - start
    return partition


def solve_noncolor(matroid, seq, r, *, stats=None, check=None):
    """Partition without color constraints: |S| > m(r-1) suffices.

    Every entry receives its own color, which satisfies the loose profile
    for r >= 2; r = 1 returns a single non-loop entry directly.
    """
    stats = SolveStats() if stats is None else stats
    if not isinstance(r, int) or r < 1:
        raise PreconditionViolated(f"r must be a positive integer, got {r!r}")
    if r == 1:
        start = time.perf_counter()
        calls0 = matroid.oracle_calls
        _validate_input(matroid, seq, None, r)
        partition = build_partition(matroid, [seq.take_first(1)])
        stats.oracle_calls = matroid.oracle_calls - calls0
        stats.wall_time = time.perf_counter() - start
        return partition
    coloring = Coloring({i: f"c{i}" for i, _ in seq}) if len(seq) else Coloring({})
    return solve_general(matroid, seq, coloring, r, stats=stats, check=check)


# ---------------------------------------------------------------------------
# The recursive engine.


def _solve(parent, seq, coloring, r, depth, stats, check):
    """Returns r disjoint rainbow parts of ``seq`` with chained closures.

    Trusts that (seq, coloring, r) satisfies the special profile after
    normalization; that is asserted (never raised on legal public input).
    """
    stats.recursion_depth = max(stats.recursion_depth, depth)
    if r == 1:
        # A single non-loop entry settles r = 1; no profile is needed, and
        # after carving out a spanning RI with r' = 1 a color may
        # legitimately have run out.
        return [seq.take_first(1)]
    view, seq, coloring = _normalize(parent, seq, coloring)
    m = view.rank_bound
    if check:
        ok = check_special_profile(seq, coloring, r, m)
        if not ok:
            raise InternalInvariantBroken(f"recursion lost the color profile: {ok.reason}")
    if m == 1:
        # Every entry spans the rank-1 working matroid; the profile
        # guarantees at least r entries.
        if len(seq) < r:
            raise InternalInvariantBroken("rank-1 base case is short of entries")
        return [seq.with_indices({seq.entries[i][0]}) for i in range(r)]

    seed = None
    restarts = 0
    while True:
        ri = max_rainbow_independent(view, seq, coloring, seed)
        if len(ri) == m:
            stats.note(depth, "spanning", ri=len(ri), r=r)
            rest = _solve(view, seq.difference(ri), coloring, r - 1, depth + 1, stats, check)
            return rest + [ri]
        outcome = _run_cycle(view, seq, coloring, r, ri, depth, stats, check)
        if outcome[0] == "parts":
            return outcome[1]
        restarts += 1
        stats.restarts += 1
        stats.max_restarts_per_level = max(stats.max_restarts_per_level, restarts)
        if restarts > m:
            raise InternalInvariantBroken("more cycle restarts than the rank allows")
        grown = outcome[1]
        if len(grown) != len(ri) + 1:
            raise InternalInvariantBroken("restart did not grow the rainbow independent set")
        seed = grown


def _run_cycle(view, seq, coloring, r, ri, depth, stats, check):
    """One run of the replacement cycle for a non-spanning RI.

    Returns ("parts", parts) when the answer was found inside a smaller
    flat, or ("grow", enlarged_seed) when RI can be extended and the caller
    should restart.
    """
    m = view.rank_bound
    all_colors = coloring.colors_of(seq)
    ri_colors = coloring.colors_of(ri)
    k_set = all_colors - ri_colors
    if not k_set:
        raise InternalInvariantBroken("no color is free although RI does not span")
    i_seq = seq.with_indices(())
    c_k = color_class(seq, coloring, k_set)
    # Initially every entry colored from K is eligible (non-loops are never
    # in cl(empty)) and may simply replace the empty I by itself.
    aug = {entry: (seq.with_indices({entry[0]}), coloring.of(entry)) for entry in c_k}

    iterations = 0
    while True:
        if check:
            _check_rules(view, seq, coloring, ri, k_set, i_seq, aug, stats)
        iterations += 1
        stats.cycle_iterations += 1
        stats.max_cycle_iterations = max(stats.max_cycle_iterations, iterations)
        if iterations > m:
            raise InternalInvariantBroken("cycle ran longer than the rank allows")

        c_k = color_class(seq, coloring, k_set)
        i_elems = i_seq.set_image
        outside_i = [e for e in c_k if not view.in_closure(e[1], i_elems)]
        if not outside_i:
            stats.note(depth, "case_a", k=len(k_set), i=len(i_seq))
            return "parts", _case_smaller_flat(view, seq, coloring, r, i_seq, c_k, depth, stats, check)

        ri_elems = ri.set_image
        escape = None
        for entry in outside_i:
            if not view.in_closure(entry[1], ri_elems):
                escape = entry
                break
        if escape is not None:
            stats.note(depth, "case_b", p=escape[0])
            return "grow", _case_grow(view, coloring, ri, i_seq, aug, escape, check)

        stats.note(depth, "case_c", k=len(k_set), i=len(i_seq))
        k_set, i_seq, aug = _case_advance(view, seq, coloring, ri, k_set, i_seq, aug, c_k, check)


def _case_smaller_flat(view, seq, coloring, r, i_seq, c_k, depth, stats, check):
    """Every K-colored entry lies in cl(I): recurse inside that flat.

    The I-colored entries plus one K-colored entry of a fresh color live in
    a matroid of strictly smaller rank; merging that fresh color with the
    most frequent color of I keeps the profile intact, and parts rainbow
    under the merged coloring stay rainbow under the original one.
    """
    if len(i_seq) == 0:
        raise InternalInvariantBroken("the flat case fired with an empty I")
    i_colors = coloring.colors_of(i_seq)
    candidates = [e for e in c_k if coloring.of(e) not in i_colors]
    if not candidates:
        raise InternalInvariantBroken("no K-colored entry outside the colors of I")
    p = candidates[0]
    core = color_class(seq, coloring, i_colors)
    sub_seq = core.union(seq.with_indices({p[0]}))
    k1 = ColorCountProfile.of(core, coloring, palette=i_colors).first_color
    z = coloring.fresh_color()
    recolored = {idx: z for idx, _ in color_class(sub_seq, coloring, {k1})}
    recolored[p[0]] = z
    sub_coloring = coloring.overridden(recolored, extra_palette=(z,))
    return _solve(view, sub_seq, sub_coloring, r, depth + 1, stats, check)


def _case_grow(view, coloring, ri, i_seq, aug, p_entry, check):
    """Some eligible entry escapes cl(RI): swap I for I^p, growing RI by one."""
    if p_entry not in aug:
        raise InternalInvariantBroken("escaping entry has no exchange sequence")
    exchange, _ = aug[p_entry]
    grown = ri.difference(i_seq).union(exchange)
    if check:
        if len(grown) != len(ri) + 1:
            raise InternalInvariantBroken("exchange did not enlarge RI by one")
        if not is_rainbow(grown, coloring):
            raise InternalInvariantBroken("exchange broke rainbowness of RI")
        if view.rank(grown.set_image) != len(grown):
            raise InternalInvariantBroken("exchange broke independence of RI")
        # Growth is genuine: cl(grown) equals cl(RI + p).
        target = ri.set_image | {p_entry[1]}
        if not all(view.in_closure(e, target) for e in grown.set_image):
            raise InternalInvariantBroken("cl(RI') is not within cl(RI + p)")
        if not all(view.in_closure(e, grown.set_image) for e in target):
            raise InternalInvariantBroken("cl(RI + p) is not within cl(RI')")
    return grown


def _case_advance(view, seq, coloring, ri, k_set, i_seq, aug, c_k, check):
    """All of C_K sits inside cl(RI) but not inside cl(I): enlarge (K, I).

    The new I is an inclusion-minimal subsequence of RI spanning C_K,
    computed by greedy deletion in ascending index order.  For every entry p
    of a color new to K that escapes cl(new I), an exchange sequence is
    assembled from the old rules.
    """
    ck_elems = list(c_k.set_image)

    def spans(elems):
        return all(view.in_closure(x, elems) for x in ck_elems)

    current = list(ri.entries)
    if check and not spans({e for _, e in current}):
        raise InternalInvariantBroken("RI does not span C_K in the advance case")
    for entry in ri.entries:
        if entry not in current:
            continue
        trial = [e for e in current if e != entry]
        if spans({el for _, el in trial}):
            current = trial
    i_next = seq.with_indices(i for i, _ in current)

    if check:
        if not (set(i_seq.entries) < set(i_next.entries)):
            raise InternalInvariantBroken("I did not strictly grow")
        if view.rank(i_next.set_image) <= view.rank(i_seq.set_image):
            raise InternalInvariantBroken("cl(I) did not strictly grow")

    k_next = k_set | coloring.colors_of(i_next)
    new_entries = [e for e in i_next if e not in set(i_seq.entries)]
    aug_next = {}
    for rr in new_entries:
        reduced = i_next.difference(seq.with_indices({rr[0]}))
        reduced_elems = reduced.set_image
        witness = None
        for entry in c_k:
            if not view.in_closure(entry[1], reduced_elems):
                witness = entry
                break
        if witness is None:
            raise InternalInvariantBroken("minimal I has a removable entry")
        if witness not in aug:
            raise InternalInvariantBroken("the witness entry has no exchange sequence")
        exchange_q, color_q = aug[witness]
        color_rr = coloring.of(rr)
        for p in color_class(seq, coloring, {color_rr}):
            if view.in_closure(p[1], i_next.set_image):
                continue
            built = reduced.difference(i_seq).union(exchange_q).union(seq.with_indices({p[0]}))
            aug_next[p] = (built, color_q)
    return k_next, i_next, aug_next


def _check_rules(view, seq, coloring, ri, k_set, i_seq, aug, stats):
    """Assert the five invariants of the replacement rules, plus domain.

    (1) colors of I form a proper subset of K; (2) each exchange uses the
    colors of I plus one color from K unused by RI; (3) each exchange is one
    entry longer than I; (4) each exchange contains its entry p and spans
    exactly cl(I) without it; (5) RI meets the K-colored entries exactly in
    I, and K keeps a color unused by RI.
    """
    stats.invariant_checks += 1
    i_colors = coloring.colors_of(i_seq)
    ri_colors = coloring.colors_of(ri)
    if not (i_colors < k_set):
        raise InternalInvariantBroken("rules: colors of I do not sit strictly inside K")
    if not (k_set - ri_colors):
        raise InternalInvariantBroken("rules: K has no color unused by RI")
    c_k = color_class(seq, coloring, k_set)
    if ri.intersection(c_k) != i_seq:
        raise InternalInvariantBroken("rules: RI meets C_K in something other than I")
    i_elems = i_seq.set_image
    eligible = {e for e in c_k if not view.in_closure(e[1], i_elems)}
    if set(aug) != eligible:
        raise InternalInvariantBroken("rules: exchange map domain mismatch")
    for p, (exchange, new_color) in aug.items():
        if len(exchange) != len(i_seq) + 1:
            raise InternalInvariantBroken("rules: exchange length is not |I| + 1")
        if p not in exchange:
            raise InternalInvariantBroken("rules: exchange does not contain its entry")
        if coloring.colors_of(exchange) != i_colors | {new_color}:
            raise InternalInvariantBroken("rules: exchange colors are not colors(I) plus one")
        if new_color not in k_set - ri_colors:
            raise InternalInvariantBroken("rules: the gained color is not free in K")
        rest = exchange.difference(seq.with_indices({p[0]}))
        if not all(view.in_closure(e, i_elems) for e in rest.set_image):
            raise InternalInvariantBroken("rules: cl(exchange - p) exceeds cl(I)")
        if not all(view.in_closure(e, rest.set_image) for e in i_elems):
            raise InternalInvariantBroken("rules: cl(exchange - p) misses part of cl(I)")
