"""Finite matroids presented through an exact closure-membership oracle.

Every algorithm in this package sees a matroid only through
``in_closure(x, ys)``: "does x lie in the closure of ys?".  Rank,
independence, loops and coloops are all derived from that single question.

Concrete families: vectors over GF(p), vectors over the rationals, affine
point sets over either field (homogenized internally), uniform matroids,
graphic matroids, and direct sums (used to adjoin free coloop elements).

Ground elements are plain hashable identifiers; the shipped constructors use
strings.  Arithmetic is exact everywhere: residues mod a prime (via the
kernels module) or ``fractions.Fraction``.  Floating point never enters a
membership decision.

Oracles are immutable after construction and safe to share between threads
for reads; the per-oracle call counter is a plain int and relies on the GIL
(disable counting via ``MATROID_TVERBERG_COUNT=0`` or
``set_call_counting(False)`` if that is ever a concern).
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from .errors import UnknownElement
from .kernels import gfp_rank

_MISS = object()

_COUNTING = os.environ.get("MATROID_TVERBERG_COUNT", "1").strip().lower() not in (
    "0",
    "false",
    "off",
    "no",
)


def set_call_counting(enabled):
    """Globally enable or disable oracle call counting."""
    global _COUNTING
    _COUNTING = bool(enabled)


def call_counting_enabled():
    return _COUNTING


class MatroidOracle:
    """Base class: a finite ground set plus a closure-membership procedure.

    Subclasses implement ``_members(x, ys)`` with ``ys`` a frozenset already
    validated against the ground set.  ``in_closure`` adds validation, call
    counting and memoization (sound because oracles are immutable).
    """

    _counts_queries = True
    _memoizes = True

    def __init__(self, ground):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise ValueError("ground element ids must be distinct")
        self._ground = ground
        self._ground_set = frozenset(ground)
        self._calls = 0
        self._memo = {}
        self._rank_bound = None

    @property
    def ground(self):
        """Ground element ids in their stored (deterministic) order."""
        return self._ground

    @property
    def ground_set(self):
        return self._ground_set

    @property
    def rank_bound(self):
        """Rank of the whole matroid."""
        if self._rank_bound is None:
            self._rank_bound = self._compute_rank_bound()
        return self._rank_bound

    @property
    def oracle_calls(self):
        """Number of closure decisions requested so far (memo hits included)."""
        return self._calls

    def in_closure(self, x, ys):
        """Decide whether x lies in the closure of the set ``ys``.

        This is the counted cost unit of every algorithm in the package.
        """
        if x not in self._ground_set:
            raise UnknownElement(f"unknown element {x!r}")
        fs = ys if isinstance(ys, frozenset) else frozenset(ys)
        if not fs <= self._ground_set:
            bad = next(iter(fs - self._ground_set))
            raise UnknownElement(f"unknown element {bad!r}")
        if self._counts_queries and _COUNTING:
            self._calls += 1
        if not self._memoizes:
            return self._members(x, fs)
        key = (x, fs)
        hit = self._memo.get(key, _MISS)
        if hit is _MISS:
            hit = self._members(x, fs)
            self._memo[key] = hit
        return hit

    def _members(self, x, ys):
        raise NotImplementedError

    def _compute_rank_bound(self):
        return self.rank(self._ground)

    def rank(self, ys):
        """Size of a maximal independent subset of ``ys``.

        Greedy scan in stored ground order, so results are reproducible.
        """
        fs = frozenset(ys)
        if not fs <= self._ground_set:
            bad = next(iter(fs - self._ground_set))
            raise UnknownElement(f"unknown element {bad!r}")
        indep = []
        for e in self._ground:
            if e in fs and not self.in_closure(e, indep):
                indep.append(e)
        return len(indep)

    def max_independent(self, ys):
        """A maximal independent subset of ``ys`` (greedy, ground order)."""
        fs = frozenset(ys)
        indep = []
        for e in self._ground:
            if e in fs and not self.in_closure(e, indep):
                indep.append(e)
        return tuple(indep)

    def closure(self, ys):
        """The closure of ``ys`` as a frozenset of ground elements."""
        return frozenset(x for x in self._ground if self.in_closure(x, ys))

    def is_loop(self, x):
        return self.in_closure(x, ())

    def is_coloop(self, x):
        if x not in self._ground_set:
            raise UnknownElement(f"unknown element {x!r}")
        return not self.in_closure(x, self._ground_set - {x})

    def loops(self):
        return frozenset(x for x in self._ground if self.is_loop(x))

    def restrict(self, keep):
        """Restriction of the matroid to the subset ``keep`` of its ground."""
        return RestrictionView(self, keep)

    def __repr__(self):
        return f"{type(self).__name__}(|ground|={len(self._ground)}, rank={self.rank_bound})"


class VectorMatroidGFp(MatroidOracle):
    """Vectors over GF(p); membership is exact linear solvability mod p."""

    def __init__(self, p, dim, vectors):
        _check_prime(p)
        if dim < 0:
            raise ValueError("dim must be nonnegative")
        self.p = p
        self.dim = dim
        ids = tuple(vectors)
        mat = np.zeros((len(ids), dim), dtype=np.int64)
        for i, eid in enumerate(ids):
            coords = tuple(vectors[eid])
            if len(coords) != dim:
                raise ValueError(f"element {eid!r}: expected {dim} coordinates")
            mat[i] = [int(c) % p for c in coords]
        self._matrix = mat
        self._row = {eid: i for i, eid in enumerate(ids)}
        super().__init__(ids)

    def coords(self, eid):
        if eid not in self._row:
            raise UnknownElement(f"unknown element {eid!r}")
        return tuple(int(c) for c in self._matrix[self._row[eid]])

    def _members(self, x, ys):
        if x in ys:
            return True
        rows = sorted(self._row[y] for y in ys)
        sub = self._matrix[rows]
        base = gfp_rank(sub, self.p)
        aug = np.vstack([sub, self._matrix[self._row[x]][None, :]])
        return gfp_rank(aug, self.p) == base

    def _compute_rank_bound(self):
        return gfp_rank(self._matrix, self.p)


def rational_rank(rows):
    """Rank of a matrix given as rows of Fractions (exact elimination)."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / prow[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


class VectorMatroidRational(MatroidOracle):
    """Vectors with exact rational coordinates (arbitrary precision)."""

    def __init__(self, dim, vectors):
        if dim < 0:
            raise ValueError("dim must be nonnegative")
        self.dim = dim
        ids = tuple(vectors)
        table = {}
        for eid in ids:
            coords = tuple(Fraction(c) for c in vectors[eid])
            if len(coords) != dim:
                raise ValueError(f"element {eid!r}: expected {dim} coordinates")
            table[eid] = coords
        self._vectors = table
        self._order = {eid: i for i, eid in enumerate(ids)}
        super().__init__(ids)

    def coords(self, eid):
        if eid not in self._vectors:
            raise UnknownElement(f"unknown element {eid!r}")
        return self._vectors[eid]

    def _members(self, x, ys):
        if x in ys:
            return True
        rows = [self._vectors[y] for y in sorted(ys, key=self._order.__getitem__)]
        base = rational_rank(rows)
        return rational_rank(rows + [self._vectors[x]]) == base

    def _compute_rank_bound(self):
        return rational_rank([self._vectors[e] for e in self._ground])


class AffineMatroid(MatroidOracle):
    """Affine point sets over GF(p) or the rationals.

    Implemented by homogenization: a point gets an extra coordinate fixed to
    1 and membership is delegated to the corresponding vector matroid, since
    affine-hull membership of points is linear membership of lifted vectors.
    Affine matroids are loopless by construction.
    """

    def __init__(self, field, dim, points):
        if dim < 0:
            raise ValueError("dim must be nonnegative")
        self.field = field
        self.dim = dim
        lifted = {eid: tuple(points[eid]) + (1,) for eid in points}
        for eid, coords in lifted.items():
            if len(coords) != dim + 1:
                raise ValueError(f"point {eid!r}: expected {dim} coordinates")
        if field == "rational":
            self._inner = VectorMatroidRational(dim + 1, lifted)
        else:
            self._inner = VectorMatroidGFp(int(field), dim + 1, lifted)
        super().__init__(tuple(points))

    def coords(self, eid):
        return self._inner.coords(eid)[:-1]

    def _members(self, x, ys):
        return self._inner._members(x, ys)

    def _compute_rank_bound(self):
        return self._inner._compute_rank_bound()


class UniformMatroid(MatroidOracle):
    """U_k^n: every k-subset of the n ground elements is a basis.

    Closure of Y is Y itself when Y has fewer than k distinct elements and
    the whole ground set otherwise.  For k = 0 every element is a loop.
    """

    def __init__(self, k, n, ids=None):
        if k < 0 or n < 0:
            raise ValueError("k and n must be nonnegative")
        if ids is None:
            ids = tuple(f"e{i}" for i in range(n))
        else:
            ids = tuple(ids)
            if len(ids) != n:
                raise ValueError("ids must have length n")
        self.k = k
        super().__init__(ids)

    def _members(self, x, ys):
        return x in ys or len(ys) >= self.k

    def _compute_rank_bound(self):
        return min(self.k, len(self._ground))


class GraphicMatroid(MatroidOracle):
    """Cycle matroid of a multigraph on vertices 0..n-1.

    Ground elements are edge ids; parallel edges are distinct elements and a
    self-loop edge is a matroid loop.  An edge lies in the closure of an edge
    set Y iff its endpoints are connected in the subgraph Y.
    """

    def __init__(self, num_vertices, edges):
        if num_vertices < 0:
            raise ValueError("num_vertices must be nonnegative")
        self.num_vertices = num_vertices
        table = {}
        for eid in edges:
            u, v = edges[eid]
            u, v = int(u), int(v)
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge {eid!r} references a vertex outside 0..{num_vertices - 1}")
            table[eid] = (u, v)
        self._edges = table
        super().__init__(tuple(table))

    def endpoints(self, eid):
        if eid not in self._edges:
            raise UnknownElement(f"unknown element {eid!r}")
        return self._edges[eid]

    def _members(self, x, ys):
        u, v = self._edges[x]
        if u == v:
            return True
        parent = list(range(self.num_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for y in ys:
            a, b = self._edges[y]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return find(u) == find(v)

    def _compute_rank_bound(self):
        parent = list(range(self.num_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        rank = 0
        for u, v in self._edges.values():
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank


class DirectSumMatroid(MatroidOracle):
    """Direct sum of two matroids on disjoint ground sets.

    Membership is componentwise; queries delegate to exactly one summand, so
    call counting happens in the summands and ``oracle_calls`` sums them.
    """

    _counts_queries = False
    _memoizes = False

    def __init__(self, left, right):
        if left.ground_set & right.ground_set:
            raise ValueError("direct sum requires disjoint ground element ids")
        self.left = left
        self.right = right
        super().__init__(left.ground + right.ground)

    @property
    def oracle_calls(self):
        return self.left.oracle_calls + self.right.oracle_calls

    def _members(self, x, ys):
        if x in self.left.ground_set:
            return self.left.in_closure(x, ys & self.left.ground_set)
        return self.right.in_closure(x, ys & self.right.ground_set)

    def _compute_rank_bound(self):
        return self.left.rank_bound + self.right.rank_bound


class RestrictionView(MatroidOracle):
    """The matroid restricted to a subset of its ground set.

    A thin forwarding view: closure questions among kept elements have the
    same answers as in the parent, so queries delegate (and are counted)
    there.  Chains of views flatten onto the original oracle.
    """

    _counts_queries = False
    _memoizes = False

    def __init__(self, parent, keep):
        keep = frozenset(keep)
        if not keep <= parent.ground_set:
            bad = next(iter(keep - parent.ground_set))
            raise UnknownElement(f"unknown element {bad!r}")
        if isinstance(parent, RestrictionView):
            parent = parent._parent
        self._parent = parent
        super().__init__(e for e in parent.ground if e in keep)
        self._rank_bound = parent.rank(self._ground)

    @property
    def parent(self):
        return self._parent

    @property
    def oracle_calls(self):
        return self._parent.oracle_calls

    def _members(self, x, ys):
        return self._parent.in_closure(x, ys)


def restrict_rank(matroid, subset):
    """Restrict ``matroid`` to ``subset``; returns ``(view, rank of subset)``."""
    view = RestrictionView(matroid, subset)
    return view, view.rank_bound


def add_coloops(matroid, count):
    """Direct sum with a free matroid on ``count`` fresh elements.

    The fresh elements are coloops named ``x1``, ``x2``, ... (prefixed with
    underscores if those ids are taken); closure restricted to the original
    elements is unchanged and the rank grows by exactly ``count``.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return matroid
    taken = matroid.ground_set
    names = []
    prefix = ""
    while True:
        candidate = [f"{prefix}x{i + 1}" for i in range(count)]
        if not taken & set(candidate):
            names = candidate
            break
        prefix = "_" + prefix
    return DirectSumMatroid(matroid, UniformMatroid(count, count, ids=names))


def _check_prime(p):
    p = int(p)
    if p < 2:
        raise ValueError(f"{p} is not a prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"{p} is not a prime")
        d += 1
    return p
