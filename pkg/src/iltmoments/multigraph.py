"""Multigraphs G(F), spanning trees and Kirchhoff-Symanzik polynomials.

Edges are unordered vertex pairs stored as ``(i, j)`` with ``i < j``; the
position of an edge in ``MultiGraph.edges`` is its identity.  Parallel
edges appear as repeated pairs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DisconnectedGraphError, MalformedInputError

MAX_TREE_EDGES = 12


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _connected(n_vertices, edges) -> bool:
    parent = list(range(n_vertices))
    for i, j in edges:
        parent[_find(parent, i)] = _find(parent, j)
    return len({_find(parent, v) for v in range(n_vertices)}) == 1


@dataclass(frozen=True)
class MultiGraph:
    vertex_count: int
    edges: tuple

    def __post_init__(self):
        edges = tuple((min(i, j), max(i, j)) for i, j in self.edges)
        object.__setattr__(self, "edges", edges)
        for i, j in edges:
            if i == j:
                raise MalformedInputError(f"self-loop at vertex {i}")
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise MalformedInputError(f"edge {(i, j)} out of range")
        if not _connected(self.vertex_count, edges):
            raise DisconnectedGraphError("graph is not connected")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def _trees(self) -> tuple:
        return tuple(spanning_trees(self))

    @cached_property
    def _symanzik(self) -> "SymanzikPolynomial":
        return symanzik(self)

    def relabel(self, vertex_perm=None, edge_perm=None) -> "MultiGraph":
        """Graph with vertices renamed by ``vertex_perm`` and edges reordered.

        ``edge_perm[k]`` is the old index of the new edge ``k``.
        """
        edges = list(self.edges)
        if vertex_perm is not None:
            edges = [(vertex_perm[i], vertex_perm[j]) for i, j in edges]
        if edge_perm is not None:
            edges = [edges[k] for k in edge_perm]
        return MultiGraph(self.vertex_count, tuple(edges))


def graph_from_matrix(F) -> MultiGraph:
    """Undirected G(F): F_ij + F_ji parallel edges between i and j."""
    r = len(F)
    edges = []
    for i in range(r):
        for j in range(i + 1, r):
            edges.extend([(i, j)] * (F[i][j] + F[j][i]))
    return MultiGraph(r, tuple(edges))


def loop_number(G: MultiGraph) -> int:
    return G.edge_count - G.vertex_count + 1


def spanning_trees(G: MultiGraph) -> list[frozenset]:
    """All spanning trees as frozensets of edge indices, in lexicographic order."""
    if G.edge_count > MAX_TREE_EDGES:
        raise MalformedInputError(
            f"exhaustive tree enumeration limited to {MAX_TREE_EDGES} edges"
        )
    n = G.vertex_count
    trees = []
    for subset in itertools.combinations(range(G.edge_count), n - 1):
        parent = list(range(n))
        for e in subset:
            a, b = (_find(parent, v) for v in G.edges[e])
            if a == b:
                break
            parent[a] = b
        else:
            trees.append(frozenset(subset))
    return trees


def laplacian_tree_count(G: MultiGraph) -> int:
    """Matrix-tree theorem: det of the reduced Laplacian, exact."""
    from .combinatorics import _bareiss_det

    n = G.vertex_count
    lap = [[0] * n for _ in range(n)]
    for i, j in G.edges:
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return _bareiss_det([row[1:] for row in lap[1:]])


@dataclass(frozen=True)
class SymanzikPolynomial:
    edge_count: int
    monomials: frozenset  # of frozensets of edge indices

    @cached_property
    def degree(self) -> int:
        return len(next(iter(self.monomials)))

    @cached_property
    def index_array(self) -> np.ndarray:
        """Monomials as a sorted (n_monomials, degree) int64 array."""
        rows = sorted(tuple(sorted(m)) for m in self.monomials)
        return np.array(rows, dtype=np.int64).reshape(len(rows), self.degree)

    def __len__(self):
        return len(self.monomials)

    def __call__(self, alpha):
        """Evaluate at one point (1-d) or a batch of points (2-d)."""
        from ._backend import symanzik_eval

        a = np.asarray(alpha, dtype=np.float64)
        if a.ndim == 1:
            return float(symanzik_eval(a[None, :], self.index_array)[0])
        return symanzik_eval(a, self.index_array)

    def exact_moment(self, power: int) -> int:
        """E[P(alpha)^power] for iid Exp(1) alpha_e, as an exact integer.

        Expands the power over monomials and uses E[alpha^k] = k!.
        """
        from math import factorial

        poly = Counter({(0,) * self.edge_count: 1})
        base = []
        for m in self.monomials:
            exps = [0] * self.edge_count
            for e in m:
                exps[e] += 1
            base.append(tuple(exps))
        for _ in range(power):
            nxt = Counter()
            for exps, coeff in poly.items():
                for b in base:
                    nxt[tuple(x + y for x, y in zip(exps, b))] += coeff
            poly = nxt
        total = 0
        for exps, coeff in poly.items():
            term = coeff
            for k in exps:
                term *= factorial(k)
            total += term
        return total


def symanzik(G: MultiGraph) -> SymanzikPolynomial:
    """P_G: one monomial per spanning tree, the product over non-tree edges."""
    all_edges = frozenset(range(G.edge_count))
    return SymanzikPolynomial(
        G.edge_count, frozenset(all_edges - T for T in G._trees)
    )


def delete_edge(G: MultiGraph, e: int) -> MultiGraph:
    """G without edge e; remaining edges keep their relative order."""
    if not 0 <= e < G.edge_count:
        raise MalformedInputError(f"edge index {e} out of range")
    edges = G.edges[:e] + G.edges[e + 1 :]
    if not _connected(G.vertex_count, edges):
        raise DisconnectedGraphError(f"removing edge {e} disconnects the graph")
    return MultiGraph(G.vertex_count, edges)


def canonical_form(G: MultiGraph) -> tuple:
    """Lexicographically minimal sorted edge list over all vertex relabelings."""
    best = None
    for perm in itertools.permutations(range(G.vertex_count)):
        cand = tuple(sorted(tuple(sorted((perm[i], perm[j]))) for i, j in G.edges))
        if best is None or cand < best:
            best = cand
    return (G.vertex_count, best)


def isomorphic(G1: MultiGraph, G2: MultiGraph) -> bool:
    return canonical_form(G1) == canonical_form(G2)


def edge_orbits(G: MultiGraph) -> list[tuple]:
    """Group edges whose deletion gives isomorphic graphs.

    Isomorphic deletions have equal Symanzik polynomials up to edge
    relabelling, so each group contributes |group| * Gamma_{G-e} to an
    edge sum.  Groups are ordered by their smallest edge index.
    """
    groups: dict[tuple, list[int]] = {}
    for e in range(G.edge_count):
        groups.setdefault(canonical_form(delete_edge(G, e)), []).append(e)
    return sorted((tuple(v) for v in groups.values()), key=lambda g: g[0])


def gamma_equivalent(G1: MultiGraph, G2: MultiGraph) -> bool:
    """Search for an edge bijection mapping the Symanzik monomials onto each other.

    Such a bijection (plus the induced tree bijection) is exactly the
    gamma-equivalence certificate; both graphs then share Gamma_G.  Edges
    are first bucketed by how many monomials contain them, and only
    bucket-preserving bijections are tried.
    """
    if G1.edge_count != G2.edge_count:
        return False
    p1, p2 = G1._symanzik, G2._symanzik
    if len(p1) != len(p2) or p1.degree != p2.degree:
        return False
    if isomorphic(G1, G2):
        return True

    def signature(p):
        c = Counter(e for m in p.monomials for e in m)
        return [c.get(e, 0) for e in range(p.edge_count)]

    s1, s2 = signature(p1), signature(p2)
    if sorted(s1) != sorted(s2):
        return False
    buckets: dict[int, tuple[list, list]] = {}
    for e, s in enumerate(s1):
        buckets.setdefault(s, ([], []))[0].append(e)
    for e, s in enumerate(s2):
        buckets[s][1].append(e)
    keys = sorted(buckets)
    target = p2.monomials
    for choice in itertools.product(
        *(itertools.permutations(buckets[k][1]) for k in keys)
    ):
        h = {}
        for k, image in zip(keys, choice):
            h.update(zip(buckets[k][0], image))
        if all(frozenset(h[e] for e in m) in target for m in p1.monomials):
            return True
    return False


def exact_gamma(G: MultiGraph, n: int) -> Fraction:
    """Gamma_G(n) for integer n >= 1 from the exponential moments of P_G^(n-1)."""
    if n < 1 or int(n) != n:
        raise ValueError("exact evaluation needs an integer n >= 1")
    return Fraction(G._symanzik.exact_moment(int(n) - 1))
