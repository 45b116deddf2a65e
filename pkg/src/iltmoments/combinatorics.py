"""Connectivity matrices F with zero diagonal and all row/column sums 2.

Matrices are stored as tuples of row tuples so they hash and sort
row-major.  Vertices and permutations are 0-based throughout; the labels
``f1`` ... ``f8`` refer to the representatives printed in the source table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidOrderError, MalformedInputError

Matrix = tuple  # tuple[tuple[int, ...], ...]

MAX_ORDER = 6

REFERENCE_MATRICES: dict[str, Matrix] = {
    "f1": ((0, 2), (2, 0)),
    "f2": ((0, 1, 1), (1, 0, 1), (1, 1, 0)),
    "f3": ((0, 2, 0), (0, 0, 2), (2, 0, 0)),
    "f4": ((0, 0, 0, 2), (0, 0, 2, 0), (1, 1, 0, 0), (1, 1, 0, 0)),
    "f5": ((0, 0, 0, 2), (0, 0, 2, 0), (2, 0, 0, 0), (0, 2, 0, 0)),
    "f6": ((0, 0, 0, 2), (1, 0, 1, 0), (1, 1, 0, 0), (0, 1, 1, 0)),
    "f7": ((0, 0, 1, 1), (0, 0, 1, 1), (1, 1, 0, 0), (1, 1, 0, 0)),
    "f8": ((0, 0, 1, 1), (1, 0, 0, 1), (1, 1, 0, 0), (0, 1, 1, 0)),
}

# g(F) * U(F); U is defined elsewhere, these are tabulated values
WEIGHTED_U: dict[str, Fraction] = {
    "f1": Fraction(1, 2),
    "f2": Fraction(3),
    "f3": Fraction(1),
    "f4": Fraction(12),
    "f5": Fraction(3),
    "f6": Fraction(36),
    "f7": Fraction(12),
    "f8": Fraction(30),
}


def as_matrix(rows) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def check_matrix(F, require_cofactor: bool = True) -> Matrix:
    """Validate conditions 1-3 (and optionally the cofactor condition)."""
    F = as_matrix(F)
    r = len(F)
    if r == 0 or any(len(row) != r for row in F):
        raise MalformedInputError("F must be a non-empty square matrix")
    for i, row in enumerate(F):
        if any(v < 0 for v in row):
            raise MalformedInputError("entries must be nonnegative integers")
        if row[i] != 0:
            raise MalformedInputError(f"diagonal entry F[{i}][{i}] is nonzero")
        if sum(row) != 2:
            raise MalformedInputError(f"row {i} does not sum to 2")
    for j in range(r):
        if sum(F[i][j] for i in range(r)) != 2:
            raise MalformedInputError(f"column {j} does not sum to 2")
    if require_cofactor and cofactor(F) == 0:
        raise MalformedInputError("cof(2*1 - F) vanishes")
    return F


def _derangements(r: int):
    for p in itertools.permutations(range(r)):
        if all(p[i] != i for i in range(r)):
            yield p


def enumerate_matrices(r: int) -> list[Matrix]:
    """All F of order r satisfying the four conditions, sorted row-major.

    Every nonnegative integer matrix with row and column sums 2 is a sum of
    two permutation matrices; zero diagonal forces both to be derangements.
    """
    if not isinstance(r, int) or r < 2:
        raise InvalidOrderError(f"order must be an integer >= 2, got {r!r}")
    if r > MAX_ORDER:
        raise InvalidOrderError(f"enumeration is supported up to r = {MAX_ORDER}")
    perms = list(_derangements(r))
    found = set()
    for a, sigma in enumerate(perms):
        for tau in perms[a:]:
            rows = [[0] * r for _ in range(r)]
            for i in range(r):
                rows[i][sigma[i]] += 1
                rows[i][tau[i]] += 1
            found.add(as_matrix(rows))
    return sorted(F for F in found if cofactor(F) != 0)


def conjugate(F, sigma) -> Matrix:
    """F^sigma with entries F[sigma[i]][sigma[j]]."""
    r = len(F)
    if sorted(sigma) != list(range(r)):
        raise MalformedInputError("sigma must be a permutation of range(r)")
    return tuple(tuple(F[sigma[i]][sigma[j]] for j in range(r)) for i in range(r))


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def cofactor(F) -> int:
    """First cofactor of 2*1 - F (row 0 and column 0 removed), exact."""
    r = len(F)
    minor = [
        [(2 if i == j else 0) - F[i][j] for j in range(1, r)] for i in range(1, r)
    ]
    return _bareiss_det(minor)


def multiplicity(F) -> int:
    """M(F) = prod_{i,j} F_ij!."""
    return math.prod(math.factorial(v) for row in F for v in row)


def arborescence_count(F, root: int = 0) -> int:
    """Spanning arborescences toward ``root`` of the directed multigraph F.

    Brute force: every non-root vertex picks one outgoing edge (parallel
    edges are distinct), and the choice is kept if following the picks from
    every vertex reaches the root.
    """
    r = len(F)
    if not 0 <= root < r:
        raise MalformedInputError(f"root {root} out of range")
    # outgoing edge list per vertex, parallel copies repeated
    out = [[j for j in range(r) for _ in range(F[i][j])] for i in range(r)]
    others = [v for v in range(r) if v != root]
    count = 0
    for choice in itertools.product(*(out[v] for v in others)):
        parent = dict(zip(others, choice))
        ok = True
        for v in others:
            seen = set()
            while v != root:
                if v in seen:
                    ok = False
                    break
                seen.add(v)
                v = parent[v]
            if not ok:
                break
        if ok:
            count += 1
    return count


def transpose_equivalent(F1, F2) -> bool:
    """True iff some sigma has F1^sigma + (F1^sigma)^t = F2 + F2^t."""
    r = len(F1)
    if len(F2) != r:
        return False
    target = tuple(tuple(F2[i][j] + F2[j][i] for j in range(r)) for i in range(r))
    sym1 = [[F1[i][j] + F1[j][i] for j in range(r)] for i in range(r)]
    for sigma in itertools.permutations(range(r)):
        if all(
            sym1[sigma[i]][sigma[j]] == target[i][j] for i in range(r) for j in range(r)
        ):
            return True
    return False


@dataclass(frozen=True)
class MatrixClass:
    representative: Matrix
    symmetry_count: int
    weight: int
    cofactor: int
    multiplicity: int
    members: tuple
    label: str | None = None

    @property
    def order(self) -> int:
        return len(self.representative)

    @property
    def weighted_u(self) -> Fraction | None:
        """g(F)*U(F) from the table; None for unlabelled classes (r >= 5)."""
        return WEIGHTED_U.get(self.label) if self.label else None


def reference_label(F) -> str | None:
    """Which of f1..f8 the matrix is conjugate to, if any."""
    F = as_matrix(F)
    r = len(F)
    for label, G in REFERENCE_MATRICES.items():
        if len(G) == r and any(
            conjugate(G, s) == F for s in itertools.permutations(range(r))
        ):
            return label
    return None


def classify(matrices) -> list[MatrixClass]:
    """Partition under conjugation; representative is the row-major minimum.

    Classes are returned sorted by representative.
    """
    remaining = set(as_matrix(F) for F in matrices)
    classes = []
    while remaining:
        F = min(remaining)
        r = len(F)
        orbit = set()
        stabilizer = 0
        for sigma in itertools.permutations(range(r)):
            G = conjugate(F, sigma)
            orbit.add(G)
            if G == F:
                stabilizer += 1
        if not orbit <= remaining:
            raise MalformedInputError("input is not closed under conjugation")
        remaining -= orbit
        weight = math.factorial(r) // stabilizer
        assert weight == len(orbit)
        classes.append(
            MatrixClass(
                representative=F,
                symmetry_count=stabilizer,
                weight=weight,
                cofactor=cofactor(F),
                multiplicity=multiplicity(F),
                members=tuple(sorted(orbit)),
                label=reference_label(F),
            )
        )
    classes.sort(key=lambda c: c.representative)
    return classes


def classes_by_label() -> dict[str, MatrixClass]:
    """Classes for r = 2, 3, 4 keyed by reference label f1..f8."""
    out = {}
    for r in (2, 3, 4):
        for cls in classify(enumerate_matrices(r)):
            out[cls.label] = cls
    return dict(sorted(out.items(), key=lambda kv: int(kv[0][1:])))
