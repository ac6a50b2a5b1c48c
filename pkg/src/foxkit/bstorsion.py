"""Truncated relation lattices for the symmetric square over BS(1, m), with an exact Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError

IntMatrix = list[list[int]]


@dataclass(frozen=True)
class IndexSet:
    """All j / m^N with 0 <= j < m^(N+1), as reduced fractions in [0, m)."""

    m: int
    depth: int
    indices: tuple[Fraction, ...]

    def __len__(self):
        return len(self.indices)

    def position(self, z: Fraction) -> int:
        return self._lookup()[z]

    def _lookup(self) -> dict:
        cache = self.__dict__.get("_pos")
        if cache is None:
            cache = {z: i for i, z in enumerate(self.indices)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def __contains__(self, z) -> bool:
        return z in self._lookup()

    def labels(self) -> list[str]:
        return [str(z) for z in self.indices]


def truncated_generators(m: int, depth: int) -> IndexSet:
    if m < 2:
        raise InputError("m must be at least 2")
    if depth < 1:
        raise InputError("depth must be at least 1")
    den = m**depth
    return IndexSet(m, depth, tuple(Fraction(j, den) for j in range(m ** (depth + 1))))


@dataclass(frozen=True)
class RelationMatrix:
    basis: IndexSet
    rows: tuple[tuple[int, ...], ...]
    symmetry_rows: int
    doubling_rows: int

    @property
    def ncols(self) -> int:
        return len(self.basis)

    def as_lists(self) -> IntMatrix:
        return [list(r) for r in self.rows]


def relation_matrix(m: int, depth: int) -> RelationMatrix:
    """Rows a_z - a_{(m - z) mod m}, then a_z - m * sum_{k<m} a_{(k + z/m) mod m}.

    Symmetry rows that vanish (z = 0, or z = m/2) and rows equal up to sign
    to an earlier one are dropped; doubling rows are taken for every z whose
    denominator divides m^(depth-1), so that z/m stays in the basis.
    """
    basis = truncated_generators(m, depth)
    n = len(basis)
    rows: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for z in basis.indices:
        row = [0] * n
        row[basis.position(z)] += 1
        row[basis.position((m - z) % m)] -= 1
        key = tuple(row)
        if any(row) and key not in seen and tuple(-c for c in row) not in seen:
            seen.add(key)
            rows.append(key)
    nsym = len(rows)
    coarse = m ** (depth - 1)
    for z in basis.indices:
        if coarse % z.denominator:
            continue
        row = [0] * n
        row[basis.position(z)] += 1
        for k in range(m):
            row[basis.position((k + z / m) % m)] -= m
        rows.append(tuple(row))
    return RelationMatrix(basis, tuple(rows), nsym, len(rows) - nsym)


# ----------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    divisors: tuple[int, ...]  # length min(rows, cols)
    rank: int
    u: IntMatrix | None = None
    v: IntMatrix | None = None

    @property
    def nonzero(self) -> tuple[int, ...]:
        return self.divisors[: self.rank]


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a: IntMatrix, transforms: bool = False, ncols: int | None = None) -> SmithForm:
    """Divisors d_1 | d_2 | ... of ``a``; with ``transforms``, unimodular U, V with U a V diagonal.

    Pivots are chosen by least absolute value over the remaining block.
    """
    rows = len(a)
    cols = len(a[0]) if rows else (ncols or 0)
    if any(len(r) != cols for r in a):
        raise InputError("matrix rows have different lengths")
    A = [list(map(int, r)) for r in a]
    U = _identity(rows) if transforms else None
    V = _identity(cols) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for r in A:
            r[dst] += q * r[src]
        if V is not None:
            for r in V:
                r[dst] += q * r[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: fold any row whose entries the pivot does not divide
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    divisors = tuple(A[i][i] for i in range(min(rows, cols)))
    rank = sum(1 for d in divisors if d)
    return SmithForm(divisors, rank, U, V)


def mat_mul_int(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def det_int(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    M = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def diagonal(divisors, rows: int, cols: int) -> IntMatrix:
    out = [[0] * cols for _ in range(rows)]
    for i, d in enumerate(divisors):
        out[i][i] = d
    return out


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionReport:
    m: int
    depth: int
    basis_size: int
    divisors: tuple[int, ...]
    free_rank: int
    torsion_free: bool
    symmetry_rows: int
    doubling_rows: int

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "depth": self.depth,
            "basis_size": self.basis_size,
            "divisors": list(self.divisors),
            "free_rank": self.free_rank,
            "torsion_free": self.torsion_free,
            "symmetry_relations": self.symmetry_rows,
            "doubling_relations": self.doubling_rows,
        }


DEFAULT_DEPTH = {2: 4, 3: 3}


def torsion_report(m: int, depth: int | None = None) -> TorsionReport:
    depth = DEFAULT_DEPTH.get(m, 2) if depth is None else depth
    rel = relation_matrix(m, depth)
    snf = smith_normal_form(rel.as_lists(), ncols=rel.ncols)
    nz = snf.nonzero
    return TorsionReport(
        m=m,
        depth=depth,
        basis_size=rel.ncols,
        divisors=nz,
        free_rank=rel.ncols - snf.rank,
        torsion_free=all(d == 1 for d in nz),
        symmetry_rows=rel.symmetry_rows,
        doubling_rows=rel.doubling_rows,
    )
