"""Exact linear algebra over F_q.

Matrices hold integer codes of their field (see :mod:`metacomm.fq`).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import lcm
from typing import Iterator, Sequence

from .errors import DomainError
from .fq import Field, Poly, is_irreducible, poly_factor


@dataclass(frozen=True)
class MatFq:
    field: Field
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DomainError("matrices must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_values(cls, fld: Field, values) -> "MatFq":
        """From nested lists of ints (or coefficient lists when e > 1)."""
        return cls(fld, tuple(tuple(fld.encode(v) for v in row) for row in values))

    @classmethod
    def identity(cls, fld: Field, m: int) -> "MatFq":
        return cls.scalar(fld, m, 1)

    @classmethod
    def scalar(cls, fld: Field, m: int, c: int) -> "MatFq":
        return cls(fld, tuple(tuple(c if i == j else 0 for j in range(m)) for i in range(m)))

    @property
    def m(self) -> int:
        return len(self.rows)

    def tolist(self) -> list:
        return [[self.field.decode(c) for c in row] for row in self.rows]

    def __repr__(self):
        return f"MatFq({self.field!r}, {self.tolist()})"

    def __add__(self, other: "MatFq") -> "MatFq":
        F = self.field
        return MatFq(F, tuple(tuple(F.add(a, b) for a, b in zip(r, s))
                              for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "MatFq") -> "MatFq":
        F = self.field
        return MatFq(F, tuple(tuple(F.sub(a, b) for a, b in zip(r, s))
                              for r, s in zip(self.rows, other.rows)))

    def scale(self, c: int) -> "MatFq":
        F = self.field
        return MatFq(F, tuple(tuple(F.mul(c, a) for a in r) for r in self.rows))

    def __matmul__(self, other: "MatFq") -> "MatFq":
        F = self.field
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for col in cols:
                acc = 0
                for a, b in zip(r, col):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return MatFq(F, tuple(out))

    __mul__ = __matmul__

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        F = self.field
        out = []
        for r in self.rows:
            acc = 0
            for a, b in zip(r, v):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def __pow__(self, n: int) -> "MatFq":
        if n < 0:
            return self.inverse() ** (-n)
        result = MatFq.identity(self.field, self.m)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_scalar(self) -> bool:
        c = self.rows[0][0]
        return all(self.rows[i][j] == (c if i == j else 0)
                   for i in range(self.m) for j in range(self.m))

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def rank(self) -> int:
        return rref_rank(self)[1]

    def is_invertible(self) -> bool:
        return self.rank() == self.m

    def inverse(self) -> "MatFq":
        F, m = self.field, self.m
        aug = [list(r) + [1 if i == j else 0 for j in range(m)] for i, r in enumerate(self.rows)]
        red, rank, _ = _rref(F, aug, ncols=m)
        if rank < m:
            raise DomainError("matrix is singular")
        return MatFq(F, tuple(tuple(r[m:]) for r in red))

    def transpose(self) -> "MatFq":
        return MatFq(self.field, tuple(zip(*self.rows)))


def _rref(F: Field, rows: list[list[int]], ncols: int | None = None):
    """Row reduce in place over the first ``ncols`` columns.

    Returns (rows, rank, pivot_columns).
    """
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [F.sub(x, F.mul(t, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, r, pivots


def rref_rank(A: MatFq) -> tuple[tuple[tuple[int, ...], ...], int]:
    red, rank, _ = _rref(A.field, [list(r) for r in A.rows])
    return tuple(tuple(r) for r in red), rank


def nullspace(A: MatFq) -> list[tuple[int, ...]]:
    """Basis of {v : A v = 0}, one vector per free column."""
    F, m = A.field, A.m
    red, rank, pivots = _rref(F, [list(r) for r in A.rows])
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * m
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(red[i][fcol])
        basis.append(tuple(v))
    return basis


def kernel_point(A: MatFq):
    """The kernel line of a rank m-1 matrix, as a canonical projective point."""
    from .projperm import canonicalize_point

    basis = nullspace(A)
    if len(basis) != 1:
        raise DomainError(f"expected rank {A.m - 1}, got rank {A.m - len(basis)}")
    return canonicalize_point(A.field, basis[0])


def charpoly(A: MatFq) -> Poly:
    """det(xI - A) via similarity reduction to upper Hessenberg form."""
    F, n = A.field, A.m
    H = [list(r) for r in A.rows]
    for j in range(n - 2):
        i = next((i for i in range(j + 1, n) if H[i][j]), None)
        if i is None:
            continue
        if i != j + 1:
            H[i], H[j + 1] = H[j + 1], H[i]
            for row in H:
                row[i], row[j + 1] = row[j + 1], row[i]
        pinv = F.inv(H[j + 1][j])
        for k in range(j + 2, n):
            t = F.mul(H[k][j], pinv)
            if not t:
                continue
            H[k] = [F.sub(x, F.mul(t, y)) for x, y in zip(H[k], H[j + 1])]
            for row in H:
                row[j + 1] = F.add(row[j + 1], F.mul(t, row[k]))
    x = Poly.x(F)
    polys = [Poly.const(F, 1)]
    for k in range(1, n + 1):
        c = k - 1
        pk = (x - Poly.const(F, H[c][c])) * polys[k - 1]
        t = 1
        for i in range(1, k):
            t = F.mul(t, H[c - i + 1][c - i])
            coef = F.mul(H[c - i][c], t)
            if coef:
                pk = pk - polys[k - i - 1].scale(coef)
        polys.append(pk)
    return polys[n]


def poly_at(f: Poly, A: MatFq) -> MatFq:
    """Evaluate f at the matrix A (Horner)."""
    F, m = A.field, A.m
    acc = MatFq(F, tuple((0,) * m for _ in range(m)))
    for c in reversed(f.coeffs):
        acc = acc @ A + MatFq.scalar(F, m, c)
    return acc


def minpoly(A: MatFq) -> Poly:
    """First linear dependency among I, A, A^2, ... (Krylov on matrix space)."""
    F, m = A.field, A.m
    powers = [MatFq.identity(F, m)]
    while True:
        k = len(powers)
        # columns vec(A^0) .. vec(A^k) as a m^2 x (k+1) system
        target = powers[-1] @ A
        cols = [tuple(itertools.chain.from_iterable(P.rows)) for P in powers + [target]]
        rows = [list(col[i] for col in cols) for i in range(m * m)]
        red, rank, pivots = _rref(F, rows)
        if rank == k:
            # last column is dependent on the earlier ones: A^k = sum c_i A^i
            coeffs = [F.neg(red[i][k]) for i in range(k)]
            return Poly(F, tuple(coeffs) + (1,))
        powers.append(target)


def elementary_divisors(A: MatFq) -> list[tuple[Poly, int]]:
    """Prime-power elementary divisors phi^k of A, sorted by (phi, k).

    The number of blocks phi^k with k >= j equals
    (dim ker phi(A)^j - dim ker phi(A)^(j-1)) / deg phi.
    """
    m = A.m
    out = []
    for phi, mult in poly_factor(charpoly(A)):
        d = phi.degree
        B = poly_at(phi, A)
        dims = [0]
        P = MatFq.identity(A.field, m)
        for _ in range(mult):
            P = P @ B
            dims.append(m - P.rank())
        at_least = [(dims[j] - dims[j - 1]) // d for j in range(1, mult + 1)] + [0]
        for k in range(1, mult + 1):
            out.extend([(phi, k)] * (at_least[k - 1] - at_least[k]))
    out.sort(key=lambda t: (t[0].sort_key(), t[1]))
    return out


def companion(phi: Poly) -> MatFq:
    """Companion matrix: ones on the subdiagonal, last column -b_0 .. -b_{d-1}."""
    F = phi.field
    if phi.is_zero() or not phi.is_monic() or phi.degree < 1:
        raise DomainError(f"{phi} is not monic of positive degree")
    d = phi.degree
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = F.neg(phi.coeffs[i])
    return MatFq(F, tuple(tuple(r) for r in rows))


def hypercompanion(phi: Poly, k: int) -> MatFq:
    """Block lower-bidiagonal matrix: C(phi) on the diagonal, E_{1d} below it."""
    if k < 1:
        raise DomainError("k must be positive")
    if not phi.is_monic() or not is_irreducible(phi):
        raise DomainError(f"{phi} is not monic irreducible")
    C = companion(phi)
    d = phi.degree
    n = d * k
    rows = [[0] * n for _ in range(n)]
    for b in range(k):
        for i in range(d):
            for j in range(d):
                rows[b * d + i][b * d + j] = C.rows[i][j]
        if b > 0:
            rows[b * d][(b - 1) * d + d - 1] = 1
    return MatFq(phi.field, tuple(tuple(r) for r in rows))


def block_diag(blocks: Sequence[MatFq]) -> MatFq:
    F = blocks[0].field
    n = sum(B.m for B in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for B in blocks:
        for i, r in enumerate(B.rows):
            rows[off + i][off:off + B.m] = r
        off += B.m
    return MatFq(F, tuple(tuple(r) for r in rows))


def rational_block_form(A: MatFq) -> MatFq:
    """Block diagonal of hypercompanion blocks over A's elementary divisors."""
    return block_diag([hypercompanion(phi, k) for phi, k in elementary_divisors(A)])


def iter_gl(fld: Field, m: int) -> Iterator[MatFq]:
    """Every invertible m x m matrix, in lexicographic order of entries."""
    for entries in itertools.product(range(fld.q), repeat=m * m):
        M = MatFq(fld, tuple(entries[i * m:(i + 1) * m] for i in range(m)))
        if M.is_invertible():
            yield M


def random_gl(fld: Field, m: int, rng: random.Random) -> MatFq:
    while True:
        M = MatFq(fld, tuple(tuple(rng.randrange(fld.q) for _ in range(m)) for _ in range(m)))
        if M.is_invertible():
            return M


def gl_order(q: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= q**m - q**i
    return out


def splitting_degree(A: MatFq) -> int:
    """lcm of the degrees of the irreducible factors of charpoly(A)."""
    return lcm(*(phi.degree for phi, _ in poly_factor(charpoly(A))))
