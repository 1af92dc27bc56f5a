"""Left ideals of M_n(Z), prime-determinant factorization and metacommutation.

A left ideal M_n(Z) G is the set of integer matrices whose rows lie in the
row lattice of G, so row Hermite normal form picks one generator per class
of G up to left multiplication by GL_n(Z).
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from .errors import ConsistencyError, DomainError
from .fq import fq_make, is_prime
from .fqmat import MatFq, kernel_point, rref_rank
from .projperm import Perm, ProjPoint, tau_apply

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatZ:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DomainError("integer matrices must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "MatZ":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, c: int) -> "MatZ":
        return cls(tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __matmul__(self, other: "MatZ") -> "MatZ":
        cols = list(zip(*other.rows))
        return MatZ(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))

    def scale(self, c: int) -> "MatZ":
        return MatZ(tuple(tuple(c * x for x in r) for r in self.rows))

    def det(self) -> int:
        # Bareiss fraction-free elimination
        A = [list(r) for r in self.rows]
        n, sign, prev = self.n, 1, 1
        for k in range(n - 1):
            if A[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if A[i][k]), None)
                if swap is None:
                    return 0
                A[k], A[swap] = A[swap], A[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            prev = A[k][k]
        return sign * A[n - 1][n - 1]

    def content(self) -> int:
        return gcd(*(x for r in self.rows for x in r))

    def mod(self, p: int) -> MatFq:
        """Entrywise reduction into M_n(F_p)."""
        return MatFq(fq_make(p), tuple(tuple(x % p for x in r) for r in self.rows))


def _inverse_frac(M: MatZ) -> list[list[Fraction]]:
    n = M.n
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(M.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise DomainError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                t = A[i][c]
                A[i] = [x - t * y for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def right_divide(A: MatZ, B: MatZ) -> MatZ | None:
    """A B^{-1} if it is an integer matrix, else None."""
    Binv = _inverse_frac(B)
    out = []
    for r in A.rows:
        row = [sum(a * b for a, b in zip(r, col)) for col in zip(*Binv)]
        if any(x.denominator != 1 for x in row):
            return None
        out.append(tuple(int(x) for x in row))
    return MatZ(tuple(out))


def _row_hnf(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row Hermite normal form; returns the nonzero rows only."""
    A = [list(r) for r in rows]
    k = len(A)
    r = 0
    for c in range(ncols):
        if r == k:
            break
        for i in range(r + 1, k):
            while A[i][c]:
                t = A[r][c] // A[i][c]
                A[r] = [x - t * y for x, y in zip(A[r], A[i])]
                A[r], A[i] = A[i], A[r]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            t = A[i][c] // A[r][c]
            if t:
                A[i] = [x - t * y for x, y in zip(A[i], A[r])]
        r += 1
    return A[:r]


def hnf(M: MatZ) -> MatZ:
    """Row HNF of a nonsingular M: upper triangular, positive diagonal,
    entries above each pivot reduced into [0, pivot)."""
    if M.det() == 0:
        raise DomainError("HNF needs a nonsingular matrix")
    return MatZ(tuple(tuple(r) for r in _row_hnf(M.rows, M.n)))


def is_hnf(M: MatZ) -> bool:
    n = M.n
    for i in range(n):
        if M.rows[i][i] <= 0:
            return False
        for j in range(i):
            if M.rows[i][j] != 0:
                return False
        for j in range(i):
            if not 0 <= M.rows[j][i] < M.rows[i][i]:
                return False
    return True


def left_ideal_generator(gens: Sequence[MatZ]) -> MatZ:
    """HNF generator G of the left ideal sum M_n(Z) g over the given g."""
    if not gens:
        raise DomainError("no generators")
    n = gens[0].n
    stacked = [r for g in gens for r in g.rows]
    red = _row_hnf(stacked, n)
    if len(red) < n:
        raise DomainError("generated left ideal is not of full rank")
    return MatZ(tuple(tuple(r) for r in red))


def split_factor(alpha: MatZ, a2: int) -> tuple[MatZ, MatZ]:
    """alpha = w1 w2 with det(w2) = a2, w2 the HNF generator of M alpha + M a2."""
    d = alpha.det()
    if d == 0:
        raise DomainError("alpha is singular")
    if a2 <= 0 or d % a2:
        raise DomainError(f"{a2} does not divide det(alpha) = {d}")
    if gcd(a2, d // a2) != 1:
        raise DomainError(f"{a2} and {d // a2} are not coprime")
    w2 = left_ideal_generator([alpha, MatZ.scalar(alpha.n, a2)])
    if w2.det() != a2:
        raise ConsistencyError(f"generator has det {w2.det()}, expected {a2}")
    w1 = right_divide(alpha, w2)
    if w1 is None:
        raise ConsistencyError("left cofactor is not integral")
    return w1, w2


def prime_chain_factor(alpha: MatZ, primes: Sequence[int]) -> list[MatZ]:
    """Factor alpha = P_r ... P_1 with det(P_i) = +-primes[i-1].

    Factors are peeled from the right, primes[0] first.  The result lists
    them in product order [P_r, ..., P_1]; every factor but P_r is in HNF
    and P_r absorbs the leftover unimodular matrix, so the product is
    exactly alpha.
    """
    primes = list(primes)
    if not primes:
        raise DomainError("empty prime list")
    for p in primes:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
    if len(set(primes)) != len(primes):
        raise DomainError("repeated primes are not supported")
    if alpha.content() != 1:
        raise DomainError("alpha is not primitive")
    if abs(alpha.det()) != prod(primes):
        raise DomainError(f"|det(alpha)| = {abs(alpha.det())} is not {prod(primes)}")
    rest, peeled = alpha, []
    for p in primes:
        rest, f = split_factor(rest, p)
        peeled.append(f)
    if abs(rest.det()) != 1:
        raise ConsistencyError("leftover factor is not unimodular")
    peeled[-1] = rest @ peeled[-1]
    return peeled[::-1]


def metacommute_z(P: MatZ, omega: MatZ, p: int) -> tuple[MatZ, MatZ]:
    """Rewrite P omega = omega' P' with P' the HNF generator of M P omega + M p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if abs(P.det()) != p:
        raise DomainError(f"det(P) = {P.det()} is not +-{p}")
    dw = omega.det()
    if dw == 0 or dw % p == 0:
        raise DomainError(f"det(omega) = {dw} is not a unit mod {p}")
    Pw = P @ omega
    P2 = left_ideal_generator([Pw, MatZ.scalar(P.n, p)])
    if P2.det() != p:
        raise ConsistencyError(f"new ideal has norm {P2.det()}, expected {p}")
    w2 = right_divide(Pw, P2)
    if w2 is None:
        raise ConsistencyError("omega' is not integral")
    return w2, P2


def kernel_mod_p(P: MatZ, p: int) -> ProjPoint:
    A = P.mod(p)
    rank = rref_rank(A)[1]
    if rank != P.n - 1:
        raise DomainError(f"P mod {p} has rank {rank}, expected {P.n - 1}")
    return kernel_point(A)


def diagram_check_z(P: MatZ, omega: MatZ, p: int) -> bool:
    """Does ker(P' mod p) equal (omega mod p)^{-1} ker(P mod p)?"""
    before = kernel_mod_p(P, p)
    w2, P2 = metacommute_z(P, omega, p)
    after = kernel_mod_p(P2, p)
    expected = tau_apply(omega.mod(p), before)
    if after != expected:
        log.error("diagram falsified: P=%s omega=%s p=%d P'=%s ker=%s expected %s",
                  P.tolist(), omega.tolist(), p, P2.tolist(), after, expected)
        return False
    return True


def ideals_of_prime_norm(n: int, p: int) -> list[MatZ]:
    """All HNF matrices of determinant p, sorted; (p^n - 1)/(p - 1) of them."""
    out = []
    for t in range(n):
        for tops in itertools.product(range(p), repeat=t):
            rows = [[int(i == j) for j in range(n)] for i in range(n)]
            rows[t][t] = p
            for i, x in enumerate(tops):
                rows[i][t] = x
            out.append(MatZ(tuple(tuple(r) for r in rows)))
    out.sort(key=lambda M: M.rows)
    return out


def sigma_z(omega: MatZ, p: int, n: int | None = None) -> Perm:
    """P -> P omega + M p on the HNF ideals of norm p."""
    n = omega.n if n is None else n
    ideals = ideals_of_prime_norm(n, p)
    index = {M.rows: i for i, M in enumerate(ideals)}
    return Perm(tuple(ideals), tuple(index[metacommute_z(P, omega, p)[1].rows] for P in ideals))


def random_unimodular(n: int, rng: random.Random, steps: int = 4) -> MatZ:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        c = rng.randint(-2, 2)
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    if rng.random() < 0.5:
        rows[0] = [-x for x in rows[0]]
    return MatZ(tuple(tuple(r) for r in rows))


def random_prime_matrix(n: int, p: int, rng: random.Random) -> MatZ:
    """A random integer matrix with det = +-p (random ideal times random unit)."""
    ideals = ideals_of_prime_norm(n, p)
    return random_unimodular(n, rng) @ rng.choice(ideals)


def random_coprime_matrix(n: int, p: int, rng: random.Random, bound: int = 6) -> MatZ:
    """A random integer matrix whose determinant is nonzero and prime to p."""
    while True:
        M = MatZ(tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n)))
        d = M.det()
        if d and d % p:
            return M
