"""Hurwitz quaternions: arithmetic, right-Euclidean gcd, factorization and
metacommutation of primes up to left units.

Elements are stored in the Z-basis {1, i, j, w0} with w0 = (-1 + i + j + k)/2,
so every Hurwitz integer has integer coordinates.  Products are computed in
doubled Lipschitz coordinates (2w, 2x, 2y, 2z) for w + xi + yj + zk.
"""

from __future__ import annotations

import functools
import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, prod
from typing import Sequence

from .errors import ConsistencyError, DomainError
from .fq import fq_make, is_prime
from .fqmat import MatFq, kernel_point
from .projperm import Perm, ProjPoint, tau_apply

log = logging.getLogger(__name__)


def _ham(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


@dataclass(frozen=True)
class HQuat:
    a: int
    b: int
    c: int
    d: int

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def lip2(self) -> tuple[int, int, int, int]:
        """Doubled coordinates in the {1, i, j, k} basis."""
        return (2 * self.a - self.d, 2 * self.b + self.d, 2 * self.c + self.d, self.d)

    @classmethod
    def from_lip2(cls, W: int, X: int, Y: int, Z: int) -> "HQuat":
        if not (W % 2 == X % 2 == Y % 2 == Z % 2):
            raise DomainError(f"({W},{X},{Y},{Z})/2 is not a Hurwitz integer")
        return cls((W + Z) // 2, (X - Z) // 2, (Y - Z) // 2, Z)

    @classmethod
    def from_lipschitz(cls, w, x, y, z) -> "HQuat":
        """From w + xi + yj + zk with integer or half-integer (Fraction) parts."""
        vals = [Fraction(v) * 2 for v in (w, x, y, z)]
        if any(v.denominator != 1 for v in vals):
            raise DomainError("coordinates must be integers or halves")
        return cls.from_lip2(*(int(v) for v in vals))

    @classmethod
    def one(cls) -> "HQuat":
        return cls(1, 0, 0, 0)

    @classmethod
    def integer(cls, n: int) -> "HQuat":
        return cls(n, 0, 0, 0)

    def __mul__(self, other: "HQuat") -> "HQuat":
        if isinstance(other, int):
            return HQuat(*(other * x for x in self.coords))
        W, X, Y, Z = _ham(self.lip2(), other.lip2())
        return HQuat.from_lip2(W // 2, X // 2, Y // 2, Z // 2)

    __rmul__ = __mul__

    def __add__(self, other: "HQuat") -> "HQuat":
        return HQuat(*(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "HQuat") -> "HQuat":
        return HQuat(*(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "HQuat":
        return HQuat(*(-x for x in self.coords))

    def conj(self) -> "HQuat":
        W, X, Y, Z = self.lip2()
        return HQuat.from_lip2(W, -X, -Y, -Z)

    def nrd(self) -> int:
        return sum(v * v for v in self.lip2()) // 4

    def trd(self) -> int:
        return self.lip2()[0]

    def is_zero(self) -> bool:
        return self.coords == (0, 0, 0, 0)

    def tolist(self) -> list[int]:
        return list(self.coords)

    def __str__(self):
        return "[" + ",".join(str(x) for x in self.coords) + "]"


I = HQuat.from_lip2(0, 2, 0, 0)
J = HQuat.from_lip2(0, 0, 2, 0)
K = HQuat.from_lip2(0, 0, 0, 2)
W0 = HQuat(0, 0, 0, 1)


@functools.lru_cache(maxsize=None)
def units() -> tuple[HQuat, ...]:
    """The 24 elements of reduced norm 1."""
    out = []
    for v in itertools.product(range(-2, 3), repeat=4):
        if sum(x * x for x in v) == 4 and len({x % 2 for x in v}) == 1:
            out.append(HQuat.from_lip2(*v))
    return tuple(sorted(out, key=lambda u: u.coords))


def is_primitive(alpha: HQuat) -> bool:
    """True iff no integer m >= 2 divides alpha in the Hurwitz order."""
    if alpha.is_zero():
        raise DomainError("zero is not primitive or imprimitive")
    return gcd(*alpha.coords) == 1


def canonical_class(pi: HQuat) -> HQuat:
    """Lexicographically smallest coordinate tuple among the 24 left associates."""
    if pi.is_zero():
        raise DomainError("zero has no unit class")
    return min((u * pi for u in units()), key=lambda x: x.coords)


def right_divide(x: HQuat, y: HQuat) -> HQuat | None:
    """x y^{-1} when it lies in the Hurwitz order, else None."""
    n = y.nrd()
    if n == 0:
        raise ZeroDivisionError("division by zero quaternion")
    W, X, Y, Z = _ham(x.lip2(), y.conj().lip2())
    # W.. are 4 * (x conj y); doubled coordinates of x y^{-1} are W/(2n)
    vals = [v / Fraction(2 * n) for v in (W, X, Y, Z)]
    if any(v.denominator != 1 for v in vals):
        return None
    vals = [int(v) for v in vals]
    if len({v % 2 for v in vals}) != 1:
        return None
    return HQuat.from_lip2(*vals)


def _round_quotient(x: HQuat, y: HQuat) -> HQuat:
    """A Hurwitz integer q with nrd(x - q y) < nrd(y)."""
    n = y.nrd()
    num = _ham(x.lip2(), y.conj().lip2())
    den = 4 * n  # x y^{-1} = num / den in {1,i,j,k} coordinates
    lip = [2 * ((2 * v + den) // (2 * den)) for v in num]   # nearest integers
    half = [2 * (v // den) + 1 for v in num]                  # nearest half-odd integers
    best = None
    for cand in (lip, half):
        qq = HQuat.from_lip2(*cand)
        r = (x - qq * y).nrd()
        if best is None or r < best[0]:
            best = (r, qq)
    if best[0] >= n:
        raise ConsistencyError(f"no Euclidean quotient for {x} / {y}")
    return best[1]


def right_gcd(alpha: HQuat, beta: HQuat) -> HQuat:
    """Canonical generator g of the left ideal O alpha + O beta."""
    if alpha.is_zero() and beta.is_zero():
        raise DomainError("right_gcd(0, 0) is undefined")
    while not beta.is_zero():
        alpha, beta = beta, alpha - _round_quotient(alpha, beta) * beta
    return canonical_class(alpha)


def factor_hurwitz(alpha: HQuat, primes: Sequence[int]) -> list[HQuat]:
    """alpha = pi_1 ... pi_r with nrd(pi_i) = primes[i-1].

    Right factors are peeled first (primes[-1] first) and kept in canonical
    form; the leftmost factor absorbs the remaining unit so the product is
    exactly alpha.
    """
    primes = list(primes)
    if not primes:
        raise DomainError("empty prime list")
    for p in primes:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
    if not is_primitive(alpha):
        raise DomainError(f"{alpha} is not primitive")
    if alpha.nrd() != prod(primes):
        raise DomainError(f"nrd({alpha}) = {alpha.nrd()} is not {prod(primes)}")
    rest, out = alpha, []
    for p in reversed(primes):
        pi = right_gcd(rest, HQuat.integer(p))
        if pi.nrd() != p:
            raise ConsistencyError(f"right factor {pi} has norm {pi.nrd()}, expected {p}")
        rest = right_divide(rest, pi)
        if rest is None:
            raise ConsistencyError("left cofactor is not integral")
        out.append(pi)
    if rest.nrd() != 1:
        raise ConsistencyError("leftover is not a unit")
    out.reverse()
    out[0] = rest * out[0]
    return out


@functools.lru_cache(maxsize=None)
def primes_of_norm(p: int) -> tuple[HQuat, ...]:
    """Canonical representatives of the p + 1 classes of norm p, sorted."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        raise DomainError("p = 2 is ramified in the Hurwitz order")
    bound = isqrt(4 * p)
    found = set()
    rng = range(-bound, bound + 1)
    for W, X, Y in itertools.product(rng, repeat=3):
        rem = 4 * p - W * W - X * X - Y * Y
        if rem < 0:
            continue
        Z = isqrt(rem)
        if Z * Z != rem:
            continue
        for z in {Z, -Z}:
            if W % 2 == X % 2 == Y % 2 == z % 2:
                found.add(canonical_class(HQuat.from_lip2(W, X, Y, z)))
    classes = tuple(sorted(found, key=lambda x: x.coords))
    if len(classes) != p + 1:
        raise ConsistencyError(f"found {len(classes)} classes of norm {p}, expected {p + 1}")
    return classes


def _check_metacommute(pi: HQuat, omega: HQuat) -> int:
    p = pi.nrd()
    if not is_prime(p) or p == 2:
        raise DomainError(f"nrd(pi) = {p} is not an odd prime")
    n = omega.nrd()
    if n == 0 or n % p == 0:
        raise DomainError(f"nrd(omega) = {n} is not prime to {p}")
    return p


def metacommute_h_pair(pi: HQuat, omega: HQuat) -> tuple[HQuat, HQuat]:
    """(omega', pi') with pi omega = omega' pi' and pi' canonical of norm p."""
    p = _check_metacommute(pi, omega)
    prod_ = pi * omega
    pi2 = right_gcd(prod_, HQuat.integer(p))
    if pi2.nrd() != p:
        raise ConsistencyError(f"pi' = {pi2} has norm {pi2.nrd()}, expected {p}")
    w2 = right_divide(prod_, pi2)
    if w2 is None:
        raise ConsistencyError("omega' is not integral")
    return w2, pi2


def metacommute_h(pi: HQuat, omega: HQuat) -> HQuat:
    return metacommute_h_pair(pi, omega)[1]


@dataclass(frozen=True)
class SplitMap:
    """Ring map O -> M_2(F_p) for odd p.

    i -> [[a, b], [b, -a]] and j -> [[0, 1], [-1, 0]] where (a, b) is the
    smallest pair with a^2 + b^2 = -1 mod p.
    """

    p: int
    a: int
    b: int

    @property
    def field(self):
        return fq_make(self.p)

    def lipschitz_images(self) -> tuple[MatFq, MatFq, MatFq, MatFq]:
        F, a, b = self.field, self.a, self.b
        one = MatFq.identity(F, 2)
        Im = MatFq.from_values(F, [[a, b], [b, -a]])
        Jm = MatFq.from_values(F, [[0, 1], [-1, 0]])
        return one, Im, Jm, Im @ Jm

    def __call__(self, x: HQuat) -> MatFq:
        F, p = self.field, self.p
        inv2 = pow(2, -1, p)
        acc = [[0, 0], [0, 0]]
        for coef, M in zip(x.lip2(), self.lipschitz_images()):
            c = coef * inv2 % p
            for r in range(2):
                for s in range(2):
                    acc[r][s] = (acc[r][s] + c * M.rows[r][s]) % p
        return MatFq(F, tuple(tuple(r) for r in acc))


@functools.lru_cache(maxsize=None)
def split_map(p: int) -> SplitMap:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        raise DomainError("p = 2 is ramified in the Hurwitz order")
    a, b = next((a, b) for a in range(p) for b in range(p) if (a * a + b * b + 1) % p == 0)
    rho = SplitMap(p, a, b)
    one, Im, Jm, Km = rho.lipschitz_images()
    minus = MatFq.scalar(rho.field, 2, p - 1)
    if not (Im @ Im == minus and Jm @ Jm == minus and Im @ Jm == (Jm @ Im).scale(p - 1)):
        raise ConsistencyError(f"split map images fail the quaternion relations mod {p}")
    basis = [rho(x) for x in (HQuat.one(), I, J, W0)]
    flat = MatFq.from_values(rho.field, [[c for r in M.rows for c in r] for M in basis])
    if flat.rank() != 4:
        raise ConsistencyError("split map kernel is larger than pO")
    return rho


def class_kernel(pi: HQuat, p: int) -> ProjPoint:
    A = split_map(p)(pi)
    if A.rank() != 1:
        raise ConsistencyError(f"rho_{p}({pi}) has rank {A.rank()}, expected 1")
    return kernel_point(A)


def sigma_h(omega: HQuat, p: int) -> Perm:
    """The metacommutation permutation of omega on primes_of_norm(p)."""
    classes = primes_of_norm(p)
    index = {c: i for i, c in enumerate(classes)}
    return Perm(classes, tuple(index[metacommute_h(pi, omega)] for pi in classes))


def diagram_check_h(omega: HQuat, p: int) -> bool:
    """Check kernel(rho(sigma_omega(pi))) = rho(omega)^{-1} kernel(rho(pi)) for every class."""
    n = omega.nrd()
    if n == 0 or n % p == 0:
        raise DomainError(f"nrd(omega) = {n} is not prime to {p}")
    rho = split_map(p)
    Q = rho(omega)
    classes = primes_of_norm(p)
    points = [class_kernel(pi, p) for pi in classes]
    if len(set(points)) != p + 1:
        log.error("class-to-point map is not a bijection for p=%d", p)
        return False
    for pi, v in zip(classes, points):
        after = class_kernel(metacommute_h(pi, omega), p)
        if after != tau_apply(Q, v):
            log.error("diagram falsified: pi=%s omega=%s p=%d kernel %s expected %s",
                      pi, omega, p, after, tau_apply(Q, v))
            return False
    return True


def random_quaternion(rng: random.Random, bound: int = 6) -> HQuat:
    return HQuat(*(rng.randint(-bound, bound) for _ in range(4)))


def random_coprime_quaternion(p: int, rng: random.Random, bound: int = 6) -> HQuat:
    while True:
        w = random_quaternion(rng, bound)
        n = w.nrd()
        if n and n % p:
            return w


def random_prime_element(p: int, rng: random.Random) -> HQuat:
    """A random element of norm p (odd p): random class times random unit."""
    return rng.choice(units()) * rng.choice(primes_of_norm(p))
