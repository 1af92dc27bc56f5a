"""Finite fields F_q, polynomials over them, and the exp/subexp invariants.

Elements of F_q are handled internally as integer codes in ``range(q)``: the
element c_0 + c_1 t + ... + c_{e-1} t^{e-1} of F_p[t]/(modulus) has code
sum(c_i * p**i).  Code 0 is zero and code 1 is one in every field, and for
e = 1 the code is the residue itself.  :class:`FieldElem` wraps a code for
operator-style use; the matrix and permutation layers work on raw codes.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

from .errors import CapacityError, ConsistencyError, DomainError

MAX_FIELD_ORDER = 1 << 20
EXP_SEARCH_CAP = 10**6
_ADD_TABLE_LIMIT = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**e; raise DomainError if q is not a prime power."""
    if q < 2:
        raise DomainError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise DomainError(f"{q} is not a prime power")
    return p, e


# -- raw coefficient-vector helpers over F_p (used only while building tables)

def _vec(code: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _code(vec: Sequence[int], p: int) -> int:
    c = 0
    for x in reversed(vec):
        c = c * p + x
    return c


def _mulmod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic: t^e = -(m_0 + ... + m_{e-1} t^{e-1})
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i in range(e):
                prod[k - e + i] = (prod[k - e + i] - c * modulus[i]) % p
    return prod[:e]


@dataclass(frozen=True)
class Field:
    """The finite field with q = p**e elements.

    Build instances with :func:`fq_make`; direct construction is allowed but
    the modulus is then checked for irreducibility here.
    """

    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None
    _add: list | None = field(default=None, compare=False, repr=False)
    _exp: list | None = field(default=None, compare=False, repr=False)
    _log: list | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.e < 1:
            raise DomainError("extension degree must be positive")
        if self.p**self.e > MAX_FIELD_ORDER:
            raise CapacityError(f"q = {self.p}^{self.e} exceeds MAX_FIELD_ORDER={MAX_FIELD_ORDER}")
        if self.e == 1:
            if self.modulus is not None:
                raise DomainError("prime fields carry no modulus")
            return
        mod = self.modulus
        if mod is None or len(mod) != self.e + 1 or mod[-1] != 1:
            raise DomainError("extension fields need a monic modulus of degree e")
        if not is_irreducible(Poly(Field(self.p), tuple(mod))):
            raise DomainError(f"modulus {list(mod)} is reducible over F_{self.p}")
        self._build_tables()

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        mod = self.modulus
        exp = log = None
        for g in range(2, q):
            gv = _vec(g, p, e)
            table = [1]
            cur = [1] + [0] * (e - 1)
            for _ in range(q - 2):
                cur = _mulmod(cur, gv, mod, p)
                c = _code(cur, p)
                if c == 1:
                    break
                table.append(c)
            if len(table) == q - 1:
                exp = table + table
                log = [0] * q
                for k, c in enumerate(table):
                    log[c] = k
                break
        if exp is None:
            raise ConsistencyError("no primitive element found; modulus is not irreducible")
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        if q <= _ADD_TABLE_LIMIT:
            digits = [_vec(c, p, e) for c in range(q)]
            add = [[_code([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q)]
                   for a in range(q)]
            object.__setattr__(self, "_add", add)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __repr__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.q}[mod {list(self.modulus)}]"

    # -- arithmetic on integer codes

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        p = self.p
        out, k = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * k
            k *= p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        p = self.p
        out, k = 0, 1
        while a:
            a, x = divmod(a, p)
            out += (-x % p) * k
            k *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if a == 0:
            return 1 if n == 0 else 0
        if self.e == 1:
            return pow(a, n, self.p)
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero code."""
        if a == 0:
            raise DomainError("zero has no multiplicative order")
        n = self.q - 1
        k = n
        for r in _prime_factors(n):
            while k % r == 0 and self.pow(a, k // r) == 1:
                k //= r
        return k

    def from_int(self, n: int) -> int:
        """Code of the prime-field element n mod p."""
        return n % self.p

    def encode(self, value) -> int:
        """Code from an int (prime-field scalar) or a length-e coefficient list."""
        if isinstance(value, int):
            return value % self.p
        vec = [int(v) % self.p for v in value]
        if len(vec) > self.e:
            raise DomainError(f"coefficient vector longer than e={self.e}")
        return _code(vec, self.p)

    def decode(self, code: int):
        """Inverse of :meth:`encode`: an int for prime fields, a list otherwise."""
        if self.e == 1:
            return code
        return _vec(code, self.p, self.e)

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, value) -> "FieldElem":
        return FieldElem(self, self.encode(value))


@functools.lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def fq_make(p: int, e: int = 1) -> Field:
    """The field of order p**e with the lexicographically smallest modulus.

    Candidates are monic of degree e over F_p, compared coefficient by
    coefficient starting from the constant term.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if e < 1:
        raise DomainError("extension degree must be positive")
    if p**e > MAX_FIELD_ORDER:
        raise CapacityError(f"q = {p}^{e} exceeds MAX_FIELD_ORDER={MAX_FIELD_ORDER}")
    if e == 1:
        return Field(p)
    base = Field(p)
    for low in itertools.product(range(p), repeat=e):
        if low[0] == 0:
            continue
        if is_irreducible(Poly(base, low + (1,))):
            return Field(p, e, low + (1,))
    raise ConsistencyError(f"no irreducible polynomial of degree {e} over F_{p}")


def field_of_order(q: int) -> Field:
    return fq_make(*prime_power(q))


@dataclass(frozen=True)
class FieldElem:
    owner: Field
    code: int

    @property
    def rep(self) -> tuple[int, ...]:
        return tuple(_vec(self.code, self.owner.p, self.owner.e))

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.owner != self.owner:
                raise DomainError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self.owner.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElem(self.owner, self.owner.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElem(self.owner, self.owner.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElem(self.owner, self.owner.sub(b, self.code))

    def __neg__(self):
        return FieldElem(self.owner, self.owner.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElem(self.owner, self.owner.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElem(self.owner, self.owner.div(self.code, b))

    def __pow__(self, n: int):
        return FieldElem(self.owner, self.owner.pow(self.code, n))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.owner, self.owner.inv(self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        if self.owner.e == 1:
            return f"{self.code} (mod {self.owner.p})"
        return f"{list(self.rep)} in {self.owner!r}"


@dataclass(frozen=True)
class Poly:
    """Polynomial over a finite field; ``coeffs`` are codes, constant term first."""

    field: Field
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = tuple(self.coeffs)
        n = len(c)
        while n and c[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "coeffs", c[:n])

    @classmethod
    def from_list(cls, fld: Field, values) -> "Poly":
        return cls(fld, tuple(fld.encode(v) for v in values))

    @classmethod
    def x(cls, fld: Field) -> "Poly":
        return cls(fld, (0, 1))

    @classmethod
    def const(cls, fld: Field, c: int) -> "Poly":
        return cls(fld, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def sort_key(self):
        return (self.degree, self.coeffs)

    def __lt__(self, other: "Poly"):
        return self.sort_key() < other.sort_key()

    def to_list(self) -> list:
        return [self.field.decode(c) for c in self.coeffs]

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = str(self.field.decode(c)).replace(" ", "")
            if k == 0:
                terms.append(cs)
            else:
                mon = "x" if k == 1 else f"x^{k}"
                terms.append(mon if c == 1 else f"{cs}*{mon}")
        return " + ".join(terms)

    def monic(self) -> "Poly":
        if self.is_zero():
            raise DomainError("zero polynomial has no monic associate")
        return self.scale(self.field.inv(self.lead))

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.mul(a, c) for a in self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Poly(F, tuple(F.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.neg(x) for x in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, tuple(out))

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dg = other.degree
        inv_lead = F.inv(other.lead)
        quo = [0] * max(len(r) - dg, 0)
        for k in range(len(r) - 1, dg - 1, -1):
            c = r[k]
            if c:
                t = F.mul(c, inv_lead)
                quo[k - dg] = t
                for i, y in enumerate(other.coeffs):
                    r[k - dg + i] = F.sub(r[k - dg + i], F.mul(t, y))
        return Poly(F, tuple(quo)), Poly(F, tuple(r[:dg]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def monic_polys(fld: Field, d: int) -> Iterator[Poly]:
    """All monic polynomials of degree d, in lexicographic order (constant term first)."""
    for low in itertools.product(range(fld.q), repeat=d):
        yield Poly(fld, low + (1,))


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    if f.degree == 1:
        return True
    F = f.field
    if any(f(x) == 0 for x in F.elements()):
        return False
    for d in range(2, f.degree // 2 + 1):
        for g in monic_polys(F, d):
            if (f % g).is_zero():
                return False
    return True


def irreducibles(fld: Field, d: int) -> list[Poly]:
    return [f for f in monic_polys(fld, d) if is_irreducible(f)]


def poly_factor(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, sorted by (degree, coefficients).

    Trial division in ascending degree: once every factor of degree < k is
    divided out, any monic degree-k divisor is necessarily irreducible.
    """
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    F = f.field
    rest = f.monic()
    found: list[tuple[Poly, int]] = []

    def strip(g: Poly):
        nonlocal rest
        k = 0
        while True:
            quo, r = divmod(rest, g)
            if not r.is_zero():
                break
            rest = quo
            k += 1
        if k:
            found.append((g, k))

    for x in F.elements():
        if rest.degree >= 1 and rest(x) == 0:
            strip(Poly(F, (F.neg(x), 1)))
    d = 2
    while 2 * d <= rest.degree:
        for g in monic_polys(F, d):
            strip(g)
            if 2 * d > rest.degree:
                break
        d += 1
    if rest.degree >= 1:
        found.append((rest, 1))
    found.sort(key=lambda t: t[0].sort_key())
    return found


def _check_exp_input(f: Poly):
    if f.is_zero() or not f.is_monic():
        raise DomainError(f"{f} is not monic")
    if f.coeffs[0] == 0:
        raise DomainError(f"x divides {f}; x^e - a is never divisible by it")


def _x_powers(f: Poly, cap: int) -> Iterator[tuple[int, Poly]]:
    """Yield (e, x^e mod f) for e = 1, 2, ... up to the search bound."""
    F = f.field
    bound = F.q**f.degree - 1 if is_irreducible(f) else cap
    bound = min(bound, cap)
    x = Poly.x(F)
    r = x % f
    for e in range(1, bound + 1):
        yield e, r
        r = (r * x) % f
    raise CapacityError(f"exponent search for {f} exceeded {bound} steps")


def poly_exp(f: Poly, cap: int = EXP_SEARCH_CAP) -> int:
    """Least e >= 1 with f | x^e - 1."""
    _check_exp_input(f)
    if f.degree == 0:
        return 1
    for e, r in _x_powers(f, cap):
        if r.coeffs == (1,):
            return e
    raise ConsistencyError("unreachable")


def poly_subexp(f: Poly, cap: int = EXP_SEARCH_CAP) -> int:
    """Least e >= 1 with f | x^e - a for some nonzero scalar a."""
    _check_exp_input(f)
    if f.degree == 0:
        return 1
    for e, r in _x_powers(f, cap):
        if r.degree == 0:
            return e
    raise ConsistencyError("unreachable")


def subexp_from_exp(f: Poly) -> int:
    """exp(f) / gcd(q - 1, exp(f)); valid for irreducible f, used as a cross-check."""
    e = poly_exp(f)
    return e // gcd(f.field.q - 1, e)


def embed(small: Field, big: Field) -> list[int]:
    """Codes of ``small`` mapped into ``big`` by a field embedding.

    For prime fields the map is the identity on residues; otherwise the
    generator t of ``small`` goes to the smallest root of its modulus in
    ``big``.
    """
    if small.p != big.p or big.e % small.e:
        raise DomainError(f"{small!r} does not embed in {big!r}")
    if small.e == 1:
        return list(range(small.p))
    mod_big = Poly(big, tuple(big.from_int(c) for c in small.modulus))
    t = next(x for x in big.elements() if mod_big(x) == 0)
    powers = [1]
    for _ in range(small.e - 1):
        powers.append(big.mul(powers[-1], t))
    out = []
    for code in small.elements():
        acc = 0
        for c, tp in zip(_vec(code, small.p, small.e), powers):
            acc = big.add(acc, big.mul(big.from_int(c), tp))
        out.append(acc)
    return out
