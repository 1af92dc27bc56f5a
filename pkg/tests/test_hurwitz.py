import itertools
import random
from fractions import Fraction
from math import gcd, isqrt

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.algebras.quaternion import Quaternion

from metacomm import hurwitz
from metacomm.errors import DomainError
from metacomm.fqmat import MatFq
from metacomm.hurwitz import (I, J, K, W0, HQuat, canonical_class, class_kernel, diagram_check_h,
                              factor_hurwitz, is_primitive, metacommute_h, metacommute_h_pair,
                              primes_of_norm, right_divide, right_gcd, sigma_h, split_map, units)
from metacomm.projperm import cycle_type, tau_permutation

PRIMES = (3, 5, 7, 11, 13)


def lip(w, x, y, z):
    return HQuat.from_lipschitz(w, x, y, z)


def elements_of_norm(n):
    """Every Hurwitz integer of reduced norm n, by enumeration of doubled coordinates."""
    out = []
    b = isqrt(4 * n)
    for v in itertools.product(range(-b, b + 1), repeat=4):
        if sum(x * x for x in v) == 4 * n and len({x % 2 for x in v}) == 1:
            out.append(HQuat.from_lip2(*v))
    return out


def to_sympy(x: HQuat):
    W, X, Y, Z = x.lip2()
    return Quaternion(sympy.Rational(W, 2), sympy.Rational(X, 2), sympy.Rational(Y, 2), sympy.Rational(Z, 2))


quats = st.tuples(*[st.integers(-9, 9)] * 4).map(lambda t: HQuat(*t))


# -- arithmetic

def test_norm_examples():
    assert lip(1, 1, 0, 0).nrd() == 2
    assert lip(1, 1, 1, 0).nrd() == 3
    assert W0.nrd() == 1
    assert W0.lip2() == (-1, 1, 1, 1)


def test_basis_relations():
    one = HQuat.one()
    minus = HQuat.integer(-1)
    assert I * I == J * J == K * K == minus
    assert I * J == K and J * I == -K
    assert W0 * W0 + W0 + one == HQuat.integer(0)


@settings(max_examples=200)
@given(quats, quats)
def test_product_matches_sympy(x, y):
    mine = to_sympy(x * y)
    ref = to_sympy(x) * to_sympy(y)
    assert (mine.a, mine.b, mine.c, mine.d) == (ref.a, ref.b, ref.c, ref.d)


@given(quats, quats)
def test_norm_is_multiplicative_and_trace(x, y):
    assert (x * y).nrd() == x.nrd() * y.nrd()
    assert x * x.conj() == HQuat.integer(x.nrd())
    assert (x + x.conj()) == HQuat.integer(x.trd())


def test_units():
    us = units()
    assert len(us) == 24 == len(set(us))
    assert all(u.nrd() == 1 for u in us)
    assert all(u * v in us for u in us for v in us)


def test_lipschitz_parsing():
    assert lip(1, 1, 1, 0) == HQuat(1, 1, 1, 0)
    assert lip(*(Fraction(v, 2) for v in (-1, 1, 1, 1))) == W0
    with pytest.raises(DomainError):
        lip(Fraction(1, 2), Fraction(1, 2), 0, 0)


def test_primitive_examples():
    assert is_primitive(lip(1, 1, 0, 0))
    assert not is_primitive(lip(2, 2, 0, 0))
    ijk = lip(0, 1, 1, 1)
    assert ijk == HQuat.integer(1) + W0 + W0
    assert ijk.coords == (1, 0, 0, 2)
    assert is_primitive(ijk)
    assert not is_primitive(W0 * HQuat.integer(3))


# -- division and gcd

@settings(max_examples=100)
@given(quats, quats)
def test_right_divide_roundtrip(x, y):
    if y.is_zero():
        return
    assert right_divide(x * y, y) == x


def test_right_gcd_examples():
    alpha = lip(1, 1, 1, 0)
    g = right_gcd(alpha, HQuat.one())
    assert g.nrd() == 1 and g == canonical_class(HQuat.one()) == min(units(), key=lambda u: u.coords)
    g = right_gcd(lip(2, 2, 0, 0), HQuat.integer(2))
    assert g == canonical_class(HQuat.integer(2))


def _gcd_oracle(alpha, beta):
    """Largest-norm common right divisor, by enumerating candidates of each norm."""
    n = gcd(alpha.nrd(), beta.nrd())
    best = None
    for d in range(1, n + 1):
        if n % d:
            continue
        for g in elements_of_norm(d):
            if right_divide(alpha, g) is not None and right_divide(beta, g) is not None:
                best = canonical_class(g)
                break
    return best


def test_right_gcd_against_enumeration():
    rng = random.Random(0)
    for _ in range(40):
        alpha = hurwitz.random_quaternion(rng, 4)
        p = rng.choice([2, 3, 5, 7])
        if alpha.is_zero():
            continue
        beta = HQuat.integer(p)
        assert right_gcd(alpha, beta) == _gcd_oracle(alpha, beta)


# -- classes

def test_canonical_class_is_orbit_minimum():
    pi = lip(1, 1, 1, 0)
    c = canonical_class(pi)
    assert c == min((u * pi for u in units()), key=lambda x: x.coords)
    for u in units():
        assert canonical_class(u * pi) == c
    assert canonical_class(c) == c


@pytest.mark.parametrize("p", PRIMES)
def test_class_counts(p):
    classes = primes_of_norm(p)
    assert len(classes) == p + 1
    elems = elements_of_norm(p)
    assert len(elems) == 24 * (p + 1)
    assert {canonical_class(x) for x in elems} == set(classes)


def test_primes_of_norm_rejects_two():
    with pytest.raises(DomainError):
        primes_of_norm(2)
    with pytest.raises(DomainError):
        primes_of_norm(9)


# -- factorization

def test_factor_examples():
    alpha = lip(1, 1, 0, 0) * lip(1, 1, 1, 0)
    fs = factor_hurwitz(alpha, [2, 3])
    assert [f.nrd() for f in fs] == [2, 3] and fs[0] * fs[1] == alpha
    gs = factor_hurwitz(alpha, [3, 2])
    assert [g.nrd() for g in gs] == [3, 2] and gs[0] * gs[1] == alpha
    pi = lip(1, 1, 1, 0)
    assert factor_hurwitz(pi, [3]) == [pi]


def test_factor_rejects_bad_input():
    with pytest.raises(DomainError):
        factor_hurwitz(HQuat.integer(3), [3, 3])
    with pytest.raises(DomainError):
        factor_hurwitz(lip(1, 1, 1, 0), [5])


def test_factor_random_products():
    rng = random.Random(1)
    for _ in range(60):
        primes = rng.sample([3, 5, 7, 11, 13], rng.choice([2, 3]))
        alpha = HQuat.one()
        for p in primes:
            alpha = alpha * hurwitz.random_prime_element(p, rng)
        for order in itertools.permutations(primes):
            fs = factor_hurwitz(alpha, order)
            prod = fs[0]
            for f in fs[1:]:
                prod = prod * f
            assert prod == alpha
            assert [f.nrd() for f in fs] == list(order)
            assert all(canonical_class(f) == f for f in fs[1:])


# -- metacommutation

def _metacommute_oracle(pi, omega):
    """The unique class pi' of norm p with (pi omega) pi'^{-1} integral."""
    p = pi.nrd()
    hits = [c for c in primes_of_norm(p) if right_divide(pi * omega, c) is not None]
    assert len(hits) == 1
    return hits[0]


def test_metacommute_example():
    pi, omega = lip(1, 1, 1, 0), lip(1, 2, 0, 0)
    assert omega.nrd() == 5
    w2, pi2 = metacommute_h_pair(pi, omega)
    assert pi2 == _metacommute_oracle(pi, omega)
    assert pi * omega == w2 * pi2
    assert pi2.nrd() == 3 and w2.nrd() == 5


def test_metacommute_trivial_cases():
    rng = random.Random(2)
    for p in PRIMES:
        for pi in primes_of_norm(p):
            assert metacommute_h(pi, HQuat.one()) == pi
            assert metacommute_h(pi, HQuat.integer(p + 1)) == pi
            u = rng.choice(units())
            assert metacommute_h(u * pi, HQuat.one()) == pi


@pytest.mark.parametrize("p", PRIMES)
def test_metacommute_against_exhaustive_search(p):
    rng = random.Random(p)
    for _ in range(15):
        omega = hurwitz.random_coprime_quaternion(p, rng, 4)
        for pi in primes_of_norm(p):
            assert metacommute_h(pi, omega) == _metacommute_oracle(pi, omega)


def test_metacommute_preconditions():
    with pytest.raises(DomainError):
        metacommute_h(lip(1, 1, 1, 0), HQuat.integer(3))
    with pytest.raises(DomainError):
        metacommute_h(lip(1, 1, 0, 0), HQuat.one())


# -- the split map and the diagram

def test_split_map_examples():
    rho5 = split_map(5)
    assert (rho5.a, rho5.b) == (0, 2)
    assert rho5(I).tolist() == [[0, 2], [2, 0]]
    rho3 = split_map(3)
    assert (rho3.a, rho3.b) == (1, 1)
    assert rho3(I).tolist() == [[1, 1], [1, 2]]
    assert rho3(I) @ rho3(I) == MatFq.scalar(rho3.field, 2, 2)
    for p in PRIMES:
        assert split_map(p)(HQuat.one()) == MatFq.identity(split_map(p).field, 2)


@pytest.mark.parametrize("p", PRIMES)
def test_split_map_is_a_ring_map(p):
    rho = split_map(p)
    rng = random.Random(p)
    for _ in range(50):
        x, y = hurwitz.random_quaternion(rng), hurwitz.random_quaternion(rng)
        assert rho(x * y) == rho(x) @ rho(y)
        assert rho(x + y) == rho(x) + rho(y)
        # determinant of the image is nrd mod p
        M = rho(x)
        det = (M.rows[0][0] * M.rows[1][1] - M.rows[0][1] * M.rows[1][0]) % p
        assert det == x.nrd() % p
    assert rho(HQuat.integer(p)).is_zero()


@pytest.mark.parametrize("p", PRIMES)
def test_class_kernels_are_a_bijection(p):
    points = [class_kernel(pi, p) for pi in primes_of_norm(p)]
    assert len(set(points)) == p + 1


def test_diagram_examples():
    for p in PRIMES:
        assert diagram_check_h(HQuat.one(), p)
    omega = lip(1, 2, 0, 0)
    assert diagram_check_h(omega, 3)
    sigma = sigma_h(omega, 3)
    assert cycle_type(sigma) == cycle_type(tau_permutation(split_map(3)(omega)))


def test_sigma_anti_homomorphism():
    rng = random.Random(3)
    for p in (3, 5, 7):
        for _ in range(10):
            w1 = hurwitz.random_coprime_quaternion(p, rng)
            w2 = hurwitz.random_coprime_quaternion(p, rng)
            assert sigma_h(w1, p).compose(sigma_h(w2, p)) == sigma_h(w2 * w1, p)


def test_diagram_detects_a_wrong_kernel_map(monkeypatch):
    monkeypatch.setattr(hurwitz, "tau_apply", lambda Q, v: v)
    omega = lip(1, 2, 0, 0)
    assert not diagram_check_h(omega, 3)
