import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from metacomm.errors import DomainError
from metacomm.fq import (Poly, embed, field_of_order, fq_make, irreducibles, is_irreducible,
                         monic_polys, poly_exp, poly_factor, poly_subexp, prime_power,
                         subexp_from_exp)

FIELD_ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def P(F, *coeffs):
    """Polynomial from low-first integer coefficients."""
    return Poly.from_list(F, list(coeffs))


# -- construction

def test_prime_field_has_no_modulus():
    F2 = fq_make(2, 1)
    assert F2.q == 2 and F2.e == 1
    F3 = fq_make(3)
    assert F3.q == 3 and list(F3.elements()) == [0, 1, 2]


def test_f4_modulus_is_x2_x_1():
    F4 = fq_make(2, 2)
    assert tuple(F4.modulus) == (1, 1, 1)


def test_modulus_is_lexicographically_smallest_irreducible():
    # sympy decides irreducibility independently of our trial division
    for p, e in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]:
        F = fq_make(p, e)
        base = fq_make(p)
        candidates = []
        for tail in itertools.product(range(p), repeat=e):
            f = sympy.Poly(list(reversed(list(tail) + [1])), sympy.Symbol("x"), modulus=p)
            if f.is_irreducible:
                candidates.append(tail)
        assert tuple(F.modulus[:e]) == min(candidates)
        assert is_irreducible(P(base, *F.modulus))


def test_prime_power_rejects_composites():
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12, 0, -4):
        with pytest.raises(DomainError):
            prime_power(bad)
    with pytest.raises(DomainError):
        fq_make(4, 1)


def test_table_size_cap():
    with pytest.raises(DomainError):
        fq_make(2, 40)


# -- field axioms (property tests)

fields = st.sampled_from(FIELD_ORDERS).map(field_of_order)


@st.composite
def field_and_elems(draw, n=3):
    F = draw(fields)
    return (F,) + tuple(draw(st.integers(0, F.q - 1)) for _ in range(n))


@given(field_and_elems())
def test_ring_axioms(data):
    F, a, b, c = data
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a


@given(field_and_elems(1))
def test_inverse_and_fermat(data):
    F, a = data
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1
        assert (F.q - 1) % F.order(a) == 0
    else:
        with pytest.raises(ZeroDivisionError):
            F.inv(0)
    assert F.pow(a, F.q) == a


@given(field_and_elems(2))
def test_frobenius_is_additive(data):
    F, a, b = data
    p = F.p
    assert F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p))


def test_multiplicative_group_is_cyclic():
    for q in FIELD_ORDERS:
        F = field_of_order(q)
        assert max(F.order(a) for a in range(1, q)) == q - 1


def test_field_elem_operators():
    F = fq_make(3, 2)
    a, b = F(4), F(7)
    assert (a + b).code == F.add(4, 7)
    assert (a * b / b) == a
    assert (a - a).code == 0
    assert (a ** (F.q - 1)).code == 1


def test_encode_decode_roundtrip():
    F = fq_make(3, 2)
    for c in F.elements():
        assert F.encode(F.decode(c)) == c
    assert F.encode(5) == 2


# -- polynomials

def test_factor_examples():
    F3, F2 = fq_make(3), fq_make(2)
    assert poly_factor(P(F3, 2, 0, 1)) == [(P(F3, 1, 1), 1), (P(F3, 2, 1), 1)]
    assert poly_factor(P(F2, 1, 1, 1)) == [(P(F2, 1, 1, 1), 1)]
    assert poly_factor(P(F3, 1, 2, 1)) == [(P(F3, 1, 1), 2)]
    with pytest.raises(DomainError):
        poly_factor(Poly(F3, ()))


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 6), min_size=2, max_size=7))
def test_factor_against_sympy(p, raw):
    F = fq_make(p)
    f = P(F, *raw)
    if f.is_zero() or f.degree < 1:
        return
    ours = poly_factor(f)
    prod = Poly.const(F, f.lead)
    for g, k in ours:
        assert g.is_monic() and is_irreducible(g)
        prod = prod * g**k
    assert prod == f
    assert ours == sorted(ours, key=lambda t: (t[0].sort_key(), t[1]))
    x = sympy.Symbol("x")
    sp = sympy.Poly(list(reversed([c % p for c in raw])), x, modulus=p)
    theirs = sorted((g.degree(), k) for g, k in sp.factor_list()[1])
    assert sorted((g.degree, k) for g, k in ours) == theirs


def test_irreducible_counts_match_necklace_formula():
    def count(q, d):
        return sum(sympy.mobius(d // k) * q**k for k in sympy.divisors(d)) // d
    for q in (2, 3, 4, 5):
        F = field_of_order(q)
        for d in (1, 2, 3):
            assert len(irreducibles(F, d)) == count(q, d)


def test_monic_polys_are_enumerated_in_order():
    F = fq_make(3)
    polys = list(monic_polys(F, 2))
    assert len(polys) == 9
    assert [f.coeffs[:2] for f in polys] == sorted(f.coeffs[:2] for f in polys)


def test_exp_examples():
    for q in (2, 3, 4, 5):
        F = field_of_order(q)
        assert poly_exp(P(F, F.neg(1), 1)) == 1
        assert poly_subexp(P(F, F.neg(1), 1)) == 1
    F2, F3 = fq_make(2), fq_make(3)
    assert poly_exp(P(F2, 1, 1, 1)) == 3
    assert poly_exp(P(F3, 1, 0, 1)) == 4
    assert poly_subexp(P(F3, 1, 0, 1)) == 2
    assert poly_subexp(P(F2, 1, 1) ** 2) == 2


def test_exp_rejects_x_factor():
    F = fq_make(3)
    with pytest.raises(DomainError):
        poly_exp(P(F, 0, 1))
    with pytest.raises(DomainError):
        poly_subexp(P(F, 0, 1, 1))


def _exp_oracle(f):
    """Least e with x^e = 1 mod f, by repeated multiplication."""
    F = f.field
    x = Poly.x(F)
    power = x % f
    e = 1
    while power != Poly.const(F, 1):
        power = (power * x) % f
        e += 1
    return e


def test_exp_against_naive_oracle():
    for q in (2, 3, 4, 5):
        F = field_of_order(q)
        for d in (1, 2, 3):
            for phi in irreducibles(F, d):
                if phi.coeffs[0] == 0:
                    continue
                assert poly_exp(phi) == _exp_oracle(phi)
                assert poly_subexp(phi) == subexp_from_exp(phi)


def test_embedding_is_a_ring_homomorphism():
    for small, big in [((2, 1), (2, 4)), ((2, 2), (2, 4)), ((3, 1), (3, 2)), ((2, 1), (2, 3))]:
        S, B = fq_make(*small), fq_make(*big)
        emb = embed(S, B)
        assert emb[0] == 0 and emb[1] == 1
        assert len(set(emb)) == S.q
        for a in S.elements():
            for b in S.elements():
                assert emb[S.add(a, b)] == B.add(emb[a], emb[b])
                assert emb[S.mul(a, b)] == B.mul(emb[a], emb[b])
    with pytest.raises(DomainError):
        embed(fq_make(2, 2), fq_make(2, 3))


def test_poly_division_identity():
    F = fq_make(5)
    a, b = P(F, 1, 2, 3, 4, 1), P(F, 2, 0, 1)
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree < b.degree
