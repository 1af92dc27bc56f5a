import random

import pytest
from hypothesis import given, settings, strategies as st

from metacomm.errors import DomainError
from metacomm.fq import field_of_order, fq_make
from metacomm.fqmat import MatFq, random_gl
from metacomm.projperm import (CycleType, Perm, canonicalize_point, cycle_type,
                               enumerate_projective, point_index, projective_size, tau_apply,
                               tau_permutation)

F2, F3, F5, F7 = (fq_make(p) for p in (2, 3, 5, 7))


def pt(F, *coords):
    return canonicalize_point(F, coords)


def test_enumerate_examples():
    pts = enumerate_projective(F3, 2)
    assert [str(v) for v in pts] == ["(0:1)", "(1:0)", "(1:1)", "(1:2)"]
    assert len(enumerate_projective(F2, 3)) == 7
    assert len(enumerate_projective(F5, 2)) == 6
    assert list(pts) == sorted(pts)


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (3, 3), (4, 2), (4, 3), (5, 2), (9, 2), (2, 4)])
def test_enumeration_is_complete_and_canonical(q, m):
    F = field_of_order(q)
    pts = enumerate_projective(F, m)
    assert len(pts) == len(set(pts)) == projective_size(q, m) == (q**m - 1) // (q - 1)
    for v in pts:
        first = next(c for c in v.coords if c)
        assert first == 1
        assert point_index(v) == pts.index(v)


def test_canonicalize_examples():
    assert str(pt(F3, 2, 2)) == "(1:1)"
    assert str(pt(F5, 0, 4)) == "(0:1)"
    assert str(pt(F3, 2, 1)) == "(1:2)"
    with pytest.raises(DomainError):
        pt(F3, 0, 0)


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.data())
def test_canonicalize_is_scale_invariant(q, data):
    F = field_of_order(q)
    v = data.draw(st.lists(st.integers(0, q - 1), min_size=2, max_size=4))
    c = data.draw(st.integers(1, q - 1))
    if not any(v):
        return
    scaled = [F.mul(c, x) for x in v]
    assert canonicalize_point(F, v) == canonicalize_point(F, scaled)


def test_tau_apply_examples():
    Q = MatFq.from_values(F3, [[2, 0], [0, 1]])
    assert str(tau_apply(Q, pt(F3, 1, 2))) == "(1:1)"
    v = pt(F5, 1, 3)
    assert tau_apply(MatFq.identity(F5, 2), v) == v
    assert str(tau_apply(MatFq.from_values(F3, [[0, 2], [1, 0]]), pt(F3, 1, 0))) == "(0:1)"


def test_tau_permutation_examples():
    assert tau_permutation(MatFq.identity(F3, 2)).is_identity()
    ct = cycle_type(tau_permutation(MatFq.from_values(F3, [[0, 2], [1, 0]])))
    assert ct.cycles == {2: 2} and ct.fixed == 0 and ct.sign == 1
    ct = cycle_type(tau_permutation(MatFq.from_values(F2, [[1, 0], [1, 1]])))
    assert ct.cycles == {1: 1, 2: 1} and ct.fixed == 1


def test_cycle_type_examples():
    ident = cycle_type(Perm(tuple(range(4)), (0, 1, 2, 3)))
    assert ident.cycles == {1: 4} and ident.sign == 1 and ident.fixed == 4
    three = cycle_type(Perm(tuple(range(3)), (1, 2, 0)))
    assert three.cycles == {3: 1} and three.sign == 1 and three.fixed == 0
    swap = cycle_type(Perm(tuple(range(3)), (1, 0, 2)))
    assert swap.sign == -1
    assert swap.to_json() == {"fixed": 1, "cycles": {"1": 1, "2": 1}, "sign": -1}


def test_perm_rejects_non_bijections():
    with pytest.raises(DomainError):
        Perm(tuple(range(3)), (0, 0, 1))


def test_sign_matches_inversion_parity():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 9)
        images = list(range(n))
        rng.shuffle(images)
        inv = sum(images[i] > images[j] for i in range(n) for j in range(i + 1, n))
        assert cycle_type(Perm(tuple(range(n)), tuple(images))).sign == (-1) ** inv


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3)]), st.integers(0, 2**32))
def test_tau_is_an_anti_homomorphism(qm, seed):
    """tau_{Q1} after tau_{Q2} equals tau_{Q2 Q1}, since (Q2 Q1)^-1 = Q1^-1 Q2^-1."""
    q, m = qm
    rng = random.Random(seed)
    F = field_of_order(q)
    Q1, Q2 = random_gl(F, m, rng), random_gl(F, m, rng)
    t1, t2 = tau_permutation(Q1), tau_permutation(Q2)
    assert t1.compose(t2) == tau_permutation(Q2 @ Q1)
    assert t1.inverse() == tau_permutation(Q1.inverse())


@pytest.mark.parametrize("q,m", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_tau_identity_iff_scalar(q, m):
    from metacomm.fqmat import iter_gl
    F = field_of_order(q)
    for Q in iter_gl(F, m):
        assert tau_permutation(Q).is_identity() == Q.is_scalar()


def test_cycle_sizes_partition_the_points():
    rng = random.Random(4)
    for _ in range(30):
        F = fq_make(rng.choice([2, 3, 5]))
        m = rng.choice([2, 3])
        ct = cycle_type(tau_permutation(random_gl(F, m, rng)))
        assert isinstance(ct, CycleType)
        assert sum(k * v for k, v in ct.cycles.items()) == projective_size(F.q, m)
        assert ct.fixed == ct.cycles.get(1, 0)
