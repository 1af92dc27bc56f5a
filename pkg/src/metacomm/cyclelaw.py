"""Closed-form cycle structure of v -> Q^{-1} v on P^{m-1}(F_q).

Each formula path can be checked against brute force (``tau_permutation``
plus ``cycle_type``); :func:`cycle_structure` dispatches between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Optional

from .errors import ConsistencyError, DomainError
from .fq import Poly, embed, fq_make, is_irreducible, poly_factor, poly_subexp
from .fqmat import MatFq, charpoly, elementary_divisors, gl_order, minpoly
from .projperm import cycle_type, projective_size, sign_of_cycles, tau_permutation

SOURCES = ("formula-single-block", "formula-gl2", "formula-diagonalizable", "brute-force")


@dataclass(frozen=True)
class CycleReport:
    source: str
    type_map: dict[int, int]
    fixed_points: int
    ell: Optional[int] = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise DomainError(f"unknown source {self.source!r}")
        object.__setattr__(self, "type_map", dict(sorted((k, v) for k, v in self.type_map.items() if v)))

    @property
    def size(self) -> int:
        return sum(k * v for k, v in self.type_map.items())

    @property
    def sign(self) -> int:
        return sign_of_cycles(self.type_map)

    def to_json(self) -> dict:
        out = {
            "fixed": self.fixed_points,
            "cycles": {str(k): v for k, v in self.type_map.items()},
            "sign": self.sign,
            "source": self.source,
        }
        if self.ell is not None:
            out["ell"] = self.ell
        return out


def _require_invertible(Q: MatFq):
    if not Q.is_invertible():
        raise DomainError("Q is singular")


@dataclass(frozen=True)
class EigenvalueTerm:
    value: int           # code in F_q
    algebraic: int       # multiplicity as a root of charpoly
    geometric: int       # dim ker(Q - value I)
    contribution: int    # (q^geometric - 1)/(q - 1)


def fixed_point_terms(Q: MatFq) -> list[EigenvalueTerm]:
    """Per-eigenvalue breakdown of the fixed-point count, eigenvalues in F_q only."""
    _require_invertible(Q)
    F, m = Q.field, Q.m
    q = F.q
    chi = charpoly(Q)
    terms = []
    for lam in F.elements():
        if chi(lam) != 0:
            continue
        alg = 0
        f = chi
        lin = Poly(F, (F.neg(lam), 1))
        while True:
            quo, r = divmod(f, lin)
            if not r.is_zero():
                break
            f = quo
            alg += 1
        geo = m - (Q - MatFq.scalar(F, m, lam)).rank()
        terms.append(EigenvalueTerm(lam, alg, geo, (q**geo - 1) // (q - 1)))
    return terms


def fixed_point_count(Q: MatFq) -> int:
    """Sum over eigenvalues lambda in F_q of #P^{a-1}(F_q), a = dim ker(Q - lambda I)."""
    if Q.m < 2:
        raise DomainError("the fixed-point formula needs m >= 2")
    return sum(t.contribution for t in fixed_point_terms(Q))


def multiplicity_readings_differ(Q: MatFq) -> bool:
    """True when algebraic and geometric multiplicities give different counts."""
    q = Q.field.q
    terms = fixed_point_terms(Q)
    return sum((q**t.algebraic - 1) // (q - 1) for t in terms) != sum(t.contribution for t in terms)


def single_block_cycle_counts(phi: Poly, k: int) -> dict[int, int]:
    """Cycle counts of the hypercompanion H(phi^k).

    The vectors annihilated by phi^j but not phi^(j-1) number
    q^{jd} - q^{(j-1)d}; each projective orbit among them has length
    f_j = subexp(phi^j) and holds q - 1 vectors per point.
    """
    if k < 1:
        raise DomainError("k must be positive")
    if not phi.is_monic() or not is_irreducible(phi):
        raise DomainError(f"{phi} is not monic irreducible")
    q, d = phi.field.q, phi.degree
    counts: dict[int, int] = {}
    for j in range(1, k + 1):
        fj = poly_subexp(phi**j)
        num = q ** (j * d) - q ** (j * d - d)
        den = (q - 1) * fj
        if num % den:
            raise ConsistencyError(f"non-integral cycle count {num}/{den} for j={j}")
        counts[fj] = counts.get(fj, 0) + num // den
    return dict(sorted(counts.items()))


def fj_fast(phi: Poly, j: int) -> int:
    """subexp(phi) * p^t with t the least r >= 0 such that p^r >= j."""
    if j < 1:
        raise DomainError("j must be positive")
    p = phi.field.p
    t = 0
    while p**t < j:
        t += 1
    return poly_subexp(phi) * p**t


def pgl_order(Q: MatFq) -> int:
    """Least l >= 1 with Q^l scalar."""
    _require_invertible(Q)
    bound = gl_order(Q.field.q, Q.m)
    P = Q
    for ell in range(1, bound + 1):
        if P.is_scalar():
            return ell
        P = P @ Q
    raise ConsistencyError("no scalar power found below |GL_m(F_q)|")


def _split_report(source: str, Q: MatFq, ell: int, fixed: int) -> CycleReport:
    total = projective_size(Q.field.q, Q.m)
    rest = total - fixed
    if rest and ell == 1:
        raise ConsistencyError("scalar power 1 but non-fixed points exist")
    if rest % ell:
        raise ConsistencyError(f"{rest} non-fixed points do not split into {ell}-cycles")
    tm = {1: fixed}
    if rest:
        tm[ell] = tm.get(ell, 0) + rest // ell
    return CycleReport(source, tm, fixed, ell)


def gl2_cycle_structure(Q: MatFq) -> CycleReport:
    """m = 2: every non-fixed point lies in a cycle of length pgl_order(Q)."""
    if Q.m != 2:
        raise DomainError("gl2_cycle_structure needs a 2x2 matrix")
    _require_invertible(Q)
    return _split_report("formula-gl2", Q, pgl_order(Q), fixed_point_count(Q))


def eigenvalues_in_splitting_field(Q: MatFq):
    """Distinct eigenvalues of Q as codes of F_{q^s}, s the splitting degree.

    Returns (big_field, eigenvalues).
    """
    F = Q.field
    chi = charpoly(Q)
    s = lcm(*(phi.degree for phi, _ in poly_factor(chi)))
    big = fq_make(F.p, F.e * s)
    emb = embed(F, big)
    chi_big = Poly(big, tuple(emb[c] for c in chi.coeffs))
    roots = [x for x in big.elements() if x and chi_big(x) == 0]
    return big, roots


def eigenvalue_ratio_orders(Q: MatFq) -> set[int]:
    """Multiplicative orders of lambda_i / lambda_j over distinct eigenvalue pairs."""
    big, roots = eigenvalues_in_splitting_field(Q)
    orders = set()
    for a in roots:
        for b in roots:
            if a != b:
                orders.add(big.order(big.div(a, b)))
    return orders


def is_diagonalizable(Q: MatFq) -> bool:
    """Diagonalizable over the algebraic closure iff the minimal polynomial is squarefree."""
    return all(k == 1 for _, k in poly_factor(minpoly(Q)))


def uniform_cycle_check(Q: MatFq) -> Optional[CycleReport]:
    """Report for a diagonalizable Q whose eigenvalue ratios share one order.

    Returns None when two ratios have different multiplicative orders.
    """
    _require_invertible(Q)
    if not is_diagonalizable(Q):
        raise DomainError("Q is not diagonalizable over the algebraic closure")
    orders = eigenvalue_ratio_orders(Q)
    if len(orders) > 1:
        return None
    fixed = fixed_point_count(Q) if Q.m >= 2 else 1
    return _split_report("formula-diagonalizable", Q, pgl_order(Q), fixed)


def brute_force_report(Q: MatFq) -> CycleReport:
    ct = cycle_type(tau_permutation(Q))
    return CycleReport("brute-force", ct.cycles, ct.fixed)


def cycle_structure(Q: MatFq, verify: bool = False) -> CycleReport:
    """Cycle structure by the cheapest applicable closed form, else brute force.

    With ``verify`` the result is also compared with brute force, and a
    mismatch raises ConsistencyError.
    """
    _require_invertible(Q)
    divisors = elementary_divisors(Q)
    report = None
    if len(divisors) == 1:
        phi, k = divisors[0]
        tm = single_block_cycle_counts(phi, k)
        report = CycleReport("formula-single-block", tm, tm.get(1, 0))
    elif Q.m == 2:
        report = gl2_cycle_structure(Q)
    elif is_diagonalizable(Q):
        report = uniform_cycle_check(Q)
    if report is None:
        return brute_force_report(Q)
    total = projective_size(Q.field.q, Q.m)
    if report.size != total:
        raise ConsistencyError(f"{report.source} accounts for {report.size} of {total} points")
    if verify:
        bf = brute_force_report(Q)
        if bf.type_map != report.type_map:
            raise ConsistencyError(
                f"{report.source} gives {report.type_map}, brute force gives {bf.type_map} for {Q!r}")
    return report
