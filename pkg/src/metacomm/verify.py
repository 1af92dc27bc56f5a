"""Verification sweeps: each one compares a closed form or a structural claim
against an independent computation over an enumerated or seeded-random set
of cases.

A sweep builds its case list up front from ``random.Random(seed)``, checks
every case with a module-level function (so cases can be farmed out to a
process pool), and merges the outcomes in case order.  A check returns
``None`` on success or a JSON-able witness dict on failure.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable

from . import cyclelaw, fq, fqmat, hurwitz, projperm, zmat
from .errors import MetacommError
from .fq import Poly, fq_make, field_of_order, irreducibles
from .fqmat import MatFq
from .hurwitz import HQuat
from .zmat import MatZ

MAX_WITNESSES = 10


@dataclass
class SweepResult:
    suite: str
    checked: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checked": self.checked,
            "failure_count": len(self.failures),
            "failures": self.failures[:MAX_WITNESSES],
            "details": self.details,
        }


def _guarded(check: Callable, case):
    try:
        return check(case)
    except MetacommError as exc:
        return {"case": _describe(case), "error": f"{type(exc).__name__}: {exc}"}


def _describe(obj):
    if isinstance(obj, (MatFq, MatZ)):
        return obj.tolist()
    if isinstance(obj, HQuat):
        return obj.tolist()
    if isinstance(obj, Poly):
        return {"q": obj.field.q, "coeffs": obj.to_list()}
    if isinstance(obj, (tuple, list)):
        return [_describe(x) for x in obj]
    return obj


def _run(suite: str, cases: list, check: Callable, jobs: int = 1) -> SweepResult:
    res = SweepResult(suite)
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_guarded, itertools.repeat(check), cases,
                                     chunksize=max(1, len(cases) // (4 * jobs))))
    else:
        outcomes = [_guarded(check, c) for c in cases]
    res.checked = len(cases)
    res.failures = [w for w in outcomes if w is not None]
    return res


# -- hypercompanion blocks against brute force

def _check_fripertinger(case):
    phi, k = case
    formula = cyclelaw.single_block_cycle_counts(phi, k)
    brute = projperm.cycle_type(projperm.tau_permutation(fqmat.hypercompanion(phi, k))).cycles
    if formula != brute:
        return {"q": phi.field.q, "phi": phi.to_list(), "k": k,
                "formula": _str_keys(formula), "brute_force": _str_keys(brute)}
    return None


def _str_keys(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


def _units_only(polys):
    return [f for f in polys if f.coeffs[0] != 0]


def fripertinger_cases(qs=(2, 3, 4, 5), max_dk: int = 4) -> list:
    cases = []
    for q in qs:
        F = field_of_order(q)
        for d in range(1, max_dk + 1):
            # phi = x has no invertible hypercompanion and no exponent
            for phi in _units_only(irreducibles(F, d)):
                for k in range(1, max_dk // d + 1):
                    cases.append((phi, k))
    return cases


def sweep_fripertinger(max_q: int = 5, jobs: int = 1) -> SweepResult:
    qs = [q for q in (2, 3, 4, 5) if q <= max_q]
    return _run("fripertinger", fripertinger_cases(qs), _check_fripertinger, jobs)


# -- fixed points

def _check_fixed(Q):
    formula = cyclelaw.fixed_point_count(Q)
    brute = projperm.cycle_type(projperm.tau_permutation(Q)).fixed
    if formula != brute:
        return {"q": Q.field.q, "Q": Q.tolist(), "formula": formula, "brute_force": brute}
    return None


def fixed_point_cases(seed: int = 0, samples: int = 1000, max_q: int = 7) -> list:
    rng = random.Random(seed)
    cases = []
    for q, m in ((2, 2), (3, 2), (2, 3)):
        if q <= max_q:
            cases.extend(fqmat.iter_gl(fq_make(q), m))
    for q, m in ((5, 2), (7, 2), (3, 3)):
        if q <= max_q:
            F = fq_make(q)
            cases.extend(fqmat.random_gl(F, m, rng) for _ in range(samples))
    return cases


def sweep_fixedpoints(seed: int = 0, max_q: int = 7, samples: int = 1000, jobs: int = 1) -> SweepResult:
    cases = fixed_point_cases(seed, samples, max_q)
    res = _run("fixedpoints", cases, _check_fixed, jobs)
    res.details["multiplicity_readings_differ"] = sum(
        cyclelaw.multiplicity_readings_differ(Q) for Q in cases)
    return res


# -- GL_2 theorem

def _check_gl2(Q):
    ell = cyclelaw.pgl_order(Q)
    brute = projperm.cycle_type(projperm.tau_permutation(Q)).cycles
    lengths = {k for k in brute if k != 1}
    formula = cyclelaw.gl2_cycle_structure(Q).type_map
    if not lengths <= {ell} or formula != brute:
        return {"q": Q.field.q, "Q": Q.tolist(), "ell": ell,
                "brute_force": _str_keys(brute), "formula": _str_keys(formula)}
    return None


def sweep_gl2(max_q: int = 5, jobs: int = 1) -> SweepResult:
    cases = []
    for q in (2, 3, 5):
        if q <= max_q:
            cases.extend(fqmat.iter_gl(fq_make(q), 2))
    return _run("gl2", cases, _check_gl2, jobs)


# -- subexp identity and the fast f_j rule

def _check_subexp(phi):
    e = fq.poly_exp(phi)
    s = fq.poly_subexp(phi)
    bad = {}
    if s * gcd(phi.field.q - 1, e) != e:
        bad["identity"] = {"exp": e, "subexp": s}
    for j in range(1, 5):
        fast = cyclelaw.fj_fast(phi, j)
        direct = fq.poly_subexp(phi**j)
        if fast != direct:
            bad[f"j={j}"] = {"fast": fast, "direct": direct}
    if bad:
        return {"q": phi.field.q, "phi": phi.to_list(), **bad}
    return None


def sweep_subexp(max_q: int = 5, jobs: int = 1) -> SweepResult:
    cases = []
    for q in (2, 3, 4, 5):
        if q <= max_q:
            F = field_of_order(q)
            for d in (1, 2, 3):
                cases.extend(_units_only(irreducibles(F, d)))
    return _run("subexp", cases, _check_subexp, jobs)


# -- diagonalizable matrices

def random_diagonalizable(F, m: int, rng: random.Random) -> MatFq:
    """Half the time T D T^{-1} with D diagonal, otherwise a random diagonalizable matrix."""
    if rng.random() < 0.5:
        D = MatFq(F, tuple(tuple(rng.randrange(1, F.q) if i == j else 0 for j in range(m))
                           for i in range(m)))
        T = fqmat.random_gl(F, m, rng)
        return T @ D @ T.inverse()
    while True:
        Q = fqmat.random_gl(F, m, rng)
        if cyclelaw.is_diagonalizable(Q):
            return Q


def _check_diagonalizable(Q):
    report = cyclelaw.uniform_cycle_check(Q)
    brute = projperm.cycle_type(projperm.tau_permutation(Q)).cycles
    uniform = len({k for k in brute if k != 1}) <= 1
    ell = cyclelaw.pgl_order(Q)
    orders = cyclelaw.eigenvalue_ratio_orders(Q)
    ok = (report is not None) == uniform
    if ok and report is not None:
        ok = report.type_map == brute and report.ell == ell and orders <= {ell}
    if not ok:
        return {"q": Q.field.q, "Q": Q.tolist(), "verdict": report is not None,
                "brute_force": _str_keys(brute), "pgl_order": ell, "ratio_orders": sorted(orders)}
    return None


def sweep_diagonalizable(seed: int = 0, samples: int = 500, jobs: int = 1) -> SweepResult:
    rng = random.Random(seed)
    combos = [(5, 2), (5, 3), (7, 2), (7, 3)]
    cases = []
    for i in range(samples):
        q, m = combos[i % len(combos)]
        cases.append(random_diagonalizable(fq_make(q), m, rng))
    res = _run("diagonalizable", cases, _check_diagonalizable, jobs)
    res.details["uniform_cases"] = sum(cyclelaw.uniform_cycle_check(Q) is not None for Q in cases)
    return res


# -- matrix-order diagram

def _check_diagram_z(case):
    P, w, p = case
    if not zmat.diagram_check_z(P, w, p):
        return {"P": P.tolist(), "omega": w.tolist(), "p": p}
    return None


def diagram_z_cases(seed: int = 0, samples: int = 1000, per_ideal_omegas: int = 200,
                    max_p: int = 7) -> list:
    rng = random.Random(seed)
    primes = [p for p in (2, 3, 5, 7) if p <= max_p]
    cases = []
    for i in range(samples):
        p = primes[i % len(primes)]
        n = 2 + (i // len(primes)) % 2
        cases.append((zmat.random_prime_matrix(n, p, rng), zmat.random_coprime_matrix(n, p, rng), p))
    for p in (3, 5):
        if p > max_p:
            continue
        omegas = [zmat.random_coprime_matrix(2, p, rng) for _ in range(per_ideal_omegas)]
        for P in zmat.ideals_of_prime_norm(2, p):
            cases.extend((P, w, p) for w in omegas)
    return cases


def sweep_diagram_z(seed: int = 0, max_p: int = 7, samples: int = 1000, jobs: int = 1) -> SweepResult:
    res = _run("diagram-z", diagram_z_cases(seed, samples, max_p=max_p), _check_diagram_z, jobs)
    for p in (2, 3, 5, 7):
        if p <= max_p and len(zmat.ideals_of_prime_norm(2, p)) != p + 1:
            res.failures.append({"ideal_count": p})
    return res


# -- Hurwitz diagram

def _check_diagram_h(case):
    w, p = case
    bad = {}
    if not hurwitz.diagram_check_h(w, p):
        bad["diagram"] = False
    sigma = projperm.cycle_type(hurwitz.sigma_h(w, p)).cycles
    formula = cyclelaw.cycle_structure(hurwitz.split_map(p)(w)).type_map
    if sigma != formula:
        bad["sigma_cycles"] = _str_keys(sigma)
        bad["cycle_structure"] = _str_keys(formula)
    if bad:
        return {"omega": w.tolist(), "p": p, **bad}
    return None


def sweep_diagram_h(seed: int = 0, max_p: int = 13, samples: int = 200, jobs: int = 1) -> SweepResult:
    rng = random.Random(seed)
    cases = []
    primes = [p for p in (3, 5, 7, 11, 13) if p <= max_p]
    for p in primes:
        cases.extend((hurwitz.random_coprime_quaternion(p, rng), p) for _ in range(samples))
    res = _run("diagram-h", cases, _check_diagram_h, jobs)
    for p in primes:
        count = len(hurwitz.primes_of_norm(p))
        res.details[f"classes_p{p}"] = count
        if count != p + 1:
            res.failures.append({"p": p, "class_count": count})
    return res


# -- permutation algebra

def _check_algebra_z(case):
    w1, w2, p = case
    n = w1.n
    s1, s2, s21 = zmat.sigma_z(w1, p, n), zmat.sigma_z(w2, p, n), zmat.sigma_z(w2 @ w1, p, n)
    if s1.compose(s2) != s21:
        return {"ring": "zmat", "omega1": w1.tolist(), "omega2": w2.tolist(), "p": p}
    return None


def _check_algebra_h(case):
    w1, w2, p = case
    s1, s2, s21 = hurwitz.sigma_h(w1, p), hurwitz.sigma_h(w2, p), hurwitz.sigma_h(w2 * w1, p)
    if s1.compose(s2) != s21:
        return {"ring": "hurwitz", "omega1": w1.tolist(), "omega2": w2.tolist(), "p": p}
    return None


def sweep_permutation_algebra(seed: int = 0, pairs: int = 200, jobs: int = 1) -> SweepResult:
    rng = random.Random(seed)
    zcases, hcases = [], []
    for i in range(pairs):
        p = (2, 3, 5, 7)[i % 4]
        n = 2 + (i // 4) % 2
        zcases.append((zmat.random_coprime_matrix(n, p, rng), zmat.random_coprime_matrix(n, p, rng), p))
        p = (3, 5, 7, 11, 13)[i % 5]
        hcases.append((hurwitz.random_coprime_quaternion(p, rng),
                       hurwitz.random_coprime_quaternion(p, rng), p))
    rz = _run("permutation-algebra", zcases, _check_algebra_z, jobs)
    rh = _run("permutation-algebra", hcases, _check_algebra_h, jobs)
    rz.checked += rh.checked
    rz.failures += rh.failures
    return rz


# -- reordered factorizations

def _check_reorder_z(case):
    alpha, primes = case
    for order in itertools.permutations(primes):
        # prime_chain_factor peels order[0] first: factors are [P_r, ..., P_1]
        chain = zmat.prime_chain_factor(alpha, order)
        prod_ = chain[0]
        for f in chain[1:]:
            prod_ = prod_ @ f
        if prod_ != alpha:
            return {"ring": "zmat", "alpha": alpha.tolist(), "order": list(order), "reason": "product"}
        r = len(order)
        for i in range(r - 1):
            # swap the primes peeled at steps i and i+1
            swapped = list(order)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            other = zmat.prime_chain_factor(alpha, swapped)
            # in product order, step s sits at position r-1-s
            pi = chain[r - 2 - i]        # det order[i+1], left of omega
            omega = chain[r - 1 - i]     # det order[i]
            _, P2 = zmat.metacommute_z(pi, omega, order[i + 1])
            new_right = other[r - 1 - i]
            if zmat.hnf(new_right) != P2 or other[r - 1 - i + 1:] != chain[r - 1 - i + 1:]:
                return {"ring": "zmat", "alpha": alpha.tolist(), "order": list(order),
                        "swap": i, "reason": "metacommute"}
    return None


def _check_reorder_h(case):
    alpha, primes = case
    for order in itertools.permutations(primes):
        chain = hurwitz.factor_hurwitz(alpha, order)
        prod_ = chain[0]
        for f in chain[1:]:
            prod_ = prod_ * f
        if prod_ != alpha:
            return {"ring": "hurwitz", "alpha": alpha.tolist(), "order": list(order), "reason": "product"}
        for i in range(len(order) - 1):
            swapped = list(order)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            other = hurwitz.factor_hurwitz(alpha, swapped)
            pi2 = hurwitz.metacommute_h(chain[i], chain[i + 1])
            if hurwitz.canonical_class(other[i + 1]) != pi2 or other[i + 2:] != chain[i + 2:]:
                return {"ring": "hurwitz", "alpha": alpha.tolist(), "order": list(order),
                        "swap": i, "reason": "metacommute"}
    return None


def reorder_cases(seed: int = 0, samples: int = 100):
    rng = random.Random(seed)
    zcases, hcases = [], []
    for i in range(samples):
        r = 2 + i % 2
        primes = tuple(rng.sample((2, 3, 5, 7), r))
        n = 2 + (i // 2) % 2
        alpha = MatZ.identity(n)
        for p in primes:
            alpha = alpha @ zmat.random_prime_matrix(n, p, rng)
        zcases.append((alpha, primes))
        primes = tuple(rng.sample((3, 5, 7, 11, 13), r))
        a = HQuat.one()
        for p in primes:
            a = a * hurwitz.random_prime_element(p, rng)
        hcases.append((a, primes))
    return zcases, hcases


def sweep_reorder(seed: int = 0, samples: int = 100, jobs: int = 1) -> SweepResult:
    zcases, hcases = reorder_cases(seed, samples)
    rz = _run("reorder", zcases, _check_reorder_z, jobs)
    rh = _run("reorder", hcases, _check_reorder_h, jobs)
    rz.checked += rh.checked
    rz.failures += rh.failures
    return rz


SUITES: dict[str, Callable[..., SweepResult]] = {
    "fripertinger": lambda seed, max_q, max_p, jobs: sweep_fripertinger(max_q, jobs),
    "fixedpoints": lambda seed, max_q, max_p, jobs: sweep_fixedpoints(seed, max_q, jobs=jobs),
    "gl2": lambda seed, max_q, max_p, jobs: sweep_gl2(max_q, jobs),
    "diagram-z": lambda seed, max_q, max_p, jobs: sweep_diagram_z(seed, max_p, jobs=jobs),
    "diagram-h": lambda seed, max_q, max_p, jobs: sweep_diagram_h(seed, max_p, jobs=jobs),
    "subexp": lambda seed, max_q, max_p, jobs: sweep_subexp(max_q, jobs),
}

DEFAULT_MAX_Q = {"fripertinger": 5, "fixedpoints": 7, "gl2": 5, "subexp": 5}
DEFAULT_MAX_P = {"diagram-z": 7, "diagram-h": 13}
