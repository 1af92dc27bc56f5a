"""Command-line front end.  Every subcommand prints one JSON document.

Exit codes: 0 ok, 2 malformed input, 3 mathematical precondition violated,
4 internal consistency failure (including a failed verify suite).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import cyclelaw, hurwitz, verify, zmat
from .errors import ConsistencyError, DomainError
from .fq import field_of_order, is_prime
from .fqmat import MatFq
from .hurwitz import HQuat
from .projperm import cycle_type, tau_permutation
from .zmat import MatZ

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CONSISTENCY = 0, 2, 3, 4


class ParseError(Exception):
    pass


def _key(k):
    return (0, int(k), "") if isinstance(k, str) and k.isdigit() else (1, 0, str(k))


def canonical(obj):
    """Recursively order dict keys: numeric keys ascending, then names alphabetically."""
    if isinstance(obj, dict):
        return {k: canonical(obj[k]) for k in sorted(obj, key=_key)}
    if isinstance(obj, (list, tuple)):
        return [canonical(x) for x in obj]
    return obj


def dump(obj) -> str:
    return json.dumps(canonical(obj), separators=(",", ":"), ensure_ascii=True)


def _read(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


def _json(text: str, what: str):
    try:
        return json.loads(_read(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: {exc}") from None


def parse_int_matrix(text: str, what: str = "matrix") -> MatZ:
    data = _json(text, what)
    if (not isinstance(data, list) or not data
            or not all(isinstance(r, list) and len(r) == len(data) for r in data)
            or not all(isinstance(x, int) and not isinstance(x, bool) for r in data for x in r)):
        raise ParseError(f"{what}: expected a square nested list of integers")
    return MatZ(tuple(tuple(r) for r in data))


def parse_fq_matrix(text: str, q: int) -> MatFq:
    F = field_of_order(q)
    data = _json(text, "matrix")
    if (not isinstance(data, list) or not data
            or not all(isinstance(r, list) and len(r) == len(data) for r in data)):
        raise ParseError("matrix: expected a square nested list")
    for row in data:
        for x in row:
            ok = isinstance(x, int) or (
                F.e > 1 and isinstance(x, list) and all(isinstance(c, int) for c in x))
            if not ok or isinstance(x, bool):
                raise ParseError(f"matrix: bad entry {x!r} for F_{q}")
    return MatFq.from_values(F, data)


_QUAT = re.compile(r"^\s*\[([^\]]*)\]\s*(?:/\s*([12]))?\s*$")


def parse_quat(text: str) -> HQuat:
    """"[a,b,c,d]" in the {1,i,j,w0} basis, or "[w,x,y,z]/1" / "/2" in {1,i,j,k}."""
    m = _QUAT.match(_read(text))
    if not m:
        raise ParseError(f"quaternion: cannot parse {text!r}")
    try:
        vals = [int(v) for v in m.group(1).split(",")]
    except ValueError:
        raise ParseError(f"quaternion: non-integer coordinate in {text!r}") from None
    if len(vals) != 4:
        raise ParseError("quaternion: expected four coordinates")
    if m.group(2) is None:
        return HQuat(*vals)
    den = int(m.group(2))
    try:
        return HQuat.from_lipschitz(*(Fraction(v, den) for v in vals))
    except DomainError as exc:
        raise ParseError(f"quaternion: {exc}") from None


def parse_primes(text: str) -> list[int]:
    try:
        primes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"primes: cannot parse {text!r}") from None
    if not primes:
        raise ParseError("primes: empty list")
    return primes


def _prime_arg(p: int) -> int:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return p


# -- subcommands

def cmd_cycles(args) -> dict:
    Q = parse_fq_matrix(args.matrix, args.q)
    return cyclelaw.cycle_structure(Q, verify=True).to_json()


def cmd_fixed_points(args) -> dict:
    Q = parse_fq_matrix(args.matrix, args.q)
    terms = cyclelaw.fixed_point_terms(Q)
    fixed = cyclelaw.fixed_point_count(Q)
    brute = cycle_type(tau_permutation(Q)).fixed
    if fixed != brute:
        raise ConsistencyError(f"formula gives {fixed} fixed points, brute force {brute}")
    F = Q.field
    return {
        "fixed": fixed,
        "brute_force": brute,
        "readings_differ": cyclelaw.multiplicity_readings_differ(Q),
        "eigenvalues": [{"value": F.decode(t.value), "algebraic": t.algebraic,
                         "geometric": t.geometric, "contribution": t.contribution} for t in terms],
    }


def cmd_factor_matrix(args) -> dict:
    alpha = parse_int_matrix(args.matrix)
    factors = zmat.prime_chain_factor(alpha, parse_primes(args.primes))
    return {"factors": [f.tolist() for f in factors], "dets": [f.det() for f in factors]}


def cmd_metacommute_matrix(args) -> dict:
    p = _prime_arg(args.p)
    P = parse_int_matrix(args.matrix, "matrix")
    w = parse_int_matrix(args.omega, "omega")
    if P.n != w.n:
        raise ParseError("matrix and omega differ in size")
    w2, P2 = zmat.metacommute_z(P, w, p)
    before = zmat.kernel_mod_p(P, p)
    after = zmat.kernel_mod_p(P2, p)
    if not zmat.diagram_check_z(P, w, p):
        raise ConsistencyError("kernel map disagrees with (omega mod p)^{-1}")
    return {"P_prime": P2.tolist(), "omega_prime": w2.tolist(),
            "kernel_before": str(before), "kernel_after": str(after)}


def cmd_factor_quaternion(args) -> dict:
    alpha = parse_quat(args.quat)
    factors = hurwitz.factor_hurwitz(alpha, parse_primes(args.primes))
    return {"factors": [f.tolist() for f in factors], "norms": [f.nrd() for f in factors]}


def cmd_metacommute_quaternion(args) -> dict:
    p = _prime_arg(args.p)
    pi = parse_quat(args.pi)
    w = parse_quat(args.omega)
    if pi.nrd() != p:
        raise DomainError(f"nrd(pi) = {pi.nrd()}, expected {p}")
    w2, pi2 = hurwitz.metacommute_h_pair(pi, w)
    classes = hurwitz.primes_of_norm(p)
    before = hurwitz.class_kernel(pi, p)
    after = hurwitz.class_kernel(pi2, p)
    return {"pi_prime": pi2.tolist(), "omega_prime": w2.tolist(),
            "class_index": classes.index(pi2),
            "kernel_before": str(before), "kernel_after": str(after)}


def cmd_primes(args) -> dict:
    p = _prime_arg(args.p)
    classes = hurwitz.primes_of_norm(p)
    return {"p": p, "count": len(classes), "classes": [c.tolist() for c in classes],
            "kernels": [str(hurwitz.class_kernel(c, p)) for c in classes]}


def cmd_verify(args):
    max_q = args.max_q if args.max_q is not None else verify.DEFAULT_MAX_Q.get(args.suite, 7)
    max_p = args.max_p if args.max_p is not None else verify.DEFAULT_MAX_P.get(args.suite, 13)
    result = verify.SUITES[args.suite](args.seed, max_q, max_p, args.jobs)
    return result.to_json()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metacomm", description="Metacommutation of primes: factorization, "
                     "permutations and cycle-structure verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cycles", help="cycle structure of v -> Q^-1 v on projective space")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--matrix", required=True, help='JSON, e.g. "[[0,2],[1,0]]"; "-" reads stdin')
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("fixed-points", help="fixed-point count with per-eigenvalue breakdown")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--matrix", required=True)
    s.set_defaults(func=cmd_fixed_points)

    s = sub.add_parser("factor-matrix", help="prime-determinant factorization in M_n(Z)")
    s.add_argument("--matrix", required=True)
    s.add_argument("--primes", required=True, help="comma-separated, peeled from the right in order")
    s.set_defaults(func=cmd_factor_matrix)

    s = sub.add_parser("metacommute-matrix", help="P omega = omega' P' in M_n(Z)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--matrix", required=True)
    s.add_argument("--omega", required=True)
    s.set_defaults(func=cmd_metacommute_matrix)

    s = sub.add_parser("factor-quaternion", help="prime factorization in the Hurwitz order")
    s.add_argument("--quat", required=True, help='"[a,b,c,d]" or "[w,x,y,z]/1" (or /2)')
    s.add_argument("--primes", required=True, help="comma-separated norms, left to right")
    s.set_defaults(func=cmd_factor_quaternion)

    s = sub.add_parser("metacommute-quaternion", help="pi omega = omega' pi' in the Hurwitz order")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--pi", required=True)
    s.add_argument("--omega", required=True)
    s.set_defaults(func=cmd_metacommute_quaternion)

    s = sub.add_parser("primes", help="the p + 1 Hurwitz prime classes of norm p")
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=cmd_primes)

    s = sub.add_parser("verify", help="run a verification sweep")
    s.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-q", type=int, default=None)
    s.add_argument("--max-p", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except ParseError as exc:
        print(dump({"error": "parse", "message": str(exc)}), file=out)
        return EXIT_PARSE
    except DomainError as exc:
        print(dump({"error": "precondition", "message": str(exc)}), file=out)
        return EXIT_PRECONDITION
    except ConsistencyError as exc:
        print(dump({"error": "consistency", "message": str(exc)}), file=out)
        return EXIT_CONSISTENCY
    print(dump(result), file=out)
    if args.command == "verify" and not result["passed"]:
        return EXIT_CONSISTENCY
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
