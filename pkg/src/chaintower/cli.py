"""Batch front door: parse JSON inputs, dispatch to the shared command
handlers, and emit a self-describing JSON report on standard output.

Exit codes: 0 success; 1 validation failure (malformed or inconsistent
input, with the witness in the report); 2 semantic negative (a lifting
or solving problem with no solution); 3 internal invariant violation,
including a certificate that fails verification."""

from __future__ import annotations

import argparse
import sys

from . import jsonio
from .errors import InternalCheckFailed, SemanticNegative, ValidationFailure
from .service import handlers

_HANDLERS = {
    "classify": handlers.handle_classify,
    "lift": handlers.handle_lift,
    "factor": handlers.handle_factor,
    "homology": handlers.handle_homology,
    "verify": handlers.handle_verify,
    ("diagram", "classify"): handlers.handle_diagram_classify,
    ("diagram", "factor-z"): handlers.handle_diagram_factor_z,
    ("diagram", "gen"): handlers.handle_diagram_gen,
    ("reedy", "validate"): handlers.handle_reedy_validate,
    ("reedy", "classify"): handlers.handle_reedy_classify,
    ("reedy", "latching"): handlers.handle_reedy_latching,
    ("reedy", "matching"): handlers.handle_reedy_matching,
    ("reedy", "gen"): handlers.handle_reedy_gen,
    ("reedy", "tower"): handlers.handle_reedy_tower,
    "selftest": handlers.handle_selftest,
}


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="chaintower")
    sub = top.add_subparsers(dest="verb", required=True)

    def inputs(p: argparse.ArgumentParser, n: int, names: str) -> None:
        p.add_argument("--in", dest="inputs", nargs=n, required=True, metavar=names)
        p.add_argument("--out", dest="out", default=None)

    p = sub.add_parser("classify", help="classify a chain map")
    inputs(p, 1, "MAP")
    p = sub.add_parser("lift", help="solve a lifting square")
    inputs(p, 1, "SQUARE")
    p = sub.add_parser("factor", help="factor a chain map through a certified tower")
    inputs(p, 1, "MAP")
    p.add_argument("--side", choices=("z", "x"), required=True)
    p = sub.add_parser("homology", help="homology ranks of a complex")
    inputs(p, 1, "COMPLEX")
    p = sub.add_parser("verify", help="check a certificate")
    inputs(p, 1, "CERT")

    pd = sub.add_parser("diagram", help="diagram-level operations")
    dsub = pd.add_subparsers(dest="subverb", required=True)
    p = dsub.add_parser("classify", help="objectwise classification")
    inputs(p, 1, "NAT")
    p = dsub.add_parser("factor-z", help="mono-then-certified-projection factorization")
    inputs(p, 1, "NAT")
    p = dsub.add_parser("gen", help="spread a chain map over a hom functor")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar=("MAP", "SHAPE"))
    p.add_argument("--out", dest="out", default=None)
    p.add_argument("--kind", dest="gen_kind", choices=("tensor", "pitchfork"), required=True)
    p.add_argument("--at", required=True)

    pr = sub.add_parser("reedy", help="degree-structured shape operations")
    rsub = pr.add_subparsers(dest="subverb", required=True)
    p = rsub.add_parser("validate", help="check a degree structure")
    inputs(p, 1, "REEDY")
    p = rsub.add_parser("classify", help="degree-aware classification")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar=("REEDY", "NAT"))
    p.add_argument("--out", dest="out", default=None)
    p = rsub.add_parser("latching", help="latching object and canonical map")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar=("REEDY", "DIAGRAM"))
    p.add_argument("--out", dest="out", default=None)
    p.add_argument("--at", required=True)
    p = rsub.add_parser("matching", help="matching object and canonical map")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar=("REEDY", "DIAGRAM"))
    p.add_argument("--out", dest="out", default=None)
    p.add_argument("--at", required=True)
    p = rsub.add_parser("gen", help="corner generator at an object")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar=("REEDY", "NAT"))
    p.add_argument("--out", dest="out", default=None)
    p.add_argument("--at", required=True)
    p.add_argument("--side", choices=("z", "x"), required=True)
    p = rsub.add_parser("tower", help="canonical stagewise presentation")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar=("REEDY", "NAT"))
    p.add_argument("--out", dest="out", default=None)
    p.add_argument("--side", choices=("z", "x"), required=True)

    p = sub.add_parser("selftest", help="run the seeded invariant suites")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--field", default="prime:101")
    p.add_argument("--out", dest="out", default=None)
    return top


def _payload(ns: argparse.Namespace) -> dict:
    loads = [jsonio.load_path(p) for p in getattr(ns, "inputs", [])]
    verb, subverb = ns.verb, getattr(ns, "subverb", None)
    if verb == "classify":
        return {"map": loads[0]}
    if verb == "lift":
        return {"square": loads[0]}
    if verb == "factor":
        return {"map": loads[0], "side": ns.side}
    if verb == "homology":
        return {"complex": loads[0]}
    if verb == "verify":
        return {"cert": loads[0]}
    if verb == "diagram":
        if subverb in ("classify", "factor-z"):
            return {"nat": loads[0]}
        return {"gen_kind": ns.gen_kind, "map": loads[0], "shape": loads[1], "at": ns.at}
    if verb == "reedy":
        if subverb == "validate":
            return {"reedy": loads[0]}
        if subverb == "classify":
            return {"reedy": loads[0], "nat": loads[1]}
        if subverb in ("latching", "matching"):
            return {"reedy": loads[0], "diagram": loads[1], "at": ns.at}
        if subverb == "gen":
            return {"reedy": loads[0], "nat": loads[1], "at": ns.at, "side": ns.side}
        return {"reedy": loads[0], "nat": loads[1], "side": ns.side}
    return {"field": ns.field, "seed": ns.seed, "count": ns.count}


def _emit(report: dict, out: str | None) -> None:
    text = jsonio.dumps(report)
    sys.stdout.write(text)
    if out is not None:
        jsonio.dump_path(out, report)


def _exit_status(report: dict) -> int:
    kind = report["kind"]
    if kind == "lift-report" and not report["solvable"]:
        return 2
    if kind == "verify-report" and not report["verified"]:
        return 3
    if kind == "selftest-report" and not report["ok"]:
        return 3
    return 0


def main(argv: list[str] | None = None) -> int:
    ns = _parser().parse_args(argv)
    key = (ns.verb, ns.subverb) if getattr(ns, "subverb", None) else ns.verb
    try:
        report = _HANDLERS[key](_payload(ns))
    except ValidationFailure as exc:
        _emit(jsonio.report("error-report", {"error": type(exc).__name__, "message": str(exc)}), getattr(ns, "out", None))
        return 1
    except SemanticNegative as exc:
        _emit(jsonio.report("error-report", {"error": type(exc).__name__, "message": str(exc)}), getattr(ns, "out", None))
        return 2
    except InternalCheckFailed as exc:
        _emit(jsonio.report("error-report", {"error": type(exc).__name__, "message": str(exc)}), getattr(ns, "out", None))
        return 3
    _emit(report, ns.out)
    return _exit_status(report)


if __name__ == "__main__":
    raise SystemExit(main())
