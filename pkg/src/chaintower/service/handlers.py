"""In-process command handlers shared by the HTTP app and the command
line tool.  Every handler takes parsed JSON, returns a report dict with
a "kind" discriminator, and raises from the validation hierarchy on
malformed input.  A negative answer (no lift, no solution) is a normal
report, not an error."""

from __future__ import annotations

from .. import jsonio
from ..complexes import homology
from ..diagrams import (
    DiagPostnikovCert,
    factor_injective_z,
    objectwise_classify,
    tensor_gen,
    pitchfork_gen,
    verify_diag_cell_cert,
    verify_diag_postnikov_cert,
)
from ..certificates import CellCert, PostnikovCert, verify_cell_cert, verify_postnikov_cert
from ..errors import ValidationFailure
from ..factor import factor_acyclic_fibration, factor_fibration
from ..fields import field_from_label
from ..lifting import classify, solve_lift
from ..reedy import (
    latching,
    matching,
    pullback_cotensor_gen,
    pushout_product_gen,
    reedy_canonical_cells,
    reedy_canonical_tower,
    reedy_classify,
    rel_latching,
    rel_matching,
)
from ..selftest import run_selftest


def handle_classify(payload: dict) -> dict:
    f = jsonio.chain_map_from_json(jsonio.require(payload, "map", "classify request"))
    cls = classify(f)
    body = cls.to_dict()
    body["acyclic_cofibration"] = cls.acyclic_cofibration
    body["acyclic_fibration"] = cls.acyclic_fibration
    return jsonio.report("classify-report", body, field=f.source.field)


def handle_lift(payload: dict) -> dict:
    sq = jsonio.square_from_json(jsonio.require(payload, "square", "lift request"))
    ell = solve_lift(sq)
    body: dict = {"solvable": ell is not None}
    if ell is None:
        body["reason"] = "NoLift"
    else:
        body["lift"] = jsonio.chain_map_to_json(ell)
    return jsonio.report("lift-report", body, field=sq.left.source.field)


def handle_factor(payload: dict) -> dict:
    f = jsonio.chain_map_from_json(jsonio.require(payload, "map", "factor request"))
    side = jsonio.require(payload, "side", "factor request")
    if side == "z":
        res = factor_acyclic_fibration(f)
    elif side == "x":
        res = factor_fibration(f)
    else:
        raise ValidationFailure(f"side must be 'z' or 'x', got {side!r}")
    body = {
        "side": side,
        "left": jsonio.chain_map_to_json(res.left),
        "cert": jsonio.cert_to_json(res.cert),
    }
    return jsonio.report("factor-report", body, field=f.source.field)


def handle_homology(payload: dict) -> dict:
    c = jsonio.complex_from_json(jsonio.require(payload, "complex", "homology request"))
    h = homology(c)
    return jsonio.report("homology-report", {"betti": list(h.betti)}, field=c.field)


def handle_verify(payload: dict) -> dict:
    cert = jsonio.any_cert_from_json(jsonio.require(payload, "cert", "verify request"))
    if isinstance(cert, PostnikovCert):
        res = verify_postnikov_cert(cert)
    elif isinstance(cert, CellCert):
        res = verify_cell_cert(cert)
    elif isinstance(cert, DiagPostnikovCert):
        res = verify_diag_postnikov_cert(cert)
    else:
        res = verify_diag_cell_cert(cert)
    return jsonio.report("verify-report", res.to_dict(), field=cert.base.field)


def handle_diagram_classify(payload: dict) -> dict:
    tau = jsonio.nat_from_json(jsonio.require(payload, "nat", "diagram classify request"))
    return jsonio.report(
        "diagram-classify-report", objectwise_classify(tau).to_dict(), field=tau.field
    )


def handle_diagram_factor_z(payload: dict) -> dict:
    tau = jsonio.nat_from_json(jsonio.require(payload, "nat", "diagram factor request"))
    res = factor_injective_z(tau)
    body = {
        "left": jsonio.nat_to_json(res.left),
        "cert": jsonio.diag_cert_to_json(res.cert),
    }
    return jsonio.report("diagram-factor-report", body, field=tau.field)


def handle_diagram_gen(payload: dict) -> dict:
    kind = jsonio.require(payload, "gen_kind", "diagram gen request")
    f = jsonio.chain_map_from_json(jsonio.require(payload, "map", "diagram gen request"))
    cat = jsonio.fincat_from_json(jsonio.require(payload, "shape", "diagram gen request"))
    at = jsonio.require(payload, "at", "diagram gen request")
    if at not in cat.objects:
        raise ValidationFailure(f"unknown object: {at!r}")
    if kind == "tensor":
        g = tensor_gen(f, at, cat)
    elif kind == "pitchfork":
        g = pitchfork_gen(f, at, cat)
    else:
        raise ValidationFailure(f"gen_kind must be 'tensor' or 'pitchfork', got {kind!r}")
    return jsonio.report(
        "diagram-gen-report", {"gen_kind": kind, "at": at, "gen": jsonio.nat_to_json(g)},
        field=f.source.field,
    )


def handle_reedy_validate(payload: dict) -> dict:
    r = jsonio.reedy_from_json(jsonio.require(payload, "reedy", "reedy request"))
    body = {
        "valid": True,
        "objects": len(r.cat.objects),
        "degree": dict(r.degree),
        "factorizations": {m: list(r.factorization(m)) for m in r.cat.morphs},
    }
    return jsonio.report("reedy-validate-report", body)


def handle_reedy_classify(payload: dict) -> dict:
    r = jsonio.reedy_from_json(jsonio.require(payload, "reedy", "reedy classify request"))
    tau = jsonio.nat_from_json(jsonio.require(payload, "nat", "reedy classify request"))
    return jsonio.report(
        "reedy-classify-report", reedy_classify(r, tau).to_dict(), field=tau.field
    )


def _reedy_diagram_at(payload: dict, what: str):
    r = jsonio.reedy_from_json(jsonio.require(payload, "reedy", what))
    d = jsonio.diagram_from_json(jsonio.require(payload, "diagram", what))
    at = jsonio.require(payload, "at", what)
    if at not in r.cat.objects:
        raise ValidationFailure(f"unknown object: {at!r}")
    return r, d, at


def handle_reedy_latching(payload: dict) -> dict:
    r, d, at = _reedy_diagram_at(payload, "latching request")
    ld = latching(r, d, at)
    body = {
        "at": at,
        "obj": jsonio.complex_to_json(ld.obj),
        "canonical": jsonio.chain_map_to_json(ld.canonical),
    }
    return jsonio.report("reedy-latching-report", body, field=d.field)


def handle_reedy_matching(payload: dict) -> dict:
    r, d, at = _reedy_diagram_at(payload, "matching request")
    md = matching(r, d, at)
    body = {
        "at": at,
        "obj": jsonio.complex_to_json(md.obj),
        "canonical": jsonio.chain_map_to_json(md.canonical),
    }
    return jsonio.report("reedy-matching-report", body, field=d.field)


def handle_reedy_gen(payload: dict) -> dict:
    r = jsonio.reedy_from_json(jsonio.require(payload, "reedy", "reedy gen request"))
    tau = jsonio.nat_from_json(jsonio.require(payload, "nat", "reedy gen request"))
    at = jsonio.require(payload, "at", "reedy gen request")
    side = jsonio.require(payload, "side", "reedy gen request")
    if at not in r.cat.objects:
        raise ValidationFailure(f"unknown object: {at!r}")
    if side == "z":
        stage = rel_matching(r, tau, at).map
        gen = pullback_cotensor_gen(r, stage, at).map
    elif side == "x":
        stage = rel_latching(r, tau, at).map
        gen = pushout_product_gen(r, stage, at).map
    else:
        raise ValidationFailure(f"side must be 'z' or 'x', got {side!r}")
    body = {
        "at": at,
        "side": side,
        "stage_map": jsonio.chain_map_to_json(stage),
        "gen": jsonio.nat_to_json(gen),
    }
    return jsonio.report("reedy-gen-report", body, field=tau.field)


def handle_reedy_tower(payload: dict) -> dict:
    r = jsonio.reedy_from_json(jsonio.require(payload, "reedy", "reedy tower request"))
    tau = jsonio.nat_from_json(jsonio.require(payload, "nat", "reedy tower request"))
    side = jsonio.require(payload, "side", "reedy tower request")
    if side == "z":
        cert = reedy_canonical_tower(r, tau)
    elif side == "x":
        cert = reedy_canonical_cells(r, tau)
    else:
        raise ValidationFailure(f"side must be 'z' or 'x', got {side!r}")
    body = {"side": side, "cert": jsonio.diag_cert_to_json(cert)}
    return jsonio.report("reedy-tower-report", body, field=tau.field)


def handle_selftest(payload: dict) -> dict:
    field = field_from_label(payload.get("field", "prime:101"))
    seed = jsonio.require(payload, "seed", "selftest request")
    count = payload.get("count", 10)
    if not isinstance(seed, int) or not isinstance(count, int) or count < 1:
        raise ValidationFailure("selftest needs an integer seed and a positive count")
    results = run_selftest(field, seed, count)
    body = {
        "ok": all(r.ok for r in results),
        "suites": [r.to_dict() for r in results],
    }
    return jsonio.report("selftest-report", body, field=field, seed=seed)
