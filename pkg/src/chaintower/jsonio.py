"""Canonical JSON forms for every value the command tools exchange.

Scalars travel as exact strings ("7" over a prime field, "3/2" over the
rationals).  Encoders are deterministic: equal values produce
byte-identical documents, so emitted reports and certificates replay
exactly.  Decoders funnel every malformed-input complaint into the
validation error hierarchy.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .categories import FinCat
from .certificates import (
    CellCert,
    CellStage,
    GenRef,
    PostnikovCert,
    TowerStage,
    VerifyResult,
)
from .complexes import ChainComplex, ChainMap, make_complex
from .diagrams import (
    DiagCellCert,
    DiagCellStage,
    DiagGenRef,
    DiagPostnikovCert,
    DiagTowerStage,
    Diagram,
    NatTrans,
)
from .errors import ValidationFailure
from .fields import FieldSpec, field_from_label
from .lifting import SquareProblem, make_square
from .linalg import Matrix
from .reedy import ReedyCat

VERSION = "0.1.0"


def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, fixed layout, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dump_path(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def load_path(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationFailure(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"not valid JSON: {path}: {exc}") from exc


def require(obj: Any, key: str, what: str) -> Any:
    if not isinstance(obj, dict):
        raise ValidationFailure(f"malformed {what}: expected an object")
    if key not in obj:
        raise ValidationFailure(f"malformed {what}: missing {key!r}")
    return obj[key]


# -- matrices ---------------------------------------------------------


def matrix_to_json(m: Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": m.to_lists()}


def matrix_from_json(field: FieldSpec, obj: Any) -> Matrix:
    rows = require(obj, "rows", "matrix")
    cols = require(obj, "cols", "matrix")
    entries = require(obj, "entries", "matrix")
    if not isinstance(rows, int) or not isinstance(cols, int):
        raise ValidationFailure("malformed matrix: rows and cols must be integers")
    if len(entries) != rows:
        raise ValidationFailure(f"malformed matrix: declared {rows} rows, found {len(entries)}")
    try:
        return Matrix.build(field, entries, cols)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationFailure(f"malformed matrix entry: {exc}") from exc


# -- complexes and maps -----------------------------------------------


def complex_to_json(c: ChainComplex) -> dict:
    return {
        "field": c.field.label(),
        "dims": list(c.dims),
        "diff": [matrix_to_json(c.d(n)) for n in range(1, c.top + 1)],
    }


def complex_from_json(obj: Any) -> ChainComplex:
    field = field_from_label(require(obj, "field", "complex"))
    dims = require(obj, "dims", "complex")
    diff = [matrix_from_json(field, m) for m in require(obj, "diff", "complex")]
    return make_complex(field, dims, diff)


def _complex_ref_from_json(obj: Any, base: Path | None) -> ChainComplex:
    # a chain map may carry its endpoints inline or point at files
    if isinstance(obj, str):
        root = base if base is not None else Path(".")
        return complex_from_json(load_path(root / obj))
    return complex_from_json(obj)


def chain_map_to_json(f: ChainMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "comps": [matrix_to_json(m) for m in f.comps],
    }


def chain_map_from_json(obj: Any, base: Path | None = None) -> ChainMap:
    source = _complex_ref_from_json(require(obj, "source", "chain map"), base)
    target = _complex_ref_from_json(require(obj, "target", "chain map"), base)
    comps = [matrix_from_json(source.field, m) for m in require(obj, "comps", "chain map")]
    return ChainMap(source, target, comps)


def square_to_json(sq: SquareProblem) -> dict:
    return {
        "left": chain_map_to_json(sq.left),
        "right": chain_map_to_json(sq.right),
        "top": chain_map_to_json(sq.top),
        "bottom": chain_map_to_json(sq.bottom),
    }


def square_from_json(obj: Any, base: Path | None = None) -> SquareProblem:
    return make_square(
        chain_map_from_json(require(obj, "left", "square"), base),
        chain_map_from_json(require(obj, "right", "square"), base),
        chain_map_from_json(require(obj, "top", "square"), base),
        chain_map_from_json(require(obj, "bottom", "square"), base),
    )


# -- certificates over chain complexes --------------------------------


def genref_to_json(ref: GenRef) -> dict:
    if ref.family == "custom":
        return {"family": "custom", "map": chain_map_to_json(ref.custom)}
    return {"family": ref.family, "degree": ref.degree}


def genref_from_json(obj: Any) -> GenRef:
    family = require(obj, "family", "generator reference")
    if family == "custom":
        return GenRef("custom", custom=chain_map_from_json(require(obj, "map", "generator reference")))
    return GenRef(family, require(obj, "degree", "generator reference"))


def _tower_stage_to_json(st: TowerStage) -> dict:
    return {
        "gens": [genref_to_json(g) for g in st.gens],
        "attaching": chain_map_to_json(st.attaching),
        "obj": complex_to_json(st.obj),
        "leg_down": chain_map_to_json(st.leg_down),
        "leg_gen": chain_map_to_json(st.leg_gen),
    }


def _cell_stage_to_json(st: CellStage) -> dict:
    return {
        "gens": [genref_to_json(g) for g in st.gens],
        "attaching": chain_map_to_json(st.attaching),
        "obj": complex_to_json(st.obj),
        "leg_up": chain_map_to_json(st.leg_up),
        "leg_gen": chain_map_to_json(st.leg_gen),
    }


def cert_to_json(cert: PostnikovCert | CellCert) -> dict:
    if isinstance(cert, PostnikovCert):
        return {
            "kind": "tower-cert",
            "base": complex_to_json(cert.base),
            "stages": [_tower_stage_to_json(st) for st in cert.stages],
            "claimed_composite": chain_map_to_json(cert.claimed_composite),
        }
    return {
        "kind": "cell-cert",
        "base": complex_to_json(cert.base),
        "stages": [_cell_stage_to_json(st) for st in cert.stages],
        "claimed_composite": chain_map_to_json(cert.claimed_composite),
    }


def cert_from_json(obj: Any) -> PostnikovCert | CellCert:
    kind = require(obj, "kind", "certificate")
    if kind not in ("tower-cert", "cell-cert"):
        raise ValidationFailure(f"unknown certificate kind: {kind!r}")
    base = complex_from_json(require(obj, "base", "certificate"))
    claimed = chain_map_from_json(require(obj, "claimed_composite", "certificate"))
    stages = require(obj, "stages", "certificate")
    if kind == "tower-cert":
        return PostnikovCert(
            base,
            tuple(
                TowerStage(
                    tuple(genref_from_json(g) for g in require(st, "gens", "stage")),
                    chain_map_from_json(require(st, "attaching", "stage")),
                    complex_from_json(require(st, "obj", "stage")),
                    chain_map_from_json(require(st, "leg_down", "stage")),
                    chain_map_from_json(require(st, "leg_gen", "stage")),
                )
                for st in stages
            ),
            claimed,
        )
    return CellCert(
        base,
        tuple(
            CellStage(
                tuple(genref_from_json(g) for g in require(st, "gens", "stage")),
                chain_map_from_json(require(st, "attaching", "stage")),
                complex_from_json(require(st, "obj", "stage")),
                chain_map_from_json(require(st, "leg_up", "stage")),
                chain_map_from_json(require(st, "leg_gen", "stage")),
            )
            for st in stages
        ),
        claimed,
    )


# -- categories, diagrams, transformations ----------------------------


def fincat_to_json(cat: FinCat) -> dict:
    return {
        "objects": list(cat.objects),
        "morphs": list(cat.morphs),
        "src": dict(cat.src),
        "tgt": dict(cat.tgt),
        "ids": dict(cat.ids),
        "table": [[g, f, h] for (g, f), h in sorted(cat.table.items())],
    }


def fincat_from_json(obj: Any) -> FinCat:
    table = {}
    for row in require(obj, "table", "category"):
        if not isinstance(row, list) or len(row) != 3:
            raise ValidationFailure("malformed category: table rows are [g, f, composite]")
        table[(row[0], row[1])] = row[2]
    return FinCat(
        tuple(require(obj, "objects", "category")),
        tuple(require(obj, "morphs", "category")),
        dict(require(obj, "src", "category")),
        dict(require(obj, "tgt", "category")),
        dict(require(obj, "ids", "category")),
        table,
    )


def reedy_to_json(r: ReedyCat) -> dict:
    return {
        "category": fincat_to_json(r.cat),
        "degree": dict(r.degree),
        "plus": list(r.plus),
        "minus": list(r.minus),
    }


def reedy_from_json(obj: Any) -> ReedyCat:
    return ReedyCat(
        fincat_from_json(require(obj, "category", "degree structure")),
        dict(require(obj, "degree", "degree structure")),
        tuple(require(obj, "plus", "degree structure")),
        tuple(require(obj, "minus", "degree structure")),
    )


def diagram_to_json(d: Diagram) -> dict:
    return {
        "category": fincat_to_json(d.cat),
        "field": d.field.label(),
        "at": {o: complex_to_json(c) for o, c in d.at.items()},
        "arrow": {m: [matrix_to_json(x) for x in f.comps] for m, f in d.arrow.items()},
    }


def diagram_from_json(obj: Any) -> Diagram:
    cat = fincat_from_json(require(obj, "category", "diagram"))
    field = field_from_label(require(obj, "field", "diagram"))
    at_json = require(obj, "at", "diagram")
    at = {o: complex_from_json(require(at_json, o, "diagram")) for o in cat.objects}
    arrow_json = require(obj, "arrow", "diagram")
    arrow = {}
    for m in cat.morphs:
        comps = [matrix_from_json(field, x) for x in require(arrow_json, m, "diagram")]
        arrow[m] = ChainMap(at[cat.src[m]], at[cat.tgt[m]], comps)
    return Diagram(cat, field, at, arrow)


def nat_to_json(tau: NatTrans) -> dict:
    return {
        "source": diagram_to_json(tau.source),
        "target": diagram_to_json(tau.target),
        "comps": {o: [matrix_to_json(x) for x in f.comps] for o, f in tau.comps.items()},
    }


def nat_from_json(obj: Any) -> NatTrans:
    source = diagram_from_json(require(obj, "source", "transformation"))
    target = diagram_from_json(require(obj, "target", "transformation"))
    comps_json = require(obj, "comps", "transformation")
    comps = {}
    for o in source.cat.objects:
        mats = [matrix_from_json(source.field, x) for x in require(comps_json, o, "transformation")]
        comps[o] = ChainMap(source.at[o], target.at[o], mats)
    return NatTrans(source, target, comps)


def diag_genref_to_json(ref: DiagGenRef) -> dict:
    if ref.family == "custom":
        return {"family": "custom", "map": nat_to_json(ref.custom)}
    return {"family": ref.family, "degree": ref.degree, "at_obj": ref.at_obj}


def diag_genref_from_json(obj: Any) -> DiagGenRef:
    family = require(obj, "family", "generator reference")
    if family == "custom":
        return DiagGenRef("custom", custom=nat_from_json(require(obj, "map", "generator reference")))
    return DiagGenRef(
        family,
        require(obj, "degree", "generator reference"),
        require(obj, "at_obj", "generator reference"),
    )


def diag_cert_to_json(cert: DiagPostnikovCert | DiagCellCert) -> dict:
    if isinstance(cert, DiagPostnikovCert):
        return {
            "kind": "diagram-tower-cert",
            "base": diagram_to_json(cert.base),
            "stages": [
                {
                    "gens": [diag_genref_to_json(g) for g in st.gens],
                    "attaching": nat_to_json(st.attaching),
                    "obj": diagram_to_json(st.obj),
                    "leg_down": nat_to_json(st.leg_down),
                    "leg_gen": nat_to_json(st.leg_gen),
                }
                for st in cert.stages
            ],
            "claimed_composite": nat_to_json(cert.claimed_composite),
        }
    return {
        "kind": "diagram-cell-cert",
        "base": diagram_to_json(cert.base),
        "stages": [
            {
                "gens": [diag_genref_to_json(g) for g in st.gens],
                "attaching": nat_to_json(st.attaching),
                "obj": diagram_to_json(st.obj),
                "leg_up": nat_to_json(st.leg_up),
                "leg_gen": nat_to_json(st.leg_gen),
            }
            for st in cert.stages
        ],
        "claimed_composite": nat_to_json(cert.claimed_composite),
    }


def diag_cert_from_json(obj: Any) -> DiagPostnikovCert | DiagCellCert:
    kind = require(obj, "kind", "certificate")
    if kind not in ("diagram-tower-cert", "diagram-cell-cert"):
        raise ValidationFailure(f"unknown certificate kind: {kind!r}")
    base = diagram_from_json(require(obj, "base", "certificate"))
    claimed = nat_from_json(require(obj, "claimed_composite", "certificate"))
    stages = require(obj, "stages", "certificate")
    if kind == "diagram-tower-cert":
        return DiagPostnikovCert(
            base,
            tuple(
                DiagTowerStage(
                    tuple(diag_genref_from_json(g) for g in require(st, "gens", "stage")),
                    nat_from_json(require(st, "attaching", "stage")),
                    diagram_from_json(require(st, "obj", "stage")),
                    nat_from_json(require(st, "leg_down", "stage")),
                    nat_from_json(require(st, "leg_gen", "stage")),
                )
                for st in stages
            ),
            claimed,
        )
    return DiagCellCert(
        base,
        tuple(
            DiagCellStage(
                tuple(diag_genref_from_json(g) for g in require(st, "gens", "stage")),
                nat_from_json(require(st, "attaching", "stage")),
                diagram_from_json(require(st, "obj", "stage")),
                nat_from_json(require(st, "leg_up", "stage")),
                nat_from_json(require(st, "leg_gen", "stage")),
            )
            for st in stages
        ),
        claimed,
    )


def any_cert_from_json(obj: Any) -> PostnikovCert | CellCert | DiagPostnikovCert | DiagCellCert:
    kind = require(obj, "kind", "certificate")
    if kind in ("tower-cert", "cell-cert"):
        return cert_from_json(obj)
    return diag_cert_from_json(obj)


# -- reports -----------------------------------------------------------


def report(kind: str, payload: dict, *, field: FieldSpec | None = None, seed: int | None = None) -> dict:
    out = {"kind": kind, "version": VERSION}
    replay: dict[str, Any] = {}
    if field is not None:
        replay["field"] = field.label()
    if seed is not None:
        replay["seed"] = seed
    if replay:
        out["replay"] = replay
    out.update(payload)
    return out


def verify_result_to_json(res: VerifyResult) -> dict:
    return res.to_dict()
