"""Text and JSON rendering of analysis results.

JSON layout::

    {"points": [{"id": str, "reachable": bool,
                 "vars": {name: {"lo": num, "hi": num,
                                 "form": {"center": num,
                                          "central": {idx: num},
                                          "perturbation": {idx: num}}}},
                 "noise": {"central": [[lo, hi], ...],
                           "perturbation": [[lo, hi], ...]}}]}
"""

from __future__ import annotations

import json
from numbers import Real
from typing import Any, Dict, List

from .affine import AffineForm
from .analyzer import AnalysisResult, PointState


def fmt(x) -> str:
    return "%.6g" % float(x)


def _form_json(f: AffineForm) -> Dict[str, Any]:
    return {"center": float(f.center),
            "central": {str(i): float(v) for i, v in sorted(f.central.items())},
            "perturbation": {str(j): float(v) for j, v in sorted(f.perturbation.items())}}


def point_json(pt: PointState) -> Dict[str, Any]:
    if not pt.reachable:
        return {"id": pt.id, "reachable": False, "vars": {},
                "noise": {"central": [], "perturbation": []}}
    c, p = pt.noise.dense()
    return {"id": pt.id, "reachable": True,
            "vars": {nm: {"lo": float(itv.lo), "hi": float(itv.hi), "form": _form_json(f)}
                     for nm, (f, itv) in pt.vars.items()},
            "noise": {"central": [[float(i.lo), float(i.hi)] for i in c],
                      "perturbation": [[float(i.lo), float(i.hi)] for i in p]}}


def to_json(result: AnalysisResult) -> Dict[str, Any]:
    return {"points": [point_json(pt) for pt in result.points.values()]}


class SchemaError(ValueError):
    pass


def _num(x, where):
    if isinstance(x, bool) or not isinstance(x, Real):
        raise SchemaError(f"{where}: expected a number, got {x!r}")


def _coeffs(d, where):
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected an object")
    for k, v in d.items():
        if not k.isdigit() or int(k) < 1:
            raise SchemaError(f"{where}: bad symbol index {k!r}")
        _num(v, f"{where}.{k}")


def _box(rows, where):
    if not isinstance(rows, list):
        raise SchemaError(f"{where}: expected a list")
    for k, r in enumerate(rows):
        if not (isinstance(r, list) and len(r) == 2):
            raise SchemaError(f"{where}[{k}]: expected [lo, hi]")
        _num(r[0], where)
        _num(r[1], where)


def validate(doc: Any) -> None:
    """Raise :class:`SchemaError` unless ``doc`` follows the report layout."""
    if not isinstance(doc, dict) or set(doc) != {"points"} or not isinstance(doc["points"], list):
        raise SchemaError("top level must be {\"points\": [...]}")
    for k, pt in enumerate(doc["points"]):
        where = f"points[{k}]"
        if not isinstance(pt, dict) or set(pt) != {"id", "reachable", "vars", "noise"}:
            raise SchemaError(f"{where}: keys must be id, reachable, vars, noise")
        if not isinstance(pt["id"], str) or not isinstance(pt["reachable"], bool):
            raise SchemaError(f"{where}: bad id or reachable flag")
        if not isinstance(pt["vars"], dict):
            raise SchemaError(f"{where}.vars: expected an object")
        for nm, v in pt["vars"].items():
            w = f"{where}.vars.{nm}"
            if not isinstance(v, dict) or set(v) != {"lo", "hi", "form"}:
                raise SchemaError(f"{w}: keys must be lo, hi, form")
            _num(v["lo"], w)
            _num(v["hi"], w)
            form = v["form"]
            if not isinstance(form, dict) or set(form) != {"center", "central", "perturbation"}:
                raise SchemaError(f"{w}.form: keys must be center, central, perturbation")
            _num(form["center"], w)
            _coeffs(form["central"], f"{w}.form.central")
            _coeffs(form["perturbation"], f"{w}.form.perturbation")
        noise = pt["noise"]
        if not isinstance(noise, dict) or set(noise) != {"central", "perturbation"}:
            raise SchemaError(f"{where}.noise: keys must be central, perturbation")
        _box(noise["central"], f"{where}.noise.central")
        _box(noise["perturbation"], f"{where}.noise.perturbation")


def dumps(doc: Dict[str, Any]) -> str:
    validate(doc)
    return json.dumps(doc, indent=2)


def loads(text: str) -> Dict[str, Any]:
    doc = json.loads(text)
    validate(doc)
    return doc


def render_text(result: AnalysisResult, trace: bool = False) -> str:
    out: List[str] = []
    for pt in result.points.values():
        title = "end" if pt.id == "end" else f"point {pt.id}"
        if not pt.reachable:
            out.append(f"{title}: unreachable")
            continue
        out.append(f"{title}:")
        for nm, (f, itv) in pt.vars.items():
            out.append(f"  {nm} in [{fmt(itv.lo)}, {fmt(itv.hi)}]")
            if trace:
                out.append(f"    {nm} = {f}")
        if trace:
            box = pt.noise
            cons = ", ".join(f"{s} in [{fmt(box.interval(s).lo)}, {fmt(box.interval(s).hi)}]"
                             for s in box.constrained())
            out.append(f"    noise: {box.n} central, {box.m} perturbation"
                       + (f"; {cons}" if cons else ""))
    return "\n".join(out)
