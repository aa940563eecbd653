"""JSON wire format: deterministic encoding, schema validation, and decoding of domain objects.

Rationals travel as ``{"num": p, "den": q}``, quaternions as ``[w, x, y, z]``,
points at infinity as the string ``"inf"``. Floats are written with 17
significant digits and keys are sorted, so equal inputs give identical bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import CscError, ValidationError
from .numkit import as_rational
from .orbifold import GroupPresentation, OrbifoldSurface, presentation
from .parabolic import ParabolicPoint, ParabolicRuledSurface
from .quatrep import QuatModSign, Representation, preset
from .surfcalc import Curve, CurveConfig

SCHEMA_VERSION = 1


# encoding --------------------------------------------------------------------


def encode_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot encode non-finite float {x!r}")
    return format(x, ".17g")


def dumps(obj, indent: int | None = 2) -> str:
    """Deterministic JSON text (sorted keys, fixed float format, trailing newline)."""
    return _dump(obj, indent, 0) + "\n"


def _dump(obj, indent, level) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return encode_float(obj)
    if isinstance(obj, Fraction):
        return _dump(rational_json(obj), indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = "," if indent is not None else ", "
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_dump(v, indent, level + 1)}" for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def rational_json(x) -> dict:
    x = as_rational(x)
    return {"num": x.numerator, "den": x.denominator}


def coord_json(x):
    return "inf" if x is None else rational_json(x)


def word_string(word) -> str:
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in word) or "1"


def config_json(c: CurveConfig) -> dict:
    return {
        "curves": [
            {"id": i, "self_int": cv.self_int, "label": cv.label} for i, cv in sorted(c.curves.items())
        ],
        "incidences": sorted(sorted(p) for p in c.incidences),
    }


# schemas ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("csckit").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate(doc, schema_name: str, definition: str | None = None) -> None:
    """Validate against a bundled schema, raising ``ValidationError`` with a JSON pointer."""
    schema = load_schema(schema_name)
    if definition is not None:
        schema = {"$ref": f"#/$defs/{definition}", "$defs": schema["$defs"]}
    validator = jsonschema.Draft202012Validator(schema)
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise ValidationError(error.message, _pointer(error.absolute_path))


# decoding --------------------------------------------------------------------


def parse_rational(obj, pointer: str) -> Fraction:
    try:
        if isinstance(obj, dict):
            if obj.get("den", 1) <= 0:
                raise ValidationError("denominator must be positive", pointer + "/den")
            return Fraction(int(obj["num"]), int(obj.get("den", 1)))
        if isinstance(obj, str) and obj != "inf":
            return Fraction(obj)
        if isinstance(obj, int) and not isinstance(obj, bool):
            return Fraction(obj)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational: {obj!r}", pointer) from exc
    raise ValidationError(f"not a rational: {obj!r}", pointer)


def parse_coord(obj, pointer: str):
    return None if obj == "inf" else parse_rational(obj, pointer)


def parse_surface(obj, pointer: str = "") -> ParabolicRuledSurface:
    points = []
    seen = {}
    for i, p in enumerate(obj["points"]):
        here = f"{pointer}/points/{i}"
        base = parse_coord(p["base"], here + "/base")
        fiber = parse_coord(p["fiber"], here + "/fiber")
        weight = parse_rational(p["weight"], here + "/weight")
        if not 0 < weight < 1:
            raise ValidationError(f"weight {weight} is not in (0, 1)", here + "/weight")
        if base in seen:
            raise ValidationError(f"base point repeats that of point {seen[base]}", here + "/base")
        seen[base] = i
        points.append(ParabolicPoint(base, fiber, weight))
    return ParabolicRuledSurface(tuple(points))


def surface_json(m: ParabolicRuledSurface) -> dict:
    return {
        "points": [
            {"base": coord_json(p.base), "fiber": coord_json(p.fiber), "weight": rational_json(p.weight)}
            for p in m.points
        ]
    }


def parse_word(text: str, pointer: str):
    if text.strip() in ("", "1"):
        return ()
    word = []
    for tok in text.replace(" ", "").split("*"):
        name, _, exp = tok.partition("^")
        if not name:
            raise ValidationError(f"bad relator token {tok!r}", pointer)
        try:
            word.append((name, int(exp) if exp else 1))
        except ValueError as exc:
            raise ValidationError(f"bad exponent in {tok!r}", pointer) from exc
    return tuple(word)


def parse_quaternion(obj, pointer: str) -> QuatModSign:
    try:
        return QuatModSign(*[float(c) for c in obj])
    except CscError as exc:
        raise ValidationError(str(exc), pointer) from exc


def parse_representation(obj, pointer: str = "", pres: GroupPresentation | None = None) -> Representation:
    """Preset (``{"preset": ..., "phi": ..., "q": ...}``) or explicit assignment.

    An explicit assignment is checked against ``pres`` when given, otherwise
    against its own ``generators``/``relators`` or an ``orbifold`` field.
    """
    if "preset" in obj:
        try:
            return preset(obj["preset"], phi=float(obj.get("phi", 0.0)), q=obj.get("q"))
        except CscError as exc:
            raise ValidationError(str(exc), pointer + "/preset") from exc
    if pres is None:
        if "orbifold" in obj:
            orb = obj["orbifold"]
            pres = presentation(OrbifoldSurface(orb.get("genus", 0), tuple(orb.get("orders", ()))))
        else:
            gens = tuple(obj["generators"])
            rels = tuple(parse_word(r, f"{pointer}/relators/{i}") for i, r in enumerate(obj["relators"]))
            for i, w in enumerate(rels):
                for g, _ in w:
                    if g not in gens:
                        raise ValidationError(f"relator uses unknown generator {g!r}", f"{pointer}/relators/{i}")
            pres = GroupPresentation(gens, rels)
    assignment = {}
    for g in pres.generators:
        if g not in obj["assignment"]:
            raise ValidationError(f"no image for generator {g!r}", pointer + "/assignment")
        assignment[g] = parse_quaternion(obj["assignment"][g], f"{pointer}/assignment/{g}")
    return Representation(pres, assignment)


def parse_config(obj, pointer: str = "") -> CurveConfig:
    curves = {}
    for i, cv in enumerate(obj["curves"]):
        if cv["id"] in curves:
            raise ValidationError(f"duplicate curve id {cv['id']}", f"{pointer}/curves/{i}/id")
        curves[cv["id"]] = Curve(int(cv["self_int"]), cv.get("label", ""))
    pairs = []
    for i, (a, b) in enumerate(obj.get("incidences", [])):
        if a == b:
            raise ValidationError("self-incidence", f"{pointer}/incidences/{i}")
        if a not in curves or b not in curves:
            raise ValidationError("incidence names an unknown curve", f"{pointer}/incidences/{i}")
        pairs.append((a, b))
    return CurveConfig(curves, pairs)
