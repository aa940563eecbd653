"""Command-line front end.

Every subcommand reads a JSON document (``--input FILE`` or standard input)
whose fields may also be given as flags; flags win. Reports are written as
deterministic JSON. Exit codes: 0 success, 2 invalid input, 3 input outside
an operation's domain, 4 a verification check failed.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import calabi, classdesign, numkit, orbifold, parabolic, quatrep, surfcalc
from .errors import CheckFailure, ConvergenceError, CscError, DomainError, ValidationError
from .serialize import (
    SCHEMA_VERSION,
    config_json,
    dumps,
    encode_float,
    parse_config,
    parse_rational,
    parse_representation,
    parse_surface,
    rational_json,
    validate,
)

EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN, EXIT_CHECK = 0, 2, 3, 4
DECAY_TOL = 0.15
SIGMA_TOL = 1e-10


@dataclass
class Outcome:
    """A report plus the reasons, if any, that its checks failed."""

    report: dict
    failures: list[str] = field(default_factory=list)
    csv_rows: list[dict] | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CHECK if self.failures else EXIT_OK


def _versioned(d: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, **d}


@contextlib.contextmanager
def _stage(name: str):
    """Prefix module errors with the pipeline stage that raised them."""
    try:
        yield
    except ValidationError:
        raise
    except CscError as exc:
        raise type(exc)(f"{name}: {exc}") from exc


# report pieces ---------------------------------------------------------------


def _weight_from(doc) -> Fraction:
    if "weight" in doc:
        w = parse_rational(doc["weight"], "/weight")
    else:
        w = Fraction(doc["p"], doc["q"])
    if not 0 < w < 1:
        raise DomainError(f"weight {w} is not in (0, 1)")
    return w


def orbifold_json(s: orbifold.OrbifoldSurface) -> dict:
    v = orbifold.classify(s)
    pres = orbifold.presentation(s)
    return {
        "genus": s.genus,
        "orders": list(s.orders),
        "chi_orb": rational_json(v.chi_orb),
        "good": v.good,
        "curvature_sign": v.curvature_sign,
        "structure": v.positive_case_structure,
        "has_nontrivial_vector_fields": v.has_nontrivial_vector_fields,
        "presentation": {"generators": list(pres.generators), "relators": pres.relator_strings()},
    }


def stability_json(m: parabolic.ParabolicRuledSurface) -> dict:
    r = parabolic.is_stable(m)
    return {
        "stable": r.stable,
        "witness": None
        if r.witness is None
        else {"degree": r.witness.degree, "contains": sorted(r.witness.contains)},
        "witness_slope": None if r.witness_slope is None else rational_json(r.witness_slope),
        "degree_bound": r.degree_bound,
        "total_weight": rational_json(m.total_weight),
    }


def rep_json(r: quatrep.Representation, source: str, cap: int | None = None) -> dict:
    report = quatrep.check_representation(r)
    irreducible = quatrep.is_irreducible(r) if report.passed else None
    rotations = {}
    for g in r.presentation.generators:
        rot = quatrep.rotation_of(r.assignment[g])
        rotations[g] = {"axis": list(rot.axis), "angle": rot.angle}
    image_order = None
    if cap is not None and report.passed:
        image_order = quatrep.enumerate_image(r, cap)
    return {
        "pass": report.passed,
        "irreducible": irreducible,
        "residuals": list(report.residuals),
        "max_residual": report.max_residual,
        "source": source,
        "assignment": {g: list(r.assignment[g].as_tuple()) for g in r.presentation.generators},
        "rotations": rotations,
        "image_order": image_order,
    }


def design_json(kind: str, chi, c: float, eps: float) -> dict:
    chi = numkit.as_rational(chi)
    if kind == "fiber_ratio":
        cls = classdesign.design_fiber_ratio(chi, c, eps)
    elif kind == "c1_ratio":
        cls = classdesign.design_c1_ratio(chi, c, eps)
    else:
        raise DomainError(f"unknown curvature target kind {kind!r}")
    inv = classdesign.invariants(cls)
    return {
        "kind": kind,
        "target": float(c),
        "epsilon": float(eps),
        "chi_orb": rational_json(chi),
        "kappa1": cls.kappa1,
        "kappa2": cls.kappa2,
        "s": inv.s,
        "scalar_sign": orbifold.sign_name(inv.s),
        "area_base": inv.area_base,
        "area_fiber": inv.area_fiber,
        "fiber_ratio": inv.fiber_ratio,
        "c1_ratio": inv.c1_ratio,
        "achieved": inv.fiber_ratio if kind == "fiber_ratio" else inv.c1_ratio,
    }


# subcommands -----------------------------------------------------------------


def run_hj(doc) -> Outcome:
    validate(doc, "construction_spec", "weight_input")
    x = _weight_from(doc)
    chain, comp = numkit.hj_complement(x)
    return Outcome(
        _versioned(
            {
                "value": rational_json(x),
                "chain": chain,
                "complement": comp,
                "complement_value": rational_json(1 - x),
            }
        )
    )


def run_orbifold(doc) -> Outcome:
    validate(doc, "construction_spec", "orbifold")
    s = orbifold.OrbifoldSurface(doc["genus"], tuple(doc.get("orders", ())))
    return Outcome(_versioned(orbifold_json(s)))


def run_stability(doc) -> Outcome:
    validate(doc, "construction_spec", "surface")
    m = parse_surface(doc)
    rep = stability_json(m)
    failures = [] if rep["stable"] else [_unstable_reason(rep)]
    return Outcome(_versioned(rep), failures)


def _unstable_reason(st) -> str:
    w = st["witness"]
    slope = Fraction(st["witness_slope"]["num"], st["witness_slope"]["den"])
    return f"not parabolically stable: degree {w['degree']} section through points {w['contains']} has slope {slope}"


def run_chain(doc) -> Outcome:
    validate(doc, "construction_spec", "weight_input")
    w = _weight_from(doc)
    chain, comp = numkit.hj_complement(w)
    real = surfcalc.realize_iterated_blowup(w)
    cfg = surfcalc.fiber_chain(w)
    return Outcome(
        _versioned(
            {
                "weight": rational_json(w),
                "hj_chain": chain,
                "complement": comp,
                "self_intersections": cfg.as_chain(),
                "steps": [
                    {"kind": s.kind, "targets": list(s.targets), "new_curve_id": s.new_curve_id}
                    for s in real.steps
                ],
                "unique": real.unique,
                "count": real.count,
                "config": config_json(cfg),
            }
        )
    )


def run_rep(doc, cap: int | None = None) -> Outcome:
    validate(doc, "construction_spec", "representation")
    r = parse_representation(doc)
    rep = rep_json(r, doc.get("preset", "explicit"), cap)
    failures = []
    if not rep["pass"]:
        failures.append(f"relators fail, max residual {rep['max_residual']:.3e}")
    return Outcome(_versioned(rep), failures)


def run_resolve(doc) -> Outcome:
    validate(doc, "construction_spec", "resolve_input")
    cfg = parse_config(doc) if "curves" in doc else surfcalc.fiber_chain(_weight_from(doc))
    model, seq = surfcalc.minimal_model(cfg)
    return Outcome(
        _versioned(
            {
                "minimal_model": config_json(model),
                "contractions": seq,
                "b2_before": surfcalc.b2(cfg),
                "b2_after": surfcalc.b2(model),
                "chain": model.as_chain(),
            }
        )
    )


def _profile_from(doc) -> tuple[str, calabi.LaurentProfile]:
    m, k = doc["m"], doc["k"]
    kind = doc.get("profile", "custom" if "terms" in doc else "scalar_flat")
    if kind == "scalar_flat":
        return kind, calabi.phi_scalar_flat(m, k)
    if kind == "flat":
        return kind, calabi.phi_flat(m, k)
    if "terms" not in doc:
        raise ValidationError("a custom profile needs terms", "/terms")
    terms = []
    for i, t in enumerate(doc["terms"]):
        c = t["coef"]
        c = float(c) if isinstance(c, float) else parse_rational(c, f"/terms/{i}/coef")
        terms.append((c, t["exponent"]))
    return kind, calabi.LaurentProfile(m, k, tuple(terms))


def _num_or_rational(x):
    return rational_json(x) if isinstance(x, Fraction) else float(x)


def run_calabi(doc) -> Outcome:
    validate(doc, "construction_spec", "calabi_input")
    kind, p = _profile_from(doc)
    grid = np.linspace(0.0, float(doc.get("tau_max", 100.0)), int(doc.get("grid", 200)))
    phi, P = p.phi(grid), p.P(grid)
    sigma = calabi.scalar_curvature_exact(p, grid)
    pos = calabi.positivity_check(p, float(grid[-1]), len(grid))
    phi0, dphi0 = p.at_zero()
    rows = [
        {"tau": float(t), "phi": float(a), "P": float(b), "sigma": float(s)}
        for t, a, b, s in zip(grid, phi, P, sigma)
    ]
    max_sigma = float(np.max(np.abs(sigma)))
    failures = []
    if not pos.passed:
        failures.append(f"positivity fails: min P = {pos.min_P:.6g}, min P' = {pos.min_P_prime:.6g}")
    if kind != "custom" and max_sigma > SIGMA_TOL:
        failures.append(f"scalar curvature not zero: max |sigma| = {max_sigma:.3e}")
    decay = None
    if doc.get("decay"):
        t_grid = np.linspace(
            float(doc.get("t_min", p.k)), float(doc.get("t_max", 12.0 * p.k)), int(doc.get("t_points", 40))
        )
        with _stage("decay"):
            fit = calabi.ale_decay_fit(p.m, p.k, t_grid)
        ok = abs(fit.fitted_exponent - fit.expected_exponent) <= DECAY_TOL
        decay = {
            "fitted_exponent": fit.fitted_exponent,
            "expected_exponent": fit.expected_exponent,
            "residual": fit.residual,
            "within_tolerance": ok,
            "t_grid": [float(t) for t in t_grid],
        }
        if not ok:
            failures.append(f"decay exponent {fit.fitted_exponent:.4f} is not within {DECAY_TOL} of {fit.expected_exponent}")
    report = _versioned(
        {
            "m": p.m,
            "k": p.k,
            "profile": kind,
            "terms": [{"coef": _num_or_rational(c), "exponent": e} for c, e in p.terms],
            "phi0": _num_or_rational(phi0),
            "dphi0": _num_or_rational(dphi0),
            "positivity": {"min_P": pos.min_P, "min_P_prime": pos.min_P_prime, "passed": pos.passed},
            "max_abs_sigma": max_sigma,
            "table": rows,
            "decay": decay,
        }
    )
    return Outcome(report, failures, rows)


def run_design(doc) -> Outcome:
    validate(doc, "construction_spec", "design_input")
    chi = parse_rational(doc["chi_orb"], "/chi_orb")
    return Outcome(_versioned(design_json(doc["kind"], chi, doc["c"], doc.get("epsilon", 1e-9))))


def _preset_args(name: str, orb: orbifold.OrbifoldSurface) -> dict:
    spec = {"preset": name}
    if name == "dihedral":
        # the odd cone point carries the cyclic factor
        spec["q"] = sorted(orb.orders)[-1] if orb.orders else 2
    return spec


def run_construct(spec) -> Outcome:
    """Full pipeline: orbifold, stability, fibre chains, representation, class design."""
    validate(spec, "construction_spec")
    m = parse_surface(spec["parabolic_surface"], "/parabolic_surface")
    reasons = []

    with _stage("orbifold"):
        orb = parabolic.to_orbifold(m)
        orb_rep = orbifold_json(orb)
    if not orb_rep["good"]:
        reasons.append("orbifold base is bad (no constant-curvature orbifold metric)")
    elif orb_rep["has_nontrivial_vector_fields"]:
        reasons.append("orbifold base carries nontrivial holomorphic vector fields")

    with _stage("stability"):
        st = stability_json(m)
    if not st["stable"]:
        reasons.append(_unstable_reason(st))

    points = []
    with _stage("chain"):
        for i, p in enumerate(m.points):
            chain, comp = numkit.hj_complement(p.weight)
            points.append(
                {
                    "index": i,
                    "weight": rational_json(p.weight),
                    "hj_chain": chain,
                    "complement": comp,
                    "fiber_chain": surfcalc.fiber_chain(p.weight).as_chain(),
                    "blowups": len(chain) + len(comp),
                }
            )
        total = parabolic.blowup_count(m)

    rep = None
    if "representation" in spec:
        raw = spec["representation"]
        if isinstance(raw, str):
            raw = _preset_args(raw, orb)
        pres = orbifold.presentation(orb)
        with _stage("rep"):
            r = parse_representation(raw, "/representation", None if "preset" in raw else pres)
            rep = rep_json(r, raw.get("preset", "explicit"))
        rep["matches_orbifold"] = r.presentation == pres
        if not rep["matches_orbifold"]:
            reasons.append("representation is for a different orbifold group")
        elif not rep["pass"]:
            reasons.append(f"representation fails relators, max residual {rep['max_residual']:.3e}")
        elif not rep["irreducible"]:
            reasons.append("representation is reducible")

    design = None
    if "curvature_target" in spec:
        t = spec["curvature_target"]
        with _stage("design"):
            design = design_json(t["kind"], orbifold.euler_orb(orb), t["c"], t.get("epsilon", 1e-9))

    report = _versioned(
        {
            "feasible": not reasons,
            "reasons": reasons,
            "orbifold": orb_rep,
            "stability": st,
            "points": points,
            "total_blowups": total,
            "representation": rep,
            "class_design": design,
        }
    )
    return Outcome(report, reasons)


# argument handling -----------------------------------------------------------


def _read_doc(args, need_stdin: bool):
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read {args.input}: {exc.strerror}", "") from exc
    elif need_stdin:
        text = sys.stdin.read()
    else:
        text = ""
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "") from exc
    if not isinstance(doc, dict):
        raise ValidationError("top-level JSON value must be an object", "")
    return doc


def _overlay(doc, args, names):
    for n in names:
        v = getattr(args, n, None)
        if v is not None:
            doc[n] = v
    return doc


def _rational_arg(text):
    try:
        return str(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _orders_arg(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE", help="JSON input (default: standard input when flags are missing)")
    common.add_argument("--output", metavar="FILE", help="write the report here instead of standard output")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="csv is available for calabi only")

    parser = argparse.ArgumentParser(prog="csckit", description="Desk-scale checks for CSC Kahler gluing data.")
    sub = parser.add_subparsers(dest="command", required=True)

    def weight_flags(p):
        p.add_argument("--p", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--weight", type=_rational_arg, help="weight as p/q")

    p = sub.add_parser("hj", parents=[common], help="Hirzebruch-Jung expansion of p/q and of 1 - p/q")
    weight_flags(p)
    p = sub.add_parser("orbifold", parents=[common], help="Euler characteristic, goodness, group presentation")
    p.add_argument("--genus", type=int)
    p.add_argument("--orders", type=_orders_arg, help="comma-separated cone orders")
    sub.add_parser("stability", parents=[common], help="parabolic stability of a marked ruled surface")
    p = sub.add_parser("chain", parents=[common], help="blow-up chain over a parabolic point")
    weight_flags(p)
    p = sub.add_parser("rep", parents=[common], help="check a representation into SU(2)/Z2")
    p.add_argument("--preset", choices=quatrep.PRESETS)
    p.add_argument("--phi", type=float)
    p.add_argument("--q", type=int)
    p.add_argument("--enumerate", action="store_true", help="also compute the order of the image group")
    p.add_argument("--cap", type=int, default=1000)
    p = sub.add_parser("resolve", parents=[common], help="contract (-1)-curves down to a minimal model")
    weight_flags(p)
    p = sub.add_parser("calabi", parents=[common], help="scalar curvature table of a momentum profile")
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--profile", choices=("scalar_flat", "flat", "custom"))
    p.add_argument("--grid", type=int)
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--decay", action="store_true", default=None, help="also fit the ALE decay exponent")
    p.add_argument("--t-min", dest="t_min", type=float)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--t-points", dest="t_points", type=int)
    p = sub.add_parser("design", parents=[common], help="solve for a Kahler class hitting a ratio target")
    p.add_argument("--kind", choices=("fiber_ratio", "c1_ratio"))
    p.add_argument("--chi", dest="chi_orb", type=_rational_arg)
    p.add_argument("--c", type=float)
    p.add_argument("--epsilon", type=float)
    sub.add_parser("construct", parents=[common], help="run the whole pipeline on a construction spec")
    return parser


_FLAGS = {
    "hj": ("p", "q", "weight"),
    "chain": ("p", "q", "weight"),
    "resolve": ("p", "q", "weight"),
    "orbifold": ("genus", "orders"),
    "stability": (),
    "rep": ("preset", "phi", "q"),
    "calabi": ("m", "k", "profile", "grid", "tau_max", "decay", "t_min", "t_max", "t_points"),
    "design": ("kind", "chi_orb", "c", "epsilon"),
    "construct": (),
}

_RUNNERS = {
    "hj": run_hj,
    "orbifold": run_orbifold,
    "stability": run_stability,
    "chain": run_chain,
    "resolve": run_resolve,
    "calabi": run_calabi,
    "design": run_design,
    "construct": run_construct,
}


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["tau", "phi", "P", "sigma"])
    for r in rows:
        w.writerow([encode_float(r[c]) for c in ("tau", "phi", "P", "sigma")])
    return buf.getvalue()


_VALUE_FLAGS = ("--chi", "--c", "--weight", "--phi", "--epsilon")


def _glue_negative_values(argv):
    # argparse takes "-1/6" for an option; "--chi=-1/6" is unambiguous
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def execute(argv) -> tuple[int, str]:
    """Run one command; returns the exit code and the text written as output."""
    args = build_parser().parse_args(_glue_negative_values(list(argv)))
    flags = _FLAGS[args.command]
    given = any(getattr(args, n, None) is not None for n in flags)
    doc = _read_doc(args, need_stdin=not given)
    doc = _overlay(doc, args, flags)
    if args.format == "csv" and args.command != "calabi":
        raise ValidationError("--format csv is only available for calabi", "")
    if args.command == "rep":
        outcome = run_rep(doc, args.cap if args.enumerate else None)
    else:
        outcome = _RUNNERS[args.command](doc)
    text = _csv_text(outcome.csv_rows) if args.format == "csv" else dumps(outcome.report)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for reason in outcome.failures:
        print(f"csckit {args.command}: check failed: {reason}", file=sys.stderr)
    return outcome.exit_code, text


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, _ = execute(argv)
        return code
    except SystemExit as exc:  # argparse: usage errors exit 2, --help exits 0
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    except ValidationError as exc:
        print(f"csckit: invalid input at {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CheckFailure as exc:
        print(f"csckit: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (DomainError, ConvergenceError) as exc:
        print(f"csckit: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
