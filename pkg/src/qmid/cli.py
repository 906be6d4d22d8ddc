"""Command-line surface: deterministic file outputs for every computation.

All floating output uses 12 significant digits; CSV files carry the full
invocation in a leading comment so a dataset identifies how it was made.
Reruns with identical flags and seeds are byte-identical.  Validation
problems exit with code 2; verification suites exit 1 on failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import QmidError
from .kkt import kkt_report
from .measurement import (
    Measurement,
    Particle,
    classify_optimality,
    construct_measurement,
    optimal_IF,
    optimal_IR,
)
from .measures import measures, measures_batch
from .oracle import mc_measures
from .region import (
    PlaneKind,
    averaged_region,
    lower_boundaries,
    sweep_region,
    tangent_point,
    upper_boundary,
)
from .spectra import Spectrum, auxiliary_scalars, random_spectra

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _spec_str(values) -> str:
    return ";".join(_fmt(v) for v in values)


def _invocation(argv) -> str:
    return "qmid " + " ".join(argv)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _csv_header(argv) -> list:
    return [f"# invocation: {_invocation(argv)}", "x,y,spectrum"]


def cmd_measures(args, argv) -> int:
    values = []
    for tok in args.values.split(","):
        try:
            values.append(float(tok))
        except ValueError:
            raise QmidError(f"could not parse singular value {tok!r}")
    if len(values) != args.d:
        raise QmidError(f"expected {args.d} values, got {len(values)}")
    s = Spectrum(values)
    mv = measures(s)
    aux = auxiliary_scalars(s)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "d": args.d,
        "I": mv.info_gain,
        "G": mv.estimation_fidelity,
        "F": mv.operation_fidelity,
        "R": mv.reversibility,
        "p": mv.outcome_probability,
        "sigma_sq": aux.sigma_sq,
        "tau": aux.tau,
        "lambda_max": aux.lambda_max,
        "lambda_min": aux.lambda_min,
    }
    if args.format == "json":
        _emit(json.dumps({k: v if isinstance(v, (int, str)) else float(_fmt(v))
                          for k, v in doc.items()}, indent=2) + "\n", args.out)
    else:
        lines = [f"# invocation: {_invocation(argv)}", "quantity,value"]
        for key in ("I", "G", "F", "R", "p", "sigma_sq", "tau", "lambda_max", "lambda_min"):
            lines.append(f"{key},{_fmt(doc[key])}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _default_step(d: int) -> float:
    return 0.01 if d <= 6 else 0.02


def cmd_region(args, argv) -> int:
    plane = PlaneKind.parse(args.plane)
    step = args.step if args.step is not None else _default_step(args.d)
    sweep = sweep_region(args.d, plane, step)
    lines = _csv_header(argv)
    xs, ys = sweep.xs, sweep.ys
    for i in range(len(sweep)):
        lam = sweep.spectrum(i).values
        lines.append(f"{_fmt(xs[i])},{_fmt(ys[i])},{_spec_str(lam)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_boundary(args, argv) -> int:
    plane = PlaneKind.parse(args.plane)
    lines = _csv_header(argv)
    chains = [("upper", upper_boundary(args.d, plane, args.samples))]
    chains += [("lower", pl) for pl in lower_boundaries(args.d, plane, args.samples)]
    for side, pl in chains:
        lines.append(f"# curve: {side} {pl.label}")
        for pt in pl.points:
            lines.append(f"{_fmt(pt.x)},{_fmt(pt.y)},{_spec_str(pt.source_spectrum.values)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_hull(args, argv) -> int:
    plane = PlaneKind.parse(args.plane)
    step = args.step if args.step is not None else _default_step(args.d)
    pl = averaged_region(args.d, plane, step)
    lines = _csv_header(argv)
    for pt in pl.points:
        lines.append(f"{_fmt(pt.x)},{_fmt(pt.y)},{_spec_str(pt.source_spectrum.values)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_tangent(args, argv) -> int:
    tr = tangent_point(args.d)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "d": tr.d,
        "lambda_T": float(_fmt(tr.lambda_T)),
        "I_T": float(_fmt(tr.I_T)),
        "F_T": float(_fmt(tr.F_T)),
        "max_gap": float(_fmt(tr.max_gap)),
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _measurement_doc(m: Measurement) -> str:
    doc = json.loads(m.to_json())
    doc["completeness_residual"] = m.completeness_residual()
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_optimal(args, argv) -> int:
    if args.kind == "IF":
        m = optimal_IF(args.d, args.target)
    else:
        m = optimal_IR(args.d, args.target)
    _emit(_measurement_doc(m), args.out)
    return 0


def cmd_construct(args, argv) -> int:
    with open(args.particles) as fh:
        doc = json.load(fh)
    particles = [Particle(Spectrum(entry["spectrum"]), float(entry["mass"]))
                 for entry in doc["particles"]]
    m = construct_measurement(particles)
    _emit(_measurement_doc(m), args.out)
    return 0


def cmd_classify(args, argv) -> int:
    with open(args.measurement) as fh:
        m = Measurement.from_json(fh.read())
    conditions = classify_optimality(m)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "d": m.d,
        "conditions": sorted(conditions),
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _verify_kkt(args) -> dict:
    lams = [round(0.1 * i, 1) for i in range(1, 10)]
    failures = []
    worst = 0.0
    n = 0
    for d in range(3, 9):
        for lam in lams:
            cases = [(1, d - 1, "F-max"), (1, d - 1, "R-max"), (d - 1, 1, "R-min")]
            cases += [(k, 1, "F-min") for k in range(1, d)]
            for k, l, prob in cases:
                rep = kkt_report(d, k, l, lam, prob)
                n += 1
                worst = max(worst, rep.stationarity_residual)
                if not rep.ok:
                    failures.append({"d": d, "k": k, "l": l, "lam": lam, "problem": prob,
                                     "residual": rep.stationarity_residual})
    # off-family perturbations must be rejected
    controls = []
    for d, k, l, prob in [(4, 1, 3, "F-max"), (4, 2, 1, "F-min"),
                          (4, 1, 3, "R-max"), (4, 3, 1, "R-min")]:
        v = np.zeros(d)
        v[:k] = 1.0
        v[k:k + l] = 0.5
        if l == 1:
            v[k - 1] -= 0.05
        else:
            v[k] += 0.05
        rep = kkt_report(d, k, l, 0.5, prob, spectrum=v)
        controls.append({"problem": prob, "residual": rep.stationarity_residual})
        if rep.stationarity_residual < 1e-3:
            failures.append({"problem": prob, "negative_control": True,
                             "residual": rep.stationarity_residual})
        n += 1
    return {"n_checks": n, "worst_residual": worst, "negative_controls": controls,
            "failures": failures}


def _verify_oracle(args) -> dict:
    rng = np.random.default_rng(args.seed)
    failures = []
    checked = 0
    for d in range(2, 7):
        for _ in range(20):
            lam = np.sort(rng.uniform(0.0, 1.0, d))[::-1]
            lam[0] = 1.0  # canonical scale; measures are scale invariant
            est = mc_measures(lam, args.n, int(rng.integers(2 ** 31)))
            mv = measures(lam)
            checked += 1
            for key, closed in (("F", mv.operation_fidelity), ("G", mv.estimation_fidelity)):
                e = est[key]
                if abs(e.mean - closed) > 3.0 * e.std_error:
                    failures.append({"d": d, "measure": key, "closed": closed,
                                     "mc": e.mean, "std_error": e.std_error})
    return {"n_checks": checked, "failures": failures,
            "allowed_failures": max(1, checked // 100)}


def _verify_invariants(args) -> dict:
    rng = np.random.default_rng(args.seed)
    failures = []
    n = args.n if args.n is not None else 10_000
    n = min(n, 100_000)
    for d in range(2, 7):
        lams = random_spectra(d, n // 5, rng)
        out = measures_batch(lams)
        perm = lams[:, rng.permutation(d)]
        out_p = measures_batch(perm)
        for key in ("I", "G", "F", "R", "p"):
            dev = float(np.max(np.abs(out[key] - out_p[key])))
            if dev > 1e-12:
                failures.append({"d": d, "check": f"interchange {key}", "dev": dev})
        c = 0.5
        scaled = measures_batch(lams * c)
        for key in ("I", "G", "F", "R"):
            dev = float(np.max(np.abs(out[key] - scaled[key])))
            if dev > 1e-12:
                failures.append({"d": d, "check": f"rescaling {key}", "dev": dev})
        dev = float(np.max(np.abs(scaled["p"] - c * c * out["p"])))
        if dev > 1e-12:
            failures.append({"d": d, "check": "p scales as c^2", "dev": dev})
    return {"n_checks": 5 * (n // 5) * 10, "failures": failures}


def cmd_verify(args, argv) -> int:
    if args.suite == "kkt":
        report = _verify_kkt(args)
        passed = not report["failures"]
    elif args.suite == "oracle":
        if args.n is None:
            args.n = 1_000_000
        report = _verify_oracle(args)
        passed = len(report["failures"]) <= report["allowed_failures"]
    else:
        report = _verify_invariants(args)
        passed = not report["failures"]
    doc = {"schema_version": SCHEMA_VERSION, "suite": args.suite,
           "pass": bool(passed), **report}
    _emit(json.dumps(doc, indent=2, default=float) + "\n", args.out)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmid",
        description="Information and disturbance measures of quantum measurements",
        epilog="Environment: QMID_BACKEND selects the sweep backend (numba|numpy), "
               "QMID_THREADS the sweep thread count.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("measures", help="measures of one singular-value spectrum")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--values", type=str, required=True,
                    help="comma-separated singular values, length d")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_measures)

    sp = sub.add_parser("region", help="sweep the allowed region of one plane")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--plane", type=str, required=True, help="GF, GR, IF or IR")
    sp.add_argument("--step", type=float, default=None,
                    help="grid step (default 0.01 for d<=6, else 0.02)")
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_region)

    sp = sub.add_parser("boundary", help="boundary polylines of one plane")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--plane", type=str, required=True)
    sp.add_argument("--samples", type=int, default=1001)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("hull", help="convex hull of the averaged region")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--plane", type=str, required=True)
    sp.add_argument("--step", type=float, default=None)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_hull)

    sp = sub.add_parser("tangent", help="tangent point of the averaged I-F boundary")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_tangent)

    sp = sub.add_parser("optimal", help="optimal measurement for a target F or R")
    sp.add_argument("--kind", choices=("IF", "IR"), required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--target", type=float, required=True)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_optimal)

    sp = sub.add_parser("construct", help="build a measurement from a particle file")
    sp.add_argument("--particles", type=str, required=True,
                    help='JSON file: {"particles": [{"spectrum": [...], "mass": m}, ...]}')
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("classify", help="optimality conditions of a measurement file")
    sp.add_argument("--measurement", type=str, required=True)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=("kkt", "oracle", "invariants"), required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except QmidError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
