"""Command-line front door.

Subcommands load a JSON profile configuration, dispatch to the library
and emit JSON reports on stdout or CSV files.  All outputs are
deterministic for identical inputs and seeds; per-stage timings are
only included on request since they would break byte-for-byte
reproducibility.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical
failure.  The DECAYSCOPE_THREADS environment variable caps the worker
threads used by scan and hunt.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, asymptotics, search, spectrum, wave_sim
from .cocycle import c_infinity
from .damping import load_profile, scale
from .errors import DecayscopeError, InvalidInput, NumericalFailure

CONVENTION_HELP = "rate convention: sec1 measures ln||G||, sec4 measures ln||G||^2 (twice sec1)"


def _worker_count() -> int:
    raw = os.environ.get("DECAYSCOPE_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise InvalidInput(f"DECAYSCOPE_THREADS must be an integer, got {raw!r}")


def _emit_json(doc: dict):
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path, header: str, rows):
    lines = [header] + [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_alpha(args) -> int:
    p = load_profile(args.profile)
    report = spectrum.alpha(p, K=args.K)
    doc = report.to_dict()
    doc["convention"] = args.convention
    if not args.timings:
        doc.pop("timings_ms")
    _emit_json(doc)
    return 0


def _cmd_cinf(args) -> int:
    p = load_profile(args.profile)
    value = c_infinity(p, convention=args.convention)
    _emit_json({"c_infinity": value, "convention": args.convention})
    return 0


def _cmd_spectrum(args) -> int:
    p = load_profile(args.profile)
    rep = spectrum.spectrum(spectrum.assemble(p, args.K))
    rows = [(lam.real, lam.imag) for lam in rep.eigenvalues]
    _write_csv(args.out, "re,im", rows)
    if args.out is not None:
        _emit_json(
            {
                "K": rep.K,
                "count": len(rep.eigenvalues),
                "d0": rep.d0,
                "dinf_estimate": rep.dinf_estimate,
                "weak_stab": rep.weak_stab,
                "zero_tol": rep.zero_tol,
                "out": str(args.out),
            }
        )
    return 0


def _cmd_scan(args) -> int:
    p = load_profile(args.profile)
    lams = np.linspace(args.lambda_min, args.lambda_max, args.points)

    def rate(lam: float) -> float:
        return c_infinity(scale(p, lam), convention=args.convention)

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(rate, lams))
    else:
        vals = [rate(lam) for lam in lams]
    rows = [
        (lam, v, v / lam if lam > 0 else float("nan")) for lam, v in zip(lams, vals)
    ]
    _write_csv(args.out, "lambda,cinf,cinf_over_lambda", rows)
    if args.out is not None:
        _emit_json(
            {
                "points": int(args.points),
                "lambda_min": float(args.lambda_min),
                "lambda_max": float(args.lambda_max),
                "convention": args.convention,
                "out": str(args.out),
            }
        )
    return 0


def _cmd_slopes(args) -> int:
    p = load_profile(args.profile)
    report = asymptotics.slope_infinity(p)
    doc = report.to_dict()
    doc["convention"] = "sec1"
    doc["slope_infinity_sec4"] = 2.0 * report.slope_infinity
    doc["slope_zero_sec4"] = 2.0 * report.slope_zero
    _emit_json(doc)
    return 0


def _cmd_simulate(args) -> int:
    p = load_profile(args.profile)
    if args.beam:
        spec = wave_sim.BeamSpec(k=args.beam, x0=0.0, direction=1)
        ratio, predicted, gap = wave_sim.beam_transport_check(p, spec, args.T, dt=args.dt)
        K = wave_sim.default_beam_cutoff(spec)
        state = wave_sim.gaussian_beam_initial(p, spec, K)
        trace = wave_sim.energy_trace(p, state, args.T, args.dt)
        summary = {
            "mode": "beam",
            "k": args.beam,
            "K": K,
            "ratio": ratio,
            "predicted": predicted,
            "gap": gap,
        }
    else:
        K = args.K
        state = wave_sim.generic_state(p.n, K)
        trace = wave_sim.energy_trace(p, state, args.T, args.dt)
        summary = {"mode": "generic", "K": K}
        window = (0.5 * args.T, args.T)
        try:
            summary["fitted_rate"] = wave_sim.fit_decay_rate(trace, window)
            summary["fit_window"] = list(trace.fit_window)
            summary["fit_residual"] = trace.fit_residual
        except InvalidInput as exc:
            summary["fit_error"] = str(exc)
    if args.out:
        wave_sim.trace_to_csv(trace, args.out)
        summary["out"] = str(args.out)
    _emit_json(summary)
    return 0


def _cmd_hunt(args) -> int:
    workers = _worker_count()
    if workers > 1 and args.trials > 1:
        # trials are independent; per-trial RNG keys make the partition irrelevant
        chunks = np.array_split(np.arange(args.trials), workers)

        def run(chunk):
            out = []
            for trial in chunk:
                got = search.hunt(
                    args.property,
                    1,
                    args.seed,
                    n=args.n,
                    include_reference=(trial == 0),
                )
                out.extend(
                    search.Finding(f.property, f.witnesses, f.values, f.margin, args.seed, int(trial))
                    for f in got
                )
            return out

        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, [c for c in chunks if len(c)]))
        findings = [f for part in parts for f in part]
        findings.sort(key=lambda f: (-f.margin, f.trial))
    else:
        findings = search.hunt(args.property, args.trials, args.seed, n=args.n)
    if args.out:
        search.write_findings(findings, args.out)
        _emit_json({"findings": len(findings), "out": str(args.out), "seed": args.seed})
    else:
        for f in findings:
            sys.stdout.write(json.dumps(search.finding_to_dict(f), sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decayscope",
        description="Energy decay rates of vectorial damped waves on the circle.",
    )
    parser.add_argument("--version", action="version", version=f"decayscope {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_convention(sp):
        sp.add_argument("--convention", choices=["sec1", "sec4"], default="sec1", help=CONVENTION_HELP)

    sp = sub.add_parser("alpha", help="best decay rate report for a profile")
    sp.add_argument("profile")
    sp.add_argument("--K", type=int, default=spectrum.DEFAULT_K)
    sp.add_argument("--timings", action="store_true", help="include per-stage timings (non-deterministic)")
    add_convention(sp)
    sp.set_defaults(func=_cmd_alpha)

    sp = sub.add_parser("cinf", help="long-time contraction rate only")
    sp.add_argument("profile")
    add_convention(sp)
    sp.set_defaults(func=_cmd_cinf)

    sp = sub.add_parser("spectrum", help="eigenvalues of the truncated generator as CSV")
    sp.add_argument("profile")
    sp.add_argument("--K", type=int, default=spectrum.DEFAULT_K)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("scan", help="rate as a function of a damping scale factor")
    sp.add_argument("profile")
    sp.add_argument("--lambda-min", type=float, required=True, dest="lambda_min")
    sp.add_argument("--lambda-max", type=float, required=True, dest="lambda_max")
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--out", default=None)
    add_convention(sp)
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("slopes", help="asymptotic slopes of the rescaled rate")
    sp.add_argument("profile")
    sp.set_defaults(func=_cmd_slopes)

    sp = sub.add_parser("simulate", help="time-domain energy trace and fitted rate")
    sp.add_argument("profile")
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--beam", type=int, default=0, help="propagate a Gaussian beam of this frequency")
    sp.add_argument("--K", type=int, default=32)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("hunt", help="randomized search for rate anomalies")
    sp.add_argument("--property", choices=list(search.PROPERTIES), required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_hunt)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (InvalidInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DecayscopeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
