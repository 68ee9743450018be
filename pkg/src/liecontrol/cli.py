"""Command-line front end.

Exit codes: 0 success, 1 validation or input error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify_algebra, controllability_verdict
from .closure import ClosureOptions, generate_dynamical_algebra
from .dynamics import evolve_density, expectation, propagate
from .errors import NumericError, ValidationError
from .io import SpecFileError, dump_system, encode_matrix, format_pulse, load_system, read_pulse
from .optimizer import OptimizerOptions, kinematical_bound, maximize_expectation, orbit_bound
from .reachability import SearchOptions, reachable_verdict

LOG = logging.getLogger("liecontrol")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2


def example_path(name: str) -> Path:
    """Path of a bundled example system file (``two_level``, ``three_level``, ``four_level``)."""
    return Path(str(resources.files("liecontrol") / "data" / f"{name}.json"))


def _header(args, sf, command: str) -> dict:
    return {
        "tool": "liecontrol",
        "version": __version__,
        "command": command,
        "input_digest": sf.digest,
        "seed": args.seed,
        "system": {
            "label": sf.system.label,
            "dimension": sf.system.dim,
            "controls": sf.system.n_controls,
        },
    }


def _closure_opts(args) -> ClosureOptions:
    return ClosureOptions(tol=1e-8 * args.tolerance_scale)


def _algebra_section(sf, args) -> tuple[dict, object]:
    basis = generate_dynamical_algebra(sf.system, _closure_opts(args))
    cls = classify_algebra(basis)
    verdict = controllability_verdict(cls, sf.system.dim)
    form = None
    if cls.form is not None:
        form = {
            "symmetry": cls.form.symmetry,
            "residual": cls.form.residual,
            "J": encode_matrix(cls.form.J),
        }
    section = {
        "algebra": {
            "dimension": len(basis),
            "tag": cls.tag,
            "contains_identity": basis.contains_identity,
            "form": form,
            "notes": cls.notes + basis.warnings,
        },
        "controllability": {
            "complete": verdict.complete,
            "pure_state": verdict.pure_state,
            "notes": verdict.notes,
        },
    }
    return section, basis


def cmd_classify(args) -> dict:
    sf = load_system(args.file)
    report = _header(args, sf, "classify")
    section, _ = _algebra_section(sf, args)
    report.update(section)
    return report


def cmd_reach(args) -> dict:
    sf = load_system(args.file)
    r0, r1 = sf.state(args.from_), sf.state(args.to)
    report = _header(args, sf, "reach")
    section, basis = _algebra_section(sf, args)
    report.update(section)
    opts = SearchOptions(restarts=args.restarts, seed=args.seed, tol=1e-6 * args.tolerance_scale)
    v = reachable_verdict(sf.system, r0, r1, opts, basis=basis)
    report["reachability"] = {
        "from": args.from_,
        "to": args.to,
        "kinematic": v.kinematic,
        "form_necessary": v.form_necessary,
        "form_residuals": None if v.form_residuals is None else list(v.form_residuals),
        "orbit_distance": v.orbit_distance,
        "verdict": v.verdict,
        "notes": v.notes,
    }
    return report


def cmd_optimize(args) -> dict:
    sf = load_system(args.file)
    A = sf.observable(args.observable)
    r0 = sf.state(args.from_)
    if args.steps < 1 or not args.duration > 0:
        raise ValidationError(f"invalid pulse grid: T={args.duration}, K={args.steps}")
    report = _header(args, sf, "optimize")
    basis = generate_dynamical_algebra(sf.system, _closure_opts(args))
    opts = OptimizerOptions(
        duration=args.duration, steps=args.steps, restarts=args.restarts, seed=args.seed,
        max_iter=args.max_iter,
    )
    rep = maximize_expectation(sf.system, r0, A, opts)
    ob = orbit_bound(basis, r0, A, SearchOptions(restarts=args.orbit_restarts, seed=args.seed))
    report["optimization"] = {
        "observable": args.observable,
        "from": args.from_,
        "duration": args.duration,
        "steps": args.steps,
        "restarts": args.restarts,
        "kinematical_bound": kinematical_bound(A, r0),
        "orbit_bound": ob,
        "best_dynamical_value": rep.best_dynamical_value,
        "gap": rep.gap,
        "converged": rep.converged,
        "iterations": rep.iterations,
    }
    if args.pulse_out:
        Path(args.pulse_out).write_text(format_pulse(rep.best_pulse))
        report["optimization"]["pulse_file"] = str(args.pulse_out)
    return report


def cmd_simulate(args) -> dict:
    sf = load_system(args.file)
    pulse = read_pulse(args.pulse)
    if pulse.n_controls != sf.system.n_controls:
        raise ValidationError(
            f"pulse has {pulse.n_controls} channels, system has {sf.system.n_controls} controls"
        )
    r0 = sf.state(args.state)
    res = propagate(sf.system, pulse)
    rho = evolve_density(r0, res.final_unitary)
    report = _header(args, sf, "simulate")
    names = sorted(set(sf.observables) | set(sf.states))
    sim = {
        "state": args.state,
        "duration": pulse.duration,
        "steps": pulse.steps,
        "unitarity_defect": res.unitarity_defect,
        "final_state": encode_matrix(rho),
        "expectations": {n: expectation(sf.observable(n), rho) for n in names},
    }
    if args.target:
        sim["target"] = args.target
        sim["target_distance"] = float(np.linalg.norm(rho - sf.state(args.target)))
    if args.show_unitary:
        sim["final_unitary"] = encode_matrix(res.final_unitary)
    report["simulation"] = sim
    return report


def cmd_export(args) -> dict:
    sf = load_system(args.file)
    text = dump_system(sf)
    return {"_raw": text}


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.10g}"
    if v is None:
        return "n/a"
    return str(v)


def _is_matrix(v) -> bool:
    return isinstance(v, list) and v and isinstance(v[0], list) and v[0] and isinstance(v[0][0], list)


def render_human(report: dict) -> str:
    lines = [f"liecontrol {report['version']}  command: {report['command']}  seed: {report['seed']}"]
    s = report["system"]
    lines.append(f"system: {s['label'] or '(unnamed)'}  N = {s['dimension']}  controls = {s['controls']}")
    for key in ("algebra", "controllability", "reachability", "optimization", "simulation"):
        if key not in report:
            continue
        lines.append(f"[{key}]")
        for k, v in report[key].items():
            if _is_matrix(v):
                lines.append(f"  {k}:")
                for row in v:
                    lines.append("    " + "  ".join(f"{re:+.6f}{im:+.6f}i" for re, im in row))
            elif isinstance(v, dict):
                if k == "form" or not v:
                    sub = {kk: vv for kk, vv in v.items() if kk != "J"}
                    lines.append(f"  {k}: " + ", ".join(f"{kk}={_fmt_value(vv)}" for kk, vv in sub.items()))
                else:
                    lines.append(f"  {k}:")
                    for kk, vv in v.items():
                        lines.append(f"    {kk}: {_fmt_value(vv)}")
            elif isinstance(v, list):
                if v:
                    lines.append(f"  {k}: " + "; ".join(_fmt_value(x) for x in v))
            else:
                lines.append(f"  {k}: {_fmt_value(v)}")
    return "\n".join(lines) + "\n"


def render_machine(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags with suppressed defaults so a flag
    # given before the subcommand is not overwritten
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default=d("human"))
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--tolerance-scale", type=float, default=d(1.0),
                        help="multiply closure and reachability tolerances")
    common.add_argument("--out", default=d(None),
                        help="write the report to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="liecontrol", description="Controllability analysis of "
                                "bilinear quantum control systems.", parents=[_global_flags(False)])
    p.add_argument("--version", action="version", version=f"liecontrol {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="dynamical Lie algebra and controllability")
    c.add_argument("file")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("reach", parents=[common], help="decide reachability between named states")
    r.add_argument("file")
    r.add_argument("--from", dest="from_", required=True, metavar="NAME")
    r.add_argument("--to", required=True, metavar="NAME")
    r.add_argument("--restarts", type=int, default=20)
    r.set_defaults(func=cmd_reach)

    o = sub.add_parser("optimize", parents=[common], help="maximize an expectation value over pulses")
    o.add_argument("file")
    o.add_argument("--observable", required=True, metavar="NAME")
    o.add_argument("--from", dest="from_", required=True, metavar="NAME")
    o.add_argument("--duration", "-T", type=float, default=10.0)
    o.add_argument("--steps", "-K", type=int, default=64)
    o.add_argument("--restarts", type=int, default=10)
    o.add_argument("--orbit-restarts", type=int, default=20)
    o.add_argument("--max-iter", type=int, default=2000)
    o.add_argument("--pulse-out", metavar="FILE", help="write the best pulse here")
    o.set_defaults(func=cmd_optimize)

    s = sub.add_parser("simulate", parents=[common], help="propagate a state under a pulse file")
    s.add_argument("file")
    s.add_argument("--pulse", required=True, metavar="FILE")
    s.add_argument("--state", required=True, metavar="NAME")
    s.add_argument("--target", metavar="NAME", help="report the distance to this named state")
    s.add_argument("--show-unitary", action="store_true")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("export", parents=[common], help="write the system as a dense system file")
    e.add_argument("file")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report = args.func(args)
    except (SpecFileError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if "_raw" in report:
        text = report["_raw"]
    elif args.format == "machine":
        text = render_machine(report)
    else:
        text = render_human(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
