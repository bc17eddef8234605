"""Command line interface.

Subcommands map one-to-one onto the library surface: zeta evaluation,
the two weak-trace routes, the measurability cross-check, the vector-state
structure check, the normality witnesses, the property suites, and the model
registry. Every run writes a JSON report (and CSV curves where a curve
exists) into --output; reports contain a full config echo including the
kernel backend, and identical inputs produce byte-identical outputs.

Exit codes: 0 success, 1 a --strict assertion failed (or a property suite
found a failure), 2 malformed usage or input.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from ._backend import backend_name
from .config import RunConfig
from .errors import (
    DixtraceError,
    DomainError,
    IllPosedError,
    InsufficientDataError,
    RouteUnavailableError,
    UnachievableToleranceError,
)
from .models import MODELS
from .normality import (
    GridProfileWitness,
    approximate_projection,
    dominated_check,
    monotone_convergence_check,
)
from .propsuite import run_suite
from .quantum import NormalizedIntegral, structure_check
from .residue import dixmier_log_average, dixmier_residue, measurability_diagnostic
from .spectral import load_observable, load_operator, zeta

__all__ = ["main"]


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def _read_json(path: str, what: str) -> dict:
    # a literal JSON object is accepted in place of a path to one
    if path.lstrip().startswith("{"):
        try:
            return json.loads(path)
        except json.JSONDecodeError as exc:
            raise DomainError(f"inline {what} is not valid JSON: {exc}") from exc
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {what} file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{what} file {path!r} is not valid JSON: {exc}") from exc


def _write_json(outdir: str, name: str, payload: dict) -> str:
    path = os.path.join(outdir, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_csv(outdir: str, name: str, header: list[str], rows) -> str:
    path = os.path.join(outdir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg = cfg.with_updates(seed=args.seed)
    return cfg


def _operator_from_args(args):
    if args.op is None:
        raise DomainError("--op is required for this command")
    return load_operator(_read_json(args.op, "operator"))


def _observable_from_args(args):
    if getattr(args, "obs", None) is None:
        from .spectral import DiagonalObservable

        return DiagonalObservable.const(1.0, name="one")
    return load_observable(_read_json(args.obs, "observable"))


def _echo(cfg: RunConfig) -> dict:
    return {**cfg.to_dict(), "backend": backend_name()}


def _curve_csv(outdir: str, detail: dict) -> str | None:
    curve = detail.get("curve")
    if not curve:
        return None
    rows = zip(curve["k"], curve["s"], curve["value"], curve["error"])
    return _write_csv(outdir, "residue_curve.csv", ["k", "s", "value", "error"], rows)


def _gamma_csv(outdir: str, detail: dict) -> str | None:
    gam = detail.get("gamma")
    if not gam:
        return None
    rows = zip(gam["N"], gam["gamma"])
    return _write_csv(outdir, "gamma.csv", ["N", "gamma_N"], rows)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_zeta(args) -> int:
    cfg = _config_from_args(args)
    T = _operator_from_args(args)
    A = _observable_from_args(args)
    try:
        ss = [float(tok) for tok in args.s.split(",") if tok.strip()]
    except ValueError as exc:
        raise DomainError(f"--s must be a comma separated list of numbers: {exc}") from exc
    points = []
    met_all = True
    for s in ss:
        if s <= 1.0:
            raise DomainError(f"--s values must exceed 1, got {s}")
        try:
            value, err = zeta(
                A, T, s, tol=args.tol, head=T.preferred_head(cfg.zeta_head), chunk=cfg.chunk
            )
            met = True
        except UnachievableToleranceError as exc:
            if exc.value is None:
                raise
            value, err = exc.value, exc.error
            met = False
            met_all = False
        entry = {"s": s, "error": err, "tolerance_met": met}
        entry["value"] = value.real if abs(value.imag) == 0.0 else [value.real, value.imag]
        points.append(entry)
    payload = {"points": points, "tol": args.tol, "config_echo": _echo(cfg)}
    _write_json(args.output, "zeta.json", payload)
    _write_csv(
        args.output,
        "zeta.csv",
        ["s", "value", "error"],
        [
            (p["s"], p["value"][0] if isinstance(p["value"], list) else p["value"], p["error"])
            for p in points
        ],
    )
    for p in points:
        flag = "" if p["tolerance_met"] else "  (tolerance not met)"
        print(f"s={p['s']:.10g}  value={p['value']}  err={p['error']:.3e}{flag}")
    if not points:
        print("no evaluation points requested")
    if args.strict and not met_all:
        return 1
    return 0


def _cmd_dixmier(args) -> int:
    cfg = _config_from_args(args)
    T = _operator_from_args(args)
    A = _observable_from_args(args)
    payload: dict = {"route": args.route, "config_echo": _echo(cfg)}
    ok = True
    if args.route in ("residue", "both"):
        res = dixmier_residue(A, T, cfg)
        payload["residue"] = res.to_dict()
        _curve_csv(args.output, res.detail)
        ok = ok and res.is_converged
        print(f"residue route: {res.status}  value={res.value:.10g}  err={res.error:.3e}")
    if args.route in ("log", "both"):
        try:
            log_est = dixmier_log_average(A, T, cfg)
            payload["log_average"] = log_est.to_dict()
            _gamma_csv(args.output, log_est.detail)
            ok = ok and log_est.is_converged
            print(
                f"log-average route: {log_est.status}  value={log_est.value:.10g}  "
                f"err={log_est.error:.3e}"
            )
        except RouteUnavailableError as exc:
            payload["log_average_unavailable"] = str(exc)
            print(f"log-average route unavailable: {exc}")
            if args.route == "log":
                ok = False
    _write_json(args.output, "dixmier.json", payload)
    return 1 if args.strict and not ok else 0


def _cmd_measurable(args) -> int:
    cfg = _config_from_args(args)
    T = _operator_from_args(args)
    A = _observable_from_args(args)
    report = measurability_diagnostic(A, T, cfg)
    _write_json(args.output, "measurable.json", report)
    _curve_csv(args.output, report["routes"]["residue"].get("detail", {}))
    log_route = report["routes"].get("log_average")
    if log_route:
        _gamma_csv(args.output, log_route.get("detail", {}))
    line = f"verdict: {report['verdict']}"
    if "value" in report:
        line += f"  value={report['value']}"
    if "band" in report:
        line += f"  band=[{report['band'][0]:.6g}, {report['band'][1]:.6g}]"
    print(line)
    if args.strict and report["verdict"] != "measurable":
        return 1
    return 0


def _cmd_structure(args) -> int:
    cfg = _config_from_args(args)
    T = _operator_from_args(args)
    if args.obs is None:
        raise DomainError("--obs is required for the structure check")
    A = _observable_from_args(args)
    I = NormalizedIntegral.build(T, cfg)
    report = structure_check(A, I, cfg)
    report["config_echo"] = _echo(cfg)
    _write_json(args.output, "structure.json", report)
    head = report.pop("diag_head")
    _write_csv(args.output, "diag.csv", ["m", "value"], zip(head["m"], head["value"]))
    report["diag_head"] = head
    agree = report["agreement"]["agree"]
    print(
        f"phi={report['phi']['value']:.10g} ({report['phi']['status']})  "
        f"diag-limit={report['diagonal_limit']['value']:.10g} "
        f"({report['diagonal_limit']['status']})  agree={agree}"
    )
    if args.strict and not agree:
        return 1
    return 0


def _cmd_normality(args) -> int:
    cfg = _config_from_args(args)
    theta = args.theta
    if not (0.0 <= theta < 1.0):
        raise DomainError("--theta must lie in [0, 1)")

    # grid witness: circle eigenmode densities against the flat profile
    xs = np.linspace(0.0, 2.0 * np.pi, 257)
    flat = np.full(len(xs), 1.0 / (2.0 * np.pi))
    rows = []
    labels = []
    for k in range(1, 9):
        rows.append(np.abs(np.exp(1j * k * xs) / np.sqrt(2.0 * np.pi)) ** 2)
        labels.append(f"k={k}")
    family = GridProfileWitness(grid=xs, rows=np.array(rows), labels=labels)
    dominator = GridProfileWitness(grid=xs, rows=flat[None, :], labels=["flat"])
    grid_report = dominated_check(family, dominator, tol=1e-9)

    # projection witness: the probe clips every basis mode to the same length
    proj = approximate_projection(theta, seed=cfg.seed)
    modes = [(m, n) for m in range(-2, 3) for n in range(-2, 3)]
    proj_report = dominated_check(
        proj.with_modes(modes), proj.with_modes([(0, 0)]), tol=1e-9
    )

    # monotone convergence on the lattice model with a decaying diagonal
    from .models import NctInvLaplacian
    from .spectral import DiagonalObservable, LimitModel

    T = NctInvLaplacian(budget=1 << 20)
    mono_cfg = cfg.with_updates(
        ladder={"n_min": 1 << 10, "n_max": 1 << 20, "ratio": cfg.ladder.ratio}
    )
    A = DiagonalObservable(
        rule=lambda m: 1.0 + 0.5 * m.astype(np.float64) ** (-0.7),
        bound=1.5,
        limit=LimitModel(value=1.0, dev_coef=0.5, dev_power=0.7),
        name="decay-diag",
    )
    I = NormalizedIntegral.build(T, mono_cfg)
    mono_report = monotone_convergence_check(
        A, I, levels=[0.25, 0.5, 0.75, 1.0, 1.6], config=mono_cfg
    )

    passed = bool(
        grid_report["passed"] and proj_report["passed"] and mono_report["passed"]
    )
    payload = {
        "theta": theta,
        "grid_witness": grid_report,
        "projection_witness": proj_report,
        "monotone_convergence": mono_report,
        "passed": passed,
        "config_echo": _echo(cfg),
    }
    _write_json(args.output, "normality.json", payload)
    print(
        f"grid witness: {'pass' if grid_report['passed'] else 'FAIL'}  "
        f"projection witness: {'pass' if proj_report['passed'] else 'FAIL'} "
        f"(defect {proj_report['idempotency_defect']:.2e})  "
        f"monotone convergence: {'pass' if mono_report['passed'] else 'FAIL'}"
    )
    if args.strict and not passed:
        return 1
    return 0


def _cmd_proptest(args) -> int:
    cfg = _config_from_args(args)
    rows = run_suite(args.suite, seed=cfg.seed, config=cfg)
    for row in rows:
        print(row.line())
    failures = [row.check for row in rows if not row.passed]
    payload = {
        "suite": args.suite,
        "seed": cfg.seed,
        "total": len(rows),
        "failures": failures,
        "rows": [
            {"check": r.check, "passed": r.passed, "detail": r.detail} for r in rows
        ],
        "config_echo": _echo(cfg),
    }
    _write_json(args.output, "proptest.json", payload)
    print(f"{len(rows) - len(failures)}/{len(rows)} checks passed")
    return 1 if failures else 0


def _cmd_model(args) -> int:
    if args.action == "list":
        for name in sorted(MODELS):
            print(f"{name}: {MODELS[name]['describe']}")
        return 0
    raise DomainError(f"unknown model action {args.action!r}")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dixtrace",
        description="weak-trace functionals of compact operators from spectral data",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON run configuration")
    common.add_argument("--output", default=".", help="directory for reports and curves")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument(
        "--strict", action="store_true", help="exit 1 when the command's assertion fails"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", parents=[common], help="evaluate the weighted zeta sum")
    p.add_argument("--op", required=True, help="operator JSON file")
    p.add_argument("--obs", help="observable JSON file (default constant one)")
    p.add_argument("--s", required=True, help="comma separated s values, each > 1")
    p.add_argument("--tol", type=float, default=None, help="certified error target")
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("dixmier", parents=[common], help="weak trace by route")
    p.add_argument("--op", required=True)
    p.add_argument("--obs")
    p.add_argument("--route", choices=["residue", "log", "both"], default="both")
    p.set_defaults(func=_cmd_dixmier)

    p = sub.add_parser(
        "measurable", parents=[common], help="cross-route measurability diagnostic"
    )
    p.add_argument("--op", required=True)
    p.add_argument("--obs")
    p.set_defaults(func=_cmd_measurable)

    p = sub.add_parser(
        "structure", parents=[common], help="vector-state structure check"
    )
    p.add_argument("--op", required=True)
    p.add_argument("--obs", required=True)
    p.set_defaults(func=_cmd_structure)

    p = sub.add_parser(
        "normality", parents=[common], help="domination witnesses and monotone limits"
    )
    p.add_argument("--theta", type=float, default=(np.sqrt(5.0) - 1.0) / 2.0)
    p.set_defaults(func=_cmd_normality)

    p = sub.add_parser("proptest", parents=[common], help="run a property suite")
    p.add_argument("--suite", choices=["lemmas", "axioms", "all"], default="all")
    p.set_defaults(func=_cmd_proptest)

    p = sub.add_parser("model", parents=[common], help="bundled model registry")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=_cmd_model)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        os.makedirs(args.output, exist_ok=True)
        return args.func(args)
    except (DomainError, InsufficientDataError, IllPosedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DixtraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
