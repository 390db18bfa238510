"""Batch command-line front end.

Subcommands: eval, reduce, check, bound, moderate, sample.  Reports are
written as JSON (sorted keys, no timestamps) or CSV, so identical
configuration and seed produce byte-identical output.

Exit codes: 0 success / no violations, 1 violations or numerical failure,
2 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormDataError, NhsiegelError
from .formio import load_form_package, save_form_package
from .forms import FormPackage, check_invariance, evaluate, phi
from .growth import (
    SweepConfig,
    adversarial_points,
    estimate_constant,
    group_samples,
    lift,
    sturm_rhs,
    corollary_rhs,
    verify_growth_bound,
    verify_moderate_growth,
)
from .linalg import eigenvalues_sym, in_V_delta
from .reps import basis_vector, inner, vector
from .samples import SAMPLE_BUILDERS, build_sample
from .sampling import random_siegel_point
from .symplectic import SiegelPoint, act, delta_for_degree, reduce_to_fundamental

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    command: str
    form: str | None = None
    samples: int = 1000
    seed: int = 0
    delta: float | None = None
    tmax: float | None = None
    tol: float = 1e-9
    out: str | None = None
    fmt: str = "json"

    def validate(self) -> None:
        if self.samples < 1:
            raise FormDataError("--samples must be >= 1")
        if self.delta is not None and self.delta <= 0:
            raise FormDataError("--delta must be positive")
        if self.tol <= 0:
            raise FormDataError("--tol must be positive")
        if self.fmt not in ("json", "csv"):
            raise FormDataError("--format must be json or csv")


def _triangle_to_sym(values: list[float]) -> np.ndarray:
    r = len(values)
    n = int((math.isqrt(8 * r + 1) - 1) // 2)
    if n * (n + 1) // 2 != r:
        raise FormDataError(
            f"{r} entries do not fill an upper triangle (expected 1, 3, 6, ...)"
        )
    m = np.zeros((n, n))
    idx = 0
    for i in range(n):
        for j in range(i, n):
            m[i, j] = values[idx]
            m[j, i] = values[idx]
            idx += 1
    return m


def parse_point(spec: str) -> SiegelPoint:
    """Parse 'x11,x12,...;y11,y12,...' (upper triangle, row major)."""
    parts = spec.split(";")
    if len(parts) != 2:
        raise FormDataError(f"point {spec!r} must have an X part and a Y part split by ';'")
    try:
        xs = [float(v) for v in parts[0].split(",")]
        ys = [float(v) for v in parts[1].split(",")]
    except ValueError:
        raise FormDataError(f"point {spec!r} has non-numeric entries")
    if len(xs) != len(ys):
        raise FormDataError(f"point {spec!r}: X and Y must have the same entry count")
    try:
        return SiegelPoint(_triangle_to_sym(xs), _triangle_to_sym(ys))
    except (ValueError, NhsiegelError) as exc:
        raise FormDataError(f"point {spec!r}: {exc}")


def _load_points(args) -> list[SiegelPoint]:
    points: list[SiegelPoint] = []
    for spec in args.z or []:
        points.append(parse_point(spec))
    if args.points:
        try:
            data = json.loads(Path(args.points).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormDataError(f"points file {args.points}: {exc}")
        if not isinstance(data, list):
            raise FormDataError("points file must hold a JSON list")
        for idx, rec in enumerate(data):
            if not (isinstance(rec, dict) and "X" in rec and "Y" in rec):
                raise FormDataError(f"points[{idx}]: need objects with X and Y")
            try:
                points.append(
                    SiegelPoint(np.asarray(rec["X"], float), np.asarray(rec["Y"], float))
                )
            except (ValueError, NhsiegelError) as exc:
                raise FormDataError(f"points[{idx}]: {exc}")
    if not points:
        raise FormDataError("no points given; use --z or --points")
    return points


def _emit(payload, config: RunConfig, csv_rows=None, csv_header=None) -> None:
    if config.fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_package(config: RunConfig) -> FormPackage:
    if not config.form:
        raise FormDataError("--form is required for this command")
    package = load_form_package(config.form)
    if config.tmax is not None:
        package = FormPackage(
            package.expansion.with_t_max(config.tmax),
            package.gamma_test_set,
            growth_a=package.growth_a,
            growth_kappa=package.growth_kappa,
            coset_reps=package.coset_reps,
        )
    return package


def cmd_eval(config: RunConfig, args) -> int:
    package = _load_package(config)
    points = _load_points(args)
    records = []
    rows = []
    for z in points:
        val = evaluate(package.expansion, z)
        magnitude = phi(package, z)
        records.append(
            {
                "point": {"X": z.X.tolist(), "Y": z.Y.tolist()},
                "value": [[float(c.real), float(c.imag)] for c in val.coords],
                "phi": magnitude,
            }
        )
        rows.append(
            _flatten_point(z)
            + [f"{float(c.real)!r}" for c in val.coords]
            + [f"{float(c.imag)!r}" for c in val.coords]
            + [repr(magnitude)]
        )
    dim = package.rep.dim
    header = (
        _point_header(points[0].n)
        + [f"re_{i}" for i in range(dim)]
        + [f"im_{i}" for i in range(dim)]
        + ["phi"]
    )
    _emit({"results": records}, config, rows, header)
    return EXIT_OK


def cmd_reduce(config: RunConfig, args) -> int:
    points = _load_points(args)
    records = []
    rows = []
    worst_consistency = 0.0
    for z in points:
        gamma, z_red = reduce_to_fundamental(z)
        dev = float(np.max(np.abs(act(gamma, z).mat - z_red.mat)))
        worst_consistency = max(worst_consistency, dev)
        delta = config.delta if config.delta is not None else delta_for_degree(z.n)
        records.append(
            {
                "gamma": [[int(v) for v in row] for row in gamma.mat],
                "z_red": {"X": z_red.X.tolist(), "Y": z_red.Y.tolist()},
                "min_im_eigenvalue": float(eigenvalues_sym(z_red.Y)[-1]),
                "in_V_delta": bool(in_V_delta(z_red.Y, delta, tol=config.tol)),
                "delta": delta,
                "consistency": dev,
            }
        )
        rows.append(
            _flatten_point(z)
            + _flatten_point(z_red)
            + [repr(float(eigenvalues_sym(z_red.Y)[-1]))]
        )
    if worst_consistency > 1e-9:
        sys.stderr.write(f"reduction consistency {worst_consistency:.3e} above 1e-9\n")
        return EXIT_VIOLATION
    header = _point_header(points[0].n) + [
        h + "_red" for h in _point_header(points[0].n)
    ] + ["min_im_eigenvalue"]
    _emit({"results": records}, config, rows, header)
    return EXIT_OK


def cmd_check(config: RunConfig, args) -> int:
    if config.fmt == "csv":
        raise FormDataError("check reports are JSON only; drop --format csv")
    package = _load_package(config)
    rng = np.random.default_rng(config.seed)
    samples = [
        random_siegel_point(package.n, rng, eig_low=0.75, eig_high=10.0, x_scale=2.0)
        for _ in range(config.samples)
    ]
    report = check_invariance(package, samples)
    payload = {
        "gammas": report.gammas,
        "samples": report.samples,
        "max_deviation": report.max_deviation,
        "threshold": report.threshold,
        "violations": report.violations,
    }
    _emit(payload, config)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _sweep_config(config: RunConfig, seed_offset: int = 0) -> SweepConfig:
    return SweepConfig(
        samples=config.samples,
        seed=config.seed + seed_offset,
        ratio_tol=config.tol,
    )


def cmd_bound(config: RunConfig, args) -> int:
    package = _load_package(config)
    if args.constant is not None:
        if args.constant <= 0:
            raise FormDataError("--constant must be positive")
        constant = args.constant
    else:
        constant = estimate_constant(package, _sweep_config(config))
    report = verify_growth_bound(
        package, constant, kind=args.kind, config=_sweep_config(config, seed_offset=1)
    )
    rows = header = None
    if config.fmt == "csv":
        rows, header = _sweep_csv(package, report, args.kind, constant)
    _emit(report.to_dict(), config, rows, header)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_moderate(config: RunConfig, args) -> int:
    package = _load_package(config)
    rep = package.rep
    if args.w0:
        try:
            coords = [float(v) for v in args.w0.split(",")]
        except ValueError:
            raise FormDataError("--w0 must be comma-separated reals")
        if len(coords) != rep.dim:
            raise FormDataError(f"--w0 needs {rep.dim} coordinates")
        w0 = vector(rep, coords)
    else:
        w0 = basis_vector(rep, 0)
    r = args.r if args.r is not None else package.n * package.lambda1 / 2.0
    if args.constant is not None:
        if args.constant <= 0:
            raise FormDataError("--constant must be positive")
        constant = args.constant
    else:
        constant = estimate_constant(package, _sweep_config(config))
    sweep = _sweep_config(config, seed_offset=1)
    report = verify_moderate_growth(package, w0, r, constant, config=sweep)
    rows = None
    header = None
    if config.fmt == "csv":
        rows = []
        c_mod = report.constant
        for g in group_samples(package.n, sweep):
            val = abs(inner(lift(package, g), w0))
            rhs = c_mod * float(np.sum(g.mat * g.mat)) ** r
            ratio = val / rhs if rhs else math.inf
            rows.append(
                [repr(float(v)) for v in g.mat.ravel()] + [repr(val), repr(rhs), repr(ratio)]
            )
        m = 2 * package.n
        header = [f"g_{i+1}{j+1}" for i in range(m) for j in range(m)] + ["phi", "rhs", "ratio"]
    _emit(report.to_dict(), config, rows, header)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_sample(config: RunConfig, args) -> int:
    package = build_sample(args.name, t_max=config.tmax)
    if not config.out:
        raise FormDataError("--out is required for sample")
    save_form_package(package, config.out)
    return EXIT_OK


def _point_header(n: int) -> list[str]:
    labels = [f"{i+1}{j+1}" for i in range(n) for j in range(i, n)]
    return [f"x{lab}" for lab in labels] + [f"y{lab}" for lab in labels]


def _flatten_point(z: SiegelPoint) -> list[str]:
    n = z.n
    xs = [repr(float(z.X[i, j])) for i in range(n) for j in range(i, n)]
    ys = [repr(float(z.Y[i, j])) for i in range(n) for j in range(i, n)]
    return xs + ys


def _sweep_csv(package: FormPackage, report, kind: str, constant: float):
    # Regenerate the sweep deterministically for per-sample CSV rows.
    cfg = SweepConfig(
        samples=report.samples,
        seed=report.config["seed"],
        ratio_tol=report.config["ratio_tol"],
    )
    rhs_fn = sturm_rhs if kind == "theorem" else corollary_rhs
    rows = []
    for z in adversarial_points(package.n, cfg):
        val = phi(package, z)
        rhs = constant * rhs_fn(z.Y, package.lambda1)
        ratio = val / rhs if rhs else math.inf
        rows.append(_flatten_point(z) + [repr(val), repr(rhs), repr(ratio)])
    header = _point_header(package.n) + ["phi", "rhs", "ratio"]
    return rows, header


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhsiegel",
        description="Evaluate truncated Siegel-type form expansions and certify growth bounds.",
    )
    from . import __version__

    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, form: bool = True):
        if form:
            p.add_argument("--form", help="form package JSON file")
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--tmax", type=float, default=None)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--out", default=None)
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p_eval = sub.add_parser("eval", help="evaluate F(Z) and phi(Z) at points")
    common(p_eval)
    p_eval.add_argument("--z", action="append", help="inline point 'x11,..;y11,..'")
    p_eval.add_argument("--points", help="JSON points file")

    p_red = sub.add_parser("reduce", help="reduce points to the fundamental domain")
    common(p_red, form=False)
    p_red.add_argument("--z", action="append")
    p_red.add_argument("--points")

    p_chk = sub.add_parser("check", help="check the transformation law on samples")
    common(p_chk)

    p_bnd = sub.add_parser("bound", help="sweep the growth bound")
    common(p_bnd)
    p_bnd.add_argument("--kind", choices=("theorem", "corollary"), default="theorem")
    p_bnd.add_argument("--constant", type=float, default=None,
                       help="force the constant instead of estimating it")

    p_mod = sub.add_parser("moderate", help="sweep the moderate-growth inequality")
    common(p_mod)
    p_mod.add_argument("--r", type=float, default=None)
    p_mod.add_argument("--w0", default=None, help="comma-separated real coordinates")
    p_mod.add_argument("--constant", type=float, default=None)

    p_smp = sub.add_parser("sample", help="write a bundled sample form file")
    common(p_smp, form=False)
    p_smp.add_argument("--name", choices=sorted(SAMPLE_BUILDERS), required=True)

    return parser


COMMANDS = {
    "eval": cmd_eval,
    "reduce": cmd_reduce,
    "check": cmd_check,
    "bound": cmd_bound,
    "moderate": cmd_moderate,
    "sample": cmd_sample,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        command=args.command,
        form=getattr(args, "form", None),
        samples=args.samples,
        seed=args.seed,
        delta=args.delta,
        tmax=args.tmax,
        tol=args.tol,
        out=args.out,
        fmt=args.fmt,
    )
    try:
        config.validate()
        return COMMANDS[args.command](config, args)
    except FormDataError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except NhsiegelError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_VIOLATION
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
