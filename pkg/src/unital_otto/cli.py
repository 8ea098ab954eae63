"""Command-line front end: evaluations, sweeps, regime maps, bound campaigns.

Every subcommand writes CSV (to --out or stdout) whose first line is a
``#``-comment recording the fully resolved configuration, so a rerun
with the same inputs byte-reproduces the file.  Numbers are printed
with 17 significant digits.

Exit codes: 0 success (bound violations are data, not failures),
2 configuration error, 3 physics-domain error.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys

import numpy as np

from . import analysis, cumulants, landauzener, trajectory
from .qstate import ControlSpec, PhysicsError

SWEEPABLE = ("beta", "nu1", "nu2", "delta", "zeta", "theta", "cs-alpha", "alpha-m")

CONFIG_KEYS = [
    "beta",
    "nu1",
    "nu2",
    "delta",
    "zeta",
    "theta",
    "p0",
    "p1",
    "p2",
    "p3",
    "alpha-m",
    "chi",
    "phi",
    "cs-alpha",
    "branch",
    "axis",
    "start",
    "stop",
    "steps",
    "axis2",
    "start2",
    "stop2",
    "steps2",
    "samples",
    "seed",
    "out",
    "tol",
]


class ConfigError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _read_config_file(path: str) -> dict[str, str]:
    """Flat INI-like key = value lines; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, _, val = line.partition("=")
                key = key.strip().replace("_", "-")
                if key not in CONFIG_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _add_common(parser: argparse.ArgumentParser, channel: bool = True) -> None:
    parser.add_argument("--config", help="flat key=value config file; flags override")
    parser.add_argument("--beta", type=float)
    parser.add_argument("--nu1", type=float)
    parser.add_argument("--nu2", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--zeta", type=float)
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    if channel:
        parser.add_argument("--theta", type=float)
        parser.add_argument("--p0", type=float)
        parser.add_argument("--p1", type=float)
        parser.add_argument("--p2", type=float)
        parser.add_argument("--p3", type=float)
        parser.add_argument("--alpha-m", type=float, dest="alpha_m")
        parser.add_argument("--chi", type=float)
        parser.add_argument("--cs-alpha", type=float, dest="cs_alpha")
        parser.add_argument("--branch", choices=("plus", "minus"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unital-otto",
        description="Exact statistics of monitored unital quantum Otto cycles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cumulants", help="one parameter point, all three routes")
    _add_common(p)
    p.add_argument("--dist-out", help="also dump the joint distribution CSV here")
    p.add_argument("--bounds-out", help="also write the bound reports CSV here")

    p = sub.add_parser("sweep", help="cumulants/efficiency/regime along one axis")
    _add_common(p)
    p.add_argument("--axis", choices=SWEEPABLE)
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("classify", help="regime map over a 2-D grid")
    _add_common(p)
    for suffix in ("", "2"):
        p.add_argument(f"--axis{suffix}", choices=SWEEPABLE)
        p.add_argument(f"--start{suffix}", type=float)
        p.add_argument(f"--stop{suffix}", type=float)
        p.add_argument(f"--steps{suffix}", type=int)

    p = sub.add_parser("verify-bounds", help="randomized bound-verification campaign")
    _add_common(p, channel=False)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("sample", help="Monte Carlo draws against the enumeration")
    _add_common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("lz-compare", help="monitored vs unmonitored Landau-Zener table")
    _add_common(p, channel=False)
    p.add_argument("--alpha-m", type=float, dest="alpha_m")
    p.add_argument("--chi", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--axis", choices=("delta",))
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int)

    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    """File values first, command-line flags on top."""
    merged: dict = {}
    if getattr(args, "config", None):
        raw = _read_config_file(args.config)
        for key, text in raw.items():
            attr = key.replace("-", "_")
            if key in ("branch", "axis", "axis2", "out"):
                merged[attr] = text
            elif key in ("steps", "steps2", "samples", "seed"):
                merged[attr] = int(text)
            else:
                merged[attr] = float(text)
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is not None:
            merged[key] = val
    return merged


def _require(cfg: dict, *names):
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join(
            "--" + n.replace("_", "-") for n in missing))
    return [cfg[n] for n in names]


def _resolve_theta(cfg: dict) -> float:
    """Channel spec: --theta wins, then Pauli weights, then measurement angles."""
    if cfg.get("theta") is not None:
        return float(cfg["theta"])
    pauli = [cfg.get(k) for k in ("p0", "p1", "p2", "p3")]
    if any(p is not None for p in pauli):
        if any(p is None for p in pauli):
            raise ConfigError("give all four of --p0 --p1 --p2 --p3")
        if abs(sum(pauli) - 1.0) > 1e-12 or min(pauli) < 0.0:
            raise ConfigError("Pauli weights must be nonnegative and sum to 1")
        return float(pauli[1] + pauli[2])
    if cfg.get("alpha_m") is not None:
        return math.sin(cfg["alpha_m"]) ** 2 / 2.0
    raise ConfigError("specify a channel: --theta, --p0..--p3, or --alpha-m [--chi]")


def _cycle_params(cfg: dict) -> trajectory.CycleParams:
    beta, nu1, nu2, delta, zeta = _require(cfg, "beta", "nu1", "nu2", "delta", "zeta")
    return trajectory.CycleParams(beta, nu1, nu2, delta, zeta)


def _control(cfg: dict) -> ControlSpec | None:
    if cfg.get("cs_alpha") is None:
        return None
    return ControlSpec(cfg["cs_alpha"], cfg.get("branch") or "minus")


def _tolerance(cfg: dict) -> float:
    """Comparison tolerance for regimes/bounds; OTTO_TOL overrides default."""
    if cfg.get("tol") is not None:
        return float(cfg["tol"])
    env = os.environ.get("OTTO_TOL")
    return float(env) if env else 1e-12


def _config_comment(command: str, cfg: dict) -> str:
    parts = [f"command={command}"]
    for key in sorted(cfg):
        if cfg[key] is not None:
            parts.append(f"{key.replace('_', '-')}={_fmt(cfg[key])}")
    return "# " + " ".join(parts) + "\n"


def _axis_values(cfg: dict, suffix: str = "") -> tuple[str, np.ndarray]:
    axis, start, stop, steps = _require(
        cfg, f"axis{suffix}", f"start{suffix}", f"stop{suffix}", f"steps{suffix}"
    )
    if steps < 2:
        raise ConfigError("steps must be >= 2")
    return axis, np.linspace(start, stop, steps)


def _point_config(cfg: dict, axis: str, value: float) -> dict:
    """One sweep point.  Sweeping delta (or zeta) on a symmetric base
    cycle moves both transition probabilities together, which is the
    delta = zeta sweep of the symmetric engine."""
    out = dict(cfg)
    symmetric_base = cfg.get("delta") == cfg.get("zeta")
    out[axis.replace("-", "_")] = float(value)
    if axis in ("delta", "zeta") and symmetric_base:
        out["delta"] = out["zeta"] = float(value)
    if axis == "alpha-m":
        out["theta"] = None  # recompute from the swept angle
    return out


def _run_mode(cfg: dict) -> str:
    if cfg.get("cs_alpha") is not None:
        return "cs"
    return "symmetric" if cfg.get("delta") == cfg.get("zeta") else "asymmetric"


def _evaluate_point(cfg: dict, mode: str):
    """(cumulant set, efficiency, regime, bounds) at one parameter point."""
    params = _cycle_params(cfg)
    theta = _resolve_theta(cfg)
    ctrl = _control(cfg)
    tol = _tolerance(cfg)
    if ctrl is None:
        dist = trajectory.enumerate_paths(params, theta)
    else:
        dist = trajectory.cs_distribution(params, theta, ctrl)
    cums = cumulants.cumulants_from_distribution(dist)
    try:
        eta = analysis.efficiency(params, theta, mode, ctrl)
    except PhysicsError:
        eta = math.nan
    regime = analysis.classify_regime(cums, params.beta, tol)
    bounds = analysis.verify_bounds(params, theta, mode, ctrl)
    return cums, eta, regime, bounds


def _open_out(cfg: dict):
    path = cfg.get("out")
    if path:
        return open(path, "w", encoding="utf-8", newline="")
    return None


def _emit(cfg: dict, text: str) -> None:
    fh = _open_out(cfg)
    if fh is None:
        sys.stdout.write(text)
    else:
        with fh:
            fh.write(text)


def _cmd_cumulants(cfg: dict) -> None:
    params = _cycle_params(cfg)
    theta = _resolve_theta(cfg)
    ctrl = _control(cfg)
    if ctrl is None:
        dist = trajectory.enumerate_paths(params, theta)
    else:
        dist = trajectory.cs_distribution(params, theta, ctrl)
    exact = cumulants.cumulants_from_distribution(dist)
    fd = cumulants.cf_derivative_check(params, theta, ctrl)

    buf = io.StringIO()
    buf.write(_config_comment("cumulants", cfg))
    buf.write(
        "route,w_k1,w_k2,w_k3,w_k4,qm_k1,qm_k2,qm_k3,qm_k4,qt_mean\n"
    )

    def row(route, w, q, qt):
        cells = [route] + [_fmt(v) for v in (*w, *q, qt)]
        buf.write(",".join(cells) + "\n")

    row("enumeration", exact.w, exact.q_m, exact.qt_mean)
    if ctrl is None:
        closed = cumulants.closed_form_first_second(params, theta)
        row(
            "closed_form",
            (closed.w_mean, closed.w_var, math.nan, math.nan),
            (closed.qm_mean, closed.qm_var, math.nan, math.nan),
            closed.qt_mean,
        )
        closed_delta = (
            abs(closed.w_mean - exact.w[0]),
            abs(closed.w_var - exact.w[1]),
            abs(closed.qm_mean - exact.q_m[0]),
            abs(closed.qm_var - exact.q_m[1]),
        )
        row(
            "closed_form_delta",
            (closed_delta[0], closed_delta[1], math.nan, math.nan),
            (closed_delta[2], closed_delta[3], math.nan, math.nan),
            abs(closed.qt_mean - exact.qt_mean),
        )
    else:
        closed = cumulants.cs_first_cumulants(params, theta, ctrl)
        row(
            "closed_form",
            (closed.w_mean, math.nan, math.nan, math.nan),
            (closed.qm_mean, math.nan, math.nan, math.nan),
            closed.qt_mean,
        )
        row(
            "closed_form_delta",
            (abs(closed.w_mean - exact.w[0]), math.nan, math.nan, math.nan),
            (abs(closed.qm_mean - exact.q_m[0]), math.nan, math.nan, math.nan),
            abs(closed.qt_mean - exact.qt_mean),
        )
    row("cf_derivative", fd.w, fd.q_m, fd.qt_mean)
    row(
        "cf_derivative_delta",
        tuple(abs(a - b) for a, b in zip(fd.w, exact.w)),
        tuple(abs(a - b) for a, b in zip(fd.q_m, exact.q_m)),
        abs(fd.qt_mean - exact.qt_mean),
    )
    _emit(cfg, buf.getvalue())

    if cfg.get("dist_out"):
        with open(cfg["dist_out"], "w", encoding="utf-8", newline="") as fh:
            fh.write(_config_comment("cumulants", cfg))
            trajectory.distribution_to_csv(dist, fh)

    if cfg.get("bounds_out"):
        reports = analysis.verify_bounds(params, theta, _run_mode(cfg), ctrl)
        with open(cfg["bounds_out"], "w", encoding="utf-8", newline="") as fh:
            fh.write(_config_comment("cumulants", cfg))
            analysis.bound_reports_to_csv(reports, fh)


def _cmd_sweep(cfg: dict) -> None:
    axis, values = _axis_values(cfg)
    mode = _run_mode(cfg)
    bound_names: list[str] | None = None
    rows = []
    for value in values:
        point = _point_config(cfg, axis, value)
        cums, eta, regime, bounds = _evaluate_point(point, mode)
        if bound_names is None:
            bound_names = [b.name for b in bounds]
        cells = [_fmt(float(value))]
        cells += [_fmt(v) for v in (*cums.w, *cums.q_m, cums.qt_mean)]
        rf = cums.w[1] / cums.w[0] ** 2 if cums.w[0] != 0.0 else math.inf
        cells.append(_fmt(rf))
        cells.append(_fmt(eta))
        cells.append(str(regime))
        for rep in bounds:
            cells.append("ok" if rep.satisfied else "violated" if rep.applicable else "n/a")
        rows.append(",".join(cells))
    header = (
        [axis, "w_k1", "w_k2", "w_k3", "w_k4", "qm_k1", "qm_k2", "qm_k3", "qm_k4",
         "qt_mean", "w_rf", "efficiency", "regime"]
        + (bound_names or [])
    )
    text = _config_comment("sweep", cfg) + ",".join(header) + "\n" + "\n".join(rows) + "\n"
    _emit(cfg, text)


def _cmd_classify(cfg: dict) -> None:
    axis1, values1 = _axis_values(cfg)
    axis2, values2 = _axis_values(cfg, "2")
    if axis1 == axis2:
        raise ConfigError("the two grid axes must differ")
    mode = _run_mode(cfg)
    lines = [f"{axis1},{axis2},w_mean,qm_mean,qt_mean,regime"]
    for v1 in values1:
        for v2 in values2:
            point = _point_config(_point_config(cfg, axis1, v1), axis2, v2)
            cums, _, regime, _ = _evaluate_point(point, mode)
            lines.append(
                ",".join(
                    [
                        _fmt(float(v1)),
                        _fmt(float(v2)),
                        _fmt(cums.w[0]),
                        _fmt(cums.q_m[0]),
                        _fmt(cums.qt_mean),
                        str(regime),
                    ]
                )
            )
    _emit(cfg, _config_comment("classify", cfg) + "\n".join(lines) + "\n")


def _cmd_verify_bounds(cfg: dict) -> None:
    samples = cfg.get("samples") or 10000
    seed = cfg.get("seed") or 0
    rng = np.random.default_rng(seed)
    counts: dict[str, list[int]] = {}
    for _ in range(samples):
        beta = rng.uniform(-2.0, 2.0)
        if abs(beta) < 1e-9:
            continue
        params = trajectory.CycleParams(
            beta,
            rng.uniform(1e-3, 3.0),
            rng.uniform(1e-3, 3.0),
            rng.random(),
            rng.random(),
        )
        theta = rng.random()
        mode = rng.choice(("symmetric", "asymmetric", "cs"))
        ctrl = None
        if mode == "symmetric":
            params = trajectory.CycleParams(
                beta, params.nu1, params.nu2, params.delta, params.delta
            )
        elif mode == "cs":
            theta *= 0.5
            ctrl = ControlSpec(rng.random(), rng.choice(("plus", "minus")))
        for rep in analysis.verify_bounds(params, theta, mode, ctrl):
            slot = counts.setdefault(rep.name, [0, 0, 0])
            if not rep.applicable:
                slot[2] += 1
            elif rep.satisfied:
                slot[0] += 1
            else:
                slot[1] += 1
    lines = ["bound_name,satisfied,violated,inapplicable"]
    for name in sorted(counts):
        sat, vio, inap = counts[name]
        lines.append(f"{name},{sat},{vio},{inap}")
    _emit(cfg, _config_comment("verify-bounds", cfg) + "\n".join(lines) + "\n")


def _cmd_sample(cfg: dict) -> None:
    params = _cycle_params(cfg)
    theta = _resolve_theta(cfg)
    ctrl = _control(cfg)
    n = cfg.get("samples") or 10**6
    seed = cfg.get("seed") or 0
    if ctrl is None:
        dist = trajectory.enumerate_paths(params, theta)
    else:
        dist = trajectory.cs_distribution(params, theta, ctrl)
    stats = trajectory.sample(dist, n, seed)
    exact = cumulants.cumulants_from_distribution(dist)
    lines = ["variable,exact_mean,empirical_mean,mean_stderr,z_mean,"
             "exact_var,empirical_var,var_stderr,z_var"]

    def zscore(diff: float, stderr: float) -> float:
        if stderr > 0.0:
            return diff / stderr
        return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)

    for label, summary, kappa in (("w", stats.w, exact.w), ("q_m", stats.q_m, exact.q_m)):
        zm = zscore(summary.mean - kappa[0], summary.mean_stderr)
        zv = zscore(summary.variance - kappa[1], summary.variance_stderr)
        values = (
            kappa[0], summary.mean, summary.mean_stderr, zm,
            kappa[1], summary.variance, summary.variance_stderr, zv,
        )
        lines.append(label + "," + ",".join(_fmt(v) for v in values))
    _emit(cfg, _config_comment("sample", cfg) + "\n".join(lines) + "\n")


def _cmd_lz_compare(cfg: dict) -> None:
    beta, nu1, nu2, alpha_m = _require(cfg, "beta", "nu1", "nu2", "alpha_m")
    axis, values = _axis_values(cfg)
    base = landauzener.LZParams.build(
        beta, nu1, nu2, float(values[0]),
        cfg.get("phi") or 0.0, alpha_m, cfg.get("chi") or 0.0,
    )
    rows = landauzener.monitored_vs_unmonitored(base, values)
    buf = io.StringIO()
    buf.write(_config_comment("lz-compare", cfg))
    landauzener.comparison_to_csv(rows, buf)
    _emit(cfg, buf.getvalue())


_COMMANDS = {
    "cumulants": _cmd_cumulants,
    "sweep": _cmd_sweep,
    "classify": _cmd_classify,
    "verify-bounds": _cmd_verify_bounds,
    "sample": _cmd_sample,
    "lz-compare": _cmd_lz_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        _COMMANDS[args.command](cfg)
    except PhysicsError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
