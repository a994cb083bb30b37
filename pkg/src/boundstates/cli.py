"""Command-line interface: experiment configs, solver orchestration, reports.

Exit codes: 0 on success, 1 on usage/config errors, 2 on numerical failure
(non-convergence or "no bound state"), so scripts can tell a physically
meaningful negative result from a crash.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from . import lanczos as lz
from . import waxman as wx
from .errors import ConfigError, NoBoundStateError, SolverError
from .grid import Grid, SampledFunction, make_grid
from .potentials import KINDS, PotentialSpec, sample_potential
from .shooting import PARITIES, ShootingConfig, analytic_level, shooting_eigenvalue

_DEFAULTS = {
    "half_width": 12.0,
    "n_points": 2401,
    "sector": "full",
    "tol": 1e-10,
    "max_iter": 500,
    "lam": 1.0,
    "m": 18,
    "parity": "even",
    "method": "shooting",
}

_SOLVERS = ("waxman", "lanczos", "oracle")
_METHODS = ("shooting", "analytic")


@dataclass
class ExperimentConfig:
    """Flat experiment description; unset fields fall back to defaults."""

    potential: str | None = None
    well_half_width: float | None = None
    table_values: tuple[float, ...] | None = None
    half_width: float | None = None
    n_points: int | None = None
    solver: str | None = None
    epsilon: float | None = None
    epsilons: tuple[float, ...] | None = None
    epsilon_tail: tuple[float, ...] | None = None
    sector: str | None = None
    x_ref: float | None = None
    tol: float | None = None
    max_iter: int | None = None
    lam: float | None = None
    m: int | None = None
    parity: str | None = None
    method: str | None = None
    output: str | None = None

    def get(self, name: str):
        value = getattr(self, name)
        return _DEFAULTS.get(name) if value is None else value


_KEY_TO_FIELD = {
    "potential": "potential",
    "well_half_width": "well_half_width",
    "table_values": "table_values",
    "half_width": "half_width",
    "n_points": "n_points",
    "solver": "solver",
    "epsilon": "epsilon",
    "epsilons": "epsilons",
    "epsilon_tail": "epsilon_tail",
    "sector": "sector",
    "x_ref": "x_ref",
    "tol": "tol",
    "max_iter": "max_iter",
    "lambda": "lam",
    "m": "m",
    "parity": "parity",
    "method": "method",
    "output": "output",
}

_FLOAT_KEYS = {"well_half_width", "half_width", "epsilon", "x_ref", "tol", "lambda"}
_INT_KEYS = {"n_points", "max_iter", "m"}
_FLOAT_LIST_KEYS = {"table_values", "epsilons", "epsilon_tail"}
_CHOICE_KEYS = {
    "potential": KINDS,
    "solver": _SOLVERS,
    "sector": wx.SECTORS,
    "parity": PARITIES,
    "method": _METHODS,
}
_REQUIRED_KEYS = ("potential", "solver")


def _parse_value(key: str, raw: str, line_no: int):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_LIST_KEYS:
            parts = [p for p in raw.replace(",", " ").split() if p]
            if not parts:
                raise ValueError("empty list")
            return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"line {line_no}: malformed value for '{key}': {raw!r} ({exc})")
    value = raw.strip()
    choices = _CHOICE_KEYS.get(key)
    if choices is not None and value not in choices:
        raise ConfigError(
            f"line {line_no}: invalid value for '{key}': {value!r} "
            f"(expected one of {', '.join(choices)})"
        )
    return value


def parse_config(text: str) -> ExperimentConfig:
    """Parse flat key=value lines ('#' starts a comment) into a config.

    Unknown keys, malformed values, and missing required keys are rejected
    with the offending line number.
    """
    cfg = ExperimentConfig()
    seen: set[str] = set()
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"line {line_no}: unknown key '{key}'")
        if key in seen:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        seen.add(key)
        setattr(cfg, _KEY_TO_FIELD[key], _parse_value(key, raw.strip(), line_no))
    missing = [k for k in _REQUIRED_KEYS if getattr(cfg, _KEY_TO_FIELD[k]) is None]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    return cfg


def _resolved_items(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    items = []
    for key, field_name in _KEY_TO_FIELD.items():
        value = cfg.get(field_name)
        if value is None:
            continue
        if isinstance(value, tuple):
            rendered = ",".join(f"{v:.17g}" for v in value)
        elif isinstance(value, float):
            rendered = f"{value:.17g}"
        else:
            rendered = str(value)
        items.append((key, rendered))
    return items


def _print_header(cfg: ExperimentConfig, stream: IO[str]) -> None:
    # The resolved configuration (defaults included) prefixes every report,
    # so any output can be reproduced from its own header.
    for key, rendered in _resolved_items(cfg):
        stream.write(f"# {key}={rendered}\n")


def _build_grid(cfg: ExperimentConfig) -> Grid:
    try:
        return make_grid(cfg.get("half_width"), cfg.get("n_points"))
    except ValueError as exc:
        raise ConfigError(str(exc))


def _build_spec(cfg: ExperimentConfig) -> PotentialSpec:
    kind = cfg.get("potential")
    if kind is None:
        raise ConfigError("missing required keys: potential")
    try:
        if kind == "square_well":
            if cfg.well_half_width is None:
                raise ConfigError("square_well requires well_half_width")
            return PotentialSpec.square_well(cfg.well_half_width)
        if kind == "table":
            if cfg.table_values is None:
                raise ConfigError("table potential requires table_values")
            return PotentialSpec.table(cfg.table_values)
        return PotentialSpec(kind)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _build_potential(cfg: ExperimentConfig) -> tuple[Grid, SampledFunction]:
    grid = _build_grid(cfg)
    try:
        return grid, sample_potential(_build_spec(cfg), grid)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _waxman_overrides(cfg: ExperimentConfig) -> dict:
    out = {"tol": cfg.get("tol"), "max_iter": cfg.get("max_iter")}
    if cfg.x_ref is not None:
        out["x_ref"] = cfg.x_ref
    return out


def _require(cfg: ExperimentConfig, field_name: str, key: str):
    value = cfg.get(field_name)
    if value is None:
        raise ConfigError(f"missing required key for this command: {key}")
    return value


# ---------------------------------------------------------------------------
# subcommands


def _cmd_solve_waxman(cfg: ExperimentConfig, stream: IO[str]) -> int:
    _, V = _build_potential(cfg)
    epsilon = _require(cfg, "epsilon", "epsilon")
    solve = wx.WaxmanConfig(
        epsilon=epsilon, sector=cfg.get("sector"), **_waxman_overrides(cfg)
    )
    result = wx.waxman_fixed_point(solve, V)
    _print_header(cfg, stream)
    stream.write(f"epsilon={result.epsilon:.17g}\n")
    stream.write(f"lambda={result.lam:.17g}\n")
    stream.write(f"iterations={result.iterations}\n")
    stream.write(f"residual={result.residual:.17g}\n")
    stream.write(f"converged={'true' if result.converged else 'false'}\n")
    if not result.converged:
        print(
            f"error: fixed point did not converge within {solve.max_iter} iterations",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_sweep(cfg: ExperimentConfig, stream: IO[str]) -> int:
    _, V = _build_potential(cfg)
    epsilons = _require(cfg, "epsilons", "epsilons")
    output = _require(cfg, "output", "output")
    try:
        points = wx.sweep_results(
            epsilons, V, sector=cfg.get("sector"), **_waxman_overrides(cfg)
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    with open(output, "w", newline="") as fh:
        wx.write_sweep_csv(points, fh)
    _print_header(cfg, stream)
    n_ok = sum(1 for p in points if p.result is not None and p.result.converged)
    stream.write(f"wrote {len(points)} sweep points to {output}\n")
    stream.write(f"converged {n_ok} of {len(points)}\n")
    if n_ok == 0:
        print("error: no sweep point converged", file=sys.stderr)
        return 2
    return 0


def _cmd_invert(cfg: ExperimentConfig, stream: IO[str]) -> int:
    _, V = _build_potential(cfg)
    epsilons = _require(cfg, "epsilons", "epsilons")
    lam_target = _require(cfg, "lam", "lambda")
    try:
        curve = wx.sweep_epsilon(
            epsilons, V, sector=cfg.get("sector"), **_waxman_overrides(cfg)
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    epsilon = wx.invert_curve(curve, lam_target)
    _print_header(cfg, stream)
    stream.write(f"lambda={lam_target:.17g}\n")
    stream.write(f"epsilon={epsilon:.17g}\n")
    stream.write(f"energy={-epsilon:.17g}\n")
    return 0


_DEFAULT_TAIL = tuple(0.01 * 0.5**k for k in range(10))


def _cmd_threshold(cfg: ExperimentConfig, stream: IO[str]) -> int:
    _, V = _build_potential(cfg)
    tail = cfg.epsilon_tail if cfg.epsilon_tail is not None else _DEFAULT_TAIL
    sector = cfg.sector if cfg.sector is not None else "odd"
    try:
        lam_star = wx.threshold_lambda(V, sector, tail, **_waxman_overrides(cfg))
    except ValueError as exc:
        raise ConfigError(str(exc))
    _print_header(cfg, stream)
    stream.write(f"threshold_lambda={lam_star:.17g}\n")
    return 0


def _cmd_solve_lanczos(cfg: ExperimentConfig, stream: IO[str]) -> int:
    grid, V = _build_potential(cfg)
    H = lz.Hamiltonian(V, cfg.get("lam"))
    phi1 = lz.start_vector(grid)
    run = lz.lanczos_run(H, phi1, cfg.get("m"))
    history = lz.ritz_history(run, H)
    labelled = lz.classify_pairs(history) if run.m >= 3 else [
        (p, "undecided") for p in history[-1]
    ]
    if cfg.output is not None:
        with open(cfg.output, "w", newline="") as fh:
            lz.write_trace_csv(history, fh)
    _print_header(cfg, stream)
    if cfg.output is not None:
        stream.write(f"wrote iteration trace to {cfg.output}\n")
    stream.write("index value delta label\n")
    for i, (pair, label) in enumerate(labelled):
        stream.write(f"{i} {pair.value:.17g} {pair.delta:.17g} {label}\n")
    return 0


def _cmd_oracle(cfg: ExperimentConfig, stream: IO[str]) -> int:
    spec = _build_spec(cfg)
    lam = cfg.get("lam")
    parity = cfg.get("parity")
    method = cfg.get("method")
    if method == "analytic":
        index = 0 if parity == "even" else 1
        try:
            epsilon = analytic_level(spec, lam, index)
        except ValueError as exc:
            raise NoBoundStateError(str(exc))
    else:
        shoot = ShootingConfig(
            lam=lam, parity=parity, half_width=cfg.get("half_width")
        )
        epsilon = shooting_eigenvalue(shoot, spec)
    _print_header(cfg, stream)
    stream.write(f"epsilon={epsilon:.17g}\n")
    stream.write(f"energy={-epsilon:.17g}\n")
    return 0


# ---------------------------------------------------------------------------
# one-shot reproduction harness

# Published reference values this package sets out to reproduce, with the
# tolerances the acceptance suite runs at.
REFERENCE_GROUND_ENERGY = -0.479203
REFERENCE_LANCZOS_GROUND = -0.475917
REFERENCE_EXCITED_THRESHOLD = 1.35348

TOL_GROUND = 2e-3
TOL_ORACLE_AGREEMENT = 5e-4
TOL_THRESHOLD = 5e-3
TOL_LANCZOS_GROUND = 5e-3
DELTA_RATIO_MIN = 10.0

FULL_SWEEP_EPSILONS = tuple(np.linspace(0.1, 1.0, 37))
ODD_SWEEP_EPSILONS = (1e-4, 1e-3, 1e-2) + tuple(np.linspace(0.05, 1.0, 20))
THRESHOLD_TAIL = _DEFAULT_TAIL
RESIDUAL_SWEEP_EPSILONS = tuple(np.linspace(0.1, 1.0, 20))

# The Krylov comparison runs on a coarser mesh than the quadrature solvers:
# the published run iterated in a small smooth function space, and a grid
# stands in for that regime only while the operator's spectral radius stays
# moderate.  On the fine default mesh, rounding noise amplified by the
# 4/h^2 top of the spectrum captures the recursion within a few steps.
LANCZOS_N_POINTS = 161


@dataclass
class ReportRow:
    name: str
    computed: str
    reference: str
    tolerance: str
    passed: bool


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def run_reproduce_paper(
    output_dir: str | Path = ".", stream: IO[str] = sys.stdout
) -> bool:
    """Full comparison harness; returns True when every row passes.

    Runs the even- and odd-sector coupling sweeps on the Gaussian well,
    curve inversion at unit coupling, the excited-state threshold
    extrapolation, the 18-step Lanczos run with its spuriousness
    classification, and the shooting cross-check, then prints a side-by-side
    table against the published reference numbers.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = make_grid(12.0, 2401)
    V = sample_potential(PotentialSpec.gaussian(), grid)
    rows: list[ReportRow] = []

    stream.write("# potential=gaussian half_width=12 n_points=2401 tol=1e-10\n")
    stream.write("# full sweep: 37 points on [0.1, 1.0]; odd sweep: 23 points\n")
    stream.write(f"# threshold tail: {len(THRESHOLD_TAIL)} points from 0.01 down\n")
    stream.write(
        f"# lanczos: m=18, lambda=1, gaussian start vector, "
        f"n_points={LANCZOS_N_POINTS}\n"
    )

    # Even-parity ground state: sweep, export, invert at unit coupling.
    full_points = wx.sweep_results(FULL_SWEEP_EPSILONS, V, sector="full")
    with open(out / "waxman_sweep_full.csv", "w", newline="") as fh:
        wx.write_sweep_csv(full_points, fh)
    full_curve = wx.curve_from_results(full_points, "full")
    eps_waxman = wx.invert_curve(full_curve, 1.0)
    rows.append(
        ReportRow(
            "waxman_ground_energy",
            _fmt(-eps_waxman),
            _fmt(REFERENCE_GROUND_ENERGY),
            f"{TOL_GROUND:g}",
            abs(-eps_waxman - REFERENCE_GROUND_ENERGY) <= TOL_GROUND,
        )
    )

    # Independent shooting value, compared against the inverted curve.
    shoot = ShootingConfig(lam=1.0, parity="even")
    eps_shoot = shooting_eigenvalue(shoot, PotentialSpec.gaussian())
    rows.append(
        ReportRow(
            "shooting_vs_waxman",
            _fmt(-eps_shoot),
            _fmt(-eps_waxman),
            f"{TOL_ORACLE_AGREEMENT:g}",
            abs(eps_shoot - eps_waxman) <= TOL_ORACLE_AGREEMENT,
        )
    )

    # Odd sector: the curve must stay above unit coupling, so inversion at
    # lambda = 1 reports no solution.
    odd_points = wx.sweep_results(ODD_SWEEP_EPSILONS, V, sector="odd")
    with open(out / "waxman_sweep_odd.csv", "w", newline="") as fh:
        wx.write_sweep_csv(odd_points, fh)
    odd_curve = wx.curve_from_results(odd_points, "odd")
    min_lambda = float(odd_curve.lambdas.min())
    rows.append(
        ReportRow(
            "odd_sector_min_lambda",
            _fmt(min_lambda),
            "> 1",
            "-",
            min_lambda > 1.0,
        )
    )
    try:
        wx.invert_curve(odd_curve, 1.0)
        odd_outcome = "solution found"
    except NoBoundStateError:
        odd_outcome = "no solution"
    rows.append(
        ReportRow(
            "odd_sector_lambda1",
            odd_outcome,
            "no solution",
            "-",
            odd_outcome == "no solution",
        )
    )

    # Excited-state threshold coupling by square-root extrapolation.
    lam_star = wx.threshold_lambda(V, "odd", THRESHOLD_TAIL)
    rows.append(
        ReportRow(
            "excited_threshold",
            _fmt(lam_star),
            _fmt(REFERENCE_EXCITED_THRESHOLD),
            f"{TOL_THRESHOLD:g}",
            abs(lam_star - REFERENCE_EXCITED_THRESHOLD) <= TOL_THRESHOLD,
        )
    )

    # Every converged sweep point must satisfy the grid eigenvalue equation.
    residual_points = wx.sweep_results(RESIDUAL_SWEEP_EPSILONS, V, sector="full")
    residual_bound = 10.0 * grid.spacing**2
    max_residual = max(
        wx.bound_state_residual(p.result.u, V, p.result.lam, p.result.epsilon)
        for p in residual_points
        if p.result is not None and p.result.converged
    )
    rows.append(
        ReportRow(
            "waxman_residual_max",
            f"{max_residual:.2e}",
            f"<= {residual_bound:.2e}",
            "-",
            max_residual <= residual_bound,
        )
    )

    # Lanczos: 18 iterations, Ritz trace, spuriousness classification.
    lz_grid = make_grid(12.0, LANCZOS_N_POINTS)
    H = lz.Hamiltonian(sample_potential(PotentialSpec.gaussian(), lz_grid), 1.0)
    run = lz.lanczos_run(H, lz.start_vector(lz_grid), 18)
    history = lz.ritz_history(run, H)
    with open(out / "lanczos_trace.csv", "w", newline="") as fh:
        lz.write_trace_csv(history, fh)
    labelled = lz.classify_pairs(history)
    lowest_pair, lowest_label = min(labelled, key=lambda pl: pl[0].value)
    rows.append(
        ReportRow(
            "lanczos_ground_energy",
            _fmt(lowest_pair.value),
            _fmt(REFERENCE_LANCZOS_GROUND),
            f"{TOL_LANCZOS_GROUND:g}",
            abs(lowest_pair.value - REFERENCE_LANCZOS_GROUND) <= TOL_LANCZOS_GROUND,
        )
    )
    spurious_pos = [
        p for p, label in labelled if label == "spurious" and p.value > 0
    ]
    ratio = (
        min(p.delta for p in spurious_pos) / lowest_pair.delta
        if spurious_pos and lowest_pair.delta > 0
        else math.inf if spurious_pos else 0.0
    )
    detection_ok = (
        lowest_label == "genuine"
        and bool(spurious_pos)
        and ratio >= DELTA_RATIO_MIN
    )
    rows.append(
        ReportRow(
            "lanczos_spurious_detection",
            f"ground={lowest_label}, positive spurious={len(spurious_pos)}, "
            f"delta ratio={ratio:.3g}",
            f"genuine ground + spurious pair, ratio >= {DELTA_RATIO_MIN:g}",
            "-",
            detection_ok,
        )
    )

    width = max(len(r.name) for r in rows)
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        stream.write(
            f"{r.name:<{width}}  computed={r.computed}  reference={r.reference}  "
            f"tol={r.tolerance}  {status}\n"
        )
    all_passed = all(r.passed for r in rows)
    stream.write(f"{'ALL PASS' if all_passed else 'FAILURES PRESENT'}\n")
    return all_passed


def _cmd_reproduce_paper(output_dir: str, stream: IO[str]) -> int:
    return 0 if run_reproduce_paper(output_dir, stream) else 2


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="path to a key=value config file")
    sub.add_argument("--potential", choices=KINDS)
    sub.add_argument("--well-half-width", type=float, dest="well_half_width")
    sub.add_argument("--half-width", type=float, dest="half_width")
    sub.add_argument("--n-points", type=int, dest="n_points")
    sub.add_argument("--epsilon", type=float)
    sub.add_argument("--epsilons", help="comma-separated epsilon list")
    sub.add_argument("--epsilon-tail", dest="epsilon_tail", help="comma-separated list")
    sub.add_argument("--sector", choices=wx.SECTORS)
    sub.add_argument("--x-ref", type=float, dest="x_ref")
    sub.add_argument("--tol", type=float)
    sub.add_argument("--max-iter", type=int, dest="max_iter")
    sub.add_argument("--lambda", type=float, dest="lam")
    sub.add_argument("-m", type=int, dest="m")
    sub.add_argument("--parity", choices=PARITIES)
    sub.add_argument("--method", choices=_METHODS)
    sub.add_argument("--output")


def _merge_config(args: argparse.Namespace, required_solver: str) -> ExperimentConfig:
    if args.config is not None:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        cfg = parse_config(text)
    else:
        cfg = ExperimentConfig()
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is None:
            continue
        if f.name in ("epsilons", "epsilon_tail", "table_values") and isinstance(
            value, str
        ):
            value = _parse_value(f.name, value, 0)
        setattr(cfg, f.name, value)
    cfg.solver = required_solver
    if cfg.potential is None:
        raise ConfigError("missing required keys: potential")
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = _Parser(prog="boundstates", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)
    for name in (
        "solve-waxman",
        "sweep",
        "invert",
        "threshold",
        "solve-lanczos",
        "oracle",
    ):
        _add_common(subs.add_parser(name))
    repro = subs.add_parser("reproduce-paper")
    repro.add_argument("--output-dir", default=".", dest="output_dir")

    args = parser.parse_args(argv)
    try:
        if args.command == "reproduce-paper":
            return _cmd_reproduce_paper(args.output_dir, sys.stdout)
        solver = {
            "solve-waxman": "waxman",
            "sweep": "waxman",
            "invert": "waxman",
            "threshold": "waxman",
            "solve-lanczos": "lanczos",
            "oracle": "oracle",
        }[args.command]
        cfg = _merge_config(args, solver)
        dispatch = {
            "solve-waxman": _cmd_solve_waxman,
            "sweep": _cmd_sweep,
            "invert": _cmd_invert,
            "threshold": _cmd_threshold,
            "solve-lanczos": _cmd_solve_lanczos,
            "oracle": _cmd_oracle,
        }
        return dispatch[args.command](cfg, sys.stdout)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NoBoundStateError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
