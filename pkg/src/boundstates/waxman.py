"""Green's-kernel fixed-point solver for bound states of 1D attractive wells.

For a binding energy epsilon > 0 the decaying kernel of (-d^2/dx^2 + epsilon)
turns the eigenvalue problem into an integral equation.  Normalizing each
iterate at a reference node removes the coupling strength from the map, so
iterating to a fixed point and reading the normalization integral afterwards
yields the coupling lambda(epsilon) that supports a bound state at that
energy.  Sweeping epsilon and inverting the sampled curve gives the energy
at a prescribed coupling; the odd-parity sector (image kernel vanishing at
the origin) does the same for the first excited state of an even well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import NoBoundStateError, SolverError
from .grid import Grid, SampledFunction

SECTORS = ("full", "odd")

# Below this magnitude the normalization integral is treated as zero.
_DENOMINATOR_FLOOR = 1e-14


@dataclass(frozen=True)
class GreensKernel:
    """Decaying kernel of (-d^2/dx^2 + epsilon), optionally parity-restricted.

    In the full sector the kernel is exp(-sqrt(eps)|x-x'|)/(2 sqrt(eps)); the
    odd sector uses the image combination G(x-x') - G(x+x'), which vanishes
    at the origin and acts on the half-axis.
    """

    epsilon: float
    sector: str = "full"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}, got {self.sector!r}")


def kernel_value(kernel: GreensKernel, x, x_prime):
    """Pointwise kernel value; accepts scalars or broadcastable arrays."""
    s = math.sqrt(kernel.epsilon)
    x = np.asarray(x, dtype=float)
    xp = np.asarray(x_prime, dtype=float)

    def g(d):
        return np.exp(-s * np.abs(d)) / (2.0 * s)

    if kernel.sector == "full":
        out = g(x - xp)
    else:
        out = g(x - xp) - g(x + xp)
    return float(out) if out.ndim == 0 else out


def _cumtrapz(y: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * h * (y[1:] + y[:-1]), out=out[1:])
    return out


def _rev_cumtrapz(y: np.ndarray, h: float) -> np.ndarray:
    return _cumtrapz(y[::-1], h)[::-1]


class _KernelScan:
    """O(n) applier of the kernel quadrature on a fixed grid.

    Splitting the convolution at the evaluation node leaves two smooth
    half-integrals, so exponential prefix sums reproduce the trapezoid
    quadrature of the kinked integrand exactly, without the dense matrix.
    """

    def __init__(self, grid: Grid, epsilon: float, sector: str):
        self.grid = grid
        self.sector = sector
        self.s = math.sqrt(epsilon)
        if sector == "full":
            x = grid.points
        else:
            x = grid.points[grid.mid_index :]
        self.grow = np.exp(self.s * x)
        self.decay = np.exp(-self.s * x)

    def apply(self, f: np.ndarray) -> np.ndarray:
        h = self.grid.spacing
        two_s = 2.0 * self.s
        if self.sector == "full":
            left = _cumtrapz(self.grow * f, h)
            right = _rev_cumtrapz(self.decay * f, h)
            return (self.decay * left + self.grow * right) / two_s
        # Odd sector: integrate the image kernel over x' >= 0 (its natural
        # domain) and extend antisymmetrically.  For odd input this equals
        # the whole-line integral of the plain kernel.
        mid = self.grid.mid_index
        fh = f[mid:]
        left = _cumtrapz(self.grow * fh, h)
        right = _rev_cumtrapz(self.decay * fh, h)
        half = (self.decay * (left - right[0]) + self.grow * right) / two_s
        out = np.empty_like(f)
        out[mid:] = half
        out[:mid] = -half[:0:-1]
        return out


def _check_same_grid(V: SampledFunction, u: SampledFunction) -> Grid:
    if not V.grid.compatible(u.grid):
        from .errors import GridMismatchError

        raise GridMismatchError("potential and state must share a grid")
    return u.grid


def apply_kernel(
    kernel: GreensKernel, V: SampledFunction, u: SampledFunction
) -> SampledFunction:
    """Quadrature of the kernel integral of V*u at every grid node."""
    grid = _check_same_grid(V, u)
    scan = _KernelScan(grid, kernel.epsilon, kernel.sector)
    return SampledFunction(grid, scan.apply(V.values * u.values))


def lambda_from(
    kernel: GreensKernel, V: SampledFunction, u: SampledFunction, x_ref: float
) -> float:
    """Coupling strength read off a state normalized to u(x_ref) = 1.

    Returns the reciprocal of the kernel integral evaluated at the reference
    node.  A denominator below 1e-14 in magnitude means no admissible
    coupling exists at this energy (used by the threshold search).
    """
    grid = _check_same_grid(V, u)
    idx = grid.node_index(x_ref)
    denom = apply_kernel(kernel, V, u).values[idx]
    if abs(denom) < _DENOMINATOR_FLOOR:
        raise NoBoundStateError(
            f"no admissible coupling at epsilon={kernel.epsilon:g}: "
            f"kernel integral {denom:.3e} at x_ref={x_ref:g}"
        )
    return 1.0 / denom


def waxman_step(
    kernel: GreensKernel, V: SampledFunction, u_n: SampledFunction, x_ref: float
) -> SampledFunction:
    """One normalized iteration of the integral map; output is 1 at x_ref."""
    grid = _check_same_grid(V, u_n)
    idx = grid.node_index(x_ref)
    w = apply_kernel(kernel, V, u_n).values
    denom = w[idx]
    if abs(denom) < _DENOMINATOR_FLOOR * max(float(np.max(np.abs(w))), 1.0):
        raise SolverError(
            f"iteration map vanishes at x_ref={x_ref:g}: start vector has no "
            "component along the dominant mode in this sector, or epsilon is "
            "outside the admissible range"
        )
    return SampledFunction(grid, w / denom)


@dataclass
class WaxmanConfig:
    """Parameters of one fixed-point solve at fixed binding energy."""

    epsilon: float
    x_ref: float | None = None
    tol: float = 1e-10
    max_iter: int = 500
    sector: str = "full"
    start: SampledFunction | None = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}, got {self.sector!r}")


@dataclass
class WaxmanResult:
    """Converged state candidate with its coupling and iteration diagnostics."""

    u: SampledFunction
    lam: float
    epsilon: float
    iterations: int
    residual: float
    converged: bool


def default_x_ref(grid: Grid, sector: str) -> float:
    """Reference node: the origin, or (odd sector) the node nearest x = 1."""
    if sector == "full":
        return 0.0
    target = min(1.0, 0.5 * grid.half_width)
    idx = grid.mid_index + max(1, int(round(target / grid.spacing)))
    idx = min(idx, grid.n_points - 2)
    return float(grid.points[idx])


def _default_start(grid: Grid, sector: str) -> np.ndarray:
    if sector == "full":
        return np.ones(grid.n_points)
    return grid.points.copy()


def waxman_fixed_point(cfg: WaxmanConfig, V: SampledFunction) -> WaxmanResult:
    """Iterate the normalized map until successive iterates stop moving.

    Non-convergence within ``max_iter`` is reported through the ``converged``
    flag, not raised; the final iterate and coupling are still returned.
    """
    grid = V.grid
    x_ref = cfg.x_ref if cfg.x_ref is not None else default_x_ref(grid, cfg.sector)
    idx = grid.node_index(x_ref)
    if cfg.sector == "odd" and idx == grid.mid_index:
        raise ValueError("odd sector requires x_ref != 0 (the state vanishes there)")

    if cfg.start is not None:
        _check_same_grid(V, cfg.start)
        u = cfg.start.values.copy()
    else:
        u = _default_start(grid, cfg.sector)
    ref = u[idx]
    if abs(ref) < _DENOMINATOR_FLOOR * max(float(np.max(np.abs(u))), 1.0):
        raise SolverError(f"start vector vanishes at x_ref={x_ref:g}")
    u = u / ref

    scan = _KernelScan(grid, cfg.epsilon, cfg.sector)
    Vv = V.values
    residual = math.inf
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        w = scan.apply(Vv * u)
        denom = w[idx]
        if abs(denom) < _DENOMINATOR_FLOOR * max(float(np.max(np.abs(w))), 1.0):
            raise SolverError(
                f"iteration map vanished at x_ref={x_ref:g} "
                f"(epsilon={cfg.epsilon:g}, sector={cfg.sector})"
            )
        u_next = w / denom
        residual = float(np.max(np.abs(u_next - u)))
        u = u_next
        if residual <= cfg.tol:
            converged = True
            break

    result_u = SampledFunction(grid, u)
    kernel = GreensKernel(cfg.epsilon, cfg.sector)
    lam = lambda_from(kernel, V, result_u, x_ref)
    return WaxmanResult(
        u=result_u,
        lam=lam,
        epsilon=cfg.epsilon,
        iterations=iterations,
        residual=residual,
        converged=converged,
    )


@dataclass
class LambdaEpsilonCurve:
    """Sampled coupling-versus-energy relation, strictly increasing in epsilon."""

    epsilons: np.ndarray
    lambdas: np.ndarray
    sector: str = "full"

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=float)
        lam = np.asarray(self.lambdas, dtype=float)
        if eps.ndim != 1 or eps.shape != lam.shape or eps.size == 0:
            raise ValueError("curve needs matching, nonempty epsilon/lambda arrays")
        if not np.all(np.isfinite(eps)) or not np.all(np.isfinite(lam)):
            raise ValueError("curve samples must be finite")
        if np.any(eps <= 0) or np.any(np.diff(eps) <= 0):
            raise ValueError("epsilons must be positive and strictly increasing")
        if np.any(lam <= 0):
            raise ValueError("lambdas must be positive")
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}")
        self.epsilons = eps
        self.lambdas = lam


@dataclass
class SweepPoint:
    """One sweep entry; ``result`` is None when the solve raised."""

    epsilon: float
    result: WaxmanResult | None
    error: str | None = None


def _validate_epsilons(epsilons: Sequence[float]) -> np.ndarray:
    eps = np.asarray(list(epsilons), dtype=float)
    if eps.size == 0:
        raise ValueError("epsilon list must not be empty")
    if np.any(eps <= 0) or np.any(np.diff(eps) <= 0):
        raise ValueError("epsilons must be positive and strictly increasing")
    return eps


def sweep_results(
    epsilons: Sequence[float],
    V: SampledFunction,
    sector: str = "full",
    **config,
) -> list[SweepPoint]:
    """Run one fixed-point solve per epsilon, keeping failures as records."""
    eps = _validate_epsilons(epsilons)
    points: list[SweepPoint] = []
    for e in eps:
        cfg = WaxmanConfig(epsilon=float(e), sector=sector, **config)
        try:
            points.append(SweepPoint(float(e), waxman_fixed_point(cfg, V)))
        except SolverError as exc:
            points.append(SweepPoint(float(e), None, str(exc)))
    return points


def curve_from_results(
    points: Iterable[SweepPoint], sector: str = "full"
) -> LambdaEpsilonCurve:
    """Assemble the curve from converged sweep points; failures become gaps."""
    kept = [
        (p.epsilon, p.result.lam)
        for p in points
        if p.result is not None
        and p.result.converged
        and math.isfinite(p.result.lam)
        and p.result.lam > 0
    ]
    if not kept:
        raise SolverError("no epsilon in the sweep produced a converged bound state")
    eps, lams = zip(*kept)
    return LambdaEpsilonCurve(np.array(eps), np.array(lams), sector)


def sweep_epsilon(
    epsilons: Sequence[float],
    V: SampledFunction,
    sector: str = "full",
    **config,
) -> LambdaEpsilonCurve:
    """Sweep the binding energy and collect the coupling curve."""
    return curve_from_results(sweep_results(epsilons, V, sector, **config), sector)


def invert_curve(curve: LambdaEpsilonCurve, lambda_target: float) -> float:
    """Binding energy at which the interpolated curve reaches ``lambda_target``.

    Uses a monotone piecewise-cubic interpolant (no overshoot between
    samples) and root-finds on it inside the bracketing interval.
    """
    if not lambda_target > 0:
        raise ValueError(f"lambda_target must be positive, got {lambda_target!r}")
    eps = curve.epsilons
    lam = curve.lambdas
    exact = np.nonzero(lam == lambda_target)[0]
    if exact.size:
        return float(eps[exact[0]])
    if lambda_target < lam.min() or lambda_target > lam.max():
        raise NoBoundStateError(
            f"no bound state at lambda={lambda_target:g} in the {curve.sector} "
            f"sector (curve spans lambda in [{lam.min():g}, {lam.max():g}])"
        )
    interp = PchipInterpolator(eps, lam)
    resid = lam - lambda_target
    for j in range(len(eps) - 1):
        if resid[j] * resid[j + 1] < 0:
            root = brentq(
                lambda e: float(interp(e)) - lambda_target,
                eps[j],
                eps[j + 1],
                xtol=1e-13,
                rtol=8.9e-16,
            )
            return float(root)
    raise NoBoundStateError(
        f"no bracketing interval for lambda={lambda_target:g} "
        f"in the {curve.sector} sector"
    )


def threshold_lambda(
    V: SampledFunction,
    sector: str,
    epsilon_tail: Sequence[float],
    fit_points: int = 4,
    **config,
) -> float:
    """Smallest coupling at which the sector first binds.

    Evaluates lambda(epsilon) along a tail of energies decreasing toward
    zero and extrapolates with the square-root law lambda = lambda* +
    c*sqrt(epsilon) that governs the odd-sector approach to threshold.
    """
    if sector != "odd":
        raise ValueError(
            "threshold extrapolation applies to the odd sector; a 1D attractive "
            "well binds an even state at any positive coupling"
        )
    tail = np.asarray(list(epsilon_tail), dtype=float)
    if tail.size < 3:
        raise ValueError("epsilon_tail needs at least 3 points for the fit")
    if np.any(tail <= 0) or np.any(np.diff(tail) >= 0):
        raise ValueError("epsilon_tail must be positive and strictly decreasing")

    lams = []
    for e in tail:
        cfg = WaxmanConfig(epsilon=float(e), sector=sector, **config)
        res = waxman_fixed_point(cfg, V)
        if not res.converged:
            raise SolverError(f"threshold tail point epsilon={e:g} did not converge")
        lams.append(res.lam)
    lams = np.array(lams)
    if np.any(np.diff(lams) >= 0):
        raise SolverError(
            "threshold tail not settling: lambda values are not strictly "
            "decreasing toward the limit"
        )
    k = min(int(fit_points), tail.size)
    slope, intercept = np.polyfit(np.sqrt(tail[-k:]), lams[-k:], 1)
    return float(intercept)


def bound_state_residual(
    u: SampledFunction, V: SampledFunction, lam: float, epsilon: float
) -> float:
    """Sup-norm of the second-difference eigenvalue residual on interior nodes.

    Interior nodes only: the three-point stencil needs both neighbours, and
    the iterate carries genuine (small but nonzero) values at the domain
    edge that a zero-extension closure would misread as error.
    """
    grid = _check_same_grid(V, u)
    h = grid.spacing
    v = u.values
    lap = (2.0 * v[1:-1] - v[:-2] - v[2:]) / (h * h)
    r = lap - lam * V.values[1:-1] * v[1:-1] + epsilon * v[1:-1]
    return float(np.max(np.abs(r)))


SWEEP_CSV_HEADER = "epsilon,lambda,iterations,residual,converged"


def write_sweep_csv(points: Iterable[SweepPoint], stream: IO[str]) -> None:
    """Write one CSV row per sweep point, 17 significant digits per float."""
    stream.write(SWEEP_CSV_HEADER + "\n")
    for p in points:
        if p.result is None:
            stream.write(f"{p.epsilon:.17g},nan,0,nan,false\n")
            continue
        r = p.result
        stream.write(
            f"{r.epsilon:.17g},{r.lam:.17g},{r.iterations},"
            f"{r.residual:.17g},{'true' if r.converged else 'false'}\n"
        )
