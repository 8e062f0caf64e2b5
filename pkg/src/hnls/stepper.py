"""Implicit midpoint time step with Picard resolution of the cubic term.

One step solves  A u^{n+1} = b  with

    A = Id + (chi*dt/2) B(t) D3 - i (gamma*dt/2) C(t) D2
    b = [Id - (chi*dt/2) B(t) D3 + i (gamma*dt/2) C(t) D2] u^n
        - dt * L .* (D u^n)  -  i dt nu |w|^2 w  +  dt * J

where w = (u^p + u^n)/2 is frozen at the previous Picard iterate and the
advection term is explicit at u^n.  The three constrained grid entries
are enforced inside the solve by replacing their matrix rows with
identity rows and zeroing the corresponding right-hand side entries;
on the remaining interior unknowns the operators keep their banded
Toeplitz symmetry/antisymmetry, which is what makes the discrete L2
balance exact for converged steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .boundary import MovingDomain
from .coefficients import CoefficientSlice, evaluate_coefficients
from .errors import ContractionFailure, MaxPicardExceeded, SolverError
from .grid import BandedMatrix, GridSpec, StateVector, constrained_indices

COEFF_TIME_CHOICES = ("tn", "midpoint")


@dataclass(frozen=True)
class SchemeConfig:
    """Scheme constants and fixed-point controls.

    gamma and chi are signed: the shipped scenarios encode each equation
    exactly as written, and flipping the sign of either dispersion term
    only conjugates the linear propagator.  cubic_sign is the sign nu in
    front of the |u|^2 u term (+1 for the reference form, 0 turns the
    nonlinearity off).
    """

    gamma: float
    chi: float
    dt: float
    delta_hat: float = 1e-14
    max_picard: int = 100
    coeff_time: str = "tn"
    cubic_sign: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.dt < 1.0:
            raise ValueError(f"dt must lie in (0, 1), got {self.dt}")
        if not self.delta_hat > 0.0:
            raise ValueError("delta_hat must be positive")
        if self.max_picard < 2:
            raise ValueError("max_picard must be at least 2")
        canon = {"tn": "tn", "at_tn": "tn", "midpoint": "midpoint", "at_midpoint": "midpoint"}
        if self.coeff_time not in canon:
            raise ValueError(f"coeff_time must be one of {sorted(set(canon))}")
        object.__setattr__(self, "coeff_time", canon[self.coeff_time])


@dataclass(frozen=True)
class StepReport:
    """Fixed-point bookkeeping for one accepted step.

    residual is the last increment norm ||u^p - u^{p-1}||_2 (the quantity
    the stopping test looks at); ratios collects every contraction ratio
    observed from p >= 3 on.
    """

    iterations: int
    final_contraction_ratio: float
    residual: float
    ratios: tuple[float, ...] = ()


def assemble_left_matrix(cfg: SchemeConfig, coeffs: CoefficientSlice, grid: GridSpec) -> BandedMatrix:
    """Implicit-side operator A, complex pentadiagonal of order M+1."""
    n = grid.M + 1
    dx = grid.dx
    cB = 0.5 * cfg.chi * cfg.dt * coeffs.B / dx**3
    cC = 0.5 * cfg.gamma * cfg.dt * coeffs.C / dx**2
    bands = np.zeros((5, n), dtype=np.complex128)
    weights = {
        -2: -0.5 * cB,
        -1: cB - 1j * cC,
        0: 1.0 + 2j * cC,
        1: -cB - 1j * cC,
        2: 0.5 * cB,
    }
    for off, w in weights.items():
        row = 2 - off
        if off >= 0:
            bands[row, off:] = w
        else:
            bands[row, : n + off] = w
    return BandedMatrix(order=n, lower=2, upper=2, bands=bands)


def assemble_right_side(
    cfg: SchemeConfig,
    coeffs: CoefficientSlice,
    u_n,
    w,
    forcing: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Explicit side b for the current Picard iterate's midpoint w."""
    u = u_n.values if isinstance(u_n, StateVector) else np.asarray(u_n, dtype=np.complex128)
    wv = w.values if isinstance(w, StateVector) else np.asarray(w, dtype=np.complex128)
    grid_dx = 1.0 / (u.size - 1)
    dt = cfg.dt
    cB = 0.5 * cfg.chi * dt * coeffs.B
    cC = 0.5 * cfg.gamma * dt * coeffs.C
    b = (
        u
        - cB * kernels.third_diff(u, grid_dx)
        + 1j * cC * kernels.second_diff(u, grid_dx)
        - dt * coeffs.L * kernels.central_diff(u, grid_dx)
        - 1j * dt * cfg.cubic_sign * (np.abs(wv) ** 2) * wv
    )
    if forcing is not None:
        b = b + dt * np.asarray(forcing, dtype=np.complex128)
    return b


def _padded_factor_storage(A: BandedMatrix) -> np.ndarray:
    """Band storage with kl extra fill rows, ready for the LU kernel."""
    kl = A.lower
    W = np.zeros((2 * kl + A.upper + 1, A.order), dtype=np.complex128)
    W[kl:, :] = A.bands
    return W


def _constrain_rows(W: np.ndarray, n: int, kl: int, ku: int) -> None:
    """Overwrite the constrained matrix rows with identity rows (in place)."""
    d = kl + ku
    for i in constrained_indices(n):
        for off in range(-kl, ku + 1):
            j = i + off
            if 0 <= j < n:
                W[d + i - j, j] = 1.0 if off == 0 else 0.0


def _factor_or_raise(W: np.ndarray, n: int, kl: int, ku: int):
    scale = np.max(np.abs(W))
    piv, info = kernels.banded_lu_factor(W, n, kl, ku)
    if info != 0:
        raise SolverError(f"singular matrix: zero pivot in column {info - 1}")
    diag = np.abs(W[kl + ku, :])
    if np.min(diag) < 1e-14 * max(scale, np.max(diag)):
        raise SolverError("numerically singular matrix")
    return piv


def banded_solve(A: BandedMatrix, b) -> np.ndarray:
    """Direct solve A x = b via banded LU with partial pivoting, O(M) work."""
    rhs = np.asarray(b, dtype=np.complex128)
    if rhs.size != A.order:
        raise ValueError("right-hand side length does not match matrix order")
    W = _padded_factor_storage(A)
    piv = _factor_or_raise(W, A.order, A.lower, A.upper)
    return kernels.banded_lu_solve(W, piv, A.order, A.lower, A.upper, rhs)


def _coeff_eval_time(cfg: SchemeConfig, t_n: float) -> float:
    return t_n + 0.5 * cfg.dt if cfg.coeff_time == "midpoint" else t_n


def _forcing_average(forcing, grid: GridSpec, t_n: float, dt: float):
    if forcing is None:
        return None
    x = grid.nodes
    return 0.5 * (np.asarray(forcing(x, t_n)) + np.asarray(forcing(x, t_n + dt)))


def picard_step(
    cfg: SchemeConfig,
    domain: MovingDomain,
    u_n: StateVector,
    t_n: float,
    forcing: Optional[Callable] = None,
    grid: Optional[GridSpec] = None,
):
    """Advance one step; returns (u_{n+1}, StepReport).

    Raises ContractionFailure when successive increments stop shrinking
    and MaxPicardExceeded when the cap is reached first.
    """
    if grid is None:
        grid = GridSpec(u_n.M)
    n = grid.M + 1
    coeffs = evaluate_coefficients(domain, _coeff_eval_time(cfg, t_n), grid)
    A = assemble_left_matrix(cfg, coeffs, grid)
    W = _padded_factor_storage(A)
    _constrain_rows(W, n, A.lower, A.upper)
    piv = _factor_or_raise(W, n, A.lower, A.upper)

    j_eff = _forcing_average(forcing, grid, t_n, cfg.dt)
    zero_w = np.zeros(n, dtype=np.complex128)
    b_lin = assemble_right_side(cfg, coeffs, u_n, zero_w, j_eff)

    cons = constrained_indices(n)
    u, iters, ratio, inc, status, ratios = kernels.picard_sweep(
        W, piv, n, A.lower, A.upper, b_lin, u_n.values,
        cfg.dt * cfg.cubic_sign, grid.dx, cfg.delta_hat, cfg.max_picard, cons,
    )
    if status == 1:
        raise ContractionFailure(
            f"fixed point stopped contracting at iteration {iters} (ratio {ratio:.3g})",
            iteration=iters, ratio=ratio,
        )
    if status == 2:
        raise MaxPicardExceeded(
            f"no convergence within {cfg.max_picard} iterations (last increment {inc:.3g})",
            iteration=iters, ratio=ratio,
        )
    report = StepReport(
        iterations=iters,
        final_contraction_ratio=float(ratio),
        residual=float(inc),
        ratios=tuple(float(r) for r in ratios[np.isfinite(ratios)]),
    )
    return StateVector(u), report


@dataclass
class Trajectory:
    """Result of a trajectory run: states at the ends plus per-step records."""

    initial: StateVector
    final: StateVector
    records: list
    times: np.ndarray


def map_to_physical(u: StateVector, domain: MovingDomain, t: float):
    """Sample the field in physical coordinates: xi_j = alpha + (beta-alpha) x_j."""
    from .boundary import eval_boundary

    a, b, _, _ = eval_boundary(domain, t)
    x = np.arange(u.values.size) / (u.values.size - 1)
    return a + (b - a) * x, u.values.copy()


def integrate(scenario, cfg: Optional[SchemeConfig] = None, callbacks: Sequence[Callable] = ()):
    """March the scheme over [0, T]; diagnostics callbacks run after each step.

    Returns a Trajectory with N+1 per-step records (the first one describes
    the initial state).  Picard failures are re-raised with the failing step
    index and the partial records attached.
    """
    from .diagnostics import make_record
    from .scenarios import scheme_config_for

    if cfg is None:
        cfg = scheme_config_for(scenario)
    grid = GridSpec(scenario.M)
    domain = scenario.domain
    nsteps_f = scenario.T / cfg.dt
    nsteps = int(round(nsteps_f))
    if abs(nsteps - nsteps_f) > 1e-8 * max(1.0, nsteps_f):
        raise ValueError(f"T={scenario.T} is not an integer multiple of dt={cfg.dt}")

    u = scenario.initial_state()
    records = [make_record(0.0, u, None, None, None, grid.dx, cfg.dt, 0)]
    times = np.arange(nsteps + 1) * cfg.dt
    initial = u.copy()
    for cb in callbacks:
        cb(0, 0.0, u)

    for n in range(nsteps):
        t_n = n * cfg.dt
        coeffs = evaluate_coefficients(domain, _coeff_eval_time(cfg, t_n), grid)
        try:
            u_next, report = picard_step(cfg, domain, u, t_n, scenario.forcing, grid)
        except (ContractionFailure, MaxPicardExceeded) as err:
            err.step = n
            err.records = records
            raise
        w_mid = 0.5 * (u.values + u_next.values)
        records.append(
            make_record(times[n + 1], u_next, u, w_mid, coeffs, grid.dx, cfg.dt, report.iterations)
        )
        u = u_next
        for cb in callbacks:
            cb(n + 1, times[n + 1], u)

    return Trajectory(initial=initial, final=u, records=records, times=times)
