"""Independent reference computations used to cross-check the main scheme.

Two tools: a dense Gaussian-elimination solve for validating the banded
solver, and an explicit classical 4-stage method-of-lines integrator on a
fine grid for convergence measurements.  The explicit path shares only the
spatial stencils with the production scheme; its time stepping is
completely separate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .coefficients import evaluate_coefficients
from .errors import SolverError
from .grid import GridSpec, StateVector, constrained_indices

STAGE_COUNT = 4
DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class OracleConfig:
    """Fine-grid explicit integrator settings.

    fine_dt must resolve the stiff third-derivative stencil; the run aborts
    if the L2 drift over a fixed-domain window exceeds DRIFT_LIMIT (on a
    moving domain the norm change is physical and the check is skipped).
    """

    fine_M: int
    fine_dt: float
    stage_count: int = STAGE_COUNT

    def __post_init__(self):
        if self.fine_M < 8:
            raise ValueError("fine_M too small")
        if not self.fine_dt > 0.0:
            raise ValueError("fine_dt must be positive")
        if self.stage_count != STAGE_COUNT:
            raise ValueError("only the classical 4-stage method is implemented")


def dense_solve(a, b) -> np.ndarray:
    """Gaussian elimination with partial pivoting on a full matrix.

    Test-scale only (order <= 200); used as the independent check for
    banded_solve.
    """
    A = np.array(a, dtype=np.complex128)
    x = np.array(b, dtype=np.complex128)
    n = A.shape[0]
    if A.shape != (n, n) or x.shape != (n,):
        raise ValueError("need a square matrix and a matching vector")
    if n > 200:
        raise ValueError("dense_solve is capped at order 200")
    scale = np.max(np.abs(A)) or 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= 1e-14 * scale:
            raise SolverError(f"singular matrix at column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            x[[k, p]] = x[[p, k]]
        m = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k + 1 :] -= np.outer(m, A[k, k + 1 :])
        x[k + 1 :] -= m * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - A[k, k + 1 :] @ x[k + 1 :]) / A[k, k]
    return x


def stable_fine_dt(scenario, fine_M: int, safety: float = 0.5) -> float:
    """Step bound for the explicit 4-stage loop from the frozen spectrum.

    The spectrum is essentially imaginary: |lambda| <= 2.598 |chi| B / dx^3
    + 4 |gamma| C / dx^2 + max|L| / dx + max|u0|^2, and the 4-stage method
    tolerates |lambda dt| <= 2.8 on the imaginary axis.
    """
    grid = GridSpec(fine_M)
    dx = grid.dx
    lam = 0.0
    for t in np.linspace(0.0, scenario.T, 33):
        c = evaluate_coefficients(scenario.domain, t, grid)
        lam = max(
            lam,
            2.598 * abs(scenario.chi) * c.B / dx**3
            + 4.0 * abs(scenario.gamma) * c.C / dx**2
            + np.max(np.abs(c.L)) / dx,
        )
    u0 = scenario.initial_state()
    lam += abs(scenario.cubic_sign) * float(np.max(np.abs(u0.values)) ** 2)
    return safety * 2.8 / lam


@dataclass
class OracleTrajectory:
    times: np.ndarray
    states: list
    final: StateVector
    fine_M: int


def _coefficient_series(scenario, grid, t0, dt, nsteps):
    """B, C and the affine advection pair (l0, l1) at half-step times."""
    ts = t0 + 0.5 * dt * np.arange(2 * nsteps + 1)
    Bs = np.empty(ts.size)
    Cs = np.empty(ts.size)
    l0 = np.empty(ts.size)
    l1 = np.empty(ts.size)
    for i, t in enumerate(ts):
        c = evaluate_coefficients(scenario.domain, min(t, scenario.domain.horizon), grid)
        Bs[i], Cs[i] = c.B, c.C
        l0[i] = c.L[0]
        l1[i] = c.L[-1] - c.L[0]
    return Bs, Cs, l0, l1


def _domain_is_fixed(scenario) -> bool:
    return scenario.domain.alpha.kind == "constant" and scenario.domain.beta.kind == "constant"


def reference_integrate(
    scenario,
    cfg: OracleConfig,
    snapshot_times: Optional[Sequence[float]] = None,
) -> OracleTrajectory:
    """Explicit method of lines on the fine grid; snapshots at the given times.

    Forcing is not supported here; the reference targets the homogeneous
    problem.  Aborts with SolverError if a fixed-domain run drifts in L2 by
    more than DRIFT_LIMIT (the explicit step was too coarse to be a
    reference).
    """
    if scenario.forcing is not None:
        raise ValueError("the explicit reference does not support forcing")
    grid = GridSpec(cfg.fine_M)
    dx = grid.dx
    x = grid.nodes
    cons = constrained_indices(cfg.fine_M + 1)

    from dataclasses import replace

    fine_scenario = replace(scenario, M=cfg.fine_M)
    u = fine_scenario.initial_state().values.copy()
    l2_start = kernels.l2_norm(u, dx)

    wanted = sorted(set(float(t) for t in (snapshot_times or [])))
    for t in wanted:
        if t < 0.0 or t > scenario.T + 1e-12:
            raise ValueError(f"snapshot time {t} outside [0, {scenario.T}]")
    marks = [t for t in wanted if t > 0.0] + ([scenario.T] if scenario.T not in wanted else [])

    times = [0.0]
    states = [StateVector(u)] if 0.0 in wanted else []
    t_now = 0.0
    for t_stop in marks:
        span = t_stop - t_now
        nsteps = max(1, int(np.ceil(span / cfg.fine_dt - 1e-12)))
        dt = span / nsteps
        Bs, Cs, l0, l1 = _coefficient_series(fine_scenario, grid, t_now, dt, nsteps)
        u = kernels.rk4_sweep(
            u, x, dx, scenario.gamma, scenario.chi, scenario.cubic_sign,
            Bs, Cs, l0, l1, dt, nsteps, cons,
        )
        t_now = t_stop
        times.append(t_now)
        if t_stop in wanted or t_stop == scenario.T:
            states.append(StateVector(u))

    if _domain_is_fixed(scenario) and l2_start > 0.0:
        drift = abs(kernels.l2_norm(u, dx) - l2_start) / l2_start
        if drift > DRIFT_LIMIT:
            raise SolverError(
                f"explicit reference drifted by {drift:.3g} in L2; shrink fine_dt"
            )

    return OracleTrajectory(
        times=np.array(times), states=states, final=StateVector(u), fine_M=cfg.fine_M
    )
