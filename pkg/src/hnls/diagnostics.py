"""Norms, balance residuals, decay monitoring and the convergence harness."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .grid import StateVector, apply_forward_difference, apply_central_difference


def _vals(u) -> np.ndarray:
    return u.values if isinstance(u, StateVector) else np.asarray(u)


def discrete_l2(u, dx: float) -> float:
    """sqrt(dx * sum |u_j|^2)."""
    v = _vals(u)
    return float(np.sqrt(dx * np.sum(np.abs(v) ** 2)))


def discrete_h1(u, dx: float) -> float:
    """sqrt(||u||^2 + ||D+ u||^2)."""
    du = apply_forward_difference(_vals(u), dx)
    return float(np.sqrt(discrete_l2(u, dx) ** 2 + discrete_l2(du, dx) ** 2))


_WEIGHTS = {
    "exp_x": lambda x: np.exp(x),
    "q_poly": lambda x: 1.0 + 4.0 * x - x**3,
}


def weighted_norm(u, dx: float, weight: str) -> float:
    """dx * sum w(x_j) |u_j|^2 for w = e^x or w = 1 + 4x - x^3 on [0, 1]."""
    v = _vals(u)
    x = np.arange(v.size) * dx
    try:
        w = _WEIGHTS[weight](x)
    except KeyError:
        raise ValueError(f"weight must be one of {sorted(_WEIGHTS)}") from None
    return float(dx * np.sum(w * np.abs(v) ** 2))


def conservation_residual(u_n, u_next, w_mid, coeffs, dx: float, dt: float) -> float:
    """| (||u^{n+1}||^2 - ||u^n||^2)/(2 dt) + Re<L .* D u^n, w> |.

    The advection term is the only non-conservative piece of the scheme,
    so this vanishes (to solver accuracy) for every converged step; on a
    fixed domain L = 0 and the bare norm difference is measured.
    """
    un = _vals(u_n)
    up = _vals(u_next)
    w = _vals(w_mid)
    nrm = (discrete_l2(up, dx) ** 2 - discrete_l2(un, dx) ** 2) / (2.0 * dt)
    adv = dx * np.sum((coeffs.L * apply_central_difference(un, dx)) * np.conj(w))
    return float(abs(nrm + adv.real))


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Per-step scalar diagnostics."""

    t: float
    l2: float
    h1_seminorm: float
    weighted_exp: float
    weighted_q: float
    conservation_residual: float
    picard_iterations: int


def make_record(t, u, u_prev, w_mid, coeffs, dx, dt, iterations) -> DiagnosticsRecord:
    """Assemble one record; the balance residual needs the previous state."""
    res = 0.0
    if u_prev is not None:
        res = conservation_residual(u_prev, u, w_mid, coeffs, dx, dt)
    return DiagnosticsRecord(
        t=float(t),
        l2=discrete_l2(u, dx),
        h1_seminorm=discrete_h1(u, dx),
        weighted_exp=weighted_norm(u, dx, "exp_x"),
        weighted_q=weighted_norm(u, dx, "q_poly"),
        conservation_residual=res,
        picard_iterations=int(iterations),
    )


def decay_monitor(records: Sequence[DiagnosticsRecord]):
    """Fit log ||u||^2 against t and report weighted-q monotonicity.

    Returns (is_monotone_decreasing, fitted_rate).  Purely observational:
    the first 10% of the records are dropped as transient before fitting.
    """
    if len(records) < 10:
        raise ValueError("need at least 10 records")
    burn = max(1, len(records) // 10)
    tail = records[burn:]
    t = np.array([r.t for r in tail])
    l2sq = np.array([r.l2 for r in tail]) ** 2
    if np.any(l2sq <= 0.0):
        rate = 0.0
    else:
        rate = float(np.polyfit(t, np.log(l2sq), 1)[0])
    wq = np.array([r.weighted_q for r in records])
    monotone = bool(np.all(np.diff(wq) < 0.0))
    return monotone, rate


@dataclass(frozen=True)
class ConvergenceReport:
    """Observed error decay under space and time refinement."""

    levels: tuple
    observed_space_order: float
    observed_time_order: float


def _restrict(values: np.ndarray, coarse_m: int) -> np.ndarray:
    fine_m = values.size - 1
    if fine_m % coarse_m:
        raise ValueError(f"fine grid M={fine_m} is not a multiple of coarse M={coarse_m}")
    return values[:: fine_m // coarse_m]


def _final_state(args) -> np.ndarray:
    from .scenarios import scheme_config_for
    from .stepper import integrate

    scenario, M, dt = args
    sc = replace(scenario, M=M, dt=dt)
    return integrate(sc, scheme_config_for(sc)).final.values


def _run_levels(tasks, jobs: int):
    if jobs > 1:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_final_state, tasks))
    return [_final_state(t) for t in tasks]


def _fit_order(hs, errors) -> float:
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def convergence_study(
    scenario,
    base_cfg,
    space_levels: Sequence[int],
    time_levels: Sequence[float],
    reference: str = "self",
    oracle_cfg=None,
    jobs: int = 1,
) -> ConvergenceReport:
    """Final-time L2 error slopes under dx- and dt-refinement.

    Space: each M in space_levels runs at the (small) base_cfg.dt and is
    compared against a reference on a finer nested grid -- either a run of
    this scheme at 4x the finest M ("self") or the independent explicit
    integrator ("oracle").  Time: each dt runs at the finest M and is
    compared against a time-accurate reference on the same grid, which
    isolates the time error.
    """
    from .oracle import OracleConfig, reference_integrate, stable_fine_dt

    space_levels = sorted(space_levels)
    time_levels = sorted(time_levels, reverse=True)
    if len(space_levels) < 3 or len(time_levels) < 3:
        raise ValueError("need at least 3 refinement levels per direction")
    if reference not in ("self", "oracle"):
        raise ValueError("reference must be 'self' or 'oracle'")

    m_fine = 4 * max(space_levels)
    for m in space_levels:
        if m_fine % m:
            raise ValueError("space levels must divide the reference grid size")

    levels = []

    # space refinement at fixed small dt
    if reference == "oracle":
        ocfg = oracle_cfg or OracleConfig(
            fine_M=m_fine, fine_dt=stable_fine_dt(scenario, m_fine)
        )
        ref_space = reference_integrate(scenario, ocfg).final.values
    else:
        ref_space = _final_state((scenario, m_fine, base_cfg.dt))
    space_states = _run_levels([(scenario, m, base_cfg.dt) for m in space_levels], jobs)
    space_errors = []
    for m, u in zip(space_levels, space_states):
        err = discrete_l2(u - _restrict(ref_space, m), 1.0 / m)
        if not err > 0.0:
            raise ValueError(f"zero error at M={m}; reference too close")
        space_errors.append(err)
        levels.append((1.0 / m, base_cfg.dt, err))

    # time refinement at fixed fine dx
    m_time = max(space_levels)
    if reference == "oracle":
        ocfg_t = OracleConfig(fine_M=m_time, fine_dt=stable_fine_dt(scenario, m_time))
        ref_time = reference_integrate(scenario, ocfg_t).final.values
    else:
        ref_time = _final_state((scenario, m_time, min(time_levels) / 4.0))
    time_states = _run_levels([(scenario, m_time, dt) for dt in time_levels], jobs)
    time_errors = []
    for dt, u in zip(time_levels, time_states):
        err = discrete_l2(u - ref_time, 1.0 / m_time)
        if not err > 0.0:
            raise ValueError(f"zero error at dt={dt}; reference too close")
        time_errors.append(err)
        levels.append((1.0 / m_time, dt, err))

    return ConvergenceReport(
        levels=tuple(levels),
        observed_space_order=_fit_order([1.0 / m for m in space_levels], space_errors),
        observed_time_order=_fit_order(time_levels, time_errors),
    )


@dataclass(frozen=True)
class SweepRow:
    """One domain-length configuration and its worst norm drop."""

    x0: float
    xf: float
    length: float
    delta_l2: float


def physical_l2(record_l2: float, width: float) -> float:
    """Rescale the unit-interval norm to the moving interval: sqrt(width)*||u||."""
    return float(np.sqrt(width) * record_l2)


def delta_l2_sweep(scenario_family) -> list[SweepRow]:
    """Worst drop of the physical-interval L2 norm for each family member.

    delta = max over steps of (||v(0)|| - ||v(t_n)||) where
    ||v(t)|| = sqrt(beta - alpha) * ||u||_2.  The physical rescaling matters:
    the unit-interval norm grows as the window narrows even when the field
    loses nothing.
    """
    from .boundary import eval_boundary
    from .scenarios import scheme_config_for
    from .stepper import integrate

    rows = []
    for scenario in scenario_family:
        traj = integrate(scenario, scheme_config_for(scenario))
        dom = scenario.domain
        phys = np.array(
            [
                physical_l2(r.l2, eval_boundary(dom, r.t)[1] - eval_boundary(dom, r.t)[0])
                for r in traj.records
            ]
        )
        a0, b0, _, _ = eval_boundary(dom, 0.0)
        rows.append(
            SweepRow(
                x0=float(a0),
                xf=float(b0),
                length=float(b0 - a0),
                delta_l2=float(phys[0] - phys.min()),
            )
        )
    return rows
