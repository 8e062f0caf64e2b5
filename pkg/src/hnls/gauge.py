"""Phase-and-shift change of unknown removing the second-derivative term.

With d1 = gamma^2/(3 chi), d2 = gamma/(3 chi), d3 = -2 gamma^3/(27 chi^2),
the substitution v(xi, tau) = exp(i d2 xi + i d3 tau) w(xi - d1 tau, tau)
turns  i v_t + gamma v_xx + i chi v_xxx = |v|^2 v  into the complex
KdV-form equation  w_s + chi w_yyy + i |w|^2 w = 0.  Offered as a
post-processing utility on sampled fields, not as a solver path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class GaugeConstants:
    d1: float
    d2: float
    d3: float


def gauge_constants(gamma: float, chi: float) -> GaugeConstants:
    """The three transform constants; degenerate when chi = 0."""
    if chi == 0.0:
        raise ValueError("gauge transform is degenerate for chi = 0")
    return GaugeConstants(
        d1=gamma**2 / (3.0 * chi),
        d2=gamma / (3.0 * chi),
        d3=-2.0 * gamma**3 / (27.0 * chi**2),
    )


def gauge_forward(xi, v, gamma: float, chi: float, tau: float):
    """v -> w: strip the phase and shift coordinates, (y, w) = (xi - d1 tau, ...)."""
    c = gauge_constants(gamma, chi)
    xi = np.asarray(xi, dtype=float)
    v = np.asarray(v, dtype=np.complex128)
    w = np.exp(-1j * (c.d2 * xi + c.d3 * tau)) * v
    return xi - c.d1 * tau, w


def gauge_inverse(y, w, gamma: float, chi: float, tau: float):
    """w -> v: undo the shift and restore the phase."""
    c = gauge_constants(gamma, chi)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=np.complex128)
    xi = y + c.d1 * tau
    return xi, np.exp(1j * (c.d2 * xi + c.d3 * tau)) * w


def transform_defect(gamma: float, chi: float) -> tuple[float, float, float]:
    """Residual coefficients of w, w_y, w_yy after the substitution.

    All three vanish identically when the constants are right; returned for
    the numeric cancellation check.
    """
    c = gauge_constants(gamma, chi)
    cw = -c.d3 - gamma * c.d2**2 + chi * c.d2**3
    cwy = -c.d1 + 2.0 * gamma * c.d2 - 3.0 * chi * c.d2**2
    cwyy = gamma - 3.0 * chi * c.d2
    return cw, cwy, cwyy


def _interior_residual_rms(res_slices, dx: float, margin: int) -> float:
    """Root-mean-square over time of the spatial L2 norm, edges trimmed."""
    vals = []
    for r in res_slices:
        core = r[margin:-margin] if margin else r
        vals.append(dx * np.sum(np.abs(core) ** 2))
    return float(np.sqrt(np.mean(vals)))


def kdv_form_residual(w, chi: float, dx: float, dt: float, margin: int = 2) -> float:
    """Discrete residual of  w_s + chi w_yyy + i |w|^2 w  on interior nodes.

    w is a (time, space) array sampled on a fixed uniform grid.  Time
    derivative: centred differences on the interior time levels; space:
    the solver's third-derivative stencil with `margin` nodes trimmed at
    each end.
    """
    w = np.asarray(w, dtype=np.complex128)
    if w.ndim != 2 or w.shape[0] < 3:
        raise ValueError("need a (time, space) array with at least 3 time levels")
    out = []
    for n in range(1, w.shape[0] - 1):
        wn = w[n]
        dtw = (w[n + 1] - w[n - 1]) / (2.0 * dt)
        out.append(dtw + chi * kernels.third_diff(wn, dx) + 1j * np.abs(wn) ** 2 * wn)
    return _interior_residual_rms(out, dx, margin)


def hnls_form_residual(
    v, gamma: float, chi: float, dx: float, dt: float,
    cubic_sign: float = 1.0, margin: int = 2,
) -> float:
    """Discrete residual of  i v_t + gamma v_xx + i chi v_xxx - nu |v|^2 v
    on the same stencils as kdv_form_residual (for like-for-like ratios)."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] < 3:
        raise ValueError("need a (time, space) array with at least 3 time levels")
    out = []
    for n in range(1, v.shape[0] - 1):
        vn = v[n]
        dtv = (v[n + 1] - v[n - 1]) / (2.0 * dt)
        out.append(
            1j * dtv
            + gamma * kernels.second_diff(vn, dx)
            + 1j * chi * kernels.third_diff(vn, dx)
            - cubic_sign * np.abs(vn) ** 2 * vn
        )
    return _interior_residual_rms(out, dx, margin)
