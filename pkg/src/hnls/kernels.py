"""Hot numerical kernels: banded LU, stencil applications, inner loops.

Every kernel is written once and compiled with numba's @njit when
available.  Setting the environment variable HNLS_DISABLE_NUMBA=1 (or
when numba is not importable) runs the identical source uncompiled on
plain numpy; results are bit-for-bit the same, only slower.  The
benchmark script under benchmarks/ compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("HNLS_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _flag in ("1", "true", "yes", "on")

USING_NUMBA = False
if not _DISABLED:
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via the env flag instead
        USING_NUMBA = False

if USING_NUMBA:
    def jit(func):
        return _njit(cache=True)(func)
else:
    def jit(func):
        return func


# ---------------------------------------------------------------------------
# banded LU with partial pivoting (bandwidths kl, ku; pivoting widens the
# upper band to kl+ku).  Storage: W has shape (2*kl + ku + 1, n) with entry
# (i, j) at W[kl + ku + i - j, j]; rows 0..kl-1 start as fill-in workspace.
# ---------------------------------------------------------------------------

@jit
def banded_lu_factor(W, n, kl, ku):
    """In-place LU factorisation.  Returns (piv, info); info=k+1 flags a
    zero pivot in column k, info=0 means success."""
    piv = np.empty(n, dtype=np.int64)
    d = kl + ku  # row index of the diagonal in W
    for k in range(n):
        imax = min(n - 1, k + kl)
        # pivot search within the lower band of column k
        pk = k
        best = abs(W[d + k - k, k])
        for i in range(k + 1, imax + 1):
            m = abs(W[d + i - k, k])
            if m > best:
                best = m
                pk = i
        piv[k] = pk
        if best == 0.0:
            return piv, k + 1
        jmax = min(n - 1, k + kl + ku)
        if pk != k:
            for j in range(k, jmax + 1):
                tmp = W[d + k - j, j]
                W[d + k - j, j] = W[d + pk - j, j]
                W[d + pk - j, j] = tmp
        akk = W[d, k]
        for i in range(k + 1, imax + 1):
            m = W[d + i - k, k] / akk
            W[d + i - k, k] = m
            for j in range(k + 1, jmax + 1):
                W[d + i - j, j] -= m * W[d + k - j, j]
    return piv, 0


@jit
def banded_lu_solve(W, piv, n, kl, ku, b):
    """Solve with factors from banded_lu_factor; b is copied, not clobbered."""
    d = kl + ku
    x = b.copy()
    for k in range(n):
        pk = piv[k]
        if pk != k:
            tmp = x[k]
            x[k] = x[pk]
            x[pk] = tmp
        imax = min(n - 1, k + kl)
        for i in range(k + 1, imax + 1):
            x[i] -= W[d + i - k, k] * x[k]
    for k in range(n - 1, -1, -1):
        jmax = min(n - 1, k + kl + ku)
        acc = x[k]
        for j in range(k + 1, jmax + 1):
            acc -= W[d + k - j, j] * x[j]
        x[k] = acc / W[d, k]
    return x


@jit
def banded_matvec(bands, lower, upper, v):
    """y = A v for band storage bands[upper + i - j, j] (complex)."""
    n = v.size
    out = np.zeros(n, dtype=np.complex128)
    for off in range(-lower, upper + 1):
        row = upper - off
        if off >= 0:
            out[: n - off] += bands[row, off:] * v[off:]
        else:
            k = -off
            out[k:] += bands[row, : n - k] * v[: n - k]
    return out


# ---------------------------------------------------------------------------
# stencil applications used by the explicit reference integrator; weights
# match the banded matrices built in grid.py (agreement is unit-tested).
# ---------------------------------------------------------------------------

@jit
def central_diff(v, dx):
    out = np.zeros_like(v)
    h = 0.5 / dx
    out[:-1] += v[1:] * h
    out[1:] -= v[:-1] * h
    return out


@jit
def second_diff(v, dx):
    out = np.zeros_like(v)
    h = 1.0 / (dx * dx)
    out[:] = -2.0 * h * v
    out[:-1] += v[1:] * h
    out[1:] += v[:-1] * h
    return out


@jit
def third_diff(v, dx):
    out = np.zeros_like(v)
    h = 1.0 / (dx * dx * dx)
    out[:-2] += 0.5 * h * v[2:]
    out[:-1] -= h * v[1:]
    out[1:] += h * v[:-1]
    out[2:] -= 0.5 * h * v[:-2]
    return out


@jit
def l2_norm(v, dx):
    s = 0.0
    for i in range(v.size):
        s += v[i].real * v[i].real + v[i].imag * v[i].imag
    return np.sqrt(dx * s)


# ---------------------------------------------------------------------------
# Picard sweep: repeated linear solves with the cubic term frozen at the
# previous iterate's midpoint, until the increment drops below delta_hat.
# status: 0 converged, 1 contraction lost, 2 iteration cap hit.
# ---------------------------------------------------------------------------

@jit
def picard_sweep(W, piv, n, kl, ku, b_lin, u_n, dt_nu, dx, delta_hat, max_picard, cons):
    u_prev = u_n.copy()
    d_prev = -1.0
    last_ratio = 0.0
    last_inc = 0.0
    ratios = np.full(max_picard + 1, np.nan)
    status = 2
    iterations = max_picard
    u = u_prev.copy()
    for p in range(2, max_picard + 1):
        w = 0.5 * (u_prev + u_n)
        b = b_lin - (1j * dt_nu) * (w.real**2 + w.imag**2) * w
        b[cons] = 0.0
        u = banded_lu_solve(W, piv, n, kl, ku, b)
        u[cons] = 0.0
        d = l2_norm(u - u_prev, dx)
        iterations = p
        last_inc = d
        if not np.isfinite(d):
            last_ratio = np.inf
            status = 1
            break
        if d < delta_hat:
            status = 0
            break
        if d_prev > 0.0:
            last_ratio = d / d_prev
            ratios[p] = last_ratio
            if last_ratio >= 1.0:
                status = 1
                break
        d_prev = d
        u_prev = u
    return u, iterations, last_ratio, last_inc, status, ratios


# ---------------------------------------------------------------------------
# classical 4-stage explicit method-of-lines loop for the reference
# integrator.  Coefficient time series are sampled at half steps:
# index 2*m is t_m, 2*m+1 is the midpoint.  L(x,t) is affine in x, so the
# field is reconstructed from two scalars per sample time.
# ---------------------------------------------------------------------------

@jit
def _mol_rhs(u, x, dx, gamma, chi, nu, B, C, l0, l1, cons):
    L = l0 + l1 * x
    f = (
        -chi * B * third_diff(u, dx)
        + (1j * gamma * C) * second_diff(u, dx)
        - L * central_diff(u, dx)
        - (1j * nu) * (u.real**2 + u.imag**2) * u
    )
    f[cons] = 0.0
    return f


@jit
def rk4_sweep(u0, x, dx, gamma, chi, nu, Bs, Cs, l0s, l1s, dt, nsteps, cons):
    u = u0.copy()
    for m in range(nsteps):
        k1 = _mol_rhs(u, x, dx, gamma, chi, nu, Bs[2 * m], Cs[2 * m], l0s[2 * m], l1s[2 * m], cons)
        um = u + (0.5 * dt) * k1
        k2 = _mol_rhs(um, x, dx, gamma, chi, nu, Bs[2 * m + 1], Cs[2 * m + 1], l0s[2 * m + 1], l1s[2 * m + 1], cons)
        um = u + (0.5 * dt) * k2
        k3 = _mol_rhs(um, x, dx, gamma, chi, nu, Bs[2 * m + 1], Cs[2 * m + 1], l0s[2 * m + 1], l1s[2 * m + 1], cons)
        um = u + dt * k3
        k4 = _mol_rhs(um, x, dx, gamma, chi, nu, Bs[2 * m + 2], Cs[2 * m + 2], l0s[2 * m + 2], l1s[2 * m + 2], cons)
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        u[cons] = 0.0
    return u


def python_impl(func):
    """The uncompiled source of a kernel (for fallback-equivalence tests)."""
    return getattr(func, "py_func", func)
