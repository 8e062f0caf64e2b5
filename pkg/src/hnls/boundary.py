"""Moving endpoints of the spatial interval and the unit-interval chart.

The solver works on the fixed computational interval [0, 1]; this module
owns the two endpoint curves alpha(t) <= beta(t), their derivatives, the
width admissibility check, and the affine maps between the physical
coordinate xi and the computational coordinate x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError

PROFILE_KINDS = ("constant", "linear", "sinusoidal", "piecewise_absolute")


@dataclass(frozen=True)
class BoundaryProfile:
    """One endpoint curve from a closed parametric family.

    kind / params:
        constant(value)                  -> value
        linear(slope, intercept)         -> slope*t + intercept
        sinusoidal(offset, amp, omega)   -> offset + amp*sin(omega*t)
        piecewise_absolute(slope, t0, offset) -> slope*|t - t0| + offset

    Every kind has an analytic derivative; at the kink of
    piecewise_absolute the right-sided derivative is used so that a
    time stepper landing exactly on the kink keeps going.
    """

    kind: str
    params: tuple[float, ...]

    _ARITY = {"constant": 1, "linear": 2, "sinusoidal": 3, "piecewise_absolute": 3}

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {PROFILE_KINDS}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        want = self._ARITY[self.kind]
        if len(self.params) != want:
            raise ValueError(f"{self.kind} profile takes {want} parameters, got {len(self.params)}")

    def value(self, t):
        p = self.params
        if self.kind == "constant":
            return p[0] * np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else p[0]
        if self.kind == "linear":
            return p[0] * t + p[1]
        if self.kind == "sinusoidal":
            return p[0] + p[1] * np.sin(p[2] * t)
        # piecewise_absolute
        return p[0] * np.abs(t - p[1]) + p[2]

    def derivative(self, t):
        p = self.params
        if self.kind == "constant":
            return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
        if self.kind == "linear":
            return p[0] * np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else p[0]
        if self.kind == "sinusoidal":
            return p[1] * p[2] * np.cos(p[2] * t)
        # right-sided derivative at the kink: sign(0) treated as +1
        s = np.where(np.asarray(t) >= p[1], 1.0, -1.0)
        return p[0] * (s if np.ndim(t) else float(s))


def constant_profile(value: float) -> BoundaryProfile:
    return BoundaryProfile("constant", (value,))


def linear_profile(slope: float, intercept: float) -> BoundaryProfile:
    return BoundaryProfile("linear", (slope, intercept))


def sinusoidal_profile(offset: float, amplitude: float, omega: float) -> BoundaryProfile:
    return BoundaryProfile("sinusoidal", (offset, amplitude, omega))


def piecewise_absolute_profile(slope: float, t0: float, offset: float) -> BoundaryProfile:
    return BoundaryProfile("piecewise_absolute", (slope, t0, offset))


@dataclass(frozen=True)
class MovingDomain:
    """The time-dependent interval (alpha(t), beta(t)) on [0, horizon].

    alpha0/beta0 bound the admissible width: alpha0 <= beta - alpha <= beta0
    must hold for all sampled t (see validate_domain).
    """

    alpha: BoundaryProfile
    beta: BoundaryProfile
    alpha0: float = 1e-9
    beta0: float = 1e12
    horizon: float = 1.0

    def __post_init__(self):
        if not self.alpha0 > 0.0:
            raise ValueError("alpha0 (lower width bound) must be positive")
        if not self.beta0 > self.alpha0:
            raise ValueError("beta0 (upper width bound) must exceed alpha0")
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")

    def _check_time(self, t):
        tol = 1e-12 * max(1.0, self.horizon)
        if np.any(np.asarray(t) < -tol) or np.any(np.asarray(t) > self.horizon + tol):
            raise DomainError(f"time {t} outside [0, {self.horizon}]")


@dataclass(frozen=True)
class WidthViolation:
    """First sampled time at which the width left [alpha0, beta0]."""

    t: float
    width: float


def eval_boundary(domain: MovingDomain, t: float):
    """Endpoint positions and velocities (alpha, beta, dalpha, dbeta) at t."""
    domain._check_time(t)
    return (
        domain.alpha.value(t),
        domain.beta.value(t),
        domain.alpha.derivative(t),
        domain.beta.derivative(t),
    )


def validate_domain(domain: MovingDomain, samples: int = 10_000) -> Optional[WidthViolation]:
    """Check alpha0 <= beta - alpha <= beta0 on a uniform sample of [0, horizon].

    Returns None when every sampled width is admissible, otherwise the first
    violating (t, width).  Dense sampling instead of symbolic minimisation:
    the profile family is smooth apart from a single kink.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    ts = np.linspace(0.0, domain.horizon, samples)
    widths = domain.beta.value(ts) - domain.alpha.value(ts)
    bad = (widths < domain.alpha0) | (widths > domain.beta0)
    if np.any(bad):
        i = int(np.argmax(bad))
        return WidthViolation(t=float(ts[i]), width=float(widths[i]))
    return None


def physical_to_computational(domain: MovingDomain, xi, t):
    """Map xi in [alpha(t), beta(t)] to x = (xi - alpha)/(beta - alpha) in [0, 1]."""
    a, b, _, _ = eval_boundary(domain, t)
    xi = np.asarray(xi, dtype=float)
    tol = 1e-12 * max(1.0, abs(b - a))
    if np.any(xi < a - tol) or np.any(xi > b + tol):
        raise DomainError(f"xi outside [{a}, {b}] at t={t}")
    x = (xi - a) / (b - a)
    return float(x) if x.ndim == 0 else x


def computational_to_physical(domain: MovingDomain, x, t):
    """Inverse chart: xi = alpha(t) + (beta(t) - alpha(t)) * x."""
    a, b, _, _ = eval_boundary(domain, t)
    xi = a + (b - a) * np.asarray(x, dtype=float)
    return float(xi) if xi.ndim == 0 else xi
