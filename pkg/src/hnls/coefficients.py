"""Time- and space-dependent coefficients of the transformed equation.

On the unit interval the equation reads

    u_t - i*gamma*C(t)*u_xx + chi*B(t)*u_xxx + L(x,t)*u_x + i*nu*|u|^2 u = J

with p(t) = 1/(beta - alpha), B(t) = p^3, C(t) = p^2 and the advection
field L(x,t) = -alpha'(t)*p(t) + x*(ln p)'(t) where
(ln p)'(t) = -(beta'(t) - alpha'(t))*p(t).

L is stored as a real grid function; the stepper multiplies by i where
the equation wants the purely imaginary coefficient i*L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import MovingDomain, eval_boundary
from .errors import SingularDomainError
from .grid import GridSpec


@dataclass(frozen=True)
class CoefficientSlice:
    """Coefficients frozen at one time: p plus the advection samples L(x_j, t).

    B = p^3 and C = p^2 are recomputed properties, never stored, so they
    cannot drift out of sync with p.
    """

    t: float
    p: float
    L: np.ndarray

    @property
    def B(self) -> float:
        return self.p ** 3

    @property
    def C(self) -> float:
        return self.p ** 2


def evaluate_coefficients(domain: MovingDomain, t: float, grid: GridSpec) -> CoefficientSlice:
    """p, B, C and the advection field sampled on the grid nodes at time t."""
    a, b, da, db = eval_boundary(domain, t)
    width = b - a
    if width <= 0.0:
        raise SingularDomainError(f"domain width {width} at t={t} is not positive")
    p = 1.0 / width
    dlogp = -(db - da) * p
    L = -da * p + grid.nodes * dlogp
    return CoefficientSlice(t=float(t), p=float(p), L=L)
