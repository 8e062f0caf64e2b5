"""Grid, constrained state space and finite-difference operators.

The grid has M intervals on [0, 1] (M+1 nodes).  States live in the
subspace with u_0 = u_{M-1} = u_M = 0; those three entries implement the
scheme's discrete boundary conditions and are re-imposed after every
solve.  The derivative matrices are banded Toeplitz with the stencil
simply truncated at the first/last rows, which is the same thing as
treating out-of-range neighbours as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONSTRAINED_OFFSETS = (0, -2, -1)  # node indices 0, M-1, M


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with M >= 8 intervals on the unit interval."""

    M: int

    def __post_init__(self):
        if self.M < 8:
            raise ValueError(f"M must be at least 8, got {self.M}")

    @property
    def dx(self) -> float:
        return 1.0 / self.M

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.dx


def constrained_indices(n: int) -> np.ndarray:
    """Indices pinned to zero for a length-n grid function (n = M+1)."""
    return np.array([0, n - 2, n - 1])


class StateVector:
    """Complex grid function with the three boundary entries pinned to zero.

    Construction copies the input and projects the constrained entries,
    so a StateVector is always a member of the discrete boundary space.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        v = np.array(values, dtype=np.complex128)
        if v.ndim != 1 or v.size < 4:
            raise ValueError("state must be a 1-d array with at least 4 nodes")
        v[constrained_indices(v.size)] = 0.0
        self.values = v

    @property
    def M(self) -> int:
        return self.values.size - 1

    def copy(self) -> "StateVector":
        return StateVector(self.values)

    @classmethod
    def zeros(cls, M: int) -> "StateVector":
        return cls(np.zeros(M + 1, dtype=np.complex128))

    def __len__(self):
        return self.values.size


def _as_values(u) -> np.ndarray:
    if isinstance(u, StateVector):
        return u.values
    return np.asarray(u)


@dataclass(frozen=True)
class BandedMatrix:
    """Square banded matrix stored by diagonals.

    bands has shape (lower + upper + 1, order); bands[upper + i - j, j]
    holds entry (i, j).  Unused corners of the storage are zero, which
    also encodes the truncated first/last stencil rows.
    """

    order: int
    lower: int
    upper: int
    bands: np.ndarray

    def __post_init__(self):
        if self.bands.shape != (self.lower + self.upper + 1, self.order):
            raise ValueError("band storage shape mismatch")

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.order, self.order), dtype=self.bands.dtype)
        for i in range(self.order):
            for j in range(max(0, i - self.lower), min(self.order, i + self.upper + 1)):
                a[i, j] = self.bands[self.upper + i - j, j]
        return a

    def apply(self, u) -> np.ndarray:
        """Matrix-vector product (dtype follows numpy promotion)."""
        v = _as_values(u)
        out = np.zeros(self.order, dtype=np.result_type(self.bands.dtype, v.dtype))
        for off in range(-self.lower, self.upper + 1):
            row = self.upper - off
            if off >= 0:
                out[: self.order - off] += self.bands[row, off:] * v[off:]
            else:
                k = -off
                out[k:] += self.bands[row, : self.order - k] * v[: self.order - k]
        return out


def _toeplitz_banded(order: int, weights: dict[int, float], dtype=np.float64) -> BandedMatrix:
    """Banded Toeplitz matrix from {offset: weight}, truncated at the edges."""
    lower = -min(weights)
    upper = max(weights)
    bands = np.zeros((lower + upper + 1, order), dtype=dtype)
    for off, w in weights.items():
        row = upper - off
        if off >= 0:
            bands[row, off:] = w
        else:
            bands[row, : order + off] = w
    return BandedMatrix(order=order, lower=lower, upper=upper, bands=bands)


def apply_forward_difference(u, dx: float) -> np.ndarray:
    """(u_{j+1} - u_j)/dx with zero extension past the last node."""
    v = _as_values(u)
    if v.size < 2:
        raise ValueError("need at least 2 nodes")
    out = np.empty_like(v)
    out[:-1] = (v[1:] - v[:-1]) / dx
    out[-1] = -v[-1] / dx
    return out


def apply_backward_difference(u, dx: float) -> np.ndarray:
    """(u_j - u_{j-1})/dx with zero extension before the first node."""
    v = _as_values(u)
    if v.size < 2:
        raise ValueError("need at least 2 nodes")
    out = np.empty_like(v)
    out[1:] = (v[1:] - v[:-1]) / dx
    out[0] = v[0] / dx
    return out


def apply_central_difference(u, dx: float) -> np.ndarray:
    """(u_{j+1} - u_{j-1})/(2 dx), the average of forward and backward."""
    v = _as_values(u)
    out = np.zeros_like(v)
    out[:-1] += v[1:] / (2.0 * dx)
    out[1:] -= v[:-1] / (2.0 * dx)
    return out


def _check_size(M: int) -> None:
    # order M+1 must fit the widest (pentadiagonal) stencil
    if M < 4:
        raise ValueError(f"M={M} too small for the difference stencils")


def build_first_derivative(M: int, dx: float) -> BandedMatrix:
    """Central first derivative: rows (-1, 0, 1)/(2 dx)."""
    _check_size(M)
    h = 1.0 / (2.0 * dx)
    return _toeplitz_banded(M + 1, {-1: -h, 1: h})


def build_second_derivative(M: int, dx: float) -> BandedMatrix:
    """Second derivative D+D-: rows (1, -2, 1)/dx^2."""
    _check_size(M)
    h = 1.0 / dx**2
    return _toeplitz_banded(M + 1, {-1: h, 0: -2.0 * h, 1: h})


def build_third_derivative(M: int, dx: float) -> BandedMatrix:
    """Third derivative (central of D+D-): rows (-1/2, 1, 0, -1, 1/2)/dx^3."""
    _check_size(M)
    h = 1.0 / dx**3
    return _toeplitz_banded(M + 1, {-2: -0.5 * h, -1: h, 1: -h, 2: 0.5 * h})
