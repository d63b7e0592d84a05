"""Physical parameters and the ignition nonlinearity.

The strip problem couples a reaction-diffusion field psi on
Omega_L = R x (-L, 0) (diffusivity d) with a line field phi on y = 0
(diffusivity D, exchange ratio mu).  The reaction term f is of ignition
type: zero on [0, theta] and at 1, positive in between, with f'(1) < 0.
Outside [0, 1] it is extended by zero on the left and by its tangent at
1 on the right, so f < 0 for u > 1.

Two concrete nonlinearities are provided:

* ``SMOOTH_CUBIC``: f(u) = (u - theta)^2 (1 - u) on (theta, 1].  C^1 at
  the ignition threshold, the workhorse for production runs.
* ``PIECEWISE_LINEAR_ORACLE``: f(u) = 1 - u on (theta, 1].  Discontinuous
  at theta, so it sits outside the smoothness assumptions of the model,
  but the 1-D front speed has the closed form c = sqrt(d) (1-theta)/sqrt(theta),
  which makes it a verification fixture.  Newton solves against it use the
  one-sided derivative f'(theta+).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np


class NonlinearityKind(str, Enum):
    SMOOTH_CUBIC = "smooth_cubic"
    PIECEWISE_LINEAR_ORACLE = "piecewise_linear_oracle"


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the strip/line system.

    Attributes
    ----------
    d : strip diffusivity (> 0)
    D : line diffusivity (> 0)
    mu : exchange ratio (> 0)
    L : strip depth (> 0); the strip is R x (-L, 0)
    """

    d: float
    D: float
    mu: float
    L: float

    def __post_init__(self) -> None:
        for name in ("d", "D", "mu", "L"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"ModelParams.{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class NonlinearitySpec:
    """Ignition reaction term: kind plus threshold theta in (0, 1)."""

    kind: NonlinearityKind
    theta: float

    def __post_init__(self) -> None:
        if not (isinstance(self.theta, (int, float)) and 0.0 < self.theta < 1.0):
            raise ValueError(f"NonlinearitySpec.theta must lie in (0, 1), got {self.theta!r}")
        if not isinstance(self.kind, NonlinearityKind):
            raise ValueError(f"NonlinearitySpec.kind must be a NonlinearityKind, got {self.kind!r}")

    @property
    def fprime_at_one(self) -> float:
        """One-sided derivative f'(1), negative for ignition terms."""
        if self.kind is NonlinearityKind.SMOOTH_CUBIC:
            return -((1.0 - self.theta) ** 2)
        return -1.0


def eval_nonlinearity(u, spec: NonlinearitySpec):
    """Evaluate f(u) and its one-sided derivative f'(u).

    Accepts a scalar or ndarray and returns matching shapes.  The
    extension convention is applied: f = 0 for u <= theta (hence for
    u < 0 as well) and f = f'(1) (u - 1) for u > 1.  At the ignition
    kink u = theta the right derivative is returned.
    """
    theta = spec.theta
    fp1 = spec.fprime_at_one
    if isinstance(u, (int, float)):
        # scalar fast path; the shooting integrator calls this per RK4 stage
        uf = float(u)
        if uf < theta:
            return 0.0, 0.0
        if uf > 1.0:
            return fp1 * (uf - 1.0), fp1
        if spec.kind is NonlinearityKind.SMOOTH_CUBIC:
            f = (uf - theta) ** 2 * (1.0 - uf) if uf > theta else 0.0
            return f, 2.0 * (uf - theta) * (1.0 - uf) - (uf - theta) ** 2
        return (1.0 - uf if uf > theta else 0.0), -1.0
    u_arr = np.asarray(u, dtype=float)
    if spec.kind is NonlinearityKind.SMOOTH_CUBIC:
        mid_f = (u_arr - theta) ** 2 * (1.0 - u_arr)
        mid_fp = 2.0 * (u_arr - theta) * (1.0 - u_arr) - (u_arr - theta) ** 2
    else:
        mid_f = 1.0 - u_arr
        mid_fp = np.full_like(u_arr, -1.0)
    f = np.where(u_arr <= theta, 0.0, np.where(u_arr <= 1.0, mid_f, fp1 * (u_arr - 1.0)))
    # strict '<' keeps f'(theta) = right derivative at the kink
    fp = np.where(u_arr < theta, 0.0, np.where(u_arr <= 1.0, mid_fp, fp1))
    if np.ndim(u) == 0:
        return float(f), float(fp)
    return f, fp


@lru_cache(maxsize=None)
def lipschitz_constant(spec: NonlinearitySpec) -> float:
    """sup over [0, 1] of |f'(u)|, one-sided at kinks, to 1e-10.

    Computed numerically (dense sampling plus golden-section refinement
    around the best sample) so that any future nonlinearity works
    unchanged.
    """
    grid = np.linspace(0.0, 1.0, 1_000_001)
    _, fp = eval_nonlinearity(grid, spec)
    mag = np.abs(fp)
    k = int(np.argmax(mag))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]

    def neg_mag(u: float) -> float:
        return -abs(eval_nonlinearity(u, spec)[1])

    # golden-section minimization of -|f'| on [lo, hi]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = neg_mag(c1), neg_mag(c2)
    while b - a > 1e-13:
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = neg_mag(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = neg_mag(c2)
    best = max(mag[k], -f1, -f2)
    return float(best)


def c_max(params: ModelParams, spec: NonlinearitySpec) -> float:
    """Closed-form upper bound on the wave speed.

    Equals 2 sqrt(d Lip f) when D <= 2d and sqrt(D^2/(D-d) Lip f)
    otherwise; the two branches agree at D = 2d.  Valid for reaction
    terms satisfying f(u) <= Lip f * u, which the discontinuous oracle
    nonlinearity deliberately violates.
    """
    lip = lipschitz_constant(spec)
    d, D = params.d, params.D
    if D <= 2.0 * d:
        return 2.0 * math.sqrt(d * lip)
    return math.sqrt(D * D / (D - d) * lip)
