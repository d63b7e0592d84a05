"""Damped Newton solve of the bordered system and the 1-D shooting oracle.

Newton iterates on the flat dof vector with an Armijo backtracking line
search on the residual infinity norm; each accepted step strictly
decreases the norm.  Linear systems are solved by direct sparse LU
(deterministic, robust for the bordered nonsymmetric matrix at desk
scale) with one step of iterative refinement.

The shooting oracle integrates the 1-D front equation
-d psi'' + c psi' = f(psi) from the exact ignition tail
psi(x) = theta exp(c x / d) (x <= 0), classifying each trial speed as
overshoot (psi passes 1 with psi' > 0, speed too large) or undershoot
(psi' vanishes below 1, speed too small) and bisecting.  Trajectories
that exhaust the integration window are classified as undershoot: only
at-or-below-critical speeds linger.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (BracketNotFound, LinearSolveFailed, MaxItersExceeded,
                     NegativeSpeed, StepUnderflow)
from .grid import Grid
from .model import ModelParams, NonlinearitySpec, c_max, eval_nonlinearity
from .residual import WaveState, assemble_jacobian, assemble_residual, state_to_vector, vector_to_state

logger = logging.getLogger(__name__)

_ARMIJO_SLOPE = 1e-4


@dataclass(frozen=True)
class NewtonOptions:
    tol_residual: float = 1e-10
    max_iters: int = 50
    damping: float = 0.5
    min_step: float = 1e-8

    def __post_init__(self) -> None:
        if self.tol_residual <= 0:
            raise ValueError("tol_residual must be positive")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")


@dataclass
class NewtonResult:
    state: WaveState
    iterations: int
    residual_norm: float


@dataclass
class OneDimWave:
    """Front of the 1-D reduction: speed, sampled profile, threshold.

    The profile starts at x = 0 with psi(0) = theta; the tail
    theta*exp(c x / d) is exact for x <= 0 and is evaluated analytically.
    """

    c: float
    x: np.ndarray
    psi: np.ndarray
    theta: float
    d: float = 1.0

    def evaluate(self, xq) -> np.ndarray:
        xq = np.asarray(xq, dtype=float)
        tail = self.theta * np.exp(self.c / self.d * np.minimum(xq, 0.0))
        body = np.interp(xq, self.x, self.psi, left=self.theta, right=1.0)
        return np.where(xq <= 0.0, tail, body)


def linear_solve(J: sp.spmatrix, rhs: np.ndarray) -> np.ndarray:
    """Direct sparse LU solve with relative residual <= 1e-12.

    One iterative-refinement step is applied when the first solve leaves
    a larger residual.  Raises LinearSolveFailed on structural or
    numerical singularity.
    """
    if J.shape[0] != J.shape[1]:
        raise LinearSolveFailed(f"matrix is not square: {J.shape}")
    if J.shape[0] != rhs.shape[0]:
        raise LinearSolveFailed("rhs length does not match matrix")
    Jc = J.tocsc()
    try:
        lu = spla.splu(Jc)
        x = lu.solve(rhs)
    except RuntimeError as exc:
        raise LinearSolveFailed(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise LinearSolveFailed("factorization produced non-finite solution")
    # backward-error test: |J x - rhs| <= 1e-12 (|J| |x| + |rhs|), inf-norms
    j_norm = float(np.abs(Jc).sum(axis=1).max())

    def backward_error(sol: np.ndarray) -> float:
        scale = j_norm * np.abs(sol).max() + np.abs(rhs).max()
        if scale == 0.0:
            return 0.0
        return float(np.abs(Jc @ sol - rhs).max() / scale)

    if backward_error(x) > 1e-12:
        x = x + lu.solve(rhs - Jc @ x)
        err = backward_error(x)
        if err > 1e-12:
            raise LinearSolveFailed(f"relative linear residual {err:.3e} exceeds 1e-12 "
                                    "after refinement")
    return x


def newton_solve(init: WaveState, params: ModelParams, spec: NonlinearitySpec,
                 grid: Grid, opts: NewtonOptions = NewtonOptions()) -> NewtonResult:
    """Damped Newton iteration on the bordered system.

    Deterministic given its inputs.  Raises MaxItersExceeded,
    LinearSolveFailed, StepUnderflow, or NegativeSpeed (converged speed
    c <= 0 signals a spurious root).
    """
    u = state_to_vector(init, grid)
    family = init.family

    def res_of(vec: np.ndarray) -> np.ndarray:
        return assemble_residual(vector_to_state(vec, grid, family), params, spec, grid)

    R = res_of(u)
    norm = float(np.abs(R).max())
    iterations = 0
    while norm > opts.tol_residual:
        if iterations >= opts.max_iters:
            raise MaxItersExceeded(f"residual {norm:.3e} after {opts.max_iters} iterations")
        state = vector_to_state(u, grid, family)
        J = assemble_jacobian(state, params, spec, grid)
        du = linear_solve(J, -R)
        lam = 1.0
        while True:
            u_trial = u + lam * du
            R_trial = res_of(u_trial)
            norm_trial = float(np.abs(R_trial).max())
            if norm_trial <= (1.0 - _ARMIJO_SLOPE * lam) * norm:
                break
            lam *= opts.damping
            if lam < opts.min_step:
                raise StepUnderflow(f"line search stalled at residual {norm:.3e}")
        u, R, norm = u_trial, R_trial, norm_trial
        iterations += 1

    out = vector_to_state(u, grid, family)
    if out.c <= 0.0:
        raise NegativeSpeed(f"converged to c = {out.c:.6e}")
    peclet = out.c * grid.hx / params.d
    if peclet >= 2.0:
        logger.warning("cell Peclet number c*hx/d = %.3f >= 2; centered convection may oscillate", peclet)
    return NewtonResult(state=out, iterations=iterations, residual_norm=norm)


def _classify(c: float, d: float, spec: NonlinearitySpec, h: float, x_max: float) -> int:
    """+1 overshoot, -1 undershoot for one shooting trajectory."""
    theta = spec.theta
    psi = theta
    dpsi = c * theta / d
    # the first stage is evaluated on the active reaction branch; the
    # trajectory leaves u = theta immediately and f is defined one-sidedly
    f_start, _ = eval_nonlinearity(math.nextafter(theta, 1.0), spec)
    n_steps = int(x_max / h)
    for k in range(n_steps):
        p, dp = psi, dpsi
        f1 = f_start if k == 0 else eval_nonlinearity(p, spec)[0]
        a1 = (c * dp - f1) / d
        p2, dp2 = p + 0.5 * h * dp, dp + 0.5 * h * a1
        a2 = (c * dp2 - eval_nonlinearity(p2, spec)[0]) / d
        p3, dp3 = p + 0.5 * h * dp2, dp + 0.5 * h * a2
        a3 = (c * dp3 - eval_nonlinearity(p3, spec)[0]) / d
        p4, dp4 = p + h * dp3, dp + h * a3
        a4 = (c * dp4 - eval_nonlinearity(p4, spec)[0]) / d
        psi = p + h / 6.0 * (dp + 2.0 * dp2 + 2.0 * dp3 + dp4)
        dpsi = dp + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if psi > 1.0 and dpsi > 0.0:
            return 1
        if dpsi <= 0.0:
            return 1 if psi >= 1.0 else -1
    return -1


def solve_1d_ignition_shooting(d: float, spec: NonlinearitySpec, tol: float) -> OneDimWave:
    """Front speed and profile of -d psi'' + c psi' = f(psi) by bisection.

    The initial speed bracket is [tol, c_max]; when the reaction term
    violates the premise of the closed-form bound (the discontinuous
    oracle nonlinearity does) the upper end is grown by doubling until it
    overshoots.  |c - c*| <= tol on return.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c_bound = c_max(ModelParams(d=d, D=d, mu=1.0, L=1.0), spec)
    h = 1e-3 * d / c_bound
    x_max = max(200.0 * d / c_bound, 100.0)

    lo = max(tol, 1e-10)
    hi = c_bound
    if _classify(lo, d, spec, h, x_max) != -1:
        raise BracketNotFound(f"lower bracket end c = {lo:.3e} does not undershoot")
    grow = 0
    while _classify(hi, d, spec, h, x_max) != 1:
        hi *= 2.0
        grow += 1
        if grow > 20:
            raise BracketNotFound("no overshooting speed found while doubling the upper bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _classify(mid, d, spec, h, x_max) == 1:
            hi = mid
        else:
            lo = mid
    c_star = 0.5 * (lo + hi)

    xs = [0.0]
    ps = [spec.theta]
    psi, dpsi = spec.theta, c_star * spec.theta / d
    f_start, _ = eval_nonlinearity(math.nextafter(spec.theta, 1.0), spec)
    for k in range(int(x_max / h)):
        p, dp = psi, dpsi
        f1 = f_start if k == 0 else eval_nonlinearity(p, spec)[0]
        a1 = (c_star * dp - f1) / d
        p2, dp2 = p + 0.5 * h * dp, dp + 0.5 * h * a1
        a2 = (c_star * dp2 - eval_nonlinearity(p2, spec)[0]) / d
        p3, dp3 = p + 0.5 * h * dp2, dp + 0.5 * h * a2
        a3 = (c_star * dp3 - eval_nonlinearity(p3, spec)[0]) / d
        p4, dp4 = p + h * dp3, dp + h * a3
        a4 = (c_star * dp4 - eval_nonlinearity(p4, spec)[0]) / d
        psi = p + h / 6.0 * (dp + 2.0 * dp2 + 2.0 * dp3 + dp4)
        dpsi = dp + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if psi <= ps[-1]:
            break  # turn-around of the near-critical trajectory; keep the profile increasing
        xs.append(xs[-1] + h)
        ps.append(min(psi, 1.0))
        if 1.0 - psi < 1e-13 or dpsi <= 0.0:
            break
    return OneDimWave(c=c_star, x=np.array(xs), psi=np.clip(np.array(ps), 0.0, 1.0),
                      theta=spec.theta, d=d)
