"""Homotopy driver: Neumann strip -> Wentzell -> exchange system.

Stage A raises the Wentzell strength s from 0 to 1 starting from the
y-uniform embedding of the 1-D front.  Stage B switches families at a
small exchange parameter eps0 using the first-order predictor
mu*phi = psi(.,0) + eps0 * d * dpsi/dy(.,0) (the exchange condition
solved for phi at first order in eps).  Stage C raises eps from eps0
to 1.

Natural-parameter continuation with a secant predictor is sufficient:
the wave speed is a single-valued function of the stage parameter (no
folds), so a Newton failure at the minimum step aborts loudly instead
of triggering arclength machinery.  Steps halve on failure and grow by
1.5x when Newton converges in at most `growth_iters` iterations; an
accepted step whose speed jumps by more than `speed_jump_frac`
relative is rejected and retried with half the step, guarding against
branch jumping.

Every accepted record carries a full diagnostics report, and the
decay-based extent rule (x_right >= 8/gamma, |x_left| >= 8 max(d,D)/c)
is re-checked as c and gamma evolve.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .diagnostics import DiagnosticsReport, run_diagnostics
from .errors import (ExtentTooSmall, ParameterNotMonotone, SolverError, StepCollapse,
                     WrongFamily)
from .grid import Grid
from .model import ModelParams, NonlinearitySpec
from .residual import HomotopyFamily, WaveState, state_to_vector, vector_to_state
from .solver import NewtonOptions, OneDimWave, newton_solve

logger = logging.getLogger(__name__)

RecordSink = Callable[["ContinuationRecord"], None]


@dataclass(frozen=True)
class ContinuationOptions:
    initial_step: float = 0.1
    min_step: float = 1e-4
    growth_factor: float = 1.5
    growth_iters: int = 4
    speed_jump_frac: float = 0.2
    epsilon0: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon0 <= 0.1:
            raise ValueError(f"epsilon0 must lie in (0, 0.1], got {self.epsilon0}")
        if self.initial_step <= 0 or self.min_step <= 0:
            raise ValueError("continuation steps must be positive")


@dataclass
class ContinuationRecord:
    stage: str
    family: HomotopyFamily
    c: float
    residual_norm: float
    diagnostics: DiagnosticsReport
    state: WaveState
    checkpoint_ref: str | None = None

    @property
    def parameter(self) -> float:
        return self.family.parameter


@dataclass
class ContinuationPath:
    records: list[ContinuationRecord] = field(default_factory=list)

    @property
    def final_state(self) -> WaveState:
        return self.records[-1].state

    @property
    def parameters(self) -> list[float]:
        return [r.parameter for r in self.records]

    @property
    def speeds(self) -> list[float]:
        return [r.c for r in self.records]


@dataclass
class StepControl:
    """Adaptive-step state, checkpointable for exact resume."""

    step: float
    prev_state: WaveState | None = None
    prev_parameter: float | None = None


def embed_one_dim_wave(wave: OneDimWave, grid: Grid, spec: NonlinearitySpec) -> WaveState:
    """y-uniform embedding of the 1-D front, pre-translated so the
    anchor column already satisfies the phase condition."""
    target = (1.0 + spec.theta) / 2.0
    x_star = float(np.interp(target, wave.psi, wave.x))
    row = wave.evaluate(grid.x + x_star)
    psi = np.tile(row, (grid.ny, 1))
    return WaveState(c=wave.c, psi=psi, phi=None, family=HomotopyFamily.wentzell(0.0))


def handoff_to_system(wentzell_state: WaveState, epsilon0: float, params: ModelParams,
                      grid: Grid) -> WaveState:
    """First-order exchange predictor from a converged Wentzell(1) state.

    Keeps psi and c; sets mu*phi = psi(.,0) + eps0 * d * dpsi/dy(.,0)
    with the same one-sided top stencil the residual uses.  The result
    is a predictor, not a solution; Newton-correct it at exchange(eps0).
    """
    if not wentzell_state.family.is_wentzell:
        raise WrongFamily("handoff expects a Wentzell-family state")
    if not 0.0 < epsilon0 <= 0.1:
        raise ValueError(f"epsilon0 must lie in (0, 0.1], got {epsilon0}")
    psi = wentzell_state.psi
    dy_top = (3.0 * psi[-1, :] - 4.0 * psi[-2, :] + psi[-3, :]) / (2.0 * grid.hy)
    phi = (psi[-1, :] + epsilon0 * params.d * dy_top) / params.mu
    return WaveState(c=wentzell_state.c, psi=psi.copy(), phi=phi,
                     family=HomotopyFamily.exchange(epsilon0))


def check_extents(grid: Grid, params: ModelParams, c: float, gamma_pred: float) -> None:
    """Decay-based adequacy rule; gamma_pred may be NaN (check skipped)."""
    left_need = 8.0 * max(params.d, params.D) / c
    if abs(grid.x_left) < left_need:
        raise ExtentTooSmall(f"|x_left| = {abs(grid.x_left)} < {left_need:.2f} = 8 max(d,D)/c")
    if math.isfinite(gamma_pred) and gamma_pred > 0:
        right_need = 8.0 / gamma_pred
        if grid.x_right < right_need:
            raise ExtentTooSmall(f"x_right = {grid.x_right} < {right_need:.2f} = 8/gamma")


def make_record(stage: str, state: WaveState, residual_norm: float, params: ModelParams,
                spec: NonlinearitySpec, grid: Grid) -> ContinuationRecord:
    diag = run_diagnostics(state, params, spec, grid)
    check_extents(grid, params, state.c, diag.gamma_pred)
    return ContinuationRecord(stage=stage, family=state.family, c=state.c,
                              residual_norm=residual_norm, diagnostics=diag, state=state)


def _march(start: WaveState, params: ModelParams, spec: NonlinearitySpec, grid: Grid,
           newton_opts: NewtonOptions, opts: ContinuationOptions, target: float,
           stage: str, sink: RecordSink | None, control: StepControl | None,
           start_residual: float) -> ContinuationPath:
    param = start.family.parameter
    if target < param - 1e-14:
        raise ParameterNotMonotone(f"target {target} is below current parameter {param}")

    path = ContinuationPath()

    def accept(rec: ContinuationRecord) -> None:
        path.records.append(rec)
        if sink is not None:
            sink(rec)

    accept(make_record(stage, start, start_residual, params, spec, grid))
    if target <= param + 1e-14:
        return path

    if control is None:
        control = StepControl(step=opts.initial_step)
    state = start
    u = state_to_vector(state, grid)
    if control.prev_state is not None:
        u_prev = state_to_vector(control.prev_state, grid)
        param_prev = control.prev_parameter
    else:
        u_prev, param_prev = None, None

    while param < target - 1e-14:
        trial = min(param + control.step, target)
        family_trial = state.family.with_parameter(trial)
        if u_prev is not None and param != param_prev:
            factor = (trial - param) / (param - param_prev)
            u_pred = u + factor * (u - u_prev)
        else:
            u_pred = u.copy()
        pred_state = vector_to_state(u_pred, grid, family_trial)
        failed = None
        try:
            result = newton_solve(pred_state, params, spec, grid, newton_opts)
            if abs(result.state.c - state.c) > opts.speed_jump_frac * abs(state.c):
                failed = (f"speed jump {state.c:.6f} -> {result.state.c:.6f} "
                          f"at {stage} parameter {trial:.6f}")
        except SolverError as exc:
            failed = str(exc)
        if failed is not None:
            control.step /= 2.0
            logger.info("step rejected (%s); retrying with step %.3g", failed, control.step)
            if control.step < opts.min_step:
                raise StepCollapse(f"continuation step below {opts.min_step} at "
                                   f"{stage} parameter {param:.6f}: {failed}")
            continue
        u_prev, param_prev = u, param
        u = state_to_vector(result.state, grid)
        state, param = result.state, trial
        control.prev_state = vector_to_state(u_prev, grid, state.family.with_parameter(param_prev))
        control.prev_parameter = param_prev
        # grow before emitting so a checkpoint taken at this record stores
        # the step the very next trial will use (exact resume)
        if result.iterations <= opts.growth_iters:
            control.step *= opts.growth_factor
        accept(make_record(stage, state, result.residual_norm, params, spec, grid))
        logger.info("%s parameter %.6f: c = %.8f (%d iterations)", stage, param, state.c,
                    result.iterations)
    return path


def continue_wentzell(start: WaveState, params: ModelParams, spec: NonlinearitySpec,
                      grid: Grid, newton_opts: NewtonOptions, target_s: float,
                      opts: ContinuationOptions = ContinuationOptions(),
                      sink: RecordSink | None = None,
                      control: StepControl | None = None,
                      stage: str = "A",
                      start_residual: float = 0.0) -> ContinuationPath:
    """March the Wentzell strength from the start state's s up to target_s."""
    if not start.family.is_wentzell:
        raise WrongFamily("continue_wentzell needs a Wentzell-family start")
    return _march(start, params, spec, grid, newton_opts, opts, target_s, stage, sink,
                  control, start_residual)


def continue_exchange(start: WaveState, params: ModelParams, spec: NonlinearitySpec,
                      grid: Grid, newton_opts: NewtonOptions, target_eps: float,
                      opts: ContinuationOptions = ContinuationOptions(),
                      sink: RecordSink | None = None,
                      control: StepControl | None = None,
                      stage: str = "C",
                      start_residual: float = 0.0) -> ContinuationPath:
    """March the exchange parameter from the start state's eps up to target_eps."""
    if not start.family.is_exchange:
        raise WrongFamily("continue_exchange needs an exchange-family start")
    return _march(start, params, spec, grid, newton_opts, opts, target_eps, stage, sink,
                  control, start_residual)
