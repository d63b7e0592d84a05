"""Command-line driver: configuration, full runs, resume, and CSV output.

Subcommands
-----------
wave run <config.json>        full continuation run (stages A -> B -> C)
wave resume <ckpt> <config>   continue an interrupted run from a checkpoint
wave profile <ckpt> <out.csv> plot-ready profile slices from a checkpoint
wave symbol-scan <config>     boundary-symbol zero-free scan as CSV
wave oned <config>            1-D shooting speed and profile only

Exit codes: 0 ok, 2 validation, 3 solver, 4 I/O.  The environment
variable WAVE_OUT overrides the configured output directory.  All float
output is formatted with 17 significant digits so identical configs
produce byte-identical path.csv files.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .continuation import (ContinuationOptions, ContinuationRecord, StepControl,
                           continue_exchange, continue_wentzell, embed_one_dim_wave,
                           handoff_to_system, make_record)
from .errors import (ConfigError, ConfigHashMismatch, SchemaMismatch, SolverError,
                     StripWaveError)
from .grid import Grid, build_grid
from .model import ModelParams, NonlinearityKind, NonlinearitySpec
from .residual import HomotopyFamily, WaveState, assemble_residual
from .solver import NewtonOptions, newton_solve, solve_1d_ignition_shooting
from . import analysis

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

PATH_COLUMNS = ("stage", "family_param", "c", "residual_norm", "speed_identity_gap",
                "cmax_margin", "min_psi", "max_psi", "min_dx_psi", "gamma_fit",
                "gamma_pred", "bounds_ok", "monotone_ok", "sandwich_ok", "left_decay_ok")


def fmt_float(v: float) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if v != v:
        return "nan"
    return f"{v:.17g}"


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data: dict) -> str:
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()


# --- configuration -----------------------------------------------------------

@dataclass
class RunConfig:
    params: ModelParams
    nonlinearity: NonlinearitySpec
    grid: Grid
    newton: NewtonOptions
    continuation: ContinuationOptions
    target_stage: str
    shooting_tol: float
    output_dir: str
    checkpoint_every: int
    raw: dict


def default_config_dict(output_dir: str = "waveout") -> dict:
    return {
        "params": {"d": 1.0, "D": 4.0, "mu": 1.0, "L": 1.0},
        "nonlinearity": {"kind": "smooth_cubic", "theta": 0.3},
        "grid": {"x_left": -160.0, "x_right": 80.0, "nx": 961, "ny": 41},
        "newton": {"tol_residual": 1e-10, "max_iters": 50, "damping": 0.5,
                   "min_step": 1e-8},
        "continuation": {"epsilon0": 0.05, "initial_step": 0.1, "min_step": 1e-4,
                         "target_stage": "C"},
        "shooting_tol": 1e-9,
        "output_dir": output_dir,
        "checkpoint_every": 5,
    }


def _field(section: dict, section_name: str, key: str, kind, check=None, check_msg: str = ""):
    if key not in section:
        raise ConfigError(f"{section_name}.{key}: missing")
    value = section[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(f"{section_name}.{key}: expected {kind.__name__}, got {value!r}")
    if check is not None and not check(value):
        raise ConfigError(f"{section_name}.{key}: {check_msg}, got {value!r}")
    return value


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a JSON object")
    known = {"params", "nonlinearity", "grid", "newton", "continuation",
             "shooting_tol", "output_dir", "checkpoint_every"}
    for key in data:
        if key not in known:
            raise ConfigError(f"{key}: unknown field")
    for key in known:
        if key not in data:
            raise ConfigError(f"{key}: missing")

    p = data["params"]
    params = ModelParams(
        d=_field(p, "params", "d", float, lambda v: v > 0 and math.isfinite(v), "must be > 0"),
        D=_field(p, "params", "D", float, lambda v: v > 0 and math.isfinite(v), "must be > 0"),
        mu=_field(p, "params", "mu", float, lambda v: v > 0 and math.isfinite(v), "must be > 0"),
        L=_field(p, "params", "L", float, lambda v: v > 0 and math.isfinite(v), "must be > 0"),
    )
    nl = data["nonlinearity"]
    kind_str = _field(nl, "nonlinearity", "kind", str)
    try:
        kind = NonlinearityKind(kind_str)
    except ValueError:
        raise ConfigError(f"nonlinearity.kind: must be one of "
                          f"{[k.value for k in NonlinearityKind]}, got {kind_str!r}") from None
    spec = NonlinearitySpec(kind=kind, theta=_field(nl, "nonlinearity", "theta", float,
                                                    lambda v: 0 < v < 1, "must lie in (0, 1)"))
    g = data["grid"]
    x_left = _field(g, "grid", "x_left", float, lambda v: v < 0, "must be < 0")
    x_right = _field(g, "grid", "x_right", float, lambda v: v > 0, "must be > 0")
    nx = _field(g, "grid", "nx", int, lambda v: v >= 3, "must be >= 3")
    ny = _field(g, "grid", "ny", int, lambda v: v >= 3, "must be >= 3")
    try:
        grid = build_grid(params, x_left, x_right, nx, ny)
    except StripWaveError as exc:
        raise ConfigError(f"grid: {exc}") from exc

    nw = data["newton"]
    newton = NewtonOptions(
        tol_residual=_field(nw, "newton", "tol_residual", float, lambda v: v > 0, "must be > 0"),
        max_iters=_field(nw, "newton", "max_iters", int, lambda v: v >= 1, "must be >= 1"),
        damping=_field(nw, "newton", "damping", float, lambda v: 0 < v < 1, "must lie in (0, 1)"),
        min_step=_field(nw, "newton", "min_step", float, lambda v: v > 0, "must be > 0"),
    )
    co = data["continuation"]
    target_stage = _field(co, "continuation", "target_stage", str,
                          lambda v: v in ("A", "B", "C"), "must be one of A, B, C")
    cont = ContinuationOptions(
        epsilon0=_field(co, "continuation", "epsilon0", float,
                        lambda v: 0 < v <= 0.1, "must lie in (0, 0.1]"),
        initial_step=_field(co, "continuation", "initial_step", float, lambda v: v > 0, "must be > 0"),
        min_step=_field(co, "continuation", "min_step", float, lambda v: v > 0, "must be > 0"),
    )
    shooting_tol = _field(data, "config", "shooting_tol", float, lambda v: v > 0, "must be > 0")
    output_dir = _field(data, "config", "output_dir", str, lambda v: len(v) > 0, "must be nonempty")
    checkpoint_every = _field(data, "config", "checkpoint_every", int, lambda v: v >= 0, "must be >= 0")
    return RunConfig(params=params, nonlinearity=spec, grid=grid, newton=newton,
                     continuation=cont, target_stage=target_stage, shooting_tol=shooting_tol,
                     output_dir=output_dir, checkpoint_every=checkpoint_every, raw=data)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)


def resolve_output_dir(cfg: RunConfig) -> Path:
    return Path(os.environ.get("WAVE_OUT", cfg.output_dir))


# --- checkpoints --------------------------------------------------------------

def checkpoint_dict(record: ContinuationRecord, grid: Grid, cfg_hash: str,
                    control: StepControl | None) -> dict:
    state = record.state
    ctrl = None
    if control is not None:
        prev = control.prev_state
        ctrl = {
            "step": control.step,
            "prev_parameter": control.prev_parameter,
            "prev_c": None if prev is None else prev.c,
            "prev_psi": None if prev is None else prev.psi.ravel().tolist(),
            "prev_phi": None if prev is None or prev.phi is None else prev.phi.tolist(),
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "stage": record.stage,
        "family": state.family.kind,
        "parameter": state.family.parameter,
        "c": state.c,
        "grid": {"x_left": grid.x_left, "x_right": grid.x_right, "L": grid.L,
                 "nx": grid.nx, "ny": grid.ny},
        "psi": state.psi.ravel().tolist(),
        "phi": None if state.phi is None else state.phi.tolist(),
        "config_hash": cfg_hash,
        "control": ctrl,
    }


def write_checkpoint(path: Path, data: dict) -> None:
    path.write_text(canonical_json(data))


def read_checkpoint(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise OSError(f"cannot read checkpoint {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise OSError(f"checkpoint {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(f"checkpoint schema {data.get('schema_version')!r} "
                             f"is not supported (want {SCHEMA_VERSION})")
    return data


def checkpoint_state(data: dict) -> tuple[WaveState, Grid, StepControl | None]:
    gm = data["grid"]
    grid = Grid(x_left=gm["x_left"], x_right=gm["x_right"], L=gm["L"],
                nx=gm["nx"], ny=gm["ny"])
    family = HomotopyFamily(kind=data["family"], parameter=data["parameter"])
    psi = np.asarray(data["psi"], dtype=float).reshape(grid.ny, grid.nx)
    phi = None if data["phi"] is None else np.asarray(data["phi"], dtype=float)
    state = WaveState(c=data["c"], psi=psi, phi=phi, family=family)
    state.check_consistent(grid)
    control = None
    ctrl = data.get("control")
    if ctrl is not None:
        prev = None
        if ctrl["prev_psi"] is not None:
            prev_psi = np.asarray(ctrl["prev_psi"], dtype=float).reshape(grid.ny, grid.nx)
            prev_phi = None if ctrl["prev_phi"] is None else np.asarray(ctrl["prev_phi"], dtype=float)
            prev = WaveState(c=ctrl["prev_c"], psi=prev_psi, phi=prev_phi,
                             family=family.with_parameter(ctrl["prev_parameter"]))
        control = StepControl(step=ctrl["step"], prev_state=prev,
                              prev_parameter=ctrl["prev_parameter"])
    return state, grid, control


# --- CSV sinks ----------------------------------------------------------------

class PathWriter:
    """Streams path.csv rows and checkpoints as records are accepted."""

    def __init__(self, outdir: Path, cfg: RunConfig, cfg_hash: str) -> None:
        self.outdir = outdir
        self.cfg = cfg
        self.cfg_hash = cfg_hash
        self.count = 0
        self.control: StepControl | None = None
        self.fh = open(outdir / "path.csv", "w")
        self.fh.write(",".join(PATH_COLUMNS) + "\n")
        self.fh.flush()

    def write(self, record: ContinuationRecord) -> None:
        diag = record.diagnostics
        row = [record.stage, fmt_float(record.parameter), fmt_float(record.c),
               fmt_float(record.residual_norm), fmt_float(diag.speed_identity_gap),
               fmt_float(diag.cmax_margin), fmt_float(diag.min_psi), fmt_float(diag.max_psi),
               fmt_float(diag.min_dx_psi), fmt_float(diag.gamma_fit), fmt_float(diag.gamma_pred),
               fmt_float(diag.bounds_ok), fmt_float(diag.monotone_ok),
               fmt_float(diag.sandwich_ok), fmt_float(diag.left_decay_ok)]
        self.fh.write(",".join(row) + "\n")
        self.fh.flush()
        self.count += 1
        every = self.cfg.checkpoint_every
        if every > 0 and self.count % every == 0:
            self.checkpoint(record)

    def checkpoint(self, record: ContinuationRecord) -> Path:
        path = self.outdir / f"ckpt_{self.count:04d}_{record.stage}.json"
        write_checkpoint(path, checkpoint_dict(record, self.cfg.grid, self.cfg_hash, self.control))
        record.checkpoint_ref = str(path)
        return path

    def close(self) -> None:
        self.fh.close()


def _skip_first(sink):
    seen = {"first": True}

    def wrapped(record: ContinuationRecord) -> None:
        if seen["first"]:
            seen["first"] = False
            return
        sink(record)

    return wrapped


def write_profile_files(outdir: Path, record: ContinuationRecord, grid: Grid) -> None:
    tag = f"{record.stage}_{record.parameter:.6g}"
    state = record.state
    with open(outdir / f"profile_{tag}.csv", "w") as fh:
        fh.write("x,y,psi\n")
        for j in range(grid.ny):
            yj = grid.y[j]
            for i in range(grid.nx):
                fh.write(f"{fmt_float(grid.x[i])},{fmt_float(yj)},{fmt_float(state.psi[j, i])}\n")
    if state.phi is not None:
        with open(outdir / f"profile_{tag}_line.csv", "w") as fh:
            fh.write("x,phi\n")
            for i in range(grid.nx):
                fh.write(f"{fmt_float(grid.x[i])},{fmt_float(state.phi[i])}\n")


# --- drivers ------------------------------------------------------------------

def _stage_summary(record: ContinuationRecord) -> dict:
    d = record.diagnostics
    return {
        "parameter": record.parameter,
        "c": record.c,
        "residual_norm": record.residual_norm,
        "bounds_ok": d.bounds_ok,
        "monotone_ok": d.monotone_ok,
        "sandwich_ok": d.sandwich_ok,
        "left_decay_ok": d.left_decay_ok,
        "speed_identity_gap": d.speed_identity_gap,
        "gamma_fit": d.gamma_fit,
        "gamma_pred": d.gamma_pred,
    }


def execute_run(cfg: RunConfig, outdir: Path) -> dict:
    cfg_hash = config_hash(cfg.raw)
    grid, params, spec = cfg.grid, cfg.params, cfg.nonlinearity
    writer = PathWriter(outdir, cfg, cfg_hash)
    summary: dict = {"config_hash": cfg_hash, "stages": {}, "timings_s": {}}
    try:
        t0 = time.perf_counter()
        wave1d = solve_1d_ignition_shooting(params.d, spec, cfg.shooting_tol)
        init = embed_one_dim_wave(wave1d, grid, spec)
        corrected = newton_solve(init, params, spec, grid, cfg.newton)

        writer.control = StepControl(step=cfg.continuation.initial_step)
        path_a = continue_wentzell(corrected.state, params, spec, grid, cfg.newton,
                                   target_s=1.0, opts=cfg.continuation, sink=writer.write,
                                   control=writer.control,
                                   start_residual=corrected.residual_norm)
        writer.checkpoint(path_a.records[-1])
        summary["stages"]["A"] = _stage_summary(path_a.records[-1])
        summary["timings_s"]["A"] = time.perf_counter() - t0
        summary["c_one_dim"] = wave1d.c

        if cfg.target_stage != "A":
            t0 = time.perf_counter()
            predictor = handoff_to_system(path_a.final_state, cfg.continuation.epsilon0,
                                          params, grid)
            corrected_b = newton_solve(predictor, params, spec, grid, cfg.newton)
            writer.control = StepControl(step=cfg.continuation.initial_step)
            record_b = make_record("B", corrected_b.state, corrected_b.residual_norm,
                                   params, spec, grid)
            writer.write(record_b)
            writer.checkpoint(record_b)
            summary["stages"]["B"] = _stage_summary(record_b)
            summary["timings_s"]["B"] = time.perf_counter() - t0

            if cfg.target_stage != "B":
                t0 = time.perf_counter()
                path_c = continue_exchange(corrected_b.state, params, spec, grid, cfg.newton,
                                           target_eps=1.0, opts=cfg.continuation,
                                           sink=_skip_first(writer.write),
                                           control=writer.control, stage="C",
                                           start_residual=corrected_b.residual_norm)
                writer.checkpoint(path_c.records[-1])
                summary["stages"]["C"] = _stage_summary(path_c.records[-1])
                summary["timings_s"]["C"] = time.perf_counter() - t0
                write_profile_files(outdir, path_c.records[-1], grid)
            write_profile_files(outdir, record_b, grid)
        write_profile_files(outdir, path_a.records[-1], grid)
    finally:
        writer.close()
    (outdir / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2))
    return summary


def execute_resume(cfg: RunConfig, outdir: Path, ckpt: dict, force: bool) -> dict:
    cfg_hash = config_hash(cfg.raw)
    if ckpt["config_hash"] != cfg_hash and not force:
        raise ConfigHashMismatch("checkpoint was produced by a different configuration "
                                 "(rerun with --force to override)")
    state, ck_grid, control = checkpoint_state(ckpt)
    grid, params, spec = cfg.grid, cfg.params, cfg.nonlinearity
    if (ck_grid.nx, ck_grid.ny) != (grid.nx, grid.ny) or \
            (ck_grid.x_left, ck_grid.x_right, ck_grid.L) != (grid.x_left, grid.x_right, grid.L):
        raise ConfigHashMismatch("checkpoint grid does not match the configuration grid")

    start_residual = float(np.abs(assemble_residual(state, params, spec, grid)).max())
    writer = PathWriter(outdir, cfg, cfg_hash)
    summary: dict = {"config_hash": cfg_hash, "stages": {}, "timings_s": {},
                     "resumed_from": {"stage": ckpt["stage"], "parameter": ckpt["parameter"]}}
    try:
        stage = ckpt["stage"]
        if stage == "A":
            t0 = time.perf_counter()
            writer.control = control if control is not None else StepControl(
                step=cfg.continuation.initial_step)
            path_a = continue_wentzell(state, params, spec, grid, cfg.newton, target_s=1.0,
                                       opts=cfg.continuation, sink=_skip_first(writer.write),
                                       control=writer.control, start_residual=start_residual)
            writer.checkpoint(path_a.records[-1])
            summary["stages"]["A"] = _stage_summary(path_a.records[-1])
            summary["timings_s"]["A"] = time.perf_counter() - t0
            state = path_a.final_state
            control = None

        if cfg.target_stage != "A":
            if stage == "A":
                t0 = time.perf_counter()
                predictor = handoff_to_system(state, cfg.continuation.epsilon0, params, grid)
                corrected_b = newton_solve(predictor, params, spec, grid, cfg.newton)
                writer.control = StepControl(step=cfg.continuation.initial_step)
                record_b = make_record("B", corrected_b.state, corrected_b.residual_norm,
                                       params, spec, grid)
                writer.write(record_b)
                writer.checkpoint(record_b)
                summary["stages"]["B"] = _stage_summary(record_b)
                summary["timings_s"]["B"] = time.perf_counter() - t0
                state = corrected_b.state
                start_residual = corrected_b.residual_norm
                control = writer.control

            if cfg.target_stage == "C":
                t0 = time.perf_counter()
                writer.control = control if control is not None else StepControl(
                    step=cfg.continuation.initial_step)
                path_c = continue_exchange(state, params, spec, grid, cfg.newton,
                                           target_eps=1.0, opts=cfg.continuation,
                                           sink=_skip_first(writer.write),
                                           control=writer.control, stage="C",
                                           start_residual=start_residual)
                writer.checkpoint(path_c.records[-1])
                summary["stages"]["C"] = _stage_summary(path_c.records[-1])
                summary["timings_s"]["C"] = time.perf_counter() - t0
                write_profile_files(outdir, path_c.records[-1], grid)
    finally:
        writer.close()
    (outdir / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2))
    return summary


def emit_profile(checkpoint_path, out_path) -> None:
    """Plot-ready slices psi(x, 0), psi(x, -L/2), psi(x, -L), phi(x)."""
    data = read_checkpoint(checkpoint_path)
    state, grid, _ = checkpoint_state(data)
    mid = (grid.ny - 1) // 2
    with open(out_path, "w") as fh:
        fh.write("x,psi_top,psi_mid,psi_bottom,phi\n")
        for i in range(grid.nx):
            phi_txt = "" if state.phi is None else fmt_float(state.phi[i])
            fh.write(f"{fmt_float(grid.x[i])},{fmt_float(state.psi[-1, i])},"
                     f"{fmt_float(state.psi[mid, i])},{fmt_float(state.psi[0, i])},{phi_txt}\n")


def _write_error(outdir: Path | None, exc: Exception, exit_code: int) -> None:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": exit_code}
    if outdir is not None:
        try:
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / "error.json").write_text(json.dumps(record, sort_keys=True, indent=2))
        except OSError:
            pass
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


# --- subcommand entry points --------------------------------------------------

def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        _write_error(None, exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    outdir = resolve_output_dir(cfg)
    if args.sweep:
        return _run_sweep(cfg, outdir, args.sweep)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        summary = execute_run(cfg, outdir)
    except StripWaveError as exc:
        _write_error(outdir, exc, EXIT_SOLVER)
        return EXIT_SOLVER
    except OSError as exc:
        _write_error(None, exc, EXIT_IO)
        return EXIT_IO
    final_stage = max(summary["stages"])
    print(f"done: stage {final_stage} c = {fmt_float(summary['stages'][final_stage]['c'])} "
          f"(artifacts in {outdir})")
    return EXIT_OK


def _sweep_worker(payload: tuple[dict, str]) -> int:
    data, outdir = payload
    try:
        cfg = config_from_dict(data)
        Path(outdir).mkdir(parents=True, exist_ok=True)
        execute_run(cfg, Path(outdir))
        return EXIT_OK
    except ConfigError as exc:
        _write_error(Path(outdir), exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    except StripWaveError as exc:
        _write_error(Path(outdir), exc, EXIT_SOLVER)
        return EXIT_SOLVER
    except OSError:
        return EXIT_IO


def _run_sweep(cfg: RunConfig, outdir: Path, sweep: str) -> int:
    try:
        name, _, values_txt = sweep.partition("=")
        if name != "D" or not values_txt:
            raise ConfigError("--sweep: only 'D=v1,v2,...' sweeps are supported")
        values = [float(v) for v in values_txt.split(",")]
    except ValueError:
        _write_error(None, ConfigError(f"--sweep: cannot parse values in {sweep!r}"),
                     EXIT_VALIDATION)
        return EXIT_VALIDATION
    jobs = []
    for v in values:
        data = json.loads(canonical_json(cfg.raw))
        data["params"]["D"] = v
        sub = outdir / f"D_{v:g}"
        data["output_dir"] = str(sub)
        jobs.append((data, str(sub)))
    workers = min(len(jobs), os.cpu_count() or 1)
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        codes = list(pool.map(_sweep_worker, jobs))
    for v, code in zip(values, codes):
        print(f"D = {v:g}: exit {code}")
    return max(codes)


def cmd_resume(args) -> int:
    try:
        cfg = load_config(args.config)
        ckpt = read_checkpoint(args.checkpoint)
    except (ConfigError, SchemaMismatch) as exc:
        _write_error(None, exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    except OSError as exc:
        _write_error(None, exc, EXIT_IO)
        return EXIT_IO
    outdir = resolve_output_dir(cfg)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        summary = execute_resume(cfg, outdir, ckpt, args.force)
    except ConfigHashMismatch as exc:
        _write_error(outdir, exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    except StripWaveError as exc:
        _write_error(outdir, exc, EXIT_SOLVER)
        return EXIT_SOLVER
    except OSError as exc:
        _write_error(None, exc, EXIT_IO)
        return EXIT_IO
    print(f"resumed from {args.checkpoint} (artifacts in {outdir})")
    return EXIT_OK


def cmd_profile(args) -> int:
    try:
        emit_profile(args.checkpoint, args.out)
    except SchemaMismatch as exc:
        _write_error(None, exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    except (OSError, KeyError, ValueError) as exc:
        _write_error(None, exc, EXIT_IO)
        return EXIT_IO
    return EXIT_OK


def cmd_symbol_scan(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        _write_error(None, exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    table = analysis.symbol_scan_table(cfg.params, args.epsilon, args.c0, args.c1,
                                       args.xi_max, args.n)
    out = Path(args.out) if args.out else resolve_output_dir(cfg) / "symbol_scan.csv"
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w") as fh:
            fh.write("xi,re_F,im_F,abs_F\n")
            for row in table:
                fh.write(",".join(fmt_float(v) for v in row) + "\n")
    except OSError as exc:
        _write_error(None, exc, EXIT_IO)
        return EXIT_IO
    print(f"min |F| = {fmt_float(float(table[:, 3].min()))} over {args.n} frequencies "
          f"in [-{args.xi_max:g}, {args.xi_max:g}] -> {out}")
    return EXIT_OK


def cmd_oned(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        _write_error(None, exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    try:
        wave = solve_1d_ignition_shooting(cfg.params.d, cfg.nonlinearity, cfg.shooting_tol)
    except StripWaveError as exc:
        _write_error(None, exc, EXIT_SOLVER)
        return EXIT_SOLVER
    print(f"c = {fmt_float(wave.c)}")
    if args.out:
        x_tail = np.linspace(-8.0 * cfg.params.d / wave.c, 0.0, 200, endpoint=False)
        xs = np.concatenate([x_tail, wave.x])
        try:
            with open(args.out, "w") as fh:
                fh.write("x,psi\n")
                for xv, pv in zip(xs, wave.evaluate(xs)):
                    fh.write(f"{fmt_float(float(xv))},{fmt_float(float(pv))}\n")
        except OSError as exc:
            _write_error(None, exc, EXIT_IO)
            return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wave",
                                     description="Travelling-wave continuation for a "
                                                 "reaction-diffusion strip coupled to a line "
                                                 "of fast diffusion")
    parser.add_argument("--verbose", action="store_true", help="log continuation progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full continuation run from a JSON config")
    p.add_argument("config")
    p.add_argument("--sweep", help="e.g. D=1,2,4: independent runs in subdirectories")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("resume", help="continue from a checkpoint")
    p.add_argument("checkpoint")
    p.add_argument("config")
    p.add_argument("--force", action="store_true", help="ignore config hash mismatch")
    p.set_defaults(func=cmd_resume)

    p = sub.add_parser("profile", help="emit plot-ready profile slices from a checkpoint")
    p.add_argument("checkpoint")
    p.add_argument("out")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("symbol-scan", help="scan the boundary symbol denominator")
    p.add_argument("config")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--c0", type=float, default=1.0)
    p.add_argument("--c1", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=50.0, dest="xi_max")
    p.add_argument("--n", type=int, default=10001)
    p.add_argument("--out")
    p.set_defaults(func=cmd_symbol_scan)

    p = sub.add_parser("oned", help="1-D shooting speed and profile only")
    p.add_argument("config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oned)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
