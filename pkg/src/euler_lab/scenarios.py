"""Scenario orchestration and report persistence.

Every scenario seeds a bubble family, runs the requested study, and writes
the standard report files into the output directory: frames.csv (diagnostics
time series), norms.json (norm snapshots), keylemma.csv (per-target reports),
summary.json (config echo, fits, invariant pass/fail, timings).  Floats in
CSV use scientific notation with 17 significant digits; booleans are 0/1.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np
from scipy.special import zeta

from . import __version__
from .biotsavart import KernelConfig, curl_roundtrip, divergence_residual
from .config import ExperimentConfig
from .fields import (DimensionContext, GriddedField, GridSpec, HalfPlanePoint,
                     deposit_vorticity)
from .initdata import BubbleParams, initial_vorticity_grid, seed_particles
from .keylemma import origin_limit_identities, verify_key_lemma
from .norms import (NormReport, axial_sobolev_norm, gradient_ld_norm,
                    lower_bound_functional, particle_lorentz_norm, weighted_l2)
from .transport import (default_time_step, diagnostics_frame, evolve,
                        step_rk4)

_CTX3 = DimensionContext.for_dimension(3)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    return f"{float(x):.16e}"


def frame_columns(bubbles: list[int]) -> list[str]:
    cols = ["time"]
    for n in bubbles:
        cols += [f"In_{n}", f"r_inf_{n}", f"r_sup_{n}", f"z_inf_{n}"]
    cols += ["linf_omega", "lorentz_31", "weighted_l2",
             "ordering_ok", "region_ok"]
    return cols


def write_frames_csv(path: Path, frames, bubbles: list[int]):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(frame_columns(bubbles)) + "\n")
        for fr in frames:
            row = [_fmt(fr.time)]
            for n in bubbles:
                row += [_fmt(fr.In[n]), _fmt(fr.r_ratio_inf[n]),
                        _fmt(fr.r_ratio_sup[n]), _fmt(fr.z_ratio_inf[n])]
            row += [_fmt(fr.linf_omega), _fmt(fr.lorentz_31),
                    _fmt(fr.weighted), _fmt(fr.ordering_ok),
                    _fmt(fr.region_ok)]
            fh.write(",".join(row) + "\n")


def _fit_exponent(x, y) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _grid_for(system, pad: float = 1.5, n: int = 96) -> GridSpec:
    active = system.xi != 0.0
    r_lo, r_hi = system.r[active].min(), system.r[active].max()
    z_lo, z_hi = system.z[active].min(), system.z[active].max()
    mr = pad * max(r_hi - r_lo, 1e-3)
    mz = pad * max(z_hi - z_lo, 1e-3)
    return GridSpec(max(r_lo - mr, 1e-6), r_hi + mr,
                    z_lo - mz, z_hi + mz, n, n)


def _resolve_dt(config: ExperimentConfig, system) -> float:
    if config.dt > 0:
        return config.dt
    return default_time_step(system, config.kernel)


def _report_skeleton(config: ExperimentConfig) -> dict:
    return {
        "config": config.to_dict(),
        "version": __version__,
        "timings": {},
    }


def _finish(outdir: Path, summary: dict, t_start: float):
    summary["timings"]["wall_seconds"] = time.time() - t_start
    with open(outdir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)


def horizon(m: int, alpha: float, c1: float, t_cap: float) -> float:
    """Stability-schedule horizon min(t_cap, c1 (1 - alpha) m^{(alpha-1)/2})."""
    return min(t_cap, c1 * (1.0 - alpha) * float(m) ** (0.5 * (alpha - 1.0)))


def run_linf_inflation(config: ExperimentConfig) -> dict:
    """Evolve bubble families over an m sweep and fit the innermost stretching."""
    t0 = time.time()
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _report_skeleton(config)
    ms = config.m_values or [config.bubble.m]
    alpha = config.bubble.alpha
    stretch, linf_series = {}, {}
    for m in ms:
        params = BubbleParams(n0=config.bubble.n0, m=m, alpha=alpha)
        system = seed_particles(params, config.resolution, _CTX3)
        dt = _resolve_dt(config, system)
        t_end = horizon(m, alpha, config.c1, config.t_end)
        final, frames = evolve(system, t_end, dt, config.kernel,
                               cadence=config.cadence)
        sub = outdir if len(ms) == 1 else outdir / f"m_{m}"
        sub.mkdir(parents=True, exist_ok=True)
        write_frames_csv(sub / "frames.csv", frames,
                         sorted(system.bubble_ranges))
        stretch[m] = frames[-1].r_ratio_sup[m]
        linf_series[m] = [fr.linf_omega for fr in frames]
        summary["timings"][f"m_{m}"] = time.time() - t0
    summary["innermost_stretch"] = {str(m): v for m, v in stretch.items()}
    summary["linf_final"] = {str(m): s[-1] for m, s in linf_series.items()}
    summary["linf_monotone"] = {
        str(m): bool(np.all(np.diff(s) > 0)) for m, s in linf_series.items()
    }
    if len(ms) >= 2:
        summary["stretch_vs_m_exponent"] = _fit_exponent(
            ms, [stretch[m] for m in ms])
    _finish(outdir, summary, t0)
    return summary


def run_sobolev_inflation(config: ExperimentConfig) -> dict:
    """Evolve one family and emit the norm-inflation observables."""
    if not 0.5 < config.bubble.alpha < 0.75:
        raise ValueError("sobolev-inflation expects alpha in (1/2, 3/4)")
    t0 = time.time()
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _report_skeleton(config)
    system = seed_particles(config.bubble, config.resolution, _CTX3)
    dt = _resolve_dt(config, system)
    alpha = config.bubble.alpha
    bubbles = sorted(system.bubble_ranges)

    # single evolution pass capturing both diagnostics and particle states
    frames = [diagnostics_frame(system)]
    snapshots = [system.copy()]
    n_steps = 0 if config.t_end == 0 else max(1, round(config.t_end / dt))
    for step in range(1, n_steps + 1):
        system = step_rk4(system, dt, config.kernel)
        if step % config.cadence == 0 or step == n_steps:
            frames.append(diagnostics_frame(system))
            snapshots.append(system.copy())
    write_frames_csv(outdir / "frames.csv", frames, bubbles)

    # companion series: functional, direct axial Sobolev norm, and the
    # per-bubble squeeze observable log(|z|/|z0|) against its predicted
    # integral -int sum_k I_k / |B_d|
    sob_every = max(1, len(frames) // 8)
    times = [fr.time for fr in frames]
    In_sum = np.array([sum(fr.In.values()) for fr in frames])
    predicted = -np.concatenate((
        [0.0],
        np.cumsum(0.5 * (In_sum[1:] + In_sum[:-1]) * np.diff(times)),
    )) / _CTX3.ball_volume
    with open(outdir / "sobolev.csv", "w", encoding="utf-8") as fh:
        cols = ["time", "functional", "weighted_l2", "sobolev_dir_d",
                "predicted_log_squeeze"]
        cols += [f"log_squeeze_{n}" for n in bubbles]
        fh.write(",".join(cols) + "\n")
        norms_out = []
        for k, fr in enumerate(frames):
            state = snapshots[k]
            func = lower_bound_functional(state, alpha)
            if k % sob_every == 0 or k == len(frames) - 1:
                grid = deposit_vorticity(state, _grid_for(state, n=config.grid_n))
                sob = axial_sobolev_norm(grid, 3)
            row = [_fmt(fr.time), _fmt(func), _fmt(fr.weighted), _fmt(sob),
                   _fmt(predicted[k])]
            for n in bubbles:
                idx = state.bubble_indices(n)
                idx = idx[state.xi[idx] != 0.0]
                row.append(_fmt(float(np.mean(
                    np.log(np.abs(state.z[idx]) / np.abs(state.z0[idx]))))))
            fh.write(",".join(row) + "\n")
            norms_out.append({"time": fr.time, "sobolev_dir_d": sob,
                              "weighted": fr.weighted, "functional": func})
    with open(outdir / "norms.json", "w", encoding="utf-8") as fh:
        json.dump(norms_out, fh, indent=2)
    summary["functional_ratio"] = norms_out[-1]["functional"] / norms_out[0]["functional"]
    summary["weighted_ratio"] = norms_out[-1]["weighted"] / norms_out[0]["weighted"]
    summary["invariants"] = {
        "region_ok": all(fr.region_ok for fr in frames),
        "ordering_ok": all(fr.ordering_ok for fr in frames),
    }
    _finish(outdir, summary, t0)
    return summary


def sample_wedge_targets(rng: np.random.Generator, count: int,
                         r_lo: float, r_hi: float) -> list[HalfPlanePoint]:
    """Targets in the wedge r >= z > 0 with log-uniform radii."""
    out = []
    while len(out) < count:
        r = float(np.exp(rng.uniform(np.log(r_lo), np.log(r_hi))))
        z = float(rng.uniform(0.05, 1.0)) * r
        out.append(HalfPlanePoint(r, z))
    return out


def run_key_lemma(config: ExperimentConfig) -> dict:
    """Velocity-ratio verification over wedge targets at two refinements."""
    t0 = time.time()
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _report_skeleton(config)
    rng = np.random.default_rng(config.seed)
    inner = 8.0 ** (-config.bubble.m)
    targets = sample_wedge_targets(rng, 50, 0.05 * inner, 0.5 * inner)

    levels = {}
    for label, res in (("coarse", config.resolution),
                       ("fine", 2 * config.resolution)):
        system = seed_particles(config.bubble, res, _CTX3)
        grid = deposit_vorticity(system, _grid_for(system, n=config.grid_n))
        grad_ld = gradient_ld_norm(grid, 3)
        linf = float(np.max(np.abs(system.xi * system.r0)))
        reports, stats = verify_key_lemma(system, targets, config.kernel,
                                          grad_ld, linf)
        levels[label] = (reports, stats)
        summary[f"{label}_stats"] = stats
    coarse, fine = levels["coarse"][0], levels["fine"][0]
    with open(outdir / "keylemma.csv", "w", encoding="utf-8") as fh:
        fh.write("target_r,target_z,main_term,ur_over_r,ud_over_xd,b1,b2,"
                 "ratio_r,ratio_d,ratio_r_fine,ratio_d_fine\n")
        for rep, repf in zip(coarse, fine):
            fh.write(",".join(_fmt(v) for v in (
                rep.target.r, rep.target.z, rep.main_term, rep.ur_over_r,
                rep.ud_over_xd, rep.b1, rep.b2, rep.ratio_r, rep.ratio_d,
                repf.ratio_r, repf.ratio_d)) + "\n")
    system = seed_particles(config.bubble, config.resolution, _CTX3)
    dr_ur, dd_ud, m_full = origin_limit_identities(
        system, config.kernel, h=0.1 * inner)
    summary["origin"] = {
        "dr_ur": dr_ur,
        "dd_ud": dd_ud,
        "main_term": m_full,
        "ratio_r": dr_ur / (m_full / (2.0 * _CTX3.ball_volume)),
        "ratio_d": dd_ud / (-m_full / _CTX3.ball_volume),
    }
    _finish(outdir, summary, t0)
    return summary


def family_sobolev_sq(n0: int, alpha: float, unit_sq: float) -> float:
    """|Lambda_d^{d/2} omega_0|^2 for the infinite family starting at n0.

    The d/2-order norm is invariant under the 8-adic rescaling between
    bubbles and the bubbles are orthogonal, so the family norm is the
    unit-amplitude single-bubble norm squared times sum_{n >= n0} n^{-2 alpha}
    (a Hurwitz zeta value).
    """
    return unit_sq * float(zeta(2.0 * alpha, n0))


def run_norms_baseline(config: ExperimentConfig) -> dict:
    """Initial-data norm battery over an n0 sweep at fixed alpha."""
    t0 = time.time()
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _report_skeleton(config)
    alpha = config.bubble.alpha
    n0s = config.n0_values or list(range(1, 7))

    base = BubbleParams(n0=1, m=1, alpha=alpha)
    center = base.bubble_center(1)
    sup = base.support_radius(1)
    r_axis = np.linspace(max(center.r - 3 * sup, 0.0), center.r + 3 * sup, 241)
    z_axis = np.linspace(-(center.z + 3 * sup), center.z + 3 * sup, 481)
    rr, zz = np.meshgrid(r_axis, z_axis, indexing="ij")
    grid = GriddedField(r_axis, z_axis, initial_vorticity_grid(base, rr, zz))
    unit_sq = axial_sobolev_norm(grid, 3) ** 2

    reports = {}
    for n0 in n0s:
        fam_sq = family_sobolev_sq(n0, alpha, unit_sq)
        rep = NormReport(
            linf=float(n0) ** (-alpha),
            sobolev_dir_d=float(np.sqrt(fam_sq)),
        )
        params = BubbleParams(n0=n0, m=n0, alpha=alpha)
        sysb = seed_particles(params, config.resolution, _CTX3)
        rep.l1 = float(_CTX3.sphere_area
                       * np.sum(np.abs(sysb.xi * sysb.r0) * sysb.cell_area
                                * sysb.r0))
        for q in config.q_values:
            rep.lorentz[f"3,{q:g}"] = particle_lorentz_norm(sysb, 3.0, q)
        rep.weighted = weighted_l2(sysb)
        reports[n0] = rep
    with open(outdir / "norms.json", "w", encoding="utf-8") as fh:
        json.dump({str(k): v.to_dict() for k, v in reports.items()},
                  fh, indent=2, sort_keys=True)
    summary["tail_exponent_fit"] = _fit_exponent(
        n0s, [reports[n].sobolev_dir_d ** 2 for n in n0s])
    summary["tail_exponent_expected"] = 1.0 - 2.0 * alpha
    summary["linf_exact"] = {str(n): reports[n].linf for n in n0s}
    _finish(outdir, summary, t0)
    return summary


def roundtrip_grid(params: BubbleParams, res: int) -> GridSpec:
    """Grid over a single bubble pair with spacing tied to the particle spacing.

    The cell size stays about 3.2x the particle spacing so the deposited
    reference is smooth, and the extents cover both mirror bubbles with the
    required margin.
    """
    n = params.n0
    cr = 8.0 ** (-n + 1)
    cz = 8.0 ** (-n)
    sup = params.outer_radius * 8.0 ** (-n)
    nr = max(12, (3 * res) // 2)
    nz = (5 * nr) // 2
    return GridSpec(cr - 5.12 * sup, cr + 5.12 * sup,
                    -(cz + 4.8 * sup), cz + 4.8 * sup, nr, nz)


def run_convergence(config: ExperimentConfig) -> dict:
    """Refinement studies: curl round-trip, divergence, RK4 self-convergence."""
    t0 = time.time()
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _report_skeleton(config)
    params = BubbleParams(n0=config.bubble.n0, m=config.bubble.n0,
                          alpha=config.bubble.alpha)

    curl_errs, div_errs = [], []
    for res in (config.resolution, 2 * config.resolution):
        system = seed_particles(params, res, _CTX3)
        spec = roundtrip_grid(params, res)
        _, err = curl_roundtrip(system, spec, config.kernel)
        curl_errs.append(err)
        div_errs.append(divergence_residual(system, spec, config.kernel))
    summary["curl_roundtrip"] = {"errors": curl_errs,
                                 "ratio": curl_errs[0] / curl_errs[1]}
    summary["divergence"] = {"errors": div_errs,
                             "ratio": div_errs[0] / div_errs[1]}

    system = seed_particles(params, config.resolution, _CTX3)
    dt = config.dt if config.dt > 0 else default_time_step(
        system, config.kernel)
    horizon_t = 8 * dt
    positions = {}
    for level, step in enumerate((dt, dt / 2, dt / 4)):
        s = system.copy()
        for _ in range(round(horizon_t / step)):
            s = step_rk4(s, step, config.kernel)
        positions[level] = (s.r.copy(), s.z.copy())
    e1 = float(np.max(np.hypot(positions[0][0] - positions[2][0],
                               positions[0][1] - positions[2][1])))
    e2 = float(np.max(np.hypot(positions[1][0] - positions[2][0],
                               positions[1][1] - positions[2][1])))
    summary["rk4"] = {"coarse_error": e1, "half_error": e2,
                      "ratio": e1 / e2 if e2 > 0 else float("inf")}

    drift = []
    for res in (config.resolution, 2 * config.resolution):
        s = seed_particles(params, res, _CTX3)
        before = particle_lorentz_norm(s, 3.0, 1.0)
        for _ in range(10):
            s = step_rk4(s, dt, config.kernel)
        after = particle_lorentz_norm(s, 3.0, 1.0)
        drift.append(abs(after - before) / before)
    summary["lorentz_drift"] = drift
    _finish(outdir, summary, t0)
    return summary


RUNNERS = {
    "linf-inflation": run_linf_inflation,
    "sobolev-inflation": run_sobolev_inflation,
    "key-lemma": run_key_lemma,
    "norms-baseline": run_norms_baseline,
    "convergence": run_convergence,
}


def run_scenario(config: ExperimentConfig) -> dict:
    return RUNNERS[config.scenario](config)
