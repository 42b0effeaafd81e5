"""Time integration of the particle flow and the per-bubble diagnostics.

Particles move with the self-induced velocity (classical RK4, velocity
recomputed from the particle configuration at every stage); the transported
density xi and the quadrature weights never change, so the Cauchy formula
holds by construction and conserved-integral drift measures integrator error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .biotsavart import KernelConfig
from .fields import ParticleSystem
from .initdata import BubbleParams
from .norms import particle_lorentz_norm, weighted_l2


@dataclass
class DiagnosticsFrame:
    """Per-bubble flow diagnostics at one instant."""

    time: float
    In: dict[int, float]
    r_ratio_inf: dict[int, float]
    r_ratio_sup: dict[int, float]
    z_ratio_inf: dict[int, float]
    z_ratio_sup: dict[int, float]
    linf_omega: float
    lorentz_31: float
    weighted: float
    ordering_ok: bool
    region_ok: bool


def _self_velocity(system: ParticleSystem, r: np.ndarray, z: np.ndarray,
                   cfg: KernelConfig, delta2: np.ndarray,
                   cos_nodes: np.ndarray) -> np.ndarray:
    omega = system.xi * r ** (system.ctx.d - 2)
    out = np.empty((len(r), 2))
    kernels.velocity_direct(
        r, z, r, z, np.ascontiguousarray(system.cell_area), omega,
        delta2, cos_nodes, out,
    )
    return out


def step_rk4(system: ParticleSystem, dt: float,
             cfg: KernelConfig) -> ParticleSystem:
    """One classical Runge-Kutta step of every particle position."""
    if system.ctx.d != 3:
        raise ValueError("transport requires the d = 3 velocity solver")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    delta2 = np.ascontiguousarray(
        cfg.delta_reg ** 2 + (cfg.delta_scale ** 2) * system.cell_area)
    cos_nodes = cfg.cos_nodes()
    r0, z0 = system.r, system.z
    k1 = _self_velocity(system, r0, z0, cfg, delta2, cos_nodes)
    k2 = _self_velocity(system, r0 + 0.5 * dt * k1[:, 0],
                        z0 + 0.5 * dt * k1[:, 1], cfg, delta2, cos_nodes)
    k3 = _self_velocity(system, r0 + 0.5 * dt * k2[:, 0],
                        z0 + 0.5 * dt * k2[:, 1], cfg, delta2, cos_nodes)
    k4 = _self_velocity(system, r0 + dt * k3[:, 0],
                        z0 + dt * k3[:, 1], cfg, delta2, cos_nodes)
    out = system.copy()
    out.r = r0 + (dt / 6.0) * (k1[:, 0] + 2 * k2[:, 0] + 2 * k3[:, 0] + k4[:, 0])
    out.z = z0 + (dt / 6.0) * (k1[:, 1] + 2 * k2[:, 1] + 2 * k3[:, 1] + k4[:, 1])
    out.time = system.time + dt
    if not (np.all(np.isfinite(out.r)) and np.all(np.isfinite(out.z))):
        raise FloatingPointError("particle position became non-finite during step")
    return out


def compute_In(system: ParticleSystem, n: int) -> float:
    """Main-term contribution of bubble n, summed over its upper-half particles."""
    if n not in system.bubble_ranges:
        raise KeyError(f"unknown bubble index {n}")
    d = system.ctx.d
    idx = system.bubble_indices(n)
    idx = idx[(system.xi[idx] != 0.0) & (system.z0[idx] > 0.0)]
    if len(idx) == 0:
        return 0.0
    rho = system.r[idx]
    zeta = np.abs(system.z[idx])
    f = rho ** (d - 1) * zeta * (rho ** 2 + zeta ** 2) ** (-(d + 2) / 2) \
        * np.abs(system.xi[idx])
    return system.ctx.sphere_area * float(np.sum(f * system.weight[idx]))


def bubble_timescales(params: BubbleParams, T: float, c1: float) -> dict[int, float]:
    """Per-bubble stability horizon min(T, c1 (1 - alpha) n^(alpha - 1))."""
    if c1 <= 0:
        raise ValueError(f"c1 must be > 0, got {c1}")
    return {
        n: min(T, c1 * (1.0 - params.alpha) * float(n) ** (-1.0 + params.alpha))
        for n in range(params.n0, params.m + 1)
    }


def diagnostics_frame(system: ParticleSystem,
                      region_grace: float = 1e-6) -> DiagnosticsFrame:
    """Snapshot of all per-bubble extent ratios and global invariants."""
    d = system.ctx.d
    In, r_inf, r_sup, z_inf, z_sup = {}, {}, {}, {}, {}
    bubbles = sorted(system.bubble_ranges)
    for n in bubbles:
        idx = system.bubble_indices(n)
        idx = idx[system.xi[idx] != 0.0]
        ratios_r = system.r[idx] / system.r0[idx]
        ratios_z = np.abs(system.z0[idx]) / np.abs(system.z[idx])
        r_inf[n] = float(np.min(ratios_r))
        r_sup[n] = float(np.max(ratios_r))
        z_inf[n] = float(np.min(ratios_z))
        z_sup[n] = float(np.max(ratios_z))
        In[n] = compute_In(system, n)
    ordering_ok = True
    for n in bubbles:
        idx = system.bubble_indices(n)
        idx = idx[system.xi[idx] != 0.0]
        lo_n, hi_n = np.min(system.r[idx]), np.max(system.r[idx])
        if hi_n > 4.0 * lo_n:
            ordering_ok = False
        if n + 1 in system.bubble_ranges:
            jdx = system.bubble_indices(n + 1)
            jdx = jdx[system.xi[jdx] != 0.0]
            if 4.0 * np.max(system.r[jdx]) > lo_n:
                ordering_ok = False
    active = system.xi != 0.0
    region_ok = bool(np.all(
        system.r[active] >= np.abs(system.z[active]) * (1.0 - region_grace)))
    omega = np.abs(system.xi) * system.r ** (d - 2)
    return DiagnosticsFrame(
        time=system.time,
        In=In,
        r_ratio_inf=r_inf, r_ratio_sup=r_sup,
        z_ratio_inf=z_inf, z_ratio_sup=z_sup,
        linf_omega=float(np.max(omega)) if len(omega) else 0.0,
        lorentz_31=particle_lorentz_norm(system, 3.0, 1.0)
        if d == 3 else 0.0,
        weighted=weighted_l2(system) if d == 3 else 0.0,
        ordering_ok=ordering_ok,
        region_ok=region_ok,
    )


def evolve(system: ParticleSystem, t_end: float, dt: float, cfg: KernelConfig,
           observer=None, cadence: int = 10,
           region_grace: float = 1e-6) -> tuple[ParticleSystem, list[DiagnosticsFrame]]:
    """Advance to t_end with fixed-step RK4, emitting diagnostics frames.

    Frames are recorded at t = 0, every ``cadence`` steps, and at the final
    time; ``observer`` (if given) is called with each frame as it is emitted.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    frames = []

    def emit(s):
        frame = diagnostics_frame(s, region_grace)
        frames.append(frame)
        if observer is not None:
            observer(frame)

    emit(system)
    if t_end == 0:
        return system, frames
    n_steps = max(1, round(t_end / dt))
    for step in range(1, n_steps + 1):
        system = step_rk4(system, dt, cfg)
        if step % cadence == 0 or step == n_steps:
            emit(system)
    return system, frames


def stability_check(frames: list[DiagnosticsFrame], params: BubbleParams,
                    c1: float, T: float,
                    tolerance_factor: float = 2.0) -> dict[int, bool]:
    """Whether each bubble kept factor-``tolerance_factor`` extents up to its timescale."""
    horizons = bubble_timescales(params, T, c1)
    out = {}
    for n, t_n in horizons.items():
        ok = True
        for frame in frames:
            if frame.time > t_n or n not in frame.r_ratio_inf:
                continue
            if (frame.r_ratio_inf[n] < 1.0 / tolerance_factor
                    or frame.r_ratio_sup[n] > tolerance_factor
                    or frame.z_ratio_inf[n] < 1.0 / tolerance_factor
                    or frame.z_ratio_sup[n] > tolerance_factor):
                ok = False
        out[n] = ok
    return out


def default_time_step(system: ParticleSystem, cfg: KernelConfig,
                      safety: float = 10.0) -> float:
    """Per-bubble advective step: min over bubbles of scale / (safety * max |u|)."""
    from .biotsavart import velocity_field

    dt = np.inf
    for n in sorted(system.bubble_ranges):
        idx = system.bubble_indices(n)
        idx = idx[system.xi[idx] != 0.0]
        if len(idx) == 0:
            continue
        uv = velocity_field(system, system.r[idx], system.z[idx], cfg)
        umax = float(np.max(np.hypot(uv[:, 0], uv[:, 1])))
        if umax > 0:
            dt = min(dt, 8.0 ** (-n) / (safety * umax))
    if not np.isfinite(dt):
        raise ValueError("cannot size a time step for a zero-velocity system")
    return dt
