"""Main-term and remainder diagnostics for the hyperbolic-flow velocity estimates.

For a target x in the wedge r >= x_d > 0, the radial and axial velocity
ratios are compared against the main term

    M(x) = int_{|y_h| >= 4 r} |y_h| y_d |y|^{-(d+2)} omega(y) dy,

with remainders measured against the critical-norm bounds B1, B2.  The
empirical ratios |error| / B stand in for the non-constructive constant; only
their stability under refinement is asserted, never their value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biotsavart import KernelConfig, velocity_field
from .fields import HalfPlanePoint, ParticleSystem


@dataclass
class KeyLemmaReport:
    """Per-target record of velocity ratios, main term, and remainder bounds."""

    target: HalfPlanePoint
    main_term: float
    ur_over_r: float
    ud_over_xd: float
    b1: float
    b2: float
    ratio_r: float
    ratio_d: float


def main_term(system: ParticleSystem, target: HalfPlanePoint,
              cutoff: float = 4.0) -> float:
    """Discrete M(x): meridian sum over particles with current rho >= cutoff * r."""
    d = system.ctx.d
    mask = (system.xi != 0.0) & (system.r >= cutoff * target.r)
    if not mask.any():
        return 0.0
    rho = system.r[mask]
    zeta = system.z[mask]
    f = rho ** (d - 1) * zeta * (rho ** 2 + zeta ** 2) ** (-(d + 2) / 2) \
        * system.xi[mask]
    return system.ctx.sphere_area * float(np.sum(f * system.weight[mask]))


def _check_wedge(target: HalfPlanePoint):
    if not target.r >= target.z > 0:
        raise ValueError(
            f"target must satisfy r >= z > 0, got (r, z) = ({target.r}, {target.z})"
        )


def remainder_bounds(grad_ld: float, linf: float, d: int,
                     target: HalfPlanePoint) -> tuple[float, float]:
    """(B1, B2) upper bounds from the critical norms of omega at a wedge target."""
    _check_wedge(target)
    log_factor = 1.0 + np.log(target.r / target.z)
    b1 = min(grad_ld, linf)
    b2 = min(log_factor ** ((d - 1) / d) * grad_ld, log_factor * linf)
    return float(b1), float(b2)


def verify_key_lemma(system: ParticleSystem, targets: list[HalfPlanePoint],
                     cfg: KernelConfig, grad_ld: float, linf: float,
                     ) -> tuple[list[KeyLemmaReport], dict]:
    """Per-target reports plus the summary of empirical remainder ratios.

    grad_ld and linf are grid- or particle-based estimates of the critical
    norms of the current vorticity; the caller chooses how to obtain them.
    """
    d = system.ctx.d
    ball = system.ctx.ball_volume
    degenerate = not np.any(system.xi != 0.0)
    for t in targets:
        _check_wedge(t)
    tr = np.array([t.r for t in targets])
    tz = np.array([t.z for t in targets])
    uv = velocity_field(system, tr, tz, cfg)
    reports = []
    for k, t in enumerate(targets):
        m = main_term(system, t)
        ur_over_r = uv[k, 0] / t.r
        ud_over_xd = uv[k, 1] / t.z
        b1, b2 = remainder_bounds(grad_ld, linf, d, t)
        err_r = abs(ur_over_r - m / ((d - 1) * ball))
        err_d = abs(ud_over_xd + m / ball)
        reports.append(KeyLemmaReport(
            target=t, main_term=m, ur_over_r=ur_over_r, ud_over_xd=ud_over_xd,
            b1=b1, b2=b2,
            ratio_r=err_r / b1 if b1 > 0 else 0.0,
            ratio_d=err_d / b2 if b2 > 0 else 0.0,
        ))
    summary = {
        "degenerate": degenerate,
        "max_ratio_r": max((rep.ratio_r for rep in reports), default=0.0),
        "max_ratio_d": max((rep.ratio_d for rep in reports), default=0.0),
    }
    return reports, summary


def origin_limit_identities(system: ParticleSystem, cfg: KernelConfig,
                            h: float) -> tuple[float, float, float]:
    """Richardson-extrapolated d_r u^r(0), d_d u^d(0), and the full-space main term.

    Valid when omega vanishes in a neighborhood of the origin; the caller
    asserts d_r u^r(0) = M / ((d-1)|B_d|) and d_d u^d(0) = -M / |B_d|.
    """
    if h <= 0:
        raise ValueError(f"finite-difference step must be > 0, got {h}")
    tr = np.array([h, 2 * h, 0.0, 0.0, 0.0, 0.0])
    tz = np.array([0.0, 0.0, h, -h, 2 * h, -2 * h])
    uv = velocity_field(system, tr, tz, cfg)
    dr_h = uv[0, 0] / h
    dr_2h = uv[1, 0] / (2 * h)
    dd_h = (uv[2, 1] - uv[3, 1]) / (2 * h)
    dd_2h = (uv[4, 1] - uv[5, 1]) / (4 * h)
    dr_ur = (4 * dr_h - dr_2h) / 3
    dd_ud = (4 * dd_h - dd_2h) / 3
    m_full = main_term(system, HalfPlanePoint(0.0, 0.0))
    return float(dr_ur), float(dd_ud), float(m_full)
