"""Multi-bubble initial vorticity family and its particle sampling.

The data is a weighted sum of bubble pairs: bubble n is a smooth bump pair of
amplitude n^(-alpha), odd in z, centered at (8^{-n+1}, +-8^{-n}) with support
radius 8^{-n}/8.  Supports are pairwise disjoint by the 8-adic scaling, every
support point satisfies r >= 4|z|, and the whole field vanishes near the axis
and near the plane z = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import DimensionContext, HalfPlanePoint, ParticleSystem

INNER_RADIUS = 1.0 / 32.0
OUTER_RADIUS = 1.0 / 8.0


@dataclass(frozen=True)
class BubbleParams:
    """Parameters of the bubble family: index window [n0, m] and decay exponent."""

    n0: int
    m: int
    alpha: float
    inner_radius: float = INNER_RADIUS
    outer_radius: float = OUTER_RADIUS

    def __post_init__(self):
        if self.n0 < 1:
            raise ValueError(f"n0 must be >= 1, got {self.n0}")
        if self.m < self.n0:
            raise ValueError(f"need m >= n0, got n0={self.n0}, m={self.m}")
        if not 0.0 < self.alpha < 0.75:
            raise ValueError(f"alpha must lie in (0, 3/4), got {self.alpha}")
        if not 0.0 < self.inner_radius < self.outer_radius:
            raise ValueError("need 0 < inner_radius < outer_radius")

    def amplitude(self, n: int) -> float:
        return float(n) ** (-self.alpha)

    def bubble_center(self, n: int, sign: int = +1) -> HalfPlanePoint:
        return HalfPlanePoint(8.0 ** (-n + 1), sign * 8.0 ** (-n))

    def support_radius(self, n: int) -> float:
        return self.outer_radius * 8.0 ** (-n)


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        h0 = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        h1 = np.where(1 - t > 0, np.exp(-1.0 / np.maximum(1 - t, 1e-300)), 0.0)
    out = np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, h0 / (h0 + h1)))
    return out


def bump_phi(p, inner_radius: float = INNER_RADIUS,
             outer_radius: float = OUTER_RADIUS) -> np.ndarray:
    """Radial smooth bump: 1 inside |p| <= inner_radius, 0 outside outer_radius.

    Accepts a single 2-vector or an (..., 2) array of points.
    """
    p = np.asarray(p, dtype=np.float64)
    rho = np.sqrt(np.sum(p * p, axis=-1))
    t = (outer_radius - rho) / (outer_radius - inner_radius)
    out = _smooth_step(t)
    out = np.where(rho <= inner_radius, 1.0, out)
    out = np.where(rho >= outer_radius, 0.0, out)
    return out if out.ndim else float(out)


def bubble_vorticity(n: int, p: HalfPlanePoint | tuple[float, float],
                     params: BubbleParams | None = None) -> float:
    """Unweighted n-th bubble pair at meridian point p (odd in z)."""
    if n < 1:
        raise ValueError(f"bubble index must be >= 1, got {n}")
    inner = params.inner_radius if params else INNER_RADIUS
    outer = params.outer_radius if params else OUTER_RADIUS
    r, z = (p.r, p.z) if isinstance(p, HalfPlanePoint) else p
    scale = 8.0 ** n
    r_c = 8.0 ** (-n + 1)
    z_c = 8.0 ** (-n)
    plus = bump_phi(np.stack(np.broadcast_arrays(
        scale * (np.asarray(r) - r_c), scale * (np.asarray(z) - z_c)), axis=-1),
        inner, outer)
    minus = bump_phi(np.stack(np.broadcast_arrays(
        scale * (np.asarray(r) - r_c), scale * (np.asarray(z) + z_c)), axis=-1),
        inner, outer)
    out = plus - minus
    return out if np.ndim(out) else float(out)


def initial_vorticity(params: BubbleParams, p: HalfPlanePoint | tuple) -> float:
    """Pointwise value of the full bubble-family vorticity."""
    r, z = (p.r, p.z) if isinstance(p, HalfPlanePoint) else p
    out = 0.0
    for n in range(params.n0, params.m + 1):
        out = out + params.amplitude(n) * bubble_vorticity(n, (r, z), params)
    return out


def initial_vorticity_grid(params: BubbleParams, r: np.ndarray,
                           z: np.ndarray) -> np.ndarray:
    """Vectorized ``initial_vorticity`` on broadcastable sample arrays."""
    return initial_vorticity(params, (np.asarray(r), np.asarray(z)))


def seed_particles(params: BubbleParams, per_bubble_resolution: int,
                   ctx: DimensionContext) -> ParticleSystem:
    """Midpoint sampling of the bubble family into a particle system.

    Each bubble half gets a uniform per_bubble_resolution^2 cell grid over its
    tight bounding square of side 2 * support_radius; particles sit at cell
    centers.  Cells whose center lies outside the bump support carry xi = 0
    but are kept so that each bubble contributes exactly
    2 * per_bubble_resolution^2 particles.
    """
    res = per_bubble_resolution
    if res < 8:
        raise ValueError(f"per_bubble_resolution must be >= 8, got {res}")
    r0_parts, z0_parts, xi_parts, w_parts = [], [], [], []
    bubble_ranges: dict[int, tuple[int, int]] = {}
    offset = 0
    for n in range(params.n0, params.m + 1):
        half_side = params.support_radius(n)
        h = 2.0 * half_side / res
        centers_1d = -half_side + h * (np.arange(res) + 0.5)
        for sign in (+1, -1):
            c = params.bubble_center(n, sign)
            rr, zz = np.meshgrid(c.r + centers_1d, c.z + centers_1d,
                                 indexing="ij")
            rr = rr.ravel()
            zz = zz.ravel()
            omega = params.amplitude(n) * np.asarray(
                bubble_vorticity(n, (rr, zz), params))
            rpow = rr ** (ctx.d - 2)
            r0_parts.append(rr)
            z0_parts.append(zz)
            xi_parts.append(omega / rpow)
            w_parts.append(rpow * h * h)
        count = 2 * res * res
        bubble_ranges[n] = (offset, offset + count)
        offset += count
    return ParticleSystem(
        ctx=ctx,
        r0=np.concatenate(r0_parts),
        z0=np.concatenate(z0_parts),
        xi=np.concatenate(xi_parts),
        weight=np.concatenate(w_parts),
        bubble_ranges=bubble_ranges,
    )
