"""Core domain types: meridian coordinates, particle systems, gridded fields.

All axisymmetric fields live on the meridian half-plane (r, z) with r >= 0.
A full d-dimensional integral of an axisymmetric function f reduces to

    int_{R^d} f dy = sigma_{d-2} * int int f(r, z) r^{d-2} dr dz,

where sigma_{d-2} is the surface measure of the unit (d-2)-sphere.  Particle
systems discretize that meridian measure with frozen per-particle weights
w_i = r0_i^{d-2} * dr * dz, so conserved integrals are exact under a
volume-preserving flow and any drift isolates integrator error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point (r, z) in the meridian half-plane, r >= 0."""

    r: float
    z: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"radial coordinate must be >= 0, got {self.r}")


@dataclass(frozen=True)
class DimensionContext:
    """Spatial dimension together with its geometric constants."""

    d: int
    ball_volume: float
    sphere_area: float

    @classmethod
    def for_dimension(cls, d: int) -> "DimensionContext":
        if d < 3:
            raise ValueError(f"dimension must be >= 3, got {d}")
        ball_volume = pi ** (d / 2) / gamma(d / 2 + 1)
        sphere_area = 2 * pi ** ((d - 1) / 2) / gamma((d - 1) / 2)
        return cls(d=d, ball_volume=ball_volume, sphere_area=sphere_area)


@dataclass(frozen=True)
class VortexParticle:
    """Single-particle view: initial/current position, transported density, weight.

    xi = omega0 / r0^{d-2} is conserved exactly along the trajectory; the
    weight is the frozen meridian volume element r0^{d-2} * dr * dz.
    """

    initial: HalfPlanePoint
    current: HalfPlanePoint
    xi: float
    weight: float


class ParticleSystem:
    """Array-backed collection of vortex particles plus per-bubble index ranges.

    Positions are stored as flat float64 arrays (structure-of-arrays); the
    only mutable state is the current position pair (r, z), owned exclusively
    by the transport step.  ``bubble_ranges`` maps each bubble index n to the
    half-open index range [lo, hi) of particles seeded from that bubble.
    """

    def __init__(
        self,
        ctx: DimensionContext,
        r0: np.ndarray,
        z0: np.ndarray,
        xi: np.ndarray,
        weight: np.ndarray,
        bubble_ranges: dict[int, tuple[int, int]],
        time: float = 0.0,
    ):
        n = len(r0)
        for name, arr in (("z0", z0), ("xi", xi), ("weight", weight)):
            if len(arr) != n:
                raise ValueError(f"array length mismatch for {name}")
        self.ctx = ctx
        self.r0 = np.ascontiguousarray(r0, dtype=np.float64)
        self.z0 = np.ascontiguousarray(z0, dtype=np.float64)
        self.r = self.r0.copy()
        self.z = self.z0.copy()
        self.xi = np.ascontiguousarray(xi, dtype=np.float64)
        self.weight = np.ascontiguousarray(weight, dtype=np.float64)
        self.bubble_ranges = dict(bubble_ranges)
        self.time = time
        self.validate()

    def __len__(self) -> int:
        return len(self.r0)

    @property
    def cell_area(self) -> np.ndarray:
        """Meridian cell area dr * dz carried by each particle."""
        return self.weight / self.r0 ** (self.ctx.d - 2)

    def particle(self, i: int) -> VortexParticle:
        return VortexParticle(
            initial=HalfPlanePoint(self.r0[i], self.z0[i]),
            current=HalfPlanePoint(self.r[i], self.z[i]),
            xi=self.xi[i],
            weight=self.weight[i],
        )

    def validate(self):
        if np.any(self.r0 <= 0):
            raise ValueError("particles must be seeded strictly off the axis")
        if np.any(self.weight <= 0):
            raise ValueError("weights must be positive")
        active = self.xi != 0.0
        if np.any(self.r[active] <= 0):
            raise ValueError("active particle reached the axis")
        covered = np.zeros(len(self), dtype=bool)
        for n, (lo, hi) in self.bubble_ranges.items():
            if not (0 <= lo <= hi <= len(self)):
                raise ValueError(f"bubble range {n} out of bounds")
            if covered[lo:hi].any():
                raise ValueError("bubble ranges overlap")
            covered[lo:hi] = True
        if np.any(active & ~covered):
            raise ValueError("active particle not covered by any bubble range")

    def copy(self) -> "ParticleSystem":
        out = ParticleSystem(
            self.ctx, self.r0, self.z0, self.xi, self.weight,
            self.bubble_ranges, self.time,
        )
        out.r = self.r.copy()
        out.z = self.z.copy()
        return out

    def bubble_indices(self, n: int) -> np.ndarray:
        lo, hi = self.bubble_ranges[n]
        return np.arange(lo, hi)


def reconstruct_vorticity(system: ParticleSystem) -> np.ndarray:
    """Per-particle vorticity xi_i * r_i^{d-2} at the current positions."""
    return system.xi * system.r ** (system.ctx.d - 2)


def integrate_meridian(system: ParticleSystem, f: np.ndarray) -> float:
    """Discrete full-space integral of a per-particle sampled axisymmetric field."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != system.weight.shape:
        raise ValueError(
            f"sample array length {f.shape} does not match particle count "
            f"{system.weight.shape}"
        )
    return system.ctx.sphere_area * float(np.sum(f * system.weight))


@dataclass
class GriddedField:
    """Uniform rectangular (r, z) sampling of a scalar meridian field."""

    r_axis: np.ndarray
    z_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.r_axis = np.asarray(self.r_axis, dtype=np.float64)
        self.z_axis = np.asarray(self.z_axis, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        for name, ax in (("r_axis", self.r_axis), ("z_axis", self.z_axis)):
            if ax.ndim != 1 or len(ax) < 2:
                raise ValueError(f"{name} must be 1-D with >= 2 samples")
            steps = np.diff(ax)
            if np.any(steps <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ValueError(f"{name} must be uniformly spaced")
        if self.values.shape != (len(self.r_axis), len(self.z_axis)):
            raise ValueError("values shape must be (len(r_axis), len(z_axis))")

    @property
    def dr(self) -> float:
        return float(self.r_axis[1] - self.r_axis[0])

    @property
    def dz(self) -> float:
        return float(self.z_axis[1] - self.z_axis[0])

    def sample(self, r: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Bilinear interpolation; zero outside the sampled rectangle."""
        r = np.asarray(r, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        fr = (r - self.r_axis[0]) / self.dr
        fz = (z - self.z_axis[0]) / self.dz
        inside = (fr >= 0) & (fr <= len(self.r_axis) - 1) & \
                 (fz >= 0) & (fz <= len(self.z_axis) - 1)
        fr = np.clip(fr, 0, len(self.r_axis) - 1 - 1e-12)
        fz = np.clip(fz, 0, len(self.z_axis) - 1 - 1e-12)
        i = fr.astype(np.int64)
        j = fz.astype(np.int64)
        tr = fr - i
        tz = fz - j
        v = (
            self.values[i, j] * (1 - tr) * (1 - tz)
            + self.values[i + 1, j] * tr * (1 - tz)
            + self.values[i, j + 1] * (1 - tr) * tz
            + self.values[i + 1, j + 1] * tr * tz
        )
        return np.where(inside, v, 0.0)


def deposit_vorticity(system: ParticleSystem, spec: "GridSpec") -> GriddedField:
    """Scatter the particle vorticity onto a meridian grid (bilinear shapes).

    Each particle deposits omega_i times its meridian cell area; dividing by
    the grid cell area recovers a locally averaged vorticity field.
    """
    r_axis, z_axis = spec.axes()
    dr = r_axis[1] - r_axis[0]
    dz = z_axis[1] - z_axis[0]
    values = np.zeros((spec.nr, spec.nz))
    omega = reconstruct_vorticity(system)
    mass = omega * system.cell_area
    fr = (system.r - r_axis[0]) / dr
    fz = (system.z - z_axis[0]) / dz
    ok = (fr >= 0) & (fr < spec.nr - 1) & (fz >= 0) & (fz < spec.nz - 1)
    fr, fz, mass = fr[ok], fz[ok], mass[ok]
    i = fr.astype(np.int64)
    j = fz.astype(np.int64)
    tr = fr - i
    tz = fz - j
    np.add.at(values, (i, j), mass * (1 - tr) * (1 - tz))
    np.add.at(values, (i + 1, j), mass * tr * (1 - tz))
    np.add.at(values, (i, j + 1), mass * (1 - tr) * tz)
    np.add.at(values, (i + 1, j + 1), mass * tr * tz)
    values /= dr * dz
    return GriddedField(r_axis, z_axis, values)


@dataclass(frozen=True)
class GridSpec:
    """Rectangle [r_min, r_max] x [z_min, z_max] with an (nr, nz) sample grid."""

    r_min: float
    r_max: float
    z_min: float
    z_max: float
    nr: int
    nz: int

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.r_min, self.r_max, self.nr),
            np.linspace(self.z_min, self.z_max, self.nz),
        )
