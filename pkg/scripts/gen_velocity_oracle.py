#!/usr/bin/env python3
"""Generate frozen reference velocities for the single-bubble solver test.

Independent oracle: the 3D Biot-Savart integral evaluated in cylindrical
coordinates with tensor Gauss-Legendre quadrature over the meridian support
and a dense periodic trapezoid rule in the azimuth, using the Cartesian
cross-product kernel written from scratch.  The scalar vorticity convention
is omega = d_r u_z - d_z u_r, so the vector vorticity is -omega * e_theta.

Writes tests/data/velocity_oracle.json; rerun only to regenerate.
"""

import json
from pathlib import Path

import numpy as np

from euler_lab.initdata import BubbleParams, bubble_vorticity

PARAMS = BubbleParams(n0=1, m=1, alpha=0.6)


def oracle_velocity(rt, zt, nq=80, nphi=720):
    sup = PARAMS.support_radius(1)
    cr, cz = 1.0, 8.0 ** -1
    xg, wg = np.polynomial.legendre.leggauss(nq)
    rho = cr + sup * xg
    wr = sup * wg
    phis = 2.0 * np.pi * np.arange(nphi) / nphi
    dphi = 2.0 * np.pi / nphi
    cx, sx = np.cos(phis), np.sin(phis)
    ux = uz = 0.0
    for zc in (cz, -cz):
        zeta = zc + sup * xg
        R, Z = np.meshgrid(rho, zeta, indexing="ij")
        W = np.empty_like(R)
        for i in range(nq):
            for j in range(nq):
                W[i, j] = -bubble_vorticity(1, (R[i, j], Z[i, j]), PARAMS)
        WW = W * np.outer(wr, wr) * R
        for k in range(nphi):
            dxx = rt - R * cx[k]
            dyy = -R * sx[k]
            dzz = zt - Z
            r3 = (dxx * dxx + dyy * dyy + dzz * dzz) ** 1.5
            ux += np.sum(WW * (-dzz * cx[k]) / r3) * dphi
            uz += np.sum(WW * (dxx * cx[k] + dyy * sx[k]) / r3) * dphi
    return -ux / (4.0 * np.pi), -uz / (4.0 * np.pi)


def main():
    rng = np.random.default_rng(20240811)
    targets = []
    # off-support targets: spread over the near field, the axis region, and
    # a far ring; all at least two support radii away from both bubbles
    while len(targets) < 20:
        r = float(rng.uniform(0.0, 2.5))
        z = float(rng.uniform(-1.0, 1.0))
        d_up = np.hypot(r - 1.0, z - 0.125)
        d_dn = np.hypot(r - 1.0, z + 0.125)
        if min(d_up, d_dn) > 2.5 * PARAMS.support_radius(1):
            targets.append((r, z))
    rows = []
    for r, z in targets:
        ur, uz = oracle_velocity(r, z)
        ur2, uz2 = oracle_velocity(r, z, nq=60, nphi=500)
        conv = max(abs(ur - ur2), abs(uz - uz2))
        rows.append({"r": r, "z": z, "ur": ur, "uz": uz,
                     "quadrature_delta": conv})
        print(f"({r:.4f}, {z:+.4f}) -> ({ur:+.6e}, {uz:+.6e})  "
              f"conv {conv:.1e}")
    out = Path(__file__).resolve().parent.parent / "tests" / "data"
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "velocity_oracle.json", "w") as fh:
        json.dump({"params": {"n0": 1, "m": 1, "alpha": 0.6},
                   "targets": rows}, fh, indent=2)
    print(f"wrote {out / 'velocity_oracle.json'}")


if __name__ == "__main__":
    main()
