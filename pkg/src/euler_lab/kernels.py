"""Numba-compiled direct-summation kernels.

The azimuthal integral per target-source pair is a periodic trapezoid rule
over precomputed cosine nodes when the integrand is smooth at the quadrature
scale, and an exact complete-elliptic-integral evaluation (AGM) when the
pair is close enough that the trapezoid would miss the peak.  The target
loop is parallel while each target's reduction stays serial, so results are
bitwise identical for any thread count.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def _ellipke(m):
    """Complete elliptic integrals (K(m), E(m)) by the AGM, m = k^2 in [0, 1)."""
    a = 1.0
    b = math.sqrt(1.0 - m)
    csum = 0.5 * m
    pw = 1.0
    for _ in range(60):
        c = 0.5 * (a - b)
        if c <= 1e-15 * a:
            break
        csum += pw * c * c
        an = 0.5 * (a + b)
        b = math.sqrt(a * b)
        a = an
        pw *= 2.0
    K = math.pi / (2.0 * a)
    E = K * (1.0 - csum)
    return K, E


@njit(cache=True)
def _azimuthal_exact(a, b):
    """Exact (I0, I1) with I_j = int_0^{2pi} cos^j(t) (a - b cos t)^{-3/2} dt."""
    m = 2.0 * b / (a + b)
    if m >= 1.0 - 1e-15:
        return 0.0, 0.0
    K, E = _ellipke(m)
    pref = 4.0 / ((a + b) * math.sqrt(a + b))
    i0 = pref * E / (1.0 - m)
    i1 = pref * ((2.0 - m) / m * E / (1.0 - m) - 2.0 / m * K)
    return i0, i1


@njit(parallel=True, cache=True)
def velocity_direct(tr, tz, pr, pz, area, omega, delta2, cos_theta, out):
    """Accumulate (u_r, u_z) at each target from all source particles.

    tr, tz          target meridian coordinates, shape (nt,)
    pr, pz          source particle positions, shape (np,)
    area            meridian cell areas W_i = weight_i / r0_i^(d-2)
    omega           reconstructed vorticity at sources
    delta2          per-source squared desingularization length
    cos_theta       azimuthal quadrature nodes cos(2 pi k / n_theta)
    out             output array, shape (nt, 2)
    """
    n_src = pr.shape[0]
    n_theta = cos_theta.shape[0]
    dtheta = TWO_PI / n_theta
    # trapezoid accuracy needs the peak width sqrt((a-b)/b) to span several
    # quadrature nodes; below this the exact branch takes over
    near = 64.0 / (n_theta * n_theta)
    for j in prange(tr.shape[0]):
        r = tr[j]
        z = tz[j]
        acc_r = 0.0
        acc_z = 0.0
        for i in range(n_src):
            if omega[i] == 0.0:
                continue
            rho = pr[i]
            dz = z - pz[i]
            a = r * r + rho * rho + dz * dz + delta2[i]
            b = 2.0 * r * rho
            if a - b < near * b:
                i0, i1 = _azimuthal_exact(a, b)
            else:
                s0 = 0.0
                s1 = 0.0
                for k in range(n_theta):
                    c = cos_theta[k]
                    q = a - b * c
                    inv = 1.0 / (q * math.sqrt(q))
                    s0 += inv
                    s1 += c * inv
                i0 = s0 * dtheta
                i1 = s1 * dtheta
            coef = area[i] * rho * omega[i]
            acc_r += coef * dz * i1
            acc_z += coef * (r * i1 - rho * i0)
        if r > 0.0:
            out[j, 0] = -acc_r / (2.0 * TWO_PI)
        else:
            out[j, 0] = 0.0
        out[j, 1] = acc_z / (2.0 * TWO_PI)
