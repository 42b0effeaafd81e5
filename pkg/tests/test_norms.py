import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euler_lab.fields import GriddedField, ParticleSystem
from euler_lab.initdata import BubbleParams, initial_vorticity_grid, \
    seed_particles
from euler_lab.norms import (axial_sobolev_norm, gn_check, gradient_ld_norm,
                             hardy_check, lorentz_norm,
                             lower_bound_functional, particle_lorentz_norm,
                             sobolev_norm, weighted_l2)


def _gaussian_field(R=6.0, cut=5.5, n=121):
    r = np.linspace(0.0, R, n)
    z = np.linspace(-R, R, 2 * n - 1)
    rr, zz = np.meshgrid(r, z, indexing="ij")
    v = np.exp(-(rr ** 2 + zz ** 2) / 2.0)
    v[rr ** 2 + zz ** 2 > cut ** 2] = 0.0
    return GriddedField(r, z, v)


def test_sobolev_gaussian_closed_form():
    # the meridian Gaussian embeds to the 3D Gaussian, whose order-3/2 norms
    # have closed forms: full^2 = 4 pi, axial-direction^2 = pi
    f = _gaussian_field()
    full = sobolev_norm(f, 3, direction="full", box_half=8.0, grid_n=128)
    dird = sobolev_norm(f, 3, direction="d", box_half=8.0, grid_n=128)
    assert full ** 2 == pytest.approx(4.0 * np.pi, rel=5e-3)
    assert dird ** 2 == pytest.approx(np.pi, rel=5e-3)


def test_sobolev_directional_split_bounded():
    f = _gaussian_field()
    full = sobolev_norm(f, 3, direction="full", box_half=8.0, grid_n=96)
    h = sobolev_norm(f, 3, direction="h", box_half=8.0, grid_n=96)
    d = sobolev_norm(f, 3, direction="d", box_half=8.0, grid_n=96)
    ratio = full ** 2 / (h ** 2 + d ** 2)
    assert 1.0 <= ratio <= 2.0


def test_sobolev_zero_field():
    f = GriddedField(np.linspace(0, 1, 8), np.linspace(-1, 1, 8),
                     np.zeros((8, 8)))
    assert sobolev_norm(f, 3) == 0.0


def test_sobolev_boundary_guard():
    f = _gaussian_field()
    with pytest.raises(ValueError):
        sobolev_norm(f, 3, box_half=5.0, grid_n=64)


def test_axial_sobolev_gaussian_closed_form():
    r = np.linspace(0.0, 7.0, 400)
    z = np.linspace(-7.0, 7.0, 800)
    rr, zz = np.meshgrid(r, z, indexing="ij")
    f = GriddedField(r, z, np.exp(-(rr ** 2 + zz ** 2) / 2.0))
    assert axial_sobolev_norm(f, 3) ** 2 == pytest.approx(np.pi, rel=1e-3)


def test_axial_sobolev_matches_embedding_on_fat_blob():
    r = np.linspace(0.0, 3.0, 300)
    z = np.linspace(-3.0, 3.0, 600)
    rr, zz = np.meshgrid(r, z, indexing="ij")
    v = (np.exp(-8 * ((rr - 1.2) ** 2 + (zz - 0.5) ** 2))
         - np.exp(-8 * ((rr - 1.2) ** 2 + (zz + 0.5) ** 2)))
    v[np.abs(v) < 1e-12] = 0.0
    f = GriddedField(r, z, v)
    a = axial_sobolev_norm(f, 3)
    b = sobolev_norm(f, 3, direction="d", grid_n=160)
    assert a == pytest.approx(b, rel=5e-3)


def test_axial_sobolev_resolves_thin_annulus():
    # the meridian reduction must see fields whose support is far thinner
    # than any affordable uniform 3D grid
    params = BubbleParams(n0=3, m=3, alpha=0.6)
    c = params.bubble_center(3)
    sup = params.support_radius(3)
    r = np.linspace(max(c.r - 3 * sup, 0.0), c.r + 3 * sup, 161)
    z = np.linspace(-(c.z + 3 * sup), c.z + 3 * sup, 321)
    rr, zz = np.meshgrid(r, z, indexing="ij")
    f = GriddedField(r, z, initial_vorticity_grid(params, rr, zz))
    assert axial_sobolev_norm(f, 3) > 0.0


def test_axial_sobolev_zero_and_validation():
    f = GriddedField(np.linspace(0, 1, 8), np.linspace(-1, 1, 8),
                     np.zeros((8, 8)))
    assert axial_sobolev_norm(f, 3) == 0.0
    with pytest.raises(ValueError):
        axial_sobolev_norm(f, 4)
    with pytest.raises(ValueError):
        axial_sobolev_norm(f, 3, pad_factor=0.5)


def test_bubble_orthogonality_axial():
    # disjoint r-supports stay disjoint under the z-direction multiplier,
    # so the squared norms add
    r = np.linspace(0.0, 2.2, 221)
    z = np.linspace(-0.6, 0.6, 121)
    rr, zz = np.meshgrid(r, z, indexing="ij")

    def blob(cr):
        q = ((rr - cr) ** 2 + zz ** 2) / 0.125 ** 2
        return np.where(q < 1.0, np.exp(-q / (1.0 - np.minimum(q, 0.999))), 0.0)

    a = GriddedField(r, z, blob(0.6))
    b = GriddedField(r, z, blob(1.5))
    ab = GriddedField(r, z, blob(0.6) + blob(1.5))
    kw = dict(direction="d", box_half=3.0, grid_n=128)
    na = sobolev_norm(a, 3, **kw) ** 2
    nb = sobolev_norm(b, 3, **kw) ** 2
    nab = sobolev_norm(ab, 3, **kw) ** 2
    assert nab == pytest.approx(na + nb, rel=0.02)


def test_lorentz_single_block_closed_form():
    # one value c on measure t0: L^{p,q} = c (p/q)^{1/q} t0^{1/p}
    c, t0, p, q = 2.5, 0.3, 3.0, 1.5
    got = lorentz_norm(np.array([c]), np.array([t0]), p, q)
    assert got == pytest.approx(c * (p / q) ** (1 / q) * t0 ** (1 / p),
                                rel=1e-12)
    weak = lorentz_norm(np.array([c]), np.array([t0]), p, np.inf)
    assert weak == pytest.approx(c * t0 ** (1 / p), rel=1e-12)


def test_lorentz_validation():
    with pytest.raises(ValueError):
        lorentz_norm(np.array([1.0]), np.array([0.0]), 3.0, 1.0)
    with pytest.raises(ValueError):
        lorentz_norm(np.array([1.0]), np.array([1.0]), 1.0, 1.0)
    with pytest.raises(ValueError):
        lorentz_norm(np.array([1.0]), np.array([1.0]), 3.0, 0.5)


@settings(max_examples=60, deadline=None)
@given(
    vals=st.lists(st.floats(0.0, 100.0), min_size=1, max_size=12),
    meas=st.lists(st.floats(1e-3, 10.0), min_size=12, max_size=12),
    scale=st.floats(0.1, 50.0),
)
def test_lorentz_homogeneous_and_permutation_invariant(vals, meas, scale):
    v = np.array(vals)
    m = np.array(meas[: len(v)])
    base = lorentz_norm(v, m, 3.0, 2.0)
    assert lorentz_norm(scale * v, m, 3.0, 2.0) == pytest.approx(
        scale * base, rel=1e-9, abs=1e-12)
    perm = np.random.default_rng(0).permutation(len(v))
    assert lorentz_norm(v[perm], m[perm], 3.0, 2.0) == pytest.approx(
        base, rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    vals=st.lists(st.floats(1e-3, 100.0), min_size=1, max_size=12),
    meas=st.lists(st.floats(1e-3, 10.0), min_size=12, max_size=12),
)
def test_lorentz_nesting(vals, meas):
    # q1 <= q2 nesting with the standard constant (q1/p)^(1/q1 - 1/q2)
    v = np.array(vals)
    m = np.array(meas[: len(v)])
    p, q1, q2 = 3.0, 1.0, 2.0
    c = (q1 / p) ** (1.0 / q1 - 1.0 / q2)
    lhs = lorentz_norm(v, m, p, q2)
    rhs = c * lorentz_norm(v, m, p, q1)
    assert lhs <= rhs * (1.0 + 1e-9)


def test_weighted_l2_toy(ctx3):
    # two mirrored particles: sqrt(2 * 2pi * w * xi^2 / |z|)
    sys = ParticleSystem(ctx3, np.array([1.0, 1.0]), np.array([0.5, -0.5]),
                         np.array([2.0, -2.0]), np.array([0.25, 0.25]),
                         {1: (0, 2)})
    expected = np.sqrt(2.0 * 2.0 * np.pi * 0.25 * 4.0 / 0.5)
    assert weighted_l2(sys) == pytest.approx(expected, rel=1e-12)


def test_weighted_l2_rejects_plane_particle(ctx3):
    sys = ParticleSystem(ctx3, np.array([1.0]), np.array([0.5]),
                         np.array([1.0]), np.array([1.0]), {1: (0, 1)})
    sys.z[0] = 0.0
    with pytest.raises(ValueError):
        weighted_l2(sys)


def test_gradient_ld_gaussian():
    # ||grad f||_{L^3(R^3)} for the 3D Gaussian exp(-|x|^2/2):
    # integral of |x|^3 exp(-3|x|^2/2) over R^3 = 4 pi * (2/3)^3
    f = _gaussian_field(n=241)
    expected = (4.0 * np.pi * (2.0 / 3.0) ** 3) ** (1.0 / 3.0)
    assert gradient_ld_norm(f, 3) == pytest.approx(expected, rel=2e-2)


def test_hardy_battery():
    x = np.linspace(1e-4, 1.0, 4000)
    assert hardy_check(x, np.zeros_like(x), 2.0) == (0.0, 0.0)
    lhs, rhs = hardy_check(x, x, 2.0)
    assert lhs == pytest.approx(1.0, rel=1e-3)
    assert rhs == pytest.approx(1.0, rel=1e-3)
    lhs, rhs = hardy_check(x, x ** 0.6, 2.0)
    assert lhs <= 2.0 * rhs
    with pytest.raises(ValueError):
        hardy_check(x, x, 1.0)


def test_gn_ratio_stable_under_refinement():
    ratios = []
    for n in (141, 281):
        r = np.linspace(0.0, 3.0, n)
        z = np.linspace(-3.0, 3.0, 2 * n - 1)
        rr, zz = np.meshgrid(r, z, indexing="ij")
        v = (np.exp(-8 * ((rr - 1.2) ** 2 + (zz - 0.5) ** 2))
             - np.exp(-8 * ((rr - 1.2) ** 2 + (zz + 0.5) ** 2)))
        v[np.abs(v) < 1e-12] = 0.0
        field = GriddedField(r, z, v)
        grad, lam = gn_check(field, 3, grid_n=128)
        assert grad > 0 and lam > 0
        ratios.append(grad / lam)
    assert abs(ratios[1] / ratios[0] - 1.0) <= 0.15


def test_lower_bound_functional_initial(ctx3):
    sys = seed_particles(BubbleParams(n0=2, m=5, alpha=0.6), 8, ctx3)
    expected = sum(float(n) ** -1.2 for n in range(2, 6))
    assert lower_bound_functional(sys, 0.6) == pytest.approx(expected,
                                                             rel=1e-12)


def test_particle_lorentz_scaling(ctx3):
    # contribution of a solo bubble n to L^{3,q}^q falls like n^(-alpha q)
    alpha, q = 0.6, 1.0
    vals = []
    for n in (1, 2, 3, 4):
        sys = seed_particles(BubbleParams(n0=n, m=n, alpha=alpha), 12, ctx3)
        vals.append(particle_lorentz_norm(sys, 3.0, q) ** q)
    slope = np.polyfit(np.log([1, 2, 3, 4]), np.log(vals), 1)[0]
    assert slope == pytest.approx(-alpha * q, rel=0.10)
