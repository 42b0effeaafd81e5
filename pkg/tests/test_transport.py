import numpy as np
import pytest

from euler_lab.biotsavart import KernelConfig
from euler_lab.initdata import BubbleParams, seed_particles
from euler_lab.transport import (bubble_timescales, compute_In,
                                 default_time_step, diagnostics_frame,
                                 evolve, stability_check, step_rk4)

# independent adaptive quadrature of the n = 1 main-term integrand
# 2*pi*r^2*z*(r^2+z^2)^(-5/2)*|omega_1| over the upper half bubble
I1_ORACLE = 0.0002351282583497388

CFG = KernelConfig(n_theta=16)


def test_step_validation(family3):
    with pytest.raises(ValueError):
        step_rk4(family3, 0.0, CFG)


def test_step_freezes_xi_and_weights(family3):
    out = step_rk4(family3, 1.0, CFG)
    assert np.array_equal(out.xi, family3.xi)
    assert np.array_equal(out.weight, family3.weight)
    assert out.time == family3.time + 1.0
    assert not np.array_equal(out.r, family3.r)


def test_compute_In_value_and_scaling(ctx3):
    sys = seed_particles(BubbleParams(n0=1, m=4, alpha=0.6), 24, ctx3)
    i1 = compute_In(sys, 1)
    assert i1 == pytest.approx(I1_ORACLE, rel=1e-4)
    vals = [compute_In(sys, n) * float(n) ** 0.6 for n in (1, 2, 3, 4)]
    assert max(vals) / min(vals) == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(KeyError):
        compute_In(sys, 9)


def test_bubble_timescales():
    params = BubbleParams(n0=1, m=3, alpha=0.5)
    ts = bubble_timescales(params, T=10.0, c1=4.0)
    assert ts[1] == pytest.approx(2.0)
    assert ts[2] == pytest.approx(2.0 * 2.0 ** -0.5)
    with pytest.raises(ValueError):
        bubble_timescales(params, 1.0, 0.0)


def test_initial_diagnostics(family3):
    fr = diagnostics_frame(family3)
    for n in (1, 2, 3):
        assert fr.r_ratio_inf[n] == 1.0 and fr.r_ratio_sup[n] == 1.0
        assert fr.z_ratio_inf[n] == 1.0 and fr.z_ratio_sup[n] == 1.0
        assert fr.In[n] > 0.0
    assert fr.ordering_ok and fr.region_ok
    assert fr.linf_omega == pytest.approx(1.0, rel=1e-12)


def test_evolve_frame_schedule(ctx3):
    sys = seed_particles(BubbleParams(n0=1, m=1, alpha=0.6), 8, ctx3)
    final, frames = evolve(sys, 0.0, 1.0, CFG)
    assert len(frames) == 1 and final is sys
    seen = []
    _, frames = evolve(sys, 5.0, 1.0, CFG, observer=lambda f: seen.append(f),
                       cadence=2)
    assert [f.time for f in frames] == [0.0, 2.0, 4.0, 5.0]
    assert len(seen) == len(frames)


def test_stability_check_fresh_system(family3):
    frames = [diagnostics_frame(family3)]
    ok = stability_check(frames, BubbleParams(n0=1, m=3, alpha=0.6),
                         c1=1.0, T=1.0)
    assert ok == {1: True, 2: True, 3: True}


def test_default_time_step_positive(family3):
    dt = default_time_step(family3, CFG)
    assert 0.0 < dt < 1e4


def test_rk4_order(ctx3):
    sys = seed_particles(BubbleParams(n0=1, m=1, alpha=0.6), 8, ctx3)
    dt = 2.0
    ends = {}
    for level, step in enumerate((dt, dt / 2.0, dt / 4.0)):
        s = sys.copy()
        for _ in range(round(4 * dt / step)):
            s = step_rk4(s, step, CFG)
        ends[level] = (s.r.copy(), s.z.copy())
    e1 = np.max(np.hypot(ends[0][0] - ends[2][0], ends[0][1] - ends[2][1]))
    e2 = np.max(np.hypot(ends[1][0] - ends[2][0], ends[1][1] - ends[2][1]))
    assert e1 / e2 >= 11.0
