import math

import pytest

import gefhole as g


def test_constants():
    assert g.q_of_p(0.0) == pytest.approx(math.e)
    assert g.z_const(0.0) == pytest.approx(math.e**2 / 4)
    assert g.z_const(1.0) == 0.0
    rc = g.rate_constant(2.0)
    assert rc.branch == g.Branch.overcrowd
    assert rc.Z == pytest.approx(g.z_const(2.0))
    with pytest.raises(ValueError):
        g.jlm_exponent(0.5)


def test_roots_round_trip():
    rng = g.RandomStream(3)
    c = g.sample_coeffs(40, rng, 1.5)
    zc = g.roots(c)
    assert len(zc.zeros) == 40
    assert zc.max_residual < 1e-8
    assert g.count_in_disk(zc, 2.0) == g.winding_count(c, 2.0)


def test_measures_and_optimizer():
    alpha = 10.0
    assert g.functional_I(g.equilibrium(alpha), alpha) == pytest.approx(0.5 * math.log(alpha) - 0.75, abs=1e-9)
    mu = g.catalog(0.0, alpha)
    assert mu.total_mass == pytest.approx(1.0)
    assert g.functional_I(mu, alpha) == pytest.approx(g.minimal_I(0.0, alpha), abs=1e-9)
    r = g.minimize(alpha, 0.0, shells=200)
    assert abs(r.I - g.minimal_I(0.0, alpha)) < 1e-2
    assert sum(r.grid.masses) == pytest.approx(1.0)
    assert r.grid.masses[r.grid.unit_index] > 0.2


def test_hole_chain_keeps_the_hole():
    res = g.hole_chain(N=8, L=1.0, hole_radius=1.0, sweeps=200, burn_in=100, seed=5)
    assert len(res.samples) == 200
    assert 0.05 < res.acceptance_rate < 0.9
    assert all(abs(z) >= 1.0 for s in res.samples for z in s.zeros)
    with pytest.raises(g.NumericalError):
        g.log_joint_density([0.5, 0.5], 2, 1.0)


def test_hole_mc_and_histogram():
    est = g.hole_probability_mc(0.3, 2000, seed=2)
    assert 0.5 < est.estimate <= 1.0
    rng = g.RandomStream(8)
    samples = [g.roots(g.sample_coeffs(60, rng.split(i))) for i in range(50)]
    dens = g.radial_density(samples, [0.0, 1.0, 2.0, 3.0])
    assert all(d == pytest.approx(1 / math.pi, rel=0.35) for d in dens)
