"""Python smoke tests for the sphartree extension module."""

import math

import numpy as np
import pytest

import sphartree as sp


def test_grid_sizing():
    g = sp.make_grid(15)
    assert g.n_lat >= 23
    assert g.n_lon >= 46
    assert abs(g.weight.sum() - 2.0) < 1e-13


def test_poisson_eigenvalue():
    L = 8
    g = sp.make_grid(L)
    f = sp.SpectralField(L)
    f.set(3, 0, 1.0)
    dens = sp.synthesize(f, g)
    pot = sp.poisson_potential(dens)
    c = sp.analyze(pot, L)
    assert abs(c.get(3, 0) - 1.0 / 7.0) < 1e-12
    assert abs(c.get(5, 2)) < 1e-12


def test_multiplier():
    f = sp.SpectralField(5)
    f.set(5, -2, 1.0)
    out = sp.apply_multiplier("poisson", f)
    assert abs(out.get(5, -2) - 1.0 / 11.0) < 1e-15


def test_round_trip():
    L = 16
    rng = np.random.default_rng(7)
    coeffs = rng.normal(size=(L + 1) ** 2) + 1j * rng.normal(size=(L + 1) ** 2)
    f = sp.SpectralField.from_coeffs(L, coeffs)
    g = sp.make_grid(L)
    back = sp.analyze(sp.synthesize(f, g), L)
    assert np.max(np.abs(back.coeffs - coeffs)) < 1e-10


def test_psi_norm():
    assert abs(sp.psi_norm_sq_exact(0) - 4 * math.pi) < 1e-14
    assert abs(sp.psi_norm_sq_exact(1) - 8 * math.pi / 3) < 1e-14


def test_evolve_conserves_mass():
    L = 16
    u0 = sp.random_field(L, 3, 1.0, L // 4, L / 8.0)
    rec = sp.evolve(u0, sp.default_dt(L), 30 * sp.default_dt(L))
    assert rec.mass_drift() < 1e-11
    assert rec.times.shape == (31,)


def test_count_representations():
    assert sp.count_representations(25, 1, 3) == 3
    assert sp.count_representations(-7, 1, 5) == 0


def test_enumerate_lambda_matches_bruteforce():
    q = sp.ResonanceQuery([2, 2, 2, 2], 0)
    got = {tuple(t) for t in sp.enumerate_lambda(q)}
    want = set()
    for a in range(1, 5):
        for b in range(1, 5):
            for c in range(1, 5):
                for d in range(1, 5):
                    if a * (a + 1) - b * (b + 1) + c * (c + 1) - d * (d + 1) == 0:
                        want.add((a, b, c, d))
    assert got == want


def test_minimizer_small_delta():
    r = sp.minimize_on_subspace(8, 8, 1e-3, 1e-9, 50000)
    assert r.converged
    assert r.overlap > 1 - 1e-6
    assert abs(r.omega - 72.0) < 1e-3


def test_radial_harmonic_oracle():
    prob = sp.make_harmonic_problem(0.05, 2.0, 2000)
    basis = sp.radial_eigensolve(prob, 3)
    for p in range(3):
        want = (2 * p + 1) / 0.05**2
        assert abs(basis.energies[p] - want) < 1e-3 * want


def test_sph1_round_trip(tmp_path):
    f = sp.random_field(6, 11)
    path = str(tmp_path / "f.sph1")
    sp.write_sph1(path, f)
    back = sp.read_sph1(path)
    assert back.L == 6
    assert np.array_equal(back.coeffs, f.coeffs)
