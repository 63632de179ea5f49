import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from higgsflow.errors import GridMismatch, QuadratureWarning, SolvabilityViolation
from higgsflow.geometry import (
    VOLUME,
    TorusGeometry,
    box0,
    d_double_prime,
    d_prime,
    integrate,
    lambda_contract,
    p1_gamma1_integral,
    solve_poisson,
)
from higgsflow.random_fields import smooth_scalar

import oracles


def test_geometry_constants(geom16):
    assert geom16.volume == VOLUME == (2 * math.pi) ** 2
    assert geom16.spacing == pytest.approx(2 * math.pi / 16)


@pytest.mark.parametrize("n", [6, 9, 0, -8])
def test_bad_grid_size(n):
    with pytest.raises(ValueError):
        TorusGeometry(n)


def test_grid_mismatch(geom16):
    with pytest.raises(GridMismatch):
        d_prime(np.zeros((8, 8)), geom16)


def test_first_derivatives_on_modes(geom16):
    x, y = geom16.coords
    one = np.ones_like(x)
    ex, ey = np.exp(1j * x), np.exp(1j * y)
    assert np.max(np.abs(d_prime(one, geom16))) < 1e-14
    assert np.max(np.abs(d_double_prime(one, geom16))) < 1e-14
    np.testing.assert_allclose(d_prime(ex, geom16), 0.5j * ex, atol=1e-13)
    np.testing.assert_allclose(d_prime(ey, geom16), 0.5 * ey, atol=1e-13)
    np.testing.assert_allclose(d_double_prime(ex, geom16), 0.5j * ex, atol=1e-13)
    np.testing.assert_allclose(d_double_prime(ey, geom16), -0.5 * ey, atol=1e-13)


def test_derivatives_act_entrywise(geom16, rng):
    u = smooth_scalar(geom16, rng)
    field = np.stack([u, 2 * u], axis=-1)[..., None]
    out = d_prime(field, geom16)
    np.testing.assert_allclose(out[..., 1, 0], 2 * d_prime(u, geom16), atol=1e-13)


def test_lambda_contract(geom16):
    x, _ = geom16.coords
    c = np.ones_like(x, dtype=complex)
    # omega = dx ^ dy has dz ^ dzbar coefficient i/2 and Lambda omega = 1 on a curve.
    np.testing.assert_allclose(lambda_contract(0.5j * c, geom16), 1.0)
    np.testing.assert_allclose(1j * lambda_contract(c, geom16), 2.0)
    assert np.all(lambda_contract(0 * c, geom16) == 0)


def test_integrate(geom16):
    x, _ = geom16.coords
    assert integrate(np.ones_like(x), geom16) == pytest.approx(4 * math.pi**2, rel=1e-15)
    assert abs(integrate(np.cos(x), geom16)) < 1e-12
    assert integrate(np.cos(x) ** 2, geom16) == pytest.approx(2 * math.pi**2, rel=1e-14)


def test_box0_examples(geom16):
    x, y = geom16.coords
    assert np.max(np.abs(box0(5.0 * np.ones_like(x), geom16))) < 1e-13
    np.testing.assert_allclose(box0(np.cos(x), geom16), 0.5 * np.cos(x), atol=1e-13)
    m = np.exp(1j * (2 * x + y))
    np.testing.assert_allclose(box0(m, geom16), 2.5 * m, atol=1e-12)


def test_box0_symmetric_and_nonnegative(geom16, rng):
    for _ in range(5):
        u, v = smooth_scalar(geom16, rng, modes=4), smooth_scalar(geom16, rng, modes=4)
        a = integrate(box0(u, geom16) * v, geom16)
        b = integrate(u * box0(v, geom16), geom16)
        assert abs(a - b) < 1e-10
        assert np.real(integrate(box0(u, geom16) * u, geom16)) >= -1e-10


def test_box0_equals_minus_two_dbar_d(geom16, rng):
    # Holds exactly for fields without a Nyquist component.
    u = smooth_scalar(geom16, rng, modes=4)
    lhs = box0(u, geom16) + 2 * d_double_prime(d_prime(u, geom16), geom16)
    assert np.max(np.abs(lhs)) < 1e-12


def test_discrete_stokes(geom16, rng):
    beta = smooth_scalar(geom16, rng, modes=3) + 1j * smooth_scalar(geom16, rng, modes=3)
    total = integrate(d_prime(beta, geom16) + d_double_prime(np.conj(beta), geom16), geom16)
    assert abs(total) < 1e-10 * np.max(np.abs(beta))


def test_solve_poisson_examples(geom16):
    x, _ = geom16.coords
    np.testing.assert_allclose(solve_poisson(0.5 * np.cos(x), geom16), np.cos(x), atol=1e-13)
    assert np.max(np.abs(solve_poisson(np.zeros_like(x), geom16))) == 0
    with pytest.raises(SolvabilityViolation):
        solve_poisson(np.ones_like(x), geom16)


def test_solve_poisson_round_trip(geom16, rng):
    u = smooth_scalar(geom16, rng, modes=5)
    u = u - u.mean()
    np.testing.assert_allclose(solve_poisson(box0(u, geom16), geom16), u, atol=1e-10)
    r = smooth_scalar(geom16, rng, modes=5)
    np.testing.assert_allclose(box0(solve_poisson(r - r.mean(), geom16), geom16), r - r.mean(), atol=1e-10)


def test_solve_poisson_tolerates_float_mean(geom16):
    x, _ = geom16.coords
    u = solve_poisson(np.cos(x) + 1e-12, geom16)
    np.testing.assert_allclose(u, 2 * np.cos(x), atol=1e-10)


def test_p1_default_is_minus_one():
    v = p1_gamma1_integral()
    assert abs(v + 1) < 1e-3
    assert v == pytest.approx(oracles.p1_exact(1e4), abs=1e-10)


def test_p1_unit_radius():
    assert p1_gamma1_integral(1.0, 256) == pytest.approx(-0.5, abs=1e-10)


def test_p1_refinement():
    assert abs(p1_gamma1_integral(1e4, 8192) - p1_gamma1_integral(1e4, 4096)) < 1e-6


def test_p1_coarse_warns():
    with pytest.warns(QuadratureWarning):
        p1_gamma1_integral(1e4, 8)


def test_p1_converged_does_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        p1_gamma1_integral()


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1.0, max_value=1e6))
def test_p1_matches_antiderivative(R):
    assert p1_gamma1_integral(R, 4096) == pytest.approx(oracles.p1_exact(R), abs=1e-9)
