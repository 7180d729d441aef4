"""Quadrature-level tests: eta routes, bounds, oracle, symmetries."""

import numpy as np
import pytest

from xilab import eta, theta

# xi(1/2), frozen from an independent high-precision evaluation
ETA_AT_0 = 0.4971207781886065
FIRST_ZERO_Y = 28.2694502835


def test_eta_unit_points():
    for z in (1.0, -1.0):
        r = eta.eta(z)
        assert abs(r.value - 0.5) < 1e-10
        assert abs(r.value - 0.5) <= max(r.abs_error_bound, 1e-12)


def test_eta_at_origin():
    assert abs(eta.eta(0.0).value - ETA_AT_0) < 1e-10


def test_transform_round_trip():
    z = 0.3 + 12.0j
    s = eta.transform(z, "z_to_s")
    assert s == (z + 1.0) / 2.0
    assert abs(eta.transform(s, "s_to_z") - z) < 1e-15


def test_oracle_agreement():
    for x in (-1.0, -0.5, 0.0, 0.5, 1.0):
        for y in (3.0, 17.0, 33.0, 60.0):
            z = complex(x, y)
            g = eta.eta(z).value
            o = eta.xi_oracle(eta.transform(z, "z_to_s")).value
            assert abs(g - o) < 1e-9


def test_route_f_agreement():
    for z in (0.4 + 10.0j, 1.0 + 30.0j, 0.0 + 5.0j):
        g = eta.eta(z, route="via_G").value
        f = eta.eta(z, route="via_F").value
        assert abs(g - f) < 1e-9


def test_symmetries():
    z = 0.3 + 12.0j
    base = eta.eta(z).value
    # even in z and real on the real axis => conjugate symmetry
    assert abs(eta.eta(-z).value - base) < 1e-12
    assert abs(eta.eta(z.conjugate()).value - base.conjugate()) < 1e-12


def test_bound_honest():
    # tighter tolerance value must sit inside the looser reported bound
    loose_spec = eta.QuadratureSpec(tol=1e-6)
    for z in (0.5 + 10.0j, 0.0 + 28.0j):
        loose = eta.eta(z, loose_spec)
        tight = eta.eta(z, eta.QuadratureSpec(tol=1e-12))
        assert abs(loose.value - tight.value) <= max(loose.abs_error_bound, 1e-13)


def test_near_first_zero():
    r = eta.eta(complex(0.0, FIRST_ZERO_Y))
    assert abs(r.value) < 1e-10


def test_uv_exact_axis_zeros():
    assert eta.uv(0.0, 10.0).v == 0.0
    assert eta.uv(0.5, 0.0).v == 0.0


def test_uv_matches_eta():
    z = 0.3 + 12.0j
    r = eta.eta(z).value
    w = eta.uv(z.real, z.imag)
    assert abs(w.u - r.real) < 1e-12
    assert abs(w.v - r.imag) < 1e-12


def test_uv_grid_matches_pointwise():
    xs = np.linspace(0.0, 1.0, 5)
    ys = np.linspace(0.0, 40.0, 9)
    U, V, bound = eta.uv_grid(xs, ys)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            w = eta.uv(float(x), float(y))
            assert abs(U[i, j] - w.u) <= 2e-12
            assert abs(V[i, j] - w.v) <= 2e-12
    assert V[0, :].max() == 0.0 and V[0, :].min() == 0.0  # x = 0 column


def test_cutoff_monotone():
    assert eta.cutoff_T(1.0, 1e-10) >= eta.cutoff_T(0.0, 1e-10)
    assert eta.cutoff_T(0.0, 1e-12) >= eta.cutoff_T(0.0, 1e-8)


def test_tail_bound_covers_remainder():
    # the certified tail at T must dominate the integral beyond T
    T = eta.cutoff_T(0.0, 1e-8)
    tail = eta._tail_bound(T, 0.0)
    ts = np.linspace(T, T + 2.0, 400)
    gs = theta.g_values(ts)
    rest = np.trapezoid(np.abs(gs), ts)
    assert rest <= tail


def test_identity_links_f_and_g():
    for z in (0.5, 0.3 + 12.0j, 1.0 + 5.0j):
        assert eta.identity_eq17_check(z) < 1e-8


def test_cr_residuals():
    samples = ((0.0, 10.0), (0.3, 12.0), (0.5, 20.0), (0.9, 15.0))
    for x, y in samples:
        r1, r2 = eta.cr_check(complex(x, y), 1e-4)
        assert r1 < 1e-6 and r2 < 1e-6


def test_cr_quadratic_decay():
    a1, _ = eta.cr_check(0.3 + 12.0j, 1e-3)
    a2, _ = eta.cr_check(0.3 + 12.0j, 5e-4)
    assert a2 > 0.0
    assert 2.5 <= a1 / a2 <= 6.5  # ~4 for O(h^2)


def test_spec_validation():
    with pytest.raises(theta.UsageError):
        eta.QuadratureSpec(tol=-1.0)
    with pytest.raises(theta.UsageError):
        eta.QuadratureSpec(panel_rule="nope")
    with pytest.raises(theta.UsageError):
        eta.eta(0.5, route="bogus")
