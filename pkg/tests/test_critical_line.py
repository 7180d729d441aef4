"""Critical-line tests: zero scan, simplicity, interlacing, p/q, ODE residual."""

import numpy as np
import pytest

from xilab import critical_line as cl
from xilab import eta, theta

# doubled ordinates of the first zeta zeros (independent root-find, frozen)
FIRST_ZEROS_Y = (28.2694502835, 42.0440792775, 50.0217151603)


@pytest.fixture(scope="module")
def zeros():
    return cl.scan_zeros(0.0, 100.0)


@pytest.fixture(scope="module")
def stationary():
    return cl.stationary_points(0.0, 100.0)


def test_u_line_matches_uv():
    for y in (5.0, 28.0, 60.0):
        r = cl.u_line(y)
        w = eta.uv(0.0, y)
        assert abs(r.value - w.u) <= 1e-13


def test_u_line_deriv_fd():
    h, y = 1e-5, 20.0
    fd = (cl.u_line(y + h).value - cl.u_line(y - h).value) / (2.0 * h)
    assert abs(fd - cl.u_line(y, 1).value) < 1e-6


def test_zero_count(zeros):
    assert len(zeros) == 10
    assert all(z.simple for z in zeros)


def test_first_zero_ordinates(zeros):
    for rec, ref in zip(zeros, FIRST_ZEROS_Y):
        assert abs(rec.y - ref) < 1e-5
        assert abs(rec.t_zeta - ref / 2.0) < 1e-5


def test_zero_residuals_small(zeros):
    for rec in zeros:
        env = cl.u_envelope(rec.y)
        assert rec.residual <= 1e-3 * env
        assert rec.u_deriv > 0.0


def test_refine_zero_requires_bracket():
    with pytest.raises(theta.UsageError):
        cl.refine_zero((10.0, 12.0), 1e-8)  # no sign change here


def test_interlacing(zeros, stationary):
    for a, b in zip(zeros, zeros[1:]):
        inside = [s for s in stationary if a.y < s.y_m < b.y]
        assert len(inside) == 1
        mid_u = cl.u_line(0.5 * (a.y + b.y)).value
        want = "positive_max" if mid_u > 0.0 else "negative_min"
        assert inside[0].kind == want


def test_stationary_kinds_alternate(stationary):
    kinds = [s.kind for s in stationary]
    for k0, k1 in zip(kinds, kinds[1:]):
        assert k0 != k1


def test_pq_matches_u():
    for y in (10.0, 30.0, 60.0, 100.0):
        r = cl.pq(y)
        u = cl.u_line(y)
        assert r.p > 0.0 and r.q > 0.0
        assert abs(r.diff - u.value) <= r.tail_bound + u.bound


def test_pq_asymptote():
    g0 = theta.G_eval(0.0).value
    dev100 = abs(np.pi * 100.0 * cl.pq(100.0).p / g0 - 1.0)
    dev200 = abs(np.pi * 200.0 * cl.pq(200.0).p / g0 - 1.0)
    assert dev100 <= 0.05
    assert dev200 < dev100


def test_pq_y_floor():
    with pytest.raises(theta.UsageError):
        cl.pq(3.0)


def test_pq_coverage_error():
    with pytest.raises(cl.CoverageError) as exc:
        cl.pq(100.0, K=2)
    assert exc.value.tail_bound > 0.0


def test_pq_table_header_fields():
    rows = cl.pq_table([30.0])
    assert set(rows[0]) == {"y", "p", "q", "diff", "scaled_p"}


def test_ode_residual_small():
    R, ratio = cl.ode_residual(60.0)
    assert abs(R) < 1e-6
    assert np.isfinite(ratio)
    with pytest.raises(theta.UsageError):
        cl.ode_residual(5.0)


def test_threaded_scan_identical(zeros):
    threaded = cl.scan_zeros(0.0, 100.0, threads=2)
    assert [r.y for r in threaded] == [r.y for r in zeros]
