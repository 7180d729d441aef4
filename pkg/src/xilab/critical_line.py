"""Zeros, stationary points and the p/q decomposition of u(0, y).

On the line x = 0 the function reduces to u(0, y) = int_0^inf G(t) cos(yt) dt
and its y-derivatives come from differentiating under the integral.  Zeros of
u(0, y) at ordinate y correspond to zeta zeros at ordinate y/2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import eta, theta
from .theta import PI, ConvergenceError, UsageError

Y_FLOOR = 5.0  # below this the 1/y^2 scaling of p, q amplifies noise
DEFAULT_STEP = 0.5


class CoverageError(ConvergenceError):
    """Interval budget K does not cover the kernel support."""

    def __init__(self, msg, tail_bound):
        super().__init__(msg)
        self.tail_bound = tail_bound


@dataclass(frozen=True)
class LineValue:
    value: float
    bound: float


@dataclass(frozen=True)
class ZeroRecord:
    y: float
    t_zeta: float
    bracket: tuple[float, float]
    residual: float
    u_deriv: float
    simple: bool


@dataclass(frozen=True)
class StationaryPoint:
    y_m: float
    u_value: float
    kind: str  # positive_max | negative_min


@dataclass(frozen=True)
class PQValue:
    y: float
    p: float
    q: float
    diff: float
    intervals_used: int
    tail_bound: float


@dataclass(frozen=True)
class SimplicityReport:
    y: float
    residual: float
    u_deriv: float
    neighbor_signs: tuple[int, int]
    margin: float
    accepted: bool
    simple: bool


@lru_cache(maxsize=256)
def _line_nodes(T: float, width: float, max_panels: int):
    ts, ws, gs = eta._g_nodes(T, width, max_panels)
    return ts, ws * gs, ws * ts * gs, ws * ts * ts * gs


def u_line(y: float, order: int = 0,
           spec: eta.QuadratureSpec = eta.DEFAULT_SPEC) -> LineValue:
    """u(0, y) and its first two y-derivatives with error bounds."""
    if order not in (0, 1, 2):
        raise UsageError(f"u_line supports orders 0..2, got {order!r}")
    # t^k <= e^{kt}, so the cutoff for |Re z| = order covers the prefactor
    T = spec.cutoff_T if spec.cutoff_T is not None else eta.cutoff_T(
        float(order), min(spec.tol, eta.TAIL_TOL_CAP))
    tail = eta._tail_bound(T, float(order))
    width = eta._panel_width(abs(y))
    vals, scale = [], 0.0
    for w_scale in (1.0, 0.5):
        ts, wg, wtg, wt2g = _line_nodes(T, width * w_scale, spec.max_panels)
        if order == 0:
            vals.append(float(np.sum(wg * np.cos(y * ts))))
            scale = float(np.sum(np.abs(wg)))
        elif order == 1:
            if y == 0.0:
                vals.append(0.0)
            else:
                vals.append(-float(np.sum(wtg * np.sin(y * ts))))
            scale = float(np.sum(np.abs(wtg)))
        else:
            vals.append(-float(np.sum(wt2g * np.cos(y * ts))))
            scale = float(np.sum(np.abs(wt2g)))
    bound = tail + abs(vals[1] - vals[0]) + 1e-14 * scale
    return LineValue(vals[1], bound)


def u_envelope(y: float, spec: eta.QuadratureSpec = eta.DEFAULT_SPEC,
               half_width: float = 2.0, samples: int = 21) -> float:
    """Local amplitude scale max |u(0, .)| over y +/- half_width."""
    ys = np.linspace(max(0.0, y - half_width), y + half_width, samples)
    return max(abs(u_line(float(yy), 0, spec).value) for yy in ys)


def refine_zero(bracket: tuple[float, float], tol: float,
                spec: eta.QuadratureSpec = eta.DEFAULT_SPEC,
                order: int = 0) -> float:
    """Root of u(0, .) (or a derivative) inside a certified sign-change bracket."""
    y_lo, y_hi = bracket
    f_lo = u_line(y_lo, order, spec).value
    f_hi = u_line(y_hi, order, spec).value
    if f_lo == 0.0:
        return y_lo
    if f_hi == 0.0:
        return y_hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise UsageError(f"no sign change across bracket {bracket!r}")
    return float(brentq(lambda yy: u_line(yy, order, spec).value,
                        y_lo, y_hi, xtol=tol, rtol=8.0 * np.finfo(float).eps))


def classify_zero(y0: float, h: float = 1e-3, margin: float | None = None,
                  spec: eta.QuadratureSpec = eta.DEFAULT_SPEC) -> SimplicityReport:
    """Simplicity report for a refined zero ordinate.

    The default margin is 1e-4 of the local amplitude envelope; a candidate
    whose residual exceeds 1e-3 of the envelope is rejected outright.
    """
    env = u_envelope(y0, spec)
    if margin is None:
        margin = 1e-4 * env
    residual = abs(u_line(y0, 0, spec).value)
    deriv = abs(u_line(y0, 1, spec).value)
    lo = u_line(y0 - h, 0, spec).value
    hi = u_line(y0 + h, 0, spec).value
    signs = (int(math.copysign(1.0, lo)), int(math.copysign(1.0, hi)))
    accepted = residual <= 1e-3 * env
    simple = accepted and deriv > margin and signs[0] != signs[1]
    return SimplicityReport(y0, residual, deriv, signs, margin, accepted, simple)


def _sample(ys, order, spec, threads: int = 0):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(lambda yy: u_line(yy, order, spec).value, ys))
    return [u_line(float(yy), order, spec).value for yy in ys]


def scan_zeros(y_min: float, y_max: float, step: float = DEFAULT_STEP,
               tol: float = 1e-8, spec: eta.QuadratureSpec = eta.DEFAULT_SPEC,
               threads: int = 0) -> list[ZeroRecord]:
    """Bisection-style scan of u(0, y) for sign changes, refined per bracket."""
    if step <= 0.0:
        raise UsageError("step must be positive")
    ys = np.arange(y_min, y_max + 0.5 * step, step)
    us = _sample(ys, 0, spec, threads)
    records = []
    for a, b, fa, fb in zip(ys, ys[1:], us, us[1:]):
        if fa == 0.0 or math.copysign(1.0, fa) != math.copysign(1.0, fb):
            y0 = refine_zero((float(a), float(b)), tol, spec)
            report = classify_zero(y0, spec=spec)
            records.append(ZeroRecord(
                y=y0, t_zeta=y0 / 2.0, bracket=(float(a), float(b)),
                residual=report.residual, u_deriv=report.u_deriv,
                simple=report.simple))
    records.sort(key=lambda r: r.y)
    return records


def stationary_points(y_min: float, y_max: float, step: float = DEFAULT_STEP,
                      tol: float = 1e-8,
                      spec: eta.QuadratureSpec = eta.DEFAULT_SPEC,
                      threads: int = 0) -> list[StationaryPoint]:
    """Roots of du/dy on the line, each tagged positive_max or negative_min."""
    if step <= 0.0:
        raise UsageError("step must be positive")
    ys = np.arange(y_min, y_max + 0.5 * step, step)
    ds = _sample(ys, 1, spec, threads)
    points = []
    for a, b, fa, fb in zip(ys, ys[1:], ds, ds[1:]):
        if fa == 0.0:
            y_m = float(a)  # exact stationary sample (e.g. y = 0)
        elif math.copysign(1.0, fa) != math.copysign(1.0, fb):
            y_m = refine_zero((float(a), float(b)), tol, spec, order=1)
        else:
            continue
        u_val = u_line(y_m, 0, spec).value
        kind = "positive_max" if u_val > 0.0 else "negative_min"
        points.append(StationaryPoint(y_m, u_val, kind))
    points.sort(key=lambda p: p.y_m)
    return points


def pq(y: float, K: int | None = None,
       spec: eta.QuadratureSpec = eta.DEFAULT_SPEC) -> PQValue:
    """Alternating-interval split of u(0, y) = p(y) - q(y).

    After rescaling, u(0, y) = -(1/y^2) int_0^inf G'(t/y) sin t dt.  The
    integral over [2k pi, (2k+1) pi] contributes to p, the next one to q;
    since G' < 0 both aggregates are positive.  The mean-value form of each
    interval is replaced by its exact integral, so p - q equals u exactly.
    """
    if y < Y_FLOOR:
        raise UsageError(f"pq requires y >= {Y_FLOOR}, got {y!r}")
    T = eta.cutoff_T(1.0, spec.tol)
    K_needed = max(1, math.ceil(y * T / (2.0 * PI)))
    if K is None:
        K = K_needed
    t_max = 2.0 * K * PI
    # |int_{t_max}^inf G'(t/y) sin t dt| <= y G(t_max / y) since G' < 0
    tail = theta.G_eval(t_max / y).value / y
    if K < K_needed and tail > spec.tol:
        raise CoverageError(
            f"K={K} covers only t/y <= {t_max / y:.3f} < {T:.3f}", tail)
    x, w = eta._leggauss(eta.GAUSS_ORDER)
    edges = PI * np.arange(2 * K + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    ts = mid[:, None] + half[:, None] * x[None, :]
    gp = theta.g_values((ts / y).ravel(), order=1).reshape(ts.shape)
    I = np.sum(half[:, None] * w[None, :] * gp * np.sin(ts), axis=1)
    inv_y2 = 1.0 / (y * y)
    p = -inv_y2 * float(np.sum(I[0::2]))
    q = inv_y2 * float(np.sum(I[1::2]))
    quad_floor = 1e-15 * inv_y2 * float(np.sum(np.abs(I)))
    return PQValue(y=y, p=p, q=q, diff=p - q, intervals_used=2 * K,
                   tail_bound=tail + quad_floor)


def pq_table(y_values, K: int | None = None,
             spec: eta.QuadratureSpec = eta.DEFAULT_SPEC) -> list[dict]:
    """Batch p/q rows, CSV-ready; scaled_p = pi * y * p / G(0)."""
    g0 = theta.G_eval(0.0).value
    rows = []
    for y in y_values:
        r = pq(float(y), K, spec)
        rows.append({
            "y": r.y, "p": r.p, "q": r.q, "diff": r.diff,
            "scaled_p": PI * r.y * r.p / g0,
        })
    return rows


def ode_residual(y: float, h: float = 1e-3,
                 spec: eta.QuadratureSpec = eta.DEFAULT_SPEC):
    """Diagnostic residual R = f'' + 6 f'/y + 4 f/y^2 for f = u(0, y).

    Returns (R, ratio) with ratio = |R| y^3 / local amplitude envelope; the
    hidden constant of the governing equation is unknown, so the ratio is
    reported for trend inspection rather than asserted.
    """
    if y < 10.0:
        raise UsageError(f"ode_residual requires y >= 10, got {y!r}")
    f = u_line(y, 0, spec).value
    f1 = u_line(y, 1, spec).value
    f2 = u_line(y, 2, spec).value
    R = f2 + 6.0 * f1 / y + 4.0 * f / (y * y)
    env = u_envelope(y, spec)
    ratio = abs(R) * y ** 3 / env if env > 0.0 else math.inf
    return R, ratio
