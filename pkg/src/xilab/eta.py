"""Quadrature evaluation of eta(z) = int_0^inf G(t) cosh(zt) dt.

Three routes are provided: the G-kernel integral itself, the F-kernel form
eta = 1/2 + (z^2-1) int F(t) cosh(zt) dt, and an independent oracle that
integrates the lattice sum in the tau variable, i.e. the classical integral
for the completed zeta function xi(s) with s = (z+1)/2.

All routes use composite fixed-order Gauss-Legendre panels (or adaptive
bisection) on a finite interval whose certified tail is below tol/2, and
report an absolute error bound = tail + one-step refinement difference +
a roundoff floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import theta
from .theta import PI, RATIO_BOUND, ConvergenceError, UsageError

GAUSS_ORDER = 16
DEFAULT_TOL = 1e-10
# truncation is cheap (doubly exponential decay), so cut no looser than this
TAIL_TOL_CAP = 1e-17
X_ABS_MAX = 2.0

# prefactors of the closed-form integrand majorants
_G_PREF = 16.0 * PI * PI / (1.0 - RATIO_BOUND)
_F_PREF = 1.0 / (1.0 - math.exp(-3.0 * PI))


@dataclass(frozen=True)
class QuadratureSpec:
    tol: float = DEFAULT_TOL
    cutoff_T: float | None = None  # None: derived from |Re z| and tol
    max_panels: int = 8192
    panel_rule: str = "fixed_order_panels"

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise UsageError("tol must be positive")
        if self.panel_rule not in ("fixed_order_panels", "adaptive_bisection"):
            raise UsageError(f"unknown panel_rule {self.panel_rule!r}")


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_bound: float
    route: str


@dataclass(frozen=True)
class UV:
    u: float
    v: float
    u_bound: float
    v_bound: float


DEFAULT_SPEC = QuadratureSpec()


def transform(point: complex, direction: str) -> complex:
    """Map between the s-plane and the recentered z-plane, z = 2s - 1."""
    if direction == "s_to_z":
        return 2.0 * point - 1.0
    if direction == "z_to_s":
        return (point + 1.0) / 2.0
    raise UsageError(f"direction must be s_to_z or z_to_s, got {direction!r}")


def integrand_bound(t: float, x_abs: float) -> float:
    """Majorant of |G(t) cosh(zt)| valid for every z with |Re z| <= x_abs."""
    return _G_PREF * math.exp((x_abs + 9.0) * t - PI * math.exp(4.0 * t))


def _tail_bound(T: float, x_abs: float) -> float:
    """Bound on int_T^inf of the majorant.

    The exponent phi(t) = (x_abs+9)t - pi e^{4t} has phi' <= -(4 pi e^{4T}
    - x_abs - 9) < 0 for t >= T, so the tail is at most the integrand at T
    divided by that decay rate.
    """
    decay = 4.0 * PI * math.exp(4.0 * T) - (x_abs + 9.0)
    if decay <= 0.0:
        return math.inf
    return integrand_bound(T, x_abs) / decay


@lru_cache(maxsize=4096)
def cutoff_T(x_abs: float, tol: float) -> float:
    """Smallest grid T whose certified tail is below tol/2."""
    if not (tol > 0.0):
        raise UsageError("tol must be positive")
    for k in range(10, 400):
        T = 0.01 * k
        if _tail_bound(T, x_abs) < 0.5 * tol:
            return T
    raise ConvergenceError(f"no cutoff below T=4 for x_abs={x_abs}, tol={tol}")


def _f_tail_bound(T: float, x_abs: float) -> float:
    """Tail of the F-route majorant e^{(x+1)t - pi e^{4t}} / (1 - e^{-3 pi})."""
    decay = 4.0 * PI * math.exp(4.0 * T) - (x_abs + 1.0)
    if decay <= 0.0:
        return math.inf
    return _F_PREF * math.exp((x_abs + 1.0) * T - PI * math.exp(4.0 * T)) / decay


def _f_cutoff(x_abs: float, tol: float) -> float:
    for k in range(10, 400):
        T = 0.01 * k
        if _f_tail_bound(T, x_abs) < 0.5 * tol:
            return T
    raise ConvergenceError("no F-route cutoff found")


@lru_cache(maxsize=None)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=256)
def _panel_nodes(T: float, width: float, max_panels: int):
    """Gauss-Legendre nodes/weights tiling [0, T] with panels <= width."""
    n_panels = max(1, math.ceil(T / width))
    if n_panels > max_panels:
        raise ConvergenceError(
            f"panel budget exhausted: need {n_panels} > {max_panels}"
        )
    x, w = _leggauss(GAUSS_ORDER)
    edges = np.linspace(0.0, T, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    ts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return ts, ws


def _panel_width(y_abs: float) -> float:
    """Quarter of the oscillation period, capped for the smooth regime.

    Quantized to 0.1 / 2^k so node caches are shared across nearby y.
    """
    w = min(0.1, (2.0 * PI / max(y_abs, 1.0)) / 4.0)
    if w >= 0.1:
        return 0.1
    return 0.1 / (2.0 ** math.ceil(math.log2(0.1 / w)))


def _x_eff(x_abs: float) -> float:
    """Round |Re z| up to a coarse grid for cutoff/tail caching."""
    return min(X_ABS_MAX, math.ceil(x_abs * 4.0) / 4.0)


@lru_cache(maxsize=256)
def _g_nodes(T: float, width: float, max_panels: int):
    ts, ws = _panel_nodes(T, width, max_panels)
    return ts, ws, theta.g_values(ts)


@lru_cache(maxsize=256)
def _f_nodes(T: float, width: float, max_panels: int):
    ts, ws = _panel_nodes(T, width, max_panels)
    return ts, ws, theta.f_values(ts)


def _kernel_quad(z: complex, T: float, width: float, spec: QuadratureSpec,
                 nodes_fn) -> tuple[complex, float]:
    """Integral of K(t) cosh(zt) on [0, T] plus a discretization bound."""
    if spec.panel_rule == "adaptive_bisection":
        return _kernel_quad_adaptive(z, T, spec, nodes_fn)
    vals = []
    scale = 0.0
    for w_scale in (1.0, 0.5):
        ts, ws, ks = nodes_fn(T, width * w_scale, spec.max_panels)
        integrand = ks * np.cosh(z * ts)
        vals.append(np.sum(ws * integrand))
        scale = float(np.sum(ws * np.abs(integrand)))
    disc = abs(vals[1] - vals[0]) + 1e-14 * scale
    return vals[1], disc


def _kernel_quad_adaptive(z: complex, T: float, spec: QuadratureSpec,
                          nodes_fn) -> tuple[complex, float]:
    """Adaptive panel bisection driven by coarse/fine disagreement."""
    x, w = _leggauss(GAUSS_ORDER)

    def panel(a, b):
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        ts = mid + half * x
        vals = theta.g_values(ts) if nodes_fn is _g_nodes else theta.f_values(ts)
        integrand = vals * np.cosh(z * ts)
        return np.sum(half * w * integrand), float(np.sum(half * w * np.abs(integrand)))

    total = 0.0 + 0.0j
    disc = 0.0
    scale = 0.0
    stack = [(0.0, T)]
    used = 0
    while stack:
        a, b = stack.pop()
        used += 1
        if used > spec.max_panels:
            raise ConvergenceError("adaptive panel budget exhausted")
        coarse, _ = panel(a, b)
        m = 0.5 * (a + b)
        f1, s1 = panel(a, m)
        f2, s2 = panel(m, b)
        err = abs(coarse - (f1 + f2))
        if err > 0.25 * spec.tol * (b - a) / T and (b - a) > 1e-4:
            stack.append((a, m))
            stack.append((m, b))
        else:
            total += f1 + f2
            disc += err
            scale += s1 + s2
    return total, disc + 1e-14 * scale


def eta(z: complex, spec: QuadratureSpec = DEFAULT_SPEC,
        route: str = "via_G") -> EvalResult:
    """Evaluate eta(z) along the requested kernel route."""
    z = complex(z)
    x_abs = min(abs(z.real), X_ABS_MAX) if abs(z.real) <= X_ABS_MAX else None
    if x_abs is None:
        raise UsageError(f"|Re z| <= {X_ABS_MAX} required, got {z!r}")
    width = _panel_width(abs(z.imag))
    if route == "via_G":
        T = spec.cutoff_T if spec.cutoff_T is not None else cutoff_T(_x_eff(x_abs), min(spec.tol, TAIL_TOL_CAP))
        tail = _tail_bound(T, x_abs)
        value, disc = _kernel_quad(z, T, width, spec, _g_nodes)
        return EvalResult(value, tail + disc, "via_G")
    if route == "via_F":
        T = spec.cutoff_T if spec.cutoff_T is not None else _f_cutoff(
            x_abs, spec.tol / max(1.0, abs(z * z - 1.0)))
        factor = z * z - 1.0
        tail = _f_tail_bound(T, x_abs) * abs(factor)
        integral, disc = _kernel_quad(z, T, width, spec, _f_nodes)
        return EvalResult(0.5 + factor * integral, tail + abs(factor) * disc, "via_F")
    if route == "oracle_xi":
        return xi_oracle(transform(z, "z_to_s"), spec)
    raise UsageError(f"unknown route {route!r}")


def uv(x: float, y: float, spec: QuadratureSpec = DEFAULT_SPEC) -> UV:
    """Real and imaginary parts of eta(x + iy) via the G kernel.

    u = int G cosh(xt) cos(yt) dt, v = int G sinh(xt) sin(yt) dt.
    v vanishes identically (no quadrature) for x = 0 or y = 0.
    """
    x_abs = abs(x)
    if x_abs > X_ABS_MAX:
        raise UsageError(f"|x| <= {X_ABS_MAX} required, got {x!r}")
    T = spec.cutoff_T if spec.cutoff_T is not None else cutoff_T(_x_eff(x_abs), min(spec.tol, TAIL_TOL_CAP))
    tail = _tail_bound(T, x_abs)
    width = _panel_width(abs(y))
    vals_u, vals_v, scale = [], [], 0.0
    for w_scale in (1.0, 0.5):
        ts, ws, gs = _g_nodes(T, width * w_scale, spec.max_panels)
        wg = ws * gs
        vals_u.append(float(np.sum(wg * np.cosh(x * ts) * np.cos(y * ts))))
        if x == 0.0 or y == 0.0:
            vals_v.append(0.0)
        else:
            vals_v.append(float(np.sum(wg * np.sinh(x * ts) * np.sin(y * ts))))
        scale = float(np.sum(np.abs(wg)) * math.cosh(x_abs * T))
    floor = 1e-14 * scale
    u_bound = tail + abs(vals_u[1] - vals_u[0]) + floor
    if x == 0.0 or y == 0.0:
        v_bound = 0.0
    else:
        v_bound = tail + abs(vals_v[1] - vals_v[0]) + floor
    return UV(vals_u[1], vals_v[1], u_bound, v_bound)


def uv_grid(xs: np.ndarray, ys: np.ndarray,
            spec: QuadratureSpec = DEFAULT_SPEC):
    """Batch u, v over the tensor grid xs x ys.

    Returns (U, V, bound) with U[i, j] = u(xs[i], ys[j]).  The quadrature
    nodes are shared across the whole grid, so the evaluation reduces to two
    matrix products per refinement level.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x_abs = float(np.max(np.abs(xs))) if xs.size else 0.0
    if x_abs > X_ABS_MAX:
        raise UsageError(f"|x| <= {X_ABS_MAX} required in grid")
    T = spec.cutoff_T if spec.cutoff_T is not None else cutoff_T(_x_eff(x_abs), min(spec.tol, TAIL_TOL_CAP))
    tail = _tail_bound(T, x_abs)
    width = _panel_width(float(np.max(np.abs(ys))) if ys.size else 0.0)
    out = []
    scale = 0.0
    for w_scale in (1.0, 0.5):
        ts, ws, gs = _g_nodes(T, width * w_scale, spec.max_panels)
        wg = ws * gs
        cosh_x = np.cosh(np.outer(xs, ts))
        sinh_x = np.sinh(np.outer(xs, ts))
        cos_y = np.cos(np.outer(ys, ts))
        sin_y = np.sin(np.outer(ys, ts))
        U = (cosh_x * wg) @ cos_y.T
        V = (sinh_x * wg) @ sin_y.T
        out.append((U, V))
        scale = float(np.sum(np.abs(wg)) * math.cosh(x_abs * T))
    (U0, V0), (U1, V1) = out
    disc = max(float(np.max(np.abs(U1 - U0))), float(np.max(np.abs(V1 - V0))))
    bound = tail + disc + 1e-14 * scale
    # exact zeros of v on the axes, independent of quadrature roundoff
    V1[xs == 0.0, :] = 0.0
    V1[:, ys == 0.0] = 0.0
    return U1, V1, bound


# oracle route: xi(s) = 1/2 + s(s-1)/2 * int_1^inf psi(tau)
#               (tau^{s/2-1} + tau^{-(1+s)/2}) dtau, integrated in l = ln tau.


def _oracle_tail(L: float, m: float) -> float:
    decay = PI * math.exp(L) - m
    if decay <= 0.0:
        return math.inf
    return 2.0 * _F_PREF * math.exp(m * L - PI * math.exp(L)) / decay


def _oracle_cutoff(m: float, tol: float) -> float:
    for k in range(20, 800):
        L = 0.01 * k
        if _oracle_tail(L, m) < 0.5 * tol:
            return L
    raise ConvergenceError("no oracle cutoff found")


def xi_oracle(s: complex, spec: QuadratureSpec = DEFAULT_SPEC) -> EvalResult:
    """Independent evaluation of xi(s) from the lattice-sum integral."""
    s = complex(s)
    pref = 0.5 * s * (s - 1.0)
    m = max(s.real / 2.0, (1.0 - s.real) / 2.0, 0.0)
    point_tol = spec.tol / max(1.0, abs(pref))
    L = _oracle_cutoff(m, point_tol)
    tail = _oracle_tail(L, m) * abs(pref)
    width = min(0.25, PI / max(abs(s.imag), 1.0))
    vals = []
    scale = 0.0
    for w_scale in (1.0, 0.5):
        ls, ws = _panel_nodes(L, width * w_scale, spec.max_panels)
        ps = theta.psi_values(np.exp(ls))
        integrand = ps * (np.exp(0.5 * s * ls) + np.exp(0.5 * (1.0 - s) * ls))
        vals.append(np.sum(ws * integrand))
        scale = float(np.sum(ws * np.abs(integrand)))
    disc = abs(vals[1] - vals[0]) + 1e-14 * scale
    value = 0.5 + pref * vals[1]
    return EvalResult(value, tail + abs(pref) * disc, "oracle_xi")


def identity_eq17_check(z: complex, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Residual of (z^2-1) int F cosh(zt) dt = F'(0) + int G cosh(zt) dt,

    with the two sides computed on independent kernel paths.
    """
    z = complex(z)
    x_abs = min(abs(z.real), X_ABS_MAX)
    width = _panel_width(abs(z.imag))
    Tf = _f_cutoff(x_abs, spec.tol)
    f_int, _ = _kernel_quad(z, Tf, width, spec, _f_nodes)
    Tg = cutoff_T(x_abs, spec.tol)
    g_int, _ = _kernel_quad(z, Tg, width, spec, _g_nodes)
    lhs = (z * z - 1.0) * f_int
    rhs = theta.F_eval(0.0, 1).value + g_int
    return abs(lhs - rhs)


def cr_check(z: complex, h: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Central-difference Cauchy-Riemann residuals (|u_x - v_y|, |u_y + v_x|)."""
    if not (h > 0.0):
        raise UsageError("h must be positive")
    x, y = z.real, z.imag
    px = uv(x + h, y, spec)
    mx = uv(x - h, y, spec)
    py = uv(x, y + h, spec)
    my = uv(x, y - h, spec)
    u_x = (px.u - mx.u) / (2.0 * h)
    u_y = (py.u - my.u) / (2.0 * h)
    v_x = (px.v - mx.v) / (2.0 * h)
    v_y = (py.v - my.v) / (2.0 * h)
    return abs(u_x - v_y), abs(u_y + v_x)
