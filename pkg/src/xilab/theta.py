"""Theta-type series kernels with certified truncation.

The building blocks are the lattice sum ``psi(tau) = sum_n exp(-pi n^2 tau)``,
its log-variable form ``F(t) = psi(e^{4t}) e^t`` and the even, fast-decaying
kernel ``G = F'' - F``.  Every term of F and its derivatives has the shape
``exp(t - w) * P(w)`` with ``w = pi n^2 e^{4t}`` and P a small polynomial in w,
so all evaluators share one summation engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PI = math.pi

# Certified geometric ratio of consecutive G-series terms for t >= 0.
RATIO_BOUND = 28.0 * math.exp(-3.0 * PI)

# Direct summation of psi is used down to this tau; below it the modular
# relation 2*psi(tau)+1 = tau^{-1/2} * (2*psi(1/tau)+1) restores fast decay.
PSI_DIRECT_MIN = 0.3

# Widest t-range the direct series is evaluated on; |t| beyond 1 on the
# negative side is reflected through the even symmetry of G.
T_NEG_MAX = 1.0


class DomainError(ValueError):
    """Argument outside the supported domain."""


class UsageError(ValueError):
    """Malformed call (bad order, bad tolerance, ...)."""


class ConvergenceError(RuntimeError):
    """Requested tolerance not reached within the term budget."""


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-12
    ratio_bound: float = RATIO_BOUND
    max_terms: int = 64

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise UsageError("tol must be positive")
        if not (0.0 < self.ratio_bound < 1.0):
            raise UsageError("ratio_bound must lie in (0, 1)")


@dataclass(frozen=True)
class TruncatedValue:
    value: float
    terms_used: int
    tail_bound: float


DEFAULT_POLICY = TruncationPolicy()

# Term polynomials in w = pi n^2 e^{4t}, ascending coefficients.
# Differentiating exp(t - w) P(w) in t maps P to (1 - 4w) P + 4w P'.


def _advance(poly):
    out = [0.0] * (len(poly) + 1)
    for k, c in enumerate(poly):
        out[k] += (1.0 + 4.0 * k) * c
        out[k + 1] -= 4.0 * c
    return tuple(out)


_F_POLYS = [(1.0,)]
for _ in range(2):
    _F_POLYS.append(_advance(_F_POLYS[-1]))

# G = F'' - F  =>  P = (1, -24, 16) - (1,) = (0, -24, 16), then derivatives.
_G_POLYS = [(0.0, -24.0, 16.0)]
for _ in range(3):
    _G_POLYS.append(_advance(_G_POLYS[-1]))


def _polyval(poly, w):
    acc = 0.0
    for c in reversed(poly):
        acc = acc * w + c
    return acc


def _poly_env(poly, w):
    """Upper bound sum |c_k| w^k, used for rigorous tail envelopes."""
    acc = 0.0
    for c in reversed(poly):
        acc = acc * w + abs(c)
    return acc


def _term_env(t, e4t, poly, n):
    w = PI * n * n * e4t
    return math.exp(t - w) * _poly_env(poly, w)


def _series_sum(t: float, poly, policy: TruncationPolicy) -> TruncatedValue:
    """Sum exp(t - w_n) P(w_n) over n >= 1 with a certified tail bound.

    For t >= 0 and deg P <= 2 the tail of the partial sum is bounded by the
    last term times r/(1-r) with r = 28 e^{-3 pi}.  The generic fallback
    chains term envelopes: once env(n+2) <= env(n+1)/2 the remaining tail is
    at most 2 env(n+1), because the envelope ratio keeps shrinking with n.
    """
    e4t = math.exp(4.0 * t)
    r = policy.ratio_bound
    total = 0.0
    for n in range(1, policy.max_terms + 1):
        w = PI * n * n * e4t
        term = math.exp(t - w) * _polyval(poly, w)
        total += term
        env1 = _term_env(t, e4t, poly, n + 1)
        env2 = _term_env(t, e4t, poly, n + 2)
        if env2 <= 0.5 * env1:
            tail = 2.0 * env1
            if t >= 0.0 and len(poly) <= 3:
                tail = min(tail, abs(term) * r / (1.0 - r))
            if tail <= policy.tol:
                return TruncatedValue(total, n, tail)
    raise ConvergenceError(
        f"series did not reach tol={policy.tol:g} within "
        f"{policy.max_terms} terms at t={t:g}"
    )


def psi(tau: float, policy: TruncationPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """Lattice sum psi(tau) = sum_{n>=1} exp(-pi n^2 tau), tau > 0."""
    if not (tau > 0.0):
        raise DomainError(f"psi requires tau > 0, got {tau!r}")
    if tau < PSI_DIRECT_MIN:
        inner = psi(1.0 / tau, policy)
        scale = tau ** -0.5
        value = 0.5 * (scale * (2.0 * inner.value + 1.0) - 1.0)
        return TruncatedValue(value, inner.terms_used, scale * inner.tail_bound)
    rho = math.exp(-3.0 * PI * tau)
    total = 0.0
    for n in range(1, policy.max_terms + 1):
        term = math.exp(-PI * n * n * tau)
        total += term
        tail = term * rho / (1.0 - rho)
        if tail <= policy.tol:
            return TruncatedValue(total, n, tail)
    raise ConvergenceError(f"psi series stalled at tau={tau:g}")


def psi_deriv(tau: float, order: int,
              policy: TruncationPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """Termwise derivative of psi; supports order 1 and 2, tau >= 1."""
    if order not in (1, 2):
        raise UsageError(f"unsupported psi derivative order {order}")
    if not (tau > 0.0):
        raise DomainError(f"psi_deriv requires tau > 0, got {tau!r}")
    sign = -1.0 if order == 1 else 1.0
    rho = math.exp(-3.0 * PI * max(tau, PSI_DIRECT_MIN)) * 16.0
    total = 0.0
    for n in range(1, policy.max_terms + 1):
        term = sign * (PI * n * n) ** order * math.exp(-PI * n * n * tau)
        total += term
        tail = abs(term) * rho / (1.0 - rho)
        if tail <= policy.tol:
            return TruncatedValue(total, n, tail)
    raise ConvergenceError(f"psi_deriv series stalled at tau={tau:g}")


def F_eval(t: float, order: int = 0,
           policy: TruncationPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """F(t) and its first two derivatives, termwise differentiated."""
    if order not in (0, 1, 2):
        raise UsageError(f"F_eval supports orders 0..2, got {order!r}")
    if t < -T_NEG_MAX:
        raise DomainError(f"F_eval limited to t >= {-T_NEG_MAX}, got {t!r}")
    return _series_sum(t, _F_POLYS[order], policy)


def G_eval(t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """Kernel G(t) = F''(t) - F(t); even in t, reflected for t < -1."""
    if t < -T_NEG_MAX:
        t = -t
    return _series_sum(t, _G_POLYS[0], policy)


def G_deriv(t: float, order: int,
            policy: TruncationPolicy = DEFAULT_POLICY) -> TruncatedValue:
    """Termwise derivatives of G; orders 1 and 3 are used downstream."""
    if order not in (1, 2, 3):
        raise UsageError(f"G_deriv supports orders 1..3, got {order!r}")
    if t < -T_NEG_MAX:
        # odd orders flip sign under reflection
        ref = _series_sum(-t, _G_POLYS[order], policy)
        sign = -1.0 if order % 2 else 1.0
        return TruncatedValue(sign * ref.value, ref.terms_used, ref.tail_bound)
    return _series_sum(t, _G_POLYS[order], policy)


def g_tau_form(t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Independent route for G via the tau variable:

    G(t) = (16 tau^2 psi''(tau) + 24 tau psi'(tau)) e^t with tau = e^{4t}.
    Used as a cross-check against the direct series.
    """
    tau = math.exp(4.0 * t)
    d1 = psi_deriv(tau, 1, policy).value
    d2 = psi_deriv(tau, 2, policy).value
    return (16.0 * tau * tau * d2 + 24.0 * tau * d1) * math.exp(t)


def terms_needed(t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> int:
    """Terms of the G series required to certify policy.tol at this t."""
    return G_eval(t, policy).terms_used


def g_values(ts: np.ndarray, order: int = 0, n_terms: int = 6) -> np.ndarray:
    """Vectorized G (or derivative) on an array of t >= 0 quadrature nodes.

    With n_terms = 6 the dropped tail is below 1e-17 relative to G(0) for
    every t >= 0, far under the quadrature tolerances used downstream.
    """
    ts = np.asarray(ts, dtype=float)
    poly = _G_POLYS[order]
    e4t = np.exp(4.0 * ts)
    total = np.zeros_like(ts)
    for n in range(1, n_terms + 1):
        # clamp w: exp(t - w) underflows to 0 long before 700 anyway
        w = np.minimum(PI * n * n * e4t, 700.0)
        pv = np.zeros_like(ts)
        for c in reversed(poly):
            pv = pv * w + c
        total += np.exp(ts - w) * pv
    return total


def f_values(ts: np.ndarray, order: int = 0, n_terms: int = 6) -> np.ndarray:
    """Vectorized F (or derivative) on an array of t >= 0 nodes."""
    ts = np.asarray(ts, dtype=float)
    poly = _F_POLYS[order]
    e4t = np.exp(4.0 * ts)
    total = np.zeros_like(ts)
    for n in range(1, n_terms + 1):
        # clamp w: exp(t - w) underflows to 0 long before 700 anyway
        w = np.minimum(PI * n * n * e4t, 700.0)
        pv = np.zeros_like(ts)
        for c in reversed(poly):
            pv = pv * w + c
        total += np.exp(ts - w) * pv
    return total


def psi_values(taus: np.ndarray, n_terms: int = 6) -> np.ndarray:
    """Vectorized psi on an array of tau >= 1 nodes."""
    taus = np.asarray(taus, dtype=float)
    total = np.zeros_like(taus)
    for n in range(1, n_terms + 1):
        total += np.exp(-PI * n * n * taus)
    return total
