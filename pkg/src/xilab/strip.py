"""Sign rasterization of u/v over the strip and v = 0 curve tracing.

The half-strip 0 <= x <= 1 (extended up to x = 2) is sampled on a tensor
grid; sign transitions of v between adjacent nodes are refined by bisection
along cell edges and assembled into polyline curves by marching squares.
Each curve carries the u-values sampled along it, which is the numerical
audit of the off-line zero-freeness claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import eta
from .theta import UsageError


@dataclass(frozen=True)
class Region:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.x_min < 0.0:
            raise UsageError("x_min >= 0 required (use symmetry for x < 0)")
        if self.x_max > 2.0:
            raise UsageError("x_max <= 2 required")
        if self.nx < 2 or self.ny < 2:
            raise UsageError("nx, ny >= 2 required")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise UsageError("empty region")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)


@dataclass
class SignGrid:
    region: Region
    field: str  # "u" | "v"
    signs: np.ndarray  # nx x ny of {-1, 0, +1}
    values: np.ndarray  # nx x ny
    bound: float


@dataclass
class Curve:
    points: list
    v_residual_max: float
    u_values: list
    u_min_abs: float
    u_sign: int
    start_anchor: object = None
    cells: list = field(default_factory=list)  # cell ids per point (<=2 each)


@dataclass(frozen=True)
class JoinFlag:
    location: tuple
    distance_cells: float
    curve_ids: tuple
    u: float
    v: float


@dataclass(frozen=True)
class BifurcationFlag:
    cell: tuple
    location: tuple
    curve_id: int
    point_count: int
    u: float
    v: float


@dataclass
class AnomalyReport:
    joins: list
    bifurcations: list

    @property
    def count(self) -> int:
        return len(self.joins) + len(self.bifurcations)


def sign_grid(region: Region, field_name: str,
              spec: eta.QuadratureSpec = eta.DEFAULT_SPEC) -> SignGrid:
    """Rasterize u or v over the region with an error-bound zero band."""
    if field_name not in ("u", "v"):
        raise UsageError(f"field must be 'u' or 'v', got {field_name!r}")
    U, V, bound = eta.uv_grid(region.xs, region.ys, spec)
    values = U if field_name == "u" else V
    signs = np.where(np.abs(values) <= bound, 0, np.sign(values)).astype(int)
    return SignGrid(region, field_name, signs, values, bound)


def _default_v(spec):
    def v_func(x, y):
        return eta.uv(x, y, spec).v
    return v_func


def _default_u(spec):
    def u_func(x, y):
        return eta.uv(x, y, spec).u
    return u_func


def trace_curves(grid: SignGrid, refine_tol: float = 1e-12,
                 spec: eta.QuadratureSpec = eta.DEFAULT_SPEC,
                 v_func=None, u_func=None,
                 anchors=None) -> list[Curve]:
    """Marching-squares extraction of the v = 0 curves on the grid.

    Cell edges whose endpoints carry strictly opposite signs are refined by
    bisection on the true v along the edge.  Nodes on the trivial zero lines
    x = 0 and y = 0 are excluded, so those axes never spawn curves.  Saddle
    cells (four crossings) are disambiguated by the sign of v at the cell
    center.  If anchors (stationary points) are given, curves reaching the
    low-x edge get the nearest anchor attached.
    """
    if grid.field != "v":
        raise UsageError("trace_curves expects a v-field grid")
    if v_func is None:
        v_func = _default_v(spec)
    if u_func is None:
        u_func = _default_u(spec)
    xs, ys = grid.region.xs, grid.region.ys
    vals = grid.values
    nx, ny = grid.region.nx, grid.region.ny

    def excluded(i, j):
        return xs[i] == 0.0 or ys[j] == 0.0

    crossings = {}  # edge id -> (x, y, |v|)

    def edge_cross(i0, j0, i1, j1):
        key = (i0, j0, i1, j1)
        if key in crossings:
            return key
        if excluded(i0, j0) or excluded(i1, j1):
            return None
        a, b = vals[i0, j0], vals[i1, j1]
        if a == 0.0 or b == 0.0 or math.copysign(1.0, a) == math.copysign(1.0, b):
            return None
        x0, y0 = xs[i0], ys[j0]
        x1, y1 = xs[i1], ys[j1]

        def along(t):
            return v_func(x0 + t * (x1 - x0), y0 + t * (y1 - y0))

        t = brentq(along, 0.0, 1.0, xtol=1e-12)
        px, py = x0 + t * (x1 - x0), y0 + t * (y1 - y0)
        crossings[key] = (px, py, abs(along(t)))
        return key

    # per-cell segments between edge crossings
    segments = []  # (edge_key_a, edge_key_b, cell)
    for i in range(nx - 1):
        for j in range(ny - 1):
            e_bottom = edge_cross(i, j, i + 1, j)
            e_top = edge_cross(i, j + 1, i + 1, j + 1)
            e_left = edge_cross(i, j, i, j + 1)
            e_right = edge_cross(i + 1, j, i + 1, j + 1)
            present = [e for e in (e_bottom, e_top, e_left, e_right) if e]
            cell = (i, j)
            if len(present) == 2:
                segments.append((present[0], present[1], cell))
            elif len(present) == 4:
                # saddle: pair edges by the center sample of v
                cx = 0.5 * (xs[i] + xs[i + 1])
                cy = 0.5 * (ys[j] + ys[j + 1])
                center = v_func(cx, cy)
                corner = vals[i, j]  # sign of the (i, j) corner
                same = math.copysign(1.0, center) == math.copysign(1.0, corner)
                if same:
                    segments.append((e_left, e_top, cell))
                    segments.append((e_bottom, e_right, cell))
                else:
                    segments.append((e_left, e_bottom, cell))
                    segments.append((e_top, e_right, cell))
            elif len(present) != 0:
                # odd count can only come from excluded-node truncation;
                # drop the dangling crossing rather than fake a segment
                continue

    # assemble chains: every edge key has degree <= 2
    adj = {}
    for a, b, cell in segments:
        adj.setdefault(a, []).append((b, cell))
        adj.setdefault(b, []).append((a, cell))

    seen = set()
    curves = []
    for start in adj:
        if start in seen or len(adj[start]) > 1:
            continue
        chain = _walk(adj, start, seen)
        curves.append(chain)
    # remaining untouched nodes belong to closed loops
    for start in adj:
        if start not in seen:
            curves.append(_walk(adj, start, seen))

    out = []
    for cid, chain in enumerate(curves):
        pts, cells = [], []
        res = 0.0
        for key, cell_list in chain:
            px, py, r = crossings[key]
            pts.append((px, py))
            cells.append(tuple(cell_list))
            res = max(res, r)
        u_vals = [u_func(px, py) for px, py in pts]
        u_min_abs = min(abs(u) for u in u_vals)
        u_sign = int(math.copysign(1.0, u_vals[0]))
        curve = Curve(points=pts, v_residual_max=res, u_values=u_vals,
                      u_min_abs=u_min_abs, u_sign=u_sign, cells=cells)
        if anchors:
            x_edge = xs[1] if xs[0] == 0.0 else xs[0]
            if any(abs(px - x_edge) <= grid.region.dx for px, _ in pts[:1] + pts[-1:]):
                ay = pts[0][1] if abs(pts[0][0] - x_edge) <= abs(pts[-1][0] - x_edge) \
                    else pts[-1][1]
                curve.start_anchor = min(anchors, key=lambda a: abs(a.y_m - ay))
        out.append(curve)
    return out


def _walk(adj, start, seen):
    """Follow a chain of edge crossings, recording incident cells per point."""
    chain = []
    prev = None
    node = start
    while node is not None and node not in seen:
        seen.add(node)
        cells = [cell for _, cell in adj[node]]
        chain.append((node, cells))
        nxt = None
        for other, _ in adj[node]:
            if other != prev and other not in seen:
                nxt = other
                break
        prev, node = node, nxt
    return chain


@dataclass(frozen=True)
class CurveAudit:
    u_sign_constant: bool
    u_sign: int
    u_min_abs: float
    tangential_du_signs: list


def curve_audit(curve: Curve, spec: eta.QuadratureSpec = eta.DEFAULT_SPEC) -> CurveAudit:
    """Constancy of sign(u) along the curve plus the tangential u-derivative.

    The directional derivative of u along the polyline tangent is estimated
    by finite differences between consecutive traced points.
    """
    signs = {int(math.copysign(1.0, u)) for u in curve.u_values}
    du_signs = []
    for (p0, p1), (u0, u1) in zip(zip(curve.points, curve.points[1:]),
                                  zip(curve.u_values, curve.u_values[1:])):
        ds = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
        if ds > 0.0:
            du_signs.append(int(math.copysign(1.0, (u1 - u0) / ds)))
    return CurveAudit(
        u_sign_constant=len(signs) == 1,
        u_sign=curve.u_sign,
        u_min_abs=curve.u_min_abs,
        tangential_du_signs=du_signs,
    )


def off_line_min_modulus(region: Region, x_exclusion: float = 0.0,
                         spec: eta.QuadratureSpec = eta.DEFAULT_SPEC):
    """Minimum |eta| over grid nodes with x > x_exclusion, with its location."""
    if x_exclusion < 0.0:
        raise UsageError("x_exclusion must be >= 0")
    U, V, _ = eta.uv_grid(region.xs, region.ys, spec)
    mod = np.hypot(U, V)
    keep = region.xs > x_exclusion
    if not np.any(keep):
        raise UsageError("exclusion removes every grid column")
    sub = mod[keep, :]
    i_rel, j = np.unravel_index(np.argmin(sub), sub.shape)
    i = np.nonzero(keep)[0][i_rel]
    return float(mod[i, j]), (float(region.xs[i]), float(region.ys[j]))


def anomaly_scan(curves: list[Curve], grid: SignGrid) -> AnomalyReport:
    """Advisory scan for curve joins and bifurcation candidates.

    A join candidate is a pair of distinct curves approaching within one
    cell diagonal; a bifurcation candidate is a cell carrying three or more
    traced points of a single curve.  Flags are surfaced for inspection,
    never auto-failed.
    """
    dx, dy = grid.region.dx, grid.region.dy
    joins = []
    for a in range(len(curves)):
        pa = np.array(curves[a].points, dtype=float)
        if pa.size == 0:
            continue
        for b in range(a + 1, len(curves)):
            pb = np.array(curves[b].points, dtype=float)
            if pb.size == 0:
                continue
            d2 = ((pa[:, None, 0] - pb[None, :, 0]) / dx) ** 2 + \
                 ((pa[:, None, 1] - pb[None, :, 1]) / dy) ** 2
            k = np.unravel_index(np.argmin(d2), d2.shape)
            dist = math.sqrt(float(d2[k]))
            if dist <= math.sqrt(2.0):
                loc = tuple(pa[k[0]])
                joins.append(JoinFlag(
                    location=loc, distance_cells=dist, curve_ids=(a, b),
                    u=curves[a].u_values[k[0]], v=curves[a].v_residual_max))
    bifurcations = []
    for cid, curve in enumerate(curves):
        per_cell = {}
        for idx, cells in enumerate(curve.cells):
            for cell in cells:
                per_cell.setdefault(cell, []).append(idx)
        for cell, idxs in sorted(per_cell.items()):
            if len(idxs) >= 3:
                idx = idxs[0]
                bifurcations.append(BifurcationFlag(
                    cell=cell, location=curve.points[idx], curve_id=cid,
                    point_count=len(idxs), u=curve.u_values[idx],
                    v=curve.v_residual_max))
    return AnomalyReport(joins=joins, bifurcations=bifurcations)
