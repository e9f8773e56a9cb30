"""Grid-based Legendre-Fenchel machinery in one variable.

Convex functions of the momentum (or velocity) variable are carried as
values on uniform grids with +inf marking points outside the effective
domain. The conjugate is the exact maximum over finite nodes, so conjugates
are convex by construction and every bound proved for the continuous
transform holds here up to grid resolution h.

Epigraphs and bounded epigraph slices are materialized as polygon bodies in
the (v, eta) plane; the lower boundary interpolates the sampled graph, so a
convex source function yields an inner polygonal approximation of the true
epigraph.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .convex_geom import ConvexBody
from .errors import CapTooLow, EmptyResult, ImproperFunction, UnboundedSummand
from .report import CheckReport

INF_THRESHOLD = 1e12


@dataclasses.dataclass(frozen=True)
class UniformGrid:
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("grid bounds must be finite")
        if self.hi <= self.lo:
            raise ValueError("grid needs hi > lo")
        if self.count < 2:
            raise ValueError("grid needs at least 2 nodes")

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.count - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclasses.dataclass(frozen=True)
class EffectiveDomain:
    """Interval hull of the finite nodes, with advisory endpoint flags."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def shrink(self, delta: float) -> tuple[float, float] | None:
        lo, hi = self.lo + delta, self.hi - delta
        if lo > hi:
            return None
        return lo, hi


class ConvexGridFunction:
    """Proper extended-real function sampled on a uniform grid.

    Values may be +inf (never -inf, never NaN); the finite nodes must form
    one contiguous run. With convex_flag set, midpoint convexity on the
    finite nodes is validated to 1e-9 at construction.
    """

    __slots__ = ("grid", "values", "convex_flag")

    def __init__(self, grid: UniformGrid, values, convex_flag: bool = False):
        vals = np.asarray(values, dtype=float).copy()
        if vals.shape != (grid.count,):
            raise ValueError(f"values shape {vals.shape} vs grid count {grid.count}")
        if np.any(np.isnan(vals)) or np.any(np.isneginf(vals)):
            raise ImproperFunction("values must avoid NaN and -inf")
        vals[vals >= INF_THRESHOLD] = np.inf
        finite = np.isfinite(vals)
        if not np.any(finite):
            raise ImproperFunction("function is +inf everywhere on the grid")
        idx = np.nonzero(finite)[0]
        if idx[-1] - idx[0] + 1 != len(idx):
            raise ImproperFunction("finite nodes must be contiguous")
        if convex_flag and len(idx) >= 3:
            f = vals[idx[0] : idx[-1] + 1]
            defect = 2.0 * f[1:-1] - f[:-2] - f[2:]
            tol = 1e-9 * max(1.0, float(np.max(np.abs(f))))
            if float(np.max(defect)) > 2.0 * tol:
                raise ValueError("convex_flag set but midpoint convexity fails")
        self.grid = grid
        self.values = vals
        self.convex_flag = bool(convex_flag)

    def finite_slice(self) -> tuple[np.ndarray, np.ndarray]:
        finite = np.isfinite(self.values)
        return self.grid.nodes()[finite], self.values[finite]

    def min_value(self) -> float:
        return float(np.min(self.values[np.isfinite(self.values)]))

    def __call__(self, v: np.ndarray) -> np.ndarray:
        """Inf-propagating linear interpolation between nodes."""
        v = np.asarray(v, dtype=float)
        g = self.grid
        out = np.full(v.shape, np.inf)
        inside = (v >= g.lo - 1e-12 * max(1, abs(g.lo))) & (
            v <= g.hi + 1e-12 * max(1, abs(g.hi))
        )
        if not np.any(inside):
            return out
        vv = np.clip(v[inside], g.lo, g.hi)
        pos = (vv - g.lo) / g.h
        i0 = np.clip(np.floor(pos).astype(int), 0, g.count - 1)
        frac = pos - i0
        at_node = frac <= 1e-9
        i1 = np.clip(i0 + 1, 0, g.count - 1)
        hi_node = frac >= 1.0 - 1e-9
        f0 = self.values[i0]
        f1 = self.values[i1]
        with np.errstate(invalid="ignore"):
            res = np.where(
                at_node,
                f0,
                np.where(hi_node, f1, f0 + frac * (f1 - f0)),
            )
        # 0*inf guards: any inf neighbor poisons a strictly interior point
        interior_bad = (~at_node) & (~hi_node) & ((~np.isfinite(f0)) | (~np.isfinite(f1)))
        res[interior_bad] = np.inf
        out[inside] = res
        return out

    def to_csv(self) -> str:
        lines = ["v,value"]
        for v, val in zip(self.grid.nodes(), self.values):
            sval = "inf" if np.isinf(val) else repr(float(val))
            lines.append(f"{float(v)!r},{sval}")
        return "\n".join(lines) + "\n"


@dataclasses.dataclass(frozen=True)
class Epigraph:
    """Truncated epigraph {(v, eta) : fn(v) <= eta <= eta_cap} as a polygon."""

    body: ConvexBody
    eta_cap: float
    grid_h: float = 0.0


def conjugate_values(fn: ConvexGridFunction, points) -> np.ndarray:
    """Pointwise conjugate sup_p <w, p> - fn(p) over the finite grid nodes."""
    w = np.atleast_1d(np.asarray(points, dtype=float))
    nodes, vals = fn.finite_slice()
    out = np.empty(len(w))
    chunk = max(1, int(2_000_000 // max(1, len(nodes))))
    for s in range(0, len(w), chunk):
        block = w[s : s + chunk, None] * nodes[None, :] - vals[None, :]
        out[s : s + chunk] = np.max(block, axis=1)
    out[out >= INF_THRESHOLD] = np.inf
    return out


def conjugate(fn: ConvexGridFunction, out_grid: UniformGrid) -> ConvexGridFunction:
    """Discrete Legendre-Fenchel conjugate onto out_grid.

    The max runs over the finite nodes of fn only; results at or above
    1e12 are promoted to +inf. The output is convex by construction.
    """
    if not np.any(np.isfinite(fn.values)):
        raise ImproperFunction("cannot conjugate an identically +inf function")
    return ConvexGridFunction(out_grid, conjugate_values(fn, out_grid.nodes()), convex_flag=True)


def biconjugate(fn: ConvexGridFunction, mid_grid: UniformGrid | None = None) -> ConvexGridFunction:
    """Conjugate twice; lands back on fn's grid. mid_grid defaults to fn's
    own window, which is adequate whenever the relevant slopes fit in it."""
    inner = conjugate(fn, mid_grid if mid_grid is not None else fn.grid)
    return conjugate(inner, fn.grid)


def epi_sum(f1: ConvexGridFunction, f2: ConvexGridFunction) -> ConvexGridFunction:
    """Epigraphical (infimal-convolution) sum on f1's grid.

    out(v) = min over f1-nodes u of f1(u) + f2(v - u), with f2 evaluated by
    inf-propagating linear interpolation. The summand f2 must have a bounded
    domain visible inside its window: a finite value at either end node of
    its grid raises UnboundedSummand.
    """
    v2 = f2.values
    if np.isfinite(v2[0]) or np.isfinite(v2[-1]):
        raise UnboundedSummand(
            "dom f2 touches its window boundary; bounded domain required"
        )
    u, fu = f1.finite_slice()
    out_nodes = f1.grid.nodes()
    out = np.empty(len(out_nodes))
    chunk = max(1, int(1_000_000 // max(1, len(u))))
    for s in range(0, len(out_nodes), chunk):
        z = out_nodes[s : s + chunk, None] - u[None, :]
        vals = fu[None, :] + f2(z)
        out[s : s + chunk] = np.min(vals, axis=1)
    if not np.any(np.isfinite(out)):
        raise ImproperFunction("epigraphical sum is +inf on the whole window")
    convex = f1.convex_flag and f2.convex_flag
    return ConvexGridFunction(f1.grid, out, convex_flag=False if not convex else True)


def effective_domain(fn: ConvexGridFunction, value_cap: float = 1e6) -> EffectiveDomain:
    """Interval hull of the finite nodes with advisory closedness flags.

    An endpoint is marked closed when the boundary value stays under
    value_cap and the one-sided slope stays under 1/h: a pole at the
    boundary diverges like 1/h^2 in slope while a closed vertical-tangent
    endpoint grows only like 1/sqrt(h). Flags are advisory.
    """
    nodes, vals = fn.finite_slice()
    h = fn.grid.h

    def closed(boundary: float, neighbor: float | None) -> bool:
        if abs(boundary) >= value_cap:
            return False
        if neighbor is None:
            return True
        return abs(boundary - neighbor) / h <= 1.0 / h

    lo_closed = closed(float(vals[0]), float(vals[1]) if len(vals) > 1 else None)
    hi_closed = closed(float(vals[-1]), float(vals[-2]) if len(vals) > 1 else None)
    return EffectiveDomain(float(nodes[0]), float(nodes[-1]), bool(lo_closed), bool(hi_closed))


def slope_range(fn: ConvexGridFunction) -> tuple[float, float]:
    """One-sided slopes at the ends of the finite run.

    For a convex source these bracket every subgradient the window can
    witness, i.e. the trusted part of the conjugate's domain: beyond them
    the numeric conjugate is a linear extension, not data.
    """
    nodes, vals = fn.finite_slice()
    if len(vals) < 2:
        return 0.0, 0.0
    h = fn.grid.h
    return float((vals[1] - vals[0]) / h), float((vals[-1] - vals[-2]) / h)


def restrict(fn: ConvexGridFunction, lo: float, hi: float) -> ConvexGridFunction:
    """Copy of fn with values outside [lo, hi] set to +inf."""
    nodes = fn.grid.nodes()
    vals = fn.values.copy()
    vals[(nodes < lo) | (nodes > hi)] = np.inf
    return ConvexGridFunction(fn.grid, vals, convex_flag=fn.convex_flag)


def _truncated_polygon(fn: ConvexGridFunction, cap: float) -> ConvexBody:
    nodes = fn.grid.nodes()
    vals = fn.values
    finite = np.isfinite(vals)
    keep = finite & (vals <= cap)
    idx = np.nonzero(keep)[0]
    pts = [np.stack([nodes[idx], vals[idx]], axis=1)]

    i0, i1 = idx[0], idx[-1]
    if i0 > 0 and finite[i0 - 1]:
        # graph crosses the cap between i0-1 and i0
        t = (cap - vals[i0 - 1]) / (vals[i0] - vals[i0 - 1])
        v_left = nodes[i0 - 1] + t * (nodes[i0] - nodes[i0 - 1])
    else:
        v_left = nodes[i0]
    if i1 < len(nodes) - 1 and finite[i1 + 1]:
        t = (cap - vals[i1 + 1]) / (vals[i1] - vals[i1 + 1])
        v_right = nodes[i1 + 1] + t * (nodes[i1] - nodes[i1 + 1])
    else:
        v_right = nodes[i1]
    pts.append(np.array([[v_left, cap], [v_right, cap]]))
    return ConvexBody(np.concatenate(pts, axis=0))


def build_epigraph(fn: ConvexGridFunction, eta_cap: float) -> Epigraph:
    """Polygon for {(v, eta) : fn(v) <= eta <= eta_cap}.

    Raises CapTooLow when the cap does not rise strictly above min fn.
    """
    if eta_cap <= fn.min_value():
        raise CapTooLow(f"eta_cap {eta_cap} <= min value {fn.min_value()}")
    return Epigraph(_truncated_polygon(fn, eta_cap), float(eta_cap), fn.grid.h)


def build_bounded_epigraph(fn: ConvexGridFunction, lambda_val: float) -> Epigraph:
    """Polygon for the slice {fn <= eta <= lambda_val}; lambda_val may sit
    exactly at min fn (degenerate argmin segment). Raises EmptyResult when
    the slice is empty."""
    if lambda_val < fn.min_value():
        raise EmptyResult(f"lambda {lambda_val} < min value {fn.min_value()}")
    return Epigraph(_truncated_polygon(fn, lambda_val), float(lambda_val), fn.grid.h)


def check_lagrangian_properties(
    family: list[tuple[tuple[float, float], ConvexGridFunction]],
    modulus=None,
    probe_tol: float = 5e-2,
) -> list[CheckReport]:
    """Structural checks on a family of Lagrangian slices.

    family : list of ((t, x), slice) pairs.
    modulus : optional growth/continuity data with attributes ``c`` (may be
        None) and ``k_R`` used for the domain bound and probe windows.

    Convexity/properness and the domain growth bound are checked
    numerically; joint lower-semicontinuity and recession behaviour are only
    probed on sampled slice pairs and reported as advisory.
    """
    reports: list[CheckReport] = []
    reports.append(
        CheckReport(
            check="L1_L2_measurability",
            worst_margin=0.0,
            verdict="not numerically checkable",
            witnesses=[{"note": "measurability/continuity in t are structural"}],
        )
    )

    worst_cvx = 0.0
    wit_cvx: list = []
    for (t, x), fn in family:
        nodes, vals = fn.finite_slice()
        if len(vals) >= 3:
            defect = float(np.max(2.0 * vals[1:-1] - vals[:-2] - vals[2:])) / 2.0
            if defect > worst_cvx:
                worst_cvx = defect
                wit_cvx = [{"t": t, "x": x, "defect": defect}]
    reports.append(
        CheckReport(
            check="L3_convexity",
            worst_margin=worst_cvx,
            verdict="pass" if worst_cvx <= 1e-9 else "fail",
            witnesses=wit_cvx,
        )
    )

    c = getattr(modulus, "c", None) if modulus is not None else None
    if c is None:
        reports.append(
            CheckReport(
                check="L5_domain_growth",
                worst_margin=0.0,
                verdict="pass",
                witnesses=[
                    {"note": "missing (H4): no growth modulus attached; c treated as +inf"}
                ],
            )
        )
    else:
        worst = -np.inf
        wit: list = []
        for (t, x), fn in family:
            nodes, _ = fn.finite_slice()
            bound = c(t) * (1.0 + abs(x))
            excess = float(np.max(np.abs(nodes))) - bound
            if excess > worst:
                worst = excess
                wit = [{"t": t, "x": x, "excess": excess}]
        h = max(fn.grid.h for _, fn in family)
        reports.append(
            CheckReport(
                check="L5_domain_growth",
                worst_margin=worst,
                verdict="pass" if worst <= h + 1e-9 else "fail",
                witnesses=wit,
            )
        )

    # sampled semicontinuity probes on consecutive same-t slice pairs
    worst_lsc = 0.0
    worst_rec = 0.0
    wit_probe: list = []
    for ((t0, x0), f0), ((t1, x1), f1) in zip(family, family[1:]):
        if t0 != t1:
            continue
        dx = abs(x1 - x0)
        k = 0.0
        if modulus is not None:
            R = max(abs(x0), abs(x1)) + 1.0
            k = float(modulus.k_R(R, t0))
        delta = k * dx + 2.0 * f1.grid.h
        nodes, vals = f1.finite_slice()
        for v, lv in zip(nodes[:: max(1, len(nodes) // 16)], vals[:: max(1, len(vals) // 16)]):
            window = np.linspace(v - delta, v + delta, 33)
            near = f0(window)
            near = near[np.isfinite(near)]
            if len(near) == 0:
                continue
            m = float(np.min(near))
            worst_lsc = max(worst_lsc, lv - m - delta)
            worst_rec = max(worst_rec, m - lv - delta)
            if lv - m - delta >= worst_lsc:
                wit_probe = [{"t": t0, "x_from": x0, "x_to": x1, "v": float(v)}]
    reports.append(
        CheckReport(
            check="L4_lsc_probe",
            worst_margin=worst_lsc,
            verdict="pass" if worst_lsc <= probe_tol else "fail",
            witnesses=wit_probe + [{"note": "sampled probe only"}],
        )
    )
    reports.append(
        CheckReport(
            check="L6_approach_probe",
            worst_margin=worst_rec,
            verdict="pass" if worst_rec <= probe_tol else "fail",
            witnesses=[{"note": "sampled probe only"}],
        )
    )
    return reports
