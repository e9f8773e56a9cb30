"""Benchmark Hamiltonians with closed-form conjugates and moduli.

Each entry carries the data the rest of the toolkit consumes: a vectorized
evaluator in p, the continuity modulus (k_R, w_R) with the growth bound c(t)
when one exists, the closed-form Lagrangian and its effective domain when
known, and a bound lambda(t, x) >= L on dom L when one exists. Moduli are
documented next to each definition.

The module also hosts the three equivalent continuity checks (value-level,
Lagrangian-level, epigraph-level) that any admissible (k_R, w_R) pair must
pass simultaneously, plus hand-written representation triples used by the
convexification pipeline.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np

from . import convex_geom as cg
from .errors import UnknownName
from .fenchel import (
    ConvexGridFunction,
    EffectiveDomain,
    UniformGrid,
    build_epigraph,
    conjugate,
    conjugate_values,
    slope_range,
)
from .report import CheckReport
from .sampling import SamplePlan

DEFAULT_P_GRID = UniformGrid(-50.0, 50.0, 10001)


@dataclasses.dataclass(frozen=True)
class ModulusData:
    """Continuity modulus: |H(t,x,p) - H(t,y,p)| <= k_R(t)|p||x-y| + w_R(t,|x-y|)
    for |x|, |y| <= R, plus the domain growth bound c(t) when available."""

    k_R: Callable[[float, float], float]
    w_R: Callable[[float, float, float], float]
    c: Callable[[float], float] | None = None
    null_set_note: str = "none"

    def scaled(self, factor: float) -> "ModulusData":
        k, w = self.k_R, self.w_R
        return ModulusData(
            k_R=lambda R, t: factor * k(R, t),
            w_R=lambda R, t, r: factor * w(R, t, r),
            c=self.c,
            null_set_note=self.null_set_note,
        )


@dataclasses.dataclass(frozen=True)
class LambdaBound:
    """Bound lambda(t, x) >= L(t, x, v) on dom L, with its own modulus."""

    eval: Callable[[float, float], float]
    w_R: Callable[[float, float, float], float] | None = None
    note: str = ""
    certification: CheckReport | None = None


@dataclasses.dataclass(frozen=True)
class HamiltonianSpec:
    name: str
    eval: Callable  # (t, x, p-array) -> array, convex in p
    modulus: ModulusData
    t_range: tuple[float, float] = (0.0, 1.0)
    n: int = 1
    oracle_L: Callable | None = None  # (t, x, v-array) -> array with +inf
    oracle_dom: Callable | None = None  # (t, x) -> EffectiveDomain
    alt_oracle_L: Callable | None = None
    lambda_bound: LambdaBound | None = None
    flags: dict = dataclasses.field(
        default_factory=lambda: {"H1": True, "H2": True, "H3": True, "H4": True, "HLC": True, "BLC": True}
    )
    notes: str = ""


def _ex_2_1() -> HamiltonianSpec:
    def ev(t, x, p):
        return np.maximum(np.abs(np.asarray(p, dtype=float)) * abs(x) - 1.0, 0.0)

    def oL(t, x, v):
        v = np.asarray(v, dtype=float)
        if x == 0.0:
            return np.where(v == 0.0, 0.0, np.inf)
        av = np.abs(v)
        return np.where(av <= abs(x), av / abs(x), np.inf)

    return HamiltonianSpec(
        name="ex_2_1",
        eval=ev,
        # k = 1 from |p| * ||x|-|y||, no zeroth-order term
        modulus=ModulusData(k_R=lambda R, t: 1.0, w_R=lambda R, t, r: 0.0, c=lambda t: 1.0),
        oracle_L=oL,
        oracle_dom=lambda t, x: EffectiveDomain(-abs(x), abs(x), True, True),
        lambda_bound=LambdaBound(eval=lambda t, x: 1.0, w_R=lambda R, t, r: 0.0),
        notes="cone Hamiltonian max(|p||x| - 1, 0); L = |v/x| on [-|x|, |x|]",
    )


def _ex_2_2() -> HamiltonianSpec:
    def ev(t, x, p):
        return np.sqrt(1.0 + np.asarray(p, dtype=float) ** 2) - abs(x)

    def oL(t, x, v):
        v = np.asarray(v, dtype=float)
        inside = np.abs(v) <= 1.0
        return np.where(inside, -np.sqrt(np.maximum(0.0, 1.0 - v * v)) + abs(x), np.inf)

    return HamiltonianSpec(
        name="ex_2_2",
        eval=ev,
        # x enters only through -|x|: k = 0, w(r) = r
        modulus=ModulusData(k_R=lambda R, t: 0.0, w_R=lambda R, t, r: r, c=lambda t: 1.0),
        oracle_L=oL,
        oracle_dom=lambda t, x: EffectiveDomain(-1.0, 1.0, True, True),
        lambda_bound=LambdaBound(eval=lambda t, x: abs(x), w_R=lambda R, t, r: r),
        notes="sqrt(1+p^2) - |x|; L = -sqrt(1-v^2) + |x| on [-1, 1]",
    )


def _ex_2_3() -> HamiltonianSpec:
    def ev(t, x, p):
        p = np.asarray(p, dtype=float)
        return np.where(
            p >= -1.0,
            p - 1.0 - abs(x),
            -2.0 * np.sqrt(np.maximum(-p, 0.0)) - abs(x),
        )

    def oL(t, x, v):
        v = np.asarray(v, dtype=float)
        inside = (v > 0.0) & (v <= 1.0)
        safe = np.where(inside, v, 1.0)
        return np.where(inside, 1.0 / safe + abs(x), np.inf)

    flags = {"H1": True, "H2": True, "H3": True, "H4": True, "HLC": True, "BLC": False}
    return HamiltonianSpec(
        name="ex_2_3",
        eval=ev,
        modulus=ModulusData(k_R=lambda R, t: 0.0, w_R=lambda R, t, r: r, c=lambda t: 1.0),
        oracle_L=oL,
        oracle_dom=lambda t, x: EffectiveDomain(0.0, 1.0, False, True),
        flags=flags,
        notes="L = 1/v + |x| on (0, 1]: open lower end, no bounded lambda",
    )


def _ex_2_4() -> HamiltonianSpec:
    def ev(t, x, p):
        s = np.abs(np.asarray(p, dtype=float) * x)
        return np.where(s > 1.0, (np.sqrt(np.maximum(s, 1.0)) - 1.0) ** 2, 0.0)

    def oL(t, x, v):
        v = np.asarray(v, dtype=float)
        if x == 0.0:
            return np.where(v == 0.0, 0.0, np.inf)
        av = np.abs(v)
        inside = av < abs(x)
        denom = np.where(inside, abs(x) - av, 1.0)
        return np.where(inside, av / denom, np.inf)

    def dom(t, x):
        if x == 0.0:
            return EffectiveDomain(0.0, 0.0, True, True)
        return EffectiveDomain(-abs(x), abs(x), False, False)

    flags = {"H1": True, "H2": True, "H3": True, "H4": True, "HLC": True, "BLC": False}
    return HamiltonianSpec(
        name="ex_2_4",
        eval=ev,
        modulus=ModulusData(k_R=lambda R, t: 1.0, w_R=lambda R, t, r: 0.0, c=lambda t: 1.0),
        oracle_L=oL,
        oracle_dom=dom,
        flags=flags,
        notes="L = |v|/(|x| - |v|) on the open interval (-|x|, |x|)",
    )


def _ex_2_5() -> HamiltonianSpec:
    def ev(t, x, p):
        return np.asarray(p, dtype=float) ** 2 / (2.0 + 2.0 * t) - abs(x)

    def oL(t, x, v):
        return (1.0 + t) * np.asarray(v, dtype=float) ** 2 / 2.0 + abs(x)

    def alt(t, x, v):
        return (1.0 + t) * np.asarray(v, dtype=float) ** 2 + abs(x)

    flags = {"H1": True, "H2": True, "H3": True, "H4": False, "HLC": True, "BLC": False}
    return HamiltonianSpec(
        name="ex_2_5",
        eval=ev,
        modulus=ModulusData(k_R=lambda R, t: 0.0, w_R=lambda R, t, r: r, c=None),
        oracle_L=oL,
        oracle_dom=lambda t, x: EffectiveDomain(-np.inf, np.inf, False, False),
        alt_oracle_L=alt,
        flags=flags,
        notes=(
            "quadratic-in-p with full-space Lagrangian domain, no growth bound "
            "(H4 missing); primary oracle is the directly derived conjugate "
            "(1+t)v^2/2 + |x|, the printed variant (1+t)v^2 + |x| rides along "
            "as alt_oracle_L"
        ),
    )


def _ex_2_6() -> HamiltonianSpec:
    def ev(t, x, p):
        p = np.asarray(p, dtype=float)
        if t <= 0.0:
            return np.zeros_like(p)
        return abs(x) * np.maximum(np.abs(p) - abs(np.log(t)), 0.0)

    def oL(t, x, v):
        v = np.asarray(v, dtype=float)
        if t <= 0.0:
            return np.where(v == 0.0, 0.0, np.inf)
        inside = np.abs(v) <= abs(x)
        return np.where(inside, abs(np.log(t)) * np.abs(v), np.inf)

    def dom(t, x):
        return EffectiveDomain(-abs(x), abs(x), True, True)

    return HamiltonianSpec(
        name="ex_2_6",
        eval=ev,
        modulus=ModulusData(
            k_R=lambda R, t: 1.0,
            w_R=lambda R, t, r: 0.0,
            c=lambda t: 1.0,
            null_set_note="t = 0: H vanishes and lambda = |ln t||x| diverges as t -> 0+",
        ),
        oracle_L=oL,
        oracle_dom=dom,
        lambda_bound=LambdaBound(
            eval=lambda t, x: (abs(np.log(t)) * abs(x) if t > 0.0 else 0.0),
            w_R=lambda R, t, r: (abs(np.log(t)) * r if t > 0.0 else 0.0),
        ),
        notes="|x| max(|p| - |ln t|, 0); L = |ln t||v| on [-|x|, |x|], lambda = |ln t||x|",
    )


def _abs_p() -> HamiltonianSpec:
    def ev(t, x, p):
        return np.abs(np.asarray(p, dtype=float))

    def oL(t, x, v):
        v = np.asarray(v, dtype=float)
        return np.where(np.abs(v) <= 1.0, 0.0, np.inf)

    return HamiltonianSpec(
        name="abs_p",
        eval=ev,
        modulus=ModulusData(k_R=lambda R, t: 0.0, w_R=lambda R, t, r: 0.0, c=lambda t: 1.0),
        oracle_L=oL,
        oracle_dom=lambda t, x: EffectiveDomain(-1.0, 1.0, True, True),
        lambda_bound=LambdaBound(eval=lambda t, x: 0.0, w_R=lambda R, t, r: 0.0),
        notes="x-independent cone |p|; L is the indicator of [-1, 1]",
    )


_REGISTRY: dict[str, Callable[[], HamiltonianSpec]] = {
    "ex_2_1": _ex_2_1,
    "ex_2_2": _ex_2_2,
    "ex_2_3": _ex_2_3,
    "ex_2_4": _ex_2_4,
    "ex_2_5": _ex_2_5,
    "ex_2_6": _ex_2_6,
    "abs_p": _abs_p,
}


def names() -> list[str]:
    return list(_REGISTRY)


def builtin(name: str) -> HamiltonianSpec:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise UnknownName(f"no built-in Hamiltonian named {name!r}; know {sorted(_REGISTRY)}")
    return factory()


def lagrangian_evaluator(spec: HamiltonianSpec, use_oracle: bool = True, p_grid: UniformGrid | None = None):
    """Pointwise Lagrangian access: oracle when present (and wanted), else
    the pointwise conjugate of the sampled H slice, cached per (t, x)."""
    if use_oracle and spec.oracle_L is not None:
        return lambda t, x, v: spec.oracle_L(t, x, np.asarray(v, dtype=float))
    grid = p_grid if p_grid is not None else DEFAULT_P_GRID
    cache: dict[tuple[float, float], ConvexGridFunction] = {}

    def ev(t, x, v):
        key = (float(t), float(x))
        if key not in cache:
            vals = np.asarray(spec.eval(t, x, grid.nodes()), dtype=float)
            cache[key] = ConvexGridFunction(grid, vals)
        return conjugate_values(cache[key], v)

    return ev


def domain_evaluator(spec: HamiltonianSpec, use_oracle: bool = True, p_grid: UniformGrid | None = None):
    """Effective-domain access: oracle when present, else the edge-slope
    trust interval of the sampled H slice (closedness flags advisory)."""
    if use_oracle and spec.oracle_dom is not None:
        return spec.oracle_dom
    grid = p_grid if p_grid is not None else DEFAULT_P_GRID

    def dom(t, x):
        vals = np.asarray(spec.eval(t, x, grid.nodes()), dtype=float)
        s_lo, s_hi = slope_range(ConvexGridFunction(grid, vals))
        return EffectiveDomain(s_lo, s_hi, True, True)

    return dom


def _dom_interval(dom: EffectiveDomain, window: tuple[float, float] | None = None):
    lo = dom.lo if np.isfinite(dom.lo) else (window[0] if window else -1e6)
    hi = dom.hi if np.isfinite(dom.hi) else (window[1] if window else 1e6)
    return lo, hi


def _probe_halfwidth(spec: HamiltonianSpec, mod: ModulusData, t: float, xval: float) -> float:
    """Finite half-width for velocity probes when dom L is unbounded: the
    growth bound when available, else the slope range of the H slice."""
    if mod.c is not None:
        return float(mod.c(t)) * (1.0 + abs(xval)) + 1.0
    grid = DEFAULT_P_GRID
    hfn = ConvexGridFunction(grid, np.asarray(spec.eval(t, xval, grid.nodes()), dtype=float))
    s_lo, s_hi = slope_range(hfn)
    return max(abs(s_lo), abs(s_hi)) + 1.0


def oracle_probe_values(
    spec: HamiltonianSpec,
    t: float,
    x: float,
    margin: float = 0.1,
    count: int = 201,
    p_grid: UniformGrid | None = None,
) -> np.ndarray:
    """Velocity probes where a numeric conjugate can be held to its oracle.

    Points sit at least `margin` inside the oracle effective domain and
    inside the edge-slope trust interval of the sampled H slice; outside
    that interval the p-window cannot resolve the conjugate (the missing
    slopes live beyond the window ends), so comparisons there test the
    window, not the transform. Steep Lagrangians such as 1/v near v = 0
    shrink the probe set accordingly. Degenerate domains return their
    single point.
    """
    grid = p_grid if p_grid is not None else DEFAULT_P_GRID
    dom = domain_evaluator(spec, p_grid=grid)(t, x)
    lo = dom.lo if np.isfinite(dom.lo) else -_probe_halfwidth(spec, spec.modulus, t, x)
    hi = dom.hi if np.isfinite(dom.hi) else _probe_halfwidth(spec, spec.modulus, t, x)
    if hi - lo <= 2.0 * margin:
        return np.array([0.5 * (lo + hi)])
    hfn = ConvexGridFunction(grid, np.asarray(spec.eval(t, x, grid.nodes()), dtype=float))
    s_lo, s_hi = slope_range(hfn)
    vlo = max(lo + margin, s_lo)
    vhi = min(hi - margin, s_hi)
    if vhi <= vlo:
        return np.array([0.5 * (max(lo, s_lo) + min(hi, s_hi))])
    return np.linspace(vlo, vhi, count)


def check_HLC(
    spec: HamiltonianSpec,
    R: float,
    samples: SamplePlan | None = None,
    modulus: ModulusData | None = None,
    p_max: float = 10.0,
    tol: float = 1e-9,
) -> CheckReport:
    """Value-level continuity: |H(t,x,p) - H(t,y,p)| <= k|p||x-y| + w(|x-y|)
    on seeded triples; pass when the worst relative excess stays under tol."""
    plan = samples or SamplePlan()
    mod = modulus or spec.modulus
    worst = -np.inf
    wit: list = []
    ps = plan.p_values(p_max)
    for t, x, y in plan.triples(spec.t_range, R):
        lhs = np.abs(np.asarray(spec.eval(t, x, ps)) - np.asarray(spec.eval(t, y, ps)))
        rhs = mod.k_R(R, t) * np.abs(ps) * abs(x - y) + mod.w_R(R, t, abs(x - y))
        rel = (lhs - rhs) / np.maximum(1.0, np.abs(rhs))
        k = int(np.argmax(rel))
        if rel[k] > worst:
            worst = float(rel[k])
            wit = [{"t": float(t), "x": float(x), "y": float(y), "p": float(ps[k])}]
    return CheckReport("hlc", worst, "pass" if worst <= tol else "fail", wit)


def _convex_argmin(f, lo: np.ndarray, hi: np.ndarray, iters: int = 72):
    """Vectorized ternary search for the minimum of a convex scalar family.

    f maps an array of abscissas to function values (NaN treated as +inf);
    lo/hi bound each search window elementwise. 72 iterations shrink the
    windows by (2/3)^72, far below double precision."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    for _ in range(iters):
        third = (hi - lo) / 3.0
        m1 = lo + third
        m2 = hi - third
        f1 = np.asarray(f(m1), dtype=float)
        f2 = np.asarray(f(m2), dtype=float)
        f1 = np.where(np.isnan(f1), np.inf, f1)
        f2 = np.where(np.isnan(f2), np.inf, f2)
        move_lo = f1 > f2
        lo = np.where(move_lo, m1, lo)
        hi = np.where(move_lo, hi, m2)
    mid = 0.5 * (lo + hi)
    fm = np.asarray(f(mid), dtype=float)
    return mid, np.where(np.isnan(fm), np.inf, fm)


def check_LLC(
    spec: HamiltonianSpec,
    R: float,
    samples: SamplePlan | None = None,
    modulus: ModulusData | None = None,
    tol: float = 2e-2,
    n_u: int = 65,
    use_oracle: bool = True,
) -> CheckReport:
    """Lagrangian-level continuity: every v in dom L(t,x) admits u within
    k|x-y| of v with L(t,y,u) <= L(t,x,v) + w(|x-y|). The u-search combines
    a coarse grid over the window intersected with dom L(t,y) and a ternary
    refinement (the slice is convex in u), so steep slices near domain
    boundaries resolve to machine precision; an empty search window counts
    as +inf excess."""
    plan = samples or SamplePlan()
    mod = modulus or spec.modulus
    L = lagrangian_evaluator(spec, use_oracle=use_oracle)
    dom = domain_evaluator(spec, use_oracle=use_oracle)
    fracs = plan.unit_fractions()
    worst = -np.inf
    wit: list = []
    for t, x, y in plan.triples(spec.t_range, R):
        for a, b in ((x, y), (y, x)):
            d = abs(a - b)
            kd = mod.k_R(R, t) * d
            w = mod.w_R(R, t, d)
            dom_a = dom(t, a)
            dom_b = dom(t, b)
            if np.isfinite(dom_a.lo) and np.isfinite(dom_a.hi):
                lo, hi = dom_a.lo, dom_a.hi
                lo_closed, hi_closed = dom_a.lo_closed, dom_a.hi_closed
            else:
                # unbounded slice: probe a finite window, closed at the clamps
                W = _probe_halfwidth(spec, mod, t, a)
                lo = dom_a.lo if np.isfinite(dom_a.lo) else -W
                hi = dom_a.hi if np.isfinite(dom_a.hi) else W
                lo_closed = dom_a.lo_closed or not np.isfinite(dom_a.lo)
                hi_closed = dom_a.hi_closed or not np.isfinite(dom_a.hi)
            inset = 1e-4 * max(hi - lo, 1e-12)
            lo_s = lo + (0.0 if lo_closed else inset)
            hi_s = hi - (0.0 if hi_closed else inset)
            if lo_s > hi_s:
                continue
            vs = lo_s + fracs * (hi_s - lo_s)
            la = np.asarray(L(t, a, vs), dtype=float)
            blo, bhi = _dom_interval(dom_b)
            keep = np.isfinite(la)
            if not np.any(keep):
                continue
            vs_f, la_f = vs[keep], la[keep]
            u0 = np.maximum(vs_f - kd, blo)
            u1 = np.minimum(vs_f + kd, bhi)
            empty = u0 > u1
            u1c = np.maximum(u1, u0)
            U = u0[:, None] + np.linspace(0.0, 1.0, n_u)[None, :] * (u1c - u0)[:, None]
            LB = np.asarray(L(t, b, U.ravel()), dtype=float).reshape(U.shape)
            LB = np.where(np.isnan(LB), np.inf, LB)
            grid_min = np.min(LB, axis=1)
            _, tern_min = _convex_argmin(lambda uu: L(t, b, uu), u0, u1c)
            best = np.minimum(grid_min, tern_min)
            excess = np.where(empty, np.inf, best - la_f - w)
            j = int(np.argmax(excess))
            if float(excess[j]) > worst:
                worst = float(excess[j])
                wit = [{"t": float(t), "x": float(a), "y": float(b), "v": float(vs_f[j])}]
    return CheckReport("llc", worst, "pass" if worst <= tol else "fail", wit)


def check_MLC(
    spec: HamiltonianSpec,
    R: float,
    samples: SamplePlan | None = None,
    modulus: ModulusData | None = None,
    p_grid: UniformGrid | None = None,
    v_count: int = 601,
    cap_rise: float = 3.0,
    tol: float | None = None,
) -> CheckReport:
    """Epigraph-level continuity: the truncated E_L(t,x) sits inside the
    (k|x-y|, w)-inflation of E_L(t,y) truncated w higher. Slices come from
    the numeric conjugate so the check exercises the full grid pipeline."""
    plan = samples or SamplePlan()
    mod = modulus or spec.modulus
    grid = p_grid if p_grid is not None else DEFAULT_P_GRID
    slice_cache: dict[tuple[float, float], ConvexGridFunction] = {}

    def conj_slice(t, x, v_grid):
        key = (float(t), float(x))
        if key not in slice_cache:
            H = ConvexGridFunction(grid, np.asarray(spec.eval(t, x, grid.nodes()), dtype=float))
            slice_cache[key] = conjugate(H, v_grid)
        return slice_cache[key]

    worst = -np.inf
    wit: list = []
    h_used = 0.0
    for t, x, y in plan.triples(spec.t_range, R):
        if mod.c is not None:
            W = mod.c(t) * (1.0 + R) + 1.0
        else:
            Hx = ConvexGridFunction(grid, np.asarray(spec.eval(t, x, grid.nodes()), dtype=float))
            Hy = ConvexGridFunction(grid, np.asarray(spec.eval(t, y, grid.nodes()), dtype=float))
            W = max(abs(s) for s in slope_range(Hx) + slope_range(Hy)) + 1.0
        v_grid = UniformGrid(-W, W, v_count)
        h_used = max(h_used, v_grid.h)
        Lx = conj_slice(t, x, v_grid)
        Ly = conj_slice(t, y, v_grid)
        d = abs(x - y)
        kd = mod.k_R(R, t) * d
        w = mod.w_R(R, t, d)
        cap = max(Lx.min_value(), Ly.min_value()) + cap_rise
        Ex = build_epigraph(Lx, cap)
        Ey = build_epigraph(Ly, cap + w)
        inflated = cg.minkowski_inflate(Ey.body, kd, w)
        gap = cg.containment_gap(inflated, Ex.body)
        if gap > worst:
            worst = float(gap)
            wit = [{"t": float(t), "x": float(x), "y": float(y)}]
    bound = tol if tol is not None else 2.0 * h_used + 5e-4
    return CheckReport("mlc", worst, "pass" if worst <= bound else "fail", wit)


def _triple_from_formulas(control, f, l, source, note=""):
    # builder imports zoo at module level, so import it lazily here
    from .builder import RepresentationTriple

    def e_eval(t, x, a):
        a = np.atleast_1d(np.asarray(a, dtype=float))
        return np.array([f(t, x, a), l(t, x, a)])

    return RepresentationTriple(
        control=control,
        e_eval=e_eval,
        f_eval=lambda t, x, a: float(f(t, x, np.atleast_1d(np.asarray(a, dtype=float)))),
        l_eval=lambda t, x, a: float(l(t, x, np.atleast_1d(np.asarray(a, dtype=float)))),
        provenance="user",
        source=source,
        caps=note,
        grid_h=0.0,
    )


def hat_rep_ex_2_1(n_side: int = 21):
    """Hand-authored representation of max(|p||x| - 1, 0) on the square
    A = [-1, 1]^2: f(x, a) = a1 |x|, l(x, a) = |a1| + |a2| (1 - |a1|).

    Unlike the one-control parametrization a -> (a|x|, L(x, a|x|)), whose
    Lagrangian jumps at x = 0, both components here are Lipschitz in x.
    """
    from .builder import ControlSet

    side = np.linspace(-1.0, 1.0, n_side)
    g = np.meshgrid(side, side, indexing="ij")
    pts = np.stack([g[0].ravel(), g[1].ravel()], axis=1)
    control = ControlSet("finite", 2, points=pts)

    def f(t, x, a):
        return float(a[0] * abs(x))

    def l(t, x, a):
        return float(abs(a[0]) + abs(a[1]) * (1.0 - abs(a[0])))

    return _triple_from_formulas(control, f, l, builtin("ex_2_1"), "square control grid")


def circle_rep_ex_2_2(n_points: int = 144):
    """Hand-authored representation of sqrt(1 + p^2) - |x| on the unit
    circle a1^2 + a2^2 = 1: f(x, a) = a1, l(x, a) = a2 + |x|.

    n_points must be a multiple of 4 so that (0, 1), (0, -1), (1, 0) and
    (-1, 0) land in the sample set exactly.
    """
    from .builder import ControlSet

    if n_points % 4 != 0:
        raise ValueError("n_points must be a multiple of 4")
    ang = 2.0 * np.pi * np.arange(n_points) / n_points
    pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    # pin the axis points exactly; cos(pi/2) etc. carry rounding noise
    pts[0] = (1.0, 0.0)
    pts[n_points // 4] = (0.0, 1.0)
    pts[n_points // 2] = (-1.0, 0.0)
    pts[3 * n_points // 4] = (0.0, -1.0)
    control = ControlSet("finite", 2, points=pts)

    def f(t, x, a):
        return float(a[0])

    def l(t, x, a):
        return float(a[1] + abs(x))

    return _triple_from_formulas(control, f, l, builtin("ex_2_2"), "unit-circle control")


def family_p_abs(h=0.0, k=0.0):
    """Representation family for H(x, p) = |p| with A = [-1, 1]:
    f(x, a) = a (1 + |a| h(x)) / (1 + h(x)), l(x, a) = (1 - |a|) k(x).

    h and k are nonnegative functions of x (constants accepted). Every
    member satisfies f(x, 1) = 1, f(x, -1) = -1 and l >= 0, so the sup
    over A of p f - l recovers |p| exactly.
    """
    from .builder import ControlSet

    h_fn = h if callable(h) else (lambda x, _v=float(h): _v)
    k_fn = k if callable(k) else (lambda x, _v=float(k): _v)
    control = ControlSet("interval", 1, lo=-1.0, hi=1.0)

    def f(t, x, a):
        hv = float(h_fn(x))
        return float(a[0] * (1.0 + abs(a[0]) * hv) / (1.0 + hv))

    def l(t, x, a):
        return float((1.0 - abs(a[0])) * k_fn(x))

    return _triple_from_formulas(control, f, l, builtin("abs_p"), "interval control family")
