"""Construction of faithful control representations (A, f, l).

The pipeline per evaluation point: sample the Lagrangian slice L(t, x, .)
on a velocity grid, truncate its epigraph to a polygon E, project the
(scaled) control point a through P(a, E) = E intersect B(a, 2 d(a, E)), and
select e(t, x, a) as the Steiner point of that projection body. Then
f(t, x, a) and l(t, x, a) are the two components of e, and H is recovered
as the sup of p f - l over the control samples.

Two control regimes ship: full-space controls with identity scaling, and
unit-ball controls scaled by M(t, x) large enough that the scaled ball
covers the bounded epigraph slice below a bound lambda.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

import numpy as np

from . import convex_geom as cg
from .errors import (
    BLCViolation,
    ConfigError,
    GridUnderflow,
    HypothesisViolation,
    MissingC,
)
from .fenchel import (
    ConvexGridFunction,
    EffectiveDomain,
    Epigraph,
    UniformGrid,
    build_epigraph,
    conjugate,
    slope_range,
)
from .report import CheckReport
from .sampling import SamplePlan
from .zoo import HamiltonianSpec, LambdaBound, domain_evaluator, lagrangian_evaluator


@dataclasses.dataclass(frozen=True)
class Window:
    t_range: tuple[float, float] = (0.0, 1.0)
    x_range: tuple[float, float] = (-1.0, 1.0)
    p_range: tuple[float, float] = (-3.0, 3.0)


@dataclasses.dataclass(frozen=True)
class APlan:
    """Deterministic control-sample layout."""

    n_box: int = 41
    box_half: float = 3.0
    n_radii: int = 8
    n_angles: int = 40  # multiple of 4 keeps the axes in the polar grid
    n_interval: int = 41


@dataclasses.dataclass(frozen=True)
class ControlSet:
    kind: str  # full_space | unit_ball | interval | finite
    dim: int
    lo: float = -1.0
    hi: float = 1.0
    points: np.ndarray | None = None

    def samples(self, plan: APlan | None = None) -> np.ndarray:
        plan = plan or APlan()
        if self.kind == "full_space":
            side = np.linspace(-plan.box_half, plan.box_half, plan.n_box)
            g = np.meshgrid(side, side, indexing="ij")
            return np.stack([g[0].ravel(), g[1].ravel()], axis=1)
        if self.kind == "unit_ball":
            radii = (np.arange(plan.n_radii) + 1.0) / plan.n_radii
            ang = 2.0 * np.pi * np.arange(plan.n_angles) / plan.n_angles
            rr, aa = np.meshgrid(radii, ang, indexing="ij")
            pts = np.stack([(rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()], axis=1)
            return np.concatenate([np.zeros((1, 2)), pts], axis=0)
        if self.kind == "interval":
            return np.linspace(self.lo, self.hi, plan.n_interval)[:, None]
        if self.kind == "finite":
            if self.points is None:
                raise ConfigError("finite control set without points")
            return np.asarray(self.points, dtype=float)
        raise ConfigError(f"unknown control kind {self.kind!r}")


@dataclasses.dataclass(frozen=True)
class ScalingFn:
    eval: Callable[[float, float], float]
    description: str = "identity"


def _identity_scaling() -> ScalingFn:
    return ScalingFn(lambda t, x: 1.0, "identity")


@dataclasses.dataclass(frozen=True)
class GridPolicy:
    """Discretization knobs for the construction."""

    p_lo: float = -50.0
    p_hi: float = 50.0
    p_count: int = 10001
    v_count: int = 601
    v_window: tuple[float, float] | None = None  # fallback when c(t) is absent
    steiner_dirs: int = 3600
    arc_deg: float = 0.5
    use_oracle_L: bool = False
    blc_tol: float = 2e-2

    def p_grid(self) -> UniformGrid:
        return UniformGrid(self.p_lo, self.p_hi, self.p_count)


@dataclasses.dataclass(frozen=True)
class ImageReport:
    domain: EffectiveDomain
    gap: float
    reference: EffectiveDomain


@dataclasses.dataclass
class RepresentationTriple:
    """Representation data: H(t,x,p) = sup_a [ p f(t,x,a) - l(t,x,a) ].

    e_eval returns the selected epigraph point (f, l) for one control;
    control_samples(t, x) yields the deterministic a-plan (including the
    lift points for constructed triples, which e maps to themselves).
    """

    control: ControlSet
    e_eval: Callable  # (t, x, a) -> ndarray (2,)
    f_eval: Callable  # (t, x, a) -> float
    l_eval: Callable  # (t, x, a) -> float
    provenance: str
    source: HamiltonianSpec | None
    caps: str
    scaling: ScalingFn = dataclasses.field(default_factory=_identity_scaling)
    control_samples: Callable | None = None
    grid_h: float = 0.0
    lam: Callable | None = None
    _tables: dict = dataclasses.field(default_factory=dict, repr=False)
    _core: object = dataclasses.field(default=None, repr=False)

    def default_samples(self, t: float, x: float) -> np.ndarray:
        if self.control_samples is not None:
            return self.control_samples(t, x)
        return self.control.samples()

    def e_table(self, t: float, x: float, a_samples: np.ndarray | None = None):
        """(A, F, L) arrays over the sample plan; cached for the default plan."""
        key = None
        if a_samples is None:
            key = (float(t), float(x))
            if key in self._tables:
                return self._tables[key]
            a_samples = self.default_samples(t, x)
        A = np.atleast_2d(np.asarray(a_samples, dtype=float))
        F = np.empty(len(A))
        Lv = np.empty(len(A))
        for i, a in enumerate(A):
            e = np.asarray(self.e_eval(t, x, a), dtype=float)
            F[i] = e[0]
            Lv[i] = e[1]
        out = (A, F, Lv)
        if key is not None:
            self._tables[key] = out
        return out


def _require_flags(spec: HamiltonianSpec, keys: tuple[str, ...]):
    bad = [k for k in keys if not spec.flags.get(k, True)]
    if bad:
        raise HypothesisViolation(f"{spec.name} violates {bad}")


class _SliceCore:
    """Shared slice/epigraph machinery behind both builders."""

    def __init__(self, spec: HamiltonianSpec, policy: GridPolicy, lam: Callable | None = None):
        self.spec = spec
        self.policy = policy
        self.lam = lam
        self._slices: dict[tuple[float, float], ConvexGridFunction] = {}
        self._epis: dict[tuple[float, float, int], Epigraph] = {}

    def v_grid(self, t: float, x: float) -> UniformGrid:
        c = self.spec.modulus.c
        if c is not None:
            w = float(c(t)) * (1.0 + abs(x)) + 1.0
            return UniformGrid(-w, w, self.policy.v_count)
        if self.policy.v_window is None:
            raise ConfigError(
                f"{self.spec.name} has no growth bound c(t); set GridPolicy.v_window"
            )
        lo, hi = self.policy.v_window
        return UniformGrid(lo, hi, self.policy.v_count)

    def slice(self, t: float, x: float) -> ConvexGridFunction:
        key = (float(t), float(x))
        fn = self._slices.get(key)
        if fn is not None:
            return fn
        grid = self.v_grid(t, x)
        if self.policy.use_oracle_L and self.spec.oracle_L is not None:
            vals = np.asarray(self.spec.oracle_L(t, x, grid.nodes()), dtype=float)
            if not np.any(np.isfinite(vals)):
                raise GridUnderflow(f"window misses dom L at (t={t}, x={x})")
            fn = ConvexGridFunction(grid, vals)
        else:
            pg = self.policy.p_grid()
            hfn = ConvexGridFunction(pg, np.asarray(self.spec.eval(t, x, pg.nodes()), dtype=float))
            raw = conjugate(hfn, grid)
            s_lo, s_hi = slope_range(hfn)
            nodes = grid.nodes()
            keep = (nodes >= s_lo) & (nodes <= s_hi)
            if not np.any(keep):
                if s_lo > grid.hi or s_hi < grid.lo:
                    raise GridUnderflow(
                        f"trusted domain [{s_lo:.3g}, {s_hi:.3g}] misses the window"
                    )
                # degenerate slice: keep the node nearest the trust interval
                keep[int(np.argmin(np.abs(nodes - 0.5 * (s_lo + s_hi))))] = True
            fn = ConvexGridFunction(grid, np.where(keep, raw.values, np.inf))
        if self.lam is not None:
            finite = fn.values[np.isfinite(fn.values)]
            excess = float(np.max(finite)) - float(self.lam(t, x))
            if excess > self.policy.blc_tol:
                raise BLCViolation(
                    f"sampled L exceeds lambda by {excess:.3g} at (t={t}, x={x})"
                )
        self._slices[key] = fn
        return fn

    def epigraph(self, t: float, x: float, needed_cap: float) -> Epigraph:
        """Truncated epigraph with the cap rounded up a power-of-two ladder
        above the slice minimum, so evaluations share polygons."""
        fn = self.slice(t, x)
        lmin = fn.min_value()
        j = max(0, int(math.ceil(math.log2(max(needed_cap - lmin, 1.0)))))
        key = (float(t), float(x), j)
        epi = self._epis.get(key)
        if epi is None:
            epi = build_epigraph(fn, lmin + float(2**j))
            self._epis[key] = epi
        return epi

    def e_point(self, t: float, x: float, z: np.ndarray) -> np.ndarray:
        fn = self.slice(t, x)
        lmin = fn.min_value()
        prelim = self.epigraph(t, x, max(10.0, abs(z[1]) + 10.0, lmin + 10.0))
        d1 = cg.distance(z, prelim.body)
        if d1 == 0.0:
            # z already lies in the truncated epigraph: P(z, E) = {z}
            return np.asarray(z, dtype=float).copy()
        E = self.epigraph(t, x, max(abs(z[1]), lmin) + 6.0 * d1 + 1.0)
        phi = cg.proj_map(z, E.body, self.policy.arc_deg)
        return cg.steiner(phi, self.policy.steiner_dirs)

    def lift_points(self, t: float, x: float) -> np.ndarray:
        nodes, vals = self.slice(t, x).finite_slice()
        return np.stack([nodes, vals], axis=1)


def _typical_h(core: _SliceCore) -> float:
    spec = core.spec
    t0 = 0.5 * (spec.t_range[0] + spec.t_range[1])
    try:
        return core.v_grid(t0, 0.0).h
    except ConfigError:
        return 0.0


_CAP_NOTE = "power-of-two ladder over max(|a_eta|, min L) + 3*(2 d) + 1"


def build_noncompact(
    spec: HamiltonianSpec,
    grids: GridPolicy | None = None,
    plan: APlan | None = None,
) -> RepresentationTriple:
    """Full-space control representation: A = R^2, M = 1, e = Steiner point
    of P(a, truncated E_L(t,x)). Lift points a = (v, L(v)) map to themselves."""
    _require_flags(spec, ("H1", "H2", "H3", "HLC"))
    policy = grids or GridPolicy()
    core = _SliceCore(spec, policy)
    plan = plan or APlan()
    control = ControlSet("full_space", 2)

    def e_eval(t, x, a):
        z = np.asarray(a, dtype=float)
        if z.shape != (2,):
            raise ConfigError("full-space control points are 2-vectors")
        return core.e_point(t, x, z)

    def samples(t, x):
        return np.concatenate([control.samples(plan), core.lift_points(t, x)], axis=0)

    return RepresentationTriple(
        control=control,
        e_eval=e_eval,
        f_eval=lambda t, x, a: float(e_eval(t, x, a)[0]),
        l_eval=lambda t, x, a: float(e_eval(t, x, a)[1]),
        provenance="constructed-noncompact",
        source=spec,
        caps=_CAP_NOTE,
        scaling=_identity_scaling(),
        control_samples=samples,
        grid_h=_typical_h(core),
        _core=core,
    )


def scaling_bound(spec: HamiltonianSpec, lam: Callable, t: float, x: float) -> float:
    """M(t,x) = |lambda| + |H(t,x,0)| + c(t)(1+|x|) + 1: the scaled unit ball
    then covers the bounded epigraph slice below lambda."""
    h0 = float(np.asarray(spec.eval(t, x, np.array([0.0])), dtype=float)[0])
    return abs(float(lam(t, x))) + abs(h0) + float(spec.modulus.c(t)) * (1.0 + abs(x)) + 1.0


def build_compact(
    spec: HamiltonianSpec,
    lam: LambdaBound | Callable | None = None,
    grids: GridPolicy | None = None,
    plan: APlan | None = None,
) -> RepresentationTriple:
    """Unit-ball control representation scaled by M(t, x).

    Requires the growth bound c(t) (MissingC otherwise) and a Lagrangian
    bound lambda(t, x); slices violating lambda raise BLCViolation when
    first touched."""
    _require_flags(spec, ("H1", "H2", "H3", "H4", "HLC"))
    if spec.modulus.c is None:
        raise MissingC(f"{spec.name} carries no growth bound c(t)")
    if lam is None:
        lam = spec.lambda_bound
    if lam is None:
        raise ConfigError(f"{spec.name} has no lambda bound; pass one explicitly")
    lam_fn = lam.eval if isinstance(lam, LambdaBound) else lam
    policy = grids or GridPolicy()
    core = _SliceCore(spec, policy, lam=lam_fn)
    plan = plan or APlan()
    control = ControlSet("unit_ball", 2)

    def M(t, x):
        return scaling_bound(spec, lam_fn, t, x)

    def e_eval(t, x, a):
        a = np.asarray(a, dtype=float)
        if a.shape != (2,):
            raise ConfigError("unit-ball control points are 2-vectors")
        if float(a @ a) > 1.0 + 1e-9:
            raise ConfigError("control point outside the unit ball")
        return core.e_point(t, x, M(t, x) * a)

    def samples(t, x):
        m = M(t, x)
        lifts = core.lift_points(t, x)
        lifts = lifts[np.linalg.norm(lifts, axis=1) <= m] / m
        return np.concatenate([control.samples(plan), lifts], axis=0)

    return RepresentationTriple(
        control=control,
        e_eval=e_eval,
        f_eval=lambda t, x, a: float(e_eval(t, x, a)[0]),
        l_eval=lambda t, x, a: float(e_eval(t, x, a)[1]),
        provenance="constructed-compact",
        source=spec,
        caps=_CAP_NOTE,
        scaling=ScalingFn(M, "|lambda| + |H(t,x,0)| + c(t)(1+|x|) + 1"),
        control_samples=samples,
        grid_h=_typical_h(core),
        lam=lam_fn,
        _core=core,
    )


def reconstruct_H(
    triple: RepresentationTriple,
    t: float,
    x: float,
    p: float,
    a_samples: np.ndarray | None = None,
) -> float:
    """sup over the sample plan of p f(t,x,a) - l(t,x,a); monotone in the
    plan and, for constructed triples, never above H(t,x,p) + grid error."""
    _, F, L = triple.e_table(t, x, a_samples)
    return float(np.max(p * F - L))


def _reference_domain(triple: RepresentationTriple, t: float, x: float) -> EffectiveDomain:
    spec = triple.source
    if spec is None:
        raise ConfigError("triple has no source Hamiltonian to compare against")
    use_oracle = spec.oracle_dom is not None
    return domain_evaluator(spec, use_oracle=use_oracle)(t, x)


def image_of_controls(
    triple: RepresentationTriple,
    t: float,
    x: float,
    a_samples: np.ndarray | None = None,
) -> ImageReport:
    """Interval hull of the sampled f-values and its Hausdorff gap against
    the reference effective domain (oracle when available, else the numeric
    trust interval)."""
    _, F, _ = triple.e_table(t, x, a_samples)
    F = np.sort(F)
    lo, hi = float(F[0]), float(F[-1])
    ref = _reference_domain(triple, t, x)
    r_lo = ref.lo if np.isfinite(ref.lo) else lo
    r_hi = ref.hi if np.isfinite(ref.hi) else hi
    # Hausdorff between the sampled f-set and the reference interval
    outward = max(0.0, r_lo - lo, hi - r_hi)
    inward = max(0.0, lo - r_lo, r_hi - hi)
    if len(F) > 1:
        inward = max(inward, 0.5 * float(np.max(np.diff(F))))
    dom = EffectiveDomain(lo, hi, True, True)
    return ImageReport(domain=dom, gap=max(outward, inward), reference=ref)


def _draw_pair_controls(triple: RepresentationTriple, rng: np.random.Generator) -> np.ndarray:
    kind = triple.control.kind
    if kind == "unit_ball":
        raw = rng.normal(size=(2, 2))
        nrm = np.linalg.norm(raw, axis=1, keepdims=True)
        return raw / np.maximum(nrm, 1e-12) * rng.uniform(0.0, 1.0, (2, 1))
    if kind == "full_space":
        return rng.uniform(-2.0, 2.0, (2, 2))
    if kind == "interval":
        return rng.uniform(triple.control.lo, triple.control.hi, (2, 1))
    pts = triple.control.points
    return pts[rng.integers(0, len(pts), 2)]


def _slice_access(triple: RepresentationTriple):
    """Access to L(t, x, .) consistent with the triple's own discretization
    (oracle or pointwise-conjugate access for user triples)."""
    spec = triple.source
    if triple.provenance == "user":
        ev = lagrangian_evaluator(spec, use_oracle=spec.oracle_L is not None)
        return lambda t, x: (lambda vs: np.asarray(ev(t, x, np.asarray(vs, dtype=float)), dtype=float))
    core = triple._core if isinstance(triple._core, _SliceCore) else _SliceCore(spec, GridPolicy())

    def access(t, x):
        fn = core.slice(t, x)
        return lambda vs: fn(np.asarray(vs, dtype=float))

    return access


def verify_triple(
    triple: RepresentationTriple,
    window: Window,
    plan: SamplePlan | None = None,
    n_pairs: int = 48,
    l_tol: float = 2e-2,
    lip_slack: float = 5e-3,
    image_gap_tol: float = 5e-2,
    membership_tol: float | None = None,
) -> list[CheckReport]:
    """Five-way faithfulness audit of a representation triple.

    (i) l stays above -|H(t,x,0)|; (ii) |f| respects the growth bound;
    (iii) Lipschitz quotients against 10(n+1)[k|x-y| + w(|x-y|) + |Ma-M'b|]
    (the scaled control difference reduces to |a-b| when M = 1); (iv)
    selected points lie in the epigraph up to 2h; (v) the image of the
    control samples matches dom L up to a Hausdorff gap.
    """
    spec = triple.source
    if spec is None:
        raise ConfigError("verify_triple needs a source Hamiltonian")
    plan = plan or SamplePlan()
    rng = plan.rng(7)
    t_lo, t_hi = window.t_range
    x_lo, x_hi = window.x_range
    R = max(abs(x_lo), abs(x_hi))
    mod = spec.modulus
    h = triple.grid_h
    reports: list[CheckReport] = []

    slabs = [
        (float(tv), float(xv))
        for tv, xv in zip(rng.uniform(t_lo, t_hi, 6), rng.uniform(x_lo, x_hi, 6))
    ]

    worst_l, wit_l = -np.inf, []
    worst_f, wit_f = -np.inf, []
    worst_img, wit_img = -np.inf, []
    for t, x in slabs:
        _, F, Lv = triple.e_table(t, x)
        h0 = abs(float(np.asarray(spec.eval(t, x, np.array([0.0])))[0]))
        viol = float(np.max(-Lv - h0))
        if viol > worst_l:
            worst_l, wit_l = viol, [{"t": t, "x": x, "min_l": float(np.min(Lv))}]
        if mod.c is not None:
            gap = float(np.max(np.abs(F))) - float(mod.c(t)) * (1.0 + abs(x))
            if gap > worst_f:
                worst_f, wit_f = gap, [{"t": t, "x": x, "max_abs_f": float(np.max(np.abs(F)))}]
        img = image_of_controls(triple, t, x)
        if img.gap > worst_img:
            worst_img, wit_img = float(img.gap), [
                {"t": t, "x": x, "image": [img.domain.lo, img.domain.hi]}
            ]
    reports.append(
        CheckReport("triple_l_lower_bound", worst_l, "pass" if worst_l <= l_tol else "fail", wit_l)
    )
    if mod.c is not None:
        reports.append(
            CheckReport(
                "triple_f_growth",
                worst_f,
                "pass" if worst_f <= 2.0 * h + 1e-6 else "fail",
                wit_f,
            )
        )
    else:
        reports.append(
            CheckReport("triple_f_growth", 0.0, "pass", [{"note": "missing (H4): no c(t) bound"}])
        )

    worst_lip, wit_lip = -np.inf, []
    for _ in range(n_pairs):
        t = float(rng.uniform(t_lo, t_hi))
        x = float(rng.uniform(x_lo, x_hi))
        y = float(rng.uniform(x_lo, x_hi))
        a, b = _draw_pair_controls(triple, rng)
        ea = np.asarray(triple.e_eval(t, x, a), dtype=float)
        eb = np.asarray(triple.e_eval(t, y, b), dtype=float)
        lhs = float(np.linalg.norm(ea - eb))
        d = abs(x - y)
        Ma, Mb = triple.scaling.eval(t, x), triple.scaling.eval(t, y)
        scaled = float(np.linalg.norm(Ma * np.atleast_1d(a) - Mb * np.atleast_1d(b)))
        k = float(mod.k_R(R, t))
        w = float(mod.w_R(R, t, d))
        rhs = 10.0 * (spec.n + 1) * (k * d + w + scaled)
        margin = lhs - rhs
        if margin > worst_lip:
            worst_lip = margin
            wit_lip = [
                {
                    "t": t,
                    "x": x,
                    "y": y,
                    "lhs": lhs,
                    "rhs_combined": rhs,
                    "rhs_mixed": 5.0 * (spec.n + 1) * (2.0 * k * d + 2.0 * w + scaled),
                }
            ]
    reports.append(
        CheckReport(
            "triple_lipschitz", worst_lip, "pass" if worst_lip <= lip_slack else "fail", wit_lip
        )
    )

    mtol = membership_tol if membership_tol is not None else max(2.0 * h, 1e-9)
    L_of = _slice_access(triple)
    worst_mem, wit_mem = -np.inf, []
    for t, x in slabs[:4]:
        _, F, Lv = triple.e_table(t, x)
        idx = np.arange(0, len(F), max(1, len(F) // 64))
        vals = L_of(t, x)(F[idx])
        viol = float(np.max(np.where(np.isfinite(vals), vals - Lv[idx], np.inf)))
        if viol > worst_mem:
            worst_mem, wit_mem = viol, [{"t": t, "x": x}]
    reports.append(
        CheckReport(
            "triple_membership", worst_mem, "pass" if worst_mem <= mtol else "fail", wit_mem
        )
    )

    reports.append(
        CheckReport(
            "triple_image_gap", worst_img, "pass" if worst_img <= image_gap_tol else "fail", wit_img
        )
    )
    return reports


def sandwich_check(
    triple: RepresentationTriple,
    t: float,
    x: float,
    tol: float = 5e-2,
) -> CheckReport:
    """Two-sided inclusion audit for a compact-control triple at one (t, x):
    the bounded epigraph below lambda sits inside the hull of the sampled
    e-values, which sits inside the (truncated) epigraph, both within tol.
    """
    from .fenchel import build_bounded_epigraph

    if triple.lam is None or triple._core is None:
        raise ConfigError("sandwich_check needs a compact-control constructed triple")
    core: _SliceCore = triple._core
    fn = core.slice(t, x)
    lam_val = float(triple.lam(t, x))
    lower = build_bounded_epigraph(fn, lam_val)
    _, F, Lv = triple.e_table(t, x)
    hull = cg.ConvexBody(np.stack([F, Lv], axis=1))
    cap = float(np.max(Lv)) + 1.0
    outer = core.epigraph(t, x, cap)
    gap_lower = cg.containment_gap(hull, lower.body)
    gap_outer = cg.containment_gap(outer.body, hull)
    worst = float(max(gap_lower, gap_outer))
    wit = [
        {
            "t": float(t),
            "x": float(x),
            "lambda": lam_val,
            "bounded_in_hull_gap": float(gap_lower),
            "hull_in_epigraph_gap": float(gap_outer),
        }
    ]
    return CheckReport("sandwich", worst, "pass" if worst <= tol else "fail", wit)
