"""Stability diagnostics for representations under Hamiltonian perturbations.

A perturbation family H_i = H + perturb(i, .) induces Lagrangian slices
L_i and representations e_i built with identical grids and seeds. The
diagnostics measure, per index: set-limit behavior of the epigraphs via
distance probes, uniform e_i -> e errors over fixed sample plans, and the
Steiner-composition bound |e_i - e| <= 5(n+1) [H(E_i, E) + |M_i - M| |a|]
pointwise. Decay is judged by the ratio of the final to the first index.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import io
from typing import Callable

import numpy as np

from . import convex_geom as cg
from .builder import (
    APlan,
    GridPolicy,
    RepresentationTriple,
    Window,
    _SliceCore,
    build_compact,
    build_noncompact,
)
from .errors import HypothesisViolation
from .fenchel import build_epigraph
from .report import CheckReport
from .sampling import SamplePlan, worker_count
from .zoo import HamiltonianSpec, LambdaBound, builtin

DEFAULT_INDICES = (4, 16, 64)


@dataclasses.dataclass(frozen=True)
class PerturbationFamily:
    """H_i := base + perturb(i, t, x, p) for a finite increasing index set.

    perturb receives the p-array of the evaluation and returns a scalar or
    array; it must keep every H_i finite and convex in p on the probed
    window (checked by validate). For compact builds, lam_per_index and
    c_per_index supply the per-index bound and growth data.
    """

    name: str
    base: HamiltonianSpec
    perturb: Callable  # (i, t, x, p-array) -> scalar or array
    indices: tuple[int, ...] = DEFAULT_INDICES
    lam_per_index: Callable | None = None  # i -> (t, x) -> float
    c_per_index: Callable | None = None  # i -> (t -> float)

    def spec_for(self, i: int) -> HamiltonianSpec:
        base = self.base
        pert = self.perturb

        def ev(t, x, p, _i=i):
            p = np.asarray(p, dtype=float)
            return np.asarray(base.eval(t, x, p), dtype=float) + pert(_i, t, x, p)

        modulus = base.modulus
        if self.c_per_index is not None:
            modulus = dataclasses.replace(modulus, c=self.c_per_index(i))
        return dataclasses.replace(
            base,
            name=f"{base.name}+i{i}",
            eval=ev,
            modulus=modulus,
            oracle_L=None,
            oracle_dom=None,
            alt_oracle_L=None,
            lambda_bound=None,
            notes=f"perturbed member {i} of family {self.name}",
        )

    def limit_spec(self) -> HamiltonianSpec:
        """Unperturbed base, stripped of oracles so the limit representation
        runs through the same numeric pipeline as the perturbed members."""
        return dataclasses.replace(
            self.base,
            name=f"{self.base.name}+limit",
            oracle_L=None,
            oracle_dom=None,
            alt_oracle_L=None,
            notes=f"limit member of family {self.name}",
        )

    def lam_for(self, i: int | None):
        if i is not None and self.lam_per_index is not None:
            return self.lam_per_index(i)
        if self.base.lambda_bound is not None:
            return self.base.lambda_bound.eval
        return None

    def validate(
        self,
        p_range: tuple[float, float] = (-3.0, 3.0),
        plan: SamplePlan | None = None,
        tol: float = 1e-9,
    ) -> CheckReport:
        """Sampled midpoint-convexity and finiteness probe of every H_i."""
        plan = plan or SamplePlan()
        rng = plan.rng(61)
        worst, wit = -np.inf, []
        for i in self.indices:
            spec = self.spec_for(i)
            for _ in range(40):
                t = float(rng.uniform(*self.base.t_range))
                x = float(rng.uniform(-1.0, 1.0))
                p, q = rng.uniform(*p_range, 2)
                vals = np.asarray(
                    spec.eval(t, x, np.array([p, q, 0.5 * (p + q)])), dtype=float
                )
                if not np.all(np.isfinite(vals)):
                    raise HypothesisViolation(f"H_{i} not finite at t={t}, x={x}")
                scale = max(1.0, float(np.max(np.abs(vals))))
                gap = float(vals[2] - 0.5 * (vals[0] + vals[1])) / scale
                if gap > worst:
                    worst, wit = gap, [{"i": i, "t": t, "x": x, "p": p, "q": q}]
        return CheckReport(
            "family_convexity_probe", worst, "pass" if worst <= tol else "fail", wit
        )


def named_family(name: str) -> PerturbationFamily:
    """Registry of the perturbation families used by the stability suites."""
    if name == "ex_2_2_cos":
        return PerturbationFamily(
            name, builtin("ex_2_2"), lambda i, t, x, p: (1.0 / i) * np.cos(p)
        )
    if name == "ex_2_2_normalized":
        return PerturbationFamily(
            name, builtin("ex_2_2"), lambda i, t, x, p: (0.1 / i) * (1.0 + np.abs(p))
        )
    if name == "ex_2_1_sinx":
        return PerturbationFamily(
            name, builtin("ex_2_1"), lambda i, t, x, p: (1.0 / i) * np.sin(x)
        )
    if name == "ex_2_6_absx":
        return PerturbationFamily(
            name, builtin("ex_2_6"), lambda i, t, x, p: (1.0 / i) * abs(x)
        )
    if name == "ex_2_2_zero":
        return PerturbationFamily(name, builtin("ex_2_2"), lambda i, t, x, p: 0.0)
    if name == "ex_2_2_lambda":
        base = builtin("ex_2_2")
        return PerturbationFamily(
            name,
            base,
            lambda i, t, x, p: 0.0,
            lam_per_index=lambda i: (lambda t, x: abs(x) + 1.0 / i),
            c_per_index=lambda i: (lambda t: 1.0),
        )
    raise KeyError(f"unknown perturbation family {name!r}")


def family_names() -> list[str]:
    return [
        "ex_2_2_cos",
        "ex_2_2_normalized",
        "ex_2_1_sinx",
        "ex_2_6_absx",
        "ex_2_2_zero",
        "ex_2_2_lambda",
    ]


@dataclasses.dataclass(frozen=True)
class IndexRow:
    i: int
    sup_e_err: float
    sup_f_err: float
    sup_l_err: float
    sup_hausdorff_EL: float
    bound_margin: float


@dataclasses.dataclass
class StabilityReport:
    family: str
    kind: str
    window: Window
    rows: list[IndexRow]
    bound_slack: float = 5e-3

    def decay_report(self, ratio: float = 0.3) -> CheckReport:
        rows = sorted(self.rows, key=lambda r: r.i)
        first, last = rows[0].sup_e_err, rows[-1].sup_e_err
        ok = last <= ratio * first if first > 0 else last == 0.0
        wit = [
            {"i": r.i, "sup_e_err": r.sup_e_err, "sup_hausdorff_EL": r.sup_hausdorff_EL}
            for r in rows
        ]
        return CheckReport(
            f"stability_decay[{self.family}]",
            float(last - ratio * first),
            "pass" if ok else "fail",
            wit,
        )

    def bound_report(self) -> CheckReport:
        worst = max(r.bound_margin for r in self.rows)
        wit = [{"i": r.i, "bound_margin": r.bound_margin} for r in self.rows]
        return CheckReport(
            f"steiner_composition_bound[{self.family}]",
            float(worst),
            "pass" if worst <= 0.0 else "fail",
            wit,
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("i,sup_e_err,sup_f_err,sup_l_err,sup_hausdorff_EL\n")
        for r in sorted(self.rows, key=lambda q: q.i):
            cells = [
                str(r.i),
                repr(float(r.sup_e_err)),
                repr(float(r.sup_f_err)),
                repr(float(r.sup_l_err)),
                repr(float(r.sup_hausdorff_EL)),
            ]
            out.write(",".join(cells) + "\n")
        return out.getvalue()


def _stability_a_plan(kind: str) -> APlan:
    # coarse fixed plans: errors compare e_i and e at identical controls
    if kind == "compact":
        return APlan(n_radii=4, n_angles=12)
    return APlan(n_box=9)


def _slabs(window: Window, plan: SamplePlan, n: int, fixed_t: float | None):
    rng = plan.rng(83)
    ts = rng.uniform(*window.t_range, n) if fixed_t is None else np.full(n, fixed_t)
    xs = rng.uniform(*window.x_range, n)
    return [(float(t), float(x)) for t, x in zip(ts, xs)]


def _build(kind: str, spec: HamiltonianSpec, lam, policy: GridPolicy) -> RepresentationTriple:
    if kind == "compact":
        return build_compact(spec, lam=lam, grids=policy)
    return build_noncompact(spec, grids=policy)


def _common_cap_hausdorff(core_i: _SliceCore, core: _SliceCore, t: float, x: float) -> float:
    fi, f0 = core_i.slice(t, x), core.slice(t, x)
    cap = max(fi.min_value(), f0.min_value()) + 5.0
    Ei = build_epigraph(fi, cap)
    E0 = build_epigraph(f0, cap)
    return float(cg.hausdorff(Ei.body, E0.body))


def representation_convergence(
    family: PerturbationFamily,
    kind: str = "noncompact",
    window: Window | None = None,
    plan: SamplePlan | None = None,
    policy: GridPolicy | None = None,
    n_slabs: int = 3,
    bound_slack: float = 5e-3,
    fixed_t: float | None = None,
) -> StabilityReport:
    """Uniform-convergence audit e_i -> e over a fixed (t, x, a) sample plan.

    All members and the limit are built with identical grid policies, so a
    zero perturbation reproduces the limit bit for bit. Each row also
    carries the worst margin of the Steiner-composition bound
    |e_i - e| <= 5(n+1) [H(E_i, E) + |M_i - M| |a|] + bound_slack.
    """
    window = window or Window()
    plan = plan or SamplePlan()
    policy = policy or GridPolicy()
    probe = family.validate(window.p_range, plan)
    if not probe.passed:
        raise HypothesisViolation(f"family {family.name}: convexity probe failed")
    slabs = _slabs(window, plan, n_slabs, fixed_t)
    a_plan = _stability_a_plan(kind)
    n1 = family.base.n + 1

    limit = _build(kind, family.limit_spec(), family.lam_for(None), policy)
    a_samples = limit.control.samples(a_plan)

    def measure(i: int) -> IndexRow:
        tri = _build(kind, family.spec_for(i), family.lam_for(i), policy)
        sup_e = sup_f = sup_l = sup_h = -np.inf
        margin = -np.inf
        for t, x in slabs:
            _, F_i, L_i = tri.e_table(t, x, a_samples)
            _, F_0, L_0 = limit.e_table(t, x, a_samples)
            e_err = np.hypot(F_i - F_0, L_i - L_0)
            sup_e = max(sup_e, float(np.max(e_err)))
            sup_f = max(sup_f, float(np.max(np.abs(F_i - F_0))))
            sup_l = max(sup_l, float(np.max(np.abs(L_i - L_0))))
            hd = _common_cap_hausdorff(tri._core, limit._core, t, x)
            sup_h = max(sup_h, hd)
            dM = abs(tri.scaling.eval(t, x) - limit.scaling.eval(t, x))
            norms = np.linalg.norm(np.atleast_2d(a_samples), axis=1)
            rhs = 5.0 * n1 * (hd + dM * norms) + bound_slack
            margin = max(margin, float(np.max(e_err - rhs)))
        return IndexRow(i, sup_e, sup_f, sup_l, sup_h, margin)

    workers = worker_count()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(measure, family.indices))
    else:
        rows = [measure(i) for i in family.indices]
    return StabilityReport(
        family=family.name,
        kind=kind,
        window=window,
        rows=sorted(rows, key=lambda r: r.i),
        bound_slack=bound_slack,
    )


def fixed_t_convergence(
    family: PerturbationFamily,
    t: float,
    window: Window | None = None,
    plan: SamplePlan | None = None,
    kind: str = "noncompact",
    policy: GridPolicy | None = None,
) -> StabilityReport:
    """representation_convergence restricted to a single time slice."""
    return representation_convergence(
        family, kind=kind, window=window, plan=plan, policy=policy, fixed_t=t
    )


def epigraph_limit_check(
    family: PerturbationFamily,
    window: Window | None = None,
    plan: SamplePlan | None = None,
    policy: GridPolicy | None = None,
    n_probes: int = 5,
    abs_tol: float = 5e-2,
    ratio: float = 0.3,
) -> CheckReport:
    """Set-limit diagnostic: along (t_i, x_i) -> (t, x), the distances
    d(y, E_{L_i}(t_i, x_i)) approach d(y, E_L(t, x)) for seeded probe
    points y. Pass iff the final-index error is both <= ratio times the
    first-index error and <= abs_tol."""
    window = window or Window()
    plan = plan or SamplePlan()
    policy = policy or GridPolicy()
    rng = plan.rng(97)
    t_lo, t_hi = window.t_range
    x_lo, x_hi = window.x_range
    t_star = 0.5 * (t_lo + t_hi)
    x_star = float(rng.uniform(0.5 * x_lo, 0.5 * x_hi))
    dt, dx = 0.3 * (t_hi - t_star), 0.3 * (x_hi - x_star)

    limit_core = _SliceCore(family.limit_spec(), policy)
    f0 = limit_core.slice(t_star, x_star)
    lmin = f0.min_value()
    probes = np.stack(
        [rng.uniform(-2.0, 2.0, n_probes), rng.uniform(lmin - 1.0, lmin + 4.0, n_probes)],
        axis=1,
    )

    cores = {i: _SliceCore(family.spec_for(i), policy) for i in family.indices}
    slices = {i: cores[i].slice(t_star + dt / i, x_star + dx / i) for i in family.indices}
    cap = max([f0.min_value()] + [s.min_value() for s in slices.values()]) + 5.0
    E0 = build_epigraph(f0, cap)
    d0 = np.array([cg.distance(y, E0.body) for y in probes])

    errs, wit = [], []
    for i in family.indices:
        Ei = build_epigraph(slices[i], cap)
        di = np.array([cg.distance(y, Ei.body) for y in probes])
        err = float(np.max(np.abs(di - d0)))
        errs.append(err)
        wit.append(
            {
                "i": i,
                "worst_distance_err": err,
                "hausdorff": float(cg.hausdorff(Ei.body, E0.body)),
            }
        )
    ok = errs[-1] <= max(ratio * errs[0], 0.0) and errs[-1] <= abs_tol
    if errs[0] == 0.0:
        ok = errs[-1] == 0.0
    return CheckReport(
        f"epigraph_limit[{family.name}]",
        float(errs[-1]),
        "pass" if ok else "fail",
        wit,
    )
