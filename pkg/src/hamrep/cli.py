"""Batch front door for the toolkit.

Runs conjugation sweeps, continuity checks, representation builds and
audits, convexification pipelines, and stability experiments from one JSON
config, writing deterministic CSV/JSON artifacts plus a timestamped
metadata sidecar. Exit status: 0 when every check passes (free-text
verdicts count as informational, not failures), 2 when any check fails,
1 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import pathlib
import re
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import compactness, convex_geom as cg, stability, zoo
from .builder import (
    APlan,
    GridPolicy,
    Window,
    build_compact,
    build_noncompact,
    reconstruct_H,
    sandwich_check,
    verify_triple,
)
from .errors import ConfigError, HamrepError, UnknownName
from .exprs import compile_expr, compile_hamiltonian
from .fenchel import ConvexGridFunction, UniformGrid, conjugate, epi_sum, restrict, slope_range
from .report import CheckReport, reports_to_json
from .sampling import SamplePlan

COMMANDS = ("conjugate", "check", "represent", "verify", "compactness", "stability", "zoo-list")

_TRIPLES = {
    "hat_rep_ex_2_1": zoo.hat_rep_ex_2_1,
    "circle_rep_ex_2_2": zoo.circle_rep_ex_2_2,
    "family_p_abs": zoo.family_p_abs,
}

_CONFIG_KEYS = {
    "command",
    "hamiltonian",
    "window",
    "grids",
    "seed",
    "output_dir",
    "tolerances",
    "kind",
    "family",
    "fixed_t",
    "triple",
    "R",
    "epigraph_check",
    "summand",
    "geometry",
}


@dataclasses.dataclass
class RunConfig:
    """Validated run description assembled from the JSON config and flags."""

    command: str
    hamiltonian: str | dict | list = "ex_2_2"
    window: Window = dataclasses.field(default_factory=Window)
    v_count: int = 601
    p_count: int = 10001
    a_plan: APlan = dataclasses.field(default_factory=APlan)
    seed: int = 0
    output_dir: str = "out"
    tolerances: dict = dataclasses.field(default_factory=dict)
    kind: str = "noncompact"
    family: str | None = None
    fixed_t: float | None = None
    triple: str | None = None
    R: float = 2.0
    epigraph_check: bool = True
    summand: str | None = None
    geometry: bool = False

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def plan(self) -> SamplePlan:
        return SamplePlan(seed=self.seed)

    def policy(self) -> GridPolicy:
        return GridPolicy(p_count=self.p_count, v_count=self.v_count)


def _range_pair(raw, name: str) -> tuple[float, float]:
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
    ):
        raise ConfigError(f"{name} must be a two-number list [lo, hi]")
    lo, hi = float(raw[0]), float(raw[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ConfigError(f"{name} must be a nonempty finite range, got [{lo}, {hi}]")
    return lo, hi


def _int_field(raw, name: str, minimum: int) -> int:
    if not isinstance(raw, int) or isinstance(raw, bool) or raw < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {raw!r}")
    return raw


def parse_config(doc: dict, seed: int | None = None, out: str | None = None, tols: dict | None = None) -> RunConfig:
    """Validate the JSON document plus flag overrides into a RunConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    command = doc.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}; got {command!r}")

    win_doc = doc.get("window", {})
    if not isinstance(win_doc, dict):
        raise ConfigError('"window" must be an object')
    defaults = Window()
    window = Window(
        t_range=_range_pair(win_doc.get("t_range", defaults.t_range), "window.t_range"),
        x_range=_range_pair(win_doc.get("x_range", defaults.x_range), "window.x_range"),
        p_range=_range_pair(win_doc.get("p_range", defaults.p_range), "window.p_range"),
    )

    grids = doc.get("grids", {})
    if not isinstance(grids, dict):
        raise ConfigError('"grids" must be an object')
    v_count = _int_field(grids.get("v_count", 601), "grids.v_count", 33)
    p_count = _int_field(grids.get("p_count", 10001), "grids.p_count", 33)
    ap_doc = grids.get("a_plan", {})
    if not isinstance(ap_doc, dict):
        raise ConfigError('"grids.a_plan" must be an object')
    ap_def = APlan()
    a_plan = APlan(
        n_box=_int_field(ap_doc.get("n_box", ap_def.n_box), "a_plan.n_box", 6),
        box_half=float(ap_doc.get("box_half", ap_def.box_half)),
        n_radii=_int_field(ap_doc.get("n_radii", ap_def.n_radii), "a_plan.n_radii", 2),
        n_angles=_int_field(ap_doc.get("n_angles", ap_def.n_angles), "a_plan.n_angles", 8),
        n_interval=_int_field(ap_doc.get("n_interval", ap_def.n_interval), "a_plan.n_interval", 33),
    )
    # every sample family stays at or above the 33-point floor
    if a_plan.n_box * a_plan.n_box < 33 or a_plan.n_radii * a_plan.n_angles < 33:
        raise ConfigError("a_plan must keep at least 33 samples per control family")
    if a_plan.box_half <= 0.0:
        raise ConfigError("a_plan.box_half must be positive")

    cfg_seed = doc.get("seed", 0) if seed is None else seed
    if not isinstance(cfg_seed, int) or isinstance(cfg_seed, bool) or cfg_seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {cfg_seed!r}")

    tolerances = dict(doc.get("tolerances", {}))
    if not all(isinstance(k, str) for k in tolerances):
        raise ConfigError("tolerance names must be strings")
    for key, val in tolerances.items():
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(f"tolerance {key!r} must be a number")
    tolerances.update(tols or {})

    kind = doc.get("kind", "noncompact")
    allowed_kinds = ("noncompact", "compact", "both") if command in ("represent", "verify") else ("noncompact", "compact")
    if kind not in allowed_kinds:
        raise ConfigError(f"kind must be one of {', '.join(allowed_kinds)}; got {kind!r}")

    fixed_t = doc.get("fixed_t")
    if fixed_t is not None:
        fixed_t = float(fixed_t)
        if not window.t_range[0] <= fixed_t <= window.t_range[1]:
            raise ConfigError(f"fixed_t={fixed_t} lies outside window.t_range")

    family = doc.get("family")
    if family is not None and family != "all" and family not in stability.family_names():
        raise ConfigError(f"unknown family {family!r}; know {stability.family_names()} or \"all\"")

    triple = doc.get("triple")
    if triple == "all" and command != "compactness":
        raise ConfigError('triple "all" is only valid for the compactness command')
    if triple is not None and triple != "all" and triple not in _TRIPLES:
        raise ConfigError(f"unknown triple {triple!r}; know {sorted(_TRIPLES)}")

    ham = doc.get("hamiltonian", "ex_2_2")
    if isinstance(ham, list):
        if command not in ("check", "represent", "verify") or not ham or not all(
            isinstance(n, str) for n in ham
        ):
            raise ConfigError('a "hamiltonian" list of builtin names is only valid for check/represent/verify')
    elif not isinstance(ham, (str, dict)):
        raise ConfigError('"hamiltonian" must be a builtin name, "all", a name list, or a definition object')

    summand = doc.get("summand")
    if summand is not None:
        if command != "conjugate":
            raise ConfigError('"summand" only applies to the conjugate command')
        if ham == "all":
            raise ConfigError('"summand" needs a single hamiltonian, not "all"')
        compile_expr(str(summand), ("t", "x", "p"))

    return RunConfig(
        command=command,
        hamiltonian=ham,
        window=window,
        v_count=v_count,
        p_count=p_count,
        a_plan=a_plan,
        seed=cfg_seed,
        output_dir=str(doc.get("output_dir", "out")) if out is None else out,
        tolerances=tolerances,
        kind=kind,
        family=family,
        fixed_t=fixed_t,
        triple=triple,
        R=float(doc.get("R", 2.0)),
        epigraph_check=bool(doc.get("epigraph_check", True)),
        summand=str(summand) if summand is not None else None,
        geometry=bool(doc.get("geometry", False)),
    )


def _resolve_specs(cfg: RunConfig, allow_all: bool) -> list:
    ham = cfg.hamiltonian
    if isinstance(ham, dict):
        return [compile_hamiltonian(ham)]
    if isinstance(ham, list):
        return [zoo.builtin(n) for n in ham]
    if ham == "all":
        if not allow_all:
            raise ConfigError(f'"all" is not valid for command {cfg.command!r}')
        return [zoo.builtin(n) for n in zoo.names()]
    return [zoo.builtin(ham)]


def _ham_tag(cfg: RunConfig) -> str:
    if cfg.command == "zoo-list":
        raw = "all"
    elif cfg.command == "stability":
        raw = cfg.family or "family"
    elif cfg.triple is not None:
        raw = cfg.triple
    elif isinstance(cfg.hamiltonian, dict):
        raw = str(cfg.hamiltonian.get("name", "custom"))
    elif isinstance(cfg.hamiltonian, list):
        raw = "+".join(cfg.hamiltonian)
    else:
        raw = cfg.hamiltonian
    return re.sub(r"[^A-Za-z0-9_-]+", "_", raw)


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return repr(v)
    # comma is the separator; free text swaps it for ";" to stay one cell
    return str(v).replace(",", ";")


def _write_csv(path: pathlib.Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_cell(v) for v in row) + "\n")


def _tag_reports(reports: list[CheckReport], tag: str) -> list[CheckReport]:
    return [dataclasses.replace(r, check=f"{r.check}[{tag}]") for r in reports]


def _x_values(cfg: RunConfig, count: int = 5) -> np.ndarray:
    lo, hi = cfg.window.x_range
    return np.linspace(lo, hi, count)


def _mid(rng: tuple[float, float]) -> float:
    return 0.5 * (rng[0] + rng[1])


def _run_conjugate(cfg: RunConfig):
    specs = _resolve_specs(cfg, allow_all=True)
    abs_tol = cfg.tol("abs_err", 1e-2)
    margin = cfg.tol("margin", 0.1)
    p_grid = UniformGrid(-50.0, 50.0, cfg.p_count)
    t = _mid(cfg.window.t_range)
    reports: list[CheckReport] = []
    rows: list[tuple] = []
    for spec in specs:
        numeric = zoo.lagrangian_evaluator(spec, use_oracle=False, p_grid=p_grid)
        worst = -np.inf
        worst_alt = -np.inf
        for x in _x_values(cfg):
            vs = zoo.oracle_probe_values(
                spec, t, float(x), margin=margin, count=min(cfg.v_count, 201), p_grid=p_grid
            )
            ln = np.asarray(numeric(t, float(x), vs), dtype=float)
            if spec.oracle_L is not None:
                lo_vals = np.asarray(spec.oracle_L(t, float(x), vs), dtype=float)
                both = np.isfinite(ln) & np.isfinite(lo_vals)
                err = np.where(both, np.abs(ln - lo_vals), np.where(np.isfinite(ln) == np.isfinite(lo_vals), 0.0, np.inf))
                worst = max(worst, float(np.max(err)))
                for v, a, b, e in zip(vs, ln, lo_vals, err):
                    rows.append((spec.name, t, float(x), float(v), float(a), float(b), float(e)))
            else:
                for v, a in zip(vs, ln):
                    rows.append((spec.name, t, float(x), float(v), float(a), "", ""))
            if spec.alt_oracle_L is not None:
                alt_vals = np.asarray(spec.alt_oracle_L(t, float(x), vs), dtype=float)
                worst_alt = max(worst_alt, float(np.max(np.abs(ln - alt_vals))))
        if spec.oracle_L is None:
            reports.append(
                CheckReport(f"conjugate_numeric[{spec.name}]", 0.0, "no closed form on file", [])
            )
        elif spec.alt_oracle_L is not None:
            prim_ok = worst <= abs_tol
            alt_ok = worst_alt <= abs_tol
            if prim_ok == alt_ok:
                verdict = "fail"
            else:
                verdict = "matches derived form" if prim_ok else "matches printed form"
            reports.append(
                CheckReport(
                    f"conjugate_form_selection[{spec.name}]",
                    float(min(worst, worst_alt)),
                    verdict,
                    [{"err_derived": float(worst), "err_printed": float(worst_alt)}],
                )
            )
        else:
            reports.append(
                CheckReport(
                    f"conjugate_oracle_match[{spec.name}]",
                    float(worst),
                    "pass" if worst <= abs_tol else "fail",
                    [{"abs_tol": abs_tol, "margin": margin}],
                )
            )
    if cfg.summand is not None:
        reports.append(_episum_identity(cfg, specs[0], p_grid, t, rows))
    header = ["hamiltonian", "t", "x", "v", "L_numeric", "L_oracle", "abs_err"]
    return reports, header, rows, {}


def _episum_identity(cfg: RunConfig, spec, p_grid: UniformGrid, t: float, rows: list) -> CheckReport:
    """Conjugation turns sums into epigraphical sums: compare the numeric
    conjugate of H + summand against the epi-sum of the two conjugates,
    each restricted to its edge-slope trust interval."""
    x = _mid(cfg.window.x_range)
    tol = cfg.tol("episum", 2e-2)
    h2 = compile_expr(cfg.summand, ("t", "x", "p"))
    nodes = p_grid.nodes()
    h1_vals = np.asarray(spec.eval(t, x, nodes), dtype=float)
    h2_vals = np.asarray(h2(t, x, nodes), dtype=float)
    h1_fn = ConvexGridFunction(p_grid, h1_vals)
    h2_fn = ConvexGridFunction(p_grid, h2_vals)
    sum_fn = ConvexGridFunction(p_grid, h1_vals + h2_vals)
    width = max(abs(s) for s in slope_range(sum_fn)) + 0.5
    v_grid = UniformGrid(-width, width, cfg.v_count)
    lhs = restrict(conjugate(sum_fn, v_grid), *slope_range(sum_fn))
    f1 = restrict(conjugate(h1_fn, v_grid), *slope_range(h1_fn))
    f2 = restrict(conjugate(h2_fn, v_grid), *slope_range(h2_fn))
    rhs = epi_sum(f1, f2)
    both = np.isfinite(lhs.values) & np.isfinite(rhs.values)
    mismatch = int(np.sum(np.isfinite(lhs.values) != np.isfinite(rhs.values)))
    worst = float(np.max(np.abs(lhs.values[both] - rhs.values[both]))) if np.any(both) else np.inf
    # a one-node skirt per side covers the trust-window vs sum-window seam
    verdict = "pass" if worst <= tol and mismatch <= 2 else "fail"
    vs = v_grid.nodes()
    for v, a, b in zip(vs[both], lhs.values[both], rhs.values[both]):
        rows.append((f"{spec.name}+summand", t, x, float(v), float(a), float(b), float(abs(a - b))))
    return CheckReport(
        "episum_identity",
        worst,
        verdict,
        [{"summand": cfg.summand, "inf_mismatch_nodes": mismatch, "tol": tol}],
    )


def _run_check(cfg: RunConfig):
    specs = _resolve_specs(cfg, allow_all=True)
    plan = cfg.plan()
    p_grid = UniformGrid(-50.0, 50.0, cfg.p_count)
    reports: list[CheckReport] = []
    for spec in specs:
        got = [
            zoo.check_HLC(spec, cfg.R, samples=plan, tol=cfg.tol("hlc", 1e-9)),
            zoo.check_LLC(spec, cfg.R, samples=plan, tol=cfg.tol("llc", 2e-2)),
            zoo.check_MLC(
                spec,
                cfg.R,
                samples=plan,
                p_grid=p_grid,
                v_count=cfg.v_count,
                tol=cfg.tolerances.get("mlc"),
            ),
        ]
        reports.extend(_tag_reports(got, spec.name) if len(specs) > 1 else got)
    if cfg.geometry:
        reports.extend(cg.geometry_suite(plan))
    header = ["check", "worst_margin", "verdict"]
    rows = [(r.check, float(r.worst_margin), r.verdict) for r in reports]
    return reports, header, rows, {}


def _kinds(cfg: RunConfig) -> tuple[str, ...]:
    return ("noncompact", "compact") if cfg.kind == "both" else (cfg.kind,)


def _build_triple(cfg: RunConfig, spec, kind: str):
    if kind == "compact":
        return build_compact(spec, grids=cfg.policy(), plan=cfg.a_plan)
    return build_noncompact(spec, grids=cfg.policy(), plan=cfg.a_plan)


def _run_represent(cfg: RunConfig):
    specs = _resolve_specs(cfg, allow_all=False)
    multi = len(specs) > 1 or cfg.kind == "both"
    recon_tol = cfg.tol("reconstruction", 5e-2)
    sound_tol = cfg.tol("soundness", 2e-2)
    t = _mid(cfg.window.t_range)
    ps = np.linspace(cfg.window.p_range[0], cfg.window.p_range[1], 41)
    rows: list[tuple] = []
    reports: list[CheckReport] = []
    extra: dict = {"kind": cfg.kind}
    for spec in specs:
        for kind in _kinds(cfg):
            triple = _build_triple(cfg, spec, kind)
            worst_rec, worst_sound = -np.inf, -np.inf
            for x in _x_values(cfg):
                Hp = np.asarray(spec.eval(t, float(x), ps), dtype=float)
                rec = np.array([reconstruct_H(triple, t, float(x), float(p)) for p in ps])
                err = np.abs(rec - Hp)
                worst_rec = max(worst_rec, float(np.max(err)))
                worst_sound = max(worst_sound, float(np.max(rec - Hp)))
                for p, hv, rv, e in zip(ps, Hp, rec, err):
                    rows.append((spec.name, kind, t, float(x), float(p), float(hv), float(rv), float(e)))
            local = [
                CheckReport(
                    "reconstruction_sup_error",
                    worst_rec,
                    "pass" if worst_rec <= recon_tol else "fail",
                    [{"tol": recon_tol}],
                ),
                CheckReport(
                    "reconstruction_soundness",
                    worst_sound,
                    "pass" if worst_sound <= sound_tol else "fail",
                    [{"tol": sound_tol}],
                ),
            ]
            local.extend(
                verify_triple(
                    triple,
                    cfg.window,
                    plan=cfg.plan(),
                    l_tol=cfg.tol("l_lower", 2e-2),
                    lip_slack=cfg.tol("lip_slack", 5e-3),
                    image_gap_tol=cfg.tol("image_gap", 5e-2),
                )
            )
            if kind == "compact":
                for x in _x_values(cfg, 3):
                    local.append(sandwich_check(triple, t, float(x), tol=cfg.tol("sandwich", 5e-2)))
            reports.extend(_tag_reports(local, f"{spec.name}:{kind}") if multi else local)
            extra[f"caps[{spec.name}:{kind}]"] = triple.caps
    header = ["hamiltonian", "kind", "t", "x", "p", "H", "H_reconstructed", "abs_err"]
    return reports, header, rows, extra


def _run_verify(cfg: RunConfig):
    jobs: list[tuple[str, object]] = []
    if cfg.triple is not None:
        jobs.append((cfg.triple, _TRIPLES[cfg.triple]()))
    else:
        for spec in _resolve_specs(cfg, allow_all=False):
            for kind in _kinds(cfg):
                jobs.append((f"{spec.name}:{kind}", _build_triple(cfg, spec, kind)))
    reports: list[CheckReport] = []
    for tag, triple in jobs:
        local = verify_triple(
            triple,
            cfg.window,
            plan=cfg.plan(),
            l_tol=cfg.tol("l_lower", 2e-2),
            lip_slack=cfg.tol("lip_slack", 5e-3),
            image_gap_tol=cfg.tol("image_gap", 5e-2),
        )
        reports.extend(_tag_reports(local, tag) if len(jobs) > 1 else local)
    header = ["check", "worst_margin", "verdict"]
    rows = [(r.check, float(r.worst_margin), r.verdict) for r in reports]
    return reports, header, rows, {}


# aggregate compactness program: lambda-extraction on named triples plus
# boundedness verdicts on the spec side, one tagged report stream
_BLC_VERDICT_SPECS = ("ex_2_2", "ex_2_3", "ex_2_4")
_CERTIFIED_TRIPLES = ("hat_rep_ex_2_1", "circle_rep_ex_2_2")


def _run_compactness(cfg: RunConfig):
    plan = cfg.plan()
    t_range, x_range = cfg.window.t_range, cfg.window.x_range
    if cfg.triple == "all":
        reports: list[CheckReport] = []
        rows: list[tuple] = []
        for name in sorted(_TRIPLES):
            base = _TRIPLES[name]()
            local = [
                compactness.lemma41_check(
                    base, plan=plan, t_range=t_range, x_range=x_range, tol=cfg.tol("lemma41", 2e-2)
                )
            ]
            if name in _CERTIFIED_TRIPLES:
                ct = compactness.convexify(base)
                lam = compactness.extract_lambda(
                    ct, plan=plan, t_range=t_range, x_range=x_range, tol=cfg.tol("blc", 2e-2)
                )
                local.append(lam.certification)
                for t in np.linspace(t_range[0], t_range[1], 3):
                    for x in np.linspace(x_range[0], x_range[1], 3):
                        rows.append((name, float(t), float(x), float(lam.eval(float(t), float(x)))))
            reports.extend(_tag_reports(local, name))
        for ham in _BLC_VERDICT_SPECS:
            rep = compactness.detect_blc_failure(
                zoo.builtin(ham),
                t_range=t_range,
                x_range=x_range,
                threshold=cfg.tol("blc_threshold", 1e3),
                plan=plan,
            )
            reports.extend(_tag_reports([rep], ham))
        header = ["triple", "t", "x", "lambda"]
        return reports, header, rows, {}
    if cfg.triple is not None:
        base = _TRIPLES[cfg.triple]()
        ct = compactness.convexify(base)
        lam = compactness.extract_lambda(
            ct, plan=plan, t_range=t_range, x_range=x_range, tol=cfg.tol("blc", 2e-2)
        )
        reports = [
            compactness.lemma41_check(
                base, plan=plan, t_range=t_range, x_range=x_range, tol=cfg.tol("lemma41", 2e-2)
            ),
            lam.certification,
        ]
        rows = []
        for t in np.linspace(t_range[0], t_range[1], 5):
            for x in np.linspace(x_range[0], x_range[1], 5):
                rows.append((float(t), float(x), float(lam.eval(float(t), float(x)))))
        header = ["t", "x", "lambda"]
        extra = {"lambda_note": lam.note, "triple": cfg.triple}
        return reports, header, rows, extra
    spec = _resolve_specs(cfg, allow_all=False)[0]
    rep = compactness.detect_blc_failure(
        spec,
        t_range=t_range,
        x_range=x_range,
        threshold=cfg.tol("blc_threshold", 1e3),
        plan=plan,
    )
    header = ["margin", "interior_sup"]
    rows = [
        (float(w["margin"]), float(w["sup"]))
        for w in rep.witnesses
        if isinstance(w, dict) and "margin" in w
    ]
    return [rep], header, rows, {"verdict": rep.verdict}


# aggregate stability program: the convergence families plus the
# zero-perturbation control, each with its natural builder and slab mode
_STABILITY_SUITE = (
    ("ex_2_1_sinx", "noncompact", None),
    ("ex_2_2_lambda", "compact", None),
    ("ex_2_6_absx", "noncompact", 0.5),
    ("ex_2_2_zero", "noncompact", None),
)


def _stability_single(cfg: RunConfig, name: str, kind: str, fixed_t: float | None):
    family = stability.named_family(name)
    rep = stability.representation_convergence(
        family,
        kind=kind,
        window=cfg.window,
        plan=cfg.plan(),
        policy=cfg.policy(),
        bound_slack=cfg.tol("bound_slack", 5e-3),
        fixed_t=fixed_t,
    )
    reports = [rep.decay_report(ratio=cfg.tol("decay_ratio", 0.3)), rep.bound_report()]
    if name.endswith("_zero"):
        worst = max((float(r.sup_e_err) for r in rep.rows), default=0.0)
        reports.append(
            CheckReport(
                "zero_control_exact",
                worst,
                "pass" if worst == 0.0 else "fail",
                [{"family": name}],
            )
        )
    if cfg.epigraph_check:
        reports.append(
            stability.epigraph_limit_check(
                family,
                window=cfg.window,
                plan=cfg.plan(),
                policy=cfg.policy(),
                abs_tol=cfg.tol("epigraph_abs", 5e-2),
                ratio=cfg.tol("decay_ratio", 0.3),
            )
        )
    rows = [
        (
            name,
            r.i,
            float(r.sup_e_err),
            float(r.sup_f_err),
            float(r.sup_l_err),
            float(r.sup_hausdorff_EL),
        )
        for r in rep.rows
    ]
    return reports, rows, rep.kind


def _run_stability(cfg: RunConfig):
    if not cfg.family:
        raise ConfigError(f'stability needs a "family" name; know {stability.family_names()}')
    header = ["family", "i", "sup_e_err", "sup_f_err", "sup_l_err", "sup_hausdorff_EL"]
    if cfg.family == "all":
        reports: list[CheckReport] = []
        rows: list[tuple] = []
        for name, kind, fixed_t in _STABILITY_SUITE:
            local, local_rows, _ = _stability_single(cfg, name, kind, fixed_t)
            # decay and bound reports already carry the family in their name
            reports.extend(
                r if f"[{name}]" in r.check else _tag_reports([r], name)[0] for r in local
            )
            rows.extend(local_rows)
        return reports, header, rows, {"family": "all"}
    reports, rows, kind = _stability_single(cfg, cfg.family, cfg.kind, cfg.fixed_t)
    extra = {"family": cfg.family, "kind": kind, "fixed_t": cfg.fixed_t}
    return reports, header, rows, extra


def _run_zoo_list(cfg: RunConfig):
    rows: list[tuple] = []
    for name in zoo.names():
        spec = zoo.builtin(name)
        flags = "+".join(k for k, v in sorted(spec.flags.items()) if v)
        rows.append(("hamiltonian", name, flags, spec.notes))
    for name in sorted(_TRIPLES):
        rows.append(("triple", name, "", _TRIPLES[name]().provenance))
    for name in stability.family_names():
        rows.append(("family", name, "", ""))
    header = ["entry", "name", "flags", "notes"]
    extra = {
        "hamiltonians": zoo.names(),
        "triples": sorted(_TRIPLES),
        "families": stability.family_names(),
    }
    return [], header, rows, extra


_RUNNERS = {
    "conjugate": _run_conjugate,
    "check": _run_check,
    "represent": _run_represent,
    "verify": _run_verify,
    "compactness": _run_compactness,
    "stability": _run_stability,
    "zoo-list": _run_zoo_list,
}


def run(cfg: RunConfig, quiet: bool = False) -> int:
    """Execute one validated config: write artifacts, print check lines."""
    started = time.time()
    reports, header, rows, extra = _RUNNERS[cfg.command](cfg)
    out_dir = pathlib.Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.command}_{_ham_tag(cfg)}_{cfg.seed}"

    csv_path = out_dir / f"{stem}.csv"
    _write_csv(csv_path, header, rows)
    json_path = out_dir / f"{stem}.json"
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            reports_to_json(
                reports,
                command=cfg.command,
                hamiltonian=_ham_tag(cfg),
                seed=cfg.seed,
                **extra,
            )
        )
    meta_path = out_dir / f"{stem}_meta.json"
    meta = {
        "artifacts": [csv_path.name, json_path.name],
        "elapsed_seconds": round(time.time() - started, 3),
        "schema": 1,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    if not quiet:
        for rep in reports:
            print(rep.line())
        print(f"wrote {csv_path} {json_path}")
    return 0 if all(r.passed for r in reports) else 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hamrep",
        description="Convex Hamiltonian representation toolkit batch runner.",
    )
    parser.add_argument("--config", required=True, help="path to a JSON run config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="override the output directory")
    parser.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override one tolerance (repeatable)",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress per-check output")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        tols = {}
        for item in args.tol:
            name, sep, value = item.partition("=")
            if not sep or not name:
                raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
            try:
                tols[name] = float(value)
            except ValueError:
                raise ConfigError(f"--tol {name}: {value!r} is not a number") from None
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config!r} is not valid JSON: {exc}") from exc
        cfg = parse_config(doc, seed=args.seed, out=args.out, tols=tols)
        return run(cfg, quiet=args.quiet)
    except (ConfigError, UnknownName) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except HamrepError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
