import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import EX_2_3_WINDOW_VALUE, brute_conjugate
from hamrep import zoo
from hamrep.errors import UnknownName
from hamrep.sampling import SamplePlan

SMALL_PLAN = SamplePlan(seed=0, n_triples=16)


def test_names_cover_registry_and_builtin_roundtrip():
    got = zoo.names()
    assert set(got) == {"ex_2_1", "ex_2_2", "ex_2_3", "ex_2_4", "ex_2_5", "ex_2_6", "abs_p"}
    for name in got:
        assert zoo.builtin(name).name == name


def test_builtin_unknown_name():
    with pytest.raises(UnknownName):
        zoo.builtin("ex_9_9")


# dual route: the closed-form oracle_L against a dense brute-force
# maximum of p*v - H(t,x,p) that shares no code with the package
@pytest.mark.parametrize(
    "name", ["ex_2_1", "ex_2_2", "ex_2_3", "ex_2_4", "ex_2_5", "ex_2_6", "abs_p"]
)
def test_oracle_L_matches_brute_conjugate(name):
    spec = zoo.builtin(name)
    t, x = 0.5, 0.7
    probes = zoo.oracle_probe_values(spec, t, x, count=25)
    want = np.array([brute_conjugate(lambda ps: spec.eval(t, x, ps), v) for v in probes])
    got = np.asarray(spec.oracle_L(t, x, probes), dtype=float)
    assert np.all(np.isfinite(got))
    assert np.max(np.abs(got - want)) <= 1e-2


def test_ex_2_5_printed_variant_disagrees():
    spec = zoo.builtin("ex_2_5")
    t, x, v = 0.5, 0.7, 1.0
    brute = brute_conjugate(lambda ps: spec.eval(t, x, ps), v)
    derived = float(spec.oracle_L(t, x, np.array([v]))[0])
    printed = float(spec.alt_oracle_L(t, x, np.array([v]))[0])
    assert abs(brute - derived) <= 1e-2
    assert abs(brute - printed) >= 0.5


def test_ex_2_3_window_value_outside_trust():
    # at v = 0.1 the true conjugate needs slope 1/v^2 = 100, outside the
    # p-window; the window-limited maximum is the frozen smaller value
    spec = zoo.builtin("ex_2_3")
    brute = brute_conjugate(lambda ps: spec.eval(0.5, 0.0, ps), 0.1)
    assert brute == pytest.approx(EX_2_3_WINDOW_VALUE, abs=1e-6)
    assert float(spec.oracle_L(0.5, 0.0, np.array([0.1]))[0]) == pytest.approx(10.0)
    probes = zoo.oracle_probe_values(spec, 0.5, 0.0)
    assert float(np.min(probes)) >= 1.0 / np.sqrt(50.0) - 1e-9


def test_probe_values_degenerate_domain():
    probes = zoo.oracle_probe_values(zoo.builtin("ex_2_1"), 0.5, 0.0)
    assert probes.shape == (1,)
    assert probes[0] == pytest.approx(0.0)


@pytest.mark.parametrize("name", ["ex_2_1", "ex_2_2"])
def test_lagrangian_evaluator_numeric_route(name):
    spec = zoo.builtin(name)
    t, x = 0.5, 0.7
    numeric = zoo.lagrangian_evaluator(spec, use_oracle=False)
    probes = zoo.oracle_probe_values(spec, t, x, count=17)
    got = np.asarray(numeric(t, x, probes), dtype=float)
    want = np.asarray(spec.oracle_L(t, x, probes), dtype=float)
    assert np.max(np.abs(got - want)) <= 1e-2


def test_domain_evaluator_routes():
    spec = zoo.builtin("ex_2_2")
    oracle_dom = zoo.domain_evaluator(spec)(0.5, 0.7)
    assert (oracle_dom.lo, oracle_dom.hi) == (-1.0, 1.0)
    numeric_dom = zoo.domain_evaluator(spec, use_oracle=False)(0.5, 0.7)
    assert numeric_dom.lo == pytest.approx(-1.0, abs=1e-2)
    assert numeric_dom.hi == pytest.approx(1.0, abs=1e-2)


def test_modulus_scaled_halves_k_and_w_keeps_c():
    mod = zoo.builtin("ex_2_2").modulus
    half = mod.scaled(0.5)
    assert half.k_R(2.0, 0.5) == pytest.approx(0.5 * mod.k_R(2.0, 0.5))
    assert half.w_R(2.0, 0.5, 0.3) == pytest.approx(0.5 * mod.w_R(2.0, 0.5, 0.3))
    assert half.c(0.5) == mod.c(0.5)


@pytest.mark.parametrize("name", ["ex_2_1", "ex_2_2"])
def test_continuity_checks_pass(name):
    spec = zoo.builtin(name)
    assert zoo.check_HLC(spec, R=2.0, samples=SMALL_PLAN).verdict == "pass"
    assert zoo.check_LLC(spec, R=2.0, samples=SMALL_PLAN).verdict == "pass"
    assert zoo.check_MLC(spec, R=2.0, samples=SMALL_PLAN).verdict == "pass"


@pytest.mark.parametrize("name", ["ex_2_1", "ex_2_2"])
def test_continuity_checks_fail_on_halved_modulus(name):
    spec = zoo.builtin(name)
    half = spec.modulus.scaled(0.5)
    assert zoo.check_HLC(spec, R=2.0, samples=SMALL_PLAN, modulus=half).verdict == "fail"
    assert zoo.check_LLC(spec, R=2.0, samples=SMALL_PLAN, modulus=half).verdict == "fail"
    assert zoo.check_MLC(spec, R=2.0, samples=SMALL_PLAN, modulus=half).verdict == "fail"


@settings(max_examples=25, derandomize=True, deadline=None)
@given(st.integers(0, 10_000))
def test_oracle_probes_stay_inside_domain(seed):
    rng = np.random.default_rng(seed)
    spec = zoo.builtin("ex_2_2")
    t = float(rng.uniform(0.05, 0.95))
    x = float(rng.uniform(-2.0, 2.0))
    probes = zoo.oracle_probe_values(spec, t, x, count=9)
    dom = spec.oracle_dom(t, x)
    assert np.all(probes >= dom.lo - 1e-12)
    assert np.all(probes <= dom.hi + 1e-12)
    assert np.all(np.isfinite(spec.oracle_L(t, x, probes)))
