import numpy as np
import pytest

from hamrep import compactness, zoo
from hamrep.builder import ControlSet, RepresentationTriple
from hamrep.compactness import (
    VERDICT_BOUNDED,
    VERDICT_VIOLATED,
    convexify,
    detect_blc_failure,
    extract_lambda,
    induced_H,
    lemma41_check,
    simplex_weights,
)
from hamrep.errors import NoncompactControl
from hamrep.sampling import SamplePlan

PLAN = SamplePlan(seed=0)


def test_simplex_weights_partition():
    w = simplex_weights(8)
    assert w.shape == (9, 2)
    assert np.allclose(w.sum(axis=1), 1.0)
    assert np.all(w >= 0.0)
    assert np.allclose(w[0], [0.0, 1.0]) and np.allclose(w[-1], [1.0, 0.0])


def test_convexify_diagonal_reproduces_base():
    base = zoo.hat_rep_ex_2_1(n_side=9)
    ct = convexify(base)
    a = np.array([0.5, -0.75])
    packed = np.concatenate([a, a, [1.0, 0.0]])
    assert ct.f_eval(0.3, 0.4, packed) == pytest.approx(base.f_eval(0.3, 0.4, a))
    assert ct.l_eval(0.3, 0.4, packed) == pytest.approx(base.l_eval(0.3, 0.4, a))


def test_convexify_mixes_atoms():
    base = zoo.circle_rep_ex_2_2()
    ct = convexify(base)
    top = np.array([0.0, 1.0])
    right = np.array([1.0, 0.0])
    packed = np.concatenate([top, right, [0.5, 0.5]])
    x = 0.4
    assert ct.f_eval(0.2, x, packed) == pytest.approx(0.5)
    assert ct.l_eval(0.2, x, packed) == pytest.approx(0.5 + abs(x))


def test_convexify_rejects_full_space(ex22_noncompact_fast):
    with pytest.raises(NoncompactControl):
        convexify(ex22_noncompact_fast)


def test_induced_H_circle_matches_source():
    triple = zoo.circle_rep_ex_2_2()
    spec = triple.source
    ps = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
    for t, x in ((0.25, -0.8), (0.75, 0.0), (0.5, 1.0)):
        got = induced_H(triple, t, x, ps)
        want = np.asarray(spec.eval(t, x, ps), dtype=float)
        assert np.max(np.abs(got - want)) <= 1e-2
        # inner parametrization: the induced sup never exceeds H
        assert np.max(got - want) <= 1e-12


def test_induced_H_hat_exact_on_grid():
    triple = zoo.hat_rep_ex_2_1()
    spec = triple.source
    ps = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
    for x in (-1.0, -0.5, 0.0, 0.5, 1.0):
        got = induced_H(triple, 0.5, x, ps)
        want = np.asarray(spec.eval(0.5, x, ps), dtype=float)
        assert np.max(np.abs(got - want)) <= 1e-12


@pytest.mark.parametrize("name", ["hat_rep_ex_2_1", "circle_rep_ex_2_2", "family_p_abs"])
def test_lemma41_passes_listed_triples(name):
    triple = getattr(zoo, name)()
    report = lemma41_check(triple, plan=PLAN)
    assert report.check == "lemma41_epigraph_bound"
    assert report.verdict == "pass"


def test_lemma41_fails_below_epigraph():
    # claims l = -0.3 while L(f(a)) = 0 on the indicator Lagrangian
    control = ControlSet("interval", 1, lo=-1.0, hi=1.0)
    bad = RepresentationTriple(
        control=control,
        e_eval=lambda t, x, a: np.array([float(np.atleast_1d(a)[0]), -0.3]),
        f_eval=lambda t, x, a: float(np.atleast_1d(a)[0]),
        l_eval=lambda t, x, a: -0.3,
        provenance="user",
        source=zoo.builtin("abs_p"),
        caps="deliberately broken",
    )
    report = lemma41_check(bad, plan=PLAN)
    assert report.verdict == "fail"
    assert report.worst_margin == pytest.approx(0.3, abs=1e-9)


def test_lemma41_rejects_full_space(ex22_noncompact_fast):
    with pytest.raises(NoncompactControl):
        lemma41_check(ex22_noncompact_fast, plan=PLAN)


def test_extract_lambda_hat_certifies_constant_one():
    lam = extract_lambda(convexify(zoo.hat_rep_ex_2_1()), plan=PLAN)
    assert lam.certification is not None
    assert lam.certification.verdict == "pass"
    for t, x in ((0.2, -1.0), (0.5, 0.0), (0.8, 1.0)):
        assert lam.eval(t, x) == pytest.approx(1.0, abs=2e-2)


def test_extract_lambda_circle_certifies_one_plus_abs_x():
    lam = extract_lambda(convexify(zoo.circle_rep_ex_2_2()), plan=PLAN)
    assert lam.certification is not None
    assert lam.certification.verdict == "pass"
    for t, x in ((0.2, -1.0), (0.5, 0.0), (0.8, 1.0)):
        assert lam.eval(t, x) == pytest.approx(1.0 + abs(x), abs=2e-2)


@pytest.mark.parametrize(
    "name, want",
    [
        ("ex_2_2", VERDICT_BOUNDED),
        ("ex_2_3", VERDICT_VIOLATED),
        ("ex_2_4", VERDICT_VIOLATED),
    ],
)
def test_detect_blc_failure_verdicts(name, want):
    report = detect_blc_failure(zoo.builtin(name), plan=PLAN)
    assert report.check == "blc_failure_probe"
    assert report.verdict == want


def test_detect_blc_failure_indicator_lagrangian():
    report = detect_blc_failure(zoo.builtin("abs_p"), plan=PLAN)
    assert report.verdict == VERDICT_BOUNDED
    assert report.worst_margin == pytest.approx(0.0, abs=1e-12)
    assert "candidate_lambda" in report.witnesses[-1]
