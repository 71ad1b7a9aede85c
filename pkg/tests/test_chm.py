import numpy as np
import pytest
from hypothesis import given, settings

from hyperlap import (
    ComputationError,
    Hypergraph,
    ScalarMap,
    ValidationError,
    assemble,
    chemical,
    chm_step,
    commutativity_check,
    coupling,
    ensemble_run,
    factorize,
    invariance_report,
    parse_hypergraph,
    read_hypergraph,
    scalar_apply,
)
from hyperlap.chm import EnsembleState, escape_box, initial_ensemble

from helpers import CORPUS, corpus, hypergraphs, seeds

K2 = Hypergraph.from_edges([("v1", "v2")])
TENT = ScalarMap("tent", 3.8)


def k2_op():
    return assemble(factorize(K2, "simple"))


def test_scalar_examples():
    assert abs(scalar_apply(TENT, 0.2) - 0.38) < 1e-15
    for mu in (0.5, 2.0, 4.0):
        assert scalar_apply(ScalarMap("tent", mu), 0.0) == 0.0
    assert scalar_apply(ScalarMap("logistic", 4.0), 0.5) == 1.0


def test_scalar_validation():
    with pytest.raises(ValidationError):
        scalar_apply(TENT, 1.5)
    with pytest.raises(ValidationError):
        ScalarMap("tent", 4.5)
    with pytest.raises(ValidationError):
        ScalarMap("tent", 0.0)
    with pytest.raises(ValidationError):
        ScalarMap("cubic", 1.0)


@pytest.mark.parametrize("kind", ["tent", "logistic"])
@given(seed=seeds)
@settings(max_examples=20)
def test_scalar_maps_keep_unit_interval(kind, seed):
    rng = np.random.default_rng(seed)
    m = ScalarMap(kind, float(rng.uniform(1e-6, 4)))
    y = m(rng.random(1000))
    assert y.min() >= 0 and y.max() <= 1


def test_out_of_domain_formula():
    # the algebraic expressions extend to all reals
    assert float(TENT(-1.0)) == pytest.approx(-1.9)
    assert float(TENT(2.0)) == pytest.approx(-1.9)
    assert float(ScalarMap("logistic", 2.0)(2.0)) == pytest.approx(-4.0)


def test_chm_step_examples():
    C = coupling(k2_op(), 0.3)
    assert np.allclose(C.C, [[0.7, 0.3], [0.3, 0.7]])
    s = chm_step(EnsembleState(np.array([[0.2, 0.8]])), C, ScalarMap("tent", 2.0))
    assert np.allclose(s.X, [[0.2, 0.2]], atol=1e-15)
    assert s.t == 1 and not s.domain_escaped


def test_eps_zero_decouples():
    X = np.random.default_rng(0).random((50, 4))
    C = coupling(assemble(factorize(read_hypergraph(CORPUS / "fig1.hg"), "two-step")), 0.0)
    s = chm_step(EnsembleState(X), C, TENT)
    assert np.array_equal(s.X, TENT(X))
    assert all(s.X[0, i] == scalar_apply(TENT, X[0, i]) for i in range(4))


def test_eps_one_swaps_on_k2():
    C = coupling(k2_op(), 1.0)
    X = np.array([[0.1, 0.3]])
    s = chm_step(EnsembleState(X), C, TENT)
    assert np.allclose(s.X, TENT(X)[:, ::-1], atol=1e-15)


def test_chm_step_rejects_non_finite():
    C = coupling(k2_op(), 0.3)
    with pytest.raises(ComputationError):
        with np.errstate(all="ignore"):
            chm_step(EnsembleState(np.array([[np.inf, 0.3]])), C, TENT)


@given(hg=hypergraphs(n_max=10), seed=seeds)
@settings(max_examples=40)
def test_rw_rows_of_c(hg, seed):
    F = factorize(hg, "two-step")
    op = coupling(F, 0.4)
    assert op.family == "random-walk"
    assert np.allclose(op.C.sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(np.diag(op.C), 0.6)
    P = F.transition.astype(float)
    off = ~np.eye(hg.n, dtype=bool)
    assert np.allclose(op.C[off], 0.4 * P[off])


def test_escape_box_examples():
    assert escape_box(1.5, 0.0, 1.0) == (-0.5, 1.5)
    assert escape_box(-0.5, 0.0, 1.0) == (-0.5, 1.5)
    assert escape_box(0.5, 0.0, 1.0) == (0.0, 1.0)
    C = coupling(k2_op(), 1.5)
    out = C.C @ np.array([0.0, 1.0])
    assert out[0] == pytest.approx(1.5)


def test_half_eps_stays_between_extremes():
    rep = invariance_report(k2_op(), TENT, 0.5, trials=500, seed=1)
    assert rep.expected == "contained" and rep.violations == 0 and rep.ok


@pytest.mark.parametrize("eps", [-0.5, 1.5])
def test_escape_witness(eps):
    rep = invariance_report(assemble(factorize(read_hypergraph(CORPUS / "fig1.hg"), "two-step")), TENT, eps, trials=500)
    assert rep.expected == "escape-box"
    assert rep.violations == 0
    assert rep.witness_exits and rep.ok
    lo, hi = rep.box
    assert lo <= rep.min_output and rep.max_output <= hi


def test_chemical_all_inputs_witness():
    hg = parse_hypergraph("hypergraph oriented\nedge e in:v1,v2")
    rep = invariance_report(chemical(hg), None, 0.5, trials=100)
    assert rep.bound == pytest.approx(-0.5)
    v = rep.witness_output[rep.witness_vertex]
    assert v <= rep.bound + 1e-12 and v < 0
    assert rep.witness_exits and rep.ok
    assert rep.family == "chemical"


@given(seed=seeds)
@settings(max_examples=40)
def test_chemical_witness_exits_when_possible(seed):
    rng = np.random.default_rng(seed)
    hg = corpus(1, seed, oriented=True)[0]
    eps = float(rng.uniform(0.05, 1.0))
    for kind in ("chemical", "chemical-delta"):
        op = chemical(hg, kind)
        rep = invariance_report(op, None, eps, trials=50, seed=seed)
        C = coupling(op, eps).C
        # oracle: [0,1]^N is invariant under x -> Cx iff C >= 0 entrywise with row sums <= 1
        can_escape = bool(np.any(C < -1e-15) or np.any(C.sum(axis=1) > 1 + 1e-12))
        assert rep.witness_exits == can_escape
        if not can_escape:
            assert rep.violations == 0


def test_invariance_grid_small():
    hgs = corpus(5, 77)
    for hg in hgs:
        for variant in ("simple", "two-step", "edge-size-biased"):
            L = assemble(factorize(hg, variant))
            for eps in np.linspace(0, 1, 11):
                for m in (ScalarMap("tent", 4.0), ScalarMap("logistic", 3.7)):
                    rep = invariance_report(L, m, float(eps), trials=100, seed=3)
                    assert rep.violations == 0 and rep.ok


def test_hand_commutativity_point():
    rep = commutativity_check(k2_op(), 3.8, 0.3, states=[[0.1, 0.2]])
    assert np.allclose(rep.lhs[0], [0.51262, 0.57038], atol=5e-6)
    assert np.allclose(rep.rhs[0], [0.51262, 0.57038], atol=5e-6)
    assert rep.max_discrepancy < 1e-12 and rep.ok


def test_commutativity_at_zero():
    rep = commutativity_check(k2_op(), 4.0, 0.7, states=np.zeros((1, 2)))
    assert rep.lhs.tolist() == [[0.0, 0.0]] and rep.rhs.tolist() == [[0.0, 0.0]]


@given(hg=hypergraphs(n_max=8), seed=seeds)
@settings(max_examples=30)
def test_commutativity_random(hg, seed):
    rng = np.random.default_rng(seed)
    mu, eps = float(rng.uniform(0.01, 4)), float(rng.uniform(0, 1))
    rep = commutativity_check(factorize(hg, "two-step"), mu, eps, samples=500, seed=seed)
    assert rep.ok
    assert rep.max_path_disagreement < 1e-12


def test_outside_quarter_box_is_diagnostic_only():
    rep = commutativity_check(k2_op(), 3.9, 0.3, samples=2000, seed=0, box=(0.25, 0.5))
    assert not rep.ok
    # a violating state exists once the first iterate crosses the tent peak
    assert rep.max_discrepancy > 1e-3


def test_commutativity_needs_unit_eps():
    with pytest.raises(ValidationError):
        commutativity_check(k2_op(), 3.0, 1.5)


def test_initial_ensemble_reproducible():
    a = initial_ensemble(3, 10_000, 4)
    assert a.shape == (10_000, 3) and a.min() >= 0 and a.max() < 1
    assert np.array_equal(a, initial_ensemble(3, 10_000, 4))


def test_single_trajectory_point_mass():
    res = ensemble_run(k2_op(), TENT, 0.0, M=1, T=5, bins=10, seed=2)
    x = initial_ensemble(2, 1, 2)[0]
    for t in range(6):
        assert res.counts[t].sum(axis=1).tolist() == [1, 1]
        assert np.allclose(res.realized[t, :, 0], x) and np.allclose(res.realized[t, :, 1], x)
        x = TENT(x)


def fig2():
    return read_hypergraph(CORPUS / "fig2.hg")


def test_fig2_rw_contained():
    res = ensemble_run(factorize(fig2(), "oriented-rw"), TENT, 0.3, M=10_000, T=30, seed=0)
    assert res.family == "random-walk"
    assert res.contained and not res.domain_escaped
    assert res.first_escape() is None
    assert (res.counts.sum(axis=2) == 10_000).all()
    assert np.all(res.ranges == [0.0, 1.0])


def test_fig2_chemical_escapes():
    res = ensemble_run(chemical(fig2()), TENT, 0.3, M=10_000, T=30, seed=0)
    assert not res.contained and res.domain_escaped
    t = res.first_escape()
    assert t is not None and t <= 30
    lo, hi = res.realized_range
    assert lo < 0 or hi > 1
    assert (res.counts.sum(axis=2) == 10_000).all()


def test_ensemble_validation():
    with pytest.raises(ValidationError):
        ensemble_run(k2_op(), TENT, 0.1, M=0)
