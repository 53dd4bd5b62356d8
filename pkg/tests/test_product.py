import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_hmm, random_path
from hmmcheck import formula as fm
from hmmcheck.checker import path_probabilities
from hmmcheck.model import Named, ObsSet, SatMode, validate_dtmc
from hmmcheck.oracle import oracle_chain_probability, oracle_probability
from hmmcheck.parser import parse_path_formula
from hmmcheck.product import build_product, rewrite_obs_next

S = fm.State
a, b, T = S(fm.atom("a")), S(fm.atom("b")), S(fm.TRUE)


def obs_atom(*obs):
    return S(fm.Atom(ObsSet(frozenset(obs))))


def test_f1_weighted_product(F1):
    d = build_product(F1, SatMode.WEIGHTED)
    assert d.size == 4
    # row-major (state, observation) order
    assert [(o.state, o.obs) for o in d.origins] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert d.T[0, 3] == 0.5
    assert d.init[0] == 0.5
    assert d.labels[0] == {Named("a")}


def test_f1_per_state_product(F1):
    d = build_product(F1, SatMode.PER_STATE, eval_state=0)
    np.testing.assert_array_equal(d.init, [1.0, 0.0, 0.0, 0.0])


def test_f2_product(F2):
    d = build_product(F2, SatMode.WEIGHTED)
    assert d.T[0, 0] == 1.0
    assert d.T[0, 1:].sum() == 0.0


def test_per_state_needs_state(F1):
    with pytest.raises(ValueError):
        build_product(F1, SatMode.PER_STATE)


def test_zero_probability_states_are_kept(F1):
    d = build_product(F1, SatMode.PER_STATE, eval_state=1)
    assert d.size == 4 and d.init[1] == 0.0 and d.init[3] == 1.0


def test_rewrite_examples():
    assert rewrite_obs_next(parse_path_formula("X_{1}a")) == fm.PathAnd(obs_atom(1), fm.Next(a))
    f = parse_path_formula("a U b")
    assert rewrite_obs_next(f) == f
    got = rewrite_obs_next(parse_path_formula("X_{3,4,6}(X_{3,4,11}T)"))
    assert got == fm.PathAnd(obs_atom(3, 4, 6), fm.Next(fm.PathAnd(obs_atom(3, 4, 11), fm.Next(T))))
    assert rewrite_obs_next(parse_path_formula("Xa"), m=2) == fm.PathAnd(obs_atom(0, 1), fm.Next(a))


def test_rewrite_rejects_internal_next():
    with pytest.raises(ValueError):
        rewrite_obs_next(fm.Next(a))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_rows_are_stochastic(seed):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng)
    for mode in SatMode:
        d = build_product(h, mode, eval_state=0 if mode is SatMode.PER_STATE else None)
        np.testing.assert_allclose(d.T.sum(axis=1), 1.0, atol=1e-9)
        assert validate_dtmc(d).ok


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_preserves_measure(seed):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng)
    f = random_path(rng, 3, h.m)
    g = rewrite_obs_next(f, h.m)
    for s in range(h.n):
        for mode in SatMode:
            on_h = oracle_probability(h, s, f, mode, exact=True)
            d = build_product(h, mode, eval_state=s if mode is SatMode.PER_STATE else None)
            on_d = oracle_chain_probability(d, g, state=s, exact=True)
            assert abs(on_h - on_d) <= 1e-9


def test_labels_stay_lazy(F1):
    f = parse_path_formula("X_{0}(X_{1}a | X_{0}b) & X_{1}T")
    g = rewrite_obs_next(f)
    sets = {n.prop for _, n in fm.walk(g) if isinstance(n, fm.Atom) and isinstance(n.prop, ObsSet)}
    assert len(sets) == 2
    d = build_product(F1, SatMode.WEIGHTED)
    assert not any(isinstance(x, ObsSet) for lab in d.labels for x in lab)
    assert d.holds(1, ObsSet(frozenset({1}))) and not d.holds(0, ObsSet(frozenset({1})))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_obs_set_next_is_sum_of_singletons(seed):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng, m=int(rng.integers(2, 4)))
    g = random_path(rng, 2, h.m)
    omega = frozenset(range(h.m)) if rng.random() < 0.3 else frozenset({0, h.m - 1})
    mode = SatMode.PER_STATE
    whole = path_probabilities(h, fm.NextObs(omega, g), mode)
    parts = sum(path_probabilities(h, fm.NextObs({o}, g), mode) for o in omega)
    np.testing.assert_allclose(whole, parts, atol=1e-9)
    for s in range(h.n):
        exact = sum(oracle_probability(h, s, fm.NextObs({o}, g), mode, exact=True) for o in omega)
        assert exact == oracle_probability(h, s, fm.NextObs(omega, g), mode, exact=True)
