from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_hmm, random_path
from hmmcheck import formula as fm
from hmmcheck.checker import model_check
from hmmcheck.model import Hmm, SatMode, cylinder_probability
from hmmcheck.oracle import (
    UNBOUNDED, HorizonError, bound_horizon, enumerate_paths, oracle_check_state_formula,
    oracle_probability, oracle_result,
)
from hmmcheck.parser import parse_path_formula, parse_state_formula

PS, W = SatMode.PER_STATE, SatMode.WEIGHTED


@pytest.mark.parametrize("text, expected", [
    ("X_{0}(X_{1}T)", 2),
    ("a U b", UNBOUNDED),
    ("a U<=3 (X_{1}b)", 4),
    ("a", 0),
    ("a U<=0 X_{0}X_{0}b", 2),
    ("(X_{0}X_{0}a) U<=2 b", 3),
])
def test_bound_horizon(text, expected):
    assert bound_horizon(parse_path_formula(text)) == expected


def test_f1_examples(F1):
    assert oracle_probability(F1, 0, parse_path_formula("X_{0}b"), PS, exact=True) == Fraction(1, 2)
    assert oracle_probability(F1, 1, parse_path_formula("X_{0}b"), PS, exact=True) == 0
    assert oracle_probability(F1, 0, fm.State(fm.TRUE), PS) == 1.0
    p = oracle_probability(F1, 0, parse_path_formula("a U b"), PS, horizon=60, exact=True)
    assert p == 1 - Fraction(1, 2**60)


def test_until_requires_horizon(F1):
    with pytest.raises(HorizonError):
        oracle_probability(F1, 0, parse_path_formula("a U b"), PS)


def test_state_formula_examples(F1):
    assert oracle_check_state_formula(F1, parse_state_formula("P[>=0.4](X_{0}b)")) == {0}
    assert oracle_check_state_formula(F1, parse_state_formula("T")) == {0, 1}


def test_alternating_emission_shape(F1):
    # Each step emits the state's own observation and moves to either state w.p. 1/2,
    # so the alternating pattern holds w.p. 1/2^3 from s0 and 0 from s1.
    f = parse_state_formula("P[>0.88](X_{0}(X_{1}(X_{0}(X_{1}T))))")
    r = oracle_result(F1, f, PS, exact=True)
    assert r.probs == [Fraction(1, 8), 0]
    assert r.states == frozenset()


def test_enumerate_paths_weights(F1):
    paths = enumerate_paths(F1, 0, 3)
    assert len(paths) == 4
    assert sum(w for _, w in paths) == 1
    for path, w in paths:
        assert cylinder_probability(F1, PS, [(s, o) for s, o in path]) == pytest.approx(float(w))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([PS, W]))
def test_complement_sums_to_total(seed, mode):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng)
    f = random_path(rng, 3, h.m)
    for s in range(h.n):
        total = Fraction(1) if mode is PS else Fraction(float(h.pi[s]))
        both = (oracle_probability(h, s, f, mode, exact=True)
                + oracle_probability(h, s, fm.path_not(f), mode, exact=True))
        assert both == total


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_memo_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng, n=int(rng.integers(1, 4)), m=int(rng.integers(1, 3)))
    f = random_path(rng, 3, h.m, max_bound=2)
    for s in range(h.n):
        for mode in (PS, W):
            assert oracle_probability(h, s, f, mode, method="memo", exact=True) == \
                oracle_probability(h, s, f, mode, method="enumerate", exact=True)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_memo_matches_enumeration_on_until(seed):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng, n=int(rng.integers(1, 3)), m=int(rng.integers(1, 3)))
    f = random_path(rng, 2, h.m, until=True, max_bound=2)
    for s in range(h.n):
        assert oracle_probability(h, s, f, PS, horizon=5, method="memo", exact=True) == \
            oracle_probability(h, s, f, PS, horizon=5, method="enumerate", exact=True)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_until_truncation_is_monotone(seed):
    rng = np.random.default_rng(seed)
    h = random_hmm(rng)
    g1 = fm.State(fm.atom(str(rng.choice(["a", "b", "c"]))))
    g2 = fm.State(fm.atom(str(rng.choice(["a", "b", "c"]))))
    f = fm.Until(g1, g2)
    for s in range(h.n):
        values = [oracle_probability(h, s, f, PS, horizon=k, exact=True) for k in range(0, 12)]
        assert all(x <= y for x, y in zip(values, values[1:]))


def test_truncation_gap_at_minimum_escape():
    # a state that continues w.p. 0.9 leaves an undecided tail of 0.9^60 ~ 1.8e-3
    # at horizon 60, far above 1e-6: the until comparisons need faster escape
    h = Hmm(A=[[0.9, 0.1], [0.0, 1.0]], B=[[1.0], [1.0]], labels=[{"a"}, {"b"}], pi=[1.0, 0.0])
    f = fm.Prob(">=", 0.0, parse_path_formula("a U b"))
    exact = model_check(h, f).probs[0]
    truncated = oracle_probability(h, 0, f.body, PS, horizon=60)
    assert exact == pytest.approx(1.0)
    assert exact - truncated == pytest.approx(0.9**60, rel=1e-6)
    assert exact - truncated > 1e-6
