"""Random instance generators shared by the property and acceptance tests."""
from pathlib import Path

import numpy as np

from hmmcheck import formula as fm
from hmmcheck.model import Dtmc, Hmm, Named, Origin, SatMode

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
ATOMS = ("a", "b", "c")


def f1():
    return Hmm(A=[[0.5, 0.5], [0.5, 0.5]], B=[[1, 0], [0, 1]], labels=[{"a"}, {"b"}], pi=[0.5, 0.5])


def f2():
    return Hmm(A=[[1, 0], [0, 1]], B=[[1, 0], [0, 1]], labels=[{"a"}, {"b"}], pi=[1.0, 0.0])


def dyadic_row(rng, k, denom=16, min_support=1):
    """Random stochastic row with entries that are multiples of 1/denom."""
    while True:
        counts = rng.multinomial(denom, rng.dirichlet(np.ones(k)))
        if np.count_nonzero(counts) >= min_support:
            return counts / denom


def random_hmm(rng, n=None, m=None, atoms=ATOMS, denom=16):
    n = n or int(rng.integers(1, 5))
    m = m or int(rng.integers(1, 4))
    A = np.array([dyadic_row(rng, n, denom) for _ in range(n)])
    B = np.array([dyadic_row(rng, m, denom) for _ in range(n)])
    pi = dyadic_row(rng, n, denom)
    labels = [{a for a in atoms if rng.random() < 0.5} for _ in range(n)]
    return Hmm(A=A, B=B, labels=labels, pi=pi, ap=frozenset(atoms))


def random_prop(rng, depth=1, atoms=ATOMS):
    """Random propositional state formula."""
    if depth <= 0 or rng.random() < 0.4:
        r = rng.random()
        if r < 0.08:
            return fm.TRUE
        if r < 0.12:
            return fm.FALSE
        return fm.atom(str(rng.choice(atoms)))
    kind = rng.integers(3)
    if kind == 0:
        return fm.Not(random_prop(rng, depth - 1, atoms))
    cls = fm.And if kind == 1 else fm.Or
    return cls(random_prop(rng, depth - 1, atoms), random_prop(rng, depth - 1, atoms))


def random_obs_set(rng, m):
    if rng.random() < 0.15:
        return None
    k = int(rng.integers(1, m + 1))
    return frozenset(int(x) for x in rng.choice(m, size=k, replace=False))


def random_path(rng, depth, m, atoms=ATOMS, until=False, max_bound=4, leaf=None):
    """Random canonical path formula with operator nesting at most ``depth``.

    ``leaf`` optionally supplies state-formula leaves (e.g. nested Prob).
    """
    if depth <= 0 or rng.random() < 0.2:
        if leaf is not None and rng.random() < 0.3:
            return fm.State(leaf())
        return fm.State(random_prop(rng, 1, atoms))
    ops = ["not", "and", "or", "next", "next", "bu", "bu"] + (["u", "u"] if until else [])
    op = ops[int(rng.integers(len(ops)))]
    sub = lambda: random_path(rng, depth - 1, m, atoms, until, max_bound, leaf)  # noqa: E731
    if op == "not":
        return fm.path_not(sub())
    if op == "and":
        return fm.path_and(sub(), sub())
    if op == "or":
        return fm.path_or(sub(), sub())
    if op == "next":
        return fm.NextObs(random_obs_set(rng, m), sub())
    if op == "bu":
        return fm.BoundedUntil(sub(), int(rng.integers(0, max_bound + 1)), sub())
    return fm.Until(sub(), sub())


def pick_bound(rng, probs, margin=1e-6):
    """Comparison and threshold at least ``margin`` away from every probability."""
    op = str(rng.choice(["<", "<=", ">", ">="]))
    probs = [float(p) for p in probs]
    for _ in range(100):
        p = round(float(rng.uniform(0, 1)), 3)
        if all(abs(p - x) >= margin for x in probs):
            return op, p
    raise RuntimeError("no threshold clear of ties")


def random_chain(rng, k=None, atoms=("a", "b"), denom=16, m=2):
    """Random weighted DTMC whose states carry random labels and observations."""
    k = k or int(rng.integers(2, 7))
    T = np.array([dyadic_row(rng, k, denom) for _ in range(k)])
    init = dyadic_row(rng, k, denom)
    labels = [frozenset(Named(a) for a in atoms if rng.random() < 0.5) for _ in range(k)]
    origins = [Origin(i, int(rng.integers(m))) for i in range(k)]
    return Dtmc(origins=origins, T=T, labels=labels, init=init, mode=SatMode.WEIGHTED)


def force_escape(T, cont, escape=0.25):
    """Mix rows of ``cont`` states so each sends at least ``escape`` mass outside ``cont``.

    States that cannot escape (all states continue) are left alone.
    """
    T = np.array(T, dtype=float)
    out = np.flatnonzero(~cont)
    if out.size == 0:
        return T
    target = np.zeros(T.shape[0])
    target[out] = 1.0 / out.size
    for u in np.flatnonzero(cont):
        if T[u, out].sum() < escape:
            T[u] = (1 - escape) * T[u] + escape * target
    return T



def random_syntax_formula(rng, depth=3):
    """Random state formula for parser round trips (bounds are arbitrary)."""
    def prob():
        body = random_path(rng, int(rng.integers(0, 3)), 4, until=True, leaf=lambda: random_prop(rng))
        op, p = pick_bound(rng, [])
        return fm.Prob(op, p, body)

    if depth <= 0 or rng.random() < 0.3:
        return prob() if rng.random() < 0.6 else random_prop(rng, 1)
    kind = int(rng.integers(3))
    if kind == 0:
        return fm.Not(random_syntax_formula(rng, depth - 1))
    cls = fm.And if kind == 1 else fm.Or
    return cls(random_syntax_formula(rng, depth - 1), random_syntax_formula(rng, depth - 1))

# the three formulas quoted from the handover case study, as typed at the prompt
FIG2 = "P[>0.88] (X_{3,4,6}(X_{3,4,6}(X_{3,4,11}(X_{3,4,11}T))))"
LIVENESS = "P[>=0.9](rh & (rh U (ug & ug U rnh)))"
SAFETY = "P[<0.05](rh & X(rnh | rpu))"
