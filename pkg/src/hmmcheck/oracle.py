"""Brute-force reference evaluator in exact rational arithmetic.

Two evaluation routes share the literal path semantics:

* ``method="enumerate"`` lists every finite path prefix of positive measure
  and decides the formula on each one;
* ``method="memo"`` (default) walks the same prefix tree but progresses the
  formula one position at a time and memoises on (residual formula, position,
  depth), so equal subtrees are summed once.

Unbounded until is truncated at the horizon; anything still undecided there
counts as failure, so for positive untils the result is a lower bound.
Nothing here shares code with the elimination pipeline.
"""
from __future__ import annotations

import math
from fractions import Fraction

from . import formula as fm
from .checker import SatResult, check_formula_against
from .model import Dtmc, Hmm, Named, SatMode

UNBOUNDED = math.inf


class HorizonError(ValueError):
    pass


def bound_horizon(f):
    """Positions of lookahead needed to decide ``f``; ``inf`` if any U occurs."""
    if isinstance(f, fm.STATE_TYPES) or isinstance(f, fm.State):
        return 0
    if isinstance(f, fm.PathNot):
        return bound_horizon(f.arg)
    if isinstance(f, (fm.PathAnd, fm.PathOr)):
        return max(bound_horizon(f.left), bound_horizon(f.right))
    if isinstance(f, (fm.NextObs, fm.Next)):
        return 1 + bound_horizon(f.body)
    if isinstance(f, fm.BoundedUntil):
        left, right = bound_horizon(f.left), bound_horizon(f.right)
        if f.bound == 0:
            return right
        return max(f.bound + right, f.bound - 1 + left)
    if isinstance(f, fm.Until):
        return UNBOUNDED
    raise TypeError(f"not a path formula: {f!r}")


def _frac(x) -> Fraction:
    return Fraction(float(x))


# -- structures ---------------------------------------------------------------------
# A structure exposes positions with a successor distribution; a position is
# an HMM (state, observation) pair or a DTMC state index.

class _HmmStructure:
    def __init__(self, h: Hmm, state_sat):
        self.h = h
        self.A = [[_frac(x) for x in row] for row in h.A]
        self.B = [[_frac(x) for x in row] for row in h.B]
        self.pi = [_frac(x) for x in h.pi]
        self.state_sat = state_sat
        self._succ = {}

    def start(self, s, mode):
        w = self.pi[s] if mode is SatMode.WEIGHTED else Fraction(1)
        return [((s, o), w * b) for o, b in enumerate(self.B[s]) if b > 0]

    def successors(self, pos):
        s = pos[0]
        if s not in self._succ:
            self._succ[s] = [
                ((t, o), a * b)
                for t, a in enumerate(self.A[s]) if a > 0
                for o, b in enumerate(self.B[t]) if b > 0
            ]
        return self._succ[s]

    def obs(self, pos):
        return pos[1]

    def holds(self, pos, phi):
        return self.state_sat(pos[0], phi)


class _ChainStructure:
    def __init__(self, d: Dtmc):
        self.d = d
        self.init = [_frac(x) for x in d.init]
        self._succ = [
            [(j, _frac(x)) for j, x in enumerate(row) if x > 0] for row in d.T
        ]

    def start(self, state):
        return [(i, w) for i, w in enumerate(self.init)
                if w > 0 and (state is None or self.d.origins[i].state == state)]

    def successors(self, pos):
        return self._succ[pos]

    def obs(self, pos):
        return self.d.origins[pos].obs

    def holds(self, pos, phi):
        return _prop_holds(lambda a: self.d.holds(pos, a), phi)


def _prop_holds(atom_holds, phi) -> bool:
    if isinstance(phi, fm.TrueF):
        return True
    if isinstance(phi, fm.FalseF):
        return False
    if isinstance(phi, fm.Atom):
        return atom_holds(phi.prop)
    if isinstance(phi, fm.Not):
        return not _prop_holds(atom_holds, phi.arg)
    if isinstance(phi, fm.And):
        return _prop_holds(atom_holds, phi.left) and _prop_holds(atom_holds, phi.right)
    if isinstance(phi, fm.Or):
        return _prop_holds(atom_holds, phi.left) or _prop_holds(atom_holds, phi.right)
    raise TypeError(f"cannot decide {phi!r} from labels alone")


# -- literal decision on a finite prefix --------------------------------------------

def _and3(a, b):
    if a is False or b is False:
        return False
    return None if a is None or b is None else True


def _or3(a, b):
    if a is True or b is True:
        return True
    return None if a is None or b is None else False


def _decide(st, f, path, i):
    """Three-valued decision of ``f`` on ``path[i:]``: True, False or None (undecided)."""
    if isinstance(f, fm.State):
        return st.holds(path[i], f.formula)
    if isinstance(f, fm.PathNot):
        v = _decide(st, f.arg, path, i)
        return None if v is None else not v
    if isinstance(f, fm.PathAnd):
        return _and3(_decide(st, f.left, path, i), _decide(st, f.right, path, i))
    if isinstance(f, fm.PathOr):
        return _or3(_decide(st, f.left, path, i), _decide(st, f.right, path, i))
    if isinstance(f, (fm.NextObs, fm.Next)):
        if isinstance(f, fm.NextObs) and f.obs is not None and st.obs(path[i]) not in f.obs:
            return False
        if i + 1 >= len(path):
            return None
        return _decide(st, f.body, path, i + 1)
    if isinstance(f, (fm.Until, fm.BoundedUntil)):
        # exists j (<= bound) with right at j and left at every earlier position
        last = len(path) - 1 - i
        bounded = isinstance(f, fm.BoundedUntil)
        if bounded:
            last = min(last, f.bound)
        result, prefix = False, True
        for j in range(last + 1):
            result = _or3(result, _and3(prefix, _decide(st, f.right, path, i + j)))
            prefix = _and3(prefix, _decide(st, f.left, path, i + j))
            if prefix is False or result is True:
                return result
        if bounded and last == f.bound:
            return result
        # the witness may lie beyond the prefix
        return _or3(result, None)
    raise TypeError(f"not a path formula: {f!r}")


def _enumerate(st, starts, f, horizon):
    total = Fraction(0)
    stack = [((pos,), w) for pos, w in starts]
    while stack:
        path, w = stack.pop()
        if len(path) == horizon + 1:
            if _decide(st, f, path, 0) is True:
                total += w
            continue
        for nxt, p in st.successors(path[-1]):
            stack.append((path + (nxt,), w * p))
    return total


# -- progression with memoisation ----------------------------------------------------

_TRUE = fm.State(fm.TRUE)
_FALSE = fm.State(fm.FALSE)


def _not(a):
    if a == _TRUE:
        return _FALSE
    if a == _FALSE:
        return _TRUE
    if isinstance(a, fm.PathNot):
        return a.arg
    return fm.PathNot(a)


def _and(a, b):
    if a == _FALSE or b == _FALSE:
        return _FALSE
    if a == _TRUE:
        return b
    if b == _TRUE or a == b:
        return a
    return fm.PathAnd(a, b)


def _or(a, b):
    if a == _TRUE or b == _TRUE:
        return _TRUE
    if a == _FALSE:
        return b
    if b == _FALSE or a == b:
        return a
    return fm.PathOr(a, b)


def _progress(st, f, pos):
    """Residual obligation on the suffix from the next position."""
    if isinstance(f, fm.State):
        return _TRUE if st.holds(pos, f.formula) else _FALSE
    if isinstance(f, fm.PathNot):
        return _not(_progress(st, f.arg, pos))
    if isinstance(f, fm.PathAnd):
        a = _progress(st, f.left, pos)
        return _FALSE if a == _FALSE else _and(a, _progress(st, f.right, pos))
    if isinstance(f, fm.PathOr):
        a = _progress(st, f.left, pos)
        return _TRUE if a == _TRUE else _or(a, _progress(st, f.right, pos))
    if isinstance(f, fm.NextObs):
        if f.obs is not None and st.obs(pos) not in f.obs:
            return _FALSE
        return f.body
    if isinstance(f, fm.Next):
        return f.body
    if isinstance(f, fm.BoundedUntil):
        now = _progress(st, f.right, pos)
        if f.bound == 0 or now == _TRUE:
            return now
        later = fm.BoundedUntil(f.left, f.bound - 1, f.right)
        return _or(now, _and(_progress(st, f.left, pos), later))
    if isinstance(f, fm.Until):
        now = _progress(st, f.right, pos)
        if now == _TRUE:
            return now
        return _or(now, _and(_progress(st, f.left, pos), f))
    raise TypeError(f"not a path formula: {f!r}")


def _memo_eval(st, starts, f, horizon):
    progressed = {}

    def progress(g, pos):
        key = (g, pos)
        if key not in progressed:
            progressed[key] = _progress(st, g, pos)
        return progressed[key]

    # forward sweep: (obligation, position) pairs live at each depth
    levels = [{(f, pos) for pos, _ in starts}]
    for depth in range(horizon):
        nxt = set()
        for g, pos in levels[-1]:
            r = progress(g, pos)
            if r != _TRUE and r != _FALSE:
                nxt.update((r, q) for q, _ in st.successors(pos))
        levels.append(nxt)

    # backward sweep
    below = {}
    for depth in range(len(levels) - 1, -1, -1):
        here = {}
        for g, pos in levels[depth]:
            r = progress(g, pos)
            if r == _TRUE:
                here[(g, pos)] = Fraction(1)
            elif r == _FALSE or depth == horizon:
                here[(g, pos)] = Fraction(0)
            else:
                here[(g, pos)] = sum((p * below[(r, q)] for q, p in st.successors(pos)), Fraction(0))
        below = here
    return sum((w * below[(f, pos)] for pos, w in starts), Fraction(0))


def _resolve_horizon(f, horizon):
    h = bound_horizon(f)
    if h == UNBOUNDED:
        if horizon is None:
            raise HorizonError("formula contains an unbounded until; supply a horizon")
        return int(horizon)
    return int(h)


def _evaluate(st, starts, f, horizon, method):
    if method == "memo":
        return _memo_eval(st, starts, f, horizon)
    if method == "enumerate":
        return _enumerate(st, starts, f, horizon)
    raise ValueError(f"unknown method {method!r}")


# -- public API -------------------------------------------------------------------

class _HmmOracle:
    def __init__(self, h: Hmm, mode: SatMode, horizon, method):
        self.h, self.mode, self.horizon, self.method = h, mode, horizon, method
        self.st = _HmmStructure(h, self.state_sat)
        self._prob_cache = {}

    def probabilities(self, body):
        if body not in self._prob_cache:
            H = _resolve_horizon(body, self.horizon)
            self._prob_cache[body] = [
                _evaluate(self.st, self.st.start(s, self.mode), body, H, self.method)
                for s in range(self.h.n)
            ]
        return self._prob_cache[body]

    def state_sat(self, s, phi) -> bool:
        if isinstance(phi, fm.Prob):
            return _compare(self.probabilities(phi.body)[s], phi)
        if isinstance(phi, fm.Atom) and isinstance(phi.prop, Named):
            return phi.prop.name in self.h.labels[s]
        if isinstance(phi, (fm.TrueF, fm.FalseF, fm.Atom)):
            return _prop_holds(lambda a: False, phi)
        if isinstance(phi, fm.Not):
            return not self.state_sat(s, phi.arg)
        if isinstance(phi, fm.And):
            return self.state_sat(s, phi.left) and self.state_sat(s, phi.right)
        if isinstance(phi, fm.Or):
            return self.state_sat(s, phi.left) or self.state_sat(s, phi.right)
        raise TypeError(f"not a state formula: {phi!r}")


def _compare(prob: Fraction, node: fm.Prob) -> bool:
    return fm.COMPARATORS[node.op](prob, Fraction(node.p))


def oracle_probability(h: Hmm, s: int, f, mode: SatMode = SatMode.PER_STATE,
                       horizon: int | None = None, method: str = "memo", exact: bool = False):
    """Measure of the paths from ``s`` satisfying the path formula ``f``."""
    f = fm.lift(f)
    o = _HmmOracle(h, mode, horizon, method)
    H = _resolve_horizon(f, horizon)
    val = _evaluate(o.st, o.st.start(s, mode), f, H, method)
    return val if exact else float(val)


def oracle_check_state_formula(h: Hmm, f, mode: SatMode = SatMode.PER_STATE,
                               horizon: int | None = None, method: str = "memo") -> frozenset:
    return oracle_result(h, f, mode, horizon, method).states


def oracle_result(h: Hmm, f, mode: SatMode = SatMode.PER_STATE,
                  horizon: int | None = None, method: str = "memo", exact: bool = False) -> SatResult:
    """Satisfying states, plus the probability vector when ``f`` is a Prob node."""
    check_formula_against(h, f)
    o = _HmmOracle(h, mode, horizon, method)
    states = frozenset(s for s in range(h.n) if o.state_sat(s, f))
    probs = None
    if isinstance(f, fm.Prob):
        vals = o.probabilities(f.body)
        probs = list(vals) if exact else [float(v) for v in vals]
    return SatResult(states, probs)


def oracle_chain_probability(d: Dtmc, f, horizon: int | None = None, state: int | None = None,
                             method: str = "memo", exact: bool = False):
    """Measure, under ``d.init``, of paths satisfying ``f`` (atoms read from chain labels)."""
    f = fm.lift(f)
    st = _ChainStructure(d)
    H = _resolve_horizon(f, horizon)
    val = _evaluate(st, st.start(state), f, H, method)
    return val if exact else float(val)


def enumerate_paths(h: Hmm, s: int, length: int):
    """All positive-measure paths of ``length`` pairs from ``s`` (for tests and debugging)."""
    st = _HmmStructure(h, None)
    frontier = [((pos,), w) for pos, w in st.start(s, SatMode.PER_STATE)]
    for _ in range(length - 1):
        frontier = [(p + (nxt,), w * q) for p, w in frontier for nxt, q in st.successors(p[-1])]
    return frontier
