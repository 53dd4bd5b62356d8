"""Abstract syntax for state and path formulas, plus rendering.

State formulas: ``TrueF``, ``FalseF``, ``Atom``, ``Not``, ``And``, ``Or``,
``Prob``.  Path formulas: ``State`` (a state formula read at position 0),
``PathNot``, ``PathAnd``, ``PathOr``, ``NextObs``, ``Next``,
``BoundedUntil``, ``Until``.

Inside a path formula a maximal temporal-free subtree is kept as a single
``State`` node; the ``path_*`` constructors maintain that canonical form, and
it is what the parser produces.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Union

from .model import AtomicProp, Named

COMPARATORS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Atom:
    prop: AtomicProp


@dataclass(frozen=True)
class Not:
    arg: "StateFormula"


@dataclass(frozen=True)
class And:
    left: "StateFormula"
    right: "StateFormula"


@dataclass(frozen=True)
class Or:
    left: "StateFormula"
    right: "StateFormula"


@dataclass(frozen=True)
class Prob:
    op: str
    p: float
    body: "PathFormula"

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparison {self.op!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("probability bound must be in [0,1]")

    def holds(self, prob: float) -> bool:
        return COMPARATORS[self.op](prob, self.p)


StateFormula = Union[TrueF, FalseF, Atom, Not, And, Or, Prob]


@dataclass(frozen=True)
class State:
    formula: StateFormula


@dataclass(frozen=True)
class PathNot:
    arg: "PathFormula"


@dataclass(frozen=True)
class PathAnd:
    left: "PathFormula"
    right: "PathFormula"


@dataclass(frozen=True)
class PathOr:
    left: "PathFormula"
    right: "PathFormula"


@dataclass(frozen=True)
class NextObs:
    """Observation-constrained next.  ``obs=None`` stands for all observations."""

    obs: frozenset | None
    body: "PathFormula"

    def __post_init__(self):
        if self.obs is not None:
            obs = frozenset(int(o) for o in self.obs)
            if not obs:
                raise ValueError("observation set of X_{...} must be nonempty")
            object.__setattr__(self, "obs", obs)


@dataclass(frozen=True)
class Next:
    body: "PathFormula"


@dataclass(frozen=True)
class BoundedUntil:
    left: "PathFormula"
    bound: int
    right: "PathFormula"

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("step bound of U<= must be nonnegative")


@dataclass(frozen=True)
class Until:
    left: "PathFormula"
    right: "PathFormula"


PathFormula = Union[State, PathNot, PathAnd, PathOr, NextObs, Next, BoundedUntil, Until]

STATE_TYPES = (TrueF, FalseF, Atom, Not, And, Or, Prob)
TEMPORAL_TYPES = (NextObs, Next, BoundedUntil, Until)

TRUE = TrueF()
FALSE = FalseF()


def atom(name: str) -> Atom:
    return Atom(Named(name))


# -- canonical constructors -------------------------------------------------

def lift(f) -> PathFormula:
    """Coerce a state formula to a path formula."""
    return State(f) if isinstance(f, STATE_TYPES) else f


def path_not(f) -> PathFormula:
    f = lift(f)
    if isinstance(f, State):
        return State(Not(f.formula))
    return PathNot(f)


def path_and(left, right) -> PathFormula:
    left, right = lift(left), lift(right)
    if isinstance(left, State) and isinstance(right, State):
        return State(And(left.formula, right.formula))
    return PathAnd(left, right)


def path_or(left, right) -> PathFormula:
    left, right = lift(left), lift(right)
    if isinstance(left, State) and isinstance(right, State):
        return State(Or(left.formula, right.formula))
    return PathOr(left, right)


# -- traversal ----------------------------------------------------------------

def children(f) -> tuple:
    if isinstance(f, (Not, PathNot)):
        return (f.arg,)
    if isinstance(f, (And, Or, PathAnd, PathOr, Until, BoundedUntil)):
        return (f.left, f.right)
    if isinstance(f, Prob):
        return (f.body,)
    if isinstance(f, State):
        return (f.formula,)
    if isinstance(f, (NextObs, Next)):
        return (f.body,)
    return ()


def with_children(f, new: tuple):
    if isinstance(f, (Not, PathNot)):
        return type(f)(new[0])
    if isinstance(f, (And, Or, PathAnd, PathOr, Until)):
        return type(f)(new[0], new[1])
    if isinstance(f, BoundedUntil):
        return BoundedUntil(new[0], f.bound, new[1])
    if isinstance(f, Prob):
        return Prob(f.op, f.p, new[0])
    if isinstance(f, State):
        return State(new[0])
    if isinstance(f, NextObs):
        return NextObs(f.obs, new[0])
    if isinstance(f, Next):
        return Next(new[0])
    return f


def get_at(f, handle: tuple):
    for i in handle:
        f = children(f)[i]
    return f


def replace_at(f, handle: tuple, new):
    if not handle:
        return new
    kids = list(children(f))
    kids[handle[0]] = replace_at(kids[handle[0]], handle[1:], new)
    return with_children(f, tuple(kids))


def walk(f, handle=()):
    """Pre-order traversal yielding ``(handle, node)``."""
    yield handle, f
    for i, c in enumerate(children(f)):
        yield from walk(c, handle + (i,))


def atoms(f) -> set:
    return {node.prop for _, node in walk(f) if isinstance(node, Atom)}


def obs_sets(f) -> set:
    return {node.obs for _, node in walk(f) if isinstance(node, NextObs)}


def is_propositional(f) -> bool:
    """True when no temporal or probabilistic operator occurs in ``f``."""
    return not any(isinstance(node, TEMPORAL_TYPES + (Prob,)) for _, node in walk(f))


def count_temporal(f) -> int:
    return sum(isinstance(node, TEMPORAL_TYPES) for _, node in walk(f))


# -- rendering ----------------------------------------------------------------

def _fmt_prob(p: float) -> str:
    return repr(float(p))


def _render(f, top=False) -> str:
    if isinstance(f, TrueF):
        return "T"
    if isinstance(f, FalseF):
        return "F"
    if isinstance(f, Atom):
        if not isinstance(f.prop, Named):
            raise ValueError(f"internal atom {f.prop} has no surface syntax")
        return f.prop.name
    if isinstance(f, State):
        return _render(f.formula, top)
    if isinstance(f, (Not, PathNot)):
        return "!" + _render(f.arg)
    if isinstance(f, Prob):
        return f"P[{f.op}{_fmt_prob(f.p)}](" + _render(f.body, top=True) + ")"
    if isinstance(f, NextObs):
        head = "X" if f.obs is None else "X_{" + ",".join(map(str, sorted(f.obs))) + "}"
        return head + _render(f.body)
    if isinstance(f, Next):
        raise ValueError("observation-free next has no surface syntax")
    if isinstance(f, (And, PathAnd)):
        s = f"{_render(f.left)} & {_render(f.right)}"
    elif isinstance(f, (Or, PathOr)):
        s = f"{_render(f.left)} | {_render(f.right)}"
    elif isinstance(f, Until):
        s = f"{_render(f.left)} U {_render(f.right)}"
    elif isinstance(f, BoundedUntil):
        s = f"{_render(f.left)} U<={f.bound} {_render(f.right)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return s if top else f"({s})"


def render_formula(f) -> str:
    """Render a formula in the surface syntax accepted by the parser.

    Binary connectives are always parenthesised, except for the body
    directly inside ``P[..](...)``.
    """
    return _render(f)
