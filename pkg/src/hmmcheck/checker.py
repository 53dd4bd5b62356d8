"""Top-level model checking: label states bottom-up, one Prob node at a time."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import formula as fm
from .eliminate import aggregate, eliminate_all
from .model import Fresh, Hmm, Named, SatMode, validate_hmm, ModelError
from .product import build_product, rewrite_obs_next


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class SatResult:
    states: frozenset
    probs: np.ndarray | None = None

    def sorted_states(self) -> list:
        return sorted(self.states)


def find_innermost(f):
    """Handle and node of a deepest Prob subformula, leftmost on ties.

    Returns None when ``f`` contains no Prob node.
    """
    best = None
    for handle, node in fm.walk(f):
        if isinstance(node, fm.Prob) and (best is None or len(handle) > len(best[0])):
            best = (handle, node)
    return best


def substitute_and_label(labels, f, handle, satisfying, serial: int):
    """Tag ``satisfying`` states with ``Fresh(serial)`` and put that atom at ``handle``."""
    fresh = Fresh(serial)
    new_labels = tuple(lab | {fresh} if s in satisfying else lab for s, lab in enumerate(labels))
    return new_labels, fm.replace_at(f, handle, fm.Atom(fresh))


def eval_propositional(labels, f) -> frozenset:
    """States whose labels satisfy a Prob-free state formula."""
    return frozenset(s for s, lab in enumerate(labels) if _holds(lab, f))


def _holds(lab, f) -> bool:
    if isinstance(f, fm.TrueF):
        return True
    if isinstance(f, fm.FalseF):
        return False
    if isinstance(f, fm.Atom):
        return f.prop in lab
    if isinstance(f, fm.Not):
        return not _holds(lab, f.arg)
    if isinstance(f, fm.And):
        return _holds(lab, f.left) and _holds(lab, f.right)
    if isinstance(f, fm.Or):
        return _holds(lab, f.left) or _holds(lab, f.right)
    raise TypeError(f"not propositional: {f!r}")


def check_formula_against(h: Hmm, f):
    """Raise FormulaError for atoms or observations the model does not know."""
    for a in fm.atoms(f):
        if isinstance(a, Named) and a.name not in h.ap:
            raise FormulaError(f"unknown atomic proposition {a.name!r}")
    for obs in fm.obs_sets(f):
        if obs is not None:
            bad = sorted(o for o in obs if o >= h.m)
            if bad:
                raise FormulaError(f"observation index {bad[0]} out of range (model has {h.m} observations)")


def path_probabilities(h: Hmm, body, mode: SatMode, labels=None, trace=None) -> np.ndarray:
    """Per-state probability of a Prob-free path formula.

    In per-state mode entry ``s`` is Pr_s; in weighted mode it is pi_s * Pr_s.
    """
    psi = rewrite_obs_next(body, h.m)
    if mode is SatMode.WEIGHTED:
        d = build_product(h, mode, labels=labels)
        dk, psik, _ = eliminate_all(d, psi, trace=trace)
        return np.array([aggregate(dk, psik, s) for s in range(h.n)])
    out = np.empty(h.n)
    for s in range(h.n):
        d = build_product(h, mode, eval_state=s, labels=labels)
        dk, psik, _ = eliminate_all(d, psi, trace=trace)
        out[s] = aggregate(dk, psik, s)
    return out


def model_check(h: Hmm, f, mode: SatMode = SatMode.PER_STATE, trace=None) -> SatResult:
    """States of ``h`` satisfying the state formula ``f``."""
    report = validate_hmm(h)
    if not report.ok:
        raise ModelError(report)
    check_formula_against(h, f)

    labels = tuple(frozenset(Named(a) for a in lab) for lab in h.labels)
    serials = itertools.count()
    outer_probs = None
    while True:
        found = find_innermost(f)
        if found is None:
            break
        handle, node = found
        probs = path_probabilities(h, node.body, mode, labels, trace)
        satisfying = {s for s in range(h.n) if node.holds(probs[s])}
        if handle == ():
            outer_probs = probs
        labels, f = substitute_and_label(labels, f, handle, satisfying, next(serials))
    return SatResult(eval_propositional(labels, f), outer_probs)
