"""HMM to DTMC product construction and observation-free rewriting."""
from __future__ import annotations

import numpy as np

from . import formula as fm
from .model import Dtmc, Hmm, Named, ObsSet, Origin, SatMode


def build_product(h: Hmm, mode: SatMode, eval_state: int | None = None, labels=None) -> Dtmc:
    """Product chain over (state, observation) pairs in row-major order.

    ``labels`` overrides the HMM labels with sets of atomic propositions
    (the checker passes its working labels, which carry fresh atoms).
    """
    n, m = h.n, h.m
    if mode is SatMode.PER_STATE:
        if eval_state is None:
            raise ValueError("per-state mode needs the state under evaluation")
        if not 0 <= eval_state < n:
            raise IndexError(f"state {eval_state} out of range")
    if labels is None:
        labels = [frozenset(Named(a) for a in lab) for lab in h.labels]

    T = (h.A[:, None, :, None] * h.B[None, None, :, :]).repeat(m, axis=1).reshape(n * m, n * m)
    if mode is SatMode.WEIGHTED:
        init = (h.pi[:, None] * h.B).ravel()
    else:
        init = np.zeros((n, m))
        init[eval_state] = h.B[eval_state]
        init = init.ravel()
    origins = [Origin(s, o) for s in range(n) for o in range(m)]
    plabels = [labels[s] for s in range(n) for _ in range(m)]
    return Dtmc(origins=origins, T=T, labels=plabels, init=init, mode=mode)


def rewrite_obs_next(f, m: int | None = None):
    """Replace every ``X_Omega g`` by ``Omega & X g``.

    ``m`` is needed only to resolve a bare ``X`` (all observations).
    """
    if isinstance(f, fm.NextObs):
        obs = f.obs
        if obs is None:
            if m is None:
                raise ValueError("observation count needed to resolve X over all observations")
            obs = frozenset(range(m))
        return fm.PathAnd(fm.State(fm.Atom(ObsSet(obs))), fm.Next(rewrite_obs_next(f.body, m)))
    if isinstance(f, fm.Next):
        raise ValueError("formula already contains an observation-free next")
    if isinstance(f, fm.State):
        return f
    kids = fm.children(f)
    return fm.with_children(f, tuple(rewrite_obs_next(k, m) for k in kids))
