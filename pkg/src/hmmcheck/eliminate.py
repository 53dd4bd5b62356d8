"""Temporal-operator elimination on labelled DTMCs.

Each elimination takes an innermost ``X g`` or ``g1 U g2`` (with
propositional arguments), computes the per-state probability ``q`` of that
subformula, and splits every state ``u`` into a copy where the subformula
holds (labelled with a fresh Xi atom) and one where it fails.  Transitions
are conditioned on the copy, so the path measure of the original chain is
preserved and the Xi atom marks exactly the paths satisfying the subformula.
Bounded until is unrolled into nested nexts first.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import formula as fm
from . import kernels
from .linalg import solve_linear_system
from .model import Dtmc, Xi

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    yes: np.ndarray
    no: np.ndarray
    maybe: np.ndarray

    def sizes(self):
        return int(self.yes.sum()), int(self.no.sum()), int(self.maybe.sum())


@dataclass(frozen=True)
class QVector:
    q: np.ndarray

    @property
    def qbar(self) -> np.ndarray:
        return 1.0 - self.q


def sat_mask(d: Dtmc, g) -> np.ndarray:
    """Boolean vector of chain states satisfying a propositional formula."""
    if isinstance(g, fm.State):
        return sat_mask(d, g.formula)
    if isinstance(g, fm.TrueF):
        return np.ones(d.size, dtype=bool)
    if isinstance(g, fm.FalseF):
        return np.zeros(d.size, dtype=bool)
    if isinstance(g, fm.Atom):
        return d.atom_mask(g.prop)
    if isinstance(g, (fm.Not, fm.PathNot)):
        return ~sat_mask(d, g.arg)
    if isinstance(g, (fm.And, fm.PathAnd)):
        return sat_mask(d, g.left) & sat_mask(d, g.right)
    if isinstance(g, (fm.Or, fm.PathOr)):
        return sat_mask(d, g.left) | sat_mask(d, g.right)
    raise TypeError(f"not a propositional formula: {g!r}")


# -- next ------------------------------------------------------------------------

def classify_next_states(d: Dtmc, g) -> tuple[Partition, QVector]:
    sat = sat_mask(d, g)
    edge = d.T > 0
    to_sat = (edge & sat[None, :]).any(axis=1)
    to_unsat = (edge & ~sat[None, :]).any(axis=1)
    yes = to_sat & ~to_unsat
    no = ~to_sat
    maybe = to_sat & to_unsat
    q = d.T @ sat.astype(float)
    q[yes] = 1.0
    q[no] = 0.0
    return Partition(yes, no, maybe), QVector(q)


def eliminate_next(d: Dtmc, g, serial: int = 0, trace=None) -> tuple[Dtmc, Xi]:
    part, qv = classify_next_states(d, g)
    sat = sat_mask(d, g).astype(float)
    q, qbar = qv.q, qv.qbar
    inv_q, inv_qbar = _safe_inv(q), _safe_inv(qbar)
    rows = np.stack([inv_q, inv_q, inv_qbar, inv_qbar])
    cols = np.stack([sat * q, sat * qbar, (1 - sat) * q, (1 - sat) * qbar])
    xi = Xi(serial)
    out = _split(d, q, rows, cols, xi)
    _emit(trace, "X", serial, part, q, d, out)
    return out, xi


# -- until -----------------------------------------------------------------------

def classify_until_states(d: Dtmc, g1, g2) -> Partition:
    """Qualitative partition for ``g1 U g2``: probability 0, 1, or in between."""
    s1, s2 = sat_mask(d, g1), sat_mask(d, g2)
    cont = s1 & ~s2
    can_reach = kernels.backward_reach(d.T, s2, cont)
    no = ~can_reach
    can_fail = kernels.backward_reach(d.T, no, cont)
    yes = ~can_fail
    maybe = ~yes & ~no
    return Partition(yes, no, maybe)


def until_probabilities(d: Dtmc, part: Partition) -> QVector:
    q = part.yes.astype(float)
    idx = np.flatnonzero(part.maybe)
    if idx.size:
        T_mm = d.T[np.ix_(idx, idx)]
        rhs = d.T[np.ix_(idx, np.flatnonzero(part.yes))].sum(axis=1)
        x = solve_linear_system(np.eye(idx.size) - T_mm, rhs)
        q[idx] = np.clip(x, 0.0, 1.0)
    return QVector(q)


def eliminate_until(d: Dtmc, g1, g2, serial: int = 0, trace=None) -> tuple[Dtmc, Xi]:
    part = classify_until_states(d, g1, g2)
    qv = until_probabilities(d, part)
    q, qbar = qv.q, qv.qbar
    cont = sat_mask(d, g1) & ~sat_mask(d, g2)
    one = np.ones(d.size)
    rows = np.stack([
        np.where(cont, _safe_inv(q), one),
        np.where(cont, 0.0, one),
        np.where(cont, 0.0, one),
        np.where(cont, _safe_inv(qbar), one),
    ])
    cols = np.stack([q, qbar, q, qbar])
    xi = Xi(serial)
    out = _split(d, q, rows, cols, xi)
    _emit(trace, "U", serial, part, q, d, out)
    return out, xi


# -- bounded until -----------------------------------------------------------------

def expand_bounded_until(f):
    """Unroll ``g1 U<=n g2`` into ``g2 | (g1 & X(g1 U<=n-1 g2))``."""
    if not isinstance(f, fm.BoundedUntil):
        raise TypeError("expected a bounded until")
    result = f.right
    for _ in range(f.bound):
        result = fm.path_or(f.right, fm.path_and(f.left, fm.Next(result)))
    return result


def expand_all_bounded(f):
    if isinstance(f, fm.State):
        return f
    kids = tuple(expand_all_bounded(c) for c in fm.children(f))
    f = fm.with_children(f, kids)
    if isinstance(f, fm.BoundedUntil):
        return expand_bounded_until(f)
    return f


# -- driver ------------------------------------------------------------------------

def find_innermost_temporal(psi):
    """Handle of the leftmost temporal node whose arguments are propositional."""
    for handle, node in fm.walk(psi):
        if isinstance(node, (fm.Next, fm.Until)) and all(
            fm.count_temporal(c) == 0 for c in fm.children(node)
        ):
            return handle
        if isinstance(node, (fm.NextObs, fm.BoundedUntil)):
            raise ValueError("rewrite observation nexts and bounded untils before elimination")
    return None


def prune_unreachable(d: Dtmc) -> Dtmc:
    keep = kernels.forward_reach(d.T, d.init > 0)
    if keep.all():
        return d
    idx = np.flatnonzero(keep)
    return Dtmc(
        origins=[d.origins[i] for i in idx],
        T=d.T[np.ix_(idx, idx)],
        labels=[d.labels[i] for i in idx],
        init=d.init[idx],
        mode=d.mode,
    )


def eliminate_all(d: Dtmc, psi, trace=None, prune: bool = True, first_serial: int = 0):
    """Remove every temporal operator of ``psi``; returns ``(D^k, psi^k, k)``.

    ``psi`` must be observation-free (see ``product.rewrite_obs_next``).
    """
    psi = expand_all_bounded(psi)
    serial = first_serial
    while True:
        handle = find_innermost_temporal(psi)
        if handle is None:
            return d, psi, serial - first_serial
        node = fm.get_at(psi, handle)
        if isinstance(node, fm.Next):
            d, xi = eliminate_next(d, node.body, serial, trace)
        else:
            d, xi = eliminate_until(d, node.left, node.right, serial, trace)
        if prune:
            d = prune_unreachable(d)
        psi = _simplify(fm.replace_at(psi, handle, fm.State(fm.Atom(xi))))
        serial += 1


def aggregate(d: Dtmc, psi, state: int | None = None) -> float:
    """Initial mass of states satisfying the propositional ``psi``.

    With ``state`` given, only chain states originating from that HMM state
    count.
    """
    mask = sat_mask(d, psi)
    if state is not None:
        mask &= np.fromiter((o.state == state for o in d.origins), dtype=bool, count=d.size)
    return float(d.init[mask].sum())


# -- internals ---------------------------------------------------------------------

def _simplify(f):
    # restore canonical form after a temporal node became a State
    if isinstance(f, fm.State):
        return f
    kids = tuple(_simplify(c) for c in fm.children(f))
    if isinstance(f, fm.PathNot):
        return fm.path_not(kids[0])
    if isinstance(f, fm.PathAnd):
        return fm.path_and(*kids)
    if isinstance(f, fm.PathOr):
        return fm.path_or(*kids)
    return fm.with_children(f, kids)


def _safe_inv(x):
    out = np.zeros_like(x)
    nz = x > 0
    out[nz] = 1.0 / x[nz]
    return out


def _split(d: Dtmc, q, rows, cols, xi: Xi) -> Dtmc:
    has_xi = q > 0
    has_nxi = q < 1
    xi_idx = np.full(d.size, -1, dtype=np.int64)
    nxi_idx = np.full(d.size, -1, dtype=np.int64)
    origins, labels, init = [], [], []
    for u in range(d.size):
        if has_xi[u]:
            xi_idx[u] = len(origins)
            origins.append(d.origins[u].extend(xi.serial, True))
            labels.append(d.labels[u] | {xi})
            init.append(d.init[u] * q[u])
        if has_nxi[u]:
            nxi_idx[u] = len(origins)
            origins.append(d.origins[u].extend(xi.serial, False))
            labels.append(d.labels[u])
            init.append(d.init[u] * (1.0 - q[u]))
    T = kernels.assemble_split(
        np.ascontiguousarray(d.T), xi_idx, nxi_idx,
        np.ascontiguousarray(rows), np.ascontiguousarray(cols), len(origins),
    )
    return Dtmc(origins=origins, T=T, labels=labels, init=np.array(init), mode=d.mode)


def _emit(trace, op, serial, part, q, before: Dtmc, after: Dtmc):
    yes, no, maybe = part.sizes()
    qm = q[part.maybe]
    record = {
        "step": serial,
        "op": op,
        "yes": yes,
        "no": no,
        "maybe": maybe,
        "q_min": float(qm.min()) if qm.size else None,
        "q_max": float(qm.max()) if qm.size else None,
        "states_before": before.size,
        "states_after": after.size,
    }
    log.debug("elimination %s", record)
    if trace is not None:
        trace(record)
