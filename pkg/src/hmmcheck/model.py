"""HMM and DTMC data types, validation, and the cylinder-set measure."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

STOCHASTIC_TOL = 1e-9


class SatMode(enum.Enum):
    PER_STATE = "per-state"
    WEIGHTED = "weighted"


# Atomic propositions.  Stage one adds Fresh atoms to the HMM labels, stage
# two contributes ObsSet atoms (evaluated lazily from the product state's
# observation), stage three adds one Xi atom per eliminated operator.

@dataclass(frozen=True, order=True)
class Named:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ObsSet:
    obs: frozenset

    def __str__(self):
        return "{" + ",".join(str(o) for o in sorted(self.obs)) + "}"


@dataclass(frozen=True, order=True)
class Fresh:
    serial: int

    def __str__(self):
        return f"fresh_{self.serial}"


@dataclass(frozen=True, order=True)
class Xi:
    serial: int

    def __str__(self):
        return f"xi_{self.serial}"


AtomicProp = Union[Named, ObsSet, Fresh, Xi]


@dataclass(frozen=True)
class Violation:
    kind: str  # "dimension", "range", "row-sum", "distribution", "label", "empty"
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "; ".join(map(str, self.violations))


class ModelError(ValueError):
    """Raised when a model fails validation."""

    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def _as_matrix(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Hmm:
    """A labelled hidden Markov model (S, A, Theta, B, L, pi).

    ``labels[s]`` is the set of proposition names holding in state ``s``.
    ``ap`` is the declared proposition alphabet; it defaults to the union of
    all labels.  Arrays are copied and frozen on construction.
    """

    A: np.ndarray
    B: np.ndarray
    labels: tuple
    pi: np.ndarray
    ap: frozenset = None

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A))
        object.__setattr__(self, "B", _as_matrix(self.B))
        object.__setattr__(self, "pi", _as_matrix(self.pi))
        labels = tuple(frozenset(lab) for lab in self.labels)
        object.__setattr__(self, "labels", labels)
        if self.ap is None:
            object.__setattr__(self, "ap", frozenset().union(*labels))
        else:
            object.__setattr__(self, "ap", frozenset(self.ap))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1] if self.B.ndim == 2 else 0

    def __eq__(self, other):
        if not isinstance(other, Hmm):
            return NotImplemented
        return (
            self.A.shape == other.A.shape
            and self.B.shape == other.B.shape
            and self.pi.shape == other.pi.shape
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.B, other.B)
            and np.array_equal(self.pi, other.pi)
            and self.labels == other.labels
            and self.ap == other.ap
        )

    __hash__ = None


def _check_stochastic_rows(name, M, out):
    for i, row in enumerate(M):
        bad = [j for j, x in enumerate(row) if not 0.0 <= x <= 1.0]
        for j in bad:
            out.append(Violation("range", f"{name}[{i},{j}] = {row[j]:g} not in [0,1]"))
        total = float(np.sum(row))
        if abs(total - 1.0) > STOCHASTIC_TOL:
            out.append(Violation("row-sum", f"{name} row {i} sums to {total:g}"))


def validate_hmm(h: Hmm) -> ValidationReport:
    out = []
    A, B, pi = h.A, h.B, h.pi
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        out.append(Violation("dimension", f"A must be square, got shape {A.shape}"))
    if A.ndim == 2 and A.shape[0] == 0:
        out.append(Violation("empty", "no states"))
    n = A.shape[0] if A.ndim >= 1 else 0
    if B.ndim != 2 or B.shape[0] != n:
        out.append(Violation("dimension", f"B must have {n} rows, got shape {B.shape}"))
    elif B.shape[1] == 0:
        out.append(Violation("empty", "no observations"))
    if pi.ndim != 1 or pi.shape[0] != n:
        out.append(Violation("dimension", f"pi must have length {n}, got shape {pi.shape}"))
    if len(h.labels) != n:
        out.append(Violation("dimension", f"expected {n} labels, got {len(h.labels)}"))
    if out:
        return ValidationReport(tuple(out))

    _check_stochastic_rows("A", A, out)
    _check_stochastic_rows("B", B, out)
    for i, x in enumerate(pi):
        if not 0.0 <= x <= 1.0:
            out.append(Violation("range", f"pi[{i}] = {x:g} not in [0,1]"))
    total = float(np.sum(pi))
    if abs(total - 1.0) > STOCHASTIC_TOL:
        out.append(Violation("distribution", f"pi sums to {total:g}"))
    for s, lab in enumerate(h.labels):
        for a in sorted(lab - h.ap):
            out.append(Violation("label", f"label {a!r} of state {s} not in the proposition alphabet"))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class FinitePath:
    """Nonempty sequence of (state, observation) pairs."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(s), int(o)) for s, o in self.pairs)
        if not pairs:
            raise ValueError("a path needs at least one (state, observation) pair")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def is_valid(self, h: Hmm) -> bool:
        for s, o in self.pairs:
            if not (0 <= s < h.n and 0 <= o < h.m) or h.B[s, o] <= 0:
                return False
        return all(h.A[s, t] > 0 for (s, _), (t, _) in zip(self.pairs, self.pairs[1:]))


def cylinder_probability(h: Hmm, mode: SatMode, path: FinitePath | Sequence) -> float:
    if not isinstance(path, FinitePath):
        path = FinitePath(path)
    for s, o in path.pairs:
        if not (0 <= s < h.n and 0 <= o < h.m):
            raise IndexError(f"pair ({s}, {o}) out of range for n={h.n}, m={h.m}")
    s0, o0 = path.pairs[0]
    p = h.B[s0, o0]
    if mode is SatMode.WEIGHTED:
        p = h.pi[s0] * p
    prev = s0
    for s, o in path.pairs[1:]:
        p *= h.A[prev, s] * h.B[s, o]
        prev = s
    return float(p)


@dataclass(frozen=True)
class Origin:
    """Where a chain state came from: HMM state, observation, Xi choices."""

    state: int
    obs: int
    xi: tuple = ()

    def extend(self, serial: int, value: bool) -> "Origin":
        return Origin(self.state, self.obs, self.xi + ((serial, value),))


@dataclass(frozen=True, eq=False)
class Dtmc:
    """Labelled DTMC over indexed states.

    ``labels[i]`` holds the explicit atoms (Named, Fresh, Xi) of state ``i``;
    ObsSet atoms are decided from ``origins[i].obs`` on demand.
    """

    origins: tuple
    T: np.ndarray
    labels: tuple
    init: np.ndarray
    mode: SatMode = SatMode.WEIGHTED
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "T", _as_matrix(self.T))
        object.__setattr__(self, "init", _as_matrix(self.init))
        object.__setattr__(self, "labels", tuple(frozenset(x) for x in self.labels))
        object.__setattr__(self, "origins", tuple(self.origins))

    @property
    def size(self) -> int:
        return len(self.origins)

    def holds(self, i: int, atom) -> bool:
        if isinstance(atom, ObsSet):
            return self.origins[i].obs in atom.obs
        return atom in self.labels[i]

    def atom_mask(self, atom) -> np.ndarray:
        if isinstance(atom, ObsSet):
            obs = np.fromiter((o.obs for o in self.origins), dtype=np.int64, count=self.size)
            return np.isin(obs, list(atom.obs))
        return np.fromiter((atom in lab for lab in self.labels), dtype=bool, count=self.size)


def validate_dtmc(d: Dtmc) -> ValidationReport:
    out = []
    k = d.size
    if k == 0:
        return ValidationReport((Violation("empty", "no states"),))
    if d.T.shape != (k, k):
        out.append(Violation("dimension", f"T must be {k}x{k}, got {d.T.shape}"))
    if d.init.shape != (k,):
        out.append(Violation("dimension", f"init must have length {k}, got {d.init.shape}"))
    if len(d.labels) != k:
        out.append(Violation("dimension", f"expected {k} labels, got {len(d.labels)}"))
    if out:
        return ValidationReport(tuple(out))
    if np.any(d.T < 0) or np.any(d.T > 1 + STOCHASTIC_TOL):
        out.append(Violation("range", "T has entries outside [0,1]"))
    sums = d.T.sum(axis=1)
    for i in np.flatnonzero(np.abs(sums - 1.0) > STOCHASTIC_TOL):
        out.append(Violation("row-sum", f"T row {i} ({d.origins[i]}) sums to {sums[i]:g}"))
    if np.any(d.init < 0):
        out.append(Violation("range", "init has negative entries"))
    if d.mode is SatMode.WEIGHTED:
        if abs(d.init.sum() - 1.0) > STOCHASTIC_TOL:
            out.append(Violation("distribution", f"init sums to {d.init.sum():g}"))
    else:
        per_state = {}
        for o, x in zip(d.origins, d.init):
            per_state[o.state] = per_state.get(o.state, 0.0) + x
        live = [s for s, x in per_state.items() if x > 0]
        if len(live) != 1 or abs(per_state[live[0]] - 1.0) > STOCHASTIC_TOL:
            out.append(Violation("distribution", f"per-state init masses {per_state}"))
    return ValidationReport(tuple(out))
