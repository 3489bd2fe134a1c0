"""F-limits of point and set sequences and the compactness predicates built on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputError, InternalError
from .filters import (
    EventuallyPeriodicSet,
    FilterFamily,
    FiniteFilter,
    IndexSet,
    OmegaFilter,
    aligned,
    frechet,
    make_index,
    omega_member,
)
from .spaces import FiniteSpace, members

DEFINITIONAL = "definitional"
SHORTCUT = "shortcut"
EP_RESTRICTED = "EP-restricted"


@dataclass(frozen=True)
class IndexedSequence:
    index: IndexSet
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.index):
            raise InputError("sequence must be total on its index set")

    @classmethod
    def of(cls, index, values: Sequence[int]) -> "IndexedSequence":
        return cls(make_index(index), tuple(values))

    def to_json(self) -> dict:
        return {"index": list(self.index), "values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "IndexedSequence":
        return cls(make_index(data["index"]), tuple(int(v) for v in data["values"]))


@dataclass(frozen=True)
class SetSequence:
    index: IndexSet
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.index):
            raise InputError("set sequence must be total on its index set")

    def to_json(self) -> dict:
        return {"index": list(self.index), "values": [list(members(v)) for v in self.values]}


@dataclass(frozen=True)
class OmegaSequence:
    """Eventually periodic omega-sequence: ``prefix`` then ``cycle`` forever."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise InputError("cycle must be nonempty")

    def __getitem__(self, m: int) -> int:
        t = len(self.prefix)
        return self.prefix[m] if m < t else self.cycle[(m - t) % len(self.cycle)]

    def check_space(self, X: FiniteSpace) -> None:
        for v in self.prefix + self.cycle:
            if not 0 <= v < X.n:
                raise InputError(f"sequence value {v} is not a point of the space")

    def preimage(self, u: int) -> EventuallyPeriodicSet:
        """``{m : x_m in u}``."""
        return EventuallyPeriodicSet(
            tuple(bool(u >> v & 1) for v in self.prefix),
            tuple(bool(u >> v & 1) for v in self.cycle),
        )

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "cycle": list(self.cycle)}


@dataclass(frozen=True)
class Verdict:
    value: bool
    witness: dict | None = None
    method: str = DEFINITIONAL
    checked: int = 0
    notes: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.value


def _check_values(X: FiniteSpace, values: Sequence[int]) -> None:
    for v in values:
        if not 0 <= v < X.n:
            raise InputError(f"sequence value {v} is not a point of the space")


def limit_set_definitional(X: FiniteSpace, values: Sequence[int], F: FiniteFilter) -> int:
    out = 0
    for x in range(X.n):
        for u in X.opens:
            if not u >> x & 1:
                continue
            hits = 0
            for i, v in enumerate(values):
                if u >> v & 1:
                    hits |= 1 << i
            if hits not in F.members:
                break
        else:
            out |= 1 << x
    return out


def limit_set_shortcut(X: FiniteSpace, values: Sequence[int], F: FiniteFilter) -> int:
    """Intersection of the closures of the values indexed by the core."""
    cl = X.point_closures
    acc = X.full
    for i in members(F.core):
        acc &= cl[values[i]]
    return acc


def _limit_set(X: FiniteSpace, values: Sequence[int], F: FiniteFilter) -> int:
    a = limit_set_definitional(X, values, F)
    b = limit_set_shortcut(X, values, F)
    if a != b:
        raise InternalError(f"limit sets disagree on {X!r}, {values}, {F!r}: {a} vs {b}")
    return a


def limit_set(X: FiniteSpace, seq: IndexedSequence, F: FiniteFilter) -> int:
    """F-limit points of ``seq``, computed from the definition and checked against the core route."""
    if seq.index != F.index:
        raise InputError("sequence and filter use different index sets")
    _check_values(X, seq.values)
    return _limit_set(X, seq.values, F)


def all_sequences(X: FiniteSpace, k: int):
    return itertools.product(range(X.n), repeat=k)


def is_F_compact(X: FiniteSpace, F: FiniteFilter) -> Verdict:
    """Brute force over every sequence; the first one without limit is the witness."""
    checked = 0
    for values in all_sequences(X, F.size):
        checked += 1
        if not _limit_set(X, values, F):
            return Verdict(False, {"sequence": list(values)}, DEFINITIONAL, checked)
    return Verdict(True, None, DEFINITIONAL, checked)


def _require_finite_family(P: FilterFamily) -> None:
    if not isinstance(P.filters[0], FiniteFilter):
        raise InputError("expected a family of finite filters")


def is_P_compact(X: FiniteSpace, P: FilterFamily) -> Verdict:
    """Every sequence has a limit point for some member of ``P``."""
    _require_finite_family(P)
    k = P.filters[0].size
    checked = 0
    for values in all_sequences(X, k):
        checked += 1
        if not any(_limit_set(X, values, F) for F in P):
            return Verdict(False, {"sequence": list(values)}, DEFINITIONAL, checked)
    return Verdict(True, None, DEFINITIONAL, checked)


# --- omega sequences -----------------------------------------------------------


def recurrent_values(seq: OmegaSequence, F: OmegaFilter) -> int:
    """Values taken infinitely often along Z, as a point mask."""
    t, p = aligned((seq, F.Z))
    v = 0
    for m in range(t, t + p):
        if m in F.Z:
            v |= 1 << seq[m]
    return v


def omega_limit_set_definitional(X: FiniteSpace, seq: OmegaSequence, F: OmegaFilter) -> int:
    out = 0
    for y in range(X.n):
        if all(omega_member(F, seq.preimage(u)) for u in X.opens if u >> y & 1):
            out |= 1 << y
    return out


def omega_limit_set(X: FiniteSpace, seq: OmegaSequence, F: OmegaFilter | None = None) -> int:
    """Points whose minimal neighbourhood holds every value recurring along Z."""
    F = F or frechet()
    seq.check_space(X)
    v = recurrent_values(seq, F)
    out = sum(1 << y for y in range(X.n) if v & ~X.min_nbhds[y] == 0)
    if out != omega_limit_set_definitional(X, seq, F):
        raise InternalError("recurrent-value criterion disagrees with the definition")
    return out


def subsequence_witness(X: FiniteSpace, seq: OmegaSequence) -> tuple[OmegaFilter, int]:
    """Z = positions of the least cycle value, and that value as the limit."""
    seq.check_space(X)
    target = min(seq.cycle)
    Z = EventuallyPeriodicSet(tuple(False for _ in seq.prefix), tuple(v == target for v in seq.cycle))
    F = OmegaFilter(Z)
    if not omega_limit_set(X, seq, F) >> target & 1:
        raise InternalError("constant subsequence failed to converge")
    return F, target


def is_sequentially_compact(X: FiniteSpace, exhaustive_up_to: int = 10) -> Verdict:
    """Find a converging eventually periodic subsequence for every sequence.

    The witness depends only on the least recurring value, so one sequence
    per set of recurring values covers everything; above ``exhaustive_up_to``
    points one sequence per least value is used instead.
    """
    if X.n <= exhaustive_up_to:
        cycles = (members(v) for v in range(1, 1 << X.n))
    else:
        cycles = (tuple(range(v, X.n)) for v in range(X.n))
    checked = 0
    for cyc in cycles:
        subsequence_witness(X, OmegaSequence((), cyc))
        checked += 1
    return Verdict(True, None, EP_RESTRICTED, checked, ("EP-restricted",))


def every_sequence_converges(X: FiniteSpace) -> Verdict:
    """Criterion: some point has the whole space as minimal neighbourhood.

    Cross-checked against the Frechet limit of one sequence per recurring value set.
    """
    hub = next((y for y in range(X.n) if X.min_nbhds[y] == X.full), None)
    first_bad = None
    checked = 0
    for v in range(1, 1 << X.n):
        checked += 1
        if first_bad is None and not omega_limit_set(X, OmegaSequence((), members(v)), frechet()):
            first_bad = v
    if (hub is None) != (first_bad is not None):
        raise InternalError("convergence criterion disagrees with brute force")
    if hub is not None:
        return Verdict(True, {"point": hub}, SHORTCUT, checked)
    return Verdict(False, {"cycle": list(members(first_bad))}, SHORTCUT, checked)


# --- set sequences -------------------------------------------------------------


def _check_open_sets(X: FiniteSpace, values: Sequence[int]) -> None:
    for y in values:
        if not y or y not in X.opens:
            raise InputError("set sequence values must be nonempty open sets")


def _set_limit_set(X: FiniteSpace, values: Sequence[int], F: FiniteFilter) -> int:
    out = 0
    for x in range(X.n):
        for u in X.opens:
            if not u >> x & 1:
                continue
            hits = 0
            for i, y in enumerate(values):
                if y & u:
                    hits |= 1 << i
            if hits not in F.members:
                break
        else:
            out |= 1 << x
    return out


def set_limit_set(X: FiniteSpace, seq: SetSequence, F: FiniteFilter) -> int:
    if seq.index != F.index:
        raise InputError("sequence and filter use different index sets")
    _check_open_sets(X, seq.values)
    return _set_limit_set(X, seq.values, F)


def is_P_pseudocompact(X: FiniteSpace, P: FilterFamily) -> Verdict:
    """Brute force over sequences of nonempty open sets."""
    _require_finite_family(P)
    k = P.filters[0].size
    nonempty = [u for u in X.sorted_opens if u]
    checked = 0
    for values in itertools.product(nonempty, repeat=k):
        checked += 1
        if not any(_set_limit_set(X, values, F) for F in P):
            return Verdict(False, {"sets": [list(members(y)) for y in values]}, DEFINITIONAL, checked)
    return Verdict(True, None, DEFINITIONAL, checked)
