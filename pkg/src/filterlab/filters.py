"""Filters over finite index sets and Frechet-type filters over omega.

A finite filter keeps both its explicit member family and its principal
core; the two are checked against each other on construction.  Subsets of
an index set are bitmasks over label positions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ImproperFilterError, InputError, InternalError, PreconditionError, ResourceLimitError
from .spaces import members, popcount

MAX_INDEX = 6

IndexSet = tuple[str, ...]


def make_index(labels: Iterable[str] | int) -> IndexSet:
    """An index set from labels, or ``k`` default labels ``a, b, c, ...``."""
    if isinstance(labels, int):
        if labels < 1:
            raise InputError("index sets are nonempty")
        return tuple("abcdefghijklmnopqrstuvwxyz"[i] for i in range(labels))
    out = tuple(str(lab) for lab in labels)
    if not out:
        raise InputError("index sets are nonempty")
    if len(set(out)) != len(out):
        raise InputError(f"duplicate index labels in {out}")
    return out


def subset_mask(index: IndexSet, labels: Iterable[str]) -> int:
    pos = {lab: i for i, lab in enumerate(index)}
    m = 0
    for lab in labels:
        if lab not in pos:
            raise InputError(f"label {lab!r} not in index {index}")
        m |= 1 << pos[lab]
    return m


def subset_labels(index: IndexSet, m: int) -> list[str]:
    return [index[i] for i in members(m)]


def _supersets(core: int, k: int) -> frozenset[int]:
    full = (1 << k) - 1
    rest = full & ~core
    out = []
    sub = rest
    while True:
        out.append(core | sub)
        if sub == 0:
            break
        sub = (sub - 1) & rest
    return frozenset(out)


@dataclass(frozen=True)
class FiniteFilter:
    index: IndexSet
    core: int

    def __post_init__(self) -> None:
        k = len(self.index)
        if k < 1:
            raise InputError("index sets are nonempty")
        if self.core == 0:
            raise ImproperFilterError("empty core gives the improper filter")
        if self.core < 0 or self.core >> k:
            raise InputError("core outside the index set")

    @property
    def size(self) -> int:
        return len(self.index)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def members(self) -> frozenset[int]:
        fam = _supersets(self.core, self.size)
        # the explicit family must agree with the core normal form
        acc = self.full
        for m in fam:
            acc &= m
        if acc != self.core or self.full not in fam or 0 in fam:
            raise InternalError("member family disagrees with principal core")
        return fam

    def __contains__(self, m: int) -> bool:
        return m in self.members

    @property
    def core_size(self) -> int:
        return popcount(self.core)

    def to_json(self) -> dict:
        return {"index": list(self.index), "core": subset_labels(self.index, self.core)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteFilter":
        try:
            index = make_index(data["index"])
            core = subset_mask(index, data["core"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed filter: {exc}") from exc
        return cls(index, core)

    def __repr__(self) -> str:
        return f"up({{{','.join(subset_labels(self.index, self.core))}}})/{''.join(self.index)}"


def principal(index: IndexSet | int, core: Iterable[str]) -> FiniteFilter:
    """The filter of all supersets of ``core``."""
    idx = make_index(index)
    return FiniteFilter(idx, subset_mask(idx, core))


def filter_from_base(index: IndexSet | int, base: Iterable[Iterable[str] | int]) -> FiniteFilter:
    """Upward and intersection closure of a nonempty base."""
    idx = make_index(index)
    k = len(idx)
    masks = [b if isinstance(b, int) else subset_mask(idx, b) for b in base]
    if not masks:
        raise InputError("base must be nonempty")
    for m in masks:
        if m < 0 or m >> k:
            raise InputError("base set outside the index")
    meets = {(1 << k) - 1}
    for b in masks:
        meets |= {b & m for m in meets}
    if 0 in meets:
        raise ImproperFilterError("some finite intersection of base sets is empty")
    family = set()
    for m in meets:
        family |= _supersets(m, k)
    core = min(meets, key=popcount)
    F = FiniteFilter(idx, core)
    if frozenset(family) != F.members:
        raise InternalError("closure of base is not principal")
    return F


def is_ultrafilter(F: FiniteFilter) -> bool:
    """Every subset or its complement is a member; cross-checked with ``|core| == 1``."""
    by_complement = all(a in F.members or (F.full ^ a) in F.members for a in range(1 << F.size))
    by_core = F.core_size == 1
    if by_complement != by_core:
        raise InternalError("ultrafilter characterizations disagree")
    return by_core


def non_ultra_partition(F: FiniteFilter) -> tuple[int, int]:
    """Split the index into two non-members; the first part is the least core element."""
    if is_ultrafilter(F):
        raise PreconditionError("an ultrafilter admits no such partition")
    j1 = F.core & -F.core
    j2 = F.full ^ j1
    assert j1 & j2 == 0 and j1 | j2 == F.full
    assert j1 not in F.members and j2 not in F.members
    return j1, j2


def is_mn_regular(F: FiniteFilter, m: int, n: int, max_checks: int = 10**6) -> bool:
    """Is there a family of n distinct members whose every m-subfamily has empty meet?"""
    if m < 1 or n < 0:
        raise InputError("need m >= 1 and n >= 0")
    mem = sorted(F.members)
    if math.comb(len(mem), n) > max_checks:
        raise ResourceLimitError("regularity search too large")
    for fam in itertools.combinations(mem, n):
        ok = True
        for sub in itertools.combinations(fam, m):
            acc = F.full
            for s in sub:
                acc &= s
            if acc:
                ok = False
                break
        if ok:
            return True
    return False


def enumerate_filters(index: IndexSet | int, limit: int = MAX_INDEX) -> list[FiniteFilter]:
    """All proper filters, ordered by core size then core mask."""
    idx = make_index(index)
    if len(idx) > limit:
        raise ResourceLimitError(f"|I|={len(idx)} exceeds limit {limit}")
    cores = sorted(range(1, 1 << len(idx)), key=lambda c: (popcount(c), c))
    return [FiniteFilter(idx, c) for c in cores]


def enumerate_ultrafilters(index: IndexSet | int, limit: int = MAX_INDEX) -> list[FiniteFilter]:
    return [F for F in enumerate_filters(index, limit) if is_ultrafilter(F)]


@dataclass(frozen=True)
class FilterFamily:
    """A nonempty family of filters over one index set."""

    filters: tuple

    def __post_init__(self) -> None:
        if not self.filters:
            raise InputError("filter family must be nonempty")
        object.__setattr__(self, "filters", tuple(self.filters))
        kinds = {type(F) for F in self.filters}
        if len(kinds) != 1:
            raise InputError("mixed finite and omega filters")
        if isinstance(self.filters[0], FiniteFilter):
            if len({F.index for F in self.filters}) != 1:
                raise InputError("filters in a family must share one index set")

    @property
    def index(self):
        F = self.filters[0]
        return F.index if isinstance(F, FiniteFilter) else "omega"

    def __len__(self) -> int:
        return len(self.filters)

    def __iter__(self):
        return iter(self.filters)

    def to_json(self) -> dict:
        return {"index": self.index if self.index == "omega" else list(self.index),
                "filters": [F.to_json() for F in self.filters]}

    @classmethod
    def from_json(cls, data) -> "FilterFamily":
        items = data["filters"] if isinstance(data, dict) else data
        out = []
        for d in items:
            out.append(OmegaFilter.from_json(d) if d.get("kind") == "frechet" else FiniteFilter.from_json(d))
        return cls(tuple(out))


# --- omega -------------------------------------------------------------------


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """Subset of omega: ``prefix`` flags, then ``cycle`` repeated forever."""

    prefix: tuple[bool, ...]
    cycle: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(bool(b) for b in self.prefix))
        object.__setattr__(self, "cycle", tuple(bool(b) for b in self.cycle))
        if not self.cycle:
            raise InputError("cycle must be nonempty")

    def __contains__(self, m: int) -> bool:
        t = len(self.prefix)
        if m < t:
            return self.prefix[m]
        return self.cycle[(m - t) % len(self.cycle)]

    @property
    def is_infinite(self) -> bool:
        return any(self.cycle)

    def unroll(self, length: int) -> tuple[bool, ...]:
        return tuple(m in self for m in range(length))

    def to_json(self) -> dict:
        return {"prefix": [int(b) for b in self.prefix], "cycle": [int(b) for b in self.cycle]}

    @classmethod
    def from_json(cls, data: dict) -> "EventuallyPeriodicSet":
        try:
            return cls(tuple(data.get("prefix", ())), tuple(data["cycle"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed set: {exc}") from exc


def omega() -> EventuallyPeriodicSet:
    return EventuallyPeriodicSet((), (True,))


def residues(period: int, *rs: int) -> EventuallyPeriodicSet:
    """``{m : m mod period in rs}``; ``residues(2, 0)`` is the evens."""
    return EventuallyPeriodicSet((), tuple(r in rs for r in range(period)))


def cofinite(missing: Iterable[int]) -> EventuallyPeriodicSet:
    miss = set(missing)
    t = max(miss) + 1 if miss else 0
    return EventuallyPeriodicSet(tuple(m not in miss for m in range(t)), (True,))


def aligned(sets: Sequence) -> tuple[int, int]:
    """Common (prefix length, period) over eventually periodic objects with prefix/cycle."""
    t = max(len(s.prefix) for s in sets)
    p = math.lcm(*(len(s.cycle) for s in sets))
    return t, p


@dataclass(frozen=True)
class OmegaFilter:
    """``F_Z``: all W with ``Z minus W`` finite."""

    Z: EventuallyPeriodicSet

    def __post_init__(self) -> None:
        if not self.Z.is_infinite:
            raise InputError("F_Z needs an infinite Z")

    def to_json(self) -> dict:
        return {"kind": "frechet", "Z": self.Z.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "OmegaFilter":
        if data.get("kind") != "frechet":
            raise InputError("unknown omega filter kind")
        return cls(EventuallyPeriodicSet.from_json(data["Z"]))


def frechet() -> OmegaFilter:
    return OmegaFilter(omega())


def omega_member(F: OmegaFilter, W: EventuallyPeriodicSet) -> bool:
    """Is ``Z minus W`` finite?  Decided on one common period after both prefixes."""
    t, p = aligned((F.Z, W))
    return not any(m in F.Z and m not in W for m in range(t, t + p))
