"""Finite topological spaces.

Points are ``0..n-1`` and subsets of points are int bitmasks (bit ``x`` set
means point ``x`` is a member).  A space stores its full family of open sets,
so openness is a set lookup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, PreconditionError, ResourceLimitError

LABELED = "labeled"
HOMEOMORPHISM = "up-to-homeomorphism"
DEFAULT_LIMITS = {LABELED: 5, HOMEOMORPHISM: 6}


def mask(points: Iterable[int]) -> int:
    """Bitmask of an iterable of point indices."""
    m = 0
    for p in points:
        if p < 0:
            raise InputError(f"negative point {p}")
        m |= 1 << p
    return m


def members(m: int) -> tuple[int, ...]:
    """Sorted point indices of a bitmask."""
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def popcount(m: int) -> int:
    return bin(m).count("1")


def _check_subset(n: int, a: int) -> None:
    if a < 0 or a >> n:
        raise InputError(f"point set {members(a) if a >= 0 else a} not within 0..{n - 1}")


@dataclass(frozen=True)
class FiniteSpace:
    n: int
    opens: frozenset[int]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError("spaces are nonempty: n must be >= 1")
        full = (1 << self.n) - 1
        opens = frozenset(self.opens)
        object.__setattr__(self, "opens", opens)
        for u in opens:
            _check_subset(self.n, u)
        if 0 not in opens or full not in opens:
            raise InputError("opens must contain the empty set and the whole space")
        for u, v in itertools.combinations(opens, 2):
            if u | v not in opens or u & v not in opens:
                raise InputError(
                    f"opens not closed under union/intersection: {members(u)}, {members(v)}"
                )

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def points(self) -> range:
        return range(self.n)

    @cached_property
    def key(self) -> int:
        """Encoded family: bit ``U`` is set for each open ``U``."""
        return sum(1 << u for u in self.opens)

    @cached_property
    def sorted_opens(self) -> tuple[int, ...]:
        return tuple(sorted(self.opens))

    @cached_property
    def min_nbhds(self) -> tuple[int, ...]:
        nb = []
        for y in range(self.n):
            acc = self.full
            for u in self.opens:
                if u >> y & 1:
                    acc &= u
            nb.append(acc)
        return tuple(nb)

    @cached_property
    def point_closures(self) -> tuple[int, ...]:
        # x lies in cl{y} iff y lies in the minimal neighbourhood of x
        nb = self.min_nbhds
        return tuple(
            sum(1 << x for x in range(self.n) if nb[x] >> y & 1) for y in range(self.n)
        )

    @cached_property
    def closed_sets(self) -> tuple[int, ...]:
        return tuple(sorted(self.full ^ u for u in self.opens))

    def is_open(self, a: int) -> bool:
        return a in self.opens

    def is_closed(self, a: int) -> bool:
        return (self.full ^ a) in self.opens

    def to_json(self) -> dict:
        opens = sorted(list(members(u)) for u in self.opens)
        return {"n": self.n, "opens": opens}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSpace":
        try:
            n = int(data["n"])
            opens = [mask(o) for o in data["opens"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed space: {exc}") from exc
        return cls(n, frozenset(opens))

    @classmethod
    def trusted(cls, n: int, opens: frozenset[int]) -> "FiniteSpace":
        """Build without validation; for families already known to be topologies."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "opens", frozenset(opens))
        return obj

    def __repr__(self) -> str:
        return f"FiniteSpace(n={self.n}, opens={[list(members(u)) for u in self.sorted_opens]})"


@dataclass(frozen=True)
class SpaceCatalogue:
    spaces: tuple[FiniteSpace, ...]
    dedup: str = LABELED

    def __len__(self) -> int:
        return len(self.spaces)

    def __iter__(self):
        return iter(self.spaces)

    def __getitem__(self, i):
        return self.spaces[i]

    def to_json(self) -> dict:
        return {"dedup": self.dedup, "spaces": [s.to_json() for s in self.spaces]}

    @classmethod
    def from_json(cls, data) -> "SpaceCatalogue":
        if isinstance(data, list):
            return cls(tuple(FiniteSpace.from_json(s) for s in data))
        try:
            spaces = tuple(FiniteSpace.from_json(s) for s in data["spaces"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed catalogue: {exc}") from exc
        return cls(spaces, data.get("dedup", LABELED))


# --- constructors -----------------------------------------------------------


def discrete(n: int) -> FiniteSpace:
    return FiniteSpace(n, frozenset(range(1 << n)))


def indiscrete(n: int) -> FiniteSpace:
    return FiniteSpace(n, frozenset({0, (1 << n) - 1}))


def sierpinski() -> FiniteSpace:
    """Two points; ``{1}`` is the only nontrivial open set."""
    return FiniteSpace(2, frozenset({0b00, 0b10, 0b11}))


def iit_space(n: int) -> FiniteSpace:
    """Initial interval topology on ``0..n-1``: the opens are ``[0, a)``."""
    if n < 1:
        raise InputError("iit_space needs n >= 1")
    return FiniteSpace(n, frozenset((1 << a) - 1 for a in range(n + 1)))


def generate_opens(n: int, generators: Iterable[int], max_opens: int | None = None) -> frozenset[int]:
    """Topology generated by a family of subsets (closure under finite meets and unions)."""
    full = (1 << n) - 1
    meets = {full}
    for g in generators:
        _check_subset(n, g)
        meets |= {g & m for m in meets}
    opens = {0}
    for b in sorted(meets):
        opens |= {o | b for o in opens}
        if max_opens is not None and len(opens) > max_opens:
            raise ResourceLimitError(f"topology exceeds {max_opens} open sets")
    return frozenset(opens)


def from_base(n: int, base: Iterable[int]) -> FiniteSpace:
    return FiniteSpace.trusted(n, generate_opens(n, base))


def opens_from_min_nbhds(nbhds: Sequence[int]) -> frozenset[int]:
    """All unions of minimal neighbourhoods (the up-sets of the specialization preorder)."""
    n = len(nbhds)
    return frozenset(
        s for s in range(1 << n) if all(nbhds[x] & ~s == 0 for x in members(s))
    )


def from_min_nbhds(nbhds: Sequence[int]) -> FiniteSpace:
    return FiniteSpace.trusted(len(nbhds), opens_from_min_nbhds(nbhds))


# --- operations --------------------------------------------------------------


def closure(X: FiniteSpace, a: int) -> int:
    """Smallest closed set containing ``a``."""
    _check_subset(X.n, a)
    disjoint = 0
    for u in X.opens:
        if u & a == 0:
            disjoint |= u
    return X.full ^ disjoint


def minimal_open_nbhd(X: FiniteSpace, y: int) -> int:
    if not 0 <= y < X.n:
        raise InputError(f"point {y} out of range for n={X.n}")
    return X.min_nbhds[y]


def is_continuous(f: Sequence[int], X: FiniteSpace, Y: FiniteSpace) -> bool:
    """Preimage of every open of ``Y`` is open in ``X``."""
    if len(f) != X.n:
        raise InputError(f"map has {len(f)} values, domain has {X.n} points")
    for v in f:
        if not 0 <= v < Y.n:
            raise InputError(f"map value {v} outside codomain")
    for v in Y.opens:
        pre = sum(1 << x for x in range(X.n) if v >> f[x] & 1)
        if pre not in X.opens:
            return False
    return True


def disjoint_closed_pair(X: FiniteSpace) -> tuple[int, int] | None:
    """First pair of disjoint nonempty closed sets in mask order, if any."""
    closed = [c for c in X.closed_sets if c]
    for i, c1 in enumerate(closed):
        for c2 in closed[i + 1:]:
            if c1 & c2 == 0:
                return c1, c2
    return None


def is_ultraconnected(X: FiniteSpace) -> tuple[bool, tuple[int, int] | None]:
    """No two nonempty closed sets are disjoint; otherwise also return such a pair."""
    pair = disjoint_closed_pair(X)
    return pair is None, pair


def is_m_ultraconnected(X: FiniteSpace, m: int) -> bool:
    """Every m-tuple of point closures has nonempty intersection."""
    if m < 1:
        raise InputError("m must be >= 1")
    cl = X.point_closures
    for tup in itertools.combinations_with_replacement(range(X.n), m):
        acc = X.full
        for x in tup:
            acc &= cl[x]
            if not acc:
                return False
    return True


def subspace(X: FiniteSpace, a: int) -> tuple[FiniteSpace, tuple[int, ...]]:
    """Subspace on ``a`` relabelled to ``0..|a|-1``, with the embedding into X."""
    _check_subset(X.n, a)
    emb = members(a)
    if not emb:
        raise InputError("subspace must be nonempty")
    opens = set()
    for u in X.opens:
        opens.add(sum(1 << k for k, x in enumerate(emb) if u >> x & 1))
    return FiniteSpace(len(emb), frozenset(opens)), emb


def permute_mask(m: int, perm: Sequence[int]) -> int:
    out = 0
    for x in members(m):
        out |= 1 << perm[x]
    return out


def permute(X: FiniteSpace, perm: Sequence[int]) -> FiniteSpace:
    """Relabel point ``x`` as ``perm[x]``."""
    if sorted(perm) != list(range(X.n)):
        raise InputError("not a permutation of the points")
    return FiniteSpace(X.n, frozenset(permute_mask(u, perm) for u in X.opens))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    perms = list(itertools.permutations(range(n)))
    table = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for r, p in enumerate(perms):
        for m in range(1 << n):
            table[r, m] = permute_mask(m, p)
    return table


def _canonical_rows(X: FiniteSpace) -> tuple[tuple[int, ...], int]:
    table = _perm_table(X.n)
    images = table[:, np.fromiter(X.opens, dtype=np.int64)]
    images = -np.sort(-images, axis=1)
    order = np.lexsort(images.T[::-1])
    best = images[order[0]]
    stabilizer = int(np.count_nonzero((images == best).all(axis=1)))
    return tuple(int(v) for v in best), stabilizer


def canonical_form(X: FiniteSpace) -> FiniteSpace:
    """The relabelling of X with minimal encoded family."""
    best, _ = _canonical_rows(X)
    return FiniteSpace.trusted(X.n, frozenset(best))


def automorphism_count(X: FiniteSpace) -> int:
    return _canonical_rows(X)[1]


def is_homeomorphic(X: FiniteSpace, Y: FiniteSpace) -> bool:
    if X.n != Y.n or len(X.opens) != len(Y.opens):
        return False
    return canonical_form(X).key == canonical_form(Y).key


# --- enumeration -------------------------------------------------------------


def _extensions(nbhds: tuple[int, ...]):
    """All preorders on n+1 points whose restriction to 0..n-1 is ``nbhds``."""
    n = len(nbhds)
    z = 1 << n
    for up in range(1 << n):
        # the old points in z's minimal neighbourhood must form an open set
        if any(nbhds[y] & ~up for y in members(up)):
            continue
        for down in range(1 << n):
            # points whose neighbourhood acquires z: closed under specialization
            if any((nbhds[x2] >> x & 1) and not (down >> x2 & 1)
                   for x in members(down) for x2 in range(n)):
                continue
            if any(up & ~nbhds[x] for x in members(down)):
                continue
            yield tuple(nb | z if down >> x & 1 else nb for x, nb in enumerate(nbhds)) + (up | z,)


def _labeled_preorders(n: int) -> list[tuple[int, ...]]:
    level = [(1,)]
    for _ in range(1, n):
        level = [ext for nb in level for ext in _extensions(nb)]
    return level


def enumerate_topologies(n: int, dedup: str = LABELED, limit: int | None = None) -> SpaceCatalogue:
    """Every topology on ``0..n-1``, ordered by encoded family.

    With ``dedup=HOMEOMORPHISM`` one canonical representative per class is kept.
    """
    if dedup not in DEFAULT_LIMITS:
        raise InputError(f"unknown dedup mode {dedup!r}")
    if n < 1:
        raise InputError("n must be >= 1")
    bound = DEFAULT_LIMITS[dedup] if limit is None else limit
    if n > bound:
        raise ResourceLimitError(f"n={n} exceeds the {dedup} enumeration limit {bound}")
    if dedup == LABELED:
        spaces = [from_min_nbhds(nb) for nb in _labeled_preorders(n)]
    else:
        reps = [FiniteSpace(1, frozenset({0, 1}))]
        for _ in range(1, n):
            found = {}
            for r in reps:
                for ext in _extensions(r.min_nbhds):
                    c = canonical_form(from_min_nbhds(ext))
                    found.setdefault(c.key, c)
            reps = list(found.values())
        spaces = reps
    spaces.sort(key=lambda s: s.key)
    return SpaceCatalogue(tuple(spaces), dedup)


def catalogue_up_to(max_points: int, dedup: str = LABELED) -> SpaceCatalogue:
    """Concatenated catalogues for 1..max_points points."""
    out: list[FiniteSpace] = []
    for n in range(1, max_points + 1):
        out.extend(enumerate_topologies(n, dedup).spaces)
    return SpaceCatalogue(tuple(out), dedup)


def require_disjoint_closed(X: FiniteSpace, c1: int, c2: int) -> None:
    if not c1 or not c2:
        raise PreconditionError("closed sets must be nonempty")
    if c1 & c2:
        raise PreconditionError("closed sets must be disjoint")
    if not (X.is_closed(c1) and X.is_closed(c2)):
        raise PreconditionError("sets must be closed")
