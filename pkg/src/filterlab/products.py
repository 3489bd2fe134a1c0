"""Finite products, the projection law, and the explicit objects built in product arguments.

Product points are encoded in mixed radix with the first factor most
significant, so the point order is the lexicographic order of coordinate
tuples.  Opens are only materialized on request; limit computations on large
products go through minimal neighbourhoods, which are rectangles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .convergence import IndexedSequence, Verdict, _limit_set, all_sequences
from .errors import InputError, InternalError, PreconditionError, ResourceLimitError
from .filters import FilterFamily, FiniteFilter, is_ultrafilter, non_ultra_partition
from .spaces import (
    FiniteSpace,
    discrete,
    generate_opens,
    iit_space,
    is_continuous,
    members,
    require_disjoint_closed,
    subspace,
)

MAX_PRODUCT_POINTS = 4096
MAX_MATERIALIZED_POINTS = 64
MAX_MATERIALIZED_OPENS = 1 << 16

PRODUCT = "product"
BOX = "box"


@dataclass(frozen=True)
class ProductSpace:
    factors: tuple[FiniteSpace, ...]
    mode: str = PRODUCT
    kappa: int | None = None  # box products only; None stands for omega

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InputError("a product needs at least one factor")
        if self.mode not in (PRODUCT, BOX):
            raise InputError(f"unknown product mode {self.mode!r}")
        if self.kappa is not None and self.kappa < 1:
            raise InputError("kappa must be >= 1")
        if self.n > MAX_PRODUCT_POINTS:
            raise ResourceLimitError(f"product has {self.n} points, limit {MAX_PRODUCT_POINTS}")

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(X.n for X in self.factors)

    @property
    def n(self) -> int:
        return math.prod(X.n for X in self.factors)

    def encode(self, coords: Sequence[int]) -> int:
        p = 0
        for c, X in zip(coords, self.factors):
            if not 0 <= c < X.n:
                raise InputError(f"coordinate {c} out of range")
            p = p * X.n + c
        return p

    def decode(self, p: int) -> tuple[int, ...]:
        out = []
        for X in reversed(self.factors):
            p, c = divmod(p, X.n)
            out.append(c)
        return tuple(reversed(out))

    def coordinates(self):
        return itertools.product(*(range(X.n) for X in self.factors))

    def rectangle(self, masks: Sequence[int]) -> int:
        """Point mask of a product of factor subsets."""
        out = 0
        for coords in itertools.product(*(members(m) for m in masks)):
            out |= 1 << self.encode(coords)
        return out

    def min_nbhd(self, coords: Sequence[int]) -> int:
        return self.rectangle([X.min_nbhds[c] for X, c in zip(self.factors, coords)])

    def projection(self, j: int) -> tuple[int, ...]:
        """Projection onto factor ``j`` as a point map."""
        return tuple(coords[j] for coords in self.coordinates())

    @cached_property
    def space(self) -> FiniteSpace:
        """Materialized product topology generated by the rectangle base of this mode."""
        if self.n > MAX_MATERIALIZED_POINTS:
            raise ResourceLimitError(f"will not materialize opens of a {self.n}-point product")
        limit = len(self.factors) if self.kappa is None or self.mode == PRODUCT else self.kappa - 1
        base = []
        for opens in itertools.product(*(X.sorted_opens for X in self.factors)):
            proper = sum(o != X.full for o, X in zip(opens, self.factors))
            if proper <= limit:
                base.append(self.rectangle(opens))
        return FiniteSpace.trusted(self.n, generate_opens(self.n, base, MAX_MATERIALIZED_OPENS))

    def to_json(self) -> dict:
        return {"factors": [X.to_json() for X in self.factors], "mode": self.mode, "kappa": self.kappa}


def product(factors: Sequence[FiniteSpace], mode: str = PRODUCT, kappa: int | None = None) -> ProductSpace:
    return ProductSpace(tuple(factors), mode, kappa)


def power(X: FiniteSpace, k: int) -> ProductSpace:
    return ProductSpace((X,) * k)


def _hits(prod: ProductSpace, seq: Sequence[Sequence[int]], y: Sequence[int]) -> int:
    """Indices i with ``seq[i]`` in the minimal neighbourhood of ``y``."""
    nbs = [X.min_nbhds[c] for X, c in zip(prod.factors, y)]
    out = 0
    for i, coords in enumerate(seq):
        if all(nb >> c & 1 for nb, c in zip(nbs, coords)):
            out |= 1 << i
    return out


def product_limit_points(prod: ProductSpace, seq: Sequence[Sequence[int]], F: FiniteFilter,
                         first_only: bool = False) -> list[tuple[int, ...]]:
    """F-limit points scanned over the whole product via minimal neighbourhoods.

    Independent of the projection law: each candidate point is tested directly.
    """
    if len(seq) != F.size:
        raise InputError("sequence length differs from the index size")
    out = []
    for y in prod.coordinates():
        if _hits(prod, seq, y) in F.members:
            out.append(y)
            if first_only:
                break
    return out


def projection_law_check(factors: Sequence[FiniteSpace], seq: Sequence[Sequence[int]], F: FiniteFilter) -> bool:
    """Does the product limit set being nonempty match every projection having a limit?"""
    prod = ProductSpace(tuple(factors))
    if prod.n <= MAX_MATERIALIZED_POINTS:
        whole = _limit_set(prod.space, [prod.encode(c) for c in seq], F) != 0
    else:
        whole = bool(product_limit_points(prod, seq, F, first_only=True))
    parts = all(_limit_set(X, [c[j] for c in seq], F) for j, X in enumerate(prod.factors))
    return whole == parts


# --- factorwise sequencewise compactness ----------------------------------------


@lru_cache(maxsize=None)
def good_masks(X: FiniteSpace, P: FilterFamily) -> dict[int, tuple[int, ...]]:
    """For each achievable set of members of P admitting a limit, the first sequence achieving it.

    Bit ``t`` of a key refers to ``P.filters[t]``.
    """
    k = P.filters[0].size
    out: dict[int, tuple[int, ...]] = {}
    for values in all_sequences(X, k):
        m = 0
        for t, F in enumerate(P):
            if _limit_set(X, values, F):
                m |= 1 << t
        out.setdefault(m, values)
    return out


def product_P_compact_factorwise(factors: Sequence[FiniteSpace], P: FilterFamily) -> Verdict:
    """Sequencewise P-compactness of a product, decided factor by factor.

    A product sequence has an F-limit iff every projection does, so the product
    fails exactly when some choice of factor sequences leaves no common member of P.
    """
    reach: dict[int, tuple] = {(1 << len(P)) - 1: ()}
    checked = 0
    for X in factors:
        opts = good_masks(X, P)
        nxt: dict[int, tuple] = {}
        for acc in sorted(reach):
            for m in sorted(opts):
                checked += 1
                nxt.setdefault(acc & m, reach[acc] + (opts[m],))
        reach = nxt
    if 0 in reach:
        seqs = reach[0]
        diagonal = [list(c) for c in zip(*seqs)]
        return Verdict(False, {"factor_sequences": [list(s) for s in seqs], "sequence": diagonal},
                       "factorwise", checked)
    return Verdict(True, None, "factorwise", checked)


def product_P_compact_direct(prod: ProductSpace, P: FilterFamily, max_sequences: int = 200_000) -> Verdict:
    """Brute force over all product sequences, limits found by scanning product points."""
    k = P.filters[0].size
    if prod.n ** k > max_sequences:
        raise ResourceLimitError(f"{prod.n}^{k} product sequences exceed {max_sequences}")
    coords = list(prod.coordinates())
    checked = 0
    for seq in itertools.product(coords, repeat=k):
        checked += 1
        if not any(product_limit_points(prod, seq, F, first_only=True) for F in P):
            return Verdict(False, {"sequence": [list(c) for c in seq]}, "direct", checked)
    return Verdict(True, None, "direct", checked)


# --- constructions from the product arguments -------------------------------------


@dataclass(frozen=True)
class DiagonalWitness:
    family: FilterFamily
    factors: tuple[FiniteSpace, ...]
    sequences: tuple[tuple[int, ...], ...]
    product: ProductSpace
    diagonal: tuple[tuple[int, ...], ...]
    checked: int

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "factors": [X.to_json() for X in self.factors],
            "sequences": [list(s) for s in self.sequences],
            "diagonal": [list(y) for y in self.diagonal],
        }


def diagonal_counterexample(P: FilterFamily, witnesses: Sequence[tuple[FiniteSpace, Sequence[int]]]) -> DiagonalWitness:
    """Product of one limitless witness per filter, with the diagonal sequence.

    Every member of P is then checked to have no limit of the diagonal anywhere
    in the product.
    """
    if len(witnesses) != len(P):
        raise InputError("need exactly one witness per filter")
    for F, (X, values) in zip(P, witnesses):
        if len(values) != F.size:
            raise InputError("witness sequence has the wrong length")
        if _limit_set(X, tuple(values), F):
            raise PreconditionError(f"witness for {F!r} has a limit point")
    factors = tuple(X for X, _ in witnesses)
    seqs = tuple(tuple(v) for _, v in witnesses)
    prod = ProductSpace(factors)
    diagonal = tuple(zip(*seqs))
    checked = 0
    for F in P:
        checked += prod.n
        found = product_limit_points(prod, diagonal, F, first_only=True)
        if found:
            raise InternalError(f"diagonal has an {F!r}-limit at {found[0]}")
    return DiagonalWitness(P, factors, seqs, prod, diagonal, checked)


def non_ultra_witness_sequence(X: FiniteSpace, F: FiniteFilter, c1: int, c2: int) -> IndexedSequence:
    """Least point of ``c1`` on one part of a non-ultra partition, least of ``c2`` on the other."""
    if is_ultrafilter(F):
        raise PreconditionError("filter is an ultrafilter")
    require_disjoint_closed(X, c1, c2)
    j1, _ = non_ultra_partition(F)
    p1, p2 = members(c1)[0], members(c2)[0]
    values = tuple(p1 if j1 >> i & 1 else p2 for i in range(F.size))
    if _limit_set(X, values, F):
        raise InternalError("witness sequence has a limit point")
    return IndexedSequence(F.index, values)


def split_to_discrete(X: FiniteSpace, c: int, c2: int) -> tuple[FiniteSpace, tuple[int, ...], tuple[int, ...]]:
    """Subspace on ``c | c2`` with the map sending ``c`` to 0 and ``c2`` to 1.

    Returns (subspace, embedding into X, map on subspace points).
    """
    require_disjoint_closed(X, c, c2)
    Y, emb = subspace(X, c | c2)
    f = tuple(0 if c >> x & 1 else 1 for x in emb)
    two = discrete(2)
    if not is_continuous(f, Y, two) or set(f) != {0, 1}:
        raise InternalError("split map is not a continuous surjection")
    return Y, emb, f


def chain_function(X: FiniteSpace, chain: Sequence[int]) -> tuple[tuple[int, ...], FiniteSpace]:
    """Count of chain members containing each point, as a map into the iit space on k+1 points."""
    for i, c in enumerate(chain):
        if not c:
            raise InputError("chain sets must be nonempty")
        if not X.is_closed(c):
            raise InputError(f"chain set {members(c)} is not closed")
        if i and c & ~chain[i - 1]:
            raise InputError("chain must be decreasing")
    f = tuple(sum(c >> x & 1 for c in chain) for x in range(X.n))
    target = iit_space(len(chain) + 1)
    if not is_continuous(f, X, target):
        raise InternalError("chain function is not continuous")
    return f, target
