"""Product-preservation conditions, the Comfort preorder, and covering compactness over catalogues.

Every check works on a finite catalogue.  Conditions quantifying over all
products are checked up to a factor-count and point-count bound; reports
say which verdicts are exact, bounded, or obtained via an implication.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .convergence import (
    Verdict,
    every_sequence_converges,
    is_F_compact,
    is_P_compact,
    is_sequentially_compact,
)
from .errors import InputError, ResourceLimitError
from .filters import FilterFamily, FiniteFilter, is_ultrafilter
from .products import (
    MAX_MATERIALIZED_POINTS,
    MAX_PRODUCT_POINTS,
    DiagonalWitness,
    ProductSpace,
    diagonal_counterexample,
    good_masks,
    power,
    product_P_compact_direct,
    product_P_compact_factorwise,
)
from .spaces import FiniteSpace, SpaceCatalogue, disjoint_closed_pair, members

EXACT = "exact"
BOUNDED = "bounded"
VIA_IMPLICATION = "via-implication"


@lru_cache(maxsize=None)
def f_compact(X: FiniteSpace, F: FiniteFilter) -> Verdict:
    return is_F_compact(X, F)


@lru_cache(maxsize=None)
def p_compact(X: FiniteSpace, P: FilterFamily) -> Verdict:
    return is_P_compact(X, P)


# --- Comfort preorder ----------------------------------------------------------


def comfort_leq(F: FiniteFilter, G: FiniteFilter, K: Sequence[FiniteSpace]) -> Verdict:
    """F <= G: every G-compact member of K is F-compact."""
    for pos, X in enumerate(K):
        if f_compact(X, G) and not f_compact(X, F):
            return Verdict(False, {"position": pos, "space": X.to_json()}, EXACT, pos + 1)
    return Verdict(True, None, EXACT, len(K))


@dataclass(frozen=True)
class ComfortReport:
    filters: tuple[FiniteFilter, ...]
    relation: tuple[tuple[bool, ...], ...]
    classes: tuple[tuple[int, ...], ...]
    minimum: int | None

    def to_json(self) -> dict:
        return {
            "filters": [F.to_json() for F in self.filters],
            "relation": [[int(b) for b in row] for row in self.relation],
            "classes": [list(c) for c in self.classes],
            "minimum": self.minimum,
        }


def comfort_report(filters: Sequence[FiniteFilter], K: Sequence[FiniteSpace]) -> ComfortReport:
    """Relation matrix, equivalence classes in first-appearance order, and the least class if any."""
    filters = tuple(filters)
    if not filters:
        raise InputError("need at least one filter")
    rel = tuple(tuple(bool(comfort_leq(F, G, K)) for G in filters) for F in filters)
    classes: list[list[int]] = []
    for i in range(len(filters)):
        for c in classes:
            j = c[0]
            if rel[i][j] and rel[j][i]:
                c.append(i)
                break
        else:
            classes.append([i])
    minimum = None
    for ci, c in enumerate(classes):
        if all(rel[c[0]][d[0]] for d in classes):
            minimum = ci
            break
    return ComfortReport(filters, rel, tuple(tuple(c) for c in classes), minimum)


# --- bounded products ------------------------------------------------------------


def _minimal(masks) -> tuple[int, ...]:
    ms = sorted(set(masks))
    return tuple(m for m in ms if not any(o != m and o & m == o for o in ms))


@dataclass(frozen=True)
class ProductScan:
    value: bool
    checked: int
    skipped: int
    witness: tuple[int, ...] | None = None  # factor positions of the first failing product

    @property
    def method(self) -> str:
        return BOUNDED if self.skipped == 0 else BOUNDED + "-partial"


def scan_products(members_: Sequence[FiniteSpace], P: FilterFamily, min_factors: int, max_factors: int,
                  max_points: int = MAX_PRODUCT_POINTS) -> ProductScan:
    """Is every product of ``min_factors..max_factors`` members (with repetition) P-compact?

    Decided factorwise through the projection law; products above
    ``max_points`` points are skipped and counted.
    """
    opts = [_minimal(good_masks(X, P)) for X in members_]
    full = (1 << len(P)) - 1
    checked = skipped = 0
    first_bad = None

    def dfs(start: int, chosen: tuple[int, ...], reach: frozenset[int], size: int) -> None:
        nonlocal checked, skipped, first_bad
        depth = len(chosen)
        if depth >= min_factors and depth:
            checked += 1
            if 0 in reach and first_bad is None:
                first_bad = chosen
        if depth == max_factors:
            return
        for j in range(start, len(members_)):
            nsize = size * members_[j].n
            if nsize > max_points:
                skipped += 1
                continue
            nreach = frozenset(_minimal(a & m for a in reach for m in opts[j]))
            dfs(j, chosen + (j,), nreach, nsize)

    if members_:
        dfs(0, (), frozenset({full}), 1)
    return ProductScan(first_bad is None, checked, skipped, first_bad)


# --- product preservation ----------------------------------------------------------


@dataclass
class Thm21Report:
    family: FilterFamily
    catalogue: tuple[FiniteSpace, ...]
    p_compact: tuple[bool, ...]
    cond3: int | None
    cond3_filters: tuple[int, ...]
    cond2: ProductScan
    cond1: ProductScan
    cond1_method: str
    ultrafilter_necessity: bool
    ultrafilter_clause_triggered: bool
    counterexample: DiagonalWitness | None
    counterexample_checked: dict | None = None
    bounded: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """(3) agrees with the bounded (1) and (2), and a failing (3) carries its counterexample."""
        if self.cond3 is not None:
            return self.cond1.value and self.cond2.value and self.ultrafilter_necessity
        return self.counterexample is not None and not self.cond2.value

    def to_json(self) -> dict:
        P = self.family
        return {
            "family": P.to_json(),
            "catalogue": [X.to_json() for X in self.catalogue],
            "p_compact": list(self.p_compact),
            "cond3": None if self.cond3 is None else P.filters[self.cond3].to_json(),
            "cond3_filters": [P.filters[t].to_json() for t in self.cond3_filters],
            "cond3_method": EXACT,
            "cond2": _scan_json(self.cond2),
            "cond1": {**_scan_json(self.cond1), "method": self.cond1_method},
            "ultrafilter_necessity": {"value": self.ultrafilter_necessity,
                                      "triggered": self.ultrafilter_clause_triggered},
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
            "counterexample_check": self.counterexample_checked,
            "bounded": self.bounded,
            "consistent": self.consistent,
            "notes": self.notes,
        }


def _scan_json(s: ProductScan) -> dict:
    return {"value": s.value, "method": s.method, "checked": s.checked, "skipped": s.skipped,
            "witness": None if s.witness is None else list(s.witness)}


def _cond3_filters(K: Sequence[FiniteSpace], P: FilterFamily, pc: Sequence[bool]) -> tuple[int, ...]:
    return tuple(t for t, F in enumerate(P) if all(bool(f_compact(X, F)) == pc[i] for i, X in enumerate(K)))


def thm21_check(K: Sequence[FiniteSpace] | SpaceCatalogue, P: FilterFamily, product_bound: int | None = None,
                max_points: int = MAX_PRODUCT_POINTS, direct_limit: int = 20_000) -> Thm21Report:
    """Decide the product-preservation conditions for a catalogue and a filter family.

    Condition (3) is decided exactly.  (2) scans products of exactly |P|
    P-compact members, (1) products of up to ``product_bound`` of them.  When
    (3) fails the diagonal product is built from per-filter witnesses.
    """
    K = tuple(K)
    if not isinstance(P.filters[0], FiniteFilter):
        raise InputError("thm21 needs a family of finite filters")
    bound = len(P) if product_bound is None else product_bound
    pc = tuple(bool(p_compact(X, P)) for X in K)
    good = [X for X, ok in zip(K, pc) if ok]
    cond3s = _cond3_filters(K, P, pc)
    cond3 = cond3s[0] if cond3s else None
    cond2 = scan_products(good, P, len(P), len(P), max_points)
    cond1 = scan_products(good, P, 1, bound, max_points)
    notes = []
    report = Thm21Report(P, K, pc, cond3, cond3s, cond2, cond1,
                         VIA_IMPLICATION if cond3 is not None else BOUNDED,
                         True, False, None, None, bounded=bool(cond1.skipped or cond2.skipped), notes=notes)

    if cond3 is not None:
        trigger = any(ok and disjoint_closed_pair(X) is not None for X, ok in zip(K, pc))
        report.ultrafilter_clause_triggered = trigger
        if trigger:
            report.ultrafilter_necessity = all(is_ultrafilter(P.filters[t]) for t in cond3s)
        if not good:
            notes.append("no member of the catalogue is P-compact; (3) holds vacuously")
        return report

    witnesses = []
    for F in P:
        for X, ok in zip(K, pc):
            v = f_compact(X, F)
            if ok and not v:
                witnesses.append((X, tuple(v.witness["sequence"])))
                break
    try:
        dw = diagonal_counterexample(P, witnesses)
    except ResourceLimitError as exc:
        report.bounded = True
        notes.append(f"diagonal product not built: {exc}")
        return report
    report.counterexample = dw
    check = {"diagonal_limits_scanned": dw.checked}
    k = P.filters[0].size
    if dw.product.n ** k <= direct_limit:
        direct = product_P_compact_direct(dw.product, P, direct_limit)
        check["direct"] = {"value": direct.value, "checked": direct.checked}
    report.counterexample_checked = check
    return report


def cor22_check(K: Sequence[FiniteSpace], P: FilterFamily, product_bound: int | None = None,
                max_points: int = MAX_PRODUCT_POINTS) -> dict:
    """All products of members vs products of |P| members vs a single filter making every member compact."""
    K = tuple(K)
    bound = len(P) if product_bound is None else product_bound
    c1 = scan_products(K, P, 1, bound, max_points)
    c2 = scan_products(K, P, len(P), len(P), max_points)
    c3 = next((t for t, F in enumerate(P) if all(f_compact(X, F) for X in K)), None)
    refuting = None
    for s in (c2, c1):
        if s.witness is not None:
            refuting = list(s.witness)
            break
    return {
        "cond1": _scan_json(c1),
        "cond2": _scan_json(c2),
        "cond3": None if c3 is None else P.filters[c3].to_json(),
        "refuting_product": refuting,
        "equivalent": c1.value == c2.value == (c3 is not None),
    }


def cor23_check(X: FiniteSpace, P: FilterFamily, power_bound: int | None = None,
                direct_limit: int = 20_000) -> dict:
    """X^|P| P-compact iff X is F-compact for some F in P; plus the ultrafilter clause."""
    k = len(P)
    bound = k if power_bound is None else power_bound
    if X.n ** k > MAX_PRODUCT_POINTS:
        return {"bounded": True, "note": f"{X.n}^{k} points exceed the product limit"}
    pw = product_P_compact_factorwise((X,) * k, P)
    out = {"power_compact": pw.value, "power_method": pw.method}
    prod = power(X, k)
    if prod.n ** P.filters[0].size <= direct_limit:
        direct = product_P_compact_direct(prod, P, direct_limit)
        out["power_compact_direct"] = direct.value
    single = [t for t, F in enumerate(P) if f_compact(X, F)]
    out["f_compact_filters"] = [P.filters[t].to_json() for t in single]
    powers = scan_products([X], P, 1, bound)
    out["all_powers_compact"] = _scan_json(powers)
    out["equivalent"] = pw.value == bool(single) and (powers.value or not pw.value)
    if disjoint_closed_pair(X) is not None and single:
        out["ultrafilter_clause"] = all(is_ultrafilter(P.filters[t]) for t in single)
    return out


# --- covering compactness ----------------------------------------------------------


def covering_compact(X: FiniteSpace, m: int, n: int) -> Verdict:
    """Every open cover with at most n members has a subcover with fewer than m members."""
    if m < 1:
        raise InputError("m must be >= 1")
    opens = [u for u in X.sorted_opens if u]
    checked = 0
    for size in range(1, n + 1):
        for cover in itertools.combinations(opens, size):
            if _union(cover) != X.full:
                continue
            checked += 1
            if not any(_union(sub) == X.full
                       for r in range(1, min(m - 1, size) + 1)
                       for sub in itertools.combinations(cover, r)):
                return Verdict(False, {"cover": [list(members(u)) for u in cover]}, EXACT, checked)
    return Verdict(True, None, EXACT, checked)


def _union(sets) -> int:
    acc = 0
    for s in sets:
        acc |= s
    return acc


# --- sequential compactness of products --------------------------------------------


def _all_converge_product(prod: ProductSpace) -> bool:
    full = (1 << prod.n) - 1
    return any(prod.min_nbhd(y) == full for y in prod.coordinates())


def cor54_check(T: Sequence[FiniteSpace], power_bound: int = 2, max_points: int = 512) -> dict:
    """Finite-scale reading of the four sequential-compactness conditions.

    The splitting-number power in condition (2) has no finite counterpart;
    powers up to ``power_bound`` stand in for it and are labelled as such.
    """
    T = tuple(T)
    rows = []
    for X in T:
        esc = every_sequence_converges(X)
        powers_sc = []
        for k in range(1, power_bound + 1):
            pw = power(X, k)
            if pw.n > MAX_MATERIALIZED_POINTS:
                powers_sc.append({"k": k, "value": True, "method": "finite-space"})
            else:
                powers_sc.append({"k": k, "value": is_sequentially_compact(pw.space).value,
                                  "method": "EP-restricted"})
        rows.append({"space": X.to_json(), "every_sequence_converges": esc.value,
                     "powers_sequentially_compact": powers_sc})
    cond3 = all(r["every_sequence_converges"] for r in rows)
    cond2 = all(p["value"] for r in rows for p in r["powers_sequentially_compact"])

    cond4 = True
    cond1 = True
    checked = skipped = 0
    for r in range(1, power_bound + 1):
        for combo in itertools.combinations_with_replacement(range(len(T)), r):
            factors = [T[i] for i in combo]
            size = 1
            for f in factors:
                size *= f.n
            if size > max_points:
                skipped += 1
                continue
            checked += 1
            prod = ProductSpace(tuple(factors))
            cond4 = cond4 and _all_converge_product(prod)
            # finite products are finite spaces, hence sequentially compact
            if prod.n <= MAX_MATERIALIZED_POINTS:
                cond1 = cond1 and is_sequentially_compact(prod.space).value
    notes = ["condition (2) uses powers up to the configured bound as a finite surrogate "
             "for the splitting-number power"]
    if cond1 and not cond3:
        notes.append("bounded (1) holds while (3) fails: finite products of finite spaces are "
                     "always sequentially compact, the separation needs splitting-number many factors")
    return {
        "spaces": rows,
        "cond1_bounded": cond1,
        "cond2_surrogate": cond2,
        "cond3": cond3,
        "cond4_bounded": cond4,
        "products_checked": checked,
        "products_skipped": skipped,
        "power_bound": power_bound,
        "cond3_iff_cond4": cond3 == cond4,
        "cond3_implies_cond1": (not cond3) or cond1,
        "finite_surrogate": True,
        "notes": notes,
    }
