"""Self-contained certificates and the registry of exhaustive checks that emit them.

A certificate embeds its full inputs, so re-running the named check on those
inputs must reproduce it exactly; that is what ``verify`` does.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

from .convergence import (
    every_sequence_converges,
    is_F_compact,
    is_P_compact,
    is_P_pseudocompact,
    is_sequentially_compact,
    limit_set,
    limit_set_definitional,
    limit_set_shortcut,
    all_sequences,
)
from .errors import InputError
from .filters import FilterFamily, FiniteFilter, enumerate_filters, is_ultrafilter
from .products import non_ultra_witness_sequence, projection_law_check
from .spaces import (
    HOMEOMORPHISM,
    LABELED,
    FiniteSpace,
    SpaceCatalogue,
    disjoint_closed_pair,
    enumerate_topologies,
    is_m_ultraconnected,
    is_ultraconnected,
    members,
)
from .theorems import comfort_leq, thm21_check


@dataclass(frozen=True)
class Certificate:
    claim: str
    inputs: dict
    value: bool
    witness: dict | None
    method: str
    checked: int

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            return cls(data["claim"], data["inputs"], bool(data["value"]), data["witness"],
                       data["method"], int(data["checked"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc


def load_catalogue(data) -> SpaceCatalogue:
    """Explicit catalogue JSON, or ``{"enumerate": {"max_points": n, "dedup": ...}}``."""
    if isinstance(data, dict) and "enumerate" in data:
        opts = data["enumerate"]
        dedup = opts.get("dedup", LABELED)
        out = []
        for n in range(1, int(opts["max_points"]) + 1):
            out.extend(enumerate_topologies(n, dedup).spaces)
        return SpaceCatalogue(tuple(out), dedup)
    return SpaceCatalogue.from_json(data)


# --- evaluators: inputs -> certificate ------------------------------------------


def _limit_oracle(inp: dict) -> Certificate:
    X = FiniteSpace.from_json(inp["space"])
    k = int(inp["index_size"])
    checked = 0
    for F in enumerate_filters(k):
        for values in all_sequences(X, k):
            checked += 1
            a = limit_set_definitional(X, values, F)
            b = limit_set_shortcut(X, values, F)
            if a != b:
                w = {"filter": F.to_json(), "sequence": list(values),
                     "definitional": list(members(a)), "shortcut": list(members(b))}
                return Certificate("limit-oracle", inp, False, w, "definitional", checked)
    return Certificate("limit-oracle", inp, True, None, "definitional", checked)


def _fcompact_structure(inp: dict) -> Certificate:
    X = FiniteSpace.from_json(inp["space"])
    F = FiniteFilter.from_json(inp["filter"])
    v = is_F_compact(X, F)
    m = F.core_size
    u = is_m_ultraconnected(X, m)
    w = {"f_compact": v.value, "core_size": m, "m_ultraconnected": u,
         "sequence": v.witness["sequence"] if v.witness else None}
    return Certificate("fcompact-structure", inp, v.value == u, w, "definitional", v.checked)


def _lemma51(inp: dict) -> Certificate:
    X = FiniteSpace.from_json(inp["space"])
    esc = every_sequence_converges(X)
    ultra, pair = is_ultraconnected(X)
    sc = is_sequentially_compact(X)
    w = {"every_sequence_converges": esc.value, "ultraconnected": ultra,
         "sequentially_compact": sc.value, "convergence_witness": esc.witness,
         "disjoint_closed_pair": None if pair is None else [list(members(c)) for c in pair]}
    return Certificate("lemma51", inp, esc.value == (ultra and sc.value), w, "EP-restricted",
                       esc.checked + sc.checked)


def _projection_law(inp: dict) -> Certificate:
    factors = [FiniteSpace.from_json(s) for s in inp["factors"]]
    k = int(inp["index_size"])
    coords = list(itertools.product(*(range(X.n) for X in factors)))
    checked = 0
    for F in enumerate_filters(k):
        for seq in itertools.product(coords, repeat=k):
            checked += 1
            if not projection_law_check(factors, seq, F):
                w = {"filter": F.to_json(), "sequence": [list(c) for c in seq]}
                return Certificate("projection-law", inp, False, w, "definitional", checked)
    return Certificate("projection-law", inp, True, None, "definitional", checked)


def _ultrafilter_necessity(inp: dict) -> Certificate:
    X = FiniteSpace.from_json(inp["space"])
    F = FiniteFilter.from_json(inp["filter"])
    c1, c2 = disjoint_closed_pair(X)
    seq = non_ultra_witness_sequence(X, F, c1, c2)
    lim = limit_set(X, seq, F)
    w = {"closed_pair": [list(members(c1)), list(members(c2))], "sequence": list(seq.values)}
    return Certificate("ultrafilter-necessity", inp, lim == 0, w, "definitional", 1)


def _pseudocompact(inp: dict) -> Certificate:
    X = FiniteSpace.from_json(inp["space"])
    P = FilterFamily.from_json(inp["family"])
    c = is_P_compact(X, P)
    p = is_P_pseudocompact(X, P)
    w = {"p_compact": c.value, "p_pseudocompact": p.value, "pseudo_witness": p.witness}
    return Certificate("pseudocompact", inp, (not c.value) or p.value, w, "definitional",
                       c.checked + p.checked)


def _thm21(inp: dict) -> Certificate:
    K = load_catalogue(inp["catalogue"])
    P = FilterFamily.from_json(inp["family"])
    rep = thm21_check(K.spaces, P, inp.get("product_bound"))
    js = rep.to_json()
    w = {k: js[k] for k in ("cond3", "cond2", "cond1", "ultrafilter_necessity", "counterexample",
                            "counterexample_check")}
    return Certificate("thm21", inp, rep.consistent, w, "exact" if not rep.bounded else "bounded",
                       rep.cond1.checked + rep.cond2.checked)


def _comfort_collapse(inp: dict) -> Certificate:
    F = FiniteFilter.from_json(inp["F"])
    G = FiniteFilter.from_json(inp["G"])
    K = load_catalogue(inp["catalogue"])
    v = comfort_leq(F, G, K.spaces)
    expected = F.core_size <= G.core_size
    w = {"leq": v.value, "core_sizes": [F.core_size, G.core_size], "separating": v.witness}
    return Certificate("comfort-collapse", inp, v.value == expected, w, "exact", v.checked)


EVALUATORS: dict[str, Callable[[dict], Certificate]] = {
    "limit-oracle": _limit_oracle,
    "fcompact-structure": _fcompact_structure,
    "lemma51": _lemma51,
    "projection-law": _projection_law,
    "ultrafilter-necessity": _ultrafilter_necessity,
    "pseudocompact": _pseudocompact,
    "thm21": _thm21,
    "comfort-collapse": _comfort_collapse,
}

ALIASES = {"f-compact-not-core-ultraconnected": "fcompact-structure"}


def resolve(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in EVALUATORS:
        raise InputError(f"unknown predicate {name!r}; known: {sorted(EVALUATORS) + sorted(ALIASES)}")
    return name


def evaluate(name: str, inputs: dict) -> Certificate:
    return EVALUATORS[resolve(name)](inputs)


def verify(cert: Certificate | dict) -> bool:
    """Re-run the certificate's check on its embedded inputs and compare."""
    if isinstance(cert, dict):
        cert = Certificate.from_json(cert)
    return evaluate(cert.claim, cert.inputs).dumps() == cert.dumps()


# --- instance generators ---------------------------------------------------------


def _sizes(points: int | None, max_points: int | None) -> range:
    if points is not None:
        return range(points, points + 1)
    return range(1, (max_points or 3) + 1)


def _spaces(points, max_points, dedup=LABELED) -> Iterator[FiniteSpace]:
    for n in _sizes(points, max_points):
        yield from enumerate_topologies(n, dedup)


def _families(k: int, max_family: int | None = None) -> Iterator[FilterFamily]:
    fs = enumerate_filters(k)
    top = len(fs) if max_family is None else min(max_family, len(fs))
    for r in range(1, top + 1):
        for combo in itertools.combinations(fs, r):
            yield FilterFamily(combo)


def instances(name: str, points: int | None = None, max_points: int | None = None,
              max_index: int = 2, dedup: str = LABELED) -> list[dict]:
    """Deterministic list of check inputs for the given bounds."""
    name = resolve(name)
    idx = range(1, max_index + 1)
    out: list[dict] = []
    if name == "limit-oracle":
        out = [{"space": X.to_json(), "index_size": k} for X in _spaces(points, max_points, dedup) for k in idx]
    elif name == "fcompact-structure":
        out = [{"space": X.to_json(), "filter": F.to_json()}
               for X in _spaces(points, max_points, dedup) for k in idx for F in enumerate_filters(k)]
    elif name == "lemma51":
        out = [{"space": X.to_json()} for X in _spaces(points, max_points, dedup)]
    elif name == "projection-law":
        spaces = list(_spaces(points, max_points, dedup))
        out = [{"factors": [X.to_json(), Y.to_json()], "index_size": k}
               for X in spaces for Y in spaces for k in idx]
    elif name == "ultrafilter-necessity":
        out = [{"space": X.to_json(), "filter": F.to_json()}
               for X in _spaces(points, max_points, dedup) if disjoint_closed_pair(X) is not None
               for k in idx for F in enumerate_filters(k) if not is_ultrafilter(F)]
    elif name == "pseudocompact":
        out = [{"space": X.to_json(), "family": P.to_json()}
               for X in _spaces(points, max_points, dedup) for k in idx for P in _families(k)]
    elif name == "thm21":
        spaces = list(_spaces(points, max_points, HOMEOMORPHISM))
        cats = [c for r in (1, 2) for c in itertools.combinations(spaces, r)]
        out = [{"catalogue": [X.to_json() for X in cat], "family": P.to_json()}
               for cat in cats for k in idx for P in _families(k)]
    elif name == "comfort-collapse":
        cat = {"enumerate": {"max_points": max_points or points or 3, "dedup": dedup}}
        fs = [F for k in idx for F in enumerate_filters(k)]
        out = [{"F": F.to_json(), "G": G.to_json(), "catalogue": cat} for F in fs for G in fs]
    return out
