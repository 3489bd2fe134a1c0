"""Brute-force oracles, written independently of the library code paths they check."""

from __future__ import annotations

import itertools


def subsets(n):
    return range(1 << n)


def brute_force_topologies(n):
    """Every family of subsets of {0..n-1} that contains 0 and the full set and is closed under union and meet."""
    full = (1 << n) - 1
    others = [s for s in subsets(n) if s not in (0, full)]
    out = []
    for bits in range(1 << len(others)):
        fam = {0, full} | {others[i] for i in range(len(others)) if bits >> i & 1}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            out.append(frozenset(fam))
    return out


def permute_family(fam, perm):
    def pm(s):
        return sum(1 << perm[x] for x in range(len(perm)) if s >> x & 1)
    return frozenset(pm(s) for s in fam)


def brute_force_classes(n, families):
    """Homeomorphism classes by trying every permutation."""
    seen = set()
    reps = []
    for fam in families:
        if fam in seen:
            continue
        reps.append(fam)
        for perm in itertools.permutations(range(n)):
            seen.add(permute_family(fam, perm))
    return reps


def closed_sets_of(n, opens):
    full = (1 << n) - 1
    return [full ^ u for u in opens]


def closure_by_scan(n, opens, a):
    """Smallest closed superset, found by scanning all closed sets."""
    best = (1 << n) - 1
    for c in closed_sets_of(n, opens):
        if c & a == a and bin(c).count("1") < bin(best).count("1"):
            best = c
    return best


def brute_force_filters(k):
    """All proper filters on k indices found by scanning every family of subsets."""
    full = (1 << k) - 1
    sets = list(range(1, 1 << k))
    out = []
    for bits in range(1, 1 << len(sets)):
        fam = {sets[i] for i in range(len(sets)) if bits >> i & 1}
        if full not in fam:
            continue
        if not all(a & b in fam for a in fam for b in fam):
            continue
        if not all(b in fam for a in fam for b in sets if a & b == a):
            continue
        out.append(frozenset(fam))
    return out


def limit_points_by_definition(n, opens, values, members):
    """x is a limit iff for every open U containing x the hit set is in the family."""
    out = set()
    for x in range(n):
        ok = True
        for u in opens:
            if u >> x & 1:
                hits = sum(1 << i for i, v in enumerate(values) if u >> v & 1)
                if hits not in members:
                    ok = False
                    break
        if ok:
            out.add(x)
    return out


def omega_limit_by_unrolling(n, opens, prefix, cycle, z_prefix, z_cycle):
    """Frechet-on-Z limit points from an unrolled window.

    The window is prefix + 3*lcm long; ``Z minus W`` is declared finite when it
    has no element in the last two periods of the window.
    """
    import math

    t = max(len(prefix), len(z_prefix))
    p = math.lcm(len(cycle), len(z_cycle))
    length = t + 3 * p

    def x(m):
        return prefix[m] if m < len(prefix) else cycle[(m - len(prefix)) % len(cycle)]

    def inz(m):
        return z_prefix[m] if m < len(z_prefix) else z_cycle[(m - len(z_prefix)) % len(z_cycle)]

    out = set()
    for y in range(n):
        ok = True
        for u in opens:
            if not u >> y & 1:
                continue
            tail = [m for m in range(t + p, length) if inz(m) and not u >> x(m) & 1]
            if tail:
                ok = False
                break
        if ok:
            out.add(y)
    return out


def brute_force_preorder_topologies(n):
    """Topologies as up-set families of every transitive reflexive relation on n points."""
    rows_for = [[r for r in range(1 << n) if r >> x & 1] for x in range(n)]
    out = []
    for rows in itertools.product(*rows_for):
        if all(rows[y] & ~rows[x] == 0 for x in range(n) for y in range(n) if rows[x] >> y & 1):
            fam = frozenset(
                s for s in range(1 << n)
                if all(rows[x] & ~s == 0 for x in range(n) if s >> x & 1)
            )
            out.append(fam)
    return out
