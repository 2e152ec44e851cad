"""Strong simulation between PAs and its region-quantified variants for pPAs.

The distribution lifting is decided exactly by a rational max-flow check on
the bipartite graph induced by the candidate relation.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import region_samples, valuation_key
from .errors import EmptyRegion, IllDefinedValuationInRegion
from .model import PPA, WellDefinedness, instantiate, sort_key, well_defined
from .verify import Verdict


def _maxflow(source, sink, arcs):
    """Edmonds-Karp with exact rational capacities; returns the flow value."""
    capacity = {}
    adj = {}
    for u, v, cap in arcs:
        capacity[(u, v)] = capacity.get((u, v), Fraction(0)) + Fraction(cap)
        capacity.setdefault((v, u), Fraction(0))
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    flow = Fraction(0)
    while True:
        parent = {source: None}
        queue = [source]
        while queue and sink not in parent:
            u = queue.pop(0)
            for v in adj.get(u, []):
                if v not in parent and capacity.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        bottleneck = None
        v = sink
        while parent[v] is not None:
            u = parent[v]
            c = capacity[(u, v)]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            v = u
        v = sink
        while parent[v] is not None:
            u = parent[v]
            capacity[(u, v)] -= bottleneck
            capacity[(v, u)] += bottleneck
            v = u
        flow += bottleneck


def dist_leq(mu1, mu2, rel) -> bool:
    """Distribution lifting of a relation: mu1(A) <= mu2(rel(A)) for all A.

    Decided by checking that one unit of flow can be routed from mu1's support
    to mu2's support along related pairs.
    """
    mu1 = {s: Fraction(p) for s, p in mu1.items() if Fraction(p) != 0}
    mu2 = {s: Fraction(p) for s, p in mu2.items() if Fraction(p) != 0}
    total1 = sum(mu1.values(), Fraction(0))
    total2 = sum(mu2.values(), Fraction(0))
    if total1 > total2:
        return False
    pairs = set(rel)
    arcs = [("src", ("l", s), p) for s, p in mu1.items()]
    arcs += [(("r", t), "snk", p) for t, p in mu2.items()]
    for s in mu1:
        for t in mu2:
            if (s, t) in pairs:
                arcs.append((("l", s), ("r", t), total1))
    return _maxflow("src", "snk", arcs) == total1


def dist_leq_bruteforce(mu1, mu2, rel) -> bool:
    """Direct subset-quantified definition; exponential, for cross-checking."""
    mu1 = {s: Fraction(p) for s, p in mu1.items() if Fraction(p) != 0}
    mu2 = {s: Fraction(p) for s, p in mu2.items()}
    support = sorted(mu1, key=sort_key)
    pairs = set(rel)
    for mask in range(1 << len(support)):
        subset = [s for i, s in enumerate(support) if mask >> i & 1]
        lhs = sum((mu1[s] for s in subset), Fraction(0))
        image = {t for t in mu2 if any((s, t) in pairs for s in subset)}
        rhs = sum((mu2[t] for t in image), Fraction(0))
        if lhs > rhs:
            return False
    return True


def _pair_ok(n1: PPA, n2: PPA, s1, s2, rel) -> bool:
    """Matching clause of strong simulation for one pair."""
    for a1 in n1.enabled(s1):
        lab = n1.label[(s1, a1)]
        mu1 = n1.const_dist(s1, a1)
        matched = False
        for a2 in n2.enabled(s2):
            if n2.label[(s2, a2)] != lab:
                continue
            if dist_leq(mu1, n2.const_dist(s2, a2), rel):
                matched = True
                break
        if not matched:
            return False
    return True


def strong_sim(n1: PPA, n2: PPA):
    """Greatest strong simulation containing the initial pair, or None.

    Greatest-fixpoint computation: start from all pairs and repeatedly remove
    pairs violating the matching clause, in a deterministic order.
    """
    if not (n1.is_pa and n2.is_pa):
        raise ValueError("strong simulation is checked on parameter-free models")
    rel = {(s1, s2) for s1 in n1.states for s2 in n2.states}
    changed = True
    while changed:
        changed = False
        for pair in sorted(rel, key=sort_key):
            if not _pair_ok(n1, n2, pair[0], pair[1], rel):
                rel.discard(pair)
                changed = True
    if (n1.initial, n2.initial) not in rel:
        return None
    return frozenset(rel)


def is_strong_sim(n1: PPA, n2: PPA, rel) -> bool:
    """Check that a given relation is a strong simulation (with initial pair)."""
    rel = set(rel)
    if (n1.initial, n2.initial) not in rel:
        return False
    return all(_pair_ok(n1, n2, s1, s2, rel) for (s1, s2) in rel)


def _sim_samples(m1: PPA, m2: PPA, region, resolution):
    try:
        samples = region_samples(region, resolution)
    except EmptyRegion:
        return None
    for v in samples:
        for m in (m1, m2):
            if well_defined(m, v) is WellDefinedness.NEITHER:
                raise IllDefinedValuationInRegion(
                    f"sample {dict(sorted(v.items()))} ill-defined for a model"
                )
    return samples


def strong_sim_region(m1: PPA, m2: PPA, region, resolution=1) -> Verdict:
    """Per-valuation strong simulation; witnessing relations may differ."""
    samples = _sim_samples(m1, m2, region, resolution)
    if samples is None:
        return Verdict("holds", caveat="region denotes no valuation; vacuously holds")
    details = []
    for v in samples:
        rel = strong_sim(instantiate(m1, v), instantiate(m2, v))
        if rel is None:
            return Verdict("fails", witness={"valuation": v}, details=details)
        details.append({"valuation": valuation_key(v), "relation": sorted(rel, key=sort_key)})
    return Verdict("holds", details=details)


def robust_strong_sim(m1: PPA, m2: PPA, region, resolution=1):
    """Greatest single relation that simulates at every sampled valuation.

    Joint greatest fixpoint: a pair is removed as soon as it fails the
    matching clause at any sampled valuation.  Returns the relation or None.
    """
    samples = _sim_samples(m1, m2, region, resolution)
    if samples is None:
        return frozenset(
            (s1, s2) for s1 in m1.states for s2 in m2.states
        )
    instances = [(instantiate(m1, v), instantiate(m2, v)) for v in samples]
    rel = {(s1, s2) for s1 in m1.states for s2 in m2.states}
    changed = True
    while changed:
        changed = False
        for pair in sorted(rel, key=sort_key):
            for i1, i2 in instances:
                if not _pair_ok(i1, i2, pair[0], pair[1], rel):
                    rel.discard(pair)
                    changed = True
                    break
    if (m1.initial, m2.initial) not in rel:
        return None
    return frozenset(rel)
