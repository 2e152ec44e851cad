"""The assume-guarantee rule engine.

Each rule checks its alphabet side conditions, dispatches premise checks to
the verify/simulate modules, and assembles a conclusion with a confidence
label.  Fairness-quantified rule variants are constructible only with
externally attested premises and always carry the attested confidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Polynomial, region_intersect
from .errors import SideConditionError
from .model import alphabet_extend, compose
from .robust import alphabet_extend_rpa, pa_reduce
from .simulate import robust_strong_sim, strong_sim_region
from .verify import (
    ProbObjective,
    Verdict,
    ag_triple_check,
    is_safe_query,
    monotone_check,
    query_alphabet,
    region_sat,
    reward_objective,
    _checked_samples,
)
from .algebra import FiniteRegion

CHECKED = "checked-per-sample"
ATTESTED = "attested"


@dataclass
class Premise:
    kind: str  # region-sat | ag-triple | monotone | sim-leq | attested
    description: str
    verdict: Verdict | None = None
    attestation: str | None = None

    @property
    def ok(self) -> bool:
        if self.attestation is not None:
            return True
        return self.verdict is not None and self.verdict.holds


@dataclass
class RuleApplication:
    rule: str
    premises: list
    side_conditions: list
    conclusion: dict | None
    confidence: str = CHECKED
    status: str = "concluded"
    failure: object = None

    @property
    def concluded(self) -> bool:
        return self.status == "concluded"


def _finish(rule, premises, side_conditions, conclusion, confidence=CHECKED):
    for prem in premises:
        if not prem.ok:
            return RuleApplication(
                rule=rule,
                premises=premises,
                side_conditions=side_conditions,
                conclusion=None,
                confidence=confidence,
                status="premise-failed",
                failure=prem.verdict.witness if prem.verdict else None,
            )
    return RuleApplication(rule, premises, side_conditions, conclusion, confidence)


def _require(cond, message):
    if not cond:
        raise SideConditionError(message)


def _attested_premises(descriptions, notes):
    if notes is None or len(notes) != len(descriptions):
        raise ValueError("fairness variants need one attestation note per premise")
    return [
        Premise(kind="attested", description=d, attestation=n)
        for d, n in zip(descriptions, notes)
    ]


@dataclass(frozen=True)
class FairnessAttestation:
    """External evidence for fairness-quantified premises; never auto-checked."""

    fairness_sets: tuple
    notes: tuple


def conjoin(q1, q2) -> tuple:
    """Conjunction of mo-queries is plain set union."""
    out = list(q1)
    for obj in q2:
        if obj not in out:
            out.append(obj)
    return tuple(out)


# ---------------------------------------------------------------------------
# Asymmetric and circular rules
# ---------------------------------------------------------------------------

def apply_asymmetric(m1, m2, r1, r2, assumption, guarantee,
                     resolution=1, fairness=None) -> RuleApplication:
    sig_a, sig_g = query_alphabet(assumption), query_alphabet(guarantee)
    _require(sig_a <= m1.alphabet, "assumption alphabet must lie inside component 1's")
    _require(
        sig_g <= m2.alphabet | sig_a,
        "guarantee alphabet must lie inside component 2's plus the assumption's",
    )
    side = [
        f"{sorted(sig_a)} within component-1 alphabet",
        f"{sorted(sig_g)} within component-2 alphabet plus assumption's",
    ]
    conclusion = {
        "kind": "region-sat",
        "model": "m1 || m2",
        "region": region_intersect(r1, r2),
        "query": guarantee,
        "strategy_class": "cmp",
    }
    if fairness is not None:
        premises = _attested_premises(
            ["component 1 satisfies the assumption (fair)",
             "component 2 triple assumption => guarantee (fair)"],
            fairness.notes,
        )
        return _finish("asymmetric-fair", premises, side, conclusion, ATTESTED)
    _require(is_safe_query(assumption) and is_safe_query(guarantee),
             "the complete-strategy asymmetric rule needs safety mo-queries")
    p1 = Premise(
        "region-sat",
        "component 1 satisfies the assumption on its region",
        region_sat(m1, r1, assumption, "cmp", resolution),
    )
    p2 = Premise(
        "ag-triple",
        "extended component 2 satisfies assumption => guarantee",
        ag_triple_check(
            alphabet_extend(m2, sig_a), r2, assumption, guarantee, "prt", resolution
        ),
    )
    return _finish("asymmetric", [p1, p2], side, conclusion)


def apply_circular(m1, m2, r1, r2, r3, a1, a2, guarantee,
                   resolution=1, fairness=None) -> RuleApplication:
    s1, s2, sg = query_alphabet(a1), query_alphabet(a2), query_alphabet(guarantee)
    _require(s1 <= m2.alphabet, "first assumption alphabet must lie inside component 2's")
    _require(s2 <= m1.alphabet | s1,
             "second assumption alphabet must lie inside component 1's plus the first's")
    _require(sg <= m2.alphabet | s2,
             "guarantee alphabet must lie inside component 2's plus assumption 2's")
    side = ["assumption-1 within component 2",
            "assumption-2 within component 1 + assumption-1",
            "guarantee within component 2 + assumption-2"]
    conclusion = {
        "kind": "region-sat",
        "model": "m1 || m2",
        "region": region_intersect(region_intersect(r1, r2), r3),
        "query": guarantee,
        "strategy_class": "cmp",
    }
    if fairness is not None:
        premises = _attested_premises(
            ["triple on component 1 (fair)", "triple on component 2 (fair)",
             "component 2 satisfies assumption 1 (fair)"],
            fairness.notes,
        )
        return _finish("circular-fair", premises, side, conclusion, ATTESTED)
    _require(all(is_safe_query(q) for q in (a1, a2, guarantee)),
             "the complete-strategy circular rule needs safety mo-queries")
    p1 = Premise(
        "ag-triple", "assumption-1 => assumption-2 on extended component 1",
        ag_triple_check(alphabet_extend(m1, s1), r1, a1, a2, "prt", resolution),
    )
    p2 = Premise(
        "ag-triple", "assumption-2 => guarantee on extended component 2",
        ag_triple_check(alphabet_extend(m2, s2), r2, a2, guarantee, "prt", resolution),
    )
    p3 = Premise(
        "region-sat", "component 2 satisfies assumption 1",
        region_sat(m2, r3, a1, "cmp", resolution),
    )
    return _finish("circular", [p1, p2, p3], side, conclusion)


def apply_asym_n(models, regions, assumptions, guarantee,
                 resolution=1) -> RuleApplication:
    n = len(models)
    _require(n >= 2, "the chained rule needs at least two components")
    if len(regions) != n or len(assumptions) != n - 1:
        raise ValueError("need one region per component and n-1 assumptions")
    queries = list(assumptions) + [guarantee]
    _require(query_alphabet(queries[0]) <= models[0].alphabet,
             "first assumption alphabet must lie inside component 1's")
    for i in range(1, n):
        prev = query_alphabet(queries[i - 1])
        _require(
            query_alphabet(queries[i]) <= models[i].alphabet | prev,
            f"query {i} alphabet must lie inside component {i + 1}'s plus the previous",
        )
    _require(all(is_safe_query(q) for q in queries), "chained rule needs safety queries")
    side = [f"{n}-component alphabet chain"]
    premises = [
        Premise(
            "region-sat", "component 1 satisfies the first assumption",
            region_sat(models[0], regions[0], queries[0], "cmp", resolution),
        )
    ]
    for i in range(1, n):
        prev_alpha = query_alphabet(queries[i - 1])
        premises.append(
            Premise(
                "ag-triple",
                f"component {i + 1} triple link",
                ag_triple_check(
                    alphabet_extend(models[i], prev_alpha),
                    regions[i], queries[i - 1], queries[i], "prt", resolution,
                ),
            )
        )
    region = regions[0]
    for r in regions[1:]:
        region = region_intersect(region, r)
    conclusion = {
        "kind": "region-sat",
        "model": " || ".join(f"m{i + 1}" for i in range(n)),
        "region": region,
        "query": guarantee,
        "strategy_class": "cmp",
    }
    return _finish("asymmetric-n", premises, side, conclusion)


# ---------------------------------------------------------------------------
# Conjunction / interleaving / reward sum
# ---------------------------------------------------------------------------

def apply_conjunction(m, r1, r2, a1, g1, a2, g2,
                      resolution=1, fairness=None) -> RuleApplication:
    _require(all(is_safe_query(q) for q in (a1, g1, a2, g2)) or fairness is not None,
             "the partial-strategy conjunction rule needs safety mo-queries")
    for a, g in ((a1, g1), (a2, g2)):
        _require(
            query_alphabet(g) <= m.alphabet | query_alphabet(a),
            "guarantee alphabets must lie inside the model's plus its assumption's",
        )
    side = ["guarantee alphabets within model + assumption alphabets"]
    a_and, g_and = conjoin(a1, a2), conjoin(g1, g2)
    conclusion = {
        "kind": "ag-triple",
        "model": "m extended to the joint assumption alphabet",
        "region": region_intersect(r1, r2),
        "assumption": a_and,
        "guarantee": g_and,
        "strategy_class": "prt",
    }
    if fairness is not None:
        premises = _attested_premises(
            ["first triple (fair)", "second triple (fair)"], fairness.notes
        )
        return _finish("conjunction-fair", premises, side, conclusion, ATTESTED)
    p1 = Premise(
        "ag-triple", "first triple",
        ag_triple_check(alphabet_extend(m, query_alphabet(a1)), r1, a1, g1, "prt", resolution),
    )
    p2 = Premise(
        "ag-triple", "second triple",
        ag_triple_check(alphabet_extend(m, query_alphabet(a2)), r2, a2, g2, "prt", resolution),
    )
    return _finish("conjunction", [p1, p2], side, conclusion)


def interleaving_threshold(p1, p2) -> Fraction:
    return Fraction(p1) + Fraction(p2) - Fraction(p1) * Fraction(p2)


def apply_interleaving(m1, m2, r1, r2, a1, a2, dfa1, p1, dfa2, p2,
                       resolution=1, fairness=None) -> RuleApplication:
    left = m1.alphabet | query_alphabet(a1)
    right = m2.alphabet | query_alphabet(a2)
    _require(not (left & right),
             "interleaving needs disjoint component-plus-assumption alphabets")
    side = ["component + assumption alphabets disjoint"]
    from .model import dfa_union_bad

    threshold = interleaving_threshold(p1, p2)
    g1 = ProbObjective(">=", Fraction(p1), dfa1)
    g2 = ProbObjective(">=", Fraction(p2), dfa2)
    conclusion = {
        "kind": "ag-triple",
        "model": "(m1 || m2) extended to the joint assumption alphabet",
        "region": region_intersect(r1, r2),
        "assumption": conjoin(a1, a2),
        "guarantee": (ProbObjective(">=", threshold, dfa_union_bad(dfa1, dfa2)),),
        "threshold": threshold,
        "strategy_class": "prt",
    }
    if fairness is not None:
        premises = _attested_premises(
            ["first triple (fair)", "second triple (fair)"], fairness.notes
        )
        return _finish("interleaving-fair", premises, side, conclusion, ATTESTED)
    _require(is_safe_query((g1, g2)) and all(is_safe_query(q) for q in (a1, a2)),
             "the partial-strategy interleaving rule needs safety queries")
    pr1 = Premise(
        "ag-triple", "component 1 bound",
        ag_triple_check(alphabet_extend(m1, query_alphabet(a1)), r1, a1, (g1,), "prt", resolution),
    )
    pr2 = Premise(
        "ag-triple", "component 2 bound",
        ag_triple_check(alphabet_extend(m2, query_alphabet(a2)), r2, a2, (g2,), "prt", resolution),
    )
    return _finish("interleaving", [pr1, pr2], side, conclusion)


def reward_sum(rw1, rw2) -> dict:
    """Pointwise sum of two per-symbol reward functions."""
    out = {s: Polynomial.coerce(r) for s, r in dict(rw1).items()}
    for s, r in dict(rw2).items():
        out[s] = out.get(s, Polynomial.const(0)) + Polynomial.coerce(r)
    return out


def apply_reward_sum(m1, m2, r1, r2, a1, a2, rw1, thr1, rw2, thr2,
                     cmp=">=", resolution=1, fairness=None) -> RuleApplication:
    for m, a, rw in ((m1, a1, rw1), (m2, a2, rw2)):
        _require(
            frozenset(dict(rw)) <= m.alphabet | query_alphabet(a),
            "reward alphabets must lie inside the component's plus its assumption's",
        )
    side = ["reward alphabets within components + assumptions"]
    summed = reward_sum(rw1, rw2)
    threshold = Fraction(thr1) + Fraction(thr2)
    conclusion = {
        "kind": "ag-triple",
        "model": "(m1 || m2) extended to the joint assumption alphabet",
        "region": region_intersect(r1, r2),
        "assumption": conjoin(a1, a2),
        "guarantee": (reward_objective(cmp, threshold, summed),),
        "threshold": threshold,
        "reward": {s: str(p) for s, p in sorted(summed.items())},
        "strategy_class": "fair" if fairness is not None else "prt",
    }
    descriptions = ["component 1 reward triple", "component 2 reward triple"]
    if fairness is not None:
        premises = _attested_premises([d + " (fair)" for d in descriptions], fairness.notes)
        return _finish("reward-sum-fair", premises, side, conclusion, ATTESTED)
    pr1 = Premise(
        "ag-triple", descriptions[0],
        ag_triple_check(
            alphabet_extend(m1, query_alphabet(a1)), r1, a1,
            (reward_objective(cmp, thr1, rw1),), "prt", resolution,
        ),
    )
    pr2 = Premise(
        "ag-triple", descriptions[1],
        ag_triple_check(
            alphabet_extend(m2, query_alphabet(a2)), r2, a2,
            (reward_objective(cmp, thr2, rw2),), "prt", resolution,
        ),
    )
    return _finish("reward-sum", [pr1, pr2], side, conclusion)


# ---------------------------------------------------------------------------
# Monotonicity rule
# ---------------------------------------------------------------------------

def apply_monotonicity(m1, m2, r1, r2, objective, param, direction,
                       resolution=1, grid_denominator=1, max_strategies=20000,
                       fairness=None) -> RuleApplication:
    sigma = objective.alphabet
    _require(sigma <= m1.alphabet | m2.alphabet,
             "objective alphabet must lie inside the joint alphabet")
    side = ["objective alphabet within the joint alphabet",
            "premise samples graph-preserving"]
    conclusion = {
        "kind": "monotone",
        "model": "m1 || m2",
        "region": region_intersect(r1, r2),
        "parameter": param,
        "direction": direction,
        "strategy_class": "fair" if fairness is not None else "prt",
    }
    if fairness is not None:
        premises = _attested_premises(
            ["component 1 monotone (fair)", "component 2 monotone (fair)"],
            fairness.notes,
        )
        return _finish("monotonicity-fair", premises, side, conclusion, ATTESTED)
    premises = []
    for i, (m, r) in enumerate(((m1, r1), (m2, r2)), start=1):
        ext = alphabet_extend(m, sigma)
        samples = _checked_samples(ext, r, resolution, filter_gp=True)
        region = FiniteRegion.of(samples)
        premises.append(
            Premise(
                "monotone", f"component {i} monotone in {param!r}",
                monotone_check(
                    ext, region, objective, param, direction, "prt",
                    resolution, grid_denominator, max_strategies,
                ),
            )
        )
    return _finish("monotonicity", premises, side, conclusion)


# ---------------------------------------------------------------------------
# Simulation-based rule
# ---------------------------------------------------------------------------

def apply_simulation_ag(m1, m2, m_assume, m_guarantee, r1, r2,
                        robust=False, resolution=1) -> RuleApplication:
    _require(m_assume.alphabet <= m1.alphabet,
             "assumption alphabet must lie inside component 1's")
    side = ["assumption alphabet within component 1's"]
    flavor = "robust-strong" if robust else "strong"

    def sim_premise(left, right, region, description):
        if robust:
            rel = robust_strong_sim(left, right, region, resolution)
            verdict = (
                Verdict("holds", witness={"relation": sorted(rel, key=repr)})
                if rel is not None
                else Verdict("fails", witness={"reason": "no uniform relation"})
            )
        else:
            verdict = strong_sim_region(left, right, region, resolution)
        return Premise("sim-leq", description, verdict)

    p1 = sim_premise(m1, m_assume, r1, f"component 1 {flavor}-simulated by the assumption")
    p2 = sim_premise(
        compose(m2, m_assume), m_guarantee, r2,
        f"component 2 composed with the assumption {flavor}-simulated by the guarantee",
    )
    conclusion = {
        "kind": "sim-leq",
        "left": "m1 || m2",
        "right": "m_guarantee",
        "region": region_intersect(r1, r2),
        "flavor": flavor,
    }
    return _finish(f"simulation-ag-{flavor}", [p1, p2], side, conclusion)


# ---------------------------------------------------------------------------
# Rules for polytopic robust automata (premises on PA-reductions)
# ---------------------------------------------------------------------------

def _trivial_region():
    return FiniteRegion.of([{}])


def apply_rpa_asymmetric(u1, u2, assumption, guarantee, resolution=1) -> RuleApplication:
    sig_a, sig_g = query_alphabet(assumption), query_alphabet(guarantee)
    _require(sig_a <= u1.alphabet, "assumption alphabet must lie inside component 1's")
    _require(sig_g <= u2.alphabet | sig_a,
             "guarantee alphabet must lie inside component 2's plus the assumption's")
    _require(is_safe_query(assumption) and is_safe_query(guarantee),
             "robust rules are restricted to safety mo-queries")
    side = ["alphabet chain", "polytopic components (reductions exist)"]
    p1 = Premise(
        "region-sat", "reduced component 1 satisfies the assumption",
        region_sat(pa_reduce(u1), _trivial_region(), assumption, "cmp", resolution),
    )
    p2 = Premise(
        "ag-triple", "reduced extended component 2 triple",
        ag_triple_check(
            pa_reduce(alphabet_extend_rpa(u2, sig_a)), _trivial_region(),
            assumption, guarantee, "prt", resolution,
        ),
    )
    conclusion = {
        "kind": "rpa-sat",
        "model": "u1 ||conv u2 (over-approximates the standard composition)",
        "query": guarantee,
        "strategy_class": "cmp",
    }
    return _finish("rpa-asymmetric", [p1, p2], side, conclusion)


def apply_rpa_circular(u1, u2, a1, a2, guarantee, resolution=1) -> RuleApplication:
    s1, s2 = query_alphabet(a1), query_alphabet(a2)
    _require(s1 <= u2.alphabet, "first assumption alphabet must lie inside component 2's")
    _require(s2 <= u1.alphabet | s1,
             "second assumption alphabet must lie inside component 1's plus the first's")
    _require(query_alphabet(guarantee) <= u2.alphabet | s2,
             "guarantee alphabet must lie inside component 2's plus assumption 2's")
    _require(all(is_safe_query(q) for q in (a1, a2, guarantee)),
             "robust rules are restricted to safety mo-queries")
    side = ["circular alphabet chain"]
    p1 = Premise(
        "ag-triple", "reduced component 1: assumption-1 => assumption-2",
        ag_triple_check(pa_reduce(alphabet_extend_rpa(u1, s1)), _trivial_region(),
                        a1, a2, "prt", resolution),
    )
    p2 = Premise(
        "ag-triple", "reduced component 2: assumption-2 => guarantee",
        ag_triple_check(pa_reduce(alphabet_extend_rpa(u2, s2)), _trivial_region(),
                        a2, guarantee, "prt", resolution),
    )
    p3 = Premise(
        "region-sat", "reduced component 2 satisfies assumption 1",
        region_sat(pa_reduce(u2), _trivial_region(), a1, "cmp", resolution),
    )
    conclusion = {
        "kind": "rpa-sat",
        "model": "u1 ||conv u2 (over-approximates the standard composition)",
        "query": guarantee,
        "strategy_class": "cmp",
    }
    return _finish("rpa-circular", [p1, p2, p3], side, conclusion)


def apply_rpa_conjunction(u, r_unused, a1, g1, a2, g2, resolution=1) -> RuleApplication:
    _require(all(is_safe_query(q) for q in (a1, g1, a2, g2)),
             "robust rules are restricted to safety mo-queries")
    for a, g in ((a1, g1), (a2, g2)):
        _require(query_alphabet(g) <= u.alphabet | query_alphabet(a),
                 "guarantee alphabets must lie inside the model's plus its assumption's")
    side = ["guarantee alphabets within model + assumption alphabets"]
    p1 = Premise(
        "ag-triple", "first reduced triple",
        ag_triple_check(pa_reduce(alphabet_extend_rpa(u, query_alphabet(a1))),
                        _trivial_region(), a1, g1, "prt", resolution),
    )
    p2 = Premise(
        "ag-triple", "second reduced triple",
        ag_triple_check(pa_reduce(alphabet_extend_rpa(u, query_alphabet(a2))),
                        _trivial_region(), a2, g2, "prt", resolution),
    )
    conclusion = {
        "kind": "rpa-triple",
        "model": "u extended to the joint assumption alphabet",
        "assumption": conjoin(a1, a2),
        "guarantee": conjoin(g1, g2),
        "strategy_class": "prt",
    }
    return _finish("rpa-conjunction", [p1, p2], side, conclusion)


def apply_rpa_asym_n(models, assumptions, guarantee, resolution=1) -> RuleApplication:
    n = len(models)
    _require(n >= 2, "the chained rule needs at least two components")
    queries = list(assumptions) + [guarantee]
    _require(query_alphabet(queries[0]) <= models[0].alphabet, "first assumption alphabet")
    for i in range(1, n):
        _require(
            query_alphabet(queries[i])
            <= models[i].alphabet | query_alphabet(queries[i - 1]),
            f"query {i} alphabet chain",
        )
    _require(all(is_safe_query(q) for q in queries),
             "robust rules are restricted to safety mo-queries")
    side = [f"{n}-component alphabet chain"]
    premises = [
        Premise(
            "region-sat", "reduced component 1 satisfies the first assumption",
            region_sat(pa_reduce(models[0]), _trivial_region(), queries[0], "cmp", resolution),
        )
    ]
    for i in range(1, n):
        premises.append(
            Premise(
                "ag-triple", f"reduced component {i + 1} link",
                ag_triple_check(
                    pa_reduce(alphabet_extend_rpa(models[i], query_alphabet(queries[i - 1]))),
                    _trivial_region(), queries[i - 1], queries[i], "prt", resolution,
                ),
            )
        )
    conclusion = {
        "kind": "rpa-sat",
        "model": " ||conv ".join(f"u{i + 1}" for i in range(n)),
        "query": guarantee,
        "strategy_class": "cmp",
    }
    return _finish("rpa-asymmetric-n", premises, side, conclusion)


def apply_rpa_interleaving(u1, u2, a1, a2, dfa1, p1, dfa2, p2, resolution=1) -> RuleApplication:
    left = u1.alphabet | query_alphabet(a1)
    right = u2.alphabet | query_alphabet(a2)
    _require(not (left & right),
             "interleaving needs disjoint component-plus-assumption alphabets")
    side = ["component + assumption alphabets disjoint"]
    from .model import dfa_union_bad

    threshold = interleaving_threshold(p1, p2)
    g1 = ProbObjective(">=", Fraction(p1), dfa1)
    g2 = ProbObjective(">=", Fraction(p2), dfa2)
    pr1 = Premise(
        "ag-triple", "reduced component 1 bound",
        ag_triple_check(pa_reduce(alphabet_extend_rpa(u1, query_alphabet(a1))),
                        _trivial_region(), a1, (g1,), "prt", resolution),
    )
    pr2 = Premise(
        "ag-triple", "reduced component 2 bound",
        ag_triple_check(pa_reduce(alphabet_extend_rpa(u2, query_alphabet(a2))),
                        _trivial_region(), a2, (g2,), "prt", resolution),
    )
    conclusion = {
        "kind": "rpa-triple",
        "model": "(u1 ||conv u2) extended to the joint assumption alphabet",
        "assumption": conjoin(a1, a2),
        "guarantee": (ProbObjective(">=", threshold, dfa_union_bad(dfa1, dfa2)),),
        "threshold": threshold,
        "strategy_class": "prt",
    }
    return _finish("rpa-interleaving", [pr1, pr2], side, conclusion)


_RPA_RULES = {
    "asymmetric": apply_rpa_asymmetric,
    "circular": apply_rpa_circular,
    "conjunction": apply_rpa_conjunction,
    "asym-n": apply_rpa_asym_n,
    "interleaving": apply_rpa_interleaving,
}


def apply_rpa_rules(rule, *args, **kwargs) -> RuleApplication:
    if rule not in _RPA_RULES:
        raise ValueError(f"unknown robust rule {rule!r}")
    return _RPA_RULES[rule](*args, **kwargs)
