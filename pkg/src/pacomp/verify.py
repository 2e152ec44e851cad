"""Objective solvers and region-level satisfaction checks.

Probabilistic objectives are safety languages given by bad-prefix DFAs;
reward objectives are expected total rewards over transition labels.  All
solvers are exact: optimal reachability is policy iteration finished by
rational linear solves, and multi-objective achievability is an occupation-
measure linear program over expected state-action frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial, region_samples, valuation_key
from .errors import (
    AlphabetMismatch,
    EmptyRegion,
    IllDefinedValuationInRegion,
    NotGraphPreserving,
    UnboundedReward,
)
from .exactlp import OPTIMAL, LinearProgram, gauss_solve
from .model import (
    PPA,
    WellDefinedness,
    dfa_absorb_accepting,
    dfa_product,
    instantiate,
    sort_key,
    tau_extend,
    well_defined,
)
from .semantics import MemorylessStrategy

INF = float("inf")

_NEGATION = {">=": "<", ">": "<=", "<=": ">", "<": ">="}


def _cmp(value, cmp, threshold) -> bool:
    if cmp == ">=":
        return value >= threshold
    if cmp == ">":
        return value > threshold
    if cmp == "<=":
        return value <= threshold
    if cmp == "<":
        return value < threshold
    raise ValueError(f"bad comparison {cmp!r}")


@dataclass(frozen=True)
class ProbObjective:
    """Probability of a prefix-closed language (bad-prefix DFA) vs a threshold."""

    cmp: str
    threshold: Fraction
    dfa: object
    name: str = ""

    @property
    def alphabet(self):
        return self.dfa.alphabet

    def negate(self):
        return ProbObjective(_NEGATION[self.cmp], self.threshold, self.dfa, self.name)


@dataclass(frozen=True)
class RewardObjective:
    """Expected total reward of a per-symbol reward function vs a threshold."""

    cmp: str
    threshold: Fraction
    rewards: tuple  # sorted tuple of (symbol, Polynomial or Fraction)
    name: str = ""

    @property
    def alphabet(self):
        return frozenset(sym for sym, _ in self.rewards)

    def reward_map(self):
        return dict(self.rewards)

    def negate(self):
        return RewardObjective(_NEGATION[self.cmp], self.threshold, self.rewards, self.name)


def safety(dfa, threshold) -> ProbObjective:
    return ProbObjective(">=", Fraction(threshold), dfa)


def reward_objective(cmp, threshold, rewards, name="") -> RewardObjective:
    items = tuple(sorted(((str(s), Polynomial.coerce(r)) for s, r in dict(rewards).items())))
    return RewardObjective(cmp, Fraction(threshold), items, name)


def mo_query(*objectives) -> tuple:
    return tuple(objectives)


def query_alphabet(query) -> frozenset:
    out = frozenset()
    for obj in query:
        out |= obj.alphabet
    return out


def is_safe_query(query) -> bool:
    return all(isinstance(o, ProbObjective) and o.cmp == ">=" for o in query)


def instantiate_objective(obj, v):
    if isinstance(obj, RewardObjective):
        items = tuple(
            (sym, Polynomial.const(Polynomial.coerce(r).evaluate(v)))
            for sym, r in obj.rewards
        )
        return RewardObjective(obj.cmp, obj.threshold, items, obj.name)
    return obj


@dataclass
class Verdict:
    """Outcome of a region-level check, sound per sampled valuation."""

    status: str  # "holds" | "fails" | "unknown"
    witness: object = None
    details: list = field(default_factory=list)
    caveat: str = "sound per sampled valuation"

    @property
    def holds(self):
        return self.status == "holds"


# ---------------------------------------------------------------------------
# Graph utilities on parameter-free models
# ---------------------------------------------------------------------------

def _support(dist) -> frozenset:
    return frozenset(
        t for t, p in dist.items() if not Polynomial.coerce(p).is_zero()
    )


def _sccs(nodes, succ):
    """Tarjan, iterative; returns list of frozensets in deterministic order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]

    for root in sorted(nodes, key=sort_key):
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    t = stack.pop()
                    on_stack.discard(t)
                    comp.add(t)
                    if t == node:
                        break
                sccs.append(frozenset(comp))
    return sccs


def maximal_end_components(trans, states):
    """Maximal end components of an MDP given as {(s, a): dist}.

    Returns a list of (state set, action set) pairs.
    """
    result = []
    queue = [frozenset(states)]
    while queue:
        cand = queue.pop()
        allowed = {}
        for (s, a), dist in trans.items():
            if s in cand and _support(dist) <= cand:
                allowed.setdefault(s, []).append(a)
        live = frozenset(s for s in cand if allowed.get(s))
        if live != cand:
            if live:
                queue.append(live)
            continue
        if not cand:
            continue

        def succ(s):
            out = set()
            for a in allowed[s]:
                out |= _support(trans[(s, a)])
            return sorted(out, key=sort_key)

        comps = _sccs(cand, succ)
        if len(comps) == 1 and comps[0] == cand:
            has_edge = any(
                _support(trans[(s, a)]) for s in cand for a in allowed[s]
            )
            if has_edge:
                actions = {
                    (s, a)
                    for s in cand
                    for a in allowed[s]
                    if _support(trans[(s, a)]) <= cand
                }
                result.append((cand, actions))
            continue
        for comp in comps:
            queue.append(comp)
    return result


# ---------------------------------------------------------------------------
# Exact optimal reachability
# ---------------------------------------------------------------------------

def _policy_reach_values(pa: PPA, policy, targets):
    """Exact P(reach targets) per state under a memoryless det policy."""
    values = {s: Fraction(1) if s in targets else Fraction(0) for s in pa.states}
    support = {}
    for s in pa.states:
        if s in targets or s not in policy:
            continue
        support[s] = pa.const_dist(s, policy[s])
    # states that reach targets with positive probability under the policy
    reach = set(targets)
    changed = True
    while changed:
        changed = False
        for s, dist in support.items():
            if s in reach:
                continue
            if any(t in reach and p > 0 for t, p in dist.items()):
                reach.add(s)
                changed = True
    unknown = sorted((s for s in support if s in reach), key=sort_key)
    if unknown:
        idx = {s: i for i, s in enumerate(unknown)}
        rows, rhs = [], []
        for s in unknown:
            row = [Fraction(0)] * len(unknown)
            row[idx[s]] = Fraction(1)
            b = Fraction(0)
            for t, p in support[s].items():
                if p == 0:
                    continue
                if t in targets:
                    b += p
                elif t in idx:
                    row[idx[t]] -= p
                # other successors have value 0
            rows.append(row)
            rhs.append(b)
        sol = gauss_solve(rows, rhs)
        for s, val in zip(unknown, sol):
            values[s] = val
    return values


def max_reach(pa: PPA, targets):
    """Optimal reachability probability with an attaining det strategy."""
    if not pa.is_pa:
        raise ValueError("max_reach needs a parameter-free model")
    targets = frozenset(targets)
    policy = {}
    for s in pa.states:
        if s in targets:
            continue
        acts = pa.enabled(s)
        if acts:
            policy[s] = acts[0]
    values = _policy_reach_values(pa, policy, targets)
    while True:
        improved = False
        for s in sorted(policy, key=sort_key):
            best_a, best_v = policy[s], values[s]
            for a in pa.enabled(s):
                v = sum(
                    (p * values[t] for t, p in pa.const_dist(s, a).items()),
                    Fraction(0),
                )
                if v > best_v:
                    best_a, best_v = a, v
            if best_a != policy[s]:
                policy[s] = best_a
                improved = True
        if not improved:
            break
        values = _policy_reach_values(pa, policy, targets)
    strategy = MemorylessStrategy(
        {s: {a: Fraction(1)} for s, a in policy.items()}, complete=False
    )
    return values.get(pa.initial, Fraction(0)), strategy, values


def safety_prob(pa: PPA, obj: ProbObjective) -> Fraction:
    """inf over strategies of Pr(L); equals 1 - max reach of the bad states."""
    if not obj.alphabet <= pa.alphabet:
        raise AlphabetMismatch("objective alphabet exceeds model alphabet")
    product, bad = dfa_product(pa, dfa_absorb_accepting(obj.dfa))
    value, _, _ = max_reach(product, bad)
    return 1 - value


# ---------------------------------------------------------------------------
# Exact expected total reward
# ---------------------------------------------------------------------------

def _rew(pa, rewards, s, a) -> Fraction:
    r = rewards.get(pa.label[(s, a)], Fraction(0))
    return Polynomial.coerce(r).constant_value()


def _policy_reward_values(pa, policy, rewards):
    """Expected total reward per state under a memoryless det policy."""
    support = {
        s: pa.const_dist(s, a) for s, a in policy.items()
    }
    succ = lambda s: sorted(
        (_support(support[s]) if s in support else frozenset()), key=sort_key
    )
    comps = _sccs(pa.states, succ)
    # bottom components: no edge leaving
    values = {}
    infinite = set()
    comp_of = {}
    for comp in comps:
        for s in comp:
            comp_of[s] = comp
    for comp in comps:
        internal_edge = False
        leaves = False
        positive = False
        for s in comp:
            if s not in support:
                continue
            for t, p in support[s].items():
                if p == 0:
                    continue
                if t in comp:
                    internal_edge = True
                else:
                    leaves = True
            if _rew(pa, rewards, s, policy[s]) > 0:
                positive = True
        if not leaves and internal_edge and positive:
            infinite |= comp
    # propagate infinity backwards through positive-probability edges
    changed = True
    while changed:
        changed = False
        for s, dist in support.items():
            if s in infinite:
                continue
            if any(t in infinite and p > 0 for t, p in dist.items()):
                infinite.add(s)
                changed = True
    # zero states: no positive reward reachable
    gains = set()
    for s in support:
        if _rew(pa, rewards, s, policy[s]) > 0:
            gains.add(s)
    reach_gain = set(gains)
    changed = True
    while changed:
        changed = False
        for s, dist in support.items():
            if s in reach_gain:
                continue
            if any(t in reach_gain and p > 0 for t, p in dist.items()):
                reach_gain.add(s)
                changed = True
    solve_states = sorted(
        (s for s in support if s in reach_gain and s not in infinite),
        key=sort_key,
    )
    for s in pa.states:
        if s in infinite:
            values[s] = INF
        elif s not in reach_gain:
            values[s] = Fraction(0)
    if solve_states:
        idx = {s: i for i, s in enumerate(solve_states)}
        rows, rhs = [], []
        for s in solve_states:
            row = [Fraction(0)] * len(solve_states)
            row[idx[s]] = Fraction(1)
            b = _rew(pa, rewards, s, policy[s])
            for t, p in support[s].items():
                if p == 0:
                    continue
                if t in idx:
                    row[idx[t]] -= p
                elif values.get(t, Fraction(0)) == INF:
                    raise AssertionError("infinite successor not propagated")
                else:
                    b += p * values.get(t, Fraction(0))
            rows.append(row)
            rhs.append(b)
        sol = gauss_solve(rows, rhs)
        for s, val in zip(solve_states, sol):
            values[s] = val
    return values


def _min_total_reward_lp(pa: PPA, rew_const):
    """Exact minimal expected total reward via an occupation-measure LP.

    A strategy has finite reward iff it almost surely ends up lingering in a
    zero-reward closed region, so route one unit of flow from the initial
    state into such regions while minimizing the collected reward.  Greedy
    policy improvement is unsound here: zero-reward cycles create tied
    non-optimal fixpoints.
    """
    reach = _reachable_support(pa)
    trans = {
        (s, a): {t: p for t, p in pa.const_dist(s, a).items() if p}
        for (s, a) in pa.trans
        if s in reach
    }
    # greatest region that can avoid rewards forever
    settle = set()
    live = set(reach)
    changed = True
    while changed:
        changed = False
        for s in sorted(live, key=sort_key):
            acts = [a for (q, a) in trans if q == s]
            if not acts:
                continue  # dead end: stays put for free
            ok = any(
                _rew(pa, rew_const, s, a) == 0 and set(trans[(s, a)]) <= live
                for a in acts
            )
            if not ok:
                live.discard(s)
                changed = True
    settle = live
    action_keys = sorted(trans, key=sort_key)
    settle_states = sorted(settle, key=sort_key)
    y_index = {key: i for i, key in enumerate(action_keys)}
    w_index = {s: len(action_keys) + i for i, s in enumerate(settle_states)}
    lp = LinearProgram(len(action_keys) + len(settle_states))
    inflow = {s: {} for s in reach}
    for key, dist in trans.items():
        for t, p in dist.items():
            inflow[t][y_index[key]] = inflow[t].get(y_index[key], Fraction(0)) + p
    for s in reach:
        coeffs = {}
        for (q, a) in trans:
            if q == s:
                coeffs[y_index[(q, a)]] = coeffs.get(y_index[(q, a)], Fraction(0)) + 1
        if s in w_index:
            coeffs[w_index[s]] = coeffs.get(w_index[s], Fraction(0)) + 1
        for j, p in inflow[s].items():
            coeffs[j] = coeffs.get(j, Fraction(0)) - p
        lp.add_eq(coeffs, Fraction(1 if s == pa.initial else 0))
    lp.add_eq({w_index[s]: Fraction(1) for s in settle_states}, Fraction(1))
    objective = {}
    for key in action_keys:
        r = _rew(pa, rew_const, *key)
        if r:
            objective[y_index[key]] = r
    status, _, value = lp.solve(objective, maximize=False)
    if status != OPTIMAL:
        return INF  # no strategy can stop collecting reward almost surely
    return value


def exp_total_reward(pa: PPA, rewards, mode="max"):
    """Extremal expected total reward over complete strategies.

    Returns a Fraction, or float infinity when divergence is optimal/forced.
    The maximum is computed by policy iteration (safe: its tied fixpoints
    coincide with the least Bellman fixpoint); the minimum by an exact
    occupation-measure linear program.
    """
    if not pa.is_pa:
        raise ValueError("exp_total_reward needs a parameter-free model")
    rewards = {s: Polynomial.coerce(r) for s, r in dict(rewards).items()}
    for sym, r in rewards.items():
        if r.constant_value() < 0:
            raise ValueError("rewards must be nonnegative")
    if not set(rewards) <= pa.alphabet:
        raise AlphabetMismatch("reward alphabet exceeds model alphabet")
    rew_const = {s: r.constant_value() for s, r in rewards.items()}

    if mode == "min":
        return _min_total_reward_lp(pa, rew_const)

    from_init = _reachable_support(pa)
    for comp, actions in maximal_end_components(pa.trans, pa.states):
        if comp & from_init and any(
            _rew(pa, rew_const, s, a) > 0 for (s, a) in actions
        ):
            return INF

    policy = {}
    for s in pa.states:
        acts = pa.enabled(s)
        if acts:
            policy[s] = acts[0]
    better = (lambda a, b: a > b) if mode == "max" else (lambda a, b: a < b)
    values = _policy_reward_values(pa, policy, rew_const)
    while True:
        improved = False
        for s in sorted(policy, key=sort_key):
            best_a, best_v = policy[s], values[s]
            for a in pa.enabled(s):
                v = _rew(pa, rew_const, s, a)
                for t, p in pa.const_dist(s, a).items():
                    if p == 0:
                        continue
                    tv = values[t]
                    if tv == INF:
                        v = INF
                        break
                    v += p * tv
                if better(v, best_v):
                    best_a, best_v = a, v
            if best_a != policy[s]:
                policy[s] = best_a
                improved = True
        if not improved:
            break
        values = _policy_reward_values(pa, policy, rew_const)
    return values.get(pa.initial, Fraction(0))


def _reachable_support(pa: PPA):
    seen = {pa.initial}
    stack = [pa.initial]
    while stack:
        s = stack.pop()
        for (src, a), dist in pa.trans.items():
            if src != s:
                continue
            for t in _support(dist):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen


# ---------------------------------------------------------------------------
# Fixed-strategy evaluation (used by monotonicity and witness re-checks)
# ---------------------------------------------------------------------------

def chain_language_prob(pa: PPA, sigma: MemorylessStrategy, dfa) -> Fraction:
    """Pr(L) of the chain induced by a memoryless (possibly partial) strategy."""
    product, bad = dfa_product(pa, dfa_absorb_accepting(dfa))
    trans = {}
    for (s, q) in product.states:
        mix = sigma.choice.get(s, {})
        dist = {}
        for a, w in mix.items():
            if w == 0 or ((s, q), a) not in product.trans:
                continue
            for t, p in product.const_dist((s, q), a).items():
                if p:
                    dist[t] = dist.get(t, Fraction(0)) + w * p
        trans[(s, q)] = dist
    return 1 - _chain_reach(trans, product.initial, bad)


def _chain_reach(trans, init, targets) -> Fraction:
    targets = frozenset(targets)
    if init in targets:
        return Fraction(1)
    reach = set(targets)
    changed = True
    while changed:
        changed = False
        for s, dist in trans.items():
            if s in reach:
                continue
            if any(t in reach and p > 0 for t, p in dist.items()):
                reach.add(s)
                changed = True
    unknown = sorted((s for s in trans if s in reach and s not in targets), key=sort_key)
    if init not in reach:
        return Fraction(0)
    idx = {s: i for i, s in enumerate(unknown)}
    rows, rhs = [], []
    for s in unknown:
        row = [Fraction(0)] * len(unknown)
        row[idx[s]] = Fraction(1)
        b = Fraction(0)
        for t, p in trans[s].items():
            if p == 0:
                continue
            if t in targets:
                b += p
            elif t in idx:
                row[idx[t]] -= p
        rows.append(row)
        rhs.append(b)
    sol = gauss_solve(rows, rhs)
    return sol[idx[init]] if init in idx else Fraction(0)


def chain_expected_reward(pa: PPA, sigma: MemorylessStrategy, rewards) -> Fraction:
    """Expected total reward of the induced chain; infinity on divergence."""
    rew_const = {
        s: Polynomial.coerce(r).constant_value() for s, r in dict(rewards).items()
    }
    gain = {}
    trans = {}
    for s in pa.states:
        mix = sigma.choice.get(s, {})
        dist = {}
        g = Fraction(0)
        for a, w in mix.items():
            if w == 0 or (s, a) not in pa.trans:
                continue
            g += w * _rew(pa, rew_const, s, a)
            for t, p in pa.const_dist(s, a).items():
                if p:
                    dist[t] = dist.get(t, Fraction(0)) + w * p
        trans[s] = dist
        gain[s] = g
    # recurrent positive gain => infinite
    succ = lambda s: sorted(_support(trans.get(s, {})), key=sort_key)
    infinite = set()
    for comp in _sccs(pa.states, succ):
        internal = any(
            t in comp and p > 0 for s in comp for t, p in trans.get(s, {}).items()
        )
        if internal and any(gain.get(s, 0) > 0 for s in comp):
            # positive gain inside a cycle that the chain can repeat forever
            leaves = any(
                p > 0 and t not in comp
                for s in comp
                for t, p in trans.get(s, {}).items()
            )
            if not leaves:
                infinite |= comp
    changed = True
    while changed:
        changed = False
        for s, dist in trans.items():
            if s in infinite:
                continue
            if any(t in infinite and p > 0 for t, p in dist.items()):
                infinite.add(s)
                changed = True
    if pa.initial in infinite:
        return INF
    reach_gain = {s for s in pa.states if gain.get(s, 0) > 0}
    changed = True
    while changed:
        changed = False
        for s, dist in trans.items():
            if s in reach_gain:
                continue
            if any(t in reach_gain and p > 0 for t, p in dist.items()):
                reach_gain.add(s)
                changed = True
    solve_states = sorted(
        (s for s in pa.states if s in reach_gain and s not in infinite), key=sort_key
    )
    if pa.initial not in reach_gain:
        return Fraction(0)
    idx = {s: i for i, s in enumerate(solve_states)}
    rows, rhs = [], []
    for s in solve_states:
        row = [Fraction(0)] * len(solve_states)
        row[idx[s]] = Fraction(1)
        b = gain.get(s, Fraction(0))
        for t, p in trans.get(s, {}).items():
            if p == 0:
                continue
            if t in idx:
                row[idx[t]] -= p
        rows.append(row)
        rhs.append(b)
    sol = gauss_solve(rows, rhs)
    return sol[idx[pa.initial]] if pa.initial in idx else Fraction(0)

# ---------------------------------------------------------------------------
# Multi-objective achievability (occupation-measure LP)
# ---------------------------------------------------------------------------

def _joint_product(pa: PPA, dfas):
    """Reachable product of a PA with several absorbing bad-prefix DFAs."""
    init = (pa.initial, tuple(b.initial for b in dfas))
    ptrans, plabel = {}, {}
    seen = {init}
    stack = [init]
    while stack:
        ps = stack.pop()
        s, qs = ps
        for a in pa.enabled(s):
            lab = pa.label[(s, a)]
            nqs = tuple(
                b.trans[(q, lab)] if lab in b.alphabet else q
                for b, q in zip(dfas, qs)
            )
            dist = {}
            for t, p in pa.const_dist(s, a).items():
                dist[(t, nqs)] = dist.get((t, nqs), Fraction(0)) + p
            ptrans[(ps, a)] = dist
            plabel[(ps, a)] = lab
            for t in dist:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return init, sorted(seen, key=sort_key), ptrans, plabel


def _signature(ps, dfas):
    _, qs = ps
    return frozenset(i for i, b in enumerate(dfas) if qs[i] in b.accepting)


def _settle_region(states, ptrans, dfas, zero_reward_ok):
    """Greatest per-layer closed region where a strategy can linger forever
    without crossing signature layers or collecting reward."""
    allowed = set()
    for ps in states:
        sig = _signature(ps, dfas)
        acts = [a for (q, a) in ptrans if q == ps]
        if not acts:
            allowed.add(ps)  # dead end: trivially stays put
    candidates = set(states) - allowed
    live = set(candidates)
    changed = True
    while changed:
        changed = False
        for ps in sorted(live, key=sort_key):
            sig = _signature(ps, dfas)
            ok = False
            for (q, a), dist in ptrans.items():
                if q != ps or not zero_reward_ok((q, a)):
                    continue
                supp = {t for t, p in dist.items() if p > 0}
                if all(
                    (t in live or t in allowed) and _signature(t, dfas) == sig
                    for t in supp
                ):
                    ok = True
                    break
            if not ok:
                live.discard(ps)
                changed = True
    return allowed | live


def _stay_action(ps, region, ptrans, dfas, zero_reward_ok):
    sig = _signature(ps, dfas)
    for (q, a), dist in sorted(ptrans.items(), key=lambda kv: sort_key(kv[0])):
        if q != ps or not zero_reward_ok((q, a)):
            continue
        supp = {t for t, p in dist.items() if p > 0}
        if all(t in region and _signature(t, dfas) == sig for t in supp):
            return a
    return None


def mo_achievable(pa: PPA, query, strategy_class="cmp"):
    """Exact achievability of a conjunction of objectives by one strategy.

    Returns ("achievable", witness) or ("unachievable", None).  Partial
    strategies are handled by checking complete strategies of the tau
    extension.  Strict comparisons are decided by maximizing a shared rational
    slack; every witness is re-evaluated exactly before being reported.
    """
    if not pa.is_pa:
        raise ValueError("mo_achievable needs a parameter-free model")
    for obj in query:
        if not obj.alphabet <= pa.alphabet:
            raise AlphabetMismatch(
                f"objective alphabet {sorted(obj.alphabet)} exceeds the model's"
            )
    work = tau_extend(pa) if strategy_class == "prt" else pa
    prob_objs = [o for o in query if isinstance(o, ProbObjective)]
    rew_objs = [o for o in query if isinstance(o, RewardObjective)]
    dfas = [dfa_absorb_accepting(o.dfa) for o in prob_objs]
    init, states, ptrans, plabel = _joint_product(work, dfas)

    rew_maps = []
    for o in rew_objs:
        rew_maps.append({s: Polynomial.coerce(r).constant_value() for s, r in o.rewards})
    def act_reward(key, j):
        return rew_maps[j].get(plabel[key], Fraction(0))
    if rew_objs:
        for comp, actions in maximal_end_components(ptrans, states):
            for key in actions:
                if any(act_reward(key, j) > 0 for j in range(len(rew_objs))):
                    raise UnboundedReward(
                        "a reward objective meets an infinite-reward end component"
                    )

    def zero_reward_ok(key):
        return all(act_reward(key, j) == 0 for j in range(len(rew_objs)))

    settle = _settle_region(states, ptrans, dfas, zero_reward_ok)
    action_keys = sorted(ptrans, key=sort_key)
    settle_states = sorted(settle, key=sort_key)
    y_index = {key: i for i, key in enumerate(action_keys)}
    w_index = {ps: len(action_keys) + i for i, ps in enumerate(settle_states)}
    strict = any(o.cmp in ("<", ">") for o in query)
    t_index = len(action_keys) + len(settle_states)
    nvars = t_index + (1 if strict else 0)

    lp = LinearProgram(nvars)
    inflow = {ps: {} for ps in states}
    for key, dist in ptrans.items():
        for t, p in dist.items():
            if p:
                inflow[t][y_index[key]] = inflow[t].get(y_index[key], Fraction(0)) + p
    for ps in states:
        coeffs = {}
        for (q, a) in ptrans:
            if q == ps:
                coeffs[y_index[(q, a)]] = coeffs.get(y_index[(q, a)], Fraction(0)) + 1
        if ps in w_index:
            coeffs[w_index[ps]] = coeffs.get(w_index[ps], Fraction(0)) + 1
        for j, p in inflow[ps].items():
            coeffs[j] = coeffs.get(j, Fraction(0)) - p
        lp.add_eq(coeffs, Fraction(1 if ps == init else 0))
    lp.add_eq({w_index[ps]: Fraction(1) for ps in settle_states}, Fraction(1))

    def reach_expr(i):
        """Linear expression of P(eventually bad_i) plus its constant part."""
        target = {ps for ps in states if i in _signature(ps, dfas)}
        coeffs = {}
        const = Fraction(1) if init in target else Fraction(0)
        for key, dist in ptrans.items():
            if key[0] in target:
                continue
            mass = sum((p for t, p in dist.items() if t in target), Fraction(0))
            if mass:
                coeffs[y_index[key]] = coeffs.get(y_index[key], Fraction(0)) + mass
        return coeffs, const

    for i, o in enumerate(prob_objs):
        coeffs, const = reach_expr(i)
        bound = 1 - o.threshold
        if o.cmp == ">=":
            lp.add_ub(coeffs, bound - const)
        elif o.cmp == ">":
            c = dict(coeffs)
            c[t_index] = Fraction(1)
            lp.add_ub(c, bound - const)
        elif o.cmp == "<=":
            lp.add_lb(coeffs, bound - const)
        elif o.cmp == "<":
            c = dict(coeffs)
            c[t_index] = Fraction(-1)
            lp.add_lb(c, bound - const)
    for j, o in enumerate(rew_objs):
        coeffs = {}
        for key in action_keys:
            r = act_reward(key, j)
            if r:
                coeffs[y_index[key]] = r
        if o.cmp == ">=":
            lp.add_lb(coeffs, o.threshold)
        elif o.cmp == ">":
            c = dict(coeffs)
            c[t_index] = Fraction(-1)
            lp.add_lb(c, o.threshold)
        elif o.cmp == "<=":
            lp.add_ub(coeffs, o.threshold)
        elif o.cmp == "<":
            c = dict(coeffs)
            c[t_index] = Fraction(1)
            lp.add_ub(c, o.threshold)

    if strict:
        lp.add_ub({t_index: Fraction(1)}, Fraction(1))
        status, x, value = lp.solve({t_index: Fraction(1)}, maximize=True)
        if status != OPTIMAL or value <= 0:
            return "unachievable", None
    else:
        status, x, _ = lp.solve({})
        if status != OPTIMAL:
            return "unachievable", None

    mix, settle_mass, stay = {}, {}, {}
    for ps in states:
        total = Fraction(0)
        weights = {}
        for (q, a) in ptrans:
            if q == ps and x[y_index[(q, a)]] > 0:
                weights[a] = x[y_index[(q, a)]]
                total += x[y_index[(q, a)]]
        w = x[w_index[ps]] if ps in w_index else Fraction(0)
        total += w
        if total == 0:
            continue
        mix[ps] = {a: v / total for a, v in weights.items()}
        if w:
            settle_mass[ps] = w / total
    for ps in settle:
        act = _stay_action(ps, settle, ptrans, dfas, zero_reward_ok)
        if act is not None:
            stay[ps] = act

    values = _witness_values(
        init, states, ptrans, dfas, prob_objs, rew_objs, plabel, rew_maps,
        mix, settle_mass, stay,
    )
    for o, (kind, val) in zip(list(prob_objs) + list(rew_objs), values):
        if not _cmp(val, o.cmp, o.threshold):
            raise RuntimeError("internal: witness failed exact re-verification")
    witness = {
        "kind": "product-memoryless",
        "strategy_class": strategy_class,
        "mix": mix,
        "settle": settle_mass,
        "stay": stay,
        "values": {
            (o.name or f"objective-{k}"): val
            for k, (o, (_, val)) in enumerate(
                zip(list(prob_objs) + list(rew_objs), values)
            )
        },
    }
    return "achievable", witness


def _witness_values(init, states, ptrans, dfas, prob_objs, rew_objs, plabel,
                    rew_maps, mix, settle_mass, stay):
    """Exact objective values of the two-mode witness strategy."""
    trans = {}
    gain_of = [dict() for _ in rew_objs]
    for ps in states:
        dist = {}
        for a, wgt in mix.get(ps, {}).items():
            for t, p in ptrans[(ps, a)].items():
                if p:
                    dist[("go", t)] = dist.get(("go", t), Fraction(0)) + wgt * p
            for j in range(len(rew_objs)):
                r = rew_maps[j].get(plabel[(ps, a)], Fraction(0))
                if r:
                    gain_of[j][("go", ps)] = gain_of[j].get(("go", ps), Fraction(0)) + wgt * r
        sm = settle_mass.get(ps, Fraction(0))
        if sm:
            dist[("stay", ps)] = dist.get(("stay", ps), Fraction(0)) + sm
        trans[("go", ps)] = dist
    for ps, a in stay.items():
        trans[("stay", ps)] = {
            ("stay", t): p for t, p in ptrans[(ps, a)].items() if p
        }
    for ps in states:
        trans.setdefault(("stay", ps), {})
    out = []
    for i, o in enumerate(prob_objs):
        target = {
            (mode, ps)
            for mode in ("go", "stay")
            for ps in states
            if i in _signature(ps, dfas)
        }
        v = _chain_reach(trans, ("go", init), target)
        out.append(("prob", 1 - v))
    for j, o in enumerate(rew_objs):
        out.append(("reward", _chain_gain(trans, gain_of[j], ("go", init))))
    return out


def _chain_gain(trans, gain, init):
    """Expected total gain of a Markov chain; infinity on recurrent gain."""
    nodes = set(trans) | {init}
    succ = lambda s: sorted(
        (t for t, p in trans.get(s, {}).items() if p > 0), key=sort_key
    )
    infinite = set()
    for comp in _sccs(nodes, succ):
        internal = any(
            t in comp and p > 0 for s in comp for t, p in trans.get(s, {}).items()
        )
        leaves = any(
            p > 0 and t not in comp
            for s in comp
            for t, p in trans.get(s, {}).items()
        )
        if internal and not leaves and any(gain.get(s, 0) > 0 for s in comp):
            infinite |= comp
    changed = True
    while changed:
        changed = False
        for s in nodes:
            if s in infinite:
                continue
            if any(t in infinite and p > 0 for t, p in trans.get(s, {}).items()):
                infinite.add(s)
                changed = True
    if init in infinite:
        return INF
    reach_gain = {s for s in nodes if gain.get(s, 0) > 0}
    changed = True
    while changed:
        changed = False
        for s in nodes:
            if s in reach_gain:
                continue
            if any(t in reach_gain and p > 0 for t, p in trans.get(s, {}).items()):
                reach_gain.add(s)
                changed = True
    if init not in reach_gain:
        return Fraction(0)
    solve_states = sorted((s for s in reach_gain if s not in infinite), key=sort_key)
    idx = {s: i for i, s in enumerate(solve_states)}
    rows, rhs = [], []
    for s in solve_states:
        row = [Fraction(0)] * len(solve_states)
        row[idx[s]] = Fraction(1)
        b = gain.get(s, Fraction(0))
        for t, p in trans.get(s, {}).items():
            if p and t in idx:
                row[idx[t]] -= p
        rows.append(row)
        rhs.append(b)
    sol = gauss_solve(rows, rhs)
    return sol[idx[init]]


# ---------------------------------------------------------------------------
# Region-level checks
# ---------------------------------------------------------------------------

def _checked_samples(m, region, resolution, graph_preserving=False, filter_gp=False):
    try:
        samples = region_samples(region, resolution)
    except EmptyRegion:
        return None
    out = []
    for v in samples:
        wd = well_defined(m, v)
        if wd is WellDefinedness.NEITHER:
            raise IllDefinedValuationInRegion(
                f"sample {dict(sorted(v.items()))} does not instantiate to a PA"
            )
        if wd is not WellDefinedness.GRAPH_PRESERVING:
            if graph_preserving:
                raise NotGraphPreserving(
                    f"sample {dict(sorted(v.items()))} is not graph-preserving"
                )
            if filter_gp:
                continue
        out.append(v)
    if filter_gp and not out:
        raise NotGraphPreserving("no graph-preserving sample in the region")
    return out


def region_sat(m: PPA, region, query, strategy_class="cmp", resolution=1) -> Verdict:
    """Holds iff at every sampled valuation no strategy violates any objective."""
    for obj in query:
        if not obj.alphabet <= m.alphabet:
            raise AlphabetMismatch("objective alphabet exceeds the model alphabet")
    samples = _checked_samples(m, region, resolution)
    if samples is None:
        return Verdict("holds", caveat="region denotes no valuation; vacuously holds")
    details = []
    for v in samples:
        pa = instantiate(m, v)
        for obj in query:
            status, wit = mo_achievable(
                pa, (instantiate_objective(obj, v).negate(),), strategy_class
            )
            if status == "achievable":
                return Verdict(
                    "fails",
                    witness={"valuation": v, "objective": obj, "strategy": wit},
                    details=details,
                )
        details.append({"valuation": valuation_key(v), "ok": True})
    return Verdict("holds", details=details)


def ag_triple_check(
    m: PPA, region, assumption, guarantee, strategy_class="prt", resolution=1
) -> Verdict:
    """Check an assume-guarantee triple over the sampled region.

    Fails iff some strategy of the class satisfies the whole assumption while
    violating one guarantee objective.
    """
    for obj in tuple(assumption) + tuple(guarantee):
        if not obj.alphabet <= m.alphabet:
            raise AlphabetMismatch(
                "triple objective alphabets must lie inside the model alphabet; "
                "extend the model first"
            )
    samples = _checked_samples(m, region, resolution)
    if samples is None:
        return Verdict("holds", caveat="region denotes no valuation; vacuously holds")
    details = []
    for v in samples:
        pa = instantiate(m, v)
        inst_a = tuple(instantiate_objective(o, v) for o in assumption)
        for g in guarantee:
            bad = inst_a + (instantiate_objective(g, v).negate(),)
            status, wit = mo_achievable(pa, bad, strategy_class)
            if status == "achievable":
                return Verdict(
                    "fails",
                    witness={"valuation": v, "violated": g, "strategy": wit},
                    details=details,
                )
        details.append({"valuation": valuation_key(v), "ok": True})
    return Verdict("holds", details=details)


# ---------------------------------------------------------------------------
# Monotonicity checking over enumerated strategies
# ---------------------------------------------------------------------------

def _weight_profiles(actions, denominator):
    if denominator <= 1:
        return [{a: Fraction(1)} for a in actions]
    profiles = []

    def rec(i, remaining, acc):
        if i == len(actions) - 1:
            prof = dict(acc)
            if remaining:
                prof[actions[i]] = Fraction(remaining, denominator)
            if prof:
                profiles.append(prof)
            return
        for k in range(remaining + 1):
            if k:
                acc[actions[i]] = Fraction(k, denominator)
            rec(i + 1, remaining - k, acc)
            acc.pop(actions[i], None)

    rec(0, denominator, {})
    return profiles


def enumerate_memoryless(m: PPA, denominator=1, cap=20000):
    """Complete memoryless strategies over reachable decision points.

    Deterministic choices for denominator 1; otherwise the rational grid with
    the given step.  Enumeration follows the declared transition structure, so
    it is valuation-independent.
    """
    results = []

    def expand(choice, frontier):
        undecided = sorted(
            (s for s in frontier if s not in choice and m.enabled(s)), key=sort_key
        )
        if not undecided:
            results.append(MemorylessStrategy(dict(choice), complete=True))
            if len(results) > cap:
                raise ValueError(f"strategy enumeration exceeds cap {cap}")
            return
        s = undecided[0]
        for profile in _weight_profiles(m.enabled(s), denominator):
            new_frontier = set(frontier)
            for a in profile:
                new_frontier |= _support(m.trans[(s, a)])
            choice[s] = profile
            expand(choice, new_frontier)
            del choice[s]

    expand({}, {m.initial})
    return results


def solution_value(m_inst: PPA, sigma: MemorylessStrategy, objective):
    """Value of the solution function at one instantiated model and strategy."""
    if isinstance(objective, RewardObjective):
        return chain_expected_reward(m_inst, sigma, objective.reward_map())
    return chain_language_prob(m_inst, sigma, objective.dfa)


def monotone_check(
    m: PPA,
    region,
    objective,
    param,
    direction,
    strategy_class="cmp",
    resolution=1,
    grid_denominator=1,
    max_strategies=20000,
    require_graph_preserving=False,
) -> Verdict:
    """Check monotonicity of the solution function in one parameter.

    Quantification is over the enumerated strategy class (memoryless complete
    on the model, or on its tau extension for partial strategies) and the
    sampled axis-aligned valuation pairs; the verdict says so.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    samples = _checked_samples(
        m, region, resolution, graph_preserving=require_graph_preserving
    )
    caveat = "per enumerated strategy class; sound per sampled valuation"
    if samples is None:
        return Verdict("holds", caveat="region denotes no valuation; vacuously holds")
    work = tau_extend(m) if strategy_class == "prt" else m
    strategies = enumerate_memoryless(work, grid_denominator, max_strategies)
    groups = {}
    for v in samples:
        if param not in v:
            raise ValueError(f"samples do not assign parameter {param!r}")
        rest = tuple(sorted((k, val) for k, val in v.items() if k != param))
        groups.setdefault(rest, []).append(v)
    inst_cache = {}

    def inst(v):
        key = valuation_key(v)
        if key not in inst_cache:
            inst_cache[key] = instantiate(work, v)
        return inst_cache[key]

    ordered_pairs = []
    for rest, vs in sorted(groups.items()):
        vs.sort(key=lambda v: v[param])
        for lo, hi in zip(vs, vs[1:]):
            ordered_pairs.append((lo, hi))

    for sigma in strategies:
        cache = {}
        for lo, hi in ordered_pairs:
            for v in (lo, hi):
                key = valuation_key(v)
                if key not in cache:
                    obj = instantiate_objective(objective, v)
                    cache[key] = solution_value(inst(v), sigma, obj)
            f_lo, f_hi = cache[valuation_key(lo)], cache[valuation_key(hi)]
            ok = f_lo <= f_hi if direction == "up" else f_lo >= f_hi
            if not ok:
                return Verdict(
                    "fails",
                    witness={
                        "strategy": sigma.choice,
                        "low": lo,
                        "high": hi,
                        "value_low": f_lo,
                        "value_high": f_hi,
                    },
                    caveat=caveat,
                )
    return Verdict("holds", caveat=caveat)
