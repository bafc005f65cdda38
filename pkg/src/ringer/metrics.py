"""Run metrics (social experience, cohesion, norm adoption) and the
statistics used to compare agent kinds across paired runs.
"""

import math
from dataclasses import dataclass

from scipy.stats import t as _student_t

from . import engine
from .agents import FIXED, fixed_greedy
from .norms import (ACTIONS, RINGER_SCHEMA, enumerate_contexts,
                    enumerate_norms, is_more_general, matches)

EMERGENCE_THRESHOLD = 0.90


def social_experience(interactions):
    """Mean learning reward over a window; None when the window is empty."""
    if not interactions:
        return None
    return sum(i.reward for i in interactions) / len(interactions)


def cohesion(interactions):
    """Fraction of observer votes judging actions compliant; None without votes."""
    votes = sum(len(i.compliance_votes) for i in interactions)
    if votes == 0:
        return None
    compliant = sum(sum(i.compliance_votes) for i in interactions)
    return compliant / votes


def greedy_policy(agent, contexts=None):
    """The agent's deterministic exploit action per full context (None = no rule)."""
    contexts = contexts or enumerate_contexts(RINGER_SCHEMA)
    policy = {}
    for ctx in contexts:
        if agent.kind == FIXED:
            policy[ctx] = fixed_greedy(agent.fixed_norms, ctx)
            continue
        match_set = engine.build_match_set(agent.population, ctx)
        pa = engine.prediction_array(match_set)
        best, best_value = None, -math.inf
        for action in ACTIONS:
            if action in pa and pa[action] > best_value:
                best, best_value = action, pa[action]
        policy[ctx] = best
    return policy


def adoption(norm, policies, contexts=None):
    """Fraction of agents whose greedy action obeys the norm in every matching context."""
    contexts = contexts or enumerate_contexts(RINGER_SCHEMA)
    matching = [c for c in contexts if matches(norm.antecedent, c)]
    compliant = 0
    for policy in policies:
        if all(policy[c] == norm.consequent for c in matching):
            compliant += 1
    return compliant / len(policies)


@dataclass(frozen=True)
class AdoptionRecord:
    norm: object
    adoption: float
    emerged: bool
    maximal: bool = False


def emerged_norms(agents, threshold=EMERGENCE_THRESHOLD):
    """Adoption of every candidate norm, with the maximal-generality filter.

    A norm is maximal when it emerged and no strictly more general norm
    with the same consequent also emerged.
    """
    contexts = enumerate_contexts(RINGER_SCHEMA)
    policies = [greedy_policy(a, contexts) for a in agents]
    records = []
    raw = {}
    for norm in enumerate_norms(RINGER_SCHEMA):
        frac = adoption(norm, policies, contexts)
        raw[norm] = frac
    emerged = {n for n, frac in raw.items() if frac >= threshold}
    for norm, frac in raw.items():
        maximal = norm in emerged and not any(
            other.consequent == norm.consequent
            and is_more_general(other.antecedent, norm.antecedent)
            for other in emerged
        )
        records.append(AdoptionRecord(norm, frac, norm in emerged, maximal))
    return records


def paired_t_test(a, b):
    """Two-sided paired t-test; pairs must be matched (same seeds)."""
    if len(a) != len(b):
        raise ValueError("paired samples must have equal length")
    n = len(a)
    if n < 2:
        raise ValueError("paired t-test needs at least two pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / math.sqrt(var / n)
    p = 2.0 * float(_student_t.sf(abs(t), n - 1))
    return t, p


def cohens_d(a, b):
    """Standardized mean difference with a pooled standard deviation."""
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("cohens_d needs at least two samples per side")
    ma, mb = sum(a) / na, sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    pooled = math.sqrt(((na - 1) * va + (nb - 1) * vb) / (na + nb - 2))
    if pooled == 0.0:
        if ma == mb:
            return 0.0
        raise ValueError("zero pooled standard deviation with unequal means")
    return (ma - mb) / pooled
