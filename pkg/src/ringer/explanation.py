"""Building explanations from action sets and judging observed actions.

An explanation is the set of norms that supported the actor's choice.
An observer pools the explanation norms it follows with its own norms the
action violated, then re-runs action selection over that pool: if the
winning action matches what it saw, the action is accepted (no sanction).
"""

from dataclasses import dataclass

from .engine import prediction_array
from .norms import ACTIONS, holds_in_partial, is_more_general


@dataclass(frozen=True)
class Explanation:
    """The distinct norms of the actor's action set, parameters stripped."""

    norms: frozenset

    def wire_form(self):
        return "\n".join(sorted(str(n) for n in self.norms))


@dataclass(frozen=True)
class EvaluationVerdict:
    accepted: bool
    induced_action: object  # Action or None when no rules applied
    matched_explanation_norms: frozenset
    violated_own_norms: frozenset


def build_explanation(action_set):
    if not action_set:
        raise ValueError("cannot explain an action without an action set")
    return Explanation(frozenset(cl.norm for cl in action_set))


def _follows(pop, norm, generalized=True):
    """Observer classifiers that own the norm (exactly, or more generally)."""
    owned = []
    for cl in pop:
        if cl.norm.consequent != norm.consequent:
            continue
        if cl.norm.antecedent == norm.antecedent or (
                generalized and is_more_general(cl.norm.antecedent, norm.antecedent)):
            owned.append(cl)
    return owned


def evaluate_explanation(observer_pop, expl, observed_action, observable,
                         generalized_follow=True):
    """Judge an observed action against the explanation given for it.

    `observable` is the partial context the observer can see (location,
    plus whatever the explanation's antecedents reveal). Ties in the
    induced action go to the observed action: sanctions need strict
    evidence.
    """
    evaluation_set = []
    seen = set()
    matched = set()
    for norm in sorted(expl.norms, key=str):
        followers = _follows(observer_pop, norm, generalized_follow)
        if followers:
            matched.add(norm)
            for cl in followers:
                if id(cl) not in seen:
                    seen.add(id(cl))
                    evaluation_set.append(cl)
    violated = set()
    for cl in observer_pop:
        if (cl.norm.consequent != observed_action
                and holds_in_partial(cl.norm.antecedent, observable)):
            violated.add(cl.norm)
            if id(cl) not in seen:
                seen.add(id(cl))
                evaluation_set.append(cl)

    if not evaluation_set:
        return EvaluationVerdict(True, None, frozenset(matched), frozenset(violated))

    pa = prediction_array(evaluation_set)
    induced, best = observed_action, pa.get(observed_action, float("-inf"))
    for action in ACTIONS:
        if action in pa and pa[action] > best:
            induced, best = action, pa[action]
    return EvaluationVerdict(induced == observed_action, induced,
                             frozenset(matched), frozenset(violated))


def perceive_compliance(observer_pop, observed_action, observable, expl=None,
                        generalized_follow=True):
    """Does the observer consider the observed action norm compliant?

    With an explanation this is verdict acceptance. Without one the
    observer exploit-selects over its own rules that hold in the visible
    partial context; an empty match set gives no basis to sanction.
    """
    if expl is not None:
        return evaluate_explanation(observer_pop, expl, observed_action,
                                    observable, generalized_follow).accepted
    match_set = [cl for cl in observer_pop
                 if holds_in_partial(cl.norm.antecedent, observable)]
    if not match_set:
        return True
    pa = prediction_array(match_set)
    expected, best = None, float("-inf")
    for action in ACTIONS:
        if action in pa and pa[action] > best:
            expected, best = action, pa[action]
    return expected == observed_action
