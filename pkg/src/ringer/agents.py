"""Agent behaviors: Fixed rule followers and the two learning variants
(with and without explanation exchange), plus the per-call interaction
pipeline that wires decisions, sanctions, rewards, and learning together.
"""

from dataclasses import dataclass, field

from . import engine
from .explanation import (build_explanation, evaluate_explanation,
                          perceive_compliance)
from .norms import (ACTIONS, IGNORE, RING, TRUE_ANTECEDENT, Antecedent,
                    RINGER_SCHEMA)
from .world import aggregate_reward, relationship_class, society_weights

FIXED = "fixed"
NSIGA = "nsiga"
XSIGA = "xsiga"
AGENT_KINDS = (FIXED, NSIGA, XSIGA)


@dataclass(frozen=True)
class FixedNormTable:
    """Location and circle response tables for Fixed agents."""

    location_norms: dict
    circle_norms: dict  # (relationship, urgent) -> action


DEFAULT_FIXED_NORMS = FixedNormTable(
    location_norms={"ER": RING, "H": RING, "L": IGNORE, "M": IGNORE, "P": RING},
    circle_norms={
        ("colleague", "false"): RING, ("colleague", "true"): RING,
        ("family", "false"): RING, ("family", "true"): RING,
        ("friend", "false"): RING, ("friend", "true"): RING,
        ("stranger", "false"): IGNORE, ("stranger", "true"): RING,
    },
)


def fixed_decide(table, ctx, rng):
    """Follow the tables; conflicting prescriptions resolve to a coin flip."""
    by_location = table.location_norms[ctx.value("calleeLoc")]
    by_circle = table.circle_norms[(ctx.value("callerRel"), ctx.value("urgent"))]
    if by_location == by_circle:
        return by_location
    return ACTIONS[rng.randrange(2)]


def fixed_greedy(table, ctx):
    """Deterministic view of a Fixed agent's policy; None on conflict."""
    by_location = table.location_norms[ctx.value("calleeLoc")]
    by_circle = table.circle_norms[(ctx.value("callerRel"), ctx.value("urgent"))]
    return by_location if by_location == by_circle else None


@dataclass
class Agent:
    id: int
    kind: str
    attitude: str
    population: engine.Population = None
    fixed_norms: FixedNormTable = None
    decisions: int = 0  # the agent's own learning clock; paces the GA


def make_agent(agent_id, kind, attitude, hp):
    if kind == FIXED:
        return Agent(agent_id, kind, attitude, fixed_norms=DEFAULT_FIXED_NORMS)
    return Agent(agent_id, kind, attitude, population=engine.Population(hp))


def siga_decide(agent, ctx, mode, step, rng):
    """Match, cover if short of actions, predict, select, and form the action set."""
    pop = agent.population
    match_set = engine.build_match_set(pop, ctx)
    attempts = 0
    while len({cl.norm.consequent for cl in match_set}) < len(pop.actions):
        match_set = engine.cover(pop, match_set, ctx, step, rng)
        attempts += 1
        if attempts > 10:  # deletion keeps evicting covered rules; give up gracefully
            break
    pa = engine.prediction_array(match_set)
    action = engine.select_action(pa, mode, rng, pop.actions)
    action_set = [cl for cl in match_set if cl.norm.consequent == action]
    return action, action_set


def observable_context(ctx, expl=None):
    """What a neighbor can see: the location, plus anything the explanation reveals."""
    pairs = {"calleeLoc": ctx.value("calleeLoc")}
    if expl is not None:
        for norm in expl.norms:
            pairs.update(norm.antecedent.pairs)
    return Antecedent.from_pairs(pairs.items())


@dataclass
class Interaction:
    step: int
    caller: int
    callee: int
    ctx: object
    action: str
    callee_payoff: float
    caller_payoff: float
    neighbor_payoffs: list
    reward: float
    compliance_votes: list  # one bool per neighbor
    explanation: object = None


def _neighbor_vote_and_payoff(neighbor, action, ctx, expl, payoffs):
    """One observer's compliance vote and the matching payoff row."""
    loc = ctx.value("calleeLoc")
    if neighbor.kind == FIXED:
        expected = neighbor.fixed_norms.location_norms[loc]
        vote = expected == action
        payoff = payoffs.neighbor_fixed[(action, loc)]
        return vote, payoff
    if expl is None:
        observable = observable_context(ctx)
        vote = perceive_compliance(neighbor.population, action, observable)
        payoff = payoffs.neighbor_fixed[(action, loc)]
        return vote, payoff
    observable = observable_context(ctx, expl)
    verdict = evaluate_explanation(neighbor.population, expl, action, observable)
    expected = verdict.induced_action if verdict.induced_action is not None else action
    payoff = payoffs.neighbor_explained[(action, expected, loc)]
    return verdict.accepted, payoff


def process_interaction(agents, world, payoffs, hp, step, caller, callee, ctx, rng):
    """Run one call end to end: decide, sanction, reward, learn."""
    callee_agent = agents[callee]
    explanation = None
    action_set = None
    if callee_agent.kind == FIXED:
        action = fixed_decide(callee_agent.fixed_norms, ctx, rng)
    else:
        callee_agent.decisions += 1
        mode = "explore" if rng.random() < hp.explore_prob else "exploit"
        action, action_set = siga_decide(callee_agent, ctx, mode,
                                         callee_agent.decisions, rng)
        if callee_agent.kind == XSIGA and action_set:
            explanation = build_explanation(action_set)

    callee_payoff = payoffs.callee[
        (relationship_class(ctx.value("callerRel")), action, ctx.value("urgent"))]
    caller_payoff = payoffs.caller[(action, ctx.value("urgent"))]

    neighbor_payoffs, votes = [], []
    for n in world.neighbors(callee, caller):
        vote, payoff = _neighbor_vote_and_payoff(
            agents[n], action, ctx, explanation, payoffs)
        votes.append(vote)
        neighbor_payoffs.append(payoff)

    stakeholders = 2 + len(neighbor_payoffs)  # callee + caller + neighbors
    weights = society_weights(callee_agent.attitude, stakeholders)
    reward = aggregate_reward(weights, callee_payoff, caller_payoff, neighbor_payoffs)

    if callee_agent.kind != FIXED and action_set:
        engine.update_action_set(action_set, reward, hp)
        action_set = engine.action_set_subsumption(
            action_set, callee_agent.population, hp)
        engine.run_ga(action_set, callee_agent.population, ctx,
                      callee_agent.decisions, hp, rng)
        engine.delete_rules(callee_agent.population, hp, rng)

    return Interaction(step, caller, callee, ctx, action, callee_payoff,
                       caller_payoff, neighbor_payoffs, reward, votes,
                       explanation)
