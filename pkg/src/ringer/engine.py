"""Rule-learning core: match sets, covering, prediction, parameter updates,
subsumption, genetic discovery, and deletion.

The population holds one classifier per distinct norm; duplicates merge by
incrementing numerosity. After every public operation the micro-population
(sum of numerosities) stays within the configured cap.
"""

import math

from .classifiers import Classifier, ClassifierParams
from .norms import ACTIONS, Antecedent, Norm, is_more_general, matches


class EmptyPredictionError(ValueError):
    """Action selection was attempted before covering guaranteed support."""


class Population:
    """One agent's rule store, keyed by norm."""

    def __init__(self, hp, actions=ACTIONS):
        self.hp = hp
        self.actions = actions
        self.classifiers = {}  # Norm -> Classifier, insertion-ordered
        self._births = 0

    def __iter__(self):
        return iter(self.classifiers.values())

    def __len__(self):
        return len(self.classifiers)

    def micro_size(self):
        return sum(cl.params.numerosity for cl in self.classifiers.values())

    def insert(self, norm, params):
        """Add a classifier, merging with an existing one for the same norm."""
        existing = self.classifiers.get(norm)
        if existing is not None:
            existing.params.numerosity += params.numerosity
            return existing
        cl = Classifier(norm, params, birth=self._births)
        self._births += 1
        self.classifiers[norm] = cl
        return cl

    def remove(self, cl):
        del self.classifiers[cl.norm]

    def dump(self):
        """One classifier per line, floats at 6 decimals."""
        return "\n".join(cl.dump_line() for cl in self.classifiers.values())


def build_match_set(pop, ctx):
    return [cl for cl in pop if matches(cl.norm.antecedent, ctx)]


def cover(pop, match_set, ctx, current_step, rng):
    """Add one random matching rule per action missing from the match set.

    Each context property is dropped from the new antecedent independently
    with the don't-care probability. The population cap is then re-enforced.
    """
    present = {cl.norm.consequent for cl in match_set}
    missing = [a for a in pop.actions if a not in present]
    if not missing:
        return match_set
    hp = pop.hp
    added = []
    for action in missing:
        pairs = tuple(
            (k, v) for k, v in ctx.assignments if rng.random() >= hp.dont_care_prob
        )
        params = ClassifierParams(
            prediction=0.01, error=0.0, fitness=0.01, numerosity=1,
            experience=0, action_set_size_estimate=1.0,
            last_ga_step=current_step,
        )
        added.append(pop.insert(Norm(Antecedent(pairs), action), params))
    delete_rules(pop, hp, rng)
    # deletion may have evicted anything, including the covered rules
    return build_match_set(pop, ctx)


def prediction_array(match_set):
    """Fitness-weighted mean prediction per supported action."""
    sums = {}
    for cl in match_set:
        action = cl.norm.consequent
        p, f = sums.get(action, (0.0, 0.0))
        sums[action] = (p + cl.params.prediction * cl.params.fitness,
                        f + cl.params.fitness)
    return {
        action: (weighted / total if total > 0.0 else 0.0)
        for action, (weighted, total) in sums.items()
    }


def select_action(pa, mode, rng, actions=ACTIONS):
    """Exploit: argmax with ties broken by fixed action order. Explore: uniform."""
    if mode == "explore":
        return actions[rng.randrange(len(actions))]
    if not pa:
        raise EmptyPredictionError("no supported actions; covering must run first")
    best, best_value = None, -math.inf
    for action in actions:
        if action in pa and pa[action] > best_value:
            best, best_value = action, pa[action]
    return best


def update_action_set(action_set, reward, hp):
    """Reinforce every member of the action set with the received reward.

    Prediction and error move toward the reward by the learning rate; the
    error update uses the pre-update prediction. While a rule's experience
    is below 1/learning-rate, these updates average over all observations
    (moyenne adaptative modifiee) so young rules converge in a handful of
    samples instead of drifting up from their initial values. Fitness
    chases the numerosity-weighted share of accuracy within the set.
    """
    beta = hp.learning_rate
    set_size = sum(cl.params.numerosity for cl in action_set)
    kappas = []
    for cl in action_set:
        p = cl.params
        p.experience += 1
        rate = max(beta, 1.0 / p.experience)
        surprise = abs(reward - p.prediction)
        p.error += rate * (surprise - p.error)
        p.prediction += rate * (reward - p.prediction)
        if p.error < hp.error_threshold:
            kappa = 1.0
        else:
            kappa = hp.scaling_factor * (p.error / hp.error_threshold) ** (-hp.fitness_exponent)
        kappas.append(kappa)
    total = sum(k * cl.params.numerosity for k, cl in zip(kappas, action_set))
    for kappa, cl in zip(kappas, action_set):
        p = cl.params
        share = kappa * p.numerosity / total if total > 0.0 else 0.0
        p.fitness += beta * (share - p.fitness)
        rate = max(beta, 1.0 / p.experience)
        p.action_set_size_estimate += rate * (set_size - p.action_set_size_estimate)


def _can_subsume(cl, hp):
    return (cl.params.experience > hp.subsumption_experience_threshold
            and cl.params.error < hp.error_threshold)


def action_set_subsumption(action_set, pop, hp):
    """Fold each member into the most general accurate, experienced member.

    Numerosity is conserved: removed members add theirs to the subsumer.
    Returns the surviving action set.
    """
    candidates = [cl for cl in action_set if _can_subsume(cl, hp)]
    if not candidates:
        return action_set
    subsumer = min(
        candidates,
        key=lambda cl: (len(cl.norm.antecedent), -cl.params.numerosity, cl.birth),
    )
    survivors = []
    for cl in action_set:
        if cl is not subsumer and is_more_general(subsumer.norm.antecedent,
                                                  cl.norm.antecedent):
            subsumer.params.numerosity += cl.params.numerosity
            pop.remove(cl)
        else:
            survivors.append(cl)
    return survivors


def crossover(a, b, rng):
    """Per-key swap: each key present in either parent trades sides with p=0.5."""
    da, db = a.as_dict(), b.as_dict()
    for key in sorted(set(da) | set(db)):
        if rng.random() < 0.5:
            va, vb = da.pop(key, None), db.pop(key, None)
            if vb is not None:
                da[key] = vb
            if va is not None:
                db[key] = va
    return Antecedent.from_pairs(da.items()), Antecedent.from_pairs(db.items())


def mutate(antecedent, ctx, hp, rng):
    """Toggle each schema key with the mutation probability.

    A removed key leaves the antecedent; an added key takes its value
    from the current context, so the result still matches the context
    wherever they agree.
    """
    pairs = antecedent.as_dict()
    for key, value in ctx.assignments:
        if rng.random() < hp.mutation_prob:
            if key in pairs:
                del pairs[key]
            else:
                pairs[key] = value
    return Antecedent.from_pairs(pairs.items())


def child_subsumption(child, parents, pop, hp):
    """Absorb a child into an accurate, experienced, strictly more general parent.

    Returns the classifier holding the child's weight (parent or inserted).
    """
    norm, params = child
    for parent in parents:
        if (parent.norm.consequent == norm.consequent
                and is_more_general(parent.norm.antecedent, norm.antecedent)
                and _can_subsume(parent, hp)):
            parent.params.numerosity += 1
            return parent
    return pop.insert(norm, params)


def _tournament(action_set, rng, hp):
    size = max(1, math.ceil(hp.tournament_fraction * len(action_set)))
    entrants = [action_set[rng.randrange(len(action_set))] for _ in range(size)]
    return max(entrants, key=lambda cl: (cl.params.fitness, cl.params.prediction))


def run_ga(action_set, pop, ctx, current_step, hp, rng):
    """Breed two children from the action set when it is experienced enough.

    Gated on the numerosity-weighted mean experience and on the mean time
    since the set last bred, both against the GA threshold.
    """
    if not action_set:
        return
    total_n = sum(cl.params.numerosity for cl in action_set)
    mean_exp = sum(cl.params.experience * cl.params.numerosity
                   for cl in action_set) / total_n
    mean_last = sum(cl.params.last_ga_step * cl.params.numerosity
                    for cl in action_set) / total_n
    if mean_exp < hp.ga_threshold or current_step - mean_last < hp.ga_threshold:
        return
    for cl in action_set:
        cl.params.last_ga_step = current_step

    parent1 = _tournament(action_set, rng, hp)
    parent2 = _tournament(action_set, rng, hp)
    ant1, ant2 = parent1.norm.antecedent, parent2.norm.antecedent
    if rng.random() < hp.crossover_prob:
        ant1, ant2 = crossover(ant1, ant2, rng)
    ant1 = mutate(ant1, ctx, hp, rng)
    ant2 = mutate(ant2, ctx, hp, rng)

    p1, p2 = parent1.params, parent2.params
    mean_p = (p1.prediction + p2.prediction) / 2
    mean_e = (p1.error + p2.error) / 2
    mean_f = (p1.fitness + p2.fitness) / 2
    mean_as = (p1.action_set_size_estimate + p2.action_set_size_estimate) / 2
    for ant, parent in ((ant1, parent1), (ant2, parent2)):
        params = ClassifierParams(
            prediction=mean_p, error=mean_e, fitness=0.1 * mean_f,
            numerosity=1, experience=0, action_set_size_estimate=mean_as,
            last_ga_step=current_step,
        )
        child = (Norm(ant, parent.norm.consequent), params)
        child_subsumption(child, (parent1, parent2), pop, hp)
    delete_rules(pop, hp, rng)


def _deletion_vote(cl, mean_fitness_per_micro, hp):
    p = cl.params
    vote = p.action_set_size_estimate * p.numerosity
    fitness_per_micro = p.fitness / p.numerosity
    if (p.experience > hp.deletion_experience_threshold
            and fitness_per_micro < hp.fitness_falloff * mean_fitness_per_micro
            and fitness_per_micro > 0.0):
        vote *= mean_fitness_per_micro / fitness_per_micro
    return vote


def delete_rules(pop, hp, rng):
    """Roulette-delete micro-classifiers until the cap holds.

    Votes scale with action-set-size estimate and numerosity; experienced
    rules whose per-copy fitness falls far below the population mean are
    penalized proportionally.
    """
    while True:
        micro = pop.micro_size()
        if micro <= hp.max_micro_population:
            return
        classifiers = list(pop)
        mean_fitness = sum(cl.params.fitness for cl in classifiers) / micro
        votes = [_deletion_vote(cl, mean_fitness, hp) for cl in classifiers]
        pick = rng.random() * sum(votes)
        acc = 0.0
        chosen = classifiers[-1]
        for cl, vote in zip(classifiers, votes):
            acc += vote
            if pick < acc:
                chosen = cl
                break
        chosen.params.numerosity -= 1
        if chosen.params.numerosity == 0:
            pop.remove(chosen)
