"""Classifier records and learning hyperparameters."""

from dataclasses import dataclass, field, fields


@dataclass
class Hyperparameters:
    """Learning knobs; defaults follow the standard settings for a small rule space."""

    max_micro_population: int = 30        # N_max
    dont_care_prob: float = 0.3           # probability a covered rule drops a property
    error_threshold: float = 0.01         # below this a rule counts as accurate
    fitness_exponent: float = 5.0         # sharpens the error -> accuracy falloff
    learning_rate: float = 0.1
    scaling_factor: float = 0.1           # accuracy scale for inaccurate rules
    ga_threshold: float = 25.0            # mean experience (and step gap) gate for breeding
    mutation_prob: float = 0.4
    crossover_prob: float = 0.8
    deletion_experience_threshold: float = 20.0
    subsumption_experience_threshold: float = 20.0
    fitness_falloff: float = 0.1          # low-fitness deletion pressure kicks in below this
    explore_prob: float = 0.05
    tournament_fraction: float = 0.3

    def __post_init__(self):
        for name in ("dont_care_prob", "mutation_prob", "crossover_prob",
                     "explore_prob", "tournament_fraction"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.max_micro_population < 1:
            raise ValueError("max_micro_population must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.error_threshold <= 0.0:
            raise ValueError("error_threshold must be positive")

    def replace(self, **overrides):
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(overrides)
        return Hyperparameters(**current)


@dataclass
class ClassifierParams:
    """Mutable learning state of one classifier."""

    prediction: float = 0.01
    error: float = 0.0
    fitness: float = 0.01
    numerosity: int = 1
    experience: int = 0
    action_set_size_estimate: float = 1.0
    last_ga_step: int = 0


@dataclass
class Classifier:
    """A norm plus its learning parameters; the unit of breeding and explanation."""

    norm: object  # Norm
    params: ClassifierParams = field(default_factory=ClassifierParams)
    birth: int = 0  # insertion sequence within the owning population

    def dump_line(self):
        p = self.params
        return (f"{self.norm} | p={p.prediction:.6f} e={p.error:.6f} "
                f"F={p.fitness:.6f} n={p.numerosity} exp={p.experience}")
