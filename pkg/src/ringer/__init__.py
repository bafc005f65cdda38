"""Deterministic multi-agent simulator in which agents learn explicit
IF-THEN norms through an accuracy-based classifier system, optionally
exchange explanations for norm violations, and are compared on social
experience, cohesion, and norm adoption.
"""

from .classifiers import Classifier, ClassifierParams, Hyperparameters
from .norms import (ACTIONS, IGNORE, RING, RINGER_SCHEMA, Antecedent, Context,
                    ContextSchema, Norm, enumerate_contexts, enumerate_norms,
                    is_more_general, matches, parse_norm)
from .simulation import ExperimentSpec, run_experiment, run_simulation, run_stats

__all__ = [
    "ACTIONS", "IGNORE", "RING", "RINGER_SCHEMA",
    "Antecedent", "Classifier", "ClassifierParams", "Context", "ContextSchema",
    "ExperimentSpec", "Hyperparameters", "Norm",
    "enumerate_contexts", "enumerate_norms", "is_more_general", "matches",
    "parse_norm", "run_experiment", "run_simulation", "run_stats",
]
