"""Contexts, antecedents, and norms: the shared vocabulary of the simulator.

A norm is an IF-THEN rule whose antecedent is a conjunction of
(property, value) pairs over a fixed context schema and whose consequent
is an action. The RINGER schema has three properties (callee location,
caller relationship, urgency) for a total of 40 full contexts.
"""

from dataclasses import dataclass
from itertools import product

RING = "ring"
IGNORE = "ignore"
ACTIONS = (RING, IGNORE)  # fixed order; ties in exploit mode resolve to ring


class SchemaMismatchError(ValueError):
    """A key or value falls outside the context schema."""


class ContextSchema:
    """Immutable, ordered description of the contextual properties.

    Keys are stored sorted lexicographically; value sets keep their
    sorted order too, so enumeration is deterministic.
    """

    def __init__(self, properties):
        keys = [k for k, _ in properties]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate schema keys")
        items = sorted((k, tuple(sorted(vs))) for k, vs in properties)
        for k, vs in items:
            if not vs:
                raise ValueError(f"empty value set for {k!r}")
        self.keys = tuple(k for k, _ in items)
        self.values = {k: vs for k, vs in items}

    def __eq__(self, other):
        return isinstance(other, ContextSchema) and self.values == other.values

    def check_pair(self, key, value):
        if key not in self.values:
            raise SchemaMismatchError(f"unknown context key {key!r}")
        if value not in self.values[key]:
            raise SchemaMismatchError(f"invalid value {value!r} for key {key!r}")


RINGER_SCHEMA = ContextSchema([
    ("calleeLoc", ("ER", "H", "L", "M", "P")),
    ("callerRel", ("family", "friend", "colleague", "stranger")),
    ("urgent", ("true", "false")),
])


@dataclass(frozen=True, slots=True)
class Context:
    """A full assignment of every schema property."""

    assignments: tuple  # ((key, value), ...) sorted by key

    @classmethod
    def of(cls, schema, **kwargs):
        if set(kwargs) != set(schema.keys):
            raise SchemaMismatchError("context must assign every schema key exactly once")
        for k, v in kwargs.items():
            schema.check_pair(k, v)
        return cls(tuple((k, kwargs[k]) for k in schema.keys))

    def value(self, key):
        for k, v in self.assignments:
            if k == key:
                return v
        raise SchemaMismatchError(f"unknown context key {key!r}")

    def as_dict(self):
        return dict(self.assignments)

    def __str__(self):
        return " & ".join(f"{k}={v}" for k, v in self.assignments)


@dataclass(frozen=True, slots=True)
class Antecedent:
    """A conjunction of (key, value) pairs; empty means "true"."""

    pairs: tuple  # ((key, value), ...) sorted by key, at most one per key

    @classmethod
    def of(cls, schema, **kwargs):
        for k, v in kwargs.items():
            schema.check_pair(k, v)
        return cls(tuple(sorted(kwargs.items())))

    @classmethod
    def from_pairs(cls, pairs):
        items = sorted(pairs)
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate antecedent keys")
        return cls(tuple(items))

    def as_dict(self):
        return dict(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        if not self.pairs:
            return "true"
        return " & ".join(f"{k}={v}" for k, v in self.pairs)


TRUE_ANTECEDENT = Antecedent(())


def matches(antecedent, context):
    """True iff every antecedent pair equals the context's assignment."""
    ctx = context.as_dict()
    for k, v in antecedent.pairs:
        if k not in ctx:
            raise SchemaMismatchError(f"antecedent key {k!r} outside context schema")
        if ctx[k] != v:
            return False
    return True


def holds_in_partial(antecedent, observable):
    """True iff every antecedent pair is present and equal in a partial context.

    `observable` is itself an Antecedent: the subset of the context an
    observer can see. Pairs the observer cannot see count as not holding.
    """
    obs = observable.as_dict()
    return all(obs.get(k) == v for k, v in antecedent.pairs)


def is_more_general(a, b):
    """True iff a's pair set is a strict subset of b's."""
    sa, sb = set(a.pairs), set(b.pairs)
    return sa < sb


@dataclass(frozen=True, slots=True)
class Norm:
    """IF antecedent THEN consequent."""

    antecedent: Antecedent
    consequent: str

    def __str__(self):
        return f"{self.antecedent} -> {self.consequent}"


def format_norm(norm):
    return str(norm)


def parse_antecedent(text, schema):
    text = text.strip()
    if text == "true":
        return TRUE_ANTECEDENT
    pairs = []
    for part in text.split(" & "):
        key, _, value = part.partition("=")
        schema.check_pair(key, value)
        pairs.append((key, value))
    return Antecedent.from_pairs(pairs)


def parse_norm(text, schema, actions=ACTIONS):
    ant_text, sep, action = text.rpartition(" -> ")
    if not sep:
        raise ValueError(f"not a norm: {text!r}")
    action = action.strip()
    if action not in actions:
        raise ValueError(f"unknown action {action!r}")
    return Norm(parse_antecedent(ant_text, schema), action)


def enumerate_contexts(schema):
    """All full contexts in lexicographic (key, then value) order."""
    value_lists = [schema.values[k] for k in schema.keys]
    return [
        Context(tuple(zip(schema.keys, combo)))
        for combo in product(*value_lists)
    ]


def enumerate_antecedents(schema):
    """All antecedents with at most one value per key (RINGER: 90)."""
    options = [[None] + list(schema.values[k]) for k in schema.keys]
    result = []
    for combo in product(*options):
        pairs = tuple(
            (k, v) for k, v in zip(schema.keys, combo) if v is not None
        )
        result.append(Antecedent(pairs))
    return result


def enumerate_norms(schema, actions=ACTIONS):
    """All candidate norms (RINGER: 90 antecedents x 2 actions = 180)."""
    return [
        Norm(ant, action)
        for ant in enumerate_antecedents(schema)
        for action in actions
    ]
