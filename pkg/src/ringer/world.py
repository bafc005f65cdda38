"""The RINGER world: locations, circles, movement, call generation,
payoff lookup, and reward aggregation.

Agents occupy one of a fixed set of locations (homes, parties, meetings,
a library, an emergency room). Homes, parties, and meetings carry circles
(family, friend, colleague). Each step agents whose stay timer expires
relocate, then each agent may place a call.
"""

from dataclasses import dataclass, field

import yaml

from .norms import IGNORE, RING, RINGER_SCHEMA, Context

RELATIONSHIPS = ("family", "friend", "colleague", "stranger")
LOCATION_KINDS = {"H": "homes", "P": "parties", "M": "meetings",
                  "L": "libraries", "ER": "emergencyRooms"}
# config/report naming: tables render ring as "answer"
ACTION_LABELS = {RING: "answer", IGNORE: "ignore"}
LABEL_ACTIONS = {v: k for k, v in ACTION_LABELS.items()}


class ConfigError(ValueError):
    """A config file is missing entries or holds invalid values."""


@dataclass
class WorldConfig:
    numAgents: int = 40
    homes: int = 10
    parties: int = 4
    meetings: int = 4
    libraries: int = 1
    emergencyRooms: int = 1
    stayMean: float = 60.0
    staySd: float = 30.0
    stayClamp: tuple = (30, 90)
    ownCircleLocationProb: float = 0.75
    callProbMean: float = 0.05
    callProbSd: float = 0.01
    relationshipCategoryProb: float = 0.25
    urgentProb: float = 0.5
    steps: int = 10000

    def __post_init__(self):
        problems = []
        for name in ("ownCircleLocationProb", "callProbMean", "callProbSd",
                     "relationshipCategoryProb", "urgentProb"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                problems.append(f"{name} must be in [0, 1], got {p}")
        lo, hi = self.stayClamp
        if not 0 < lo <= hi:
            problems.append(f"stayClamp must be a positive range, got {self.stayClamp}")
        if self.numAgents < 2:
            problems.append("numAgents must be >= 2")
        if problems:
            raise ConfigError("; ".join(problems))

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            raw = yaml.safe_load(fh) or {}
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown world config keys: {sorted(unknown)}")
        if "stayClamp" in raw:
            raw["stayClamp"] = tuple(raw["stayClamp"])
        return cls(**raw)


@dataclass
class AgentProfile:
    id: int
    family_circle: int    # home location index
    friend_circle: int    # party location index
    colleague_circle: int  # meeting location index
    attitude: str = "pragmatic"
    call_prob: float = 0.05


class PayoffTables:
    """Callee, caller, and neighbor payoffs, keyed as in the scenario tables."""

    def __init__(self, callee, caller, neighbor_fixed, neighbor_explained):
        self.callee = callee                      # (relClass, action, urgent) -> payoff
        self.caller = caller                      # (action, urgent) -> payoff
        self.neighbor_fixed = neighbor_fixed      # (action, loc) -> payoff
        self.neighbor_explained = neighbor_explained  # (action, expected, loc) -> payoff
        self._validate()

    def _validate(self):
        missing = []
        for rel in ("known", "stranger"):
            for action in (RING, IGNORE):
                for urgent in ("true", "false"):
                    if (rel, action, urgent) not in self.callee:
                        missing.append(f"callee[{rel},{ACTION_LABELS[action]},{urgent}]")
        for action in (RING, IGNORE):
            for urgent in ("true", "false"):
                if (action, urgent) not in self.caller:
                    missing.append(f"caller[{ACTION_LABELS[action]},{urgent}]")
            for loc in LOCATION_KINDS:
                if (action, loc) not in self.neighbor_fixed:
                    missing.append(f"neighborFixed[{ACTION_LABELS[action]},{loc}]")
                for expected in (RING, IGNORE):
                    if (action, expected, loc) not in self.neighbor_explained:
                        missing.append(
                            f"neighborExplained[{ACTION_LABELS[action]},"
                            f"{ACTION_LABELS[expected]},{loc}]")
        if missing:
            raise ConfigError("missing payoff entries: " + ", ".join(missing))

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            raw = yaml.safe_load(fh)
        try:
            callee = {}
            for rel, by_action in raw["callee"].items():
                for label, by_urgency in by_action.items():
                    callee[(rel, LABEL_ACTIONS[label], "false")] = float(by_urgency["casual"])
                    callee[(rel, LABEL_ACTIONS[label], "true")] = float(by_urgency["urgent"])
            caller = {}
            for label, by_urgency in raw["caller"].items():
                caller[(LABEL_ACTIONS[label], "false")] = float(by_urgency["casual"])
                caller[(LABEL_ACTIONS[label], "true")] = float(by_urgency["urgent"])
            neighbor_fixed = {}
            for label, by_loc in raw["neighborFixed"].items():
                for loc, value in by_loc.items():
                    neighbor_fixed[(LABEL_ACTIONS[label], loc)] = float(value)
            neighbor_explained = {}
            for label, by_expected in raw["neighborExplained"].items():
                for expected_label, by_loc in by_expected.items():
                    for loc, value in by_loc.items():
                        neighbor_explained[
                            (LABEL_ACTIONS[label], LABEL_ACTIONS[expected_label], loc)
                        ] = float(value)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed payoff file {path}: {exc}") from exc
        return cls(callee, caller, neighbor_fixed, neighbor_explained)


def relationship_class(rel):
    return "stranger" if rel == "stranger" else "known"


@dataclass
class SocietyWeights:
    """Self vs. others split of the reward; others share their weight equally."""

    w_self: float
    w_others: float


def society_weights(attitude, stakeholders):
    """Weights for one interaction with `stakeholders` participants (incl. self)."""
    if attitude == "selfish":
        return SocietyWeights(1.0, 0.0)
    if attitude == "considerate":
        return SocietyWeights(0.0, 1.0)
    if attitude == "pragmatic":
        return SocietyWeights(1.0 / stakeholders, (stakeholders - 1) / stakeholders)
    raise ValueError(f"unknown attitude {attitude!r}")


def aggregate_reward(weights, callee_payoff, caller_payoff, neighbor_payoffs):
    """Weighted sum: own payoff vs. the mean payoff of caller and neighbors."""
    others = [caller_payoff] + list(neighbor_payoffs)
    return (weights.w_self * callee_payoff
            + weights.w_others * sum(others) / len(others))


class World:
    """Location occupancy, stay timers, and call generation for one run."""

    def __init__(self, config, rng):
        self.config = config
        self.rng = rng
        self.locations = []   # (kind, circle_ordinal) per location index
        for kind in ("H", "P", "M", "L", "ER"):
            count = getattr(config, LOCATION_KINDS[kind])
            for i in range(count):
                self.locations.append((kind, i))
        self.profiles = self._assign_circles()
        self.position = [0] * config.numAgents
        self.stay_left = [0] * config.numAgents
        self._members = {}  # (kind, ordinal) -> list of agent ids, for call targets
        for p in self.profiles:
            self._members.setdefault(("H", self.locations[p.family_circle][1]), []).append(p.id)
            self._members.setdefault(("P", self.locations[p.friend_circle][1]), []).append(p.id)
            self._members.setdefault(("M", self.locations[p.colleague_circle][1]), []).append(p.id)
        for agent in range(config.numAgents):
            self._relocate(agent)

    def _assign_circles(self):
        cfg, rng = self.config, self.rng
        homes = [i for i, (k, _) in enumerate(self.locations) if k == "H"]
        parties = [i for i, (k, _) in enumerate(self.locations) if k == "P"]
        meetings = [i for i, (k, _) in enumerate(self.locations) if k == "M"]
        profiles = []
        for agent in range(cfg.numAgents):
            call_prob = min(1.0, max(0.0, rng.gauss(cfg.callProbMean, cfg.callProbSd)))
            profiles.append(AgentProfile(
                id=agent,
                family_circle=homes[agent % len(homes)],
                friend_circle=parties[agent % len(parties)],
                colleague_circle=meetings[agent % len(meetings)],
                call_prob=call_prob,
            ))
        # deal circles over a shuffled order so circle composition varies by seed
        order = list(range(cfg.numAgents))
        rng.shuffle(order)
        for slot, agent in enumerate(order):
            profiles[agent].family_circle = homes[slot % len(homes)]
            profiles[agent].friend_circle = parties[slot % len(parties)]
            profiles[agent].colleague_circle = meetings[slot % len(meetings)]
        return profiles

    def _draw_stay(self):
        cfg = self.config
        lo, hi = cfg.stayClamp
        while True:
            stay = self.rng.gauss(cfg.stayMean, cfg.staySd)
            if lo <= stay <= hi:
                return round(stay)

    def _relocate(self, agent):
        profile = self.profiles[agent]
        own = (profile.family_circle, profile.friend_circle, profile.colleague_circle)
        if self.rng.random() < self.config.ownCircleLocationProb:
            target = own[self.rng.randrange(3)]
        else:
            others = [i for i in range(len(self.locations)) if i not in own]
            target = others[self.rng.randrange(len(others))]
        self.position[agent] = target
        self.stay_left[agent] = self._draw_stay()

    def step_movement(self):
        for agent in range(self.config.numAgents):
            self.stay_left[agent] -= 1
            if self.stay_left[agent] <= 0:
                self._relocate(agent)

    def location_kind(self, agent):
        return self.locations[self.position[agent]][0]

    def neighbors(self, callee, caller):
        """Agents co-located with the callee; the callee and caller excluded."""
        pos = self.position[callee]
        return [a for a in range(self.config.numAgents)
                if self.position[a] == pos and a != callee and a != caller]

    def _category_members(self, caller, rel):
        profile = self.profiles[caller]
        if rel == "family":
            pool = self._members[("H", self.locations[profile.family_circle][1])]
        elif rel == "friend":
            pool = self._members[("P", self.locations[profile.friend_circle][1])]
        elif rel == "colleague":
            pool = self._members[("M", self.locations[profile.colleague_circle][1])]
        else:
            circles = {profile.family_circle, profile.friend_circle,
                       profile.colleague_circle}
            pool = [a for a in range(self.config.numAgents)
                    if not circles & {self.profiles[a].family_circle,
                                      self.profiles[a].friend_circle,
                                      self.profiles[a].colleague_circle}]
        return [a for a in pool if a != caller]

    def generate_calls(self):
        """One (caller, callee, context) per agent that fires this step."""
        cfg, rng = self.config, self.rng
        calls = []
        for caller in range(cfg.numAgents):
            if rng.random() >= self.profiles[caller].call_prob:
                continue
            candidates, rel = [], None
            remaining = list(RELATIONSHIPS)
            while remaining and not candidates:
                rel = remaining[rng.randrange(len(remaining))]
                candidates = self._category_members(caller, rel)
                remaining.remove(rel)  # empty category: redraw among the rest
            if not candidates:
                continue
            callee = candidates[rng.randrange(len(candidates))]
            urgent = "true" if rng.random() < cfg.urgentProb else "false"
            ctx = Context.of(RINGER_SCHEMA,
                             calleeLoc=self.location_kind(callee),
                             callerRel=rel, urgent=urgent)
            calls.append((caller, callee, ctx))
        return calls
