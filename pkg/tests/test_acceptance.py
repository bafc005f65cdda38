"""Acceptance gate: one test per top-level criterion, named and ordered.

The first three criteria are fast oracles and invariants; the rest run
full desk-scale experiments (8 seeded runs x 10,000 steps x 40 agents per
cell) that are built once per session and shared across criteria.
"""

import math
import random
import shutil
import subprocess
import time

import pytest

from ringer import engine
from ringer.classifiers import ClassifierParams, Hyperparameters
from ringer.metrics import adoption, cohens_d, greedy_policy, paired_t_test
from ringer.norms import (ACTIONS, RINGER_SCHEMA, enumerate_antecedents,
                          enumerate_contexts, enumerate_norms,
                          is_more_general, matches, parse_norm)
from ringer.simulation import (ExperimentSpec, default_config_path,
                               run_experiment)
from ringer.world import PayoffTables

HP = Hyperparameters()
CONTEXTS = enumerate_contexts(RINGER_SCHEMA)

URGENT_RING = parse_norm("urgent=true -> ring", RINGER_SCHEMA)
STRANGER_IGNORE = parse_norm("callerRel=stranger & urgent=false -> ignore",
                             RINGER_SCHEMA)
UNIVERSAL_RING = parse_norm("true -> ring", RINGER_SCHEMA)


def run_cell(society, agent_kind, payoff_file=None):
    payoffs = (PayoffTables.from_file(default_config_path(payoff_file))
               if payoff_file else None)
    spec = ExperimentSpec(society=society, agent_kind=agent_kind,
                          runs=8, steps=10000, base_seed=0, payoffs=payoffs)
    return run_experiment(spec)


@pytest.fixture(scope="session")
def pragmatic_cells():
    start = time.monotonic()
    cells = {kind: run_cell("pragmatic", kind)
             for kind in ("fixed", "nsiga", "xsiga")}
    cells["elapsed"] = time.monotonic() - start
    return cells


@pytest.fixture(scope="session")
def selfish_cells():
    return {kind: run_cell("selfish", kind) for kind in ("nsiga", "xsiga")}


@pytest.fixture(scope="session")
def mixed_cells():
    return {kind: run_cell("mixed", kind)
            for kind in ("fixed", "nsiga", "xsiga")}


@pytest.fixture(scope="session")
def appendix_cells():
    return {kind: run_cell("pragmatic", kind, payoff_file="payoffs_appendix.yaml")
            for kind in ("fixed", "nsiga", "xsiga")}


def compare(name, higher, lower, require_d=None):
    """One ordered pairwise comparison; returns an error string or None."""
    a = [getattr(r, name) for r in higher]
    b = [getattr(r, name) for r in lower]
    t, p = paired_t_test(a, b)
    d = cohens_d(a, b)
    mean_a, mean_b = sum(a) / len(a), sum(b) / len(b)
    problems = []
    if mean_a <= mean_b:
        problems.append(f"ordering violated ({mean_a:.3f} <= {mean_b:.3f})")
    if p >= 0.05:
        problems.append(f"p={p:.4g} >= 0.05")
    if require_d is not None and d <= require_d:
        problems.append(f"d={d:.2f} <= {require_d}")
    if problems:
        return (f"{name}: {'; '.join(problems)} "
                f"[means {mean_a:.3f} vs {mean_b:.3f}, t={t:.2f}]")
    return None


def maximal_records(result):
    return {rec.norm: rec for rec in result.adoption_records if rec.maximal}


def test_criterion_01_equation_oracles():
    """Hand-scripted update sequences match the engine to 1e-12."""
    start = time.monotonic()
    pop = engine.Population(HP)
    from ringer.norms import Antecedent, Norm

    def rule(pairs, action, **kw):
        base = dict(prediction=0.0, error=0.0, fitness=0.5, numerosity=1,
                    experience=50, action_set_size_estimate=1.0)
        base.update(kw)
        return pop.insert(Norm(Antecedent.from_pairs(pairs), action),
                          ClassifierParams(**base))

    # prediction / error sequence at the plain learning rate
    cl = rule([], "ring")
    p, e, beta = 0.0, 0.0, HP.learning_rate
    for r in (1.0, -0.5, 0.25, 0.75, 2.0, 0.0):
        engine.update_action_set([cl], r, HP)
        e = e + beta * (abs(r - p) - e)
        p = p + beta * (r - p)
        assert abs(cl.params.prediction - p) < 1e-12
        assert abs(cl.params.error - e) < 1e-12

    # accuracy falloff branch: error 0.02 vs threshold 0.01 -> 0.003125
    accurate = rule([("urgent", "true")], "ring", prediction=0.02, error=0.0)
    sloppy = rule([("urgent", "false")], "ring", prediction=0.0, error=0.02)
    engine.update_action_set([accurate, sloppy], 0.02, HP)
    share_sloppy = (sloppy.params.fitness - 0.5) / beta + 0.5
    share_accurate = (accurate.params.fitness - 0.5) / beta + 0.5
    assert abs(share_sloppy / share_accurate - 0.003125) < 1e-12

    # fitness sequence with a single accurate rule: share is exactly 1
    lone = rule([("calleeLoc", "H")], "ring", fitness=0.01)
    f = 0.01
    for r in (1.0, 1.0, 1.0):
        engine.update_action_set([lone], r, HP)
        f = f + beta * (1.0 - f)
        assert abs(lone.params.fitness - f) < 1e-12

    assert time.monotonic() - start < 1.0


def test_criterion_02_exhaustive_small_space():
    """Matching monotonicity, brute-force adoption, and norm round-trips."""
    start = time.monotonic()
    antecedents = enumerate_antecedents(RINGER_SCHEMA)
    assert len(CONTEXTS) == 40 and len(antecedents) == 90

    for a in antecedents:
        for b in antecedents:
            if is_more_general(a, b):
                for ctx in CONTEXTS:
                    if matches(b, ctx):
                        assert matches(a, ctx)

    rng = random.Random(13)
    policies = [{ctx: rng.choice(("ring", "ignore", None)) for ctx in CONTEXTS}
                for _ in range(10)]
    norms = enumerate_norms(RINGER_SCHEMA)
    assert len(norms) == 180
    for norm in norms:
        brute = sum(
            all(policy[ctx] == norm.consequent
                for ctx in CONTEXTS if matches(norm.antecedent, ctx))
            for policy in policies) / len(policies)
        assert adoption(norm, policies) == pytest.approx(brute, abs=1e-12)
        assert parse_norm(str(norm), RINGER_SCHEMA) == norm

    assert time.monotonic() - start < 5.0


def fuzz_episode(seed, steps=20):
    rng = random.Random(seed)
    pop = engine.Population(HP)
    for step in range(1, steps + 1):
        ctx = CONTEXTS[rng.randrange(len(CONTEXTS))]
        match_set = engine.build_match_set(pop, ctx)
        attempts = 0
        while len({cl.norm.consequent for cl in match_set}) < len(ACTIONS):
            match_set = engine.cover(pop, match_set, ctx, step, rng)
            attempts += 1
            if attempts > 10:
                break
        assert pop.micro_size() <= HP.max_micro_population
        pa = engine.prediction_array(match_set)
        mode = "explore" if rng.random() < 0.3 else "exploit"
        action = engine.select_action(pa, mode, rng)
        action_set = [cl for cl in match_set if cl.norm.consequent == action]
        if not action_set:
            continue
        engine.update_action_set(action_set, rng.uniform(-2.0, 2.0), HP)
        before = pop.micro_size()
        action_set = engine.action_set_subsumption(action_set, pop, HP)
        assert pop.micro_size() == before
        engine.run_ga(action_set, pop, ctx, step, HP, rng)
        engine.delete_rules(pop, HP, rng)
        assert pop.micro_size() <= HP.max_micro_population
    return pop.dump()


def test_criterion_03_engine_invariants_under_fuzzing():
    """10^3 random episodes: cap, subsumption conservation, seed replay."""
    start = time.monotonic()
    for seed in range(1000):
        fuzz_episode(seed)
    for seed in (0, 17, 500, 999):
        assert fuzz_episode(seed) == fuzz_episode(seed)
    assert time.monotonic() - start < 30.0


def test_criterion_04_pragmatic_ordering(pragmatic_cells):
    """Experience and cohesion: XSIGA > NSIGA > Fixed, p < 0.05, d > 0.8."""
    fixed = pragmatic_cells["fixed"]
    nsiga = pragmatic_cells["nsiga"]
    xsiga = pragmatic_cells["xsiga"]
    failures = []
    for metric in ("mean_social_experience", "mean_cohesion"):
        for hi, lo, label in ((xsiga, nsiga, "xsiga>nsiga"),
                              (nsiga, fixed, "nsiga>fixed"),
                              (xsiga, fixed, "xsiga>fixed")):
            problem = compare(metric, hi, lo, require_d=0.8)
            if problem:
                failures.append(f"{label} {problem}")
    assert pragmatic_cells["elapsed"] < 300.0
    assert not failures, "pragmatic ordering violated: " + " | ".join(failures)


def test_criterion_05_selfish_norm_coincidence(selfish_cells):
    """NSIGA and XSIGA maximal sets both contain the two selfish norms at
    adoption >= 0.90 and coincide, in at least 6 of 8 seeds."""
    passing, detail = 0, []
    for n_run, x_run in zip(selfish_cells["nsiga"], selfish_cells["xsiga"]):
        n_max, x_max = maximal_records(n_run), maximal_records(x_run)
        sets_equal = set(n_max) == set(x_max)
        seed_ok = sets_equal
        adoptions = []
        for records in (n_max, x_max):
            for norm in (URGENT_RING, STRANGER_IGNORE):
                rec = records.get(norm)
                adoptions.append(rec.adoption if rec else 0.0)
                if rec is None or rec.adoption < 0.90:
                    seed_ok = False
        passing += seed_ok
        detail.append(f"seed {n_run.seed}: sets_equal={sets_equal} "
                      f"adoptions={['%.3f' % a for a in adoptions]}")
    assert passing >= 6, (f"selfish norm coincidence held in {passing}/8 seeds; "
                          + "; ".join(detail))


def test_criterion_06_pragmatic_xsiga_generality(pragmatic_cells):
    """The fully general ring norm is maximal at >= 0.90 in >= 6 of 8 seeds."""
    passing, detail = 0, []
    for run in pragmatic_cells["xsiga"]:
        rec = maximal_records(run).get(UNIVERSAL_RING)
        ok = rec is not None and rec.adoption >= 0.90
        passing += ok
        detail.append(f"seed {run.seed}: "
                      + (f"adoption={rec.adoption:.3f}" if rec else "absent"))
    assert passing >= 6, (f"'true -> ring' maximal in {passing}/8 seeds; "
                          + "; ".join(detail))


def test_criterion_07_mixed_society_ordering(mixed_cells):
    """Mixed society: XSIGA > NSIGA > Fixed social experience, p < 0.05."""
    failures = []
    for hi, lo, label in ((mixed_cells["xsiga"], mixed_cells["nsiga"], "xsiga>nsiga"),
                          (mixed_cells["nsiga"], mixed_cells["fixed"], "nsiga>fixed"),
                          (mixed_cells["xsiga"], mixed_cells["fixed"], "xsiga>fixed")):
        problem = compare("mean_social_experience", hi, lo)
        if problem:
            failures.append(f"{label} {problem}")
    assert not failures, "mixed ordering violated: " + " | ".join(failures)


def test_criterion_08_statistics_oracles():
    """Hand-computed t, p, d on fixed 4-element fixtures, to 1e-9."""
    t, p = paired_t_test([2.10, 2.50, 3.00, 2.80], [1.90, 2.30, 2.90, 2.40])
    assert abs(t - 3.576237364075622) < 1e-9
    assert abs(p - 0.037386073468498544) < 1e-9
    d = cohens_d([2.10, 2.50, 3.00, 2.80], [1.90, 2.30, 2.90, 2.40])
    assert abs(d - 0.5603155257282204) < 1e-9
    t2, p2 = paired_t_test([0.5, 0.75, 1.0, 1.25], [0.9, 0.8, 1.1, 1.2])
    assert abs(t2 - -1.2909944487358058) < 1e-9
    assert abs(p2 - 0.28718974106973444) < 1e-9
    assert paired_t_test([1.0, 2.0], [1.0, 2.0]) == (0.0, 1.0)
    assert cohens_d([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0


def test_criterion_09_alternate_payoffs_ordering(appendix_cells):
    """Alternate payoff tables keep XSIGA > NSIGA > Fixed experience, p < 0.05."""
    failures = []
    for hi, lo, label in ((appendix_cells["xsiga"], appendix_cells["nsiga"], "xsiga>nsiga"),
                          (appendix_cells["nsiga"], appendix_cells["fixed"], "nsiga>fixed"),
                          (appendix_cells["xsiga"], appendix_cells["fixed"], "xsiga>fixed")):
        problem = compare("mean_social_experience", hi, lo)
        if problem:
            failures.append(f"{label} {problem}")
    assert not failures, "alternate-payoff ordering violated: " + " | ".join(failures)


def test_criterion_10_plotting_smoke(tmp_path):
    """Secondary plotting commands render fixtures and reject empty input."""
    if not (shutil.which("plot-experience") and shutil.which("plot-adoption")):
        pytest.skip("plotting component not installed")
    metrics = tmp_path / "metrics.csv"
    lines = ["run,step,society,agent_kind,social_experience,cohesion"]
    for kind in ("fixed", "nsiga", "xsiga"):
        for run in range(2):
            for step in range(100, 1100, 100):
                lines.append(f"{run},{step},pragmatic,{kind},"
                             f"{0.5 + step / 10000:.6f},0.800000")
    metrics.write_text("\n".join(lines) + "\n")
    norms = tmp_path / "norms.csv"
    rows = ["run,antecedent,consequent,adoption,emerged,maximal"]
    locs = ("ER", "H", "L", "M", "P")
    for i in range(10):
        action = "ring" if i % 2 else "ignore"
        rows.append(f"0,calleeLoc={locs[i % 5]} & urgent={str(i < 5).lower()},"
                    f"{action},{i / 10:.6f},{i / 10 >= 0.9},False")
    norms.write_text("\n".join(rows) + "\n")

    exp_img = tmp_path / "experience.png"
    out = subprocess.run(["plot-experience", str(metrics), "-o", str(exp_img)],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert exp_img.exists() and exp_img.stat().st_size > 0

    adopt_img = tmp_path / "adoption.png"
    out = subprocess.run(["plot-adoption", str(norms), "-o", str(adopt_img)],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert adopt_img.exists() and adopt_img.stat().st_size > 0

    empty = tmp_path / "empty.csv"
    empty.write_text("")
    for cmd in ("plot-experience", "plot-adoption"):
        out = subprocess.run([cmd, str(empty), "-o", str(tmp_path / "x.png")],
                             capture_output=True, text=True)
        assert out.returncode != 0
        assert out.stderr
