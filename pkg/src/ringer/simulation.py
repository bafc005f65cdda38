"""Run orchestration: a single seeded simulation run, experiment grids,
and CSV emission.
"""

import csv
import os
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .agents import AGENT_KINDS, FIXED, make_agent, process_interaction
from .classifiers import Hyperparameters
from .metrics import emerged_norms
from .world import PayoffTables, World, WorldConfig

SOCIETIES = ("pragmatic", "selfish", "considerate", "mixed")
SERIES_INTERVAL = 100
SERIES_WINDOW = 1000

METRICS_HEADER = "run,step,society,agent_kind,social_experience,cohesion"
NORMS_HEADER = "run,antecedent,consequent,adoption,emerged,maximal"
STATS_HEADER = "metric,society,baseline,mean_a,mean_b,t,p,cohens_d"
SUMMARY_HEADER = "run,seed,society,agent_kind,mean_social_experience,mean_cohesion"


def default_config_path(name):
    return str(resources.files("ringer.configs") / name)


@dataclass
class ExperimentSpec:
    society: str
    agent_kind: str
    runs: int = 8
    steps: int = 10000
    base_seed: int = 0
    world: WorldConfig = field(default_factory=WorldConfig)
    payoffs: PayoffTables = None
    hp: Hyperparameters = field(default_factory=Hyperparameters)
    log_interactions: bool = False

    def __post_init__(self):
        if self.society not in SOCIETIES:
            raise ValueError(f"unknown society {self.society!r}")
        if self.agent_kind not in AGENT_KINDS:
            raise ValueError(f"unknown agent kind {self.agent_kind!r}")
        if self.payoffs is None:
            self.payoffs = PayoffTables.from_file(
                default_config_path("payoffs_default.yaml"))


@dataclass
class RunResult:
    run: int
    seed: int
    society: str
    agent_kind: str
    series: list  # (step, social_experience | None, cohesion | None)
    mean_social_experience: float
    mean_cohesion: float
    adoption_records: list
    interaction_log: list = field(default_factory=list)


def _attitudes(society, num_agents, rng):
    if society != "mixed":
        return [society] * num_agents
    n_selfish = round(0.25 * num_agents)
    n_considerate = round(0.25 * num_agents)
    attitudes = (["selfish"] * n_selfish + ["considerate"] * n_considerate
                 + ["pragmatic"] * (num_agents - n_selfish - n_considerate))
    rng.shuffle(attitudes)
    return attitudes


def _log_line(itx):
    expl = ""
    if itx.explanation is not None:
        expl = "; ".join(sorted(str(n) for n in itx.explanation.norms))
    votes = "".join("1" if v else "0" for v in itx.compliance_votes)
    return (f"{itx.step},{itx.caller},{itx.callee},{itx.ctx},{itx.action},"
            f"{itx.reward:.6f},{votes},{expl}")


def run_simulation(spec, run_index):
    """One deterministic run; the seed is base_seed + run_index."""
    seed = spec.base_seed + run_index
    rng = random.Random(seed)
    world = World(spec.world, rng)
    attitudes = _attitudes(spec.society, spec.world.numAgents, rng)
    agents = [make_agent(i, spec.agent_kind, attitudes[i], spec.hp)
              for i in range(spec.world.numAgents)]

    window = deque(maxlen=SERIES_WINDOW)
    series = []
    total_reward, total_interactions = 0.0, 0
    total_votes, total_compliant = 0, 0
    log = []

    for step in range(1, spec.steps + 1):
        world.step_movement()
        step_reward, step_count, step_votes, step_compliant = 0.0, 0, 0, 0
        for caller, callee, ctx in world.generate_calls():
            itx = process_interaction(agents, world, spec.payoffs, spec.hp,
                                      step, caller, callee, ctx, rng)
            step_reward += itx.reward
            step_count += 1
            step_votes += len(itx.compliance_votes)
            step_compliant += sum(itx.compliance_votes)
            if spec.log_interactions:
                log.append(_log_line(itx))
        total_reward += step_reward
        total_interactions += step_count
        total_votes += step_votes
        total_compliant += step_compliant
        window.append((step_reward, step_count, step_votes, step_compliant))
        if step % SERIES_INTERVAL == 0:
            w_reward = sum(r for r, _, _, _ in window)
            w_count = sum(c for _, c, _, _ in window)
            w_votes = sum(v for _, _, v, _ in window)
            w_compliant = sum(k for _, _, _, k in window)
            series.append((
                step,
                w_reward / w_count if w_count else None,
                w_compliant / w_votes if w_votes else None,
            ))

    return RunResult(
        run=run_index,
        seed=seed,
        society=spec.society,
        agent_kind=spec.agent_kind,
        series=series,
        mean_social_experience=(total_reward / total_interactions
                                if total_interactions else float("nan")),
        mean_cohesion=(total_compliant / total_votes
                       if total_votes else float("nan")),
        adoption_records=emerged_norms(agents),
        interaction_log=log,
    )


def _fmt(value):
    return "" if value is None else f"{value:.6f}"


def write_outputs(results, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "metrics.csv"), "w") as fh:
        fh.write(METRICS_HEADER + "\n")
        for r in results:
            for step, exp, coh in r.series:
                fh.write(f"{r.run},{step},{r.society},{r.agent_kind},"
                         f"{_fmt(exp)},{_fmt(coh)}\n")
    with open(os.path.join(out_dir, "norms.csv"), "w") as fh:
        fh.write(NORMS_HEADER + "\n")
        for r in results:
            for rec in r.adoption_records:
                fh.write(f"{r.run},{rec.norm.antecedent},{rec.norm.consequent},"
                         f"{rec.adoption:.6f},{rec.emerged},{rec.maximal}\n")
    with open(os.path.join(out_dir, "summary.csv"), "w") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for r in results:
            fh.write(f"{r.run},{r.seed},{r.society},{r.agent_kind},"
                     f"{r.mean_social_experience:.6f},{r.mean_cohesion:.6f}\n")
    for r in results:
        if r.interaction_log:
            path = os.path.join(out_dir, f"interactions_run{r.run}.log")
            with open(path, "w") as fh:
                fh.write("\n".join(r.interaction_log) + "\n")


def run_experiment(spec, out_dir=None, jobs=1):
    """All runs of one (society, agent kind) cell; optionally in parallel."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_simulation, [spec] * spec.runs,
                                    range(spec.runs)))
    else:
        results = [run_simulation(spec, i) for i in range(spec.runs)]
    results.sort(key=lambda r: r.run)
    if out_dir is not None:
        write_outputs(results, out_dir)
    return results


def read_summary(directory):
    path = os.path.join(directory, "summary.csv")
    if not os.path.exists(path):
        raise FileNotFoundError(f"missing summary file: {path}")
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"empty summary file: {path}")
    return rows


def run_stats(input_dirs, output_path):
    """Paired t-test and effect size of each baseline against the xsiga cell."""
    from .metrics import cohens_d, paired_t_test

    cells = {}
    for directory in input_dirs:
        rows = read_summary(directory)
        kind = rows[0]["agent_kind"]
        cells[kind] = rows
    if "xsiga" not in cells:
        raise ValueError("stats needs one xsiga input directory")
    target = cells.pop("xsiga")
    target_seeds = [row["seed"] for row in target]
    lines = [STATS_HEADER]
    for kind in sorted(cells):
        rows = cells[kind]
        if [row["seed"] for row in rows] != target_seeds:
            raise ValueError(
                f"seed mismatch between xsiga and {kind}: pairing is invalid")
        society = rows[0]["society"]
        for metric, column in (("social_experience", "mean_social_experience"),
                               ("cohesion", "mean_cohesion")):
            a = [float(row[column]) for row in rows]
            b = [float(row[column]) for row in target]
            t, p = paired_t_test(a, b)
            d = cohens_d(a, b)
            lines.append(
                f"{metric},{society},{kind},{sum(a)/len(a):.6f},"
                f"{sum(b)/len(b):.6f},{t:.6f},{p:.6g},{d:.6f}")
    with open(output_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return lines
