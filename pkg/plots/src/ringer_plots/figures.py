"""Figure rendering. Layout is deterministic: the same input rows always
produce the same geometry (jitter comes from a fixed-seed generator).
"""

import random
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EMERGENCE_THRESHOLD = 0.90

KIND_STYLE = {
    "fixed": {"color": "tab:gray"},
    "nsiga": {"color": "tab:orange"},
    "xsiga": {"color": "tab:blue"},
}


def _style(kind):
    return KIND_STYLE.get(kind, {"color": "tab:green"})


def plot_experience(rows, out_path):
    """One line per agent kind: mean social experience across runs over
    steps (in thousands), with a min-max band across runs."""
    by_kind = defaultdict(lambda: defaultdict(list))
    for row in rows:
        if row["social_experience"] is not None:
            by_kind[row["agent_kind"]][row["step"]].append(
                row["social_experience"])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for kind in sorted(by_kind):
        steps = sorted(by_kind[kind])
        xs = [s / 1000 for s in steps]
        means = [sum(by_kind[kind][s]) / len(by_kind[kind][s]) for s in steps]
        lows = [min(by_kind[kind][s]) for s in steps]
        highs = [max(by_kind[kind][s]) for s in steps]
        style = _style(kind)
        ax.plot(xs, means, label=kind, **style)
        ax.fill_between(xs, lows, highs, alpha=0.2, linewidth=0, **style)
    ax.set_xlabel("step (thousands)")
    ax.set_ylabel("social experience")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return len(by_kind)


def plot_adoption(rows, out_path):
    """One dot per input row at its adoption value, jittered horizontally
    within its consequent's column, with the emergence threshold drawn."""
    consequents = sorted({row["consequent"] for row in rows})
    centers = {c: i for i, c in enumerate(consequents)}
    jitter = random.Random(0)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    xs, ys = [], []
    for row in rows:
        xs.append(centers[row["consequent"]] + jitter.uniform(-0.25, 0.25))
        ys.append(row["adoption"])
    ax.scatter(xs, ys, s=18, alpha=0.7, color="tab:blue", edgecolors="none")
    ax.axhline(EMERGENCE_THRESHOLD, color="tab:red", linestyle="--",
               linewidth=1, label=f"emergence ({EMERGENCE_THRESHOLD:.2f})")
    ax.set_xticks(range(len(consequents)), consequents)
    ax.set_ylim(-0.05, 1.05)
    ax.set_ylabel("adoption")
    ax.set_xlabel("consequent")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return len(rows)
