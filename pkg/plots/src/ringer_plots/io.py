"""CSV readers with bit-exact header validation.

The simulator's output contract fixes the column headers exactly; any
mismatch means the file is not a compatible artifact and is rejected
rather than guessed at.
"""

import csv

METRICS_HEADER = "run,step,society,agent_kind,social_experience,cohesion"
NORMS_HEADER = "run,antecedent,consequent,adoption,emerged,maximal"


class InputError(ValueError):
    """An input file is missing, empty, or has the wrong shape."""


def _read_rows(path, expected_header):
    try:
        with open(path, newline="") as fh:
            first = fh.readline().rstrip("\r\n")
            if not first:
                raise InputError(f"empty input file: {path}")
            if first != expected_header:
                raise InputError(
                    f"unexpected header in {path}: {first!r} "
                    f"(expected {expected_header!r})")
            rows = list(csv.DictReader(fh, fieldnames=expected_header.split(",")))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"no data rows in {path}")
    return rows


def read_metrics(path):
    """Rows of the time-series file, with numeric fields parsed.

    Empty metric cells (windows without interactions or votes) are None.
    """
    rows = _read_rows(path, METRICS_HEADER)
    parsed = []
    for row in rows:
        parsed.append({
            "run": int(row["run"]),
            "step": int(row["step"]),
            "society": row["society"],
            "agent_kind": row["agent_kind"],
            "social_experience": (float(row["social_experience"])
                                  if row["social_experience"] else None),
            "cohesion": float(row["cohesion"]) if row["cohesion"] else None,
        })
    return parsed


def read_norms(path):
    """Rows of the per-norm adoption file, with numeric fields parsed."""
    rows = _read_rows(path, NORMS_HEADER)
    parsed = []
    for row in rows:
        parsed.append({
            "run": int(row["run"]),
            "antecedent": row["antecedent"],
            "consequent": row["consequent"],
            "adoption": float(row["adoption"]),
            "emerged": row["emerged"] == "True",
            "maximal": row["maximal"] == "True",
        })
    return parsed
