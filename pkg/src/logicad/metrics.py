"""Image-level AUROC and the benchmark's aggregation views.

AUROC is rank-based (Mann-Whitney with average ranks for ties), oriented
so that normals scoring above anomalies gives 1.0.  Aggregation produces
per-condition means over scenarios, the mean and population standard
deviation of the five condition means, and per-scenario sensitivity (the
population standard deviation of a scenario's AUROC across conditions).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .scenes import Condition, Label


class MetricError(ValueError):
    pass


def auroc(scores, labels) -> float:
    """Probability that a random normal outscores a random anomaly (ties 1/2).

    ``labels`` holds "normal"/"anomaly" strings (or booleans, True=normal).
    """
    scores = np.asarray(scores, dtype=np.float64)
    is_normal = np.array(
        [l is True or l == "normal" for l in labels], dtype=bool
    )
    n_normal = int(is_normal.sum())
    n_anomaly = len(scores) - n_normal
    if n_normal == 0 or n_anomaly == 0:
        raise MetricError("AUROC needs at least one sample of each class")
    ranks = rankdata(scores)
    rank_sum = float(ranks[is_normal].sum())
    return (rank_sum - n_normal * (n_normal + 1) / 2.0) / (n_normal * n_anomaly)


@dataclass(frozen=True)
class TaskReport:
    task_id: str
    scenario_id: str
    condition: Condition
    auroc: float
    subset_auroc: dict[Label, float]
    n_normal: int
    n_anomaly: int


def make_task_report(task_id: str, scenario_id: str, condition: Condition,
                     scores, labels) -> TaskReport:
    """Build a per-task report from test scores and their labels.

    ``labels`` are Label values; subsets compare all test normals against
    each violation subset's anomalies.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = list(labels)
    normal_mask = np.array([l == Label.NORMAL for l in labels], dtype=bool)
    overall = auroc(scores, ["normal" if m else "anomaly" for m in normal_mask])
    subset = {}
    for sub in (Label.SINGLE_A, Label.SINGLE_B, Label.DUAL):
        sub_mask = np.array([l == sub for l in labels], dtype=bool)
        if sub_mask.any():
            keep = normal_mask | sub_mask
            subset[sub] = auroc(
                scores[keep],
                ["normal" if m else "anomaly" for m in normal_mask[keep]],
            )
    return TaskReport(
        task_id=task_id,
        scenario_id=scenario_id,
        condition=condition,
        auroc=overall,
        subset_auroc=subset,
        n_normal=int(normal_mask.sum()),
        n_anomaly=int(len(labels) - normal_mask.sum()),
    )


def _population_std(values) -> float:
    return float(np.std(np.asarray(values, dtype=np.float64)))


@dataclass(frozen=True)
class AggregateReport:
    condition_means: dict[Condition, float]
    mean_of_means: float
    std_of_means: float
    scenario_sensitivity: dict[str, float]
    scenario_means: dict[str, float] = field(default_factory=dict)


def aggregate(reports: list[TaskReport],
              expected_cells: list[tuple[str, Condition]] | None = None) -> AggregateReport:
    """Aggregate per-task AUROC over the scenario x condition grid.

    By default every (scenario, condition) pair seen must appear exactly
    once and the grid must be complete over the scenarios and conditions it
    mentions; pass ``expected_cells`` to declare a subset explicitly.
    """
    cells: dict[tuple[str, Condition], float] = {}
    for report in reports:
        key = (report.scenario_id, report.condition)
        if key in cells:
            raise MetricError(f"duplicate report for cell {key}")
        cells[key] = report.auroc

    if expected_cells is None:
        scenario_ids = sorted({s for s, _ in cells})
        conditions = sorted({c for _, c in cells}, key=lambda c: c.value)
        expected = {(s, c) for s in scenario_ids for c in conditions}
        missing = expected - set(cells)
        if missing:
            raise MetricError(
                f"missing grid cells (declare a subset to allow): {sorted(missing, key=str)}"
            )
    else:
        expected = set(expected_cells)
        missing = expected - set(cells)
        if missing:
            raise MetricError(f"declared cells absent from reports: {sorted(missing, key=str)}")
        cells = {k: v for k, v in cells.items() if k in expected}
        scenario_ids = sorted({s for s, _ in expected})
        conditions = sorted({c for _, c in expected}, key=lambda c: c.value)

    condition_means = {
        c: float(np.mean([cells[(s, c)] for s in scenario_ids
                          if (s, c) in cells]))
        for c in conditions
        if any((s, c) in cells for s in scenario_ids)
    }
    means = list(condition_means.values())
    scenario_sensitivity = {}
    scenario_means = {}
    for s in scenario_ids:
        values = [cells[(s, c)] for c in conditions if (s, c) in cells]
        if values:
            scenario_sensitivity[s] = _population_std(values)
            scenario_means[s] = float(np.mean(values))
    return AggregateReport(
        condition_means=condition_means,
        mean_of_means=float(np.mean(means)) if means else float("nan"),
        std_of_means=_population_std(means) if means else float("nan"),
        scenario_sensitivity=scenario_sensitivity,
        scenario_means=scenario_means,
    )


_CONDITION_TITLES = {
    Condition.WHITE_BG: "White BG",
    Condition.CABLE_BG: "Cable BG",
    Condition.MESH_BG: "Mesh BG",
    Condition.LOWLIGHT_CD: "Low-light CD",
    Condition.BLURRY_CD: "Blurry CD",
}


def emit_report(agg: AggregateReport, fmt: str = "markdown") -> str:
    """Render the aggregate as CSV or markdown; byte-deterministic."""
    conditions = sorted(agg.condition_means, key=lambda c: c.value)
    scenarios = sorted(agg.scenario_sensitivity)
    if fmt == "csv":
        out = io.StringIO()
        out.write("condition,mean_auroc\n")
        for c in conditions:
            out.write(f"{c.value},{agg.condition_means[c]:.6f}\n")
        if conditions:
            out.write(f"mean_of_means,{agg.mean_of_means:.6f}\n")
            out.write(f"std_of_means,{agg.std_of_means:.6f}\n")
        out.write("\nscenario,mean_auroc,sensitivity_std\n")
        for s in scenarios:
            out.write(f"{s},{agg.scenario_means[s]:.6f},"
                      f"{agg.scenario_sensitivity[s]:.6f}\n")
        return out.getvalue()
    if fmt == "markdown":
        out = io.StringIO()
        out.write("| Condition | Mean AUROC |\n|---|---|\n")
        for c in conditions:
            out.write(f"| {_CONDITION_TITLES[c]} | {agg.condition_means[c]:.3f} |\n")
        if conditions:
            out.write(f"| Mean ± Std | {agg.mean_of_means:.3f} ± "
                      f"{agg.std_of_means:.3f} |\n")
        out.write("\n| Scenario | Mean AUROC | Sensitivity (std) |\n|---|---|---|\n")
        for s in scenarios:
            out.write(f"| {s} | {agg.scenario_means[s]:.3f} | "
                      f"{agg.scenario_sensitivity[s]:.3f} |\n")
        return out.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")
