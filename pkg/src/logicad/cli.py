"""Command line interface: gen / train / score / eval / report / all.

Settings resolve in order: built-in defaults, then a flat ``key=value``
config file, then explicit flags.  Unknown config keys are rejected so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import knn, metrics, pipeline, scenarios, scenes, trainer

OUT_DIR_ENV = "LOGICAD_OUT_DIR"

_CONFIG_KEYS = {
    "seed": int,
    "out_dir": str,
    "k": int,
    "jobs": int,
    "dim": int,
    "backend": str,
    "backend_path": str,
    "scenario": str,
    "condition": str,
    "epochs": int,
    "batch_size": int,
    "temperature": float,
    "learning_rate": float,
    "weight_decay": float,
    "clip_norm": float,
    "skip_training": lambda s: s.lower() in ("1", "true", "yes"),
}


class CliError(SystemExit):
    def __init__(self, message: str):
        print(f"error: {message}", file=sys.stderr)
        super().__init__(2)


def load_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise CliError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](value.strip())
            except ValueError as exc:
                raise CliError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return values


def _parse_scenarios(raw: str | None) -> tuple[str, ...]:
    if not raw:
        return tuple(sorted(scenarios.SCENARIOS))
    ids = tuple(s.strip() for s in raw.split(",") if s.strip())
    for s in ids:
        if s not in scenarios.SCENARIOS:
            raise CliError(
                f"unknown scenario {s!r}; choose from "
                f"{', '.join(sorted(scenarios.SCENARIOS))}"
            )
    return ids


def _parse_conditions(raw: str | None) -> tuple[scenes.Condition, ...]:
    if not raw:
        return tuple(scenes.Condition)
    out = []
    for name in (s.strip() for s in raw.split(",") if s.strip()):
        try:
            out.append(scenes.Condition(name))
        except ValueError:
            raise CliError(
                f"unknown condition {name!r}; choose from "
                f"{', '.join(c.value for c in scenes.Condition)}"
            )
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logicad",
        description="Logical anomaly detection over rendered scene descriptions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--seed", type=int, help="master seed (default 0)")
        p.add_argument("--scenario", help="comma-separated scenario ids")
        p.add_argument("--condition", help="comma-separated capture conditions")
        p.add_argument("--out-dir", help=f"output directory (or ${OUT_DIR_ENV})")
        p.add_argument("--jobs", type=int, help="parallel task workers (0=auto)")

    p_gen = sub.add_parser("gen", help="generate scenes, descriptions, pairs")
    add_common(p_gen)

    p_train = sub.add_parser("train", help="fit per-task encoders, save checkpoints")
    add_common(p_train)
    p_train.add_argument("--epochs", type=int)
    p_train.add_argument("--learning-rate", type=float)

    p_score = sub.add_parser("score", help="score test splits with saved encoders")
    add_common(p_score)
    p_score.add_argument("--k", type=int, help="neighbors (default 5)")

    p_eval = sub.add_parser("eval", help="per-task AUROC from score files")
    add_common(p_eval)

    p_report = sub.add_parser("report", help="aggregate report over all tasks")
    add_common(p_report)
    p_report.add_argument("--format", choices=("csv", "markdown"),
                          default="markdown")

    p_all = sub.add_parser("all", help="run the whole pipeline end to end")
    add_common(p_all)
    p_all.add_argument("--k", type=int)
    p_all.add_argument("--epochs", type=int)
    p_all.add_argument("--learning-rate", type=float)
    p_all.add_argument("--format", choices=("csv", "markdown"),
                       default="markdown")
    p_all.add_argument("--baseline", action="store_true",
                       help="skip training; score with the random-init encoder")
    return parser


def resolve_config(args) -> tuple[pipeline.PipelineConfig, Path]:
    values = load_config_file(args.config) if args.config else {}

    def pick(flag_name, config_key, default):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return flag
        return values.get(config_key, default)

    out_dir = pick("out_dir", "out_dir", None) or os.environ.get(OUT_DIR_ENV)
    if not out_dir:
        raise CliError(f"no output directory: pass --out-dir or set ${OUT_DIR_ENV}")

    train_cfg = trainer.TrainConfig(
        epochs=pick("epochs", "epochs", 20),
        batch_size=values.get("batch_size", 16),
        temperature=values.get("temperature", 0.5),
        learning_rate=pick("learning_rate", "learning_rate", 5e-3),
        weight_decay=values.get("weight_decay", 1e-5),
        clip_norm=values.get("clip_norm", 1.0),
    )
    config = pipeline.PipelineConfig(
        master_seed=pick("seed", "seed", 0),
        scenario_ids=_parse_scenarios(pick("scenario", "scenario", None)),
        conditions=_parse_conditions(pick("condition", "condition", None)),
        train=train_cfg,
        k=pick("k", "k", knn.DEFAULT_K),
        dim=values.get("dim", 64),
        backend=values.get("backend", "builtin-renderer"),
        backend_path=values.get("backend_path"),
        skip_training=bool(getattr(args, "baseline", False)
                           or values.get("skip_training", False)),
        jobs=pick("jobs", "jobs", 0),
    )
    return config, Path(out_dir)


def _each_task(config: pipeline.PipelineConfig):
    for scenario_id in config.scenario_ids:
        for condition in config.conditions:
            yield scenario_id, condition


def cmd_gen(config: pipeline.PipelineConfig, out_dir: Path, args) -> int:
    for scenario_id, condition in _each_task(config):
        artifacts = pipeline.generate_task(config, scenario_id, condition)
        pipeline.write_task_files(out_dir, artifacts)
        print(f"gen {artifacts.task.task_id}: "
              f"{len(artifacts.task.samples)} samples")
    return 0


def cmd_train(config: pipeline.PipelineConfig, out_dir: Path, args) -> int:
    for scenario_id, condition in _each_task(config):
        artifacts = pipeline.generate_task(config, scenario_id, condition)
        trained = pipeline.train_task(config, artifacts)
        task_id = artifacts.task.task_id
        pipeline.save_checkpoint(out_dir / f"{task_id}.ckpt.npz", trained,
                                 config, task_id)
        pipeline.write_loss_curve(out_dir, task_id, trained.epoch_losses)
        last = trained.epoch_losses[-1] if trained.epoch_losses else float("nan")
        print(f"train {task_id}: final loss {last:.4f}")
    return 0


def cmd_score(config: pipeline.PipelineConfig, out_dir: Path, args) -> int:
    for scenario_id, condition in _each_task(config):
        artifacts = pipeline.generate_task(config, scenario_id, condition)
        task_id = artifacts.task.task_id
        ckpt = out_dir / f"{task_id}.ckpt.npz"
        if not ckpt.exists():
            raise CliError(f"no checkpoint for {task_id}; run `logicad train` first")
        trained = pipeline.load_checkpoint(ckpt)
        scored = pipeline.score_task(config, artifacts, trained)
        pipeline.write_score_file(out_dir, scored)
        print(f"score {task_id}: AUROC {scored.report.auroc:.4f}")
    return 0


def _task_parts(task_id: str) -> tuple[str, scenes.Condition]:
    for condition in scenes.Condition:
        suffix = f"-{condition.value}"
        if task_id.endswith(suffix):
            return task_id[: -len(suffix)], condition
    raise CliError(f"cannot split task id {task_id!r}")


def _reports_from_files(config: pipeline.PipelineConfig,
                        out_dir: Path) -> list[metrics.TaskReport]:
    reports = []
    for scenario_id, condition in _each_task(config):
        task_id = scenes.task_id_for(scenario_id, condition)
        path = out_dir / f"{task_id}.scores.jsonl"
        if not path.exists():
            raise CliError(f"no score file for {task_id}; run `logicad score` first")
        scores, labels = [], []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = knn.parse_score_record(line)
                    scores.append(rec["score"])
                    labels.append(scenes.Label(rec["label"]))
        reports.append(metrics.make_task_report(task_id, scenario_id,
                                                condition, scores, labels))
    return reports


def cmd_eval(config: pipeline.PipelineConfig, out_dir: Path, args) -> int:
    for report in _reports_from_files(config, out_dir):
        subsets = " ".join(
            f"{label.value}={value:.4f}"
            for label, value in sorted(report.subset_auroc.items(),
                                       key=lambda kv: kv[0].value)
        )
        print(f"{report.task_id}: AUROC {report.auroc:.4f} ({subsets})")
    return 0


def cmd_report(config: pipeline.PipelineConfig, out_dir: Path, args) -> int:
    reports = _reports_from_files(config, out_dir)
    agg = metrics.aggregate(
        reports,
        expected_cells=[(s, c) for s, c in _each_task(config)],
    )
    text = metrics.emit_report(agg, fmt=args.format)
    ext = "csv" if args.format == "csv" else "md"
    path = out_dir / f"report.{ext}"
    path.write_text(text, encoding="utf-8")
    print(text, end="")
    print(f"wrote {path}")
    return 0


def cmd_all(config: pipeline.PipelineConfig, out_dir: Path, args) -> int:
    outputs = pipeline.run_benchmark(config)
    reports = []
    for scenario_id, condition, artifacts, trained, scored in outputs:
        task_id = artifacts.task.task_id
        pipeline.write_task_files(out_dir, artifacts)
        pipeline.save_checkpoint(out_dir / f"{task_id}.ckpt.npz", trained,
                                 config, task_id)
        pipeline.write_loss_curve(out_dir, task_id, trained.epoch_losses)
        pipeline.write_score_file(out_dir, scored)
        reports.append(scored.report)
        print(f"{task_id}: AUROC {scored.report.auroc:.4f}")
    agg = metrics.aggregate(
        reports, expected_cells=[(s, c) for s, c in _each_task(config)])
    text = metrics.emit_report(agg, fmt=args.format)
    ext = "csv" if args.format == "csv" else "md"
    (out_dir / f"report.{ext}").write_text(text, encoding="utf-8")
    print(text, end="")
    print(f"mean AUROC {agg.mean_of_means:.4f} +/- {agg.std_of_means:.4f}")
    return 0


_COMMANDS = {
    "gen": cmd_gen,
    "train": cmd_train,
    "score": cmd_score,
    "eval": cmd_eval,
    "report": cmd_report,
    "all": cmd_all,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config, out_dir = resolve_config(args)
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](config, out_dir, args)
    except CliError:
        raise
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
