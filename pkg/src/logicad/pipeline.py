"""Per-task orchestration: generate, describe, synthesize, train, score, report.

Each (scenario, condition) task is independent; its seeds are derived from
the master seed plus the task identity and pipeline stage, so stages can
be rerun in isolation and tasks can run in parallel workers.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import describe, knn, metrics, negatives, scenarios, scenes, trainer
from .describe import CONDITION_RENDER_DEFAULTS, RenderConfig
from .encoder import EncoderParams, Vocabulary, init_params
from .seeding import derive_rng, derive_seed
from .templates import get_grammar

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class PipelineConfig:
    master_seed: int = 0
    scenario_ids: tuple[str, ...] = tuple(sorted(scenarios.SCENARIOS))
    conditions: tuple[scenes.Condition, ...] = tuple(scenes.Condition)
    split_overrides: dict[str, scenes.SplitCounts] = field(default_factory=dict)
    render_overrides: dict[scenes.Condition, RenderConfig] = field(default_factory=dict)
    train: trainer.TrainConfig = field(default_factory=trainer.TrainConfig)
    k: int = knn.DEFAULT_K
    dim: int = 64
    backend: str = "builtin-renderer"
    backend_path: Optional[str] = None
    skip_training: bool = False  # frozen random-init encoder baseline
    jobs: int = 0  # 0 -> logical core count

    def counts_for(self, scenario_id: str) -> scenes.SplitCounts:
        return self.split_overrides.get(
            scenario_id, scenarios.DEFAULT_SPLIT_COUNTS[scenario_id]
        )

    def render_for(self, condition: scenes.Condition) -> RenderConfig:
        return self.render_overrides.get(
            condition, CONDITION_RENDER_DEFAULTS[condition]
        )

    def tasks(self) -> list[tuple[str, scenes.Condition]]:
        return [(s, c) for s in self.scenario_ids for c in self.conditions]


@dataclass
class TaskArtifacts:
    task: scenes.TaskScenes
    texts: dict[str, str]            # sample_id -> description
    pairs: dict[str, tuple[str, str, list]]  # train sample_id -> (pos, neg, edits)

    def train_pairs(self) -> tuple[list[str], list[str]]:
        ids = [s.sample_id for s in self.task.split("train")]
        pos = [self.pairs[i][0] for i in ids]
        neg = [self.pairs[i][1] for i in ids]
        return pos, neg


def generate_task(config: PipelineConfig, scenario_id: str,
                  condition: scenes.Condition) -> TaskArtifacts:
    """Scenes, descriptions and negative pairs for one task."""
    spec = scenarios.get_scenario(scenario_id)
    grammar = get_grammar(scenario_id)
    render_cfg = config.render_for(condition)
    task = scenes.build_task(
        spec, condition, config.counts_for(scenario_id),
        derive_seed(config.master_seed, scenario_id, condition.value, "scenes"),
    )
    texts = {}
    pairs = {}
    for sample in task.samples:
        rng = derive_rng(config.master_seed, scenario_id, condition.value,
                        "render", sample.sample_id)
        text = describe.render(sample.scene, render_cfg, rng, grammar).text
        texts[sample.sample_id] = text
        if sample.split == "train":
            neg_rng = derive_rng(config.master_seed, scenario_id,
                                 condition.value, "negative", sample.sample_id)
            neg, edits = negatives.synthesize_negative(text, grammar, neg_rng)
            pairs[sample.sample_id] = (text, neg.text, edits)
    return TaskArtifacts(task=task, texts=texts, pairs=pairs)


@dataclass
class TrainedTask:
    vocab: Vocabulary
    params: EncoderParams
    epoch_losses: list[float]


def train_task(config: PipelineConfig, artifacts: TaskArtifacts) -> TrainedTask:
    """Fit (or, for the baseline, just initialize) the task's encoder."""
    pos_texts, neg_texts = artifacts.train_pairs()
    vocab = Vocabulary.build(pos_texts + neg_texts)
    seed = derive_seed(config.master_seed, artifacts.task.scenario_id,
                       artifacts.task.condition.value, "train")
    cfg = replace(config.train, seed=seed)
    init = init_params(vocab.size, dim=config.dim, seed=seed)
    if config.skip_training:
        return TrainedTask(vocab=vocab, params=init, epoch_losses=[])
    result = trainer.fit(pos_texts, neg_texts, vocab, cfg, init=init,
                         dim=config.dim)
    return TrainedTask(vocab=vocab, params=result.params,
                       epoch_losses=result.epoch_losses)


@dataclass
class ScoredTask:
    report: metrics.TaskReport
    results: list[tuple[str, scenes.Label, knn.NormalityScore]]


def score_task(config: PipelineConfig, artifacts: TaskArtifacts,
               trained: TrainedTask) -> ScoredTask:
    """Build the reference library from train texts and score the test split."""
    train_samples = artifacts.task.split("train")
    library = knn.build_library(
        [artifacts.texts[s.sample_id] for s in train_samples],
        trained.params, trained.vocab,
        ids=[s.sample_id for s in train_samples],
    )
    test_samples = artifacts.task.split("test")
    scored = knn.score_split(
        [artifacts.texts[s.sample_id] for s in test_samples],
        trained.params, trained.vocab, library, k=config.k,
    )
    results = [(s.sample_id, s.label, r) for s, r in zip(test_samples, scored)]
    report = metrics.make_task_report(
        artifacts.task.task_id, artifacts.task.scenario_id,
        artifacts.task.condition,
        [r.score for _, _, r in results],
        [label for _, label, _ in results],
    )
    return ScoredTask(report=report, results=results)


def run_task(config: PipelineConfig, scenario_id: str,
             condition: scenes.Condition) -> tuple[TaskArtifacts, TrainedTask, ScoredTask]:
    artifacts = generate_task(config, scenario_id, condition)
    trained = train_task(config, artifacts)
    return artifacts, trained, score_task(config, artifacts, trained)


def _run_task_entry(args):
    config, scenario_id, condition = args
    artifacts, trained, scored = run_task(config, scenario_id, condition)
    return scenario_id, condition, artifacts, trained, scored


def run_benchmark(config: PipelineConfig, jobs: Optional[int] = None):
    """Run every selected task, in parallel workers, in deterministic order."""
    jobs = jobs if jobs is not None else config.jobs
    if jobs <= 0:
        jobs = os.cpu_count() or 1
    tasks = config.tasks()
    args = [(config, s, c) for s, c in tasks]
    if jobs == 1 or len(tasks) == 1:
        outputs = [_run_task_entry(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_run_task_entry, args))
    # pool.map preserves submission order, so output order is deterministic
    return outputs


# --- file emission --------------------------------------------------------

def write_task_files(out_dir: Path, artifacts: TaskArtifacts) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    task = artifacts.task
    with open(out_dir / f"{task.task_id}.scenes.jsonl", "w", encoding="utf-8") as fh:
        for sample in task.samples:
            fh.write(scenes.scene_record(task.task_id, sample.split,
                                         sample.label, sample.scene) + "\n")
    with open(out_dir / f"{task.task_id}.descriptions.jsonl", "w",
              encoding="utf-8") as fh:
        for sample in task.samples:
            fh.write(describe.description_record(
                task.task_id, sample.sample_id, sample.split,
                sample.label.value, artifacts.texts[sample.sample_id]) + "\n")
    with open(out_dir / f"{task.task_id}.pairs.jsonl", "w", encoding="utf-8") as fh:
        for sample in task.split("train"):
            pos, neg, edits = artifacts.pairs[sample.sample_id]
            fh.write(negatives.pair_record(task.task_id, sample.sample_id,
                                           pos, neg, edits) + "\n")


def write_score_file(out_dir: Path, scored: ScoredTask) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    task_id = scored.report.task_id
    with open(out_dir / f"{task_id}.scores.jsonl", "w", encoding="utf-8") as fh:
        for sample_id, label, result in scored.results:
            fh.write(knn.score_record(task_id, sample_id, label.value, result) + "\n")


def write_loss_curve(out_dir: Path, task_id: str, losses: list[float]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / f"{task_id}.loss.txt", "w", encoding="utf-8") as fh:
        fh.write("epoch\tmean_loss\n")
        for i, loss in enumerate(losses, start=1):
            fh.write(f"{i}\t{loss:.10f}\n")


def save_checkpoint(path, trained: TrainedTask, config: PipelineConfig,
                    task_id: str) -> None:
    """Versioned checkpoint: encoder parameters + vocabulary + config digest."""
    fingerprint = json.dumps(
        {"task_id": task_id, "epochs": config.train.epochs,
         "batch_size": config.train.batch_size,
         "temperature": config.train.temperature,
         "learning_rate": config.train.learning_rate,
         "weight_decay": config.train.weight_decay,
         "clip_norm": config.train.clip_norm, "dim": config.dim,
         "master_seed": config.master_seed},
        sort_keys=True,
    )
    vocab_json = json.dumps(trained.vocab.token_to_id, sort_keys=True)
    np.savez(
        path,
        version=np.int64(CHECKPOINT_VERSION),
        embedding=trained.params.embedding,
        proj_w=trained.params.proj_w,
        proj_b=trained.params.proj_b,
        dropout_rate=np.float64(trained.params.dropout_rate),
        vocab_json=np.bytes_(vocab_json.encode("utf-8")),
        fingerprint=np.bytes_(fingerprint.encode("utf-8")),
        epoch_losses=np.asarray(trained.epoch_losses, dtype=np.float64),
    )


def load_checkpoint(path) -> TrainedTask:
    with np.load(path) as data:
        version = int(data["version"])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        params = EncoderParams(
            embedding=data["embedding"],
            proj_w=data["proj_w"],
            proj_b=data["proj_b"],
            dropout_rate=float(data["dropout_rate"]),
        )
        vocab = Vocabulary(json.loads(bytes(data["vocab_json"]).decode("utf-8")))
        losses = [float(x) for x in data["epoch_losses"]]
    return TrainedTask(vocab=vocab, params=params, epoch_losses=losses)
