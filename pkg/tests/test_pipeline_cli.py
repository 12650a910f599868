"""Pipeline orchestration and the command-line interface, end to end."""

from dataclasses import replace

import numpy as np
import pytest

from logicad import cli, pipeline
from logicad.scenes import Condition, Label, SplitCounts
from logicad.trainer import TrainConfig

SMALL = pipeline.PipelineConfig(
    master_seed=0,
    scenario_ids=("tapes",),
    conditions=(Condition.WHITE_BG, Condition.MESH_BG),
    split_overrides={"tapes": SplitCounts(8, 8, 4, 4, 2)},
    train=TrainConfig(epochs=3, batch_size=8),
    dim=16,
)


def test_generate_task_is_deterministic_and_complete():
    a = pipeline.generate_task(SMALL, "tapes", Condition.MESH_BG)
    b = pipeline.generate_task(SMALL, "tapes", Condition.MESH_BG)
    assert a.task == b.task
    assert a.texts == b.texts
    assert a.pairs == b.pairs
    assert len(a.texts) == len(a.task.samples) == 26
    assert set(a.pairs) == {s.sample_id for s in a.task.split("train")}
    pos, neg = a.train_pairs()
    assert len(pos) == len(neg) == 8
    assert all(p != n for p, n in zip(pos, neg))


def test_task_seeds_differ_across_conditions_and_stages():
    white = pipeline.generate_task(SMALL, "tapes", Condition.WHITE_BG)
    mesh = pipeline.generate_task(SMALL, "tapes", Condition.MESH_BG)
    assert white.task.task_id != mesh.task.task_id
    assert list(white.texts.values()) != list(mesh.texts.values())


def test_skip_training_keeps_the_random_initialization():
    artifacts = pipeline.generate_task(SMALL, "tapes", Condition.WHITE_BG)
    frozen = pipeline.train_task(replace(SMALL, skip_training=True), artifacts)
    trained = pipeline.train_task(SMALL, artifacts)
    assert frozen.epoch_losses == []
    assert len(trained.epoch_losses) == SMALL.train.epochs
    assert not np.allclose(frozen.params.embedding, trained.params.embedding)


def test_checkpoint_round_trip_and_version_guard(tmp_path):
    artifacts = pipeline.generate_task(SMALL, "tapes", Condition.WHITE_BG)
    trained = pipeline.train_task(SMALL, artifacts)
    path = tmp_path / "task.ckpt.npz"
    pipeline.save_checkpoint(path, trained, SMALL, "tapes-white_bg")
    loaded = pipeline.load_checkpoint(path)
    assert np.array_equal(loaded.params.embedding, trained.params.embedding)
    assert np.array_equal(loaded.params.proj_w, trained.params.proj_w)
    assert loaded.vocab.token_to_id == trained.vocab.token_to_id
    assert loaded.epoch_losses == pytest.approx(trained.epoch_losses)

    data = dict(np.load(path, allow_pickle=False))
    data["version"] = np.int64(99)
    np.savez(tmp_path / "future.ckpt.npz", **data)
    with pytest.raises(ValueError):
        pipeline.load_checkpoint(tmp_path / "future.ckpt.npz")


def test_run_benchmark_preserves_task_order():
    outputs = pipeline.run_benchmark(SMALL, jobs=1)
    assert [(s, c) for s, c, *_ in outputs] == SMALL.tasks()
    for _, _, artifacts, trained, scored in outputs:
        assert scored.report.task_id == artifacts.task.task_id
        assert 0.0 <= scored.report.auroc <= 1.0


# --- CLI -------------------------------------------------------------------

ARGS = ["--scenario", "tapes", "--condition", "white_bg"]


def _run(argv):
    return cli.main(argv)


def test_cli_gen_writes_the_three_task_files(tmp_path):
    assert _run(["gen", *ARGS, "--out-dir", str(tmp_path)]) == 0
    scenes = (tmp_path / "tapes-white_bg.scenes.jsonl").read_text().splitlines()
    descriptions = (tmp_path / "tapes-white_bg.descriptions.jsonl").read_text().splitlines()
    pairs = (tmp_path / "tapes-white_bg.pairs.jsonl").read_text().splitlines()
    # Table-style defaults: 50 train + 50 test normals + 50/50/10 anomalies
    assert len(scenes) == len(descriptions) == 210
    assert len(pairs) == 50


def test_cli_full_flow_and_byte_identical_reruns(tmp_path, capsys):
    out = str(tmp_path)
    assert _run(["train", *ARGS, "--out-dir", out, "--epochs", "3"]) == 0
    assert (tmp_path / "tapes-white_bg.ckpt.npz").exists()
    loss_txt = (tmp_path / "tapes-white_bg.loss.txt").read_text()
    assert loss_txt.startswith("epoch\tmean_loss\n")
    assert len(loss_txt.splitlines()) == 4

    assert _run(["score", *ARGS, "--out-dir", out]) == 0
    score_path = tmp_path / "tapes-white_bg.scores.jsonl"
    first = score_path.read_bytes()
    assert _run(["score", *ARGS, "--out-dir", out]) == 0
    assert score_path.read_bytes() == first

    capsys.readouterr()
    assert _run(["eval", *ARGS, "--out-dir", out]) == 0
    eval_out = capsys.readouterr().out
    assert eval_out.startswith("tapes-white_bg: AUROC ")
    for label in (Label.SINGLE_A, Label.SINGLE_B, Label.DUAL):
        assert label.value in eval_out

    assert _run(["report", *ARGS, "--out-dir", out, "--format", "csv"]) == 0
    report_path = tmp_path / "report.csv"
    first_report = report_path.read_bytes()
    assert _run(["report", *ARGS, "--out-dir", out, "--format", "csv"]) == 0
    assert report_path.read_bytes() == first_report
    assert first_report.startswith(b"condition,mean_auroc\n")


def test_cli_all_baseline_emits_everything(tmp_path, capsys):
    out = str(tmp_path)
    assert _run(["all", *ARGS, "--out-dir", out, "--baseline"]) == 0
    for suffix in ("scenes.jsonl", "descriptions.jsonl", "pairs.jsonl",
                   "ckpt.npz", "loss.txt", "scores.jsonl"):
        assert (tmp_path / f"tapes-white_bg.{suffix}").exists()
    assert (tmp_path / "report.md").exists()
    assert "mean AUROC" in capsys.readouterr().out


def test_cli_score_requires_a_checkpoint(tmp_path):
    with pytest.raises(SystemExit) as exc:
        _run(["score", *ARGS, "--out-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_cli_rejects_unknown_scenario_and_condition(tmp_path):
    for argv in (["gen", "--scenario", "gears", "--out-dir", str(tmp_path)],
                 ["gen", "--condition", "night", "--out-dir", str(tmp_path)]):
        with pytest.raises(SystemExit) as exc:
            _run(argv)
        assert exc.value.code == 2


def test_cli_requires_an_output_directory(monkeypatch):
    monkeypatch.delenv(cli.OUT_DIR_ENV, raising=False)
    with pytest.raises(SystemExit) as exc:
        _run(["gen", *ARGS])
    assert exc.value.code == 2


def test_cli_out_dir_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    assert _run(["gen", *ARGS]) == 0
    assert (tmp_path / "tapes-white_bg.scenes.jsonl").exists()


def test_config_file_values_apply_and_flags_win(tmp_path):
    out = str(tmp_path)
    config = tmp_path / "run.cfg"
    config.write_text(
        "# experiment settings\n"
        "scenario = tapes\n"
        "condition = white_bg\n"
        "epochs = 3\n"
        "k = 7\n"
    )
    assert _run(["train", "--config", str(config), "--out-dir", out]) == 0
    assert _run(["score", "--config", str(config), "--out-dir", out]) == 0
    import json
    line = (tmp_path / "tapes-white_bg.scores.jsonl").read_text().splitlines()[0]
    assert len(json.loads(line)["neighbor_ids"]) == 7
    # an explicit flag overrides the config file value
    assert _run(["score", "--config", str(config), "--out-dir", out,
                 "--k", "3"]) == 0
    line = (tmp_path / "tapes-white_bg.scores.jsonl").read_text().splitlines()[0]
    assert len(json.loads(line)["neighbor_ids"]) == 3


def test_config_file_rejects_unknown_keys_and_bad_values(tmp_path):
    bad_key = tmp_path / "bad_key.cfg"
    bad_key.write_text("neighbours = 5\n")
    with pytest.raises(SystemExit) as exc:
        _run(["gen", "--config", str(bad_key), "--out-dir", str(tmp_path)])
    assert exc.value.code == 2

    bad_value = tmp_path / "bad_value.cfg"
    bad_value.write_text("k = five\n")
    with pytest.raises(SystemExit) as exc:
        _run(["gen", "--config", str(bad_value), "--out-dir", str(tmp_path)])
    assert exc.value.code == 2

    not_kv = tmp_path / "not_kv.cfg"
    not_kv.write_text("just some prose\n")
    with pytest.raises(SystemExit) as exc:
        _run(["gen", "--config", str(not_kv), "--out-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_cli_report_needs_score_files(tmp_path):
    with pytest.raises(SystemExit) as exc:
        _run(["report", *ARGS, "--out-dir", str(tmp_path)])
    assert exc.value.code == 2
