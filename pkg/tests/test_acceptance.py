"""End-to-end acceptance gate.

Each test checks one numbered release criterion and prints a single
PASS/FAIL line; thresholds and tolerances are pinned here, not imported.
"""

import time

import numpy as np
import pytest

from test_scenes import _ENUMERATIONS

from logicad import cli, pipeline
from logicad.describe import RenderConfig, parse, render, render_record
from logicad.encoder import Vocabulary, init_params, tokenize
from logicad.knn import ReferenceLibrary, score
from logicad.metrics import aggregate, auroc
from logicad.negatives import synthesize_negative, validate_negative
from logicad.scenarios import SCENARIOS, get_scenario
from logicad.scenes import classify, sample_normal
from logicad.templates import get_grammar
from logicad.trainer import BatchMasks, batch_step, nt_xent


def _verdict(criterion: int, ok: bool, detail: str) -> None:
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


def _random_unit_rows(rng, n, d):
    m = rng.normal(size=(n, d))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def test_criterion_01_gradient_oracle():
    start = time.monotonic()
    pos_texts = ["There are three oranges and two kiwis.",
                 "The total number of items is five."]
    neg_texts = ["There are five oranges and two kiwis.",
                 "The total number of items is three."]
    vocab = Vocabulary.build(pos_texts + neg_texts)
    params = init_params(vocab.size, dim=8, seed=0)
    pos_tokens = [tokenize(t, vocab) for t in pos_texts]
    neg_tokens = [tokenize(t, vocab) for t in neg_texts]
    masks = BatchMasks.sample(pos_tokens, neg_tokens, 8, 0.1,
                              np.random.default_rng(1))
    _, _, grads = batch_step(pos_tokens, neg_tokens, params, masks, 0.5)
    h = 1e-5
    worst = 0.0
    for target, grad in zip(
        (params.embedding, params.proj_w, params.proj_b), grads.arrays()
    ):
        it = np.nditer(target, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            original = target[idx]
            target[idx] = original + h
            up = batch_step(pos_tokens, neg_tokens, params, masks, 0.5)[0]
            target[idx] = original - h
            down = batch_step(pos_tokens, neg_tokens, params, masks, 0.5)[0]
            target[idx] = original
            fd = (up - down) / (2.0 * h)
            worst = max(worst, abs(fd - grad[idx]) / max(1e-3, abs(fd)))
    elapsed = time.monotonic() - start
    ok = worst <= 1e-4 and elapsed < 5.0
    _verdict(1, ok, f"max relative gradient error {worst:.2e} in {elapsed:.1f}s")


def test_criterion_02_loss_identities():
    a = np.array([[1.0, 0.0]])
    loss, _ = nt_xent(a, a.copy(), a.copy(), 0.5)
    ln2_ok = abs(loss - np.log(2.0)) < 1e-12
    rng = np.random.default_rng(20)
    nonneg = True
    for _ in range(10_000):
        anchors = _random_unit_rows(rng, 4, 8)
        positives = _random_unit_rows(rng, 4, 8)
        negatives = _random_unit_rows(rng, 6, 8)
        _, per_anchor = nt_xent(anchors, positives, negatives, 0.5)
        if not np.all(per_anchor >= 0.0):
            nonneg = False
            break
    _verdict(2, ln2_ok and nonneg,
             f"symmetric loss {loss:.15f} vs ln2, "
             f"per-anchor nonneg over 10^4 batches: {nonneg}")


def test_criterion_03_scorer_oracle():
    rng = np.random.default_rng(30)
    worst = 0.0
    sets_match = True
    for _ in range(100):
        n = int(rng.integers(1, 201))
        d = int(rng.integers(2, 13))
        library = ReferenceLibrary(
            vectors=_random_unit_rows(rng, n, d),
            ids=tuple(f"train-{i:04d}" for i in range(n)),
        )
        query = _random_unit_rows(rng, 1, d)[0]
        got = score(query, library, k=5)
        pairs = sorted(
            (float(np.linalg.norm(row - query)), i)
            for i, row in enumerate(library.vectors)
        )[: min(5, n)]
        mean = sum(p[0] for p in pairs) / len(pairs)
        worst = max(worst, abs(got.mean_distance - mean))
        if list(got.neighbor_ids) != [library.ids[i] for _, i in pairs]:
            sets_match = False
    ok = worst < 1e-12 and sets_match
    _verdict(3, ok, f"max distance deviation {worst:.2e}, "
                    f"neighbor sets identical: {sets_match}")


def test_criterion_04_score_bounds():
    rng = np.random.default_rng(40)
    library = ReferenceLibrary(
        vectors=_random_unit_rows(rng, 60, 8),
        ids=tuple(str(i) for i in range(60)),
    )
    in_bounds = all(
        1.0 / 3.0 - 1e-12 <= score(q, library, k=5).score <= 1.0 + 1e-12
        for q in _random_unit_rows(rng, 300, 8)
    )
    base = _random_unit_rows(rng, 1, 8)[0]
    dup_library = ReferenceLibrary(
        vectors=np.stack([base] * 5 + list(_random_unit_rows(rng, 5, 8))),
        ids=tuple(str(i) for i in range(10)),
    )
    dup_is_one = score(base, dup_library, k=5).score == 1.0
    near_miss = score(base, library, k=5).score < 1.0
    ok = in_bounds and dup_is_one and near_miss
    _verdict(4, ok, f"bounds hold: {in_bounds}, duplicate scores 1.0: {dup_is_one}")


def test_criterion_05_auroc_oracle():
    rng = np.random.default_rng(50)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 1001))
        labels = ["normal" if b else "anomaly" for b in rng.random(n) < 0.5]
        labels[0], labels[-1] = "normal", "anomaly"
        scores = np.round(rng.random(n), 1 if rng.random() < 0.5 else 12)
        normals = [s for s, l in zip(scores, labels) if l == "normal"]
        anomalies = [s for s, l in zip(scores, labels) if l == "anomaly"]
        wins = sum(
            1.0 if x > y else 0.5 if x == y else 0.0
            for x in normals for y in anomalies
        )
        oracle = wins / (len(normals) * len(anomalies))
        worst = max(worst, abs(auroc(scores, labels) - oracle))

    from logicad.metrics import TaskReport
    from logicad.scenes import Condition
    row = {Condition.WHITE_BG: 0.825, Condition.CABLE_BG: 0.811,
           Condition.MESH_BG: 0.848, Condition.LOWLIGHT_CD: 0.842,
           Condition.BLURRY_CD: 0.826}
    agg = aggregate([
        TaskReport(f"s-{c.value}", "s", c, v, {}, 1, 1) for c, v in row.items()
    ])
    mean_ok = 0.830 <= agg.mean_of_means <= 0.831
    std_ok = 0.013 <= agg.std_of_means <= 0.014
    ok = worst < 1e-12 and mean_ok and std_ok
    _verdict(5, ok, f"max AUROC deviation {worst:.2e}, summary "
                    f"{agg.mean_of_means:.4f}±{agg.std_of_means:.4f}")


def test_criterion_06_rule_engine_oracle():
    mismatches = 0
    checked = 0
    for scenario_id, enumerate_scenes in sorted(_ENUMERATIONS.items()):
        spec = get_scenario(scenario_id)
        for scene, expected in enumerate_scenes():
            checked += 1
            if classify(scene, spec) != expected:
                mismatches += 1
    ok = mismatches == 0 and checked > 0
    _verdict(6, ok, f"{checked} enumerated scenes, {mismatches} disagreements")


def test_criterion_07_negative_validity():
    clean = RenderConfig(0.0, 0.0, 0.0)
    noisy = RenderConfig(0.9, 0.15, 0.05)
    failures = 0
    total = 0
    for scenario_id in sorted(SCENARIOS):
        spec = get_scenario(scenario_id)
        grammar = get_grammar(scenario_id)
        rng = np.random.default_rng(70)
        for i in range(1000):
            cfg = clean if i % 2 == 0 else noisy
            pos = render(sample_normal(spec, rng), cfg, rng, grammar)
            neg, _ = synthesize_negative(pos, grammar, rng)
            total += 1
            if not validate_negative(pos, neg, grammar).passed:
                failures += 1
    ok = failures == 0 and total == 10_000
    _verdict(7, ok, f"{total} negatives synthesized, {failures} invalid")


def test_criterion_08_round_trip_identity():
    mismatches = 0
    texts = 0
    for scenario_id in sorted(SCENARIOS):
        grammar = get_grammar(scenario_id)
        slots = grammar.scene_slots(
            sample_normal(get_scenario(scenario_id), np.random.default_rng(0)))
        for variant in range(len(grammar.variants)):
            for mask in grammar.clause_masks(variant):
                skeleton = grammar.skeleton_id(variant, mask)
                text = render_record(grammar, skeleton, slots)
                record = parse(text, grammar)
                texts += 1
                if render_record(grammar, record.skeleton,
                                 record.slot_map()) != text:
                    mismatches += 1
    ok = mismatches == 0 and texts > 0
    _verdict(8, ok, f"{texts} canonical texts round-tripped, "
                    f"{mismatches} mismatches")


def test_criterion_09_end_to_end_benchmark():
    start = time.monotonic()
    config = pipeline.PipelineConfig(master_seed=0)
    trained_reports = [
        scored.report for *_, scored in pipeline.run_benchmark(config, jobs=1)
    ]
    baseline_config = pipeline.PipelineConfig(master_seed=0, skip_training=True)
    baseline_reports = [
        scored.report
        for *_, scored in pipeline.run_benchmark(baseline_config, jobs=1)
    ]
    elapsed = time.monotonic() - start
    trained = aggregate(trained_reports).mean_of_means
    baseline = aggregate(baseline_reports).mean_of_means
    ok = (len(trained_reports) == 50 and trained >= 0.85
          and trained - baseline >= 0.10 and elapsed < 600.0)
    _verdict(9, ok, f"trained {trained:.4f}, baseline {baseline:.4f}, "
                    f"gap {trained - baseline:.4f}, {elapsed:.0f}s for 2x50 tasks")


def test_criterion_10_pipeline_determinism(tmp_path):
    args = ["all", "--scenario", "sticks", "--seed", "3", "--epochs", "5",
            "--format", "csv"]
    dir_a, dir_b = tmp_path / "run_a", tmp_path / "run_b"
    assert cli.main([*args, "--out-dir", str(dir_a)]) == 0
    assert cli.main([*args, "--out-dir", str(dir_b)]) == 0
    compared = 0
    identical = True
    for path_a in sorted(dir_a.iterdir()):
        if path_a.suffix == ".npz":
            continue  # checkpoints hold equal arrays but zip metadata differs
        path_b = dir_b / path_a.name
        compared += 1
        if path_a.read_bytes() != path_b.read_bytes():
            identical = False
    score_files = len(list(dir_a.glob("*.scores.jsonl")))
    ok = identical and score_files == 5 and (dir_a / "report.csv").exists()
    _verdict(10, ok, f"{compared} emitted files byte-identical across two "
                     f"full runs: {identical}")
