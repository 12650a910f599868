"""Encoder forward pass, dropout statistics, and the embedding store format."""

import numpy as np
import pytest

from logicad.encoder import (
    UNKNOWN_ID,
    EncodeError,
    Vocabulary,
    encode,
    encode_batch_precomputed,
    init_params,
    make_dropout_mask,
    read_embedding_store,
    renormalize,
    tokenize,
    write_embedding_store,
)

TEXTS = [
    "There are three oranges and two kiwis.",
    "The total number of items is five.",
    "Two long blue sticks sit beside one short red stick.",
]


def _setup(dim=16, seed=0):
    vocab = Vocabulary.build(TEXTS)
    return vocab, init_params(vocab.size, dim=dim, seed=seed)


def test_vocabulary_is_sorted_and_reserves_unknown():
    vocab = Vocabulary.build(["b a", "c a"])
    assert vocab.token_to_id == {"<unk>": 0, "a": 1, "b": 2, "c": 3}
    assert vocab.lookup("zzz") == UNKNOWN_ID


def test_tokenize_lowercases_and_maps_oov_to_unknown():
    vocab = Vocabulary.build(["alpha beta"])
    ids = tokenize("Alpha GAMMA beta!", vocab)
    assert ids.tolist() == [vocab.lookup("alpha"), UNKNOWN_ID,
                            vocab.lookup("beta")]
    with pytest.raises(EncodeError):
        tokenize("...", vocab)


def test_deterministic_encoding_is_unit_norm_and_repeatable():
    vocab, params = _setup()
    for text in TEXTS:
        z1 = encode(text, params, vocab)
        z2 = encode(text, params, vocab)
        assert np.allclose(z1, z2)
        assert abs(np.linalg.norm(z1) - 1.0) < 1e-12


def test_single_token_text_encodes():
    vocab, params = _setup()
    z = encode("oranges", params, vocab)
    assert abs(np.linalg.norm(z) - 1.0) < 1e-12


def test_zero_dropout_stochastic_equals_deterministic():
    vocab, params = _setup()
    params.dropout_rate = 0.0
    det = encode(TEXTS[0], params, vocab)
    sto = encode(TEXTS[0], params, vocab, mode="stochastic",
                 rng=np.random.default_rng(0))
    assert np.allclose(det, sto)


def test_stochastic_mean_converges_to_deterministic_direction():
    vocab, params = _setup(dim=16, seed=3)
    det = encode(TEXTS[0], params, vocab)
    rng = np.random.default_rng(11)
    total = np.zeros_like(det)
    for _ in range(5000):
        total += encode(TEXTS[0], params, vocab, mode="stochastic", rng=rng)
    mean_dir = total / np.linalg.norm(total)
    assert float(mean_dir @ det) > np.cos(np.deg2rad(2.0))


def test_stochastic_mode_requires_a_random_source():
    vocab, params = _setup()
    with pytest.raises(ValueError):
        encode(TEXTS[0], params, vocab, mode="stochastic")
    with pytest.raises(ValueError):
        encode(TEXTS[0], params, vocab, mode="sloppy")


def test_inverted_dropout_mask_is_unbiased():
    rng = np.random.default_rng(5)
    mask = make_dropout_mask(2000, 8, 0.3, rng)
    assert set(np.round(np.unique(mask), 12)) <= {0.0, round(1 / 0.7, 12)}
    assert abs(mask.mean() - 1.0) < 0.02
    assert np.all(make_dropout_mask(10, 4, 0.0, rng) == 1.0)


def test_init_params_shapes_and_dim_floor():
    params = init_params(7, dim=4, seed=1)
    assert params.embedding.shape == (7, 4)
    assert params.proj_w.shape == (4, 4)
    assert np.all(params.proj_b == 0.0)
    with pytest.raises(ValueError):
        init_params(7, dim=1)


def test_renormalize_and_precomputed_lookup():
    store = {"a": np.array([3.0, 4.0]), "b": np.array([0.0, 2.0])}
    out = encode_batch_precomputed(["a", "b"], store)
    assert np.allclose(out[0], [0.6, 0.8])
    assert np.allclose(out[1], [0.0, 1.0])
    with pytest.raises(KeyError):
        encode_batch_precomputed(["missing"], store)
    with pytest.raises(EncodeError):
        renormalize(np.zeros(3))


def test_embedding_store_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    store = {f"sample-{i:03d}": rng.normal(size=12).astype(np.float32)
             for i in range(9)}
    path = tmp_path / "embeddings.bin"
    write_embedding_store(path, store)
    loaded = read_embedding_store(path)
    assert sorted(loaded) == sorted(store)
    for key in store:
        assert loaded[key].dtype == np.float64
        assert np.allclose(loaded[key], store[key], atol=1e-7)


def test_embedding_store_rejects_foreign_files(tmp_path):
    path = tmp_path / "not_a_store.bin"
    path.write_bytes(b"JUNK" + b"\x00" * 16)
    with pytest.raises(ValueError):
        read_embedding_store(path)


def test_embedding_store_rejects_mixed_dimensions(tmp_path):
    store = {"a": np.zeros(4), "b": np.zeros(5)}
    with pytest.raises(ValueError):
        write_embedding_store(tmp_path / "bad.bin", store)
