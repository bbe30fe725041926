import os
import time

import numpy as np

from cli import EXIT_OK
from cli.main import main
from corpus import (Vocab, build_vocabs, encode_all, make_order_free_corpus, tokenize_playlist,
                    write_jsonl)
from generation import GenerationFailure, GenerationRequest, batch_generate
from models import ModelConfig, init_params
from tensor_core.optim import init_adam
from training import Checkpoint, TrainConfig, load_checkpoint, train_epoch

TOY_CONFIG = os.path.join(os.path.dirname(__file__), '..', 'configs', 'toy_config.yaml')


def make_prepared(tmp_path, n_train=16):
    """Prepared-corpus directory with n_train training playlists and 4 each for val/test."""
    playlists = [tokenize_playlist(p) for p in make_order_free_corpus(n_train + 8, seed=0)]
    train, val, test = playlists[:n_train], playlists[n_train:n_train + 4], playlists[n_train + 4:]
    out = tmp_path / "prepared"
    out.mkdir()
    for name, rows in (("train.jsonl", train), ("val.jsonl", val), ("test.jsonl", test)):
        write_jsonl(out / name, rows)
    tracks, words = build_vocabs(train)
    tracks.save(out / "vocab_tracks.json")
    words.save(out / "vocab_words.json")
    return out


def test_toy_training_run_within_a_minute(tmp_path):
    data = make_prepared(tmp_path)
    start = time.perf_counter()
    code = main(["train", "--config", TOY_CONFIG, "--data", str(data), "--out", str(tmp_path / "run")])
    elapsed = time.perf_counter() - start
    assert code == EXIT_OK
    assert elapsed < 60.0
    ckpt = load_checkpoint(tmp_path / "run" / "checkpoint.ssq")
    assert ckpt.model_config.embed_dim == 16 and ckpt.metadata["epochs_run"] <= 5


def test_full_size_transformer_overfits_32_playlists():
    playlists = [tokenize_playlist(p) for p in make_order_free_corpus(32, seed=0)]
    vocabs = build_vocabs(playlists)
    train = encode_all(playlists, vocabs)
    config = ModelConfig(num_layers=2, embed_dim=128, hidden_dim=256, num_heads=4,
                         source_vocab_size=len(vocabs[0]), target_vocab_size=len(vocabs[1]))
    params = init_params(config, 0)
    state = init_adam(params.tensors(), base_lr=0.005)
    train_config = TrainConfig(base_lr=0.005, batch_size=8, max_epochs=200)
    start = time.perf_counter()
    curve = []
    for epoch in range(1, 201):
        params, state, nll = train_epoch(config, params, state, train, train_config, epoch)
        curve.append(nll)
        if nll < 0.5:
            break
    assert curve[-1] < 0.5, f"train NLL still {curve[-1]:.3f} after {len(curve)} epochs"
    assert time.perf_counter() - start < 300.0


def test_batch_generate_100_requests_within_budget():
    tracks = Vocab([f"t{i}" for i in range(996)])
    words = Vocab([f"w{i}" for i in range(1496)])
    config = ModelConfig(num_layers=2, embed_dim=128, hidden_dim=256, num_heads=4,
                         source_vocab_size=len(tracks), target_vocab_size=len(words))
    ckpt = Checkpoint(config, init_params(config, 0), tracks, words, {"max_source_len": 256})
    rng = np.random.default_rng(0)
    requests = [GenerationRequest([f"t{j}" for j in rng.choice(996, size=20, replace=False)])
                for _ in range(100)]
    start = time.perf_counter()
    titles = batch_generate(ckpt, requests)
    elapsed = time.perf_counter() - start
    assert len(titles) == 100 and not any(isinstance(t, GenerationFailure) for t in titles)
    assert all(len(t.tokens) <= 16 for t in titles)
    assert elapsed < 10.0
