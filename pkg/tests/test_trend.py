import os
from collections import Counter

import pandas as pd
import pytest

from corpus import filter_corpus, make_order_free_corpus, tokenize_playlist
from training.experiments import TREND_CORPUS, compare_variants, results_markdown, trend_checks

slow = pytest.mark.skipif(os.environ.get("TITLEGEN_SLOW") != "1",
                          reason="multi-seed training run; set TITLEGEN_SLOW=1")


def make_summary(rnn, vanilla, shuffle, delete_pos):
    runs = pd.DataFrame([{"variant": v, "seed": 0, "val_nll": x, "test_nll": x, "epochs": 1}
                         for v, x in (("rnn", rnn), ("transformer", vanilla),
                                      ("transformer+shuffle", shuffle), ("transformer+delete_pos", delete_pos))])
    return runs, runs.groupby("variant", sort=False)[["val_nll", "test_nll"]].mean()


def test_trend_checks():
    _, summary = make_summary(1.2, 0.9, 0.88, 0.8)
    assert all(trend_checks(summary).values())
    _, summary = make_summary(0.0106, 0.00285, 0.00282, 0.00316)
    checks = trend_checks(summary)
    assert checks["shuffle_not_worse"] and checks["transformer_beats_rnn"]
    assert not checks["delete_pos_not_worse"] and not checks["clear_gain"]


def test_results_markdown_lists_every_variant():
    runs, summary = make_summary(1.2, 0.9, 0.88, 0.8)
    text = results_markdown(runs, summary)
    for name in ("rnn", "transformer+shuffle", "transformer+delete_pos", "clear_gain"):
        assert name in text
    assert "FAIL" not in text


def test_trend_corpus_is_sparse_and_passes_filter():
    corpus = [tokenize_playlist(p) for p in make_order_free_corpus(2000, seed=0, **TREND_CORPUS)]
    kept, _ = filter_corpus(corpus)
    assert len(kept) == 2000
    assert len({" ".join(p.title_tokens) for p in corpus}) == 20
    counts = Counter(t for p in corpus for t in p.tracks if t.startswith("t"))
    rare = sum(1 for c in counts.values() if c <= 2)
    assert rare > len(counts) / 2


@slow
def test_order_free_variants_beat_vanilla():
    _, summary = compare_variants(seeds=(0, 1, 2), n_playlists=2000)
    checks = trend_checks(summary)
    assert all(checks.values()), f"{checks}\n{summary}"
