from collections import Counter
from itertools import permutations

import numpy as np
import pytest

from corpus import (BOS, EOS, PAD, UNK, EncodedExample, TokenizedPlaylist, Vocab, augment_copies,
                    encode_pair, make_batches, pad_batch, shuffle_tracks)
from tensor_core import DegenerateInputError


def make_test_data():
    tracks = Vocab([f"t{i}" for i in range(300)])
    words = Vocab(["late", "night", "drive", "mix"])
    return tracks, words


def make_examples(n, seed=0):
    rng = np.random.default_rng(seed)
    return [EncodedExample(source=list(rng.integers(4, 50, size=int(rng.integers(1, 9)))),
                           target=[BOS, 4, 5, EOS], id=f"e{i}") for i in range(n)]


def test_encode_pair_target_and_source():
    vocabs = make_test_data()
    p = TokenizedPlaylist("p", ["late", "night", "drive", "mix"], ["t0", "t5", "unseen"])
    e = encode_pair(p, vocabs)
    words = vocabs[1]
    assert e.target == [BOS, words.index("late"), words.index("night"), words.index("drive"),
                        words.index("mix"), EOS]
    assert e.source == [vocabs[0].index("t0"), vocabs[0].index("t5"), UNK]
    assert e.id == "p"


def test_encode_pair_truncates_source_only():
    vocabs = make_test_data()
    p = TokenizedPlaylist("p", ["late"] * 40, [f"t{i}" for i in range(300)])
    e = encode_pair(p, vocabs, max_source_len=256)
    assert len(e.source) == 256
    assert e.source == vocabs[0].encode([f"t{i}" for i in range(256)])
    assert len(e.target) == 42


def test_encode_pair_without_tracks():
    with pytest.raises(DegenerateInputError):
        encode_pair(TokenizedPlaylist("p", ["late"], []), make_test_data())


def test_shuffle_singleton_and_multiset():
    e = EncodedExample([7], [BOS, 4, EOS])
    assert shuffle_tracks(e, 0).source == [7]
    long = EncodedExample(list(range(4, 30)) + [4, 4], [BOS, 5, EOS])
    out = shuffle_tracks(long, 11)
    assert sorted(out.source) == sorted(long.source)
    assert out.target == long.target
    assert shuffle_tracks(long, 11) == out


def test_shuffle_is_uniform_over_orders():
    e = EncodedExample([10, 11, 12], [BOS, 4, EOS])
    rng = np.random.default_rng(2024)
    counts = Counter(tuple(shuffle_tracks(e, rng).source) for _ in range(10000))
    assert set(counts) == set(permutations([10, 11, 12]))
    for c in counts.values():
        assert abs(c / 10000 - 1 / 6) < 0.02


def test_augment_copies_keeps_originals_first():
    examples = make_examples(5)
    out = augment_copies(examples, 2, seed=1)
    assert len(out) == 15
    assert out[:5] == examples
    for i, copy in enumerate(out[5:]):
        assert sorted(copy.source) == sorted(examples[i % 5].source)


def test_batch_sizes():
    batches = make_batches(make_examples(130), batch_size=64)
    assert [len(b) for b in batches] == [64, 64, 2]


def test_padding_and_masks():
    a = EncodedExample([5, 6, 7], [BOS, 4, EOS], "a")
    b = EncodedExample([5, 6, 7, 8, 9], [BOS, 4, 5, 6, EOS], "b")
    batch = pad_batch([a, b])
    assert batch.source.shape == (2, 5)
    assert batch.source_mask.sum(axis=1).tolist() == [3, 5]
    assert batch.source[0, 3:].tolist() == [PAD, PAD]
    assert batch.decoder_input.shape == (2, 4) and batch.decoder_target.shape == (2, 4)
    assert batch.decoder_target[0].tolist() == [4, EOS, PAD, PAD]
    assert batch.target_tokens() == 2 + 4
    assert batch.ids == ["a", "b"]


def test_epoch_seeds_change_order_not_content():
    examples = make_examples(50)
    first = [i for b in make_batches(examples, 8, epoch_seed=1) for i in b.ids]
    second = [i for b in make_batches(examples, 8, epoch_seed=2) for i in b.ids]
    again = [i for b in make_batches(examples, 8, epoch_seed=1) for i in b.ids]
    assert first != second and sorted(first) == sorted(second)
    assert first == again
    unshuffled = [i for b in make_batches(examples, 8) for i in b.ids]
    assert unshuffled == [e.id for e in examples]


def test_make_batches_rejects_bad_input():
    with pytest.raises(DegenerateInputError):
        make_batches([], 4)
    with pytest.raises(ValueError):
        make_batches(make_examples(3), 0)
