import json

import pytest

from corpus import (BOS, EOS, PAD, UNK, TokenizedPlaylist, Vocab, build_vocabs, encode_pair,
                    stratified_split)
from corpus.split import stratum_sizes
from corpus.vocab import build_vocab
from tensor_core import DegenerateInputError


def make_stratum(n, length, prefix="p"):
    return [TokenizedPlaylist(f"{prefix}{length}_{i}", ["word"] * length, [f"t{i}"]) for i in range(n)]


def ids(items):
    return [p.id for p in items]


def test_one_stratum_of_ten():
    split = stratified_split(make_stratum(10, 4), seed=1)
    assert split.sizes() == (8, 1, 1)


def test_small_strata_go_to_train():
    split = stratified_split(make_stratum(2, 4), seed=1)
    assert split.sizes() == (2, 0, 0)
    assert stratum_sizes(3) == (1, 1, 1)
    assert stratum_sizes(25) == (21, 2, 2)


def test_split_is_disjoint_and_complete():
    corpus = make_stratum(10, 4) + make_stratum(23, 5) + make_stratum(2, 6) + make_stratum(41, 7)
    split = stratified_split(corpus, seed=3)
    parts = ids(split.train) + ids(split.validation) + ids(split.test)
    assert sorted(parts) == sorted(ids(corpus))
    assert len(set(parts)) == len(parts)
    assert split.sizes() == (8 + 19 + 2 + 33, 1 + 2 + 4, 1 + 2 + 4)


def test_split_determinism():
    corpus = make_stratum(40, 4) + make_stratum(30, 5)
    a = stratified_split(corpus, seed=7)
    b = stratified_split(corpus, seed=7)
    c = stratified_split(corpus, seed=8)
    assert ids(a.validation) == ids(b.validation) and ids(a.train) == ids(b.train)
    assert a.sizes() == c.sizes()
    assert ids(a.validation) != ids(c.validation)


def test_strata_merged_in_length_order():
    split = stratified_split(make_stratum(10, 6) + make_stratum(10, 4), seed=0)
    lengths = [len(p.title_tokens) for p in split.train]
    assert lengths == sorted(lengths)


def test_bad_ratios():
    with pytest.raises(ValueError):
        stratified_split(make_stratum(5, 4), ratios=(8, 0, 1))


def test_word_vocab_min_count_and_order():
    train = [TokenizedPlaylist("x", ["a"] * 5 + ["b"] * 2 + ["c"], ["t"])]
    _, words = build_vocabs(train, min_count_word=2)
    assert words.to_list() == ["<pad>", "<bos>", "<eos>", "<unk>", "a", "b"]


def test_vocab_ties_are_lexicographic():
    vocab = build_vocab({"zeta": 2, "alpha": 2, "mid": 3})
    assert vocab.to_list()[4:] == ["mid", "alpha", "zeta"]


def test_min_count_one_keeps_everything_once():
    p = TokenizedPlaylist("x", ["late", "night", "late"], ["t1", "t2", "t1"])
    tracks, words = build_vocabs([p])
    assert len(tracks) == 4 + 2 and len(words) == 4 + 2
    assert sorted(words.to_list()[4:]) == ["late", "night"]


def test_empty_train_is_degenerate():
    with pytest.raises(DegenerateInputError):
        build_vocabs([])


def test_reserved_indices_and_unk():
    vocab = Vocab(["late"])
    assert vocab.to_list()[:4] == ["<pad>", "<bos>", "<eos>", "<unk>"]
    assert (PAD, BOS, EOS, UNK) == (0, 1, 2, 3)
    assert vocab.encode(["<pad>", "<bos>", "<eos>", "<unk>"]) == [UNK] * 4
    assert vocab.index("never-seen") == UNK
    assert vocab.decode(vocab.encode(["late"])) == ["late"]


def test_vocab_file_round_trip(tmp_path):
    vocab = Vocab(["가을밤", "jazz"])
    path = tmp_path / "vocab.json"
    vocab.save(path)
    assert json.loads(path.read_text(encoding="utf-8"))[4] == "가을밤"
    assert Vocab.load(path) == vocab


def test_vocab_rejects_bad_lists():
    with pytest.raises(ValueError):
        Vocab.from_list(["jazz", "<bos>", "<eos>", "<unk>"])
    with pytest.raises(ValueError):
        Vocab(["jazz", "jazz"])


def test_reserved_spellings_in_data_are_unknown():
    train = [TokenizedPlaylist("a", ["late", "<eos>", "jazz"], ["<pad>", "t1", "<bos>"])]
    vocabs = build_vocabs(train)
    assert "<eos>" not in vocabs[1].to_list()[4:] and "<pad>" not in vocabs[0].to_list()[4:]
    e = encode_pair(train[0], vocabs)
    assert e.source == [UNK, vocabs[0].index("t1"), UNK]
    assert e.target[0] == BOS and e.target[-1] == EOS
    assert e.target[1:-1] == [vocabs[1].index("late"), UNK, vocabs[1].index("jazz")]
    assert PAD not in e.source and EOS not in e.target[1:-1]
