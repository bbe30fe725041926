import numpy as np
import pytest

import models
import tensor_core as tc
from corpus import BOS, EOS, PAD
from models import ConfigError, ModelConfig, count_params, init_params
from tensor_core import Tape, backward
from tensor_core.gradcheck import check_gradients
from tensor_core.optim import adam_step, init_adam


def tiny_config(arch="transformer", pos=True, **overrides):
    fields = dict(architecture=arch, num_layers=2, embed_dim=8, hidden_dim=12, num_heads=2,
                  encoder_positional_encoding=pos, source_vocab_size=70, target_vocab_size=11)
    fields.update(overrides)
    return ModelConfig(**fields)


def make_test_data(seed=0, batch=2, src_len=6, tgt_len=5):
    rng = np.random.default_rng(seed)
    source = rng.integers(4, 70, size=(batch, src_len))
    mask = np.ones_like(source, dtype=bool)
    target = rng.integers(3, 11, size=(batch, tgt_len))
    target[:, 0] = BOS
    return source, mask, target


def logits_of(params, config, source, mask, target):
    return models.forward(params, config, source, mask, target).data


@pytest.mark.parametrize("arch", ["rnn", "transformer"])
def test_logits_shape(arch):
    config = tiny_config(arch)
    params = init_params(config, 0)
    source, mask, target = make_test_data(batch=3, src_len=7, tgt_len=4)
    assert logits_of(params, config, source, mask, target).shape == (3, 4, 11)


def test_rnn_attention_sums_to_one_over_real_tracks():
    config = tiny_config("rnn")
    params = init_params(config, 1)
    source, mask, target = make_test_data(1)
    mask[0, 4:] = False
    source[0, 4:] = PAD
    memory = models.encode(params, config, source, mask)
    _, maps = models.decode(params, config, memory, target, return_attention=True)
    assert len(maps) == target.shape[1]
    for w in maps:
        assert np.allclose(w.data.sum(axis=-1), 1.0)
        assert np.all(w.data[0, 4:] == 0.0)


def test_transformer_attention_maps():
    config = tiny_config()
    params = init_params(config, 2)
    source, mask, target = make_test_data(2)
    mask[1, 3:] = False
    memory = models.encode(params, config, source, mask, return_attention=True)
    assert len(memory.attention) == config.num_layers
    for w in memory.attention:
        assert w.shape == (2, 2, 6, 6)
        assert np.allclose(w.data.sum(axis=-1), 1.0)
        assert np.all(w.data[1, :, :, 3:] == 0.0)
    _, cross = models.decode(params, config, memory, target, return_attention=True)
    assert cross[0].shape == (2, 2, 5, 6)


@pytest.mark.parametrize("arch", ["rnn", "transformer"])
def test_decoder_is_causal(arch):
    config = tiny_config(arch)
    params = init_params(config, 3)
    source, mask, target = make_test_data(3, batch=1, tgt_len=6)
    base = logits_of(params, config, source, mask, target)
    for j in range(1, 6):
        changed = target.copy()
        changed[0, j] = 3 + (changed[0, j] - 2) % 8
        out = logits_of(params, config, source, mask, changed)
        assert np.allclose(out[:, :j], base[:, :j], rtol=0, atol=1e-12)
        assert not np.allclose(out[:, j], base[:, j])


@pytest.mark.parametrize("seed", range(10))
def test_no_encoder_positions_is_order_free(seed):
    config = tiny_config(pos=False)
    params = init_params(config, seed)
    rng = np.random.default_rng(seed)
    for length in (1, 2, 3, 5, 8, 13, 21, 34, 64):
        source, mask, target = make_test_data(seed, batch=1, src_len=length)
        perm = rng.permutation(length)
        a = logits_of(params, config, source, mask, target)
        b = logits_of(params, config, source[:, perm], mask[:, perm], target)
        assert np.max(np.abs(a - b)) < 1e-9


def test_no_encoder_positions_is_order_free_with_padding():
    config = tiny_config(pos=False)
    params = init_params(config, 11)
    source, mask, target = make_test_data(11, batch=2, src_len=9)
    mask[0, 5:] = False
    source[0, 5:] = PAD
    permuted = source.copy()
    permuted[0, :5] = source[0, [3, 0, 4, 2, 1]]
    permuted[1] = source[1, ::-1]
    a = logits_of(params, config, source, mask, target)
    b = logits_of(params, config, permuted, mask, target)
    assert np.max(np.abs(a - b)) < 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_encoder_positions_break_order_invariance(seed):
    config = tiny_config(pos=True)
    params = init_params(config, seed)
    source, mask, target = make_test_data(seed, batch=1, src_len=8)
    a = logits_of(params, config, source, mask, target)
    b = logits_of(params, config, source[:, ::-1], mask, target)
    assert np.max(np.abs(a - b)) > 1e-6


def test_padding_does_not_leak_across_batch():
    config = tiny_config()
    params = init_params(config, 5)
    source, mask, target = make_test_data(5, batch=1, src_len=4, tgt_len=4)
    alone = logits_of(params, config, source, mask, target)
    wide_source = np.concatenate([source, np.full((1, 6), PAD)], axis=1)
    wide_mask = np.concatenate([mask, np.zeros((1, 6), dtype=bool)], axis=1)
    wide_target = np.concatenate([target, np.full((1, 3), PAD)], axis=1)
    padded = logits_of(params, config, wide_source, wide_mask, wide_target)
    assert np.allclose(padded[:, :4], alone, atol=1e-12)


def test_init_is_deterministic_and_bounded():
    config = tiny_config()
    a, b = init_params(config, 42), init_params(config, 42)
    assert a.names() == b.names()
    assert all(np.array_equal(a[n].data, b[n].data) for n in a)
    k = 1 / np.sqrt(config.embed_dim)
    for name in ("src_embed", "tgt_embed"):
        table = a[name].data
        assert np.all(np.abs(table) < k)
        assert np.array_equal(table[PAD], np.zeros(config.embed_dim))
    assert not np.array_equal(init_params(config, 43)["out.w"].data, a["out.w"].data)


@pytest.mark.parametrize("arch,layers,d,h", [("transformer", 1, 8, 12), ("transformer", 3, 16, 8),
                                             ("rnn", 1, 6, 5), ("rnn", 2, 8, 12), ("rnn", 3, 4, 7)])
def test_closed_form_count_matches_layout(arch, layers, d, h):
    config = tiny_config(arch, num_layers=layers, embed_dim=d, hidden_dim=h)
    assert count_params(config) == init_params(config, 0).count()


def test_reference_transformer_count():
    config = ModelConfig(source_vocab_size=1000, target_vocab_size=1500)
    expected = 662528 + 128 * (1000 + 1500) + 128 * 1500 + 1500
    assert count_params(config) == expected
    assert init_params(config, 0).count() == expected


def test_config_validation():
    with pytest.raises(ConfigError):
        tiny_config("cnn").validate()
    with pytest.raises(ConfigError):
        tiny_config(embed_dim=9, num_heads=3).validate()
    with pytest.raises(ConfigError):
        tiny_config(target_vocab_size=4).validate()
    with pytest.raises(ConfigError):
        ModelConfig.from_dict({"architecture": "rnn", "layers": 2})
    config = tiny_config("rnn")
    assert ModelConfig.from_dict(config.to_dict()) == config


def test_target_longer_than_positions():
    config = tiny_config(max_positions=4)
    params = init_params(config, 0)
    source, mask, target = make_test_data(tgt_len=6)
    with pytest.raises(ConfigError):
        models.forward(params, config, source, mask, target)


@pytest.mark.parametrize("arch", ["rnn", "transformer"])
def test_end_to_end_gradients(arch):
    config = tiny_config(arch, num_layers=1, embed_dim=4, hidden_dim=6, num_heads=2,
                         source_vocab_size=9, target_vocab_size=7)
    params = init_params(config, 8)
    rng = np.random.default_rng(8)
    source = rng.integers(4, 9, size=(2, 4))
    mask = np.ones_like(source, dtype=bool)
    mask[1, 3] = False
    source[1, 3] = PAD
    target = np.array([[BOS, 4, 5, EOS], [BOS, 6, EOS, PAD]])
    tensors = params.tensors()
    coords = {i: rng.choice(t.size, size=min(t.size, 12), replace=False).tolist()
              for i, t in enumerate(tensors)}

    def loss(*_):
        logits = models.forward(params, config, source, mask, target[:, :-1])
        return tc.cross_entropy_nll(logits, target[:, 1:], PAD)

    assert check_gradients(loss, tensors, coords=coords) < 1e-3


@pytest.mark.parametrize("arch", ["rnn", "transformer"])
def test_single_pair_overfit(arch):
    config = tiny_config(arch, embed_dim=16, hidden_dim=16, num_heads=2)
    params = init_params(config, 0).set_requires_grad(True)
    source = np.array([[10, 11, 12, 13, 14]])
    mask = np.ones_like(source, dtype=bool)
    target = np.array([[BOS, 4, 5, 6, 7, EOS]])
    tensors = params.tensors()
    state = init_adam(tensors, base_lr=0.01)
    for _ in range(200):
        params.zero_grad()
        with Tape() as tape:
            loss = tc.cross_entropy_nll(models.forward(params, config, source, mask, target[:, :-1]),
                                        target[:, 1:], PAD)
        backward(loss, tape)
        adam_step(tensors, [t.grad for t in tensors], state)
    final = tc.cross_entropy_nll(models.forward(params, config, source, mask, target[:, :-1]),
                                 target[:, 1:], PAD).item()
    assert final < 0.1
