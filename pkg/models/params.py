"""
Parameter layout, seeded initialization and the closed-form parameter count.

Weights are stored [in, out] so layers compute x @ W + b. Every weight and
bias is drawn from uniform(-k, k) with k = 1/sqrt(fan_in); embeddings use
fan_in = embed_dim and have their PAD row zeroed. Layer-norm gains start at 1
and offsets at 0.
"""
from collections import OrderedDict

import numpy as np

from corpus.vocab import PAD
from tensor_core import Tensor

ATTN_PARTS = ("wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo")


def _attn(prefix, d):
    out = []
    for w, b in zip(ATTN_PARTS[::2], ATTN_PARTS[1::2]):
        out += [(f"{prefix}.{w}", (d, d), d, "uniform"), (f"{prefix}.{b}", (d,), d, "uniform")]
    return out


def _ln(prefix, d):
    return [(f"{prefix}.gamma", (d,), d, "ones"), (f"{prefix}.beta", (d,), d, "zeros")]


def _ffn(prefix, d, f):
    return [(f"{prefix}.w1", (d, f), d, "uniform"), (f"{prefix}.b1", (f,), d, "uniform"),
            (f"{prefix}.w2", (f, d), f, "uniform"), (f"{prefix}.b2", (d,), f, "uniform")]


def _linear(prefix, n_in, n_out):
    return [(f"{prefix}.w", (n_in, n_out), n_in, "uniform"), (f"{prefix}.b", (n_out,), n_in, "uniform")]


def _gru(prefix, n_in, h):
    return [(f"{prefix}.w_x", (n_in, 3 * h), n_in, "uniform"), (f"{prefix}.w_h", (h, 3 * h), h, "uniform"),
            (f"{prefix}.b_x", (3 * h,), n_in, "uniform"), (f"{prefix}.b_h", (3 * h,), h, "uniform")]


def param_layout(config):
    """Ordered (name, shape, fan_in, init) entries for a config."""
    d, vs, vt, L = config.embed_dim, config.source_vocab_size, config.target_vocab_size, config.num_layers
    layout = [("src_embed", (vs, d), d, "embed"), ("tgt_embed", (vt, d), d, "embed")]
    if config.architecture == "transformer":
        f = config.hidden_dim
        for l in range(L):
            layout += _attn(f"enc.{l}.self_attn", d) + _ln(f"enc.{l}.ln1", d)
            layout += _ffn(f"enc.{l}.ffn", d, f) + _ln(f"enc.{l}.ln2", d)
        for l in range(L):
            layout += _attn(f"dec.{l}.self_attn", d) + _ln(f"dec.{l}.ln1", d)
            layout += _attn(f"dec.{l}.cross_attn", d) + _ln(f"dec.{l}.ln2", d)
            layout += _ffn(f"dec.{l}.ffn", d, f) + _ln(f"dec.{l}.ln3", d)
        layout += _linear("out", d, vt)
    else:
        h = config.hidden_dim
        for l in range(L):
            n_in = d if l == 0 else 2 * h
            layout += _gru(f"enc.{l}.fwd", n_in, h) + _gru(f"enc.{l}.bwd", n_in, h)
        layout += _linear("enc.proj", 2 * h, h)
        for l in range(L):
            layout += _linear(f"bridge.{l}", 2 * h, h)
        for l in range(L):
            layout += _gru(f"dec.{l}", d if l == 0 else h, h)
        layout += [("attn.w_s", (h, h), h, "uniform"), ("attn.w_z", (h, h), h, "uniform"),
                   ("attn.v", (h, 1), h, "uniform")]
        layout += _linear("combine", 2 * h, h) + _linear("out", h, vt)
    return layout


class ModelParams:
    """Named, ordered collection of parameter tensors."""

    def __init__(self, tensors=None):
        self._tensors = OrderedDict(tensors or ())

    def __getitem__(self, name):
        return self._tensors[name]

    def __setitem__(self, name, tensor):
        self._tensors[name] = tensor

    def __contains__(self, name):
        return name in self._tensors

    def __iter__(self):
        return iter(self._tensors)

    def __len__(self):
        return len(self._tensors)

    def names(self):
        return list(self._tensors)

    def items(self):
        return self._tensors.items()

    def tensors(self):
        return list(self._tensors.values())

    def scope(self, prefix):
        cut = len(prefix) + 1
        return {k[cut:]: v for k, v in self._tensors.items() if k.startswith(prefix + ".")}

    def count(self):
        return int(sum(t.size for t in self._tensors.values()))

    def copy(self):
        return ModelParams((k, Tensor(v.data.copy())) for k, v in self._tensors.items())

    def set_requires_grad(self, flag=True):
        for t in self._tensors.values():
            t.requires_grad = flag
        return self

    def zero_grad(self):
        for t in self._tensors.values():
            t.zero_grad()

    def is_finite(self):
        return all(np.isfinite(t.data).all() for t in self._tensors.values())


def init_params(config, seed):
    config.validate()
    rng = np.random.default_rng(seed)
    params = ModelParams()
    for name, shape, fan_in, kind in param_layout(config):
        if kind == "ones":
            data = np.ones(shape)
        elif kind == "zeros":
            data = np.zeros(shape)
        else:
            k = 1.0 / np.sqrt(fan_in)
            data = rng.uniform(-k, k, size=shape)
            if kind == "embed":
                data[PAD] = 0.0
        params[name] = Tensor(data)
    return params


def count_params(config):
    """Closed-form parameter count; see docs/PARAMETER_COUNT.md for the derivation."""
    d, vs, vt, L, h = (config.embed_dim, config.source_vocab_size, config.target_vocab_size,
                       config.num_layers, config.hidden_dim)
    embeddings = d * (vs + vt)
    if config.architecture == "transformer":
        attn = 4 * d * d + 4 * d
        ffn = 2 * d * h + h + d
        encoder = L * (attn + ffn + 2 * 2 * d)
        decoder = L * (2 * attn + ffn + 3 * 2 * d)
        return embeddings + encoder + decoder + d * vt + vt
    gru = lambda n_in: 3 * h * (n_in + h) + 6 * h
    encoder = 2 * gru(d) + (L - 1) * 2 * gru(2 * h) + (2 * h * h + h)
    bridge = L * (2 * h * h + h)
    decoder = gru(d) + (L - 1) * gru(h)
    head = (2 * h * h + h) + (2 * h * h + h) + (h * vt + vt)
    return embeddings + encoder + bridge + decoder + head
