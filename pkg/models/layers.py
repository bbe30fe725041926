import numpy as np

import tensor_core as tc
from tensor_core import DegenerateInputError, ShapeError, Tensor

from .config import ConfigError


def sinusoidal_positional_encoding(max_positions, d):
    """[max_positions, d] table: column 2i = sin(pos / 10000^(2i/d)), column 2i+1 = cos(...)."""
    if d % 2:
        raise ConfigError(f"sinusoidal encoding needs an even dimension, got {d}")
    pos = np.arange(max_positions, dtype=np.float64)[:, None]
    rates = np.power(10000.0, np.arange(0, d, 2, dtype=np.float64) / d)
    table = np.zeros((max_positions, d))
    table[:, 0::2] = np.sin(pos / rates)
    table[:, 1::2] = np.cos(pos / rates)
    return Tensor(table)


def linear(x, w, b=None):
    y = tc.matmul(x, w)
    return y if b is None else tc.add(y, b)


def scaled_dot_product_attention(q, k, v, mask=None, return_weights=False):
    """softmax(q k^T / sqrt(dk), masked) v over the last two axes.

    ``mask`` is boolean, True where a query may attend a key, and broadcasts to
    [..., a, b]. Disallowed scores are set to -1e9 before the softmax.
    """
    if q.shape[-1] != k.shape[-1] or k.shape[-2] != v.shape[-2]:
        raise ShapeError(f"attention: q {q.shape}, k {k.shape}, v {v.shape} do not agree")
    scores = tc.scale(tc.matmul(q, tc.swap_last(k)), 1.0 / np.sqrt(q.shape[-1]))
    if mask is not None:
        keep = np.broadcast_to(np.asarray(mask, dtype=bool), scores.shape)
        if not keep.any(axis=-1).all():
            raise DegenerateInputError("attention row with every key masked")
        scores = tc.masked_fill(scores, keep)
    weights = tc.softmax(scores, axis=-1)
    out = tc.matmul(weights, v)
    return (out, weights) if return_weights else out


def _split_heads(x, h):
    b, n, d = x.shape
    return tc.transpose(tc.reshape(x, (b, n, h, d // h)), (0, 2, 1, 3))


def _merge_heads(x):
    b, h, n, dh = x.shape
    return tc.reshape(tc.transpose(x, (0, 2, 1, 3)), (b, n, h * dh))


def multi_head_attention(p, query, key, value, mask, num_heads, return_weights=False):
    """Projected attention over ``num_heads`` heads; inputs are [B, n, d].

    ``p`` holds wq/bq/wk/bk/wv/bv/wo/bo. ``mask`` is [B, a, b] (or broadcastable).
    """
    d = query.shape[-1]
    if d % num_heads:
        raise ShapeError(f"model width {d} is not divisible by {num_heads} heads")
    q = _split_heads(linear(query, p["wq"], p["bq"]), num_heads)
    k = _split_heads(linear(key, p["wk"], p["bk"]), num_heads)
    v = _split_heads(linear(value, p["wv"], p["bv"]), num_heads)
    head_mask = None if mask is None else np.expand_dims(np.asarray(mask, dtype=bool), 1)
    ctx, weights = scaled_dot_product_attention(q, k, v, head_mask, return_weights=True)
    out = linear(_merge_heads(ctx), p["wo"], p["bo"])
    return (out, weights) if return_weights else out


def feed_forward(p, x):
    return linear(tc.relu(linear(x, p["w1"], p["b1"])), p["w2"], p["b2"])


def gru_cell(p, x_t, h_prev):
    """h_t = (1 - z) * n + z * h_prev, gates ordered r, z, n in the packed weights."""
    hidden = h_prev.shape[-1]
    if p["w_h"].shape != (hidden, 3 * hidden) or p["w_x"].shape[0] != x_t.shape[-1]:
        raise ShapeError(f"gru_cell: x {x_t.shape}, h {h_prev.shape} vs w_x {p['w_x'].shape}, "
                         f"w_h {p['w_h'].shape}")
    gx = linear(x_t, p["w_x"], p["b_x"])
    gh = linear(h_prev, p["w_h"], p["b_h"])
    H = hidden
    r = tc.sigmoid(tc.add(gx[..., :H], gh[..., :H]))
    z = tc.sigmoid(tc.add(gx[..., H:2 * H], gh[..., H:2 * H]))
    n = tc.tanh(tc.add(gx[..., 2 * H:], tc.mul(r, gh[..., 2 * H:])))
    return tc.add(tc.mul(tc.sub(1.0, z), n), tc.mul(z, h_prev))
