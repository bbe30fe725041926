"""
Post-norm Transformer encoder-decoder.

Encoder layer: self-attention -> add & norm -> feed-forward -> add & norm.
Decoder layer: causal self-attention -> add & norm -> cross-attention over the
encoder states -> add & norm -> feed-forward -> add & norm.

Embeddings are scaled by sqrt(d). The target side always gets sinusoidal
positions; the source side only when ``encoder_positional_encoding`` is set.
Without them every encoder layer is permutation-equivariant and the
cross-attention sum makes decoder outputs invariant to the source order.
"""
from typing import NamedTuple, Optional

import numpy as np

import tensor_core as tc
from tensor_core import DegenerateInputError, Tensor

from .config import ConfigError
from .layers import feed_forward, linear, multi_head_attention, sinusoidal_positional_encoding

_PE_CACHE = {}


def _positions(n, d, max_positions):
    if n > max_positions:
        raise ConfigError(f"sequence of length {n} exceeds max_positions {max_positions}")
    key = (max_positions, d)
    if key not in _PE_CACHE:
        _PE_CACHE[key] = sinusoidal_positional_encoding(max_positions, d).data
    return Tensor(_PE_CACHE[key][:n])


class Memory(NamedTuple):
    states: Tensor            # [B, S, d]
    source_mask: np.ndarray   # [B, S] bool
    attention: Optional[list] = None


def _embed(table, ids, config, with_positions, training, rng):
    d = config.embed_dim
    x = tc.scale(tc.embedding_lookup(table, ids), np.sqrt(d))
    if with_positions:
        x = tc.add(x, _positions(ids.shape[1], d, config.max_positions))
    return tc.dropout(x, config.dropout_rate, rng, training)


def _sublayer(x, y, ln, config, training, rng):
    y = tc.dropout(y, config.dropout_rate, rng, training)
    return tc.layer_norm(tc.add(x, y), ln["gamma"], ln["beta"])


def encode(params, config, source, source_mask, training=False, rng=None, return_attention=False):
    source_mask = np.asarray(source_mask, dtype=bool)
    if not source_mask.any(axis=1).all():
        raise DegenerateInputError("source row without any track")
    x = _embed(params["src_embed"], np.asarray(source), config,
               config.encoder_positional_encoding, training, rng)
    keys = source_mask[:, None, :]
    maps = []
    for l in range(config.num_layers):
        a, w = multi_head_attention(params.scope(f"enc.{l}.self_attn"), x, x, x, keys,
                                    config.num_heads, return_weights=True)
        maps.append(w)
        x = _sublayer(x, a, params.scope(f"enc.{l}.ln1"), config, training, rng)
        x = _sublayer(x, feed_forward(params.scope(f"enc.{l}.ffn"), x),
                      params.scope(f"enc.{l}.ln2"), config, training, rng)
    return Memory(x, source_mask, maps if return_attention else None)


def decode(params, config, memory, decoder_input, training=False, rng=None, return_attention=False):
    """Logits [B, T, |V_tgt|] for every prefix position of decoder_input."""
    decoder_input = np.asarray(decoder_input)
    T = decoder_input.shape[1]
    y = _embed(params["tgt_embed"], decoder_input, config, True, training, rng)
    causal = np.tril(np.ones((T, T), dtype=bool))[None, :, :]
    cross = np.broadcast_to(memory.source_mask[:, None, :],
                            (memory.source_mask.shape[0], T, memory.source_mask.shape[1]))
    maps = []
    for l in range(config.num_layers):
        a = multi_head_attention(params.scope(f"dec.{l}.self_attn"), y, y, y, causal, config.num_heads)
        y = _sublayer(y, a, params.scope(f"dec.{l}.ln1"), config, training, rng)
        c, w = multi_head_attention(params.scope(f"dec.{l}.cross_attn"), y, memory.states, memory.states,
                                    cross, config.num_heads, return_weights=True)
        maps.append(w)
        y = _sublayer(y, c, params.scope(f"dec.{l}.ln2"), config, training, rng)
        y = _sublayer(y, feed_forward(params.scope(f"dec.{l}.ffn"), y),
                      params.scope(f"dec.{l}.ln3"), config, training, rng)
    logits = linear(y, params["out.w"], params["out.b"])
    return (logits, maps) if return_attention else logits


def transformer_forward(params, config, source, source_mask, decoder_input, training=False, rng=None):
    return decode(params, config, encode(params, config, source, source_mask, training, rng),
                  decoder_input, training, rng)
