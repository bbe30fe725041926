"""
Bidirectional-GRU encoder, GRU decoder with additive attention.

Encoder: ``num_layers`` stacked bidirectional GRUs over the embedded source.
PAD steps leave the running state untouched, so the forward pass ends on the
last real track and the backward pass starts from zeros at it. Per-position
states [fwd; bwd] are projected to hidden_dim to form the attention memory z.

Decoder: a ``num_layers`` GRU stack whose layer l starts from
tanh([fwd_final_l; bwd_final_l] W_bridge_l + b). At step t it reads the
ground-truth token t-1, scores every source position with
v^T tanh(W_s s_t + W_z z_i), and mixes the context with the top state through
tanh([s_t; c_t] W_c + b_c) before the output projection.
"""
from typing import List, NamedTuple, Optional

import numpy as np

import tensor_core as tc
from tensor_core import DegenerateInputError, Tensor

from .layers import gru_cell, linear


class Memory(NamedTuple):
    states: Tensor              # z, [B, S, H]
    source_mask: np.ndarray     # [B, S] bool
    initial: List[Tensor]       # decoder start state per layer, [B, H]
    keys: Tensor                # z @ W_z, [B, S, H]


def _run_direction(p, inputs, mask, hidden, reverse):
    batch = inputs[0].shape[0]
    h = Tensor(np.zeros((batch, hidden)))
    outputs = [None] * len(inputs)
    steps = range(len(inputs) - 1, -1, -1) if reverse else range(len(inputs))
    for t in steps:
        keep = Tensor(mask[:, t:t + 1].astype(np.float64))
        h_new = gru_cell(p, inputs[t], h)
        h = tc.add(tc.mul(keep, h_new), tc.mul(tc.sub(1.0, keep), h))
        outputs[t] = h
    return outputs, h


def encode(params, config, source, source_mask, training=False, rng=None, return_attention=False):
    source = np.asarray(source)
    source_mask = np.asarray(source_mask, dtype=bool)
    if not source_mask.any(axis=1).all():
        raise DegenerateInputError("source row without any track")
    H = config.hidden_dim
    x = tc.dropout(tc.embedding_lookup(params["src_embed"], source), config.dropout_rate, rng, training)
    inputs = [x[:, t] for t in range(source.shape[1])]
    initial = []
    for l in range(config.num_layers):
        fwd, f_last = _run_direction(params.scope(f"enc.{l}.fwd"), inputs, source_mask, H, reverse=False)
        bwd, b_last = _run_direction(params.scope(f"enc.{l}.bwd"), inputs, source_mask, H, reverse=True)
        inputs = [tc.concat([f, b], axis=-1) for f, b in zip(fwd, bwd)]
        bridge = params.scope(f"bridge.{l}")
        initial.append(tc.tanh(linear(tc.concat([f_last, b_last], axis=-1), bridge["w"], bridge["b"])))
    both = tc.dropout(tc.stack(inputs, axis=1), config.dropout_rate, rng, training)
    z = linear(both, params["enc.proj.w"], params["enc.proj.b"])
    return Memory(z, source_mask, initial, tc.matmul(z, params["attn.w_z"]))


def _attend(params, memory, s):
    """Context [B, H] and weights [B, S] for decoder state s [B, H]."""
    B, S, H = memory.states.shape
    query = tc.reshape(tc.matmul(s, params["attn.w_s"]), (B, 1, H))
    energy = tc.reshape(tc.matmul(tc.tanh(tc.add(memory.keys, query)), params["attn.v"]), (B, S))
    weights = tc.softmax(tc.masked_fill(energy, memory.source_mask), axis=-1)
    context = tc.reshape(tc.matmul(tc.reshape(weights, (B, 1, S)), memory.states), (B, H))
    return context, weights


def decode(params, config, memory, decoder_input, training=False, rng=None, return_attention=False):
    decoder_input = np.asarray(decoder_input)
    emb = tc.dropout(tc.embedding_lookup(params["tgt_embed"], decoder_input),
                     config.dropout_rate, rng, training)
    states = list(memory.initial)
    mixed, maps = [], []
    for t in range(decoder_input.shape[1]):
        inp = emb[:, t]
        for l in range(config.num_layers):
            states[l] = gru_cell(params.scope(f"dec.{l}"), inp, states[l])
            inp = states[l]
        context, weights = _attend(params, memory, inp)
        maps.append(weights)
        mixed.append(tc.tanh(linear(tc.concat([inp, context], axis=-1),
                                    params["combine.w"], params["combine.b"])))
    out = tc.dropout(tc.stack(mixed, axis=1), config.dropout_rate, rng, training)
    logits = linear(out, params["out.w"], params["out.b"])
    return (logits, maps) if return_attention else logits


def rnn_forward(params, config, source, source_mask, decoder_input, training=False, rng=None):
    return decode(params, config, encode(params, config, source, source_mask, training, rng),
                  decoder_input, training, rng)
