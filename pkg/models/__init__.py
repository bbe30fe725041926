import numpy as np

from . import rnn, transformer
from .config import ARCHITECTURES, ConfigError, ModelConfig
from .layers import (gru_cell, multi_head_attention, scaled_dot_product_attention,
                     sinusoidal_positional_encoding)
from .params import ModelParams, count_params, init_params, param_layout
from .rnn import rnn_forward
from .transformer import transformer_forward

_FAMILIES = {"rnn": rnn, "transformer": transformer}


def _family(config):
    try:
        return _FAMILIES[config.architecture]
    except KeyError:
        raise ConfigError(f"unknown architecture {config.architecture!r}") from None


def _rng(config, training, rng):
    if training and config.dropout_rate > 0 and rng is None:
        return np.random.default_rng(0)
    return rng


def encode(params, config, source, source_mask, training=False, rng=None, return_attention=False):
    return _family(config).encode(params, config, source, source_mask, training,
                                  _rng(config, training, rng), return_attention)


def decode(params, config, memory, decoder_input, training=False, rng=None, return_attention=False):
    return _family(config).decode(params, config, memory, decoder_input, training,
                                  _rng(config, training, rng), return_attention)


def forward(params, config, source, source_mask, decoder_input, training=False, rng=None):
    """Teacher-forced logits [B, T, |V_tgt|]; position t sees decoder_input[:, :t+1]."""
    rng = _rng(config, training, rng)
    memory = encode(params, config, source, source_mask, training, rng)
    return decode(params, config, memory, decoder_input, training, rng)


def forward_batch(params, config, batch, training=False, rng=None):
    return forward(params, config, batch.source, batch.source_mask, batch.decoder_input, training, rng)
