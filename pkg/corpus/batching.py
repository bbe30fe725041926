from dataclasses import dataclass
from typing import List

import numpy as np

from tensor_core.errors import DegenerateInputError

from .vocab import PAD


@dataclass
class Batch:
    source: np.ndarray         # [B, S] int64, PAD-padded
    target: np.ndarray         # [B, M] int64, BOS ... EOS then PAD
    source_mask: np.ndarray    # [B, S] bool, True on real tracks
    target_mask: np.ndarray    # [B, M] bool
    ids: List

    def __len__(self):
        return self.source.shape[0]

    @property
    def decoder_input(self):
        return self.target[:, :-1]

    @property
    def decoder_target(self):
        return self.target[:, 1:]

    def target_tokens(self):
        """Number of predicted (non-PAD, non-BOS) target positions."""
        return int((self.decoder_target != PAD).sum())


def _pad(rows):
    width = max(len(r) for r in rows)
    out = np.full((len(rows), width), PAD, dtype=np.int64)
    mask = np.zeros((len(rows), width), dtype=bool)
    for i, r in enumerate(rows):
        out[i, :len(r)] = r
        mask[i, :len(r)] = True
    return out, mask


def pad_batch(examples):
    source, source_mask = _pad([e.source for e in examples])
    target, target_mask = _pad([e.target for e in examples])
    return Batch(source, target, source_mask, target_mask, [e.id for e in examples])


def make_batches(examples, batch_size=64, epoch_seed=None):
    """Padded batches of at most batch_size; shuffled when epoch_seed is given."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if not examples:
        raise DegenerateInputError("no examples to batch")
    order = np.arange(len(examples))
    if epoch_seed is not None:
        order = np.random.default_rng(epoch_seed).permutation(len(examples))
    return [pad_batch([examples[i] for i in order[start:start + batch_size]])
            for start in range(0, len(examples), batch_size)]
