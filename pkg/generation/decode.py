"""
Greedy title generation from a checkpoint.

Decoding starts from BOS and appends the highest-probability token (lowest
index on ties) until EOS or ``max_length`` words. PAD and BOS can never be
emitted; UNK is masked only with suppress_unk. Reported log-probabilities
come from the unmasked distribution.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

import models
from corpus.encoding import DEFAULT_MAX_SOURCE_LEN, encode_tracks
from corpus.vocab import BOS, EOS, PAD, UNK
from tensor_core import DegenerateInputError


@dataclass
class GenerationRequest:
    tracks: List[str]
    max_length: int = 16

    def validate(self):
        if not self.tracks:
            raise DegenerateInputError("generation request without tracks")
        if self.max_length < 1:
            raise ValueError(f"max_length must be positive, got {self.max_length}")
        return self


@dataclass
class GeneratedTitle:
    tokens: List[str]
    token_logprobs: List[float] = field(default_factory=list)
    logprob: float = 0.0
    eos_logprob: Optional[float] = None

    def to_json(self):
        return {"tokens": self.tokens, "logprob": self.logprob}


@dataclass
class GenerationFailure:
    index: int
    error: str

    def to_json(self):
        return {"index": self.index, "error": self.error}


def _log_softmax(row):
    shifted = row - row.max()
    return shifted - np.log(np.exp(shifted).sum())


def greedy_decode(checkpoint, request, suppress_unk=False):
    request.validate()
    config, params = checkpoint.model_config, checkpoint.params
    max_source_len = checkpoint.metadata.get("max_source_len", DEFAULT_MAX_SOURCE_LEN)
    source = np.array([encode_tracks(request.tracks, checkpoint.track_vocab, max_source_len)])
    memory = models.encode(params, config, source, np.ones_like(source, dtype=bool))

    banned = [PAD, BOS] + ([UNK] if suppress_unk else [])
    prefix = [BOS]
    words, logprobs = [], []
    eos_logprob = None
    while len(words) < request.max_length:
        logits = models.decode(params, config, memory, np.array([prefix]))
        logp = _log_softmax(logits.data[0, -1])
        choice = logp.copy()
        choice[banned] = -np.inf
        token = int(np.argmax(choice))
        if token == EOS:
            eos_logprob = float(logp[EOS])
            break
        words.append(checkpoint.word_vocab.token(token))
        logprobs.append(float(logp[token]))
        prefix.append(token)

    total = float(np.sum(logprobs)) + (eos_logprob or 0.0)
    return GeneratedTitle(words, logprobs, total, eos_logprob)


def batch_generate(checkpoint, requests, suppress_unk=False):
    """greedy_decode over requests in order; a failing request yields a GenerationFailure."""
    if not requests:
        raise DegenerateInputError("no generation requests")
    results = []
    for i, req in enumerate(requests):
        try:
            results.append(greedy_decode(checkpoint, req, suppress_unk))
        except (ValueError, IndexError) as e:
            logging.warning(f"Request {i} failed: {e}")
            results.append(GenerationFailure(i, str(e)))
    return results
