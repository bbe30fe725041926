import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np
from tqdm import auto as tqdm_lib

from corpus.batching import make_batches
from corpus.encoding import DEFAULT_MAX_SOURCE_LEN, augment_copies, shuffle_tracks
from corpus.vocab import PAD
from models import forward_batch, init_params
from tensor_core import DegenerateInputError, Tape, backward, cross_entropy_nll
from tensor_core.optim import adam_step, clip_global_norm, init_adam

from .checkpoint import Checkpoint
from .errors import NonFiniteLossError
from .trainlog import EpochRecord, TrainLog, TrainLogWriter


@dataclass
class EncodedSplits:
    train: List = field(default_factory=list)
    validation: List = field(default_factory=list)
    test: List = field(default_factory=list)


class EvalResult(NamedTuple):
    nll: float
    tokens: int
    examples: int


def nll_totals(model_config, params, examples, batch_size=64):
    """(summed NLL, predicted token count) over examples, teacher-forced, in input order."""
    total, tokens = 0.0, 0
    for batch in make_batches(examples, batch_size):
        logits = forward_batch(params, model_config, batch)
        total += cross_entropy_nll(logits, batch.decoder_target, PAD, reduction="sum").item()
        tokens += batch.target_tokens()
    return total, tokens


def evaluate(model_config, params, examples, batch_size=64):
    if not examples:
        raise DegenerateInputError("nothing to evaluate")
    total, tokens = nll_totals(model_config, params, examples, batch_size)
    return EvalResult(total / tokens, tokens, len(examples))


def evaluate_nll(model_config, params, examples, batch_size=64):
    """Mean NLL per target token (words and EOS; BOS and PAD excluded)."""
    return evaluate(model_config, params, examples, batch_size).nll


def train_epoch(model_config, params, state, examples, train_config, epoch):
    """One pass over shuffled batches, one Adam step per batch.

    Returns (params, state, token-weighted mean train NLL). With shuffle_augment
    every source is re-permuted for this epoch before batching.
    """
    if not examples:
        raise DegenerateInputError("empty training set")
    epoch_seed = train_config.seed + epoch
    if train_config.shuffle_augment:
        rng = np.random.default_rng([epoch_seed, 1])
        examples = [shuffle_tracks(e, rng) for e in examples]
    batches = make_batches(examples, train_config.batch_size, epoch_seed)
    dropout_rng = np.random.default_rng([epoch_seed, 2])

    tensors = params.set_requires_grad(True).tensors()
    total, tokens = 0.0, 0
    progress = tqdm_lib.tqdm(batches, desc=f"epoch {epoch}", leave=False) if train_config.progress else batches
    for i, batch in enumerate(progress):
        params.zero_grad()
        with Tape() as tape:
            logits = forward_batch(params, model_config, batch, training=True, rng=dropout_rng)
            loss = cross_entropy_nll(logits, batch.decoder_target, PAD)
        value = loss.item()
        if not math.isfinite(value):
            logging.error(f"Non-finite loss at epoch {epoch}, batch {i}")
            raise NonFiniteLossError(epoch, i, value, batch.ids)
        backward(loss, tape)
        grads, _ = clip_global_norm([t.grad for t in tensors], train_config.clip_norm)
        adam_step(tensors, grads, state)
        n = batch.target_tokens()
        total += value * n
        tokens += n
    params.zero_grad()
    return params, state, total / tokens


class EarlyStopping:
    """Tracks the best validation value; stops after ``patience`` epochs without improvement."""

    def __init__(self, patience):
        self.patience = patience
        self.best = math.inf
        self.best_epoch = None
        self.bad_epochs = 0

    def update(self, epoch, value):
        if math.isfinite(value) and value < self.best:
            self.best, self.best_epoch, self.bad_epochs = value, epoch, 0
            return True
        self.bad_epochs += 1
        return False

    @property
    def should_stop(self):
        return self.bad_epochs >= self.patience


def fit(model_config, splits, train_config, vocabs, log_path=None, max_source_len=DEFAULT_MAX_SOURCE_LEN):
    """Train with early stopping on validation NLL; the checkpoint holds the best epoch's params."""
    if not (splits.train and splits.validation and splits.test):
        raise DegenerateInputError("train, validation and test splits must all be non-empty")
    model_config.validate()
    train_config.validate()
    track_vocab, word_vocab = vocabs

    params = init_params(model_config, train_config.init_seed)
    state = init_adam(params.tensors(), train_config.base_lr, train_config.lr_decay,
                      weight_decay=train_config.weight_decay)
    train = splits.train
    if train_config.augment_copies:
        train = augment_copies(train, train_config.augment_copies, train_config.seed)

    stopper = EarlyStopping(train_config.patience)
    best = params.copy()
    log = TrainLog()
    with TrainLogWriter(log_path) as writer:
        for epoch in range(1, train_config.max_epochs + 1):
            started = time.perf_counter()
            lr = state.effective_lr
            params, state, train_nll = train_epoch(model_config, params, state, train, train_config, epoch)
            val_nll = evaluate_nll(model_config, params, splits.validation, train_config.eval_batch_size)
            record = EpochRecord(epoch, train_nll, val_nll, lr, time.perf_counter() - started)
            log.append(record)
            writer.log(record)
            logging.info(f"Epoch {epoch}: train NLL {train_nll:.4f} | val NLL {val_nll:.4f} | lr {lr:.6f}")
            if stopper.update(epoch, val_nll):
                best = params.copy()
            if stopper.should_stop:
                logging.info(f"Early stop after epoch {epoch}; best epoch {stopper.best_epoch}")
                break

    test_nll = evaluate_nll(model_config, best, splits.test, train_config.eval_batch_size)
    metadata = {
        "epoch": stopper.best_epoch,
        "epochs_run": len(log),
        "best_val_nll": stopper.best,
        "test_nll": test_nll,
        "init_seed": train_config.init_seed,
        "epoch_seed_base": train_config.seed,
        "max_source_len": max_source_len,
        "train_config": train_config.to_dict(),
    }
    return Checkpoint(model_config, best, track_vocab, word_vocab, metadata), log
