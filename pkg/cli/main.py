"""
Command-line entry: prepare | train | eval | generate.

Exit codes: 0 success, 2 config or input error, 3 empty result,
4 numerical failure. The resolved configuration of every command is echoed
to stderr as one JSON line.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import asdict

import numpy as np

from corpus import (FilterCriteria, build_vocabs, compute_stats, encode_all, filter_corpus,
                    load_adapter, merge_sources, read_jsonl, read_raw, stratified_split,
                    tokenize_playlist, write_jsonl)
from corpus.vocab import Vocab
from generation import GenerationFailure, GenerationRequest, batch_generate, greedy_decode
from models import ARCHITECTURES, ConfigError
from tensor_core import DegenerateInputError
from training import (CheckpointError, EncodedSplits, NonFiniteLossError, evaluate,
                      evaluate_parallel, fit, load_checkpoint, save_checkpoint)

from .config import RunConfig, load_run_config

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_NUMERIC = 0, 2, 3, 4
SPLIT_FILES = {"train": "train.jsonl", "validation": "val.jsonl", "test": "test.jsonl"}
VOCAB_FILES = ("vocab_tracks.json", "vocab_words.json")


def setup_logging(tag, level=logging.INFO):
    logging.basicConfig(level=level, format=f"%(asctime)s | {tag} | %(message)s", force=True)


def echo(resolved, out_dir=None):
    line = json.dumps(resolved, ensure_ascii=False, sort_keys=True)
    print(line, file=sys.stderr)
    if out_dir:
        with open(os.path.join(out_dir, "resolved_config.json"), "w", encoding="utf-8") as f:
            f.write(json.dumps(resolved, ensure_ascii=False, indent=2, sort_keys=True) + "\n")


def _dump(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def cmd_prepare(raw_paths, out_dir, adapter_path=None, seed=None, run=None):
    run = run or RunConfig()
    opts = run.corpus
    if seed is not None:
        opts.split_seed = seed
    try:
        adapter = load_adapter(adapter_path) if adapter_path else None
        sources = [read_raw(p, adapter) for p in raw_paths]
    except (OSError, ValueError, KeyError, TypeError) as e:
        logging.error(f"Cannot read input: {e}")
        return EXIT_INPUT

    merged, duplicates = merge_sources(sources)
    tokenized = [tokenize_playlist(p) for p in merged]
    criteria = FilterCriteria(opts.min_title_tokens, opts.min_tracks, opts.min_avg_token_chars)
    kept, report = filter_corpus(tokenized, criteria)
    report.duplicate_ids = duplicates
    logging.info(f"Filter kept {report.kept_count} of {report.input_count} playlists; rejected {report.rejected}")
    if not kept:
        logging.error("No playlist passed the filter")
        return EXIT_EMPTY

    split = stratified_split(kept, tuple(opts.split_ratios), opts.split_seed)
    track_vocab, word_vocab = build_vocabs(split.train, opts.min_count_track, opts.min_count_word)

    os.makedirs(out_dir, exist_ok=True)
    echo({"command": "prepare", "inputs": list(raw_paths), "adapter": adapter_path,
          "out": out_dir, "corpus": asdict(opts)}, out_dir)
    parts = {"train": split.train, "validation": split.validation, "test": split.test}
    for name, records in parts.items():
        write_jsonl(os.path.join(out_dir, SPLIT_FILES[name]), records)
    track_vocab.save(os.path.join(out_dir, VOCAB_FILES[0]))
    word_vocab.save(os.path.join(out_dir, VOCAB_FILES[1]))
    summary = report.to_dict()
    summary["split_seed"] = opts.split_seed
    summary["splits"] = {name: asdict(compute_stats(records)) for name, records in parts.items()}
    summary["vocab_sizes"] = {"tracks": len(track_vocab), "words": len(word_vocab)}
    _dump(os.path.join(out_dir, "report.json"), summary)
    logging.info(f"Split sizes train/val/test = {split.sizes()}; wrote {out_dir}")
    return EXIT_OK


def load_splits(data_dir, vocabs, max_source_len):
    missing = [f for f in list(SPLIT_FILES.values()) + list(VOCAB_FILES)
               if not os.path.exists(os.path.join(data_dir, f))]
    if missing:
        raise FileNotFoundError(f"{data_dir} lacks {', '.join(missing)}")
    out = {}
    for name, fname in SPLIT_FILES.items():
        records = [tokenize_playlist(p) for p in read_jsonl(os.path.join(data_dir, fname))]
        out[name] = encode_all(records, vocabs, max_source_len)
    return EncodedSplits(**out)


def cmd_train(run):
    data_dir, out_dir = run.paths.data_dir, run.paths.out_dir
    try:
        vocabs = tuple(Vocab.load(os.path.join(data_dir, f)) for f in VOCAB_FILES)
        splits = load_splits(data_dir, vocabs, run.corpus.max_source_len)
        run.model.source_vocab_size = len(vocabs[0])
        run.model.target_vocab_size = len(vocabs[1])
        run.model.validate()
        run.train.validate()
    except (OSError, ValueError) as e:
        logging.error(f"Cannot start training: {e}")
        return EXIT_INPUT

    os.makedirs(out_dir, exist_ok=True)
    echo(dict(command="train", **run.to_dict()), out_dir)
    try:
        ckpt, log = fit(run.model, splits, run.train, vocabs,
                        log_path=os.path.join(out_dir, "trainlog.jsonl"),
                        max_source_len=run.corpus.max_source_len)
    except NonFiniteLossError as e:
        logging.error(str(e))
        return EXIT_NUMERIC
    except DegenerateInputError as e:
        logging.error(str(e))
        return EXIT_INPUT
    save_checkpoint(ckpt, os.path.join(out_dir, "checkpoint.ssq"))
    print(json.dumps({"best_val_nll": ckpt.metadata["best_val_nll"], "epoch": ckpt.metadata["epoch"],
                      "epochs_run": len(log), "test_nll": ckpt.metadata["test_nll"]}))
    return EXIT_OK


def cmd_eval(checkpoint_path, split_path, workers=1, batch_size=64):
    echo({"command": "eval", "checkpoint": checkpoint_path, "split": split_path,
          "workers": workers, "batch_size": batch_size})
    try:
        ckpt = load_checkpoint(checkpoint_path)
        records = [tokenize_playlist(p) for p in read_jsonl(split_path)]
        examples = encode_all(records, ckpt.vocabs, ckpt.metadata.get("max_source_len", 256))
    except (OSError, ValueError, CheckpointError) as e:
        logging.error(f"Cannot evaluate: {e}")
        return EXIT_INPUT
    if not examples:
        logging.error("Split has no playlists")
        return EXIT_EMPTY
    if workers > 1:
        result = evaluate_parallel(ckpt.model_config, ckpt.params, examples, workers, batch_size)
    else:
        result = evaluate(ckpt.model_config, ckpt.params, examples, batch_size)
    if not np.isfinite(result.nll):
        logging.error(f"Non-finite NLL {result.nll}")
        return EXIT_NUMERIC
    print(json.dumps({"nll": result.nll, "tokens": result.tokens, "examples": result.examples}))
    return EXIT_OK


def _read_requests(path, max_length):
    requests = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            obj = json.loads(line)
            tracks = obj.get("tracks") if isinstance(obj, dict) else obj
            if not isinstance(tracks, list):
                raise ValueError(f"{path}:{lineno}: expected a track list")
            requests.append(GenerationRequest([str(t) for t in tracks], max_length))
    return requests


def cmd_generate(checkpoint_path, input_path, max_length=16, suppress_unk=False, shuffle_check=False,
                 seed=0, output=None):
    echo({"command": "generate", "checkpoint": checkpoint_path, "input": input_path,
          "max_length": max_length, "suppress_unk": suppress_unk, "shuffle_check": shuffle_check,
          "seed": seed, "output": output})
    try:
        ckpt = load_checkpoint(checkpoint_path)
        requests = _read_requests(input_path, max_length)
    except (OSError, ValueError, CheckpointError) as e:
        logging.error(f"Cannot generate: {e}")
        return EXIT_INPUT

    lines = []
    if requests:
        rng = np.random.default_rng(seed)
        for req, title in zip(requests, batch_generate(ckpt, requests, suppress_unk)):
            obj = title.to_json()
            if shuffle_check and not isinstance(title, GenerationFailure):
                permuted = GenerationRequest([req.tracks[i] for i in rng.permutation(len(req.tracks))],
                                             req.max_length)
                obj["shuffle_match"] = greedy_decode(ckpt, permuted, suppress_unk).tokens == title.tokens
            lines.append(json.dumps(obj, ensure_ascii=False))

    out = open(output, "w", encoding="utf-8") if output else sys.stdout
    try:
        for line in lines:
            out.write(line + "\n")
    finally:
        if output:
            out.close()
    logging.info(f"Generated {len(lines)} titles")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="titlegen", description="Playlist title generation")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="filter, split and index a raw playlist corpus")
    p.add_argument("raw", nargs="+", help="canonical JSONL, or raw dumps with --adapter")
    p.add_argument("--adapter", help="JSON field-mapping file for raw dumps")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--config")

    t = sub.add_parser("train", help="train a model on a prepared corpus")
    t.add_argument("--config")
    t.add_argument("--data")
    t.add_argument("--out")
    t.add_argument("--arch", choices=ARCHITECTURES)
    t.add_argument("--no-encoder-pos", action="store_true")
    t.add_argument("--shuffle-augment", action="store_true")
    t.add_argument("--augment-copies", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--max-epochs", type=int)
    t.add_argument("--patience", type=int)
    t.add_argument("--progress", action="store_true")

    e = sub.add_parser("eval", help="NLL of a checkpoint on a split")
    e.add_argument("checkpoint")
    e.add_argument("split")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--batch-size", type=int, default=64)

    g = sub.add_parser("generate", help="greedy titles for JSONL track lists")
    g.add_argument("checkpoint")
    g.add_argument("input")
    g.add_argument("--max-length", type=int, default=16)
    g.add_argument("--suppress-unk", action="store_true")
    g.add_argument("--shuffle-check", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output")
    return parser


def resolve_train_config(args):
    run = load_run_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        run.set_seed(args.seed)
    if args.arch:
        run.model.architecture = args.arch
    if args.no_encoder_pos:
        run.model.encoder_positional_encoding = False
    if args.shuffle_augment:
        run.train.shuffle_augment = True
    if args.augment_copies is not None:
        run.train.augment_copies = args.augment_copies
    if args.max_epochs is not None:
        run.train.max_epochs = args.max_epochs
    if args.patience is not None:
        run.train.patience = args.patience
    elif run.train.patience > run.train.max_epochs:
        run.train.patience = run.train.max_epochs
    if args.progress:
        run.train.progress = True
    if args.data:
        run.paths.data_dir = args.data
    if args.out:
        run.paths.out_dir = args.out
    return run


TAGS = {"prepare": "PREP", "train": "TRAIN", "eval": "EVAL", "generate": "GEN"}


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_logging(TAGS[args.command], level)
    try:
        if args.command == "prepare":
            run = load_run_config(args.config) if args.config else None
            return cmd_prepare(args.raw, args.out, args.adapter, args.seed, run)
        if args.command == "train":
            return cmd_train(resolve_train_config(args))
        if args.command == "eval":
            return cmd_eval(args.checkpoint, args.split, args.workers, args.batch_size)
        return cmd_generate(args.checkpoint, args.input, args.max_length, args.suppress_unk,
                            args.shuffle_check, args.seed, args.output)
    except ConfigError as e:
        logging.error(f"Config error: {e}")
        return EXIT_INPUT
