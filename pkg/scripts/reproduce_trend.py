"""Train the four model variants on the synthetic order-free corpus and print mean NLLs."""
import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from dataclasses import replace

from training.experiments import (DESK_MODEL, DESK_TRAIN, VARIANTS, compare_variants, results_markdown,
                                  trend_checks)

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format='%(asctime)s | TREND | %(message)s')
    parser = argparse.ArgumentParser()
    parser.add_argument('--playlists', type=int, default=2000)
    parser.add_argument('--seeds', type=int, nargs='+', default=[0, 1, 2])
    parser.add_argument('--variants', nargs='+', choices=list(VARIANTS), default=list(VARIANTS))
    parser.add_argument('--max-epochs', type=int, default=DESK_TRAIN.max_epochs)
    parser.add_argument('--outfile', type=str, help='CSV of the individual runs')
    parser.add_argument('--markdown', type=str, help='write the summary table here, e.g. docs/TREND_RESULTS.md')
    args = parser.parse_args()

    train = replace(DESK_TRAIN, max_epochs=args.max_epochs,
                    patience=min(DESK_TRAIN.patience, args.max_epochs))
    runs, summary = compare_variants(tuple(args.seeds), args.playlists, tuple(args.variants),
                                     DESK_MODEL, train)
    if args.outfile:
        runs.to_csv(args.outfile, index=False)
    print(summary.to_string(float_format=lambda v: f"{v:.4f}"))
    if set(VARIANTS) <= set(args.variants):
        for check, ok in trend_checks(summary).items():
            logging.info(f"{check}: {'pass' if ok else 'FAIL'}")
        if args.markdown:
            with open(args.markdown, "w", encoding="utf-8") as f:
                f.write("# Model-family comparison\n\n")
                f.write(results_markdown(runs, summary))
