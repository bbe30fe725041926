import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from corpus import make_order_free_corpus, write_jsonl


def generate_synthetic_corpus(n, n_topics, seed=0):
    return make_order_free_corpus(n_playlists=n, n_topics=n_topics, seed=seed)


if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    n_topics = int(sys.argv[2]) if len(sys.argv) > 2 else 20
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 0
    out = f"synthetic_{n}_{n_topics}_{seed}.jsonl"
    write_jsonl(out, generate_synthetic_corpus(n, n_topics, seed))
    print(f"Saved {out}")
