import json
from collections import Counter

from tensor_core.errors import DegenerateInputError

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ("<pad>", "<bos>", "<eos>", "<unk>")


class Vocab:
    """Token <-> index map; indices 0..3 are PAD, BOS, EOS, UNK."""

    def __init__(self, tokens=()):
        self.itos = list(SPECIALS)
        self.stoi = {t: i for i, t in enumerate(self.itos)}
        for t in tokens:
            if t in self.stoi:
                raise ValueError(f"duplicate vocabulary entry {t!r}")
            self.stoi[t] = len(self.itos)
            self.itos.append(t)

    def __len__(self):
        return len(self.itos)

    def __contains__(self, token):
        return token in self.stoi

    def __eq__(self, other):
        return isinstance(other, Vocab) and self.itos == other.itos

    def index(self, token):
        """Index of a data token; reserved spellings such as "<pad>" read as UNK."""
        idx = self.stoi.get(token, UNK)
        return UNK if idx < len(SPECIALS) else idx

    def encode(self, tokens):
        return [self.index(t) for t in tokens]

    def token(self, idx):
        return self.itos[idx]

    def decode(self, indices):
        return [self.itos[i] for i in indices]

    def to_list(self):
        return list(self.itos)

    @classmethod
    def from_list(cls, itos):
        if tuple(itos[:len(SPECIALS)]) != SPECIALS:
            raise ValueError("vocabulary does not start with the reserved tokens")
        return cls(itos[len(SPECIALS):])

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.itos, f, ensure_ascii=False, indent=0)
            f.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as f:
            return cls.from_list(json.load(f))


def build_vocab(counts, min_count=1):
    # descending frequency, ties lexicographic
    ranked = sorted((t for t, c in counts.items() if c >= min_count and t not in SPECIALS),
                    key=lambda t: (-counts[t], t))
    return Vocab(ranked)


def build_vocabs(train, min_count_track=1, min_count_word=1):
    """(track vocab, word vocab) from the train split only."""
    if not train:
        raise DegenerateInputError("cannot build vocabularies from an empty train split")
    tracks = Counter(t for p in train for t in p.tracks)
    words = Counter(w for p in train for w in p.title_tokens)
    return build_vocab(tracks, min_count_track), build_vocab(words, min_count_word)
