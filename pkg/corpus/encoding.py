from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from tensor_core.errors import DegenerateInputError

from .vocab import BOS, EOS

DEFAULT_MAX_SOURCE_LEN = 256


@dataclass(frozen=True)
class EncodedExample:
    source: List[int]
    target: List[int]
    id: Optional[str] = None


def encode_tracks(tracks, track_vocab, max_source_len=DEFAULT_MAX_SOURCE_LEN):
    if not tracks:
        raise DegenerateInputError("a playlist needs at least one track")
    return track_vocab.encode(tracks[:max_source_len])


def encode_pair(p, vocabs, max_source_len=DEFAULT_MAX_SOURCE_LEN):
    """Source keeps the first max_source_len tracks; the target is never truncated."""
    track_vocab, word_vocab = vocabs
    return EncodedExample(source=encode_tracks(p.tracks, track_vocab, max_source_len),
                          target=[BOS] + word_vocab.encode(p.title_tokens) + [EOS],
                          id=p.id)


def encode_all(playlists, vocabs, max_source_len=DEFAULT_MAX_SOURCE_LEN):
    return [encode_pair(p, vocabs, max_source_len) for p in playlists]


def shuffle_tracks(e, seed):
    """Seeded uniform permutation of the source; the target is untouched."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    order = rng.permutation(len(e.source))
    return replace(e, source=[e.source[i] for i in order])


def augment_copies(examples, copies, seed):
    """Originals followed by ``copies`` shuffled views of each example."""
    rng = np.random.default_rng(seed)
    out = list(examples)
    for _ in range(copies):
        out.extend(shuffle_tracks(e, rng) for e in examples)
    return out
