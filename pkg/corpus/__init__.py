from .records import Playlist, TokenizedPlaylist, read_jsonl, write_jsonl
from .text import normalize_and_tokenize, tokenize_playlist
from .filtering import (CRITERIA, CorpusStats, FilterCriteria, FilterReport, FilterResult,
                        compute_stats, filter_corpus, passes_filter)
from .split import SplitCorpus, stratified_split
from .vocab import BOS, EOS, PAD, UNK, Vocab, build_vocabs
from .encoding import (DEFAULT_MAX_SOURCE_LEN, EncodedExample, augment_copies, encode_all,
                       encode_pair, encode_tracks, shuffle_tracks)
from .batching import Batch, make_batches, pad_batch
from .adapter import AdapterConfig, load_adapter, merge_sources, read_raw
from .synthetic import make_order_free_corpus
