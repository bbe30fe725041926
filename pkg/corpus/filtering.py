"""
Phrase-level playlist filter and the corpus statistics reported around it.

A playlist is kept iff, checked in this order,
  1. title_tokens     number of title tokens          > min_title_tokens (3)
  2. track_count      number of tracks                > min_tracks (10)
  3. avg_token_chars  mean characters per title token > min_avg_token_chars (3)
All comparisons are strict. A playlist failing several criteria is reported
under the first one only. Characters are Unicode code points.
"""
from dataclasses import asdict, dataclass, field
from typing import Dict, List, NamedTuple, Optional

import pandas as pd

CRITERIA = ("title_tokens", "track_count", "avg_token_chars")
MAX_EXAMPLES = 5


@dataclass
class FilterCriteria:
    min_title_tokens: int = 3
    min_tracks: int = 10
    min_avg_token_chars: float = 3.0


class FilterResult(NamedTuple):
    passed: bool
    criterion: Optional[str]


def avg_token_chars(tokens):
    return sum(len(t) for t in tokens) / len(tokens) if tokens else 0.0


def passes_filter(p, criteria=None):
    c = criteria or FilterCriteria()
    if not len(p.title_tokens) > c.min_title_tokens:
        return FilterResult(False, "title_tokens")
    if not len(p.tracks) > c.min_tracks:
        return FilterResult(False, "track_count")
    if not avg_token_chars(p.title_tokens) > c.min_avg_token_chars:
        return FilterResult(False, "avg_token_chars")
    return FilterResult(True, None)


@dataclass
class CorpusStats:
    playlist_count: int = 0
    unique_tracks: int = 0
    unique_titles: int = 0
    unique_words: int = 0
    avg_char_length: float = 0.0
    avg_title_length: float = 0.0
    avg_track_length: float = 0.0


def _frame(playlists):
    return pd.DataFrame({
        "title": [p.title for p in playlists],
        "tokens": [list(p.title_tokens) for p in playlists],
        "tracks": [list(p.tracks) for p in playlists],
        "n_tokens": [len(p.title_tokens) for p in playlists],
        "n_tracks": [len(p.tracks) for p in playlists],
        "avg_chars": [avg_token_chars(p.title_tokens) for p in playlists],
    })


def compute_stats(playlists):
    """The seven corpus statistics. Average char length is taken over non-empty titles."""
    if not playlists:
        return CorpusStats()
    df = _frame(playlists)
    titled = df.loc[df["n_tokens"] > 0, "avg_chars"]
    return CorpusStats(
        playlist_count=int(len(df)),
        unique_tracks=int(df["tracks"].explode().dropna().nunique()),
        unique_titles=int(df.loc[df["n_tokens"] > 0, "title"].nunique()),
        unique_words=int(df["tokens"].explode().dropna().nunique()),
        avg_char_length=float(titled.mean()) if len(titled) else 0.0,
        avg_title_length=float(df["n_tokens"].mean()),
        avg_track_length=float(df["n_tracks"].mean()),
    )


def title_length_histogram(playlists):
    """Number of playlists per title token count (0 = missing title, 1 = tag-level)."""
    if not playlists:
        return {}
    counts = pd.Series([len(p.title_tokens) for p in playlists]).value_counts().sort_index()
    return {int(k): int(v) for k, v in counts.items()}


@dataclass
class FilterReport:
    input_count: int = 0
    kept_count: int = 0
    rejected: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in CRITERIA})
    examples: Dict[str, List[str]] = field(default_factory=lambda: {c: [] for c in CRITERIA})
    before: CorpusStats = field(default_factory=CorpusStats)
    after: CorpusStats = field(default_factory=CorpusStats)
    title_lengths_before: Dict[int, int] = field(default_factory=dict)
    title_lengths_after: Dict[int, int] = field(default_factory=dict)
    duplicate_ids: int = 0

    def to_dict(self):
        out = asdict(self)
        out["title_lengths_before"] = {str(k): v for k, v in self.title_lengths_before.items()}
        out["title_lengths_after"] = {str(k): v for k, v in self.title_lengths_after.items()}
        return out


def filter_corpus(playlists, criteria=None):
    """Keep passing playlists in input order; returns (kept, FilterReport)."""
    report = FilterReport(input_count=len(playlists))
    kept = []
    for p in playlists:
        result = passes_filter(p, criteria)
        if result.passed:
            kept.append(p)
            continue
        report.rejected[result.criterion] += 1
        if len(report.examples[result.criterion]) < MAX_EXAMPLES:
            report.examples[result.criterion].append(p.title)
    report.kept_count = len(kept)
    report.before = compute_stats(playlists)
    report.after = compute_stats(kept)
    report.title_lengths_before = title_length_histogram(playlists)
    report.title_lengths_after = title_length_histogram(kept)
    return kept, report
