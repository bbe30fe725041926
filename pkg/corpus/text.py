"""Title normalization: ASCII lowercase, whitespace tokenization, nothing else."""
import re
import string

from .records import TokenizedPlaylist

_ASCII_LOWER = str.maketrans(string.ascii_uppercase, string.ascii_lowercase)
# Unicode White_Space; str.split() would also cut on the \x1c-\x1f separators
_WHITESPACE = re.compile("[\t\n\x0b\x0c\r \x85\xa0\u1680\u2000-\u200a\u2028\u2029\u202f\u205f\u3000]+")


def normalize_and_tokenize(title):
    return [tok.translate(_ASCII_LOWER) for tok in _WHITESPACE.split(title or "") if tok]


def tokenize_playlist(p):
    return TokenizedPlaylist(id=p.id, title_tokens=normalize_and_tokenize(p.title),
                             tracks=list(p.tracks))
