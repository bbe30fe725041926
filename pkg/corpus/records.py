import json
from dataclasses import dataclass, field
from typing import List


@dataclass
class Playlist:
    id: str
    title: str
    tracks: List[str] = field(default_factory=list)


@dataclass
class TokenizedPlaylist:
    id: str
    title_tokens: List[str]
    tracks: List[str]

    @property
    def title(self):
        return " ".join(self.title_tokens)


def playlist_from_dict(obj):
    return Playlist(id=str(obj["id"]), title=obj.get("title") or "",
                    tracks=[str(t) for t in obj.get("tracks") or []])


def read_jsonl(path):
    playlists = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                playlists.append(playlist_from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise ValueError(f"{path}:{lineno}: not a playlist record ({e})") from None
    return playlists


def write_jsonl(path, records):
    """Canonical JSONL; TokenizedPlaylist titles are written as space-joined tokens."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            obj = {"id": r.id, "title": r.title, "tracks": list(r.tracks)}
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")
