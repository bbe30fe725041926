"""
Convert third-party playlist dumps to canonical records through a small
field-mapping file, e.g. for a Melon-style array of objects

    {"id_field": "id", "title_field": "plylst_title", "tracks_field": "songs"}

or for MPD slices, whose tracks are objects and which wrap records in a key

    {"records_field": "playlists", "id_field": "pid", "title_field": "name",
     "tracks_field": "tracks", "track_id_subfield": "track_uri"}
"""
import json
from dataclasses import dataclass, fields
from typing import Optional

from .records import Playlist, read_jsonl


@dataclass
class AdapterConfig:
    id_field: str = "id"
    title_field: str = "title"
    tracks_field: str = "tracks"
    track_id_subfield: Optional[str] = None
    records_field: Optional[str] = None


def load_adapter(path):
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    known = {f.name for f in fields(AdapterConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown adapter keys: {sorted(unknown)}")
    return AdapterConfig(**raw)


def convert_record(obj, adapter):
    tracks = obj.get(adapter.tracks_field) or []
    if adapter.track_id_subfield:
        tracks = [t[adapter.track_id_subfield] for t in tracks]
    return Playlist(id=str(obj[adapter.id_field]), title=obj.get(adapter.title_field) or "",
                    tracks=[str(t) for t in tracks])


def _iter_raw(path):
    with open(path, encoding="utf-8") as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        # one object per line
        return [json.loads(line) for line in text.splitlines() if line.strip()]


def read_raw(path, adapter=None):
    """Canonical JSONL when adapter is None, otherwise mapped through it."""
    if adapter is None:
        return read_jsonl(path)
    data = _iter_raw(path)
    if adapter.records_field:
        data = data[adapter.records_field]
    elif isinstance(data, dict):
        data = [data]
    return [convert_record(obj, adapter) for obj in data]


def merge_sources(sources):
    """Concatenate playlist lists, keeping the first record of any repeated id.

    Returns (merged, number of dropped duplicates).
    """
    seen = set()
    merged, dropped = [], 0
    for playlists in sources:
        for p in playlists:
            if p.id in seen:
                dropped += 1
                continue
            seen.add(p.id)
            merged.append(p)
    return merged, dropped
