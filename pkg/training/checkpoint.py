"""
Checkpoint file format, version 1:

    b"SSQ1"                       magic
    u16  version                  little-endian
    u64  metadata length N        little-endian
    N bytes of UTF-8 JSON         model config, vocabularies, training metadata,
                                  and the ordered list of {"name", "shape"}
    raw little-endian float64 blobs, one per parameter, in metadata order

Nothing may follow the last blob.
"""
import json
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from corpus.vocab import Vocab
from models import ModelConfig, ModelParams, param_layout
from tensor_core import Tensor

from .errors import CheckpointCorruptError, CheckpointTruncatedError, CheckpointVersionError

MAGIC = b"SSQ1"
VERSION = 1
_HEADER = struct.Struct("<HQ")


@dataclass
class Checkpoint:
    model_config: ModelConfig
    params: ModelParams
    track_vocab: Vocab
    word_vocab: Vocab
    metadata: dict = field(default_factory=dict)

    @property
    def vocabs(self):
        return self.track_vocab, self.word_vocab


def to_bytes(ckpt, version=VERSION):
    meta = {
        "model_config": ckpt.model_config.to_dict(),
        "track_vocab": ckpt.track_vocab.to_list(),
        "word_vocab": ckpt.word_vocab.to_list(),
        "metadata": ckpt.metadata,
        "params": [{"name": name, "shape": list(t.shape)} for name, t in ckpt.params.items()],
    }
    meta_bytes = json.dumps(meta, ensure_ascii=False, sort_keys=True).encode("utf-8")
    blobs = b"".join(np.ascontiguousarray(t.data, dtype="<f8").tobytes() for t in ckpt.params.tensors())
    return MAGIC + _HEADER.pack(version, len(meta_bytes)) + meta_bytes + blobs


def from_bytes(data):
    if len(data) < len(MAGIC):
        if MAGIC.startswith(data):
            raise CheckpointTruncatedError("file ends inside the magic bytes")
        raise CheckpointCorruptError("not a checkpoint file")
    if data[:4] != MAGIC:
        raise CheckpointCorruptError(f"bad magic {data[:4]!r}")
    if len(data) < 4 + 2:
        raise CheckpointTruncatedError("file ends inside the header")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != VERSION:
        raise CheckpointVersionError(f"checkpoint version {version}, this build reads {VERSION}")
    if len(data) < 4 + _HEADER.size:
        raise CheckpointTruncatedError("file ends inside the header")
    _, meta_len = _HEADER.unpack_from(data, 4)
    start = 4 + _HEADER.size
    if len(data) < start + meta_len:
        raise CheckpointTruncatedError("file ends inside the metadata block")
    try:
        meta = json.loads(data[start:start + meta_len].decode("utf-8"))
        config = ModelConfig.from_dict(meta["model_config"])
        track_vocab = Vocab.from_list(meta["track_vocab"])
        word_vocab = Vocab.from_list(meta["word_vocab"])
        layout = [(p["name"], tuple(p["shape"])) for p in meta["params"]]
        expected = [(name, shape) for name, shape, _, _ in param_layout(config.validate())]
    except (UnicodeDecodeError, ValueError, KeyError, TypeError) as e:
        raise CheckpointCorruptError(f"unreadable metadata: {e}") from None
    for name, shape in layout:
        if not all(type(n) is int and n >= 0 for n in shape):
            raise CheckpointCorruptError(f"parameter {name!r} has a malformed shape {list(shape)}")
    if layout != expected:
        raise CheckpointCorruptError("parameter list does not match the layout of the stored model config")

    offset = start + meta_len
    params = ModelParams()
    for name, shape in layout:
        n = int(np.prod(shape)) * 8
        if len(data) < offset + n:
            raise CheckpointTruncatedError(f"file ends inside parameter {name}")
        params[name] = Tensor(np.frombuffer(data, dtype="<f8", count=n // 8, offset=offset).reshape(shape))
        offset += n
    if offset != len(data):
        raise CheckpointCorruptError(f"{len(data) - offset} unexpected bytes after the last parameter")
    return Checkpoint(config, params, track_vocab, word_vocab, meta.get("metadata", {}))


def save_checkpoint(ckpt, path):
    data = to_bytes(ckpt)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(data)
    os.replace(tmp, path)


def load_checkpoint(path):
    with open(path, "rb") as f:
        return from_bytes(f.read())
