"""
Run configuration: one YAML (or JSON) file with the sections

    model:  ModelConfig fields
    train:  TrainConfig fields
    corpus: CorpusOptions fields
    paths:  PathsConfig fields

Every field is optional. Unknown sections or keys are rejected.
"""
from dataclasses import asdict, dataclass, field, fields
from typing import List

from models import ConfigError, ModelConfig
from training import TrainConfig


def import_yaml(f):
    import yaml
    return yaml.safe_load(f)


@dataclass
class CorpusOptions:
    min_title_tokens: int = 3
    min_tracks: int = 10
    min_avg_token_chars: float = 3.0
    split_ratios: List[int] = field(default_factory=lambda: [8, 1, 1])
    split_seed: int = 0
    min_count_track: int = 1
    min_count_word: int = 1
    max_source_len: int = 256


@dataclass
class PathsConfig:
    data_dir: str = "data/prepared"
    out_dir: str = "runs/default"


@dataclass
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    corpus: CorpusOptions = field(default_factory=CorpusOptions)
    paths: PathsConfig = field(default_factory=PathsConfig)

    def set_seed(self, seed):
        self.corpus.split_seed = seed
        self.train.init_seed = seed
        self.train.seed = seed

    def to_dict(self):
        return {"model": self.model.to_dict(), "train": self.train.to_dict(),
                "corpus": asdict(self.corpus), "paths": asdict(self.paths)}


_SECTIONS = {"model": ModelConfig, "train": TrainConfig, "corpus": CorpusOptions, "paths": PathsConfig}


def _section(cls, name, raw):
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    return cls(**raw)


def run_config_from_dict(raw):
    raw = raw or {}
    if not isinstance(raw, dict):
        raise ConfigError("run config must be a mapping of sections")
    unknown = set(raw) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    return RunConfig(**{name: _section(cls, name, raw.get(name, {}) or {})
                        for name, cls in _SECTIONS.items()})


def load_run_config(path):
    try:
        with open(path, encoding="utf-8") as f:
            raw = import_yaml(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except Exception as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from None
    return run_config_from_dict(raw)
