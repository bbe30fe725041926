from dataclasses import asdict, dataclass, fields

from models.config import ConfigError


@dataclass
class TrainConfig:
    base_lr: float = 0.005
    lr_decay: float = 0.0001
    batch_size: int = 64
    max_epochs: int = 100
    patience: int = 5
    seed: int = 0                 # epoch seed base: epoch e shuffles with seed + e
    init_seed: int = 0
    shuffle_augment: bool = False
    augment_copies: int = 0
    clip_norm: float = 5.0
    weight_decay: float = 0.0
    eval_batch_size: int = 64
    progress: bool = False

    def validate(self):
        if self.base_lr < 0 or self.lr_decay < 0 or self.weight_decay < 0:
            raise ConfigError("learning rate, decay and weight decay must be non-negative")
        if self.batch_size < 1 or self.eval_batch_size < 1:
            raise ConfigError("batch sizes must be positive")
        if self.max_epochs < 1 or self.patience < 1:
            raise ConfigError("max_epochs and patience must be positive")
        if self.patience > self.max_epochs:
            raise ConfigError(f"patience {self.patience} exceeds max_epochs {self.max_epochs}")
        if self.augment_copies < 0:
            raise ConfigError("augment_copies must be >= 0")
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, raw):
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown train config keys: {sorted(unknown)}")
        return cls(**raw)
