from dataclasses import asdict, dataclass, fields

ARCHITECTURES = ("rnn", "transformer")


class ConfigError(ValueError):
    pass


@dataclass
class ModelConfig:
    architecture: str = "transformer"
    num_layers: int = 2
    embed_dim: int = 128
    hidden_dim: int = 256
    num_heads: int = 4
    encoder_positional_encoding: bool = True
    dropout_rate: float = 0.0
    source_vocab_size: int = 0
    target_vocab_size: int = 0
    max_positions: int = 512

    def validate(self):
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"architecture must be one of {ARCHITECTURES}, got {self.architecture!r}")
        if self.num_layers < 1:
            raise ConfigError(f"num_layers must be >= 1, got {self.num_layers}")
        if self.embed_dim < 1 or self.hidden_dim < 1:
            raise ConfigError("embed_dim and hidden_dim must be positive")
        if self.architecture == "transformer":
            if self.num_heads < 1 or self.embed_dim % self.num_heads:
                raise ConfigError(f"embed_dim {self.embed_dim} is not divisible by num_heads {self.num_heads}")
            if self.embed_dim % 2:
                raise ConfigError(f"sinusoidal encoding needs an even embed_dim, got {self.embed_dim}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.source_vocab_size < 5 or self.target_vocab_size < 5:
            raise ConfigError("vocabulary sizes must cover the 4 reserved tokens plus at least one entry")
        if self.max_positions < 1:
            raise ConfigError(f"max_positions must be >= 1, got {self.max_positions}")
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, raw):
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown model config keys: {sorted(unknown)}")
        return cls(**raw)
