import json
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import pandas as pd


@dataclass
class EpochRecord:
    epoch: int
    train_nll: float
    val_nll: float
    lr: float
    wall_time: float


@dataclass
class TrainLog:
    records: List[EpochRecord] = field(default_factory=list)

    def append(self, record):
        if self.records and record.epoch <= self.records[-1].epoch:
            raise ValueError(f"epoch {record.epoch} does not follow {self.records[-1].epoch}")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def val_curve(self):
        return [r.val_nll for r in self.records]

    def to_frame(self):
        return pd.DataFrame([asdict(r) for r in self.records],
                            columns=["epoch", "train_nll", "val_nll", "lr", "wall_time"])

    @classmethod
    def read(cls, path):
        log = cls()
        with open(path, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    log.append(EpochRecord(**json.loads(line)))
        return log


class TrainLogWriter:
    """Appends one JSON line per epoch and flushes, so a crashed run keeps its history."""

    def __init__(self, filename: Optional[str] = "trainlog.jsonl"):
        self.f = open(filename, "w", encoding="utf-8", newline="\n") if filename else None

    def log(self, record):
        if self.f is None:
            return
        self.f.write(json.dumps(asdict(record)) + "\n")
        self.f.flush()

    def close(self):
        if self.f is not None:
            self.f.close()
            self.f = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
