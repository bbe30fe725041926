from .config import TrainConfig
from .errors import (CheckpointCorruptError, CheckpointError, CheckpointTruncatedError,
                     CheckpointVersionError, NonFiniteLossError)
from .checkpoint import Checkpoint, from_bytes, load_checkpoint, save_checkpoint, to_bytes
from .trainlog import EpochRecord, TrainLog, TrainLogWriter
from .trainer import (EarlyStopping, EncodedSplits, EvalResult, evaluate, evaluate_nll, fit,
                      nll_totals, train_epoch)
from .shards import evaluate_parallel, evaluate_sharded, make_shards
from .experiments import (TREND_CORPUS, VARIANTS, compare_variants, results_markdown, run_variant,
                          synthetic_splits, trend_checks)
