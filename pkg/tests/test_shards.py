import numpy as np
import pytest

from corpus import BOS, EOS, EncodedExample
from models import ModelConfig, init_params
from tensor_core import DegenerateInputError
from training import evaluate, evaluate_parallel, evaluate_sharded, make_shards


def make_test_data(n=23, seed=0):
    rng = np.random.default_rng(seed)
    config = ModelConfig(num_layers=1, embed_dim=8, hidden_dim=8, num_heads=2,
                         source_vocab_size=20, target_vocab_size=10)
    examples = [EncodedExample(list(rng.integers(4, 20, size=int(rng.integers(1, 6)))),
                               [BOS] + list(rng.integers(4, 10, size=int(rng.integers(1, 4)))) + [EOS],
                               f"s{i}") for i in range(n)]
    return config, init_params(config, seed), examples


def test_shards_are_contiguous_and_balanced():
    shards = make_shards(list(range(10)), 3)
    assert shards == [[0, 1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert make_shards(list(range(2)), 5) == [[0], [1]]


@pytest.mark.asyncio
@pytest.mark.parametrize("workers", [1, 2, 4, 7])
async def test_sharded_matches_serial(workers):
    config, params, examples = make_test_data()
    serial = evaluate(config, params, examples)
    sharded = await evaluate_sharded(config, params, examples, workers=workers, batch_size=4)
    assert abs(sharded.nll - serial.nll) < 1e-10
    assert sharded.tokens == serial.tokens and sharded.examples == serial.examples


@pytest.mark.asyncio
async def test_sharded_empty_is_degenerate():
    config, params, _ = make_test_data()
    with pytest.raises(DegenerateInputError):
        await evaluate_sharded(config, params, [], workers=2)


def test_blocking_wrapper():
    config, params, examples = make_test_data(9, seed=1)
    assert abs(evaluate_parallel(config, params, examples, workers=3).nll
               - evaluate(config, params, examples).nll) < 1e-10
