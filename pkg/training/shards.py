"""
Sharded evaluation of a frozen checkpoint.

Examples are cut into contiguous shards, each shard's NLL totals are computed
by an executor worker, and the totals are reduced in shard order, so the
result does not depend on which worker finishes first.
"""
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor

from tensor_core import DegenerateInputError

from .trainer import EvalResult, nll_totals


def make_shards(examples, n_shards):
    n_shards = max(1, min(n_shards, len(examples)))
    size, extra = divmod(len(examples), n_shards)
    shards, start = [], 0
    for i in range(n_shards):
        end = start + size + (1 if i < extra else 0)
        shards.append(examples[start:end])
        start = end
    return shards


async def evaluate_sharded(model_config, params, examples, workers=2, batch_size=64):
    if not examples:
        raise DegenerateInputError("nothing to evaluate")
    shards = make_shards(examples, workers)
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=len(shards)) as pool:
        tasks = [loop.run_in_executor(pool, nll_totals, model_config, params, shard, batch_size)
                 for shard in shards]
        totals = await asyncio.gather(*tasks)
    total = sum(t for t, _ in totals)
    tokens = sum(n for _, n in totals)
    logging.info(f"Reduced {len(shards)} shards: {tokens} tokens")
    return EvalResult(total / tokens, tokens, len(examples))


def evaluate_parallel(model_config, params, examples, workers=2, batch_size=64):
    return asyncio.run(evaluate_sharded(model_config, params, examples, workers, batch_size))
