"""
Title-length stratified split.

Playlists are grouped by title token count. Each group is shuffled with a
generator seeded by (seed, token count) and cut into validation, test and
train, in that order. With ratios (r_train, r_val, r_test) a group of size n
gives floor(n * r_val / total) validation and floor(n * r_test / total) test
items, raised to 1 each once n >= 3; groups smaller than 3 go wholly to
train. Groups are merged in ascending token count.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import List

import numpy as np


@dataclass
class SplitCorpus:
    train: List = field(default_factory=list)
    validation: List = field(default_factory=list)
    test: List = field(default_factory=list)
    split_seed: int = 0

    def sizes(self):
        return len(self.train), len(self.validation), len(self.test)


def stratum_sizes(n, ratios=(8, 1, 1)):
    total = sum(ratios)
    if n < 3:
        return n, 0, 0
    n_val = max(1, n * ratios[1] // total)
    n_test = max(1, n * ratios[2] // total)
    return n - n_val - n_test, n_val, n_test


def stratified_split(filtered, ratios=(8, 1, 1), seed=0):
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValueError(f"split ratios must be three positive numbers, got {ratios}")
    strata = defaultdict(list)
    for p in filtered:
        strata[len(p.title_tokens)].append(p)

    split = SplitCorpus(split_seed=seed)
    for length in sorted(strata):
        group = strata[length]
        rng = np.random.default_rng([seed, length])
        order = rng.permutation(len(group))
        _, n_val, n_test = stratum_sizes(len(group), ratios)
        shuffled = [group[i] for i in order]
        split.validation.extend(shuffled[:n_val])
        split.test.extend(shuffled[n_val:n_val + n_test])
        split.train.extend(shuffled[n_val + n_test:])
    return split
