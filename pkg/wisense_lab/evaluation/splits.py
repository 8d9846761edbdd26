"""Campaign-level cross-validation sets."""

from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from wisense_lab.errors import ConfigurationError, UnsupportedProtocolError

SUPPORTED_CAMPAIGNS = 4


@dataclass(frozen=True)
class EvalSet:
    """Role assignment of the campaign numbers, shared by every class"""
    round_index: int
    train: Tuple[int, ...]
    validation: int
    test: int
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round": self.round_index,
            "train": list(self.train),
            "validation": self.validation,
            "test": self.test,
            "seed": self.seed,
        }


def make_splits(n_campaigns: int = 4, n_rounds: int = 9, seed: int = 0) -> List[EvalSet]:
    """All 4 x 3 (test, validation) assignments, repeated for every round.

    Rounds differ only in the training seed, drawn per set from ``seed``.
    """
    if n_campaigns != SUPPORTED_CAMPAIGNS:
        raise UnsupportedProtocolError(
            f"cross-validation needs exactly {SUPPORTED_CAMPAIGNS} campaigns per class, "
            f"got {n_campaigns}"
        )
    if n_rounds < 1:
        raise ConfigurationError(f"n_rounds must be >= 1, got {n_rounds}")

    n_sets = n_rounds * n_campaigns * (n_campaigns - 1)
    seeds = [
        int(s.generate_state(1, dtype=np.uint32)[0])
        for s in np.random.SeedSequence(seed).spawn(n_sets)
    ]

    sets = []
    campaigns = range(n_campaigns)
    for round_index in range(1, n_rounds + 1):
        for test in campaigns:
            for validation in campaigns:
                if validation == test:
                    continue
                train = tuple(c for c in campaigns if c not in (test, validation))
                sets.append(EvalSet(round_index, train, validation, test, seeds[len(sets)]))
    return sets
