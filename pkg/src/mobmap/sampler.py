"""Exact-uniform samplers for p-trees and mobiles.

Trees are drawn by sampling a uniform composition of n over the white-vertex
slots (stars and bars on a uniform subset), turning it into depth-first child
counts, and applying the cycle rotation that makes the count sequence a valid
preorder code; every tree arises from exactly one composition class of size
equal to the slot count, so the result is uniform. Labels are drawn one black
vertex at a time from the uniform cyclic step law, which is independent of the
tree shape. The conditioned (rooted) variant is obtained by rejection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .mobile_core import FREE, ROOTED, Mobile, PTree, ValidationError, label_step_choices


class RejectionBudgetError(RuntimeError):
    """Rejection sampling gave up; carries the attempt count."""

    def __init__(self, attempts):
        super().__init__(
            f"rejection budget exhausted after {attempts} attempts; "
            "use the pointed construction for large sizes"
        )
        self.attempts = attempts


@dataclass
class RngStream:
    """Deterministic random stream addressed by (master_seed, stream_index).

    Streams with different indices under one master seed are statistically
    independent. Mixing is delegated to numpy's SeedSequence with
    ``entropy=master_seed, spawn_key=(stream_index,)``, which is stable for a
    fixed numpy major version. A fresh RngStream always replays the same
    sequence of draws.
    """

    master_seed: int
    stream_index: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.master_seed < 0 or self.stream_index < 0:
            raise ValidationError("seed and stream index must be nonnegative")
        seq = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.stream_index,)
        )
        self._gen = np.random.Generator(np.random.PCG64(seq))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


@lru_cache(maxsize=None)
def _step_choice_matrix(p: int) -> np.ndarray:
    m = np.asarray(label_step_choices(p), dtype=np.int64)
    m.setflags(write=False)
    return m


def _uniform_composition(total: int, parts: int, gen: np.random.Generator) -> np.ndarray:
    """Uniform composition of ``total`` into ``parts`` nonnegative parts."""
    if parts == 1:
        return np.array([total], dtype=np.int64)
    slots = total + parts - 1
    bars = np.sort(gen.choice(slots, size=parts - 1, replace=False))
    edges = np.empty(parts + 1, dtype=np.int64)
    edges[0] = -1
    edges[1:-1] = bars
    edges[-1] = slots
    return np.diff(edges) - 1


def sample_ptree(p: int, n: int, rng: RngStream) -> PTree:
    """Uniform p-tree with n black vertices."""
    if p < 2 or n < 1:
        raise ValidationError("need p >= 2 and n >= 1")
    n_white = (p - 1) * n + 1
    mult = _uniform_composition(n, n_white, rng.generator)
    # rotate to the unique valid preorder code: start right after the first
    # minimum of the prefix sums of (children - 1)
    steps = (p - 1) * mult - 1
    prefix = np.cumsum(steps)
    k = int(np.argmin(prefix))
    mult = np.concatenate([mult[k + 1 :], mult[: k + 1]])
    return PTree(p=p, n=n, mult=mult)


def _labels_from_steps(tree: PTree, root_label: int, e: np.ndarray):
    """Contour labels and per-vertex labels induced by cyclic steps ``e``."""
    idx, _, step_black, step_slot = tree.walk()
    v = np.empty(tree.n_edges + 1, dtype=np.int64)
    v[0] = root_label
    np.cumsum(e[step_black, step_slot], out=v[1:])
    v[1:] += root_label
    return idx, v


def sample_free_mobile(p: int, n: int, rng: RngStream) -> Mobile:
    """Uniform free mobile: uniform tree, independent uniform cyclic steps."""
    tree = sample_ptree(p, n, rng)
    choices = _step_choice_matrix(p)
    e = choices[rng.generator.integers(0, choices.shape[0], size=n)]
    idx, v = _labels_from_steps(tree, 0, e)
    labels = np.empty(tree.n_white, dtype=np.int64)
    labels[idx[::-1]] = v[::-1]
    return Mobile(tree=tree, labels=labels, variant=FREE)


def sample_rooted_mobile(
    p: int, n: int, rng: RngStream, max_attempts: int = 10**6
) -> Mobile:
    """Uniform rooted mobile by rejection from the free label law.

    Root label is pinned to 1 and a draw is kept only when every label stays
    >= 1, so conditioning is exact. The acceptance rate decays like 1/n;
    past roughly n = 10**4 prefer the pointed route.
    """
    if p < 2 or n < 1:
        raise ValidationError("need p >= 2 and n >= 1")
    choices = _step_choice_matrix(p)
    gen = rng.generator
    for _ in range(max_attempts):
        tree = sample_ptree(p, n, rng)
        e = choices[gen.integers(0, choices.shape[0], size=n)]
        idx, v = _labels_from_steps(tree, 1, e)
        if int(v.min()) >= 1:
            labels = np.empty(tree.n_white, dtype=np.int64)
            labels[idx[::-1]] = v[::-1]
            return Mobile(tree=tree, labels=labels, variant=ROOTED)
    raise RejectionBudgetError(max_attempts)
