import numpy as np
import pytest

from mobmap import Mobile, PTree

# Fig-style worked fixture: p=3, n=5, twelve white vertices of which one
# carries two black children. Frozen from a hand trace; several tests pin
# exact sequences and edge sets against it.
FIXTURE_P, FIXTURE_N = 3, 5
FIXTURE_MULT = (2, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0)
FIXTURE_LABELS = (1, 3, 4, 3, 2, 3, 2, 1, 2, 1, 2)
FIXTURE_H = (0, 2, 4, 6, 6, 4, 4, 6, 6, 4, 2, 2, 0, 2, 2, 0)
FIXTURE_V = (1, 3, 4, 3, 2, 4, 3, 2, 1, 3, 3, 2, 1, 1, 2, 1)
FIXTURE_EDGES = [
    (0, 1), (0, 1), (0, 8), (0, 10), (1, 9), (1, 11), (2, 5), (2, 9),
    (3, 4), (3, 6), (4, 5), (5, 8), (6, 7), (6, 9), (7, 8),
]


def make_mobile(p, n, mult, labels, variant="rooted"):
    tree = PTree(p, n, np.asarray(mult, dtype=np.int64))
    return Mobile(tree, np.asarray(labels, dtype=np.int64), variant)


@pytest.fixture
def fig_mobile():
    return make_mobile(FIXTURE_P, FIXTURE_N, FIXTURE_MULT, FIXTURE_LABELS)


@pytest.fixture
def path_mobile():
    """p=2, n=1, child labeled 2: the smallest mobile with distinct labels."""
    return make_mobile(2, 1, (1, 0), (1, 2))


@pytest.fixture
def flat_mobile():
    # p=2, n=1, both labels 1
    return make_mobile(2, 1, (1, 0), (1, 1))


@pytest.fixture
def star_mobile():
    """p=2, n=3 star: three black children under the root, all labels 1.

    The only small mobile whose root has three corner blocks; pins the
    rotation-order handedness that the worked fixture cannot see.
    """
    return make_mobile(2, 3, (3, 0, 0, 0), (1, 1, 1, 1))
