import itertools

import numpy as np
import pytest

from mobmap import (
    ContourPair,
    Mobile,
    PTree,
    ValidationError,
    contour,
    enumerate_mobiles,
    mobile_from_contour,
    scaling_constants,
    validate_mobile,
)
from mobmap.sampler import RngStream, sample_free_mobile

from conftest import FIXTURE_H, FIXTURE_V, make_mobile


def test_ptree_rejects_bad_multiplier_shape():
    with pytest.raises(ValidationError):
        PTree(2, 1, np.array([1], dtype=np.int64))


def test_ptree_rejects_wrong_sum():
    with pytest.raises(ValidationError):
        PTree(2, 2, np.array([1, 0, 0], dtype=np.int64))


def test_ptree_rejects_forest_code():
    # two children declared after the walk already closed the root
    with pytest.raises(ValidationError):
        PTree(2, 2, np.array([0, 1, 1], dtype=np.int64))


def test_mobile_rejects_label_length_mismatch():
    tree = PTree(2, 1, np.array([1, 0], dtype=np.int64))
    with pytest.raises(ValidationError):
        Mobile(tree, np.array([1, 2, 3], dtype=np.int64), "rooted")


def test_mobile_rejects_unknown_variant():
    tree = PTree(2, 1, np.array([1, 0], dtype=np.int64))
    with pytest.raises(ValidationError):
        Mobile(tree, np.array([1, 2], dtype=np.int64), "planted")


def test_contour_of_path_mobile(path_mobile):
    c = contour(path_mobile)
    assert c.H.tolist() == [0, 2, 0]
    assert c.V.tolist() == [1, 2, 1]


def test_contour_of_fixture(fig_mobile):
    c = contour(fig_mobile)
    assert c.H.tolist() == list(FIXTURE_H)
    assert c.V.tolist() == list(FIXTURE_V)


def test_contour_invariants_on_fixture(fig_mobile):
    c = contour(fig_mobile)
    assert c.H[0] == c.H[-1] == 0
    assert c.V[0] == c.V[-1] == fig_mobile.root_label
    steps_h = np.diff(c.H)
    assert set(steps_h.tolist()) <= {-2, 0, 2}
    assert (np.diff(c.V) >= -1).all()


def test_contour_pair_length_check():
    with pytest.raises(ValidationError):
        ContourPair(2, 2, np.zeros(3, dtype=np.int64), np.zeros(3, dtype=np.int64))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_roundtrip_exhaustive_small(n):
    """Decode inverts encode across every enumerated mobile at p=2."""
    for mob in enumerate_mobiles(2, n, "rooted"):
        assert mobile_from_contour(contour(mob)) == mob
    for mob in enumerate_mobiles(2, n, "free"):
        back = mobile_from_contour(contour(mob))
        assert back.tree == mob.tree
        assert np.array_equal(back.labels, mob.labels)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_roundtrip_sampled(p):
    rng = RngStream(99, p)
    for _ in range(200):
        mob = sample_free_mobile(p, 100, rng)
        back = mobile_from_contour(contour(mob))
        assert back.tree == mob.tree
        assert np.array_equal(back.labels, mob.labels)


def test_enumerate_counts_p2_n1():
    assert len(enumerate_mobiles(2, 1, "rooted")) == 2
    assert len(enumerate_mobiles(2, 1, "free")) == 3


def test_enumerate_p2_n1_rooted_child_labels():
    kids = sorted(int(m.labels[1]) for m in enumerate_mobiles(2, 1, "rooted"))
    assert kids == [1, 2]


def test_enumerate_p2_n1_free_child_labels():
    kids = sorted(int(m.labels[1]) for m in enumerate_mobiles(2, 1, "free"))
    assert kids == [-1, 0, 1]


def test_enumerate_tree_count_is_catalan():
    mobiles = enumerate_mobiles(2, 3, "rooted")
    trees = {m.tree for m in mobiles}
    assert len(trees) == 5


def test_enumerate_distinct_and_valid():
    mobiles = enumerate_mobiles(3, 2, "free")
    keys = {contour(m).key() for m in mobiles}
    assert len(keys) == len(mobiles)
    for m in mobiles:
        assert validate_mobile(m).ok


def brute_force_label_count(p, n):
    """Count free mobiles by raw product over per-black label boxes.

    Each black vertex contributes independently: its p-1 child labels
    relative to the parent form a bridge with steps >= -1 summing over
    p slots, binom(2p-1, p-1) choices. Root label pinned by the variant.
    """
    trees = {m.tree for m in enumerate_mobiles(p, n, "free")}
    from math import comb

    per_black = comb(2 * p - 1, p - 1)
    return sum(per_black**t.n for t in trees)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)])
def test_enumerate_free_count_matches_label_box_oracle(p, n):
    assert len(enumerate_mobiles(p, n, "free")) == brute_force_label_count(p, n)


def test_enumerate_guard():
    with pytest.raises(ValidationError):
        enumerate_mobiles(2, 13, "rooted")


def test_rooted_subset_of_free():
    """Rooted mobiles are the nonnegative free ones shifted up by one."""
    free = enumerate_mobiles(2, 2, "free")
    rooted = {contour(m).key() for m in enumerate_mobiles(2, 2, "rooted")}
    shifted = set()
    for m in free:
        if m.labels.min() >= 0:
            lifted = Mobile(m.tree, m.labels + 1, "rooted")
            shifted.add(contour(lifted).key())
    assert shifted == rooted


def test_validate_mobile_flags_label_jump():
    # sibling-to-next label drop of 2 violates the step rule
    bad = make_mobile(3, 1, (1, 0, 0), (1, 3, 1))
    report = validate_mobile(bad)
    assert not report.ok


def test_validate_mobile_accepts_fixture(fig_mobile):
    assert validate_mobile(fig_mobile).ok


def test_decode_error_on_garbage():
    from mobmap import DecodeError

    h = np.array([0, 2, 2], dtype=np.int64)
    v = np.array([1, 1, 1], dtype=np.int64)
    with pytest.raises((DecodeError, ValidationError)):
        mobile_from_contour(ContourPair(2, 1, h, v))


def test_scaling_constants_p2():
    sc = scaling_constants(2)
    assert sc.c_C == pytest.approx(0.5 * np.sqrt(2.0))
    assert sc.c_V == pytest.approx((9.0 / 8.0) ** 0.25)


def test_scaling_constants_p3():
    sc = scaling_constants(3)
    assert sc.c_C == pytest.approx(0.5 * np.sqrt(1.5))
    assert sc.c_V == pytest.approx((9.0 / 24.0) ** 0.25)


def test_scaling_constants_positive_and_pure():
    for p in (2, 3, 4, 7):
        a, b = scaling_constants(p), scaling_constants(p)
        assert a == b
        assert a.c_C > 0 and a.c_V > 0


def test_scaling_constants_reject_p1():
    with pytest.raises(ValidationError):
        scaling_constants(1)


def test_contour_walk_covers_all_labels(fig_mobile):
    c = contour(fig_mobile)
    assert set(np.unique(c.V)) == set(np.unique(fig_mobile.labels))


def test_enumeration_rooted_free_cross_counts():
    # free count at root label 1 >= rooted count (positivity constraint binds)
    for p, n in itertools.product((2, 3), (1, 2)):
        free = enumerate_mobiles(p, n, "free")
        rooted = enumerate_mobiles(p, n, "rooted")
        assert len(free) >= len(rooted) > 0
