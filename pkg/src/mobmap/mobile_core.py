"""Alternating plane trees with integer labels and their contour encodings.

A p-tree is a rooted plane tree whose vertices alternate between white (even
depth) and black (odd depth) generations, every black vertex carrying exactly
p-1 white children. With n black vertices there are (p-1)n + 1 white vertices
and pn edges. A mobile adds an integer label to every white vertex, subject to
a cyclic step rule around each black vertex: reading the white neighbors of a
black vertex in cyclic order (parent first), consecutive labels may drop by at
most 1. Two variants are used:

* ``rooted``: root label 1 and every label >= 1,
* ``free``: root label 0, labels otherwise unconstrained.

The walk around the tree induces two integer sequences of length pn + 1: the
height of the visited white vertex (even numbers, stored directly so all
arithmetic stays integral) and its label. The pair determines the mobile
uniquely, which is what the codec below exploits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels

ROOTED = "rooted"
FREE = "free"

ENUMERATION_GUARD = 24  # refuse exhaustion beyond p*n of this size


class ValidationError(ValueError):
    """A structurally sound object violating a semantic invariant."""


class DecodeError(ValueError):
    """Contour sequences that do not encode any mobile.

    Carries ``index``, the first offending position in the input sequences.
    """

    def __init__(self, message, index):
        super().__init__(f"{message} (index {index})")
        self.index = index


def _readonly(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PTree:
    """Plane tree with alternating generations, stored as multiplier counts.

    Parameters
    ----------
    p : int
        Half the face degree of the maps this tree encodes, p >= 2.
    n : int
        Number of black vertices.
    mult : ndarray
        ``mult[w]`` is the number of black children of white vertex w, white
        vertices numbered in depth-first preorder (equivalently, by first
        visit of the contour walk). Length (p-1)n + 1, entries sum to n.
    """

    p: int
    n: int
    mult: np.ndarray

    def __post_init__(self):
        if self.p < 2:
            raise ValidationError(f"p must be >= 2, got {self.p}")
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        mult = _readonly(self.mult)
        object.__setattr__(self, "mult", mult)
        expected = (self.p - 1) * self.n + 1
        if mult.shape != (expected,):
            raise ValidationError(
                f"multiplier array has length {mult.shape[0]}, expected {expected}"
            )
        if mult.min(initial=0) < 0:
            raise ValidationError("negative multiplier")
        if int(mult.sum()) != self.n:
            raise ValidationError(
                f"multipliers sum to {int(mult.sum())}, expected n = {self.n}"
            )
        # preorder child counts must form a single tree: partial sums of
        # (children - 1) stay >= 0 before the final -1
        steps = (self.p - 1) * mult - 1
        partial = np.cumsum(steps)
        if partial[-1] != -1 or (partial[:-1] < 0).any():
            raise ValidationError("multiplier sequence is not a valid preorder tree code")

    @property
    def n_white(self) -> int:
        return (self.p - 1) * self.n + 1

    @property
    def n_edges(self) -> int:
        return self.p * self.n

    def walk(self):
        """Contour walk arrays; see ``_kernels.walk_tree``."""
        return _kernels.walk_tree(self.p, self.mult)

    def __eq__(self, other):
        if not isinstance(other, PTree):
            return NotImplemented
        return (
            self.p == other.p
            and self.n == other.n
            and np.array_equal(self.mult, other.mult)
        )

    def __hash__(self):
        return hash((self.p, self.n, self.mult.tobytes()))


@dataclass(frozen=True, eq=False)
class Mobile:
    """A p-tree plus white-vertex labels.

    ``labels[w]`` belongs to white vertex w in the tree's preorder numbering.
    Construction checks only shapes; semantic label rules are enforced by
    :func:`validate_mobile` and (cheaply, on the encoded sequences) by
    :func:`contour`.
    """

    tree: PTree
    labels: np.ndarray
    variant: str

    def __post_init__(self):
        if self.variant not in (ROOTED, FREE):
            raise ValidationError(f"unknown variant {self.variant!r}")
        labels = _readonly(self.labels)
        object.__setattr__(self, "labels", labels)
        if labels.shape != (self.tree.n_white,):
            raise ValidationError(
                f"labels have length {labels.shape[0]}, expected {self.tree.n_white}"
            )

    @property
    def p(self) -> int:
        return self.tree.p

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def root_label(self) -> int:
        return int(self.labels[0])

    def __eq__(self, other):
        if not isinstance(other, Mobile):
            return NotImplemented
        return (
            self.variant == other.variant
            and self.tree == other.tree
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self):
        return hash((self.tree, self.labels.tobytes(), self.variant))


@dataclass(frozen=True, eq=False)
class ContourPair:
    """Height and label sequences of a mobile's contour walk.

    ``H`` holds tree heights (even integers, steps in {-2, 0, +2}); ``V``
    holds labels (steps >= -1). Both have length pn + 1 and matching
    endpoints: H starts and ends at 0, V at the root label.
    """

    p: int
    n: int
    H: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        H = _readonly(self.H)
        V = _readonly(self.V)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "V", V)
        expected = self.p * self.n + 1
        if H.shape != (expected,) or V.shape != (expected,):
            raise ValidationError(
                f"contour sequences must have length pn+1 = {expected}, "
                f"got {H.shape[0]} and {V.shape[0]}"
            )

    def __eq__(self, other):
        if not isinstance(other, ContourPair):
            return NotImplemented
        return (
            self.p == other.p
            and self.n == other.n
            and np.array_equal(self.H, other.H)
            and np.array_equal(self.V, other.V)
        )

    def __hash__(self):
        return hash((self.p, self.n, self.H.tobytes(), self.V.tobytes()))

    def key(self):
        """Canonical hashable form, used for deduplication and counting."""
        return (self.p, self.n, self.H.tobytes(), self.V.tobytes())


@dataclass(frozen=True)
class ScalingConstants:
    """Normalization constants for the n -> infinity contour limits.

    For maps with n faces of degree 2p, heights rescale by
    ``c_C / sqrt(n)`` (applied to H/2) and labels by ``c_V / n**0.25``.
    """

    p: int
    c_C: float
    c_V: float


def scaling_constants(p: int) -> ScalingConstants:
    if p < 2:
        raise ValidationError(f"p must be >= 2, got {p}")
    c_c = 0.5 * math.sqrt(p / (p - 1.0))
    c_v = (9.0 / (4.0 * p * (p - 1.0))) ** 0.25
    return ScalingConstants(p=p, c_C=c_c, c_V=c_v)


# ---------------------------------------------------------------------------
# contour codec


def contour(mobile: Mobile) -> ContourPair:
    """Encode a mobile as its (height, label) contour sequences.

    Raises :class:`ValidationError` if the labels break the variant's rules;
    the tree itself was validated at construction.
    """
    idx, height, _, _ = mobile.tree.walk()
    v = mobile.labels[idx]
    steps = v[1:] - v[:-1]
    if steps.size and int(steps.min()) < -1:
        i = int(np.argmax(steps < -1))
        raise ValidationError(f"label step below -1 at contour position {i}")
    root = mobile.root_label
    if mobile.variant == ROOTED:
        if root != 1:
            raise ValidationError(f"rooted mobile must have root label 1, got {root}")
        if int(v.min()) < 1:
            raise ValidationError("rooted mobile has a label below 1")
    else:
        if root != 0:
            raise ValidationError(f"free mobile must have root label 0, got {root}")
    return ContourPair(p=mobile.p, n=mobile.n, H=height, V=v)


def mobile_from_contour(c: ContourPair) -> Mobile:
    """Decode contour sequences back into a mobile (exact inverse of contour).

    The variant is read off the starting label: 1 means rooted, 0 means free.
    Any other start, or any step/positivity/arity violation, raises
    :class:`DecodeError` with the first offending index.
    """
    p, n = c.p, c.n
    h, v = c.H, c.V
    pn = p * n
    if h[0] != 0:
        raise DecodeError(f"height sequence must start at 0, got {int(h[0])}", 0)
    if h[pn] != 0:
        raise DecodeError(f"height sequence must end at 0, got {int(h[pn])}", pn)
    root = int(v[0])
    if root == 1:
        variant = ROOTED
    elif root == 0:
        variant = FREE
    else:
        raise DecodeError(f"starting label {root} matches neither variant", 0)
    if int(v[pn]) != root:
        raise DecodeError("label sequence must return to the root label", pn)

    n_white = (p - 1) * n + 1
    mult = np.zeros(n_white, dtype=np.int64)
    labels = np.empty(n_white, dtype=np.int64)
    labels[0] = root

    # stack of (white vertex, children built in its open block); the open
    # block closes on the -2 step, which must arrive after exactly p-1
    # children
    stack: list[list[int]] = []
    cur = 0
    next_white = 1
    for i in range(pn):
        dh = int(h[i + 1] - h[i])
        dv = int(v[i + 1] - v[i])
        if dv < -1:
            raise DecodeError(f"label step {dv} below -1", i)
        if dh == 2:
            mult[cur] += 1
            stack.append([cur, 1])
            if next_white >= n_white:
                raise DecodeError("more white vertices than the header admits", i)
            labels[next_white] = int(v[i + 1])
            cur = next_white
            next_white += 1
        elif dh == 0:
            if not stack:
                raise DecodeError("sibling step outside any block", i)
            if stack[-1][1] >= p - 1:
                raise DecodeError(f"block exceeds {p - 1} children", i)
            stack[-1][1] += 1
            if next_white >= n_white:
                raise DecodeError("more white vertices than the header admits", i)
            labels[next_white] = int(v[i + 1])
            cur = next_white
            next_white += 1
        elif dh == -2:
            if not stack:
                raise DecodeError("ascent below the root", i)
            parent, filled = stack.pop()
            if filled != p - 1:
                raise DecodeError(
                    f"block closed with {filled} children, expected {p - 1}", i
                )
            if int(v[i + 1]) != int(labels[parent]):
                raise DecodeError("label disagrees with an earlier visit", i + 1)
            cur = parent
        else:
            raise DecodeError(f"height step {dh} not in {{-2, 0, 2}}", i)
    if stack:
        raise DecodeError("walk ended inside an open block", pn)
    if next_white != n_white:
        raise DecodeError(
            f"decoded {next_white} white vertices, expected {n_white}", pn
        )
    if variant == ROOTED and int(labels.min()) < 1:
        w = int(np.argmax(labels < 1))
        raise DecodeError(f"rooted mobile has label {int(labels[w])} at vertex {w}", 0)
    tree = PTree(p=p, n=n, mult=mult)
    return Mobile(tree=tree, labels=labels, variant=variant)


# ---------------------------------------------------------------------------
# validation


@dataclass
class MobileValidation:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_mobile(mobile: Mobile) -> MobileValidation:
    """Check every mobile invariant, reporting all violations found.

    Tree shape is already enforced by construction; this re-derives the label
    rules from the walk so a corrupted labels array is caught and attributed
    to a vertex.
    """
    out = []
    root = mobile.root_label
    if mobile.variant == ROOTED:
        if root != 1:
            out.append(f"root label {root}, rooted variant requires 1")
        low = np.flatnonzero(mobile.labels < 1)
        for w in low[:10]:
            out.append(f"label {int(mobile.labels[w])} at white vertex {int(w)} below 1")
        if low.size > 10:
            out.append(f"... {low.size - 10} further labels below 1")
    else:
        if root != 0:
            out.append(f"root label {root}, free variant requires 0")

    idx, _, step_black, step_slot = mobile.tree.walk()
    v = mobile.labels[idx]
    steps = v[1:] - v[:-1]
    bad = np.flatnonzero(steps < -1)
    for i in bad[:10]:
        out.append(
            f"cyclic step {int(steps[i])} below -1 around black vertex "
            f"{int(step_black[i])} (slot {int(step_slot[i])})"
        )
    if bad.size > 10:
        out.append(f"... {bad.size - 10} further step violations")
    return MobileValidation(violations=out)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def label_step_choices(p: int):
    """All cyclic label-step vectors around one black vertex.

    Tuples (e_0, ..., e_{p-1}) with every entry >= -1 summing to 0; there are
    binom(2p-1, p-1) of them.
    """
    out = []
    for f in itertools.product(range(p + 1), repeat=p - 1):
        rest = p - sum(f)
        if rest >= 0:
            out.append(tuple(x - 1 for x in f) + (rest - 1,))
    return out


@lru_cache(maxsize=None)
def _tree_shapes(p: int, n: int):
    """Preorder multiplier tuples of all p-trees with n black vertices."""
    if n == 0:
        return ((0,),)
    shapes = []

    def blocks(remaining, acc_mult_root, acc_tail):
        # choose how many blacks each of the root's blocks consumes
        if remaining == 0:
            shapes.append((acc_mult_root,) + acc_tail)
            return
        for w in range(1, remaining + 1):
            for block_tail in _block_shapes(p, w - 1):
                blocks(remaining - w, acc_mult_root + 1, acc_tail + block_tail)

    blocks(n, 0, ())
    return tuple(shapes)


@lru_cache(maxsize=None)
def _block_shapes(p: int, n: int):
    """Concatenated preorder codes of p-1 subtrees holding n blacks total."""
    def split(k, left):
        if k == 0:
            if left == 0:
                yield ()
            return
        for first in range(left + 1):
            for sub in _tree_shapes(p, first):
                for rest in split(k - 1, left - first):
                    yield sub + rest

    return tuple(dict.fromkeys(split(p - 1, n)))


def enumerate_mobiles(p: int, n: int, variant: str) -> list:
    """Every mobile with the given parameters, duplicate-free.

    Refuses sizes with p*n > 24; the output grows geometrically and larger
    inputs stop being enumerable in reasonable time or memory.
    """
    if variant not in (ROOTED, FREE):
        raise ValidationError(f"unknown variant {variant!r}")
    if p < 2 or n < 1:
        raise ValidationError("need p >= 2 and n >= 1")
    if p * n > ENUMERATION_GUARD:
        raise ValidationError(
            f"p*n = {p * n} exceeds the enumeration guard {ENUMERATION_GUARD}"
        )
    root = 1 if variant == ROOTED else 0
    choices = label_step_choices(p)
    out = []
    seen = set()
    for shape in _tree_shapes(p, n):
        tree = PTree(p=p, n=n, mult=np.array(shape, dtype=np.int64))
        idx, _, step_black, step_slot = tree.walk()
        for combo in itertools.product(choices, repeat=n):
            e = np.asarray(combo, dtype=np.int64)
            v = np.empty(p * n + 1, dtype=np.int64)
            v[0] = root
            np.cumsum(e[step_black, step_slot], out=v[1:])
            v[1:] += root
            if variant == ROOTED and int(v.min()) < 1:
                continue
            labels = np.empty(tree.n_white, dtype=np.int64)
            labels[idx[::-1]] = v[::-1]
            mob = Mobile(tree=tree, labels=labels, variant=variant)
            key = (v.tobytes(),)
            full_key = (tree.mult.tobytes(),) + key
            if full_key in seen:
                raise AssertionError("duplicate mobile in enumeration")
            seen.add(full_key)
            out.append(mob)
    return out
