"""Jit-compiled inner loops.

Everything here is a plain array-in / array-out kernel with no object-mode
fallback; callers own validation. Kept separate so the public modules stay
readable and the compile cache is shared.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def walk_tree(p, mult):
    """Depth-first walk of a p-tree given per-white-vertex multiplier counts.

    ``mult[w]`` is the number of black children of white vertex ``w``, with
    white vertices numbered in order of first appearance along the walk
    (equivalently depth-first preorder).

    Returns four arrays:

    * ``contour``  (pn+1,) white vertex index at each walk position,
    * ``height``   (pn+1,) tree depth (black and white generations both
      count, so white vertices sit at even heights),
    * ``step_black`` (pn,) id of the black vertex whose corner the step
      (i, i+1) turns around; blacks are numbered in order of first entry,
    * ``step_slot``  (pn,) position of that step in the cyclic order around
      the black vertex: 0 enters the first child, 1..p-2 move between
      siblings, p-1 returns to the parent.
    """
    n_white = mult.shape[0]
    n = (n_white - 1) // (p - 1)
    pn = p * n

    contour = np.empty(pn + 1, np.int64)
    height = np.empty(pn + 1, np.int64)
    step_black = np.empty(max(pn, 1), np.int64)
    step_slot = np.empty(max(pn, 1), np.int64)

    # explicit stack: vertex, blocks left to open, children left in the
    # open block, id of the open block's black vertex
    cap = n_white + 2
    st_v = np.empty(cap, np.int64)
    st_b = np.empty(cap, np.int64)
    st_c = np.empty(cap, np.int64)
    st_k = np.empty(cap, np.int64)

    top = 0
    st_v[0] = 0
    st_b[0] = mult[0]
    st_c[0] = 0
    st_k[0] = -1
    contour[0] = 0
    height[0] = 0

    i = 0
    next_white = 1
    next_black = 0
    depth = 0
    while top >= 0:
        if st_c[top] > 0:
            # descend into the next child of the open block
            st_c[top] -= 1
            slot = (p - 1) - st_c[top] - 1
            v = next_white
            next_white += 1
            step_black[i] = st_k[top]
            step_slot[i] = slot
            i += 1
            if slot == 0:
                depth += 2
            contour[i] = v
            height[i] = depth
            top += 1
            st_v[top] = v
            st_b[top] = mult[v]
            st_c[top] = 0
            st_k[top] = -1
        elif st_b[top] > 0:
            # open the next black child
            st_b[top] -= 1
            st_c[top] = p - 1
            st_k[top] = next_black
            next_black += 1
        else:
            top -= 1
            if top >= 0 and st_c[top] == 0:
                # the parent's open block is exhausted: close it
                step_black[i] = st_k[top]
                step_slot[i] = p - 1
                i += 1
                depth -= 2
                contour[i] = st_v[top]
                height[i] = depth
    return contour, height, step_black, step_slot


@njit(cache=True)
def corner_successors(corner_label, max_label):
    """Successor corner of every corner, searching cyclically forward.

    ``corner_label[i]`` is the label of corner i (i in 0..pn-1, labels >= 1
    with minimum exactly 1). Corners labeled 1 get -1 (they attach to the
    base vertex); otherwise the result is the first corner after i in cyclic
    order whose label is ``corner_label[i] - 1``.
    """
    pn = corner_label.shape[0]
    succ = np.full(pn, -1, np.int64)
    nxt = np.full(max_label + 1, -1, np.int64)
    # sweep the doubled index range right to left; nxt[v] holds the smallest
    # doubled position > current holding label v
    for k in range(2 * pn - 1, -1, -1):
        c = k % pn
        lab = corner_label[c]
        if k < pn and lab >= 2:
            t = nxt[lab - 1]
            succ[c] = t % pn
        nxt[lab] = k
    return succ


@njit(cache=True)
def orbit_ids(perm):
    """Label each index of a permutation with its orbit id.

    Returns (ids, count). Orbits are numbered by smallest contained index.
    """
    n = perm.shape[0]
    ids = np.full(n, -1, np.int64)
    count = 0
    for s in range(n):
        if ids[s] < 0:
            x = s
            while ids[x] < 0:
                ids[x] = count
                x = perm[x]
            count += 1
    return ids, count


@njit(cache=True)
def bfs_distances(indptr, indices, source, n_vertices):
    """Single-source unweighted distances over a CSR adjacency, -1 = unreached."""
    dist = np.full(n_vertices, -1, np.int64)
    queue = np.empty(n_vertices, np.int64)
    head = 0
    tail = 1
    queue[0] = source
    dist[source] = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for idx in range(indptr[u], indptr[u + 1]):
            w = indices[idx]
            if dist[w] < 0:
                dist[w] = du + 1
                queue[tail] = w
                tail += 1
    return dist
