"""Pure-Python kernels: word replay, product-machine search, partition refinement.

Reference implementations of the hot loops.  The Cython module `_core`
mirrors these signatures exactly; both backends must produce identical
results (same counterexamples, same block numbering), which the test suite
checks differentially.

Conventions shared by both backends:

* `delta` and `out` are (n_states, n_inputs) int32 arrays.
* Words are int32 arrays of input indices; outputs are int32 arrays of
  output indices.
* All tie-breaks follow ascending state/input index order, which makes
  every result deterministic.
"""

from __future__ import annotations

from collections import deque

import numpy as np

BACKEND_NAME = "pure-python"


def run_word(delta, out, initial, word):
    """Outputs of the machine on `word`, starting from state `initial`."""
    d = delta.tolist()
    o = out.tolist()
    q = int(initial)
    res = np.empty(len(word), dtype=np.int32)
    for k, i in enumerate(word.tolist()):
        res[k] = o[q][i]
        q = d[q][i]
    return res


def reached_state(delta, initial, word):
    """State reached after replaying `word` from `initial`."""
    d = delta.tolist()
    q = int(initial)
    for i in word.tolist():
        q = d[q][i]
    return q


def product_counterexample(delta1, out1, init1, delta2, out2, init2):
    """Shortest input word on which the two machines' outputs differ.

    Breadth-first search over the product machine, expanding inputs in index
    order, so the result is the lexicographically least among the shortest
    distinguishing words.  Returns None when the machines are
    trace-equivalent.
    """
    d1, o1 = delta1.tolist(), out1.tolist()
    d2, o2 = delta2.tolist(), out2.tolist()
    n2 = len(d2)
    n_inputs = len(d1[0]) if d1 else 0

    start = init1 * n2 + init2
    parent = {start: (-1, -1)}
    queue = deque([start])
    hit = -1
    while queue:
        pair = queue.popleft()
        q1, q2 = divmod(pair, n2)
        row1d, row1o = d1[q1], o1[q1]
        row2d, row2o = d2[q2], o2[q2]
        for i in range(n_inputs):
            if row1o[i] != row2o[i]:
                hit = pair
                last = i
                break
            nxt = row1d[i] * n2 + row2d[i]
            if nxt not in parent:
                parent[nxt] = (pair, i)
                queue.append(nxt)
        if hit >= 0:
            break
    if hit < 0:
        return None

    path = [last]
    pair = hit
    while True:
        prev, i = parent[pair]
        if prev < 0:
            break
        path.append(i)
        pair = prev
    path.reverse()
    return np.array(path, dtype=np.int32)


def refine_partition(delta, out):
    """Coarsest output-respecting bisimulation of the machine's states.

    Moore-style refinement: start from the single-block partition and split
    by (output row, successor-block row) until stable.  Returns
    ``(blocks, rounds)`` where ``blocks[q]`` is the block id of state ``q``
    (numbered by first occurrence in state order) and ``rounds`` is the
    number of splitting rounds applied before stabilising.  For a machine
    whose states are pairwise distinguishable, states q, q' in different
    blocks after round k are distinguished by some word of length <= k, and
    ``rounds`` is the least k making all blocks singletons.
    """
    d = delta.tolist()
    o = out.tolist()
    n = len(d)
    blocks = [0] * n
    rounds = 0
    while True:
        signature = {}
        new_blocks = [0] * n
        for q in range(n):
            sig = (tuple(o[q]), tuple(blocks[t] for t in d[q]))
            idx = signature.setdefault(sig, len(signature))
            new_blocks[q] = idx
        if new_blocks == blocks:
            return np.array(blocks, dtype=np.int32), rounds
        blocks = new_blocks
        rounds += 1
