# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; mirrors `_pure` (same signatures, identical results)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def run_word(delta, out, initial, word):
    cdef const cnp.int32_t[:, ::1] d = np.ascontiguousarray(delta, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] o = np.ascontiguousarray(out, dtype=np.int32)
    cdef const cnp.int32_t[::1] w = np.ascontiguousarray(word, dtype=np.int32)
    res_arr = np.empty(w.shape[0], dtype=np.int32)
    cdef cnp.int32_t[::1] res = res_arr
    cdef Py_ssize_t k
    cdef int q = initial
    cdef int i
    for k in range(w.shape[0]):
        i = w[k]
        res[k] = o[q, i]
        q = d[q, i]
    return res_arr


def reached_state(delta, initial, word):
    cdef const cnp.int32_t[:, ::1] d = np.ascontiguousarray(delta, dtype=np.int32)
    cdef const cnp.int32_t[::1] w = np.ascontiguousarray(word, dtype=np.int32)
    cdef Py_ssize_t k
    cdef int q = initial
    for k in range(w.shape[0]):
        q = d[q, w[k]]
    return q


def product_counterexample(delta1, out1, init1, delta2, out2, init2):
    cdef const cnp.int32_t[:, ::1] d1 = np.ascontiguousarray(delta1, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] o1 = np.ascontiguousarray(out1, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] d2 = np.ascontiguousarray(delta2, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] o2 = np.ascontiguousarray(out2, dtype=np.int32)
    cdef int n1 = d1.shape[0]
    cdef int n2 = d2.shape[0]
    cdef int n_inputs = d1.shape[1]
    cdef long total = <long> n1 * n2

    parent_arr = np.full(total, -2, dtype=np.int64)
    pinput_arr = np.empty(total, dtype=np.int32)
    queue_arr = np.empty(total, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = parent_arr
    cdef cnp.int32_t[::1] pinput = pinput_arr
    cdef cnp.int64_t[::1] queue = queue_arr

    cdef long start = <long> init1 * n2 + init2
    parent[start] = -1
    queue[0] = start
    cdef long head = 0, tail = 1
    cdef long pair, nxt, hit = -1
    cdef int q1, q2, i, last = -1
    while head < tail:
        pair = queue[head]
        head += 1
        q1 = <int> (pair // n2)
        q2 = <int> (pair % n2)
        for i in range(n_inputs):
            if o1[q1, i] != o2[q2, i]:
                hit = pair
                last = i
                break
            nxt = <long> d1[q1, i] * n2 + d2[q2, i]
            if parent[nxt] == -2:
                parent[nxt] = pair
                pinput[nxt] = i
                queue[tail] = nxt
                tail += 1
        if hit >= 0:
            break
    if hit < 0:
        return None

    cdef int depth = 1
    pair = hit
    while parent[pair] >= 0:
        depth += 1
        pair = parent[pair]
    path_arr = np.empty(depth, dtype=np.int32)
    cdef cnp.int32_t[::1] path = path_arr
    path[depth - 1] = last
    cdef long k = depth - 2
    pair = hit
    while parent[pair] >= 0:
        path[k] = pinput[pair]
        k -= 1
        pair = parent[pair]
    return path_arr


def refine_partition(delta, out):
    cdef const cnp.int32_t[:, ::1] d = np.ascontiguousarray(delta, dtype=np.int32)
    cdef const cnp.int32_t[:, ::1] o = np.ascontiguousarray(out, dtype=np.int32)
    cdef int n = d.shape[0]
    cdef int n_inputs = d.shape[1]

    sig_arr = np.empty((n, 2 * n_inputs), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] sig = sig_arr
    cdef int q, i
    for q in range(n):
        for i in range(n_inputs):
            sig[q, i] = o[q, i]

    blocks_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.int32_t[::1] blocks = blocks_arr
    cdef cnp.int32_t[::1] new_blocks
    cdef int rounds = 0
    cdef int changed, idx
    cdef dict seen
    cdef bytes key
    row_bytes = 2 * n_inputs * 4
    while True:
        for q in range(n):
            for i in range(n_inputs):
                sig[q, n_inputs + i] = blocks[d[q, i]]
        # block ids by first occurrence keep labels canonical
        seen = {}
        new_arr = np.empty(n, dtype=np.int32)
        new_blocks = new_arr
        base = sig_arr.tobytes()
        for q in range(n):
            key = base[q * row_bytes:(q + 1) * row_bytes]
            idx = seen.setdefault(key, len(seen))
            new_blocks[q] = idx
        changed = 0
        for q in range(n):
            if new_blocks[q] != blocks[q]:
                changed = 1
                break
        if not changed:
            return blocks_arr, rounds
        blocks_arr = new_arr
        blocks = new_blocks
        rounds += 1
