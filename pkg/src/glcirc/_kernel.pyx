# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled countermodel scan.  Same contract as ``_kernel_py.first_failure``.

Each opcode is applied to a block of valuations at once; the stack holds one
block-sized row per slot.
"""

from libc.stdint cimport int32_t, uint32_t, uint64_t
from libc.stdlib cimport free, malloc

cdef enum:
    BLOCK = 2048


def first_failure(const int32_t[:, ::1] prog, int n, int n_atoms,
                  const uint32_t[:, ::1] box_tbl, const uint32_t[:, ::1] dia_tbl):
    cdef Py_ssize_t n_frames = box_tbl.shape[0]
    cdef Py_ssize_t m = prog.shape[0]
    cdef uint32_t full = (<uint32_t>1 << n) - 1
    cdef uint64_t n_vals = (<uint64_t>1) << (n * n_atoms)
    cdef uint64_t base
    cdef Py_ssize_t fi, i, j, sp, cnt
    cdef int32_t op, arg
    cdef uint32_t *top
    cdef uint32_t *below
    cdef const uint32_t *tbl
    cdef uint32_t res
    cdef int w
    cdef uint32_t *stack = <uint32_t *> malloc((m + 1) * BLOCK * sizeof(uint32_t))
    if stack == NULL:
        raise MemoryError()
    try:
        for fi in range(n_frames):
            base = 0
            while base < n_vals:
                cnt = BLOCK if n_vals - base > BLOCK else <Py_ssize_t>(n_vals - base)
                sp = 0
                for i in range(m):
                    op = prog[i, 0]
                    arg = prog[i, 1]
                    top = stack + sp * BLOCK
                    if op == 0:
                        for j in range(cnt):
                            top[j] = <uint32_t>((base + j) >> (arg * n)) & full
                        sp += 1
                    elif op == 1:
                        for j in range(cnt):
                            top[j] = (~<uint32_t>((base + j) >> (arg * n))) & full
                        sp += 1
                    elif op == 2:
                        for j in range(cnt):
                            top[j] = full
                        sp += 1
                    elif op == 3:
                        for j in range(cnt):
                            top[j] = 0
                        sp += 1
                    elif op == 4 or op == 5:
                        sp -= 1
                        top = stack + sp * BLOCK
                        below = top - BLOCK
                        if op == 4:
                            for j in range(cnt):
                                below[j] &= top[j]
                        else:
                            for j in range(cnt):
                                below[j] |= top[j]
                    else:
                        top = stack + (sp - 1) * BLOCK
                        tbl = &box_tbl[fi, 0] if op == 6 else &dia_tbl[fi, 0]
                        for j in range(cnt):
                            top[j] = tbl[top[j]]
                for j in range(cnt):
                    res = stack[j]
                    if res != full:
                        w = 0
                        while (res >> w) & 1:
                            w += 1
                        return (fi, base + j, w)
                base += cnt
    finally:
        free(stack)
    return None
