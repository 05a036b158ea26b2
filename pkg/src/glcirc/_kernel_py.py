"""Vectorised numpy version of the countermodel scan.

Used when the compiled ``_kernel`` extension is not available.  Frames are
processed in chunks; inside a chunk every (frame, valuation) pair is evaluated at
once, worlds packed as bits of a ``uint32``.
"""

from __future__ import annotations

import numpy as np

CHUNK_CELLS = 1 << 20


def first_failure(prog, n, n_atoms, box_tbl, dia_tbl):
    """Scan frames in order, valuations in order; return the first ``(frame, valuation, world)``
    at which the program evaluates to false, or ``None``.

    ``prog`` is a postfix program of ``(op, arg)`` rows: 0 atom, 1 negated atom,
    2 top, 3 bottom, 4 and, 5 or, 6 box, 7 diamond.
    """
    full = np.uint32((1 << n) - 1)
    n_vals = 1 << (n * n_atoms)
    vals = np.arange(n_vals, dtype=np.uint64)
    atom_masks = [((vals >> np.uint64(k * n)) & np.uint64(full)).astype(np.uint32)
                  for k in range(n_atoms)]
    n_frames = box_tbl.shape[0]
    chunk = max(1, CHUNK_CELLS // n_vals)
    for start in range(0, n_frames, chunk):
        bt = box_tbl[start:start + chunk]
        dt = dia_tbl[start:start + chunk]
        rows = np.arange(bt.shape[0])[:, None]
        shape = (bt.shape[0], n_vals)
        stack = []
        for op, arg in prog:
            if op == 0:
                stack.append(np.broadcast_to(atom_masks[arg], shape))
            elif op == 1:
                stack.append(np.broadcast_to(~atom_masks[arg] & full, shape))
            elif op == 2:
                stack.append(np.full(shape, full, dtype=np.uint32))
            elif op == 3:
                stack.append(np.zeros(shape, dtype=np.uint32))
            elif op == 4:
                b = stack.pop()
                stack.append(stack.pop() & b)
            elif op == 5:
                b = stack.pop()
                stack.append(stack.pop() | b)
            elif op == 6:
                stack.append(bt[rows, stack.pop()])
            else:
                stack.append(dt[rows, stack.pop()])
        res = stack[0]
        bad = res != full
        if bad.any():
            flat = int(np.argmax(bad.ravel()))
            fi, v = divmod(flat, n_vals)
            word = int(res[fi, v])
            w = 0
            while (word >> w) & 1:
                w += 1
            return start + fi, v, w
    return None
