"""Pure numpy versions of the hot kernels in ``_kernels.pyx``.

Same signatures and results; summation order may differ in the last ulp.
"""

import numpy as np

BE, AND, OR = 0, 1, 2


def structure_table(kind, ptr, idx, var, n_vars):
    """Root value of the structure function for every mask in ``range(2**n_vars)``.

    Nodes are laid out children-first with the root last; bit ``var[i]`` of the
    mask is the state of basic event ``i``.
    """
    masks = np.arange(1 << n_vars, dtype=np.int64)
    values = []
    for i in range(len(kind)):
        if kind[i] == BE:
            values.append(((masks >> var[i]) & 1).astype(bool))
            continue
        children = [values[j] for j in idx[ptr[i]:ptr[i + 1]]]
        reduce = np.logical_and.reduce if kind[i] == AND else np.logical_or.reduce
        values.append(reduce(children) if len(children) > 1 else children[0].copy())
    return values[-1].astype(np.uint8)


def cutset_probability(table, probs):
    """Sum over masks with ``table[mask] == 1`` of the product-form probability.

    The weights of all masks are built by doubling: after variable ``v`` the
    array holds the first ``2**(v+1)`` masks.
    """
    weight = np.ones(1)
    for p in np.asarray(probs, dtype=float):
        weight = np.concatenate((weight * (1.0 - p), weight * p))
    return float(weight[np.asarray(table, dtype=bool)].sum())


def _apply(op, a, b):
    if op == 0:
        return np.add.outer(a, b)
    if op == 1:
        return np.subtract.outer(a, b)
    return np.multiply.outer(a, b)


def level_extremes(xv, xb, yv, yb, op, n_cuts):
    """Per-level min/max of ``op(x_i, y_j)`` over pairs with ``min(xb_i, yb_j) >= level``.

    Levels are admitted from the top down; at each step only pairs that involve
    a newly admitted point are evaluated, so every pair is visited exactly once.
    """
    xv, yv = np.asarray(xv, dtype=float), np.asarray(yv, dtype=float)
    xb, yb = np.asarray(xb), np.asarray(yb)
    lo = np.full(n_cuts, np.nan)
    hi = np.full(n_cuts, np.nan)
    run_lo, run_hi = np.inf, -np.inf
    x_old = np.empty(0)
    y_old = np.empty(0)
    for level in range(n_cuts, 0, -1):
        x_new = xv[xb == level]
        y_new = yv[yb == level]
        y_all = np.concatenate((y_old, y_new))
        for block in (_apply(op, x_new, y_all), _apply(op, x_old, y_new)):
            if block.size:
                run_lo = min(run_lo, block.min())
                run_hi = max(run_hi, block.max())
        x_old = np.concatenate((x_old, x_new))
        y_old = y_all
        if run_lo <= run_hi:
            lo[level - 1], hi[level - 1] = run_lo, run_hi
    return lo, hi
