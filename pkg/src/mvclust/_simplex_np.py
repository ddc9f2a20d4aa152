"""Pure numpy batched simplex projection.

Reference implementation of the compiled kernel in _simplex.pyx. The two are
kept operation-for-operation identical (same accumulation order, same
threshold rule) so that switching backends cannot change results even in the
last bit. The threshold rule scans the descending prefix and stops at the
first position that fails the positivity test; in exact arithmetic the
passing positions form a prefix, so this matches the textbook rule while
letting the compiled kernel stop popping its heap early.
"""

import numpy as np

BACKEND = "numpy"


def project_rows(v):
    """Project each row of a 2-d array onto the probability simplex.

    Sort-and-threshold: sort the row descending, take the longest prefix
    whose running mean keeps the last entry positive (first failure ends the
    prefix), subtract the resulting threshold and clip at zero. Output rows
    are nonnegative and sum to one up to rounding; entries clipped by the
    threshold are exact zeros.

    Parameters
    ----------
    v : (n, m) float64 array, m >= 1.

    Returns
    -------
    (n, m) float64 array, new storage.
    """
    v = np.ascontiguousarray(v, dtype=np.float64)
    n, m = v.shape
    u = np.sort(v, axis=1)[:, ::-1]
    cssv = np.cumsum(u, axis=1) - 1.0
    counts = np.arange(1, m + 1, dtype=np.float64)
    cond = (u - cssv / counts) > 0.0
    # position 0 passes in exact arithmetic; force it so rho is well defined
    cond[:, 0] = True
    # argmin finds the first False; all-True rows keep the whole row
    first_false = np.argmin(cond, axis=1)
    rho = np.where(cond.all(axis=1), m - 1, first_false - 1)
    theta = cssv[np.arange(n), rho] / (rho + 1.0)
    return np.maximum(v - theta[:, None], 0.0)
