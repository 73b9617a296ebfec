"""Numpy implementations of the lattice kernels.

Import fallback for :mod:`foresight.kernels` when the compiled extension is
unavailable.  Both backends expose the same two functions with identical
semantics; ``tests/test_kernels.py`` holds them to that.
"""

import numpy as np


def superset_sum_inplace(values) -> None:
    """In-place sum-over-supersets (zeta) transform on a 2**n array.

    On return ``values[mask]`` holds the sum of the original entries over all
    supersets of ``mask``.  The array length must be a power of two.
    """
    values = np.asarray(values)
    size = values.shape[0]
    if size & (size - 1):
        raise ValueError(f"lattice size {size} is not a power of two")
    step = 1
    while step < size:
        # Axis layout (blocks, bit, step): the middle index is the bit at
        # weight `step`; clearing it (index 0) yields the subset side.
        view = values.reshape(-1, 2, step)
        view[:, 0, :] += view[:, 1, :]
        step <<= 1


def accumulate_membership(indices, offsets, weights, out) -> None:
    """Scatter-add each group's weight onto the positions it contains.

    ``indices`` is the concatenation of the member positions of k groups,
    ``offsets`` the k+1 group boundaries into it, and ``weights`` one value
    per group: ``out[i] += sum(weights[g] for g in groups containing i)``.
    """
    sizes = np.diff(offsets)
    per_member = np.repeat(weights, sizes)
    out += np.bincount(indices, weights=per_member, minlength=out.shape[0])
