# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled lattice kernels; numpy twins live in _kernels_py."""


def superset_sum_inplace(double[::1] values):
    """In-place sum-over-supersets (zeta) transform on a 2**n array."""
    cdef Py_ssize_t size = values.shape[0]
    cdef Py_ssize_t step = 1, base, lo
    if size & (size - 1):
        raise ValueError(f"lattice size {size} is not a power of two")
    while step < size:
        base = 0
        while base < size:
            for lo in range(base, base + step):
                values[lo] += values[lo + step]
            base += step << 1
        step <<= 1


def accumulate_membership(long long[::1] indices, long long[::1] offsets,
                          double[::1] weights, double[::1] out):
    """Scatter-add each group's weight onto the positions it contains."""
    cdef Py_ssize_t k, t
    cdef double w
    for k in range(offsets.shape[0] - 1):
        w = weights[k]
        for t in range(offsets[k], offsets[k + 1]):
            out[indices[t]] += w
