# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels over a prime field.

Twin of ``koszulity._kernels_py``; the prime must stay below 2**31 so that
products of reduced residues fit in a C long long.
"""


cdef long long _inv_mod_c(long long a, long long p) except -1:
    cdef long long x = 0, next_x = 1, g = p, next_g = a % p, q, t
    while next_g:
        q = g / next_g
        t = next_x
        next_x = x - q * next_x
        x = t
        t = next_g
        next_g = g - q * next_g
        g = t
    if g != 1:
        raise ZeroDivisionError(f"{a} is not invertible mod {p}")
    x %= p
    if x < 0:
        x += p
    return x


def inv_mod(a, p):
    """Inverse of a mod p (p prime, a not divisible by p)."""
    return _inv_mod_c(a % p, p)


def rref_inplace(long long[::1] data, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    """Reduce `data` (flat, nrows x ncols) to reduced row echelon form in place.

    Returns the pivot column list.  Pivot rule: columns left to right, first
    row (top to bottom) with a nonzero entry.
    """
    pivots = []
    cdef Py_ssize_t r = 0, c, i, j, pivot_row, base, row, arow
    cdef long long inv, f, tmp
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = -1
        for i in range(r, nrows):
            if data[i * ncols + c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            arow = pivot_row * ncols
            base = r * ncols
            for j in range(c, ncols):
                tmp = data[arow + j]
                data[arow + j] = data[base + j]
                data[base + j] = tmp
        base = r * ncols
        inv = _inv_mod_c(data[base + c], p)
        if inv != 1:
            for j in range(c, ncols):
                data[base + j] = data[base + j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            f = data[i * ncols + c]
            if f != 0:
                row = i * ncols
                for j in range(c, ncols):
                    tmp = (data[row + j] - f * data[base + j]) % p
                    if tmp < 0:
                        tmp += p
                    data[row + j] = tmp
        pivots.append(c)
        r += 1
    return pivots


def matmul_mod(long long[::1] out, long long[::1] a, long long[::1] b,
               Py_ssize_t m, Py_ssize_t k, Py_ssize_t n, long long p):
    """out[m x n] = a[m x k] . b[k x n] mod p. `out` must be zero-filled."""
    cdef Py_ssize_t i, t, j, arow, orow, brow
    cdef long long f
    for i in range(m):
        arow = i * k
        orow = i * n
        for t in range(k):
            f = a[arow + t]
            if f != 0:
                brow = t * n
                for j in range(n):
                    if b[brow + j] != 0:
                        out[orow + j] = (out[orow + j] + f * b[brow + j]) % p
