"""Pure-Python elimination kernels over a prime field.

Twin of the compiled extension ``koszulity._kernels``: same functions, same
deterministic pivot rule, bit-identical results.  ``linalg`` picks one of the
two at import time.  Buffers are row-major flat sequences of residues in
``[0, p)``.
"""


def inv_mod(a, p):
    """Inverse of a mod p (p prime, a not divisible by p), via extended Euclid."""
    a %= p
    x, next_x = 0, 1
    g, next_g = p, a
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        g, next_g = next_g, g - q * next_g
    if g != 1:
        raise ZeroDivisionError(f"{a} is not invertible mod {p}")
    return x % p


def rref_inplace(data, nrows, ncols, p):
    """Reduce `data` (flat, nrows x ncols) to reduced row echelon form in place.

    Returns the pivot column list.  Pivot rule: columns left to right, first
    row (top to bottom) with a nonzero entry.
    """
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = -1
        for i in range(r, nrows):
            if data[i * ncols + c]:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            a, b = pivot_row * ncols, r * ncols
            for j in range(c, ncols):
                data[a + j], data[b + j] = data[b + j], data[a + j]
        base = r * ncols
        inv = inv_mod(data[base + c], p)
        if inv != 1:
            for j in range(c, ncols):
                data[base + j] = data[base + j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            f = data[i * ncols + c]
            if f:
                row = i * ncols
                for j in range(c, ncols):
                    data[row + j] = (data[row + j] - f * data[base + j]) % p
        pivots.append(c)
        r += 1
    return pivots


def matmul_mod(out, a, b, m, k, n, p):
    """out[m x n] = a[m x k] . b[k x n] mod p. `out` must be zero-filled."""
    for i in range(m):
        arow = i * k
        orow = i * n
        for t in range(k):
            f = a[arow + t]
            if f:
                brow = t * n
                for j in range(n):
                    if b[brow + j]:
                        out[orow + j] = (out[orow + j] + f * b[brow + j]) % p
