# cython: language_level=3
"""Compiled twin of gencx.elim: row reduction over the Gaussian rationals.

Same integer-triple encoding and the same deterministic pivoting, with typed
loop counters.  Arithmetic stays on Python ints so large numerators cannot
overflow.  This is the module gencx.linalg imports when the build produced it.
"""

from math import gcd

ZERO = (0, 0, 1)
ONE = (1, 0, 1)


cpdef tuple normalize(a, b, d):
    if a == 0 and b == 0:
        return ZERO
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        return (a // g, b // g, d // g)
    return (a, b, d)


cpdef tuple add(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return normalize(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


cpdef tuple sub(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return normalize(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


cpdef tuple mul(tuple x, tuple y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return normalize(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, d1 * d2)


cpdef tuple neg(tuple x):
    a, b, d = x
    return (-a, -b, d)


cpdef tuple inv(tuple x):
    a, b, d = x
    n = a * a + b * b
    if n == 0:
        raise ZeroDivisionError("inverse of zero")
    return normalize(d * a, -d * b, n)


def rref(matrix, Py_ssize_t ncols):
    """Reduced row echelon form; see gencx.elim.rref for the contract."""
    cdef list rows = [list(row) for row in matrix]
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, r, c, pivot_row
    cdef list prow, target
    pivots = []
    for col in range(ncols):
        pivot_row = -1
        for r in range(rank, nrows):
            if (<list>rows[r])[col] != ZERO:
                pivot_row = r
                break
        if pivot_row < 0:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        prow = <list>rows[rank]
        scale = inv(prow[col])
        if scale != ONE:
            for c in range(col, ncols):
                if prow[c] != ZERO:
                    prow[c] = mul(prow[c], scale)
        prow[col] = ONE
        for r in range(nrows):
            if r == rank:
                continue
            target = <list>rows[r]
            factor = target[col]
            if factor == ZERO:
                continue
            target[col] = ZERO
            for c in range(col + 1, ncols):
                e = prow[c]
                if e != ZERO:
                    target[c] = sub(target[c], mul(factor, e))
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rows[:rank], tuple(pivots)
