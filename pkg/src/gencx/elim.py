"""Row reduction over the Gaussian rationals, on a plain integer encoding.

Entries are triples (a, b, d) of ints standing for (a + b*i)/d with d > 0 and
gcd(a, b, d) = 1.  The module holds the hot loop of every rank, nullspace and
solve call, so it sticks to tuples and ints; gencx._elim is a compiled twin
with the same interface, and gencx.linalg picks whichever is importable.
"""

from math import gcd

ZERO = (0, 0, 1)
ONE = (1, 0, 1)


def normalize(a, b, d):
    if a == 0 and b == 0:
        return ZERO
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        return (a // g, b // g, d // g)
    return (a, b, d)


def add(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return normalize(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


def sub(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return normalize(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


def mul(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    return normalize(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, d1 * d2)


def neg(x):
    a, b, d = x
    return (-a, -b, d)


def inv(x):
    a, b, d = x
    n = a * a + b * b
    if n == 0:
        raise ZeroDivisionError("inverse of zero")
    return normalize(d * a, -d * b, n)


def rref(matrix, ncols):
    """Reduced row echelon form with deterministic first-nonzero pivoting.

    matrix: list of rows, each a list of (a, b, d) triples.  Returns
    (rows, pivots) where rows is a new fully reduced matrix (zero rows
    dropped) and pivots the tuple of pivot column indices.
    """
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot_row = -1
        for r in range(rank, nrows):
            if rows[r][col] != ZERO:
                pivot_row = r
                break
        if pivot_row < 0:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        prow = rows[rank]
        scale = inv(prow[col])
        if scale != ONE:
            for c in range(col, ncols):
                if prow[c] != ZERO:
                    prow[c] = mul(prow[c], scale)
        prow[col] = ONE
        for r in range(nrows):
            if r == rank:
                continue
            factor = rows[r][col]
            if factor == ZERO:
                continue
            target = rows[r]
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
