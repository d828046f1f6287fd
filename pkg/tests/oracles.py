"""Independent reference computations used to cross-check engine output.

Everything here walks a different code path than the package: its own wedge
bookkeeping, its own Gaussian elimination over pairs of Fractions, and
closed-form dimension counts.  Slow and simple on purpose.
"""

import itertools
import math
from fractions import Fraction

CZERO = (Fraction(0), Fraction(0))


def cadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def cinv(x):
    n = x[0] * x[0] + x[1] * x[1]
    return (x[0] / n, -x[1] / n)


def crank(rows):
    """Rank of a matrix of (re, im) Fraction pairs, by plain elimination."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != CZERO:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = cinv(rows[rank][col])
        rows[rank] = [cmul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != CZERO:
                f = rows[r][col]
                rows[r] = [
                    cadd(a, cmul((-f[0], -f[1]), b))
                    for a, b in zip(rows[r], rows[rank])
                ]
        rank += 1
    return rank


def sign_sort(seq):
    """(sign, sorted tuple); sign 0 when an index repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def cochain_betti(rank, struct):
    """Betti numbers of the constant-coefficient complex on `rank` degree-one
    generators with d(e_k) = sum struct[k][(a, b)] e_a ^ e_b, a < b.

    Coefficients are (re, im) Fraction pairs.  Returns [b_0, ..., b_rank].
    """
    combos = {
        m: list(itertools.combinations(range(rank), m)) for m in range(rank + 2)
    }
    matrices = {}
    for m in range(rank + 1):
        index = {c: i for i, c in enumerate(combos[m + 1])}
        matrix = [[CZERO] * len(combos[m]) for _ in combos[m + 1]]
        for col, subset in enumerate(combos[m]):
            for j, k in enumerate(subset):
                rest = subset[:j] + subset[j + 1 :]
                pre = Fraction(-1 if j % 2 else 1)
                for (a, b), coeff in struct.get(k, {}).items():
                    sign, key = sign_sort(rest + (a, b))
                    if sign == 0:
                        continue
                    # move d(e_k) = e_a ^ e_b past the j generators before it,
                    # then sort the resulting word
                    row = index[key]
                    c = cmul((pre * sign, Fraction(0)), coeff)
                    matrix[row][col] = cadd(matrix[row][col], c)
        matrices[m] = matrix
    ranks = {m: crank(matrices[m]) for m in range(rank + 1)}
    betti = []
    for m in range(rank + 1):
        betti.append(len(combos[m]) - ranks[m] - (ranks[m - 1] if m else 0))
    return betti


def struct_of_model(model):
    """Extract d(e_k) constant structure data from an invariant model."""
    struct = {}
    for k, gen in enumerate(model.generators):
        if not gen.diff:
            continue
        entries = {}
        for subset, c in gen.diff.terms.items():
            v = c.constant_value()
            entries[subset] = (v.re, v.im)
        struct[k] = entries
    return struct


def torus_betti(m):
    return [math.comb(m, j) for j in range(m + 1)]


def complex_torus_gh(n):
    """GH^k of the complex-structure torus of real dimension 2n: the Dolbeault
    diagonals sum_{p-q=k} C(n,p) C(n,q), which collapse to C(2n, n+k)."""
    table = {}
    for k in range(-n, n + 1):
        total = 0
        for p in range(n + 1):
            q = p - k
            if 0 <= q <= n:
                total += math.comb(n, p) * math.comb(n, q)
        table[k] = total
    return table


def convolve(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if x and y:
                out[i + j] = out.get(i + j, 0) + x * y
    return out
