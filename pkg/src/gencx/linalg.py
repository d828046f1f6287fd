"""Exact linear algebra over the Gaussian rationals.

Matrices at this level are lists of rows of GaussRational.  The row-reduction
work is delegated to a kernel module on a plain integer encoding: the compiled
gencx._elim when available, else the pure-Python gencx.elim.  Set GENCX_PURE=1
to force the pure kernel (the benchmark and the parity test use this).
"""

import os
from fractions import Fraction

from .coeffs import CoeffFn
from .scalars import GaussRational, ZERO as G_ZERO

if os.environ.get("GENCX_PURE"):
    from . import elim as _kernel
else:
    try:
        from . import _elim as _kernel
    except ImportError:
        from . import elim as _kernel


def kernel_name():
    return "compiled" if _kernel.__name__.endswith("_elim") else "pure"


def to_triple(g):
    re, im = g.re, g.im
    d = re.denominator * im.denominator // _gcd(re.denominator, im.denominator)
    return _kernel.normalize(
        re.numerator * (d // re.denominator),
        im.numerator * (d // im.denominator),
        d,
    )


def from_triple(t):
    a, b, d = t
    return GaussRational(Fraction(a, d), Fraction(b, d))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _encode(matrix):
    return [[to_triple(x) for x in row] for row in matrix]


def rref(matrix, ncols=None):
    """(reduced rows, pivot columns) of a GaussRational matrix."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows, pivots = _kernel.rref(_encode(matrix), ncols)
    return [[from_triple(x) for x in row] for row in rows], pivots


def rank(matrix):
    if not matrix:
        return 0
    _, pivots = _kernel.rref(_encode(matrix), len(matrix[0]))
    return len(pivots)


def nullspace(matrix, ncols):
    """Basis of the right kernel, one vector per free column."""
    if not matrix:
        return [_unit(ncols, j) for j in range(ncols)]
    rows, pivots = rref(matrix, ncols)
    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        vec = [G_ZERO] * ncols
        vec[j] = GaussRational(1)
        for r, c in enumerate(pivots):
            vec[c] = -rows[r][j]
        basis.append(vec)
    return basis


def _unit(n, j):
    vec = [G_ZERO] * n
    vec[j] = GaussRational(1)
    return vec


def solve(matrix, rhs, ncols=None):
    """One solution of matrix @ x = rhs, or None when inconsistent."""
    if not matrix:
        return None if any(rhs) else [G_ZERO] * (ncols or 0)
    if ncols is None:
        ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [G_ZERO] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][ncols]
    return x

def inverse(matrix):
    """Inverse of a square GaussRational matrix (raises on singular)."""
    n = len(matrix)
    one = GaussRational(1)
    aug = [list(row) + [one if i == j else G_ZERO for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref(aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows]


def matmul(a, b):
    """Product of two GaussRational matrices (lists of rows)."""
    if not a or not b:
        return []
    n = len(b)
    m = len(b[0]) if b[0] else 0
    out = []
    for row in a:
        acc = [G_ZERO] * m
        for k in range(n):
            x = row[k]
            if not x:
                continue
            brow = b[k]
            for j in range(m):
                if brow[j]:
                    acc[j] = acc[j] + x * brow[j]
        out.append(acc)
    return out


def row_basis(matrix):
    """Canonical basis (reduced rows) of the row span."""
    if not matrix:
        return []
    rows, _ = rref(matrix, len(matrix[0]))
    return rows


def in_span(rows, vec):
    if not any(x for x in vec):
        return True
    if not rows:
        return False
    return rank(list(rows)) == rank(list(rows) + [list(vec)])


def extend_basis(inside, candidates):
    """Indices of candidates that extend the span of `inside` to the span of
    both, picked greedily in order (representative choice is deterministic)."""
    current = [list(r) for r in inside]
    chosen = []
    r = rank(current) if current else 0
    for idx, cand in enumerate(candidates):
        trial = current + [list(cand)]
        r2 = rank(trial)
        if r2 > r:
            chosen.append(idx)
            current = trial
            r = r2
    return chosen


# ---- bridging forms to coordinate vectors ----------------------------------


def coordinate_keys(forms):
    """Sorted union of (generator subset, monomial key) coordinates."""
    keys = set()
    for f in forms:
        for subset, c in f.terms.items():
            for mono in c.terms:
                keys.add((subset, mono))
    return sorted(keys)


def form_to_vector(form, keys):
    vec = []
    for subset, mono in keys:
        c = form.terms.get(subset)
        vec.append(c.terms.get(mono, G_ZERO) if c is not None else G_ZERO)
    return vec


def forms_to_matrix(forms, keys=None):
    if keys is None:
        keys = coordinate_keys(forms)
    return [form_to_vector(f, keys) for f in forms], keys


def vector_to_form(model, keys, vec):
    from .model import Form

    buckets = {}
    for (subset, mono), x in zip(keys, vec):
        if not x:
            continue
        buckets.setdefault(subset, {})[mono] = x
    terms = {s: CoeffFn(model.table, d) for s, d in buckets.items()}
    return Form(model, terms)


def linear_combination(model, keys, coeff_vec, basis_matrix):
    """Form with coordinates coeff_vec @ basis_matrix."""
    n = len(keys)
    acc = [G_ZERO] * n
    for c, row in zip(coeff_vec, basis_matrix):
        if not c:
            continue
        for j in range(n):
            if row[j]:
                acc[j] = acc[j] + c * row[j]
    return vector_to_form(model, keys, acc)
