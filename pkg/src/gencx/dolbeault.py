"""Exact generalized Dolbeault cohomology on invariant coframe models.

A pure spinor rho with annihilator L splits the complexified invariant
forms into levels U^i spanned by (conj L)-actions on rho, i running from
-n to n.  On an integrable structure the exterior derivative splits into
a piece lowering the level (dbar) and a piece raising it (del), and the
cohomology of dbar is a finite exact linear-algebra problem over Q(i).
"""

import itertools
import math

from . import geometry, linalg


class UDecomposition:
    """Bases of the levels U^i, plus the shared coordinate keys."""

    __slots__ = ("model", "rho", "top", "bases", "keys")

    def __init__(self, model, rho, top, bases, keys):
        self.model = model
        self.rho = rho
        self.top = top
        self.bases = bases
        self.keys = keys

    def dim(self, i):
        return len(self.bases.get(i, ()))

    def levels(self):
        return sorted(self.bases)

    def total_dim(self):
        return sum(len(b) for b in self.bases.values())

    def dims(self):
        return {i: len(self.bases[i]) for i in self.bases}


def ui_decomposition(model, rho):
    """Split the invariant forms into U^i = (conj L)^(n-i) . rho.

    Levels are spanned by iterated spinor actions of the conjugate
    annihilator on rho; purity of rho is exactly the statement that the
    level dimensions are binomial and sum to 2^(2n).
    """
    if not model.invariant:
        raise ValueError(
            "U-grading needs an invariant model; chart models have no"
            " constant-coefficient form algebra"
        )
    d = model.rank
    if d % 2:
        raise ValueError("model rank must be even for a U-grading")
    n = d // 2
    lbar = [u.conj() for u in geometry.annihilator(rho)]
    bases = {n: [rho]}
    for k in range(1, d + 1):
        produced = []
        for combo in itertools.combinations(range(d), k):
            f = rho
            for idx in reversed(combo):
                f = geometry.spinor_action(lbar[idx], f)
            if f:
                produced.append(f)
        keys = linalg.coordinate_keys(produced)
        vecs = [linalg.form_to_vector(f, keys) for f in produced]
        chosen = linalg.extend_basis([], vecs)
        if len(chosen) != math.comb(d, k):
            raise ValueError("rho is not pure on this model")
        bases[n - k] = [produced[j] for j in chosen]
    everything = [f for i in sorted(bases) for f in bases[i]]
    keys = linalg.coordinate_keys(everything)
    vectors = [linalg.form_to_vector(f, keys) for f in everything]
    if linalg.rank(vectors) != 2**d or 2**d != len(everything):
        raise ValueError("rho is not pure on this model")
    return UDecomposition(model, rho, n, bases, keys)


def split_d(model, ud):
    """Matrices of del (level-raising) and dbar (level-lowering) per level.

    Returns (del_ops, dbar_ops): del_ops[i] maps U^i to U^{i+1} and
    dbar_ops[i] maps U^i to U^{i-1}, with columns over the U^i basis.
    Raises when d carries some basis form outside U^{i+1} + U^{i-1}.
    """
    del_ops = {}
    dbar_ops = {}
    cache = {i: [f.d() for f in ud.bases[i]] for i in ud.bases}
    for i in ud.levels():
        basis = ud.bases[i]
        up = ud.bases.get(i + 1, [])
        down = ud.bases.get(i - 1, [])
        keys = linalg.coordinate_keys(up + down + cache[i])
        cols = [linalg.form_to_vector(f, keys) for f in up + down]
        matrix = [[col[r] for col in cols] for r in range(len(keys))]
        del_cols = []
        dbar_cols = []
        for db in cache[i]:
            rhs = linalg.form_to_vector(db, keys)
            sol = linalg.solve(matrix, rhs, len(cols))
            if sol is None:
                raise ValueError(
                    "d does not respect U-grading: structure not integrable"
                    " on invariant complex"
                )
            del_cols.append(sol[: len(up)])
            dbar_cols.append(sol[len(up) :])
        del_ops[i] = [[c[r] for c in del_cols] for r in range(len(up))]
        dbar_ops[i] = [[c[r] for c in dbar_cols] for r in range(len(down))]
    return del_ops, dbar_ops


class CohomologyTable:
    """dims[i] = dim GH^i, with the decomposition and operators kept around."""

    __slots__ = ("model", "rho", "dims", "decomposition", "del_ops", "dbar_ops")

    def __init__(self, model, rho, dims, decomposition, del_ops, dbar_ops):
        self.model = model
        self.rho = rho
        self.dims = dims
        self.decomposition = decomposition
        self.del_ops = del_ops
        self.dbar_ops = dbar_ops

    def total(self):
        return sum(self.dims.values())

    def euler(self):
        return sum((-1) ** (self.decomposition.top - i) * v for i, v in self.dims.items())

    def __str__(self):
        levels = sorted(self.dims, reverse=True)
        width = max(len(str(i)) for i in levels)
        lines = ["level  dim"]
        for i in levels:
            lines.append("%*d  %4d" % (width + 4, i, self.dims[i]))
        return "\n".join(lines)


def gh_cohomology(model, rho):
    """Generalized Dolbeault table: GH^i = ker(dbar on U^i) / im(dbar from U^{i+1})."""
    ud = ui_decomposition(model, rho)
    del_ops, dbar_ops = split_d(model, ud)
    dims = {}
    for i in ud.levels():
        out_rank = linalg.rank(dbar_ops[i]) if dbar_ops[i] else 0
        into = dbar_ops.get(i + 1, [])
        in_rank = linalg.rank(into) if into else 0
        dims[i] = ud.dim(i) - out_rank - in_rank
        if dims[i] < 0:
            raise AssertionError("rank bookkeeping produced a negative dimension")
    return CohomologyTable(model, rho, dims, ud, del_ops, dbar_ops)


def compare_b_transform(model, rho, B):
    """True when the GH table is unchanged by the shear e^B with dB = 0."""
    base = gh_cohomology(model, rho)
    sheared = gh_cohomology(model, geometry.b_transform(rho, B))
    return base.dims == sheared.dims
