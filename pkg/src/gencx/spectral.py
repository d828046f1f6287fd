"""Exact spectral sequence of a filtered invariant Lie-algebroid complex.

Filtering the constant-coefficient complex of L = annihilator(rho) by a
Courant-involutive subbundle S < L gives a bounded first-quadrant spectral
sequence.  Pages, differentials, and the limit are all finite linear-algebra
problems over Q(i), so every number reported here is exact.  A Kunneth
comparison for trivial products rides on top.
"""

import itertools

from . import corpus, dolbeault, geometry, linalg
from .bundles import lift_form
from .coeffs import CoeffFn
from .model import CoframeModel, VectorField
from .scalars import GaussRational, ZERO as G_ZERO


def _sorted_sign(seq):
    """(sign, ascending tuple) of an index sequence; sign 0 on repeats."""
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


def _coordinates_matrix(sections):
    """Columns = the 2R constant coordinates of each section."""
    cols = [u.coordinates() for u in sections]
    if not cols:
        return []
    return [[col[r] for col in cols] for r in range(len(cols[0]))]


class FilteredComplex:
    """The complex Lambda* L^* with its weight filtration by an adapted basis.

    Basis vectors of L are ordered complement-first, so the filtration level
    of a wedge subset is the number of indices below comp_rank.  D carries
    the Chevalley-Eilenberg structure constants of the Courant bracket; the
    anchor contributes nothing on constant coefficients.
    """

    __slots__ = (
        "model",
        "rho",
        "basis",
        "comp_rank",
        "sub_rank",
        "combos",
        "weights",
        "diff",
    )

    def __init__(self, model, rho, basis, comp_rank, sub_rank, combos, weights, diff):
        self.model = model
        self.rho = rho
        self.basis = basis
        self.comp_rank = comp_rank
        self.sub_rank = sub_rank
        self.combos = combos
        self.weights = weights
        self.diff = diff

    @property
    def rank(self):
        return self.comp_rank + self.sub_rank

    def degrees(self):
        return range(self.rank + 1)

    def dim(self, m):
        return len(self.combos.get(m, ()))

    def filtration(self, p, m):
        """Indices of the degree-m wedge basis lying in F^p."""
        if m not in self.combos:
            return []
        if p <= 0:
            return list(range(len(self.combos[m])))
        return [j for j, w in enumerate(self.weights[m]) if w >= p]


def fiber_null_space(bundle):
    """Sections X - i iota_X omega over the fiber directions of a bundle.

    These span the standard Courant-involutive subbundle of the annihilator
    of e^{i omega} ^ Omega used to filter the invariant complex.
    """
    model = bundle.total
    out = []
    for idx, gen in enumerate(model.generators):
        if gen.grade != "F":
            continue
        vec = VectorField(model, {idx: CoeffFn.constant(model.table, 1)})
        cov = bundle.omega.interior(vec) * GaussRational(0, -1)
        out.append(geometry.GenVector(vec, cov))
    return out


def _structure_constants(sections, coords_matrix):
    """c[a][b] = coordinates of [sections_a, sections_b] in the given basis."""
    d = len(sections)
    table = {}
    for a in range(d):
        for b in range(a + 1, d):
            br = geometry.courant_bracket(sections[a], sections[b])
            if not br.is_constant():
                raise ValueError(
                    "Courant bracket left the invariant sections; the"
                    " complex is only defined for constant structure data"
                )
            sol = linalg.solve(coords_matrix, br.coordinates(), d)
            if sol is None:
                raise ValueError(
                    "annihilator basis is not involutive; rho does not"
                    " define an integrable structure"
                )
            table[(a, b)] = sol
    return table


def build_filtration(model, rho, S_basis):
    """Filtered invariant complex of L = annihilator(rho) for a subbundle S.

    S_basis must consist of independent sections of L whose Courant brackets
    stay inside S.  The returned complex is filtered by the number of wedge
    factors dual to a complement of S in L, which the differential never
    decreases once S is a subalgebra.
    """
    L = geometry.annihilator(rho)
    d = len(L)
    Lmat = _coordinates_matrix(L)
    in_L = []
    for u in S_basis:
        if not u.is_constant():
            raise ValueError("S sections must have constant coordinates")
        sol = linalg.solve(Lmat, u.coordinates(), d)
        if sol is None:
            raise ValueError("S is not contained in L = annihilator(rho)")
        in_L.append(sol)
    if linalg.rank(in_L) != len(S_basis):
        raise ValueError("S_basis is linearly dependent")
    s = len(S_basis)
    Smat = _coordinates_matrix(S_basis) if S_basis else []
    for i in range(s):
        for j in range(i + 1, s):
            br = geometry.courant_bracket(S_basis[i], S_basis[j])
            if linalg.solve(Smat, br.coordinates(), s) is None:
                raise ValueError(
                    "S is not a subalgebra of L: witness pair (%d, %d)" % (i, j)
                )
    eye = [
        [GaussRational(1) if i == j else G_ZERO for i in range(d)] for j in range(d)
    ]
    comp_idx = linalg.extend_basis(in_L, eye)
    if len(comp_idx) + s != d:
        raise AssertionError("complement extension lost rank")
    basis = [L[j] for j in comp_idx] + list(S_basis)
    c = len(comp_idx)
    coords = _coordinates_matrix(basis)
    struct = _structure_constants(basis, coords)

    combos = {m: list(itertools.combinations(range(d), m)) for m in range(d + 1)}
    index = {m: {t: j for j, t in enumerate(combos[m])} for m in combos}
    weights = {m: [sum(1 for i in t if i < c) for t in combos[m]] for m in combos}
    diff = {}
    for m in range(d + 1):
        rows = len(combos.get(m + 1, ()))
        matrix = [[G_ZERO] * len(combos[m]) for _ in range(rows)]
        for col, subset in enumerate(combos[m]):
            for j, gen in enumerate(subset):
                rest = subset[:j] + subset[j + 1 :]
                slot_sign = -1 if j % 2 else 1
                for (a, b), coeffs in struct.items():
                    coeff = coeffs[gen]
                    if not coeff:
                        continue
                    sign, target = _sorted_sign(rest[:j] + (a, b) + rest[j:])
                    if sign == 0:
                        continue
                    row = index[m + 1][target]
                    matrix[row][col] = matrix[row][col] - coeff * (slot_sign * sign)
        diff[m] = matrix

    for m in range(d):
        square = linalg.matmul(diff.get(m + 1, []), diff[m])
        if any(any(row) for row in square):
            raise AssertionError("algebroid differential does not square to zero")
    for m in range(d + 1):
        for col, w in enumerate(weights[m]):
            for row, entry in enumerate(r[col] for r in diff[m]):
                if entry and weights[m + 1][row] < w:
                    raise AssertionError("differential drops the filtration level")
    return FilteredComplex(model, rho, basis, c, s, combos, weights, diff)


def _embed(vec, indices, dim):
    out = [G_ZERO] * dim
    for x, j in zip(vec, indices):
        out[j] = x
    return out


def _apply(matrix, vec):
    if not matrix:
        return []
    out = []
    for row in matrix:
        acc = G_ZERO
        for x, v in zip(row, vec):
            if x and v:
                acc = acc + x * v
        out.append(acc)
    return out


class PageReport:
    """Exact page dimensions, page differentials, and the limit."""

    __slots__ = (
        "pages",
        "differentials",
        "stabilization_index",
        "e_infinity",
        "total_cohomology",
    )

    def __init__(self, pages, differentials, stabilization_index, e_infinity, total):
        self.pages = pages
        self.differentials = differentials
        self.stabilization_index = stabilization_index
        self.e_infinity = e_infinity
        self.total_cohomology = total

    def page_total(self, r):
        return sum(self.pages[r].values())

    def grid(self, r):
        cells = self.pages[r]
        pmax = max((p for p, _ in cells), default=0)
        qmax = max((q for _, q in cells), default=0)
        lines = []
        for q in range(qmax, -1, -1):
            lines.append(
                "q=%d | " % q
                + "  ".join("%3d" % cells.get((p, q), 0) for p in range(pmax + 1))
            )
        lines.append("      " + "  ".join("p=%d" % p for p in range(pmax + 1)))
        return "\n".join(lines)


def pages(fc, r_max=None):
    """Run the spectral sequence of a FilteredComplex out to stabilization.

    Z_r^{p,q} is cut from F^p in degree p+q by the condition that D lands
    r levels deeper; pages are the usual subquotients and d_r is induced by
    D on chosen representatives, deterministically.  The report also carries
    E_infinity read off the filtration of H(total) and the comparison holds
    by construction (it is asserted, not assumed).
    """
    c, s, d = fc.comp_rank, fc.sub_rank, fc.rank
    if r_max is None:
        r_max = c + 2

    def z_space(p, r, m):
        """Basis of {v in F^p degree m : D v in F^{p+r}}, as ambient vectors."""
        if m < 0 or m > d:
            return []
        cols = fc.filtration(p, m)
        if not cols:
            return []
        dim_m = fc.dim(m)
        deeper = set(fc.filtration(p + r, m + 1))
        rows = [j for j in range(fc.dim(m + 1)) if j not in deeper]
        matrix = [[fc.diff[m][row][col] for col in cols] for row in rows]
        kern = linalg.nullspace(matrix, len(cols))
        return [_embed(v, cols, dim_m) for v in kern]

    grid = [(p, q) for p in range(c + 1) for q in range(s + 1)]
    page_dims = {}
    diffs = {}
    reps_store = {}
    denom_store = {}
    for r in range(r_max + 1):
        cells = {}
        reps_store.clear()
        denom_store.clear()
        for p, q in grid:
            m = p + q
            z_now = z_space(p, r, m)
            denom = z_space(p + 1, r - 1, m)
            below = z_space(p - r + 1, r - 1, m - 1) if m >= 1 else []
            mapped = [_apply(fc.diff[m - 1], v) for v in below]
            denom = denom + [v for v in mapped if any(v)]
            z_rank = linalg.rank(z_now) if z_now else 0
            den_rank = linalg.rank(denom) if denom else 0
            joint = linalg.rank(z_now + denom) if (z_now or denom) else 0
            if joint != z_rank:
                raise AssertionError("page denominator escapes the cycle space")
            cells[(p, q)] = z_rank - den_rank
            rep_idx = linalg.extend_basis(denom, z_now)
            reps_store[(p, q)] = [z_now[j] for j in rep_idx]
            denom_store[(p, q)] = denom
        page_dims[r] = cells
        dmats = {}
        for p, q in grid:
            src = reps_store[(p, q)]
            tp, tq = p + r, q - r + 1
            if (tp, tq) not in reps_store or not src or not reps_store[(tp, tq)]:
                continue
            treps = reps_store[(tp, tq)]
            tden = denom_store[(tp, tq)]
            m = p + q
            keys_dim = fc.dim(m + 1)
            matrix = [
                [col[row] for col in treps + tden] for row in range(keys_dim)
            ]
            cols_out = []
            for v in src:
                img = _apply(fc.diff[m], v)
                sol = linalg.solve(matrix, img, len(treps) + len(tden))
                if sol is None:
                    raise AssertionError("page differential left its target cell")
                cols_out.append(sol[: len(treps)])
            if any(any(col) for col in cols_out):
                dmats[(p, q)] = [
                    [col[row] for col in cols_out] for row in range(len(treps))
                ]
        diffs[r] = dmats

    total = {}
    e_inf = {}
    for m in range(d + 1):
        rank_out = linalg.rank(fc.diff[m]) if fc.diff[m] else 0
        prev = fc.diff.get(m - 1, [])
        rank_in = linalg.rank(prev) if prev else 0
        total[m] = fc.dim(m) - rank_out - rank_in
        boundaries = (
            [[row[j] for row in prev] for j in range(fc.dim(m - 1))] if prev else []
        )
        boundaries = [v for v in boundaries if any(v)]
        filt_dims = []
        for p in range(c + 2):
            cycles = z_space(p, d + 1, m)
            filt_dims.append(
                (linalg.rank(cycles + boundaries) if cycles or boundaries else 0)
                - (linalg.rank(boundaries) if boundaries else 0)
            )
        for p in range(c + 1):
            q = m - p
            if 0 <= q <= s:
                e_inf[(p, q)] = filt_dims[p] - filt_dims[p + 1]
    for m in range(d + 1):
        agg = sum(e_inf.get((p, m - p), 0) for p in range(c + 1))
        if agg != total[m]:
            raise AssertionError("E_infinity does not add up to H(total)")

    stab = r_max
    for r in range(r_max + 1):
        tail_zero = all(not diffs[rr] for rr in range(r, r_max + 1))
        if page_dims[r] == e_inf and tail_zero:
            stab = r
            break
    return PageReport(page_dims, diffs, stab, e_inf, total)


def _invariant_base_twin(bundle):
    base = bundle.base
    decls = [(g.name, g.grade, g.slot) for g in base.generators]
    return CoframeModel(base.name + "_inv", base.table, decls, invariant=True).finalize()


def e2_identification(bundle):
    """E_2 dims predicted by the base and fiber tables, for flat bundles.

    Returns {(p, q): dim} with the cell (p, q) holding the product of the
    base table at level n-p and the fiber table at level l-q; for a
    2l-torus fiber the latter is C(2l, q).
    """
    if any(bool(ch) for ch in bundle.curvature):
        raise ValueError(
            "E2 identification needs a flat bundle (zero curvature);"
            " nontrivial holonomy data is out of scope"
        )
    inv = _invariant_base_twin(bundle)
    hol = [g.name for g in inv.generators if g.grade == "H"]
    n = len(hol)
    base_table = dolbeault.gh_cohomology(inv, inv.monomial_form(tuple(hol))).dims
    l = bundle.l
    fiber = corpus.fiber_torus(l)
    omega = fiber.zero()
    for j in range(l):
        omega = omega + fiber.monomial_form(("dt%d" % (2 * j + 1), "dt%d" % (2 * j + 2)))
    rho_f = (omega * GaussRational(0, 1)).exp()
    fiber_table = dolbeault.gh_cohomology(fiber, rho_f).dims
    out = {}
    for p in range(2 * n + 1):
        for q in range(2 * l + 1):
            out[(p, q)] = base_table.get(n - p, 0) * fiber_table.get(l - q, 0)
    return out


class KunnethReport:
    """Degree-wise comparison of a product table against the convolution."""

    __slots__ = ("ok", "product", "convolution", "base", "fiber")

    def __init__(self, ok, product, convolution, base, fiber):
        self.ok = ok
        self.product = product
        self.convolution = convolution
        self.base = base
        self.fiber = fiber

    def __bool__(self):
        return self.ok


def kunneth_check(M_model, l):
    """Compare GH of M x T^{2l} with the convolution of the factor tables.

    M must be an invariant complex model (H/A generator pairs); the product
    carries the spinor e^{i omega_T} ^ Omega_M.  Both sides are computed
    independently: the left by running the product complex, the right from
    the factor tables alone.
    """
    hol = [g.name for g in M_model.generators if g.grade == "H"]
    n = len(hol)
    if not M_model.invariant or 2 * n != M_model.rank:
        raise ValueError("Kunneth comparison needs an invariant complex model")
    rho_m = M_model.monomial_form(tuple(hol))
    base_table = dolbeault.gh_cohomology(M_model, rho_m).dims

    fiber = corpus.fiber_torus(l)
    omega = fiber.zero()
    for j in range(l):
        omega = omega + fiber.monomial_form(("dt%d" % (2 * j + 1), "dt%d" % (2 * j + 2)))
    rho_f = (omega * GaussRational(0, 1)).exp()
    fiber_table = dolbeault.gh_cohomology(fiber, rho_f).dims

    product = corpus.invariant_product(M_model, fiber)
    rho_e = lift_form(rho_f, product) ^ lift_form(rho_m, product)
    product_table = dolbeault.gh_cohomology(product, rho_e).dims

    convolution = {}
    for sdeg in range(-(n + l), n + l + 1):
        convolution[sdeg] = sum(
            base_table.get(a, 0) * fiber_table.get(sdeg - a, 0)
            for a in range(-n, n + 1)
        )
    ok = all(
        product_table.get(k, 0) == convolution.get(k, 0)
        for k in set(product_table) | set(convolution)
    )
    return KunnethReport(ok, product_table, convolution, base_table, fiber_table)
