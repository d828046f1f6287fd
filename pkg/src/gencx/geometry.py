"""The T + T* layer: pairing, Courant bracket, spinor action, Mukai pairing,
pure spinors, annihilators, integrability witnesses, B-transforms and the
pointwise endomorphism J.

Sections X + xi are GenVector pairs over one model.  Solving (annihilators,
witnesses, span membership) happens over constant coefficients for invariant
models and pointwise on charts; integrability witnesses additionally search a
degree-bounded monomial ansatz in the coefficient ring.
"""

from fractions import Fraction

from . import linalg
from .coeffs import CoeffFn
from .model import Form, VectorField
from .scalars import GaussRational, ZERO as G_ZERO, ONE as G_ONE, I as G_I


class GenVector:
    """Section X + xi of T + T* (xi a 1-form)."""

    __slots__ = ("vec", "cov")

    def __init__(self, vec, cov):
        if vec.model is not cov.model:
            raise ValueError("vector and covector parts over different models")
        if cov and cov.degrees() != [1]:
            raise ValueError("covector part must be a 1-form")
        self.vec = vec
        self.cov = cov

    @property
    def model(self):
        return self.vec.model

    def __add__(self, other):
        return GenVector(self.vec + other.vec, self.cov + other.cov)

    def __sub__(self, other):
        return GenVector(self.vec - other.vec, self.cov - other.cov)

    def __neg__(self):
        return GenVector(-self.vec, -self.cov)

    def __mul__(self, c):
        return GenVector(self.vec * c, self.cov * c)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.vec) or bool(self.cov)

    def __eq__(self, other):
        if not isinstance(other, GenVector):
            return NotImplemented
        return self.vec == other.vec and self.cov == other.cov

    def conj(self):
        return GenVector(self.vec.conj(), self.cov.conj())

    def is_constant(self):
        return all(c.is_constant() for c in self.vec.components.values()) and all(
            c.is_constant() for c in self.cov.terms.values()
        )

    def coordinates(self):
        """Constant coordinates over (frame vectors, then covectors)."""
        model = self.model
        out = []
        for i in range(model.rank):
            c = self.vec.components.get(i)
            out.append(c.constant_value() if c is not None else G_ZERO)
        for i in range(model.rank):
            c = self.cov.terms.get((i,))
            out.append(c.constant_value() if c is not None else G_ZERO)
        return out

    def __str__(self):
        bits = []
        if self.vec:
            bits.append(str(self.vec))
        if self.cov:
            bits.append(str(self.cov))
        return " + ".join(bits) if bits else "0"

    __repr__ = __str__


def gen_vector(model, coords):
    """GenVector from 2R constant coordinates (frame part, covector part)."""
    R = model.rank
    vec = VectorField(
        model, {i: CoeffFn.constant(model.table, coords[i]) for i in range(R) if coords[i]}
    )
    cov = model.zero()
    for i in range(R):
        c = coords[R + i]
        if c:
            cov = cov + model.one(model.generators[i].name, c)
    return GenVector(vec, cov)


def inner_pairing(u, v):
    """<X+xi, Y+eta> = (xi(Y) + eta(X)) / 2 as a CoeffFn."""
    if u.model is not v.model:
        raise ValueError("sections over different models")
    half = CoeffFn.constant(u.model.table, GaussRational(Fraction(1, 2)))
    return (v.vec.pair(u.cov) + u.vec.pair(v.cov)) * half


def courant_bracket(u, v):
    """[X+xi, Y+eta] = [X,Y] + L_X eta - L_Y xi - d(i_X eta - i_Y xi)/2."""
    if u.model is not v.model:
        raise ValueError("sections over different models")
    model = u.model
    X, xi = u.vec, u.cov
    Y, eta = v.vec, v.cov
    vec = X.bracket(Y)
    cov = eta.lie(X) - xi.lie(Y)
    mixed = model.fn(Y.pair(xi) * (-1) + X.pair(eta))
    cov = cov - mixed.d() * Fraction(1, 2)
    return GenVector(vec, cov)


def spinor_action(u, phi):
    """(X + xi) . phi = i_X phi + xi ^ phi."""
    return phi.interior(u.vec) + (u.cov ^ phi)


def mukai_pairing(s1, s2):
    """Top-degree part of alpha(s1) ^ s2."""
    if s1.model is not s2.model:
        raise ValueError("forms over different models")
    return (s1.alpha() ^ s2).top_component()


def b_shear(u, B):
    """e^B on sections: X + xi goes to X + xi - i_X B."""
    return GenVector(u.vec, u.cov - B.interior(u.vec))


# ---- sample grid -------------------------------------------------------------

_GRID_VALUES = [
    GaussRational(0),
    GaussRational(1),
    GaussRational(0, 1),
    GaussRational(1, 1),
    GaussRational(Fraction(1, 2)),
    GaussRational(0, Fraction(1, 2)),
    GaussRational(2),
    GaussRational(Fraction(1, 2), Fraction(-1, 2)),
    GaussRational(-1),
    GaussRational(0, -1),
    GaussRational(1, -1),
    GaussRational(Fraction(1, 3)),
    GaussRational(Fraction(-1, 2), Fraction(1, 3)),
    GaussRational(3),
    GaussRational(0, 2),
    GaussRational(Fraction(2, 3), Fraction(1, 5)),
]


def sample_grid(model, extra=()):
    """16 deterministic rational sample points (plus user points)."""
    points = []
    for m in range(16):
        pt = {}
        for j, name in enumerate(model.table.chart):
            pt[name] = _GRID_VALUES[(m + 5 * j) % 16]
        for j, name in enumerate(model.table.angle):
            pt[name] = (m + j) % 4  # quarter-turns
        points.append(pt)
    points.extend(extra)
    return points


# ---- GCS specifications ------------------------------------------------------


class GcsSpec:
    """Pure-spinor data rho = e^(B + i omega) ^ Omega."""

    __slots__ = ("model", "B", "omega", "Omega")

    def __init__(self, model, B=None, omega=None, Omega=None):
        self.model = model
        self.B = B if B is not None else model.zero()
        self.omega = omega if omega is not None else model.zero()
        self.Omega = Omega if Omega is not None else model.scalar(1)
        if self.B and not self.B.is_real():
            raise ValueError("B must be a real 2-form")
        if self.omega and not self.omega.is_real():
            raise ValueError("omega must be a real 2-form")
        for f, nm in ((self.B, "B"), (self.omega, "omega")):
            if f and f.degrees() != [2]:
                raise ValueError("%s must be homogeneous of degree 2" % nm)
        if not _decomposable(self.Omega):
            raise ValueError("Omega fails the decomposability check")

    def spinor(self):
        exponent = self.B + self.omega * G_I
        if exponent:
            return exponent.exp() ^ self.Omega
        return self.Omega


def _decomposable(Omega):
    """(i_X Omega) ^ Omega = 0 for every (k-1)-fold frame contraction."""
    if not Omega:
        return False
    degs = Omega.degrees()
    if len(degs) != 1:
        return False
    k = degs[0]
    if k <= 1:
        return True
    model = Omega.model
    from itertools import combinations

    for subset in combinations(range(model.rank), k - 1):
        contracted = Omega
        for idx in subset:
            contracted = contracted.interior(
                VectorField(model, {idx: CoeffFn.constant(model.table, 1)})
            )
        if contracted ^ Omega:
            return False
    return True


class NondegeneracyReport:
    __slots__ = ("ok", "mode", "witness", "value")

    def __init__(self, ok, mode, witness=None, value=None):
        self.ok = ok
        self.mode = mode  # "constant-volume" or "sampled"
        self.witness = witness  # failing point, if any
        self.value = value  # constant multiple for the symbolic certificate


def pure_spinor(spec, extra_points=()):
    """Expand the spinor and certify (rho, conj rho) != 0.

    Invariant models get the symbolic certificate (the pairing must be a
    nonzero constant times the volume form); chart models are sampled on the
    rational grid plus any extra points.
    """
    rho = spec.spinor()
    report = nondegeneracy(rho, extra_points=extra_points)
    if not report.ok:
        raise ValueError(
            "not a GCS: Mukai pairing vanishes (point %r)" % (report.witness,)
        )
    return rho, report


def nondegeneracy(rho, extra_points=()):
    model = rho.model
    pairing = mukai_pairing(rho, rho.conj())
    vol = model.volume_subset()
    coeff = pairing.terms.get(vol)
    if coeff is None:
        return NondegeneracyReport(False, "constant-volume", witness="everywhere")
    if coeff.is_constant():
        return NondegeneracyReport(True, "constant-volume", value=coeff.constant_value())
    for pt in sample_grid(model, extra_points):
        if not coeff.evaluate_exact(pt):
            return NondegeneracyReport(False, "sampled", witness=_point_str(pt))
    return NondegeneracyReport(True, "sampled")


def _point_str(pt):
    return {k: str(v) for k, v in sorted(pt.items())}


def type_at(rho, point=None):
    """Lowest nonzero homogeneous degree of rho at a point."""
    point = point or {}
    exact = _point_is_exact(point)
    for k in rho.degrees():
        part = rho.degree_part(k)
        if exact:
            if part.evaluate_exact(point):
                return k
        else:
            vals = part.evaluate(point)
            if any(abs(v) > 1e-12 for v in vals.values()):
                return k
    raise ValueError("not a spinor line at point %r" % (point,))


def _point_is_exact(point):
    return all(
        isinstance(v, (int, Fraction, GaussRational)) for v in point.values()
    )


# ---- annihilator and friends -------------------------------------------------


def _basis_sections(model):
    """The 2R coordinate sections of T + T*: frame vectors, then covectors."""
    out = []
    one = CoeffFn.constant(model.table, 1)
    for i in range(model.rank):
        out.append(GenVector(VectorField(model, {i: one}), model.zero()))
    for i in range(model.rank):
        out.append(
            GenVector(VectorField(model, {}), model.one(model.generators[i].name))
        )
    return out


def annihilator(rho, point=None):
    """Basis of L = {u : u . rho = 0} by exact linear solve.

    Needs constant coefficients: either an invariant-model spinor or a chart
    spinor evaluated at a point (pass the point).
    """
    model = rho.model
    if point is not None:
        rho = _evaluate_form(rho, point)
    if any(not c.is_constant() for c in rho.terms.values()):
        raise ValueError(
            "annihilator needs constant coefficients; evaluate at a point first"
        )
    sections = _basis_sections(model)
    actions = [spinor_action(u, rho) for u in sections]
    keys = linalg.coordinate_keys(actions)
    # columns indexed by section, rows by coordinate: solve for null combos
    cols = [linalg.form_to_vector(a, keys) for a in actions]
    matrix = [[cols[j][r] for j in range(len(cols))] for r in range(len(keys))]
    null = linalg.nullspace(matrix, len(sections))
    basis = [gen_vector(model, vec) for vec in null]
    R = model.rank
    if len(basis) != R:
        raise ValueError(
            "not maximal isotropic / not a pure spinor (kernel rank %d, want %d)"
            % (len(basis), R)
        )
    for i, u in enumerate(basis):
        for v in basis[i:]:
            if inner_pairing(u, v):
                raise ValueError("annihilator is not isotropic")
    combined = [u.coordinates() for u in basis]
    combined += [u.conj().coordinates() for u in basis]
    if linalg.rank(combined) != 2 * R:
        raise ValueError("L meets conj(L): spinor line is degenerate")
    return basis


def _evaluate_form(rho, point):
    model = rho.model
    terms = {}
    for subset, c in rho.terms.items():
        v = c.evaluate_exact(point)
        if v:
            terms[subset] = CoeffFn.constant(model.table, v)
    return Form(model, terms)


class InvolutivityReport:
    __slots__ = ("ok", "pair", "residual")

    def __init__(self, ok, pair=None, residual=None):
        self.ok = ok
        self.pair = pair
        self.residual = residual

    def __bool__(self):
        return self.ok


def involutivity_check(basis):
    """Every pairwise Courant bracket lies back in the span of the basis.

    Membership is decided over constants, which covers invariant models and
    constant-coefficient chart sections; a failure reports the offending pair
    of indices and the residual section.
    """
    if not basis:
        return InvolutivityReport(True)
    model = basis[0].model
    span_forms = [_section_form(u) for u in basis]
    keys = linalg.coordinate_keys(span_forms)
    for i, u in enumerate(basis):
        for j in range(i + 1, len(basis)):
            br = courant_bracket(u, basis[j])
            if not br:
                continue
            bf = _section_form(br)
            all_keys = linalg.coordinate_keys(span_forms + [bf])
            rows = [linalg.form_to_vector(f, all_keys) for f in span_forms]
            vec = linalg.form_to_vector(bf, all_keys)
            if not linalg.in_span(rows, vec):
                return InvolutivityReport(False, pair=(i, j), residual=br)
    return InvolutivityReport(True)


def _section_form(u):
    """Flatten a GenVector into one inhomogeneous form for coordinate work:
    the covector part plus the frame part written over a shifted 2-degree."""
    model = u.model
    # encode the vector part on degree-2 subsets (volume-complement trick is
    # not needed; a disjoint tag via pairs (i, i+rank) cannot collide since
    # real generator indices stay below rank)
    terms = dict(u.cov.terms)
    for i, c in u.vec.components.items():
        terms[(i, i + model.rank)] = c
    f = Form.__new__(Form)
    f.model = model
    f.terms = {s: c for s, c in terms.items() if c}
    return f


class WitnessResult:
    """Outcome of the integrability solve d rho = u . rho."""

    __slots__ = ("status", "u", "residual")

    def __init__(self, status, u=None, residual=None):
        self.status = status  # "zero" | "witness" | "no-witness-in-ring"
        self.u = u
        self.residual = residual

    @property
    def integrable(self):
        return self.status in ("zero", "witness")


def integrability_witness(rho):
    """Solve d rho = u . rho for u with coefficients in the ring.

    The candidate monomials for u are the componentwise-nonnegative exponent
    differences between d rho terms and rho terms (characters unrestricted);
    no solution in that ansatz is reported as its own status, never as a
    non-integrability claim.
    """
    model = rho.model
    drho = rho.d()
    if not drho:
        return WitnessResult(
            "zero", gen_vector(model, [G_ZERO] * (2 * model.rank)), None
        )
    candidates = _ansatz_monomials(drho, rho)
    sections = _basis_sections(model)
    columns = []
    tags = []
    for mono in candidates:
        mono_fn = CoeffFn(model.table, {mono: G_ONE})
        for s_idx, u in enumerate(sections):
            act = spinor_action(u, rho) * mono_fn
            if act:
                columns.append(act)
                tags.append((mono, s_idx))
    keys = linalg.coordinate_keys(columns + [drho])
    col_vecs = [linalg.form_to_vector(col, keys) for col in columns]
    matrix = [[cv[r] for cv in col_vecs] for r in range(len(keys))]
    rhs = linalg.form_to_vector(drho, keys)
    sol = linalg.solve(matrix, rhs, ncols=len(columns))
    if sol is None:
        return WitnessResult("no-witness-in-ring", None, drho)
    coords = {}
    for x, (mono, s_idx) in zip(sol, tags):
        if x:
            coords.setdefault(s_idx, {})[mono] = x
    R = model.rank
    vec = VectorField(
        model, {i: CoeffFn(model.table, coords[i]) for i in coords if i < R}
    )
    cov = model.zero()
    for s_idx, monos in coords.items():
        if s_idx >= R:
            cov = cov + model.one(
                model.generators[s_idx - R].name, CoeffFn(model.table, monos)
            )
    return WitnessResult("witness", GenVector(vec, cov), None)


def _ansatz_monomials(drho, rho):
    dmonos = {m for c in drho.terms.values() for m in c.terms}
    rmonos = {m for c in rho.terms.values() for m in c.terms}
    out = {(_zero_a(drho.model), _zero_a(drho.model), _zero_k(drho.model))}
    for (da, db, dk) in dmonos:
        for (ra, rb, rk) in rmonos:
            qa = tuple(x - y for x, y in zip(da, ra))
            qb = tuple(x - y for x, y in zip(db, rb))
            qk = tuple(x - y for x, y in zip(dk, rk))
            if all(x >= 0 for x in qa) and all(x >= 0 for x in qb):
                out.add((qa, qb, qk))
    return sorted(out)


def _zero_a(model):
    return (0,) * len(model.table.chart)


def _zero_k(model):
    return (0,) * len(model.table.angle)


def b_transform(rho, B):
    """e^B ^ rho for a closed real 2-form B."""
    if B and (B.degrees() != [2] or not B.is_real()):
        raise ValueError("B-field must be a real 2-form")
    if B.d():
        raise ValueError("B-field must be closed")
    out = B.exp() ^ rho if B else rho
    if not rho.d() and out.d():
        raise AssertionError("closed spinor lost closedness under closed B")
    return out


# ---- pointwise endomorphism ---------------------------------------------------


class PointFrameJ:
    """J on the T + T* fiber at a point, rows over (frame, covector) coords."""

    __slots__ = ("model", "point", "matrix")

    def __init__(self, model, point, matrix):
        self.model = model
        self.point = point
        self.matrix = matrix

    def apply(self, u):
        coords = u.coordinates()
        out = []
        for row in self.matrix:
            acc = G_ZERO
            for a, b in zip(row, coords):
                acc = acc + a * b
            out.append(acc)
        return gen_vector(self.model, out)


def endomorphism_from_spinor(rho, point=None):
    """Reconstruct J from the pointwise annihilator: +i on L, -i on conj(L).

    Verifies J^2 = -1 and orthogonality for the natural pairing exactly.
    """
    model = rho.model
    basis = annihilator(rho, point=point)
    R = model.rank
    n2 = 2 * R
    cols = [u.coordinates() for u in basis] + [
        u.conj().coordinates() for u in basis
    ]
    V = [[cols[j][r] for j in range(n2)] for r in range(n2)]  # columns are basis
    Vinv = linalg.inverse(V)
    D = [
        [
            (G_I if (r == c and r < R) else (-G_I if r == c else G_ZERO))
            for c in range(n2)
        ]
        for r in range(n2)
    ]
    J = _matmul(_matmul(V, D), Vinv)
    J2 = _matmul(J, J)
    for r in range(n2):
        for c in range(n2):
            want = GaussRational(-1) if r == c else G_ZERO
            if J2[r][c] != want:
                raise AssertionError("J^2 != -1 at (%d, %d)" % (r, c))
    _check_orthogonal(J, R)
    return PointFrameJ(model, point, J)


def _matmul(A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = []
    for r in range(n):
        row = []
        for c in range(m):
            acc = G_ZERO
            for t in range(k):
                if A[r][t] and B[t][c]:
                    acc = acc + A[r][t] * B[t][c]
            row.append(acc)
        out.append(row)
    return out


def _check_orthogonal(J, R):
    half = GaussRational(Fraction(1, 2))
    n2 = 2 * R

    def pairing(r, c):
        if r < R and c == r + R:
            return half
        if c < R and r == c + R:
            return half
        return G_ZERO

    for a in range(n2):
        for b in range(n2):
            acc = G_ZERO
            for i in range(R):
                acc = acc + (J[i][a] * J[i + R][b] + J[i + R][a] * J[i][b]) * half
            if acc != pairing(a, b):
                raise AssertionError("J is not orthogonal for the pairing")
