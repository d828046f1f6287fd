"""Named models and seeded random families used across the tests and CLI."""

from fractions import Fraction

from .bundles import build_bundle, build_chart_bundle, lift_form
from .coeffs import CoeffFn, VariableTable, conj_name
from .model import CoframeModel
from .scalars import GaussRational, I as G_I

HALF = GaussRational(Fraction(1, 2))
QUARTER_I = GaussRational(0, Fraction(1, 4))


def angle_torus(names, name=None):
    """Invariant torus with one exact generator per angle variable."""
    names = tuple(names)
    table = VariableTable(angle=names)
    decls = [("d" + v, "F", v) for v in names]
    return CoframeModel(name or "torus_" + "_".join(names), table, decls, invariant=True).finalize()


def symplectic_torus():
    return angle_torus(("x", "y"), name="t2_symp")


def fiber_torus(l):
    return angle_torus(tuple("t%d" % (j + 1) for j in range(2 * l)), name="t%d_fiber" % (2 * l))


def complex_torus(n=1, invariant=True, name=None):
    """T^2n with a global complex chart; the chart flavour hosts polynomial
    coefficients (connection data), the invariant flavour hosts cohomology."""
    if n == 1:
        chart = ("z",)
        decls = [("dz", "H", "z"), ("dzb", "A", "zb")]
    else:
        chart = tuple("z%d" % (j + 1) for j in range(n))
        decls = [("d" + v, "H", v) for v in chart]
        decls += [("d" + conj_name(v), "A", conj_name(v)) for v in chart]
    table = VariableTable(chart=chart)
    default = ("t%dc" % (2 * n)) if invariant else ("c%d" % n)
    return CoframeModel(name or default, table, decls, invariant=invariant).finalize()


def c_chart(n=1, name=None):
    return complex_torus(n, invariant=False, name=name)


def kodaira_thurston(presentation="invariant"):
    """Circle bundle times a circle over T^2_C; the single curved direction
    has curvature (i/2) dz^dzb."""
    base = c_chart(1, name="kt_base")
    z, zb = base.var("z"), base.var("zb")
    beta4 = (base.one("dzb") * z - base.one("dz") * zb) * QUARTER_I
    if presentation == "invariant":
        return build_bundle(base, 1, [None, beta4], name="kt")
    if presentation == "chart":
        return build_chart_bundle(base, 1, [None, beta4], name="kt_chart")
    raise ValueError("presentation must be 'invariant' or 'chart'")


def trivial_chart_bundle(n=1, l=1):
    return build_chart_bundle(c_chart(n), l)


def invariant_product(m1, m2, name=None):
    """Product of two invariant models with disjoint variable names."""
    if not (m1.invariant and m2.invariant):
        raise ValueError("both factors must be invariant models")
    table = VariableTable(
        chart=m1.table.chart + m2.table.chart, angle=m1.table.angle + m2.table.angle
    )
    decls = [(g.name, g.grade, g.slot) for g in m1.generators]
    decls += [(g.name, g.grade, g.slot) for g in m2.generators]
    model = CoframeModel(name or (m1.name + "_x_" + m2.name), table, decls, invariant=True)
    for src in (m1, m2):
        for g in src.generators:
            if g.diff:
                model.set_diff(g.name, lift_form(g.diff, model))
    return model.finalize()


def constant_primitive(base, chi):
    """A real 1-form beta with d(beta) = chi, for constant-coefficient chi."""
    beta = base.zero()
    for subset, c in chi.terms.items():
        if not c.is_constant():
            raise ValueError("chi must have constant coefficients")
        i1, i2 = subset
        v1 = base.generators[i1].slot
        v2 = base.generators[i2].slot
        g1 = base.one(base.generators[i1].name)
        g2 = base.one(base.generators[i2].name)
        beta = beta + (g2 * base.var(v1) - g1 * base.var(v2)) * (c.constant_value() * HALF)
    if beta.d() != chi:
        raise AssertionError("primitive construction failed")
    if not beta.is_real():
        raise ValueError("chi must be real")
    return beta


# ---- seeded random families ----------------------------------------------------


def random_gauss(rng, span=3, allow_zero=True):
    while True:
        re = Fraction(rng.randint(-span, span), rng.choice((1, 1, 2)))
        im = Fraction(rng.randint(-span, span), rng.choice((1, 1, 2)))
        g = GaussRational(re, im)
        if allow_zero or g:
            return g


def random_polynomial(rng, table, degree=2, nterms=2, real=False, characters=0):
    nc, na = len(table.chart), len(table.angle)
    terms = {}
    for _ in range(nterms):
        a = tuple(rng.randint(0, degree) for _ in range(nc))
        b = tuple(rng.randint(0, degree) for _ in range(nc))
        k = (0,) * na
        if characters and na:
            k = tuple(rng.randint(-characters, characters) for _ in range(na))
        terms[(a, b, k)] = random_gauss(rng)
    p = CoeffFn(table, terms)
    if real:
        p = (p + p.conjugate()) * HALF
    return p


def random_constant_11(rng, base):
    """Random real constant-coefficient (1,1) curvature form."""
    h_names = [g.name for g in base.generators if g.grade == "H"]
    a_names = [g.name for g in base.generators if g.grade == "A"]
    chi = base.zero()
    for ga in h_names:
        for gb in a_names:
            c = random_gauss(rng, span=2)
            if not c:
                continue
            term = (base.one(ga) ^ base.one(gb)) * (c * G_I)
            chi = chi + term + term.conj()
    return chi


def random_invariant_bundle(rng, n=1, l=1, mixed=False):
    """Invariant bundle with random constant curvature; `mixed` adds a real
    (2,0)+(0,2) part (needs n >= 2)."""
    base = c_chart(n)
    betas = []
    for _ in range(2 * l):
        chi = random_constant_11(rng, base)
        if mixed:
            if n < 2:
                raise ValueError("mixed curvature needs a base of complex dimension >= 2")
            h_names = [g.name for g in base.generators if g.grade == "H"]
            c = random_gauss(rng, span=2, allow_zero=False)
            term = (base.one(h_names[0]) ^ base.one(h_names[1])) * c
            chi = chi + term + term.conj()
        betas.append(constant_primitive(base, chi))
    return build_bundle(base, l, betas)


def random_holomorphic(rng, table, degree=2, nterms=2):
    """Random polynomial in the chart variables alone, never constant."""
    nc = len(table.chart)
    zb = (0,) * nc
    zk = (0,) * len(table.angle)
    terms = {}
    while not any(any(a) for (a, _b, _k) in terms):
        terms = {}
        for _ in range(nterms):
            a = tuple(rng.randint(0, degree) for _ in range(nc))
            terms[(a, zb, zk)] = random_gauss(rng, allow_zero=False)
    return CoeffFn(table, terms)


def random_flat_chart_bundle(rng, n=1, l=1, mixed_gauge=True):
    """Chart bundle with exact connection forms (hence flat).  Potentials are
    a real part of a holomorphic polynomial plus, optionally, mixed monomials
    that exercise the gauge step of the product certificate."""
    base = c_chart(n)
    betas = []
    for _ in range(2 * l):
        f = random_holomorphic(rng, base.table)
        phi = (f + f.conjugate()) * HALF
        if mixed_gauge:
            m = random_polynomial(rng, base.table, degree=2, nterms=1, real=True)
            phi = phi + m
        betas.append(base.fn(phi).d())
    return build_chart_bundle(base, l, betas)


def random_closed_one_form(rng, model):
    """Random closed real 1-form on an invariant torus (constant coefficients)."""
    w = model.zero()
    for g in model.generators:
        if g.diff:
            continue
        c = random_gauss(rng, span=2)
        term = model.one(g.name) * c
        w = w + term + term.conj()
    return w * HALF


def random_closed_b_field(rng, model):
    """Random real closed 2-form: constant combinations on invariant models,
    an exact form on chart models."""
    if model.invariant:
        from . import linalg

        names = [g.name for g in model.generators]
        candidates = [
            model.monomial_form((names[i], names[j]))
            for i in range(len(names))
            for j in range(i + 1, len(names))
        ]
        images = [c.d() for c in candidates]
        keys = linalg.coordinate_keys(images)
        matrix = [linalg.form_to_vector(f, keys) for f in images]
        cols = [[row[r] for row in matrix] for r in range(len(keys))]
        null = linalg.nullspace(cols, len(candidates))
        b = model.zero()
        for vec in null:
            c = random_gauss(rng, span=1)
            if not c:
                continue
            for x, cand in zip(vec, candidates):
                if x:
                    b = b + cand * (c * x)
        b = (b + b.conj()) * HALF
        if b.d():
            raise AssertionError("closed-constant sampling produced a non-closed form")
        return b
    theta = model.zero()
    for g in model.generators:
        c = random_polynomial(rng, model.table, degree=1, nterms=1)
        theta = theta + model.one(g.name) * c
    b = (theta + theta.conj()) * HALF
    return b.d()
