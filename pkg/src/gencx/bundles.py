"""Principal torus-bundle models over complex bases.

Two presentations share one BundleModel record:

* invariant: the total model carries abstract fiber generators th_j whose
  structure differentials are the (constant-coefficient) curvature forms.
  This is the nilmanifold-style presentation used for cohomology.
* chart: the total model is U x T^2l with exact angle generators dt_j, and
  the connection enters through the 1-forms theta_j = dt_j + beta_j.  This
  is the presentation on which the exponent component equations, the
  dbar-Poincare / ddbar solvers and the product certificate run.
"""

from fractions import Fraction

from .coeffs import CoeffFn, VariableTable, conj_name
from .model import CoframeModel, Form
from .scalars import GaussRational, I as G_I, ONE as G_ONE


class BundleModel:
    __slots__ = (
        "total",
        "base",
        "l",
        "thetas",
        "curvature",
        "beta",
        "omega",
        "Omega",
        "presentation",
    )

    def __init__(self, total, base, l, thetas, curvature, beta, omega, Omega, presentation):
        self.total = total
        self.base = base
        self.l = l
        self.thetas = thetas
        self.curvature = curvature
        self.beta = beta
        self.omega = omega
        self.Omega = Omega
        self.presentation = presentation

    def fiber_rank(self):
        return 2 * self.l

    def __repr__(self):
        return "BundleModel(%s, l=%d, %s)" % (self.total.name, self.l, self.presentation)


def _check_base(base):
    if base.table.angle:
        raise ValueError("bundle base must be a complex model without angle variables")
    for g in base.generators:
        if g.grade == "F":
            raise ValueError("bundle base must carry only H/A generators")


def _check_beta(base, l, beta):
    if beta is None:
        beta = [None] * (2 * l)
    beta = list(beta)
    if len(beta) != 2 * l:
        raise ValueError("need exactly 2l connection forms, got %d" % len(beta))
    out = []
    for j, b in enumerate(beta):
        if b is None or b == 0:
            out.append(base.zero())
            continue
        if not isinstance(b, Form) or b.model is not base:
            raise ValueError("beta[%d] must be a 1-form on the base model" % j)
        if b and b.degrees() != [1]:
            raise ValueError("beta[%d] must be homogeneous of degree 1" % j)
        if any(base.grade_of(i) == "F" for s in b.terms for i in s):
            raise ValueError("beta[%d] contains fiber generators" % j)
        if not b.is_real():
            raise ValueError("beta[%d] must be real (connections are real)" % j)
        out.append(b)
    return out


def lift_form(form, total):
    """Transport a form to a larger model, matching generators and variables
    by name.  Exponent and character keys are re-slotted positionally."""
    src = form.model
    same_table = total.table is src.table
    if not same_table:
        tt = total.table
        cpos = {nm: j for j, nm in enumerate(tt.chart)}
        apos = {nm: j for j, nm in enumerate(tt.angle)}
        cmap = [cpos[nm] for nm in src.table.chart]
        amap = [apos[nm] for nm in src.table.angle]
        nc, na = len(tt.chart), len(tt.angle)
    terms = {}
    for subset, c in form.terms.items():
        new_subset = tuple(total.index(src.generators[i].name) for i in subset)
        if not same_table:
            new = {}
            for (a, b, k), v in c.terms.items():
                ra, rb, rk = [0] * nc, [0] * nc, [0] * na
                for j, e in enumerate(a):
                    ra[cmap[j]] = e
                for j, e in enumerate(b):
                    rb[cmap[j]] = e
                for j, e in enumerate(k):
                    rk[amap[j]] = e
                new[(tuple(ra), tuple(rb), tuple(rk))] = v
            c = CoeffFn(total.table, new)
        terms[new_subset] = c
    return Form(total, terms)


def build_bundle(base, l, beta=None, name=None):
    """Invariant presentation: abstract fiber generators with the curvature
    as structure differentials (which must be constant-coefficient)."""
    _check_base(base)
    beta = _check_beta(base, l, beta)
    chi = [b.d() for b in beta]
    gen_decls = [(g.name, g.grade, g.slot) for g in base.generators]
    fiber_names = ["th%d" % (j + 1) for j in range(2 * l)]
    gen_decls += [(nm, "F", None) for nm in fiber_names]
    total = CoframeModel(
        name or (base.name + "_T%d" % (2 * l)), base.table, gen_decls, invariant=True
    )
    for nm, c in zip(fiber_names, chi):
        if c:
            if not all(f.is_constant() for f in c.terms.values()):
                raise ValueError(
                    "invariant presentation needs constant curvature; "
                    "use a chart bundle for %s" % nm
                )
            total.set_diff(nm, lift_form(c, total))
    total.finalize()
    thetas = [total.one(nm) for nm in fiber_names]
    curvature = [lift_form(c, total) for c in chi]
    return _finish_bundle(total, base, l, thetas, curvature, beta, "invariant")


def build_chart_bundle(base, l, beta=None, name=None):
    """Chart presentation U x T^2l: exact angle generators dt_j and
    connection forms theta_j = dt_j + beta_j."""
    _check_base(base)
    beta = _check_beta(base, l, beta)
    tnames = ["t%d" % (j + 1) for j in range(2 * l)]
    table = VariableTable(chart=base.table.chart, angle=tnames)
    gen_decls = [(g.name, g.grade, g.slot) for g in base.generators]
    gen_decls += [("dt%d" % (j + 1), "F", t) for j, t in enumerate(tnames)]
    total = CoframeModel(
        name or (base.name + "_xT%d" % (2 * l)), table, gen_decls, invariant=False
    ).finalize()
    thetas = [
        total.one("dt%d" % (j + 1)) + lift_form(beta[j], total) for j in range(2 * l)
    ]
    curvature = [lift_form(b.d(), total) for b in beta]
    return _finish_bundle(total, base, l, thetas, curvature, beta, "chart")


def _finish_bundle(total, base, l, thetas, curvature, beta, presentation):
    omega = total.zero()
    for j in range(l):
        omega = omega + (thetas[2 * j] ^ thetas[2 * j + 1])
    h_names = [g.name for g in base.generators if g.grade == "H"]
    Omega = total.monomial_form(h_names) if h_names else total.scalar(1)
    for th, chi in zip(thetas, curvature):
        if th.d() != chi:
            raise AssertionError("connection form differential drifted from curvature")
    return BundleModel(total, base, l, thetas, curvature, beta, omega, Omega, presentation)


# ---- curvature classification -------------------------------------------------


class CurvatureReport:
    __slots__ = ("is_11", "offenders")

    def __init__(self, is_11, offenders):
        self.is_11 = is_11
        self.offenders = offenders  # list of (j, (r, p, q), Form)


def curvature_type(bundle):
    """Classify the curvature 2-forms: (1,1) means no (2,0)/(0,2) parts."""
    offenders = []
    for j, chi in enumerate(bundle.curvature):
        for key, part in chi.trigrade().items():
            r, p, q = key
            if r != 0:
                raise AssertionError("curvature contains fiber generators")
            if (p, q) in ((2, 0), (0, 2)):
                offenders.append((j, key, part))
    return CurvatureReport(not offenders, offenders)


def construct_rho(bundle, eta=None):
    """The spinor e^(eta + i omega) ^ Omega for a closed real eta.

    When the curvature is (1,1), the result is closed; this is asserted.
    """
    total = bundle.total
    if eta is None:
        eta = total.zero()
    if eta:
        if eta.degrees() != [2] or not eta.is_real():
            raise ValueError("eta must be a real 2-form")
        if eta.d():
            raise ValueError("eta must be closed")
    rho = (eta + bundle.omega * G_I).exp() ^ bundle.Omega
    if curvature_type(bundle).is_11 and rho.d():
        raise AssertionError("(1,1) curvature must give a closed spinor")
    return rho


# ---- exponent component equations ----------------------------------------------


class ComponentReport:
    """Tri-graded pieces of the exponent 2-form and their coupled equations."""

    __slots__ = ("components", "equations", "omega_hat_is_fiber_form")

    KEYS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))

    def __init__(self, components, equations, omega_hat_is_fiber_form=None):
        self.components = components
        self.equations = equations  # name -> (ok, residual Form)
        self.omega_hat_is_fiber_form = omega_hat_is_fiber_form

    @property
    def all_hold(self):
        return all(ok for ok, _ in self.equations.values())


def component_equations_check(source, ahat=None):
    """Decompose an exponent 2-form by (fiber, dz, dzbar) counts and verify
    the coupled closedness equations.

    `source` is either a chart BundleModel (the exponent is i*omega of the
    pulled-back connection) or the exponent 2-form itself on a chart product
    model.  With a candidate Ahat (the real (0,1,1) gauge 2-form) the two
    constraint equations for the closed B-field are checked as well.
    """
    if isinstance(source, BundleModel):
        if source.presentation != "chart":
            raise ValueError("component equations run on chart product models")
        exponent = source.omega * G_I
        bundle = source
    elif isinstance(source, Form):
        exponent = source
        bundle = None
    else:
        raise ValueError("need the exponent 2-form or a chart bundle")
    model = exponent.model
    if any(g.diff for g in model.generators) or any(
        not g.exact for g in model.generators
    ):
        raise ValueError(
            "component equations need a chart product model with exact generators"
        )
    if exponent and exponent.degrees() != [2]:
        raise ValueError("exponent must be a 2-form")

    comps = {key: exponent.component(*key) for key in ComponentReport.KEYS}
    total = model.zero()
    for f in comps.values():
        total = total + f
    if total != exponent:
        raise AssertionError("tri-graded components do not sum to the input")

    a200 = comps[(2, 0, 0)]
    a101 = comps[(1, 0, 1)]
    a002 = comps[(0, 0, 2)]

    equations = {}

    def record(name, residual):
        equations[name] = (not residual, residual)

    record("dbar_A002", a002.dbar_part())
    record("dbar_A101_dF_A002", a101.dbar_part() + a002.d_fiber())
    record("dbar_A200_dF_A101", a200.dbar_part() + a101.d_fiber())
    record("dF_A200", a200.d_fiber())

    if ahat is not None:
        if ahat and (ahat.degrees() != [2] or not ahat.is_real()):
            raise ValueError("Ahat must be a real 2-form")
        bad = [k for k, f in ahat.trigrade().items() if f and k != (0, 1, 1)]
        if bad:
            raise ValueError("Ahat must be of pure tri-grade (0,1,1)")
        record("del_A002_dbar_Ahat", a002.del_part() + ahat.dbar_part())
        mixed = a101.del_part()
        record("mixed_A101_dF_Ahat", mixed + mixed.conj() + ahat.d_fiber())

    omega_hat_ok = None
    if bundle is not None:
        omega_t = model.zero()
        for j in range(bundle.l):
            omega_t = omega_t + (
                model.one("dt%d" % (2 * j + 1)) ^ model.one("dt%d" % (2 * j + 2))
            )
        omega_hat_ok = a200 == omega_t * G_I
    return ComponentReport(comps, equations, omega_hat_ok)


# ---- local solvers --------------------------------------------------------------


def _conj_generator_index(model, var_index):
    slot = conj_name(model.table.chart[var_index])
    for idx, g in enumerate(model.generators):
        if g.slot == slot:
            return idx
    raise KeyError("no generator over %s" % slot)


def _integrate_conj(coeff, var_index):
    """Antiderivative in the var_index-th conjugate variable."""
    res = {}
    for (a, b, k), c in coeff.terms.items():
        if any(k):
            raise ValueError("cannot integrate character terms")
        nb = list(b)
        nb[var_index] += 1
        res[(a, tuple(nb), k)] = c * GaussRational(Fraction(1, nb[var_index]))
    return CoeffFn(coeff.table, res)


def dbar_poincare_solve(A):
    """Solve dbar(eta) = A for a dbar-closed (0,q) polynomial form, q >= 1.

    Integrates the lowest-index conjugate variable first; the antiderivative
    is verified exactly before returning.
    """
    model = A.model
    if not A:
        return model.zero()
    for key in A.trigrade():
        if key[0] != 0 or key[1] != 0 or key[2] < 1:
            raise ValueError("input must be of pure (0,q) type with q >= 1")
    residual = A.dbar_part()
    if residual:
        raise ValueError("input is not dbar-closed; residual %s" % residual)
    eta = model.zero()
    cur = A
    for j in range(len(model.table.chart)):
        if not cur:
            break
        gidx = _conj_generator_index(model, j)
        P = cur.interior(model.vector(model.generators[gidx].name))
        if not P:
            continue
        IP = Form(model, {s: _integrate_conj(c, j) for s, c in P.terms.items()})
        eta = eta + IP
        cur = cur - IP.dbar_part()
    if cur:
        raise AssertionError("integration left a remainder: %s" % cur)
    if eta.dbar_part() != A:
        raise AssertionError("antiderivative verification failed")
    return eta


def ddbar_solve(A, eta):
    """Real chi with A = del(eta) + conj(del eta) + i*del(dbar(chi)).

    The residue must be del- and dbar-closed; chi is found on a monomial
    ansatz read off the residue and symmetrized to be real.
    """
    from . import linalg

    model = A.model
    if A and (A.degrees() != [2] or not A.is_real()):
        raise ValueError("A must be a real 2-form")
    deta = eta.del_part() if eta else model.zero()
    residue = A - deta - deta.conj()
    if not residue:
        return CoeffFn(model.table)
    for key in residue.trigrade():
        if key != (0, 1, 1):
            raise ValueError("residue must be of pure (1,1) type")
    if residue.del_part() or residue.dbar_part():
        raise ValueError("residue not closed")
    nvars = len(model.table.chart)
    zero_k = (0,) * len(model.table.angle)
    candidates = set()
    for subset, c in residue.terms.items():
        hi = [i for i in subset if model.grade_of(i) == "H"]
        ai = [i for i in subset if model.grade_of(i) == "A"]
        iv = _var_of_generator(model, hi[0])
        jv = _var_of_generator(model, ai[0])
        for (a, b, _k) in c.terms:
            na = list(a)
            nb = list(b)
            na[iv] += 1
            nb[jv] += 1
            candidates.add((tuple(na), tuple(nb)))
    candidates = sorted(candidates)
    columns = []
    for (a, b) in candidates:
        mono = model.fn(CoeffFn(model.table, {(a, b, zero_k): G_ONE}))
        columns.append(mono.dbar_part().del_part() * G_I)
    keys = linalg.coordinate_keys(columns + [residue])
    col_vecs = [linalg.form_to_vector(f, keys) for f in columns]
    matrix = [[cv[r] for cv in col_vecs] for r in range(len(keys))]
    rhs = linalg.form_to_vector(residue, keys)
    sol = linalg.solve(matrix, rhs, ncols=len(columns))
    if sol is None:
        raise ValueError("no polynomial solution for the residue")
    chi = CoeffFn(
        model.table,
        {(a, b, zero_k): x for (a, b), x in zip(candidates, sol) if x},
    )
    half = GaussRational(Fraction(1, 2))
    chi = (chi + chi.conjugate()) * half
    check = model.fn(chi).dbar_part().del_part() * G_I
    if check != residue:
        raise AssertionError("ddbar verification failed")
    return chi


def _var_of_generator(model, gidx):
    slot = model.generators[gidx].slot
    kind, idx = model.table.slot(slot)
    if kind == "t":
        raise ValueError("expected a chart-variable generator")
    return idx


# ---- the product certificate -----------------------------------------------------


def radial_potential(beta):
    """Polynomial potential of a closed polynomial 1-form on chart generators
    (Euler homotopy: each potential monomial is weighted by 1/degree)."""
    model = beta.model
    if beta.d():
        raise ValueError("form is not closed")
    phi = CoeffFn(model.table)
    for subset, c in beta.terms.items():
        (gi,) = subset
        slot = model.generators[gi].slot
        if slot is None or model.table.slot(slot)[0] == "t":
            raise ValueError("potential integration needs chart-variable generators")
        kind, j = model.table.slot(slot)
        for (a, b, k), v in c.terms.items():
            if any(k):
                raise ValueError("cannot integrate character terms")
            na, nb = list(a), list(b)
            if kind == "z":
                na[j] += 1
            else:
                nb[j] += 1
            deg = sum(a) + sum(b) + 1
            phi = phi + CoeffFn(
                model.table,
                {(tuple(na), tuple(nb), k): v * GaussRational(Fraction(1, deg))},
            )
    if model.fn(phi).d() != beta:
        raise AssertionError("potential verification failed")
    return phi


def pluriharmonic_split(phi):
    """(pure, mixed) parts of a polynomial: `mixed` collects the monomials
    with both z and zbar factors, so del(dbar(pure)) = 0."""
    pure, mixed = {}, {}
    for key, v in phi.terms.items():
        a, b, _k = key
        (mixed if (any(a) and any(b)) else pure)[key] = v
    return CoeffFn(phi.table, pure), CoeffFn(phi.table, mixed)


def substitute_generators(form, images):
    """Replace generator factors by 1-forms (index -> image); coefficients
    are kept, so this realizes a coframe substitution."""
    model = form.model
    out = model.zero()
    for subset, c in form.terms.items():
        piece = model.fn(c)
        for gi in subset:
            piece = piece ^ images.get(gi, model.one(model.generators[gi].name))
        out = out + piece
    return out


class ProductCertificate:
    """Gauge shifts plus a closed real B-field exhibiting the chart GCS as a
    product: rho_tilde --(angle shift by -gauge[j])--> rho_gauged
    = e^Bhat ^ rho_product, all three identities verified exactly."""

    __slots__ = (
        "ok",
        "Bhat",
        "eta",
        "eta_prime",
        "chi",
        "gauge",
        "rho_product",
        "rho_gauged",
        "rho_tilde",
    )

    def __init__(self, Bhat, eta, eta_prime, chi, gauge, rho_product, rho_gauged, rho_tilde):
        self.ok = True
        self.Bhat = Bhat
        self.eta = eta
        self.eta_prime = eta_prime
        self.chi = chi
        self.gauge = gauge
        self.rho_product = rho_product
        self.rho_gauged = rho_gauged
        self.rho_tilde = rho_tilde


class ProductObstruction:
    __slots__ = ("ok", "reason", "residuals")

    def __init__(self, reason, residuals):
        self.ok = False
        self.reason = reason  # "mixed-connection-residual" | "dbar-01-residual"
        self.residuals = residuals  # index j (1-based) -> Form on the base


def local_product_B(bundle, chi=None):
    """Certificate that the chart-bundle GCS is equivalent to the product GCS
    through an angle reparametrization plus a closed real B-field.

    Succeeds exactly on flat connections.  The obstruction on non-flat charts
    is the per-component residual del(beta_j^01) + conj(del(beta_j^01)) (the
    (1,1) curvature part) or, failing that, the dbar residual of beta_j^01
    (the (0,2) part).

    On flat input each beta_j is integrated to a polynomial potential whose
    mixed monomials are removed by the gauge shift t_j -> t_j - gauge[j]; the
    remaining pluriharmonic potentials feed the dbar-Poincare construction of
    the B-field.  Without the gauge step the candidate B-field fails to close
    whenever del(dbar(potential)) is nonzero.
    """
    if bundle.presentation != "chart":
        raise ValueError("product certificates run on chart bundles")
    base = bundle.base
    total = bundle.total
    mixed = {}
    dbar_res = {}
    for j, b in enumerate(bundle.beta):
        b01 = b.trigrade().get((0, 0, 1), base.zero())
        m = b01.del_part()
        m = m + m.conj()
        if m:
            mixed[j + 1] = m
        r = b01.dbar_part()
        if r:
            dbar_res[j + 1] = r
    if mixed:
        return ProductObstruction("mixed-connection-residual", mixed)
    if dbar_res:
        return ProductObstruction("dbar-01-residual", dbar_res)

    gauge = []
    beta01 = []
    thetas_g = []
    for j, b in enumerate(bundle.beta):
        pure, mix = pluriharmonic_split(radial_potential(b))
        gauge.append(mix)
        bg = base.fn(pure).d()
        beta01.append(bg.trigrade().get((0, 0, 1), base.zero()))
        thetas_g.append(total.one("dt%d" % (j + 1)) + lift_form(bg, total))

    a02 = base.zero()
    for j in range(bundle.l):
        a02 = a02 + (beta01[2 * j] ^ beta01[2 * j + 1])
    a02 = a02 * G_I
    eta = dbar_poincare_solve(a02)
    deta = eta.del_part()
    a11 = deta + deta.conj()
    eta_prime = eta.conj()
    if chi is not None:
        if not chi.is_real():
            raise ValueError("chi must be a real function")
        chi_form = base.fn(chi)
        a11 = a11 + chi_form.dbar_part().del_part() * G_I
        eta_prime = eta_prime - chi_form.del_part() * G_I

    omega_g = total.zero()
    for j in range(bundle.l):
        omega_g = omega_g + (thetas_g[2 * j] ^ thetas_g[2 * j + 1])
    exponent = omega_g * G_I
    a101 = exponent.component(1, 0, 1)
    a002 = exponent.component(0, 0, 2)
    ahat = lift_form(a11, total)
    Bhat = a101 + a101.conj() + a002 + a002.conj() + ahat
    if not Bhat.is_real():
        raise AssertionError("certificate B-field must be real")
    if Bhat.d():
        raise AssertionError("certificate B-field must be closed")

    omega_t = total.zero()
    for j in range(bundle.l):
        omega_t = omega_t + (
            total.one("dt%d" % (2 * j + 1)) ^ total.one("dt%d" % (2 * j + 2))
        )
    rho_product = (omega_t * G_I).exp() ^ bundle.Omega
    rho_tilde = (bundle.omega * G_I).exp() ^ bundle.Omega
    rho_gauged = exponent.exp() ^ bundle.Omega
    images = {}
    for j, mix in enumerate(gauge):
        if mix:
            name = "dt%d" % (j + 1)
            images[total.index(name)] = total.one(name) - lift_form(base.fn(mix).d(), total)
    if substitute_generators(rho_tilde, images) != rho_gauged:
        raise AssertionError("gauge shift does not reproduce the gauged spinor")
    transformed = Bhat.exp() ^ rho_product if Bhat else rho_product
    if transformed != rho_gauged:
        raise AssertionError("certificate does not reproduce the bundle spinor")
    return ProductCertificate(
        Bhat, eta, eta_prime, chi, gauge, rho_product, rho_gauged, rho_tilde
    )


# ---- fiber exactness obstruction ---------------------------------------------------


class ObstructionVerdict:
    __slots__ = ("solvable", "f", "witness")

    def __init__(self, solvable, f=None, witness=None):
        self.solvable = solvable
        self.f = f  # CoeffFn with d_fiber(f) = -rhs*sigma when solvable
        self.witness = witness  # harmonic class coefficients over dt_j


def fiber_exactness_obstruction(model, sigma, rhs):
    """Decide solvability of d_fiber(f) = -rhs * sigma in the coefficient ring.

    sigma must be a closed 1-form in the angle generators with fiber-only
    coefficients; rhs is a base-function factor.  The equation is solvable
    exactly when rhs = 0 or the invariant class of sigma vanishes (the
    character-zero sector of a closed form is its harmonic representative);
    the class coefficients are returned as the witness otherwise.
    """
    if sigma.d():
        raise ValueError("sigma must be closed")
    angle_gens = []
    for idx, g in enumerate(model.generators):
        if g.slot is not None and model.table.slot(g.slot)[0] == "t":
            angle_gens.append(idx)
    angle_pos = {g: n for n, g in enumerate(angle_gens)}
    sectors = {}  # k -> list of (j, coeff) per angle generator
    for subset, c in sigma.terms.items():
        if len(subset) != 1 or subset[0] not in angle_pos:
            raise ValueError("sigma must be a 1-form in the angle generators")
        j = angle_pos[subset[0]]
        for (a, b, k), v in c.terms.items():
            if any(a) or any(b):
                raise ValueError("sigma must have fiber-only coefficients")
            sectors.setdefault(k, {})[j] = v
    if not rhs:
        return ObstructionVerdict(True, CoeffFn(model.table))
    if any(any(k) for (_a, _b, k) in rhs.terms):
        raise ValueError("rhs must be a base function")
    zero_k = (0,) * len(model.table.angle)
    harmonic = sectors.get(zero_k)
    if harmonic:
        witness = tuple(
            harmonic.get(n, GaussRational(0)) for n in range(len(angle_gens))
        )
        return ObstructionVerdict(False, witness=witness)
    # every nonzero character sector of a closed form integrates
    g = CoeffFn(model.table)
    za = _zero_a(model)
    for k, comps in sectors.items():
        n = next(iter(comps))
        kv = k[_angle_var(model, angle_gens[n])]
        if not kv:
            raise AssertionError("closed sector coefficient off its character support")
        g = g + CoeffFn(
            model.table, {(za, za, k): comps[n] * GaussRational(0, Fraction(-1, kv))}
        )
    f = rhs * g * GaussRational(-1)
    lhs = model.fn(f).d_fiber()
    if lhs != (sigma * rhs) * GaussRational(-1):
        raise AssertionError("fiber antiderivative verification failed")
    return ObstructionVerdict(True, f)


def _angle_var(model, gidx):
    slot = model.generators[gidx].slot
    kind, idx = model.table.slot(slot)
    return idx


def _zero_a(model):
    return (0,) * len(model.table.chart)


def is_pullback(form):
    """No fiber-generator factors and no fiber dependence in coefficients."""
    for subset, c in form.terms.items():
        if any(form.model.grade_of(i) == "F" for i in subset):
            return False
        if any(any(k) for (_a, _b, k) in c.terms):
            return False
    return True
