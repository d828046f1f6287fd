"""Acceptance gate: one test per shipped guarantee, one verdict line each
under `pytest -v`.  Each criterion is self-contained and exact; randomized
sweeps are seeded, so failures reproduce byte-for-byte."""

import json
import random

from gencx import bundles, cli, corpus, dolbeault, geometry, spectral
from gencx.scalars import GaussRational, ZERO
from tests import oracles
from tests.conftest import fixture_path, model_corpus, random_form, random_vector

I = GaussRational(0, 1)
ONE = GaussRational(1)


def _random_section(rng, model):
    return geometry.GenVector(
        random_vector(rng, model), random_form(rng, model, degree=1, nterms=2)
    )


def test_c01_algebra_core_identities():
    for model in model_corpus():
        rng = random.Random(hash(model.name) & 0xFFFF)
        top = model.rank
        for _ in range(100):
            ka = rng.randrange(0, top)
            a = random_form(rng, model, degree=ka, nterms=2)
            b = random_form(rng, model, degree=rng.randrange(0, top - ka + 1), nterms=2)
            X = random_vector(rng, model)
            kb = (b.degrees() or [0])[0]
            sign = -1 if (ka % 2 and kb % 2) else 1
            assert a ^ b == (b ^ a) * sign
            assert (a ^ b).d() == (a.d() ^ b) + (a ^ b.d()) * ((-1) ** ka)
            assert a.d().d() == model.zero()
            assert a.lie(X) == a.interior(X).d() + a.d().interior(X)
            assert a.alpha().alpha() == a


def test_c02_clifford_and_shear_pairing():
    rng = random.Random(101)
    models = model_corpus()
    for case in range(100):
        model = models[case % len(models)]
        u = _random_section(rng, model)
        v = _random_section(rng, model)
        phi = random_form(rng, model, degree=rng.randrange(model.rank + 1), nterms=2)
        twice = geometry.spinor_action(u, geometry.spinor_action(u, phi))
        assert twice == phi * geometry.inner_pairing(u, u)
        B = random_form(rng, model, degree=2, nterms=2)
        B = B + B.conj()
        su, sv = geometry.b_shear(u, B), geometry.b_shear(v, B)
        assert geometry.inner_pairing(su, sv) == geometry.inner_pairing(u, v)


def test_c03_regular_family_on_11_bundles():
    rng = random.Random(103)
    cases = [corpus.kodaira_thurston("invariant")]
    for _ in range(5):
        cases.append(corpus.random_invariant_bundle(rng, n=1, l=1))
    for bundle in cases:
        rho = bundles.construct_rho(bundle)
        assert not rho.d()
        n = len(bundle.base.table.chart)
        for point in geometry.sample_grid(bundle.total)[:4]:
            assert geometry.type_at(rho, point) == n


def test_c04_closed_iff_curvature_11():
    rng = random.Random(104)
    flats = curved = 0
    for trial in range(20):
        bundle = corpus.random_invariant_bundle(rng, n=2, l=1, mixed=trial % 2 == 0)
        rep = bundles.curvature_type(bundle)
        closed = not bundles.construct_rho(bundle).d()
        assert closed == rep.is_11
        if rep.is_11:
            flats += 1
        else:
            curved += 1
            assert rep.offenders
            for _j, (r, p, q), part in rep.offenders:
                assert r == 0 and (p, q) in ((2, 0), (0, 2)) and part
    assert flats >= 5 and curved >= 5


def test_c05_product_certificates_and_obstructions():
    rng = random.Random(105)
    for k in range(10):
        bundle = corpus.random_flat_chart_bundle(rng, n=1 + k % 2, l=1)
        cert = bundles.local_product_B(bundle)
        assert isinstance(cert, bundles.ProductCertificate)
        assert cert.Bhat.is_real() and not cert.Bhat.d()
        sheared = cert.Bhat.exp() ^ cert.rho_product if cert.Bhat else cert.rho_product
        assert sheared == cert.rho_gauged
        total = bundle.total
        images = {}
        for j, mix in enumerate(cert.gauge):
            if mix:
                name = "dt%d" % (j + 1)
                shift = bundles.lift_form(bundle.base.fn(mix).d(), total)
                images[total.index(name)] = total.one(name) - shift
        assert bundles.substitute_generators(cert.rho_tilde, images) == cert.rho_gauged

    base = corpus.c_chart(1)
    curved_template = base.form("i*z*zb*dz - i*z*zb*dzb")
    for k in range(5):
        scale = GaussRational(k + 1)
        f = corpus.random_holomorphic(rng, base.table)
        exact = base.fn((f + f.conjugate()) * (ONE / 2)).d()
        bundle = bundles.build_chart_bundle(
            base, 1, [None, curved_template * scale + exact]
        )
        out = bundles.local_product_B(bundle)
        assert isinstance(out, bundles.ProductObstruction)
        assert out.reason == "mixed-connection-residual"
        assert out.residuals and all(out.residuals.values())
    b2 = corpus.c_chart(2)
    hol = b2.form("zb1*dzb2")
    out = bundles.local_product_B(
        bundles.build_chart_bundle(b2, 1, [None, hol + hol.conj()])
    )
    assert isinstance(out, bundles.ProductObstruction)
    assert out.reason == "dbar-01-residual"


def test_c06_nonproduct_obstruction_regression():
    m = corpus.trivial_chart_bundle(1, 1).total
    A = m.form("i*z*zb*dz")
    sigma = m.one("dt1")
    omega_F = m.form("dt1^dt2")
    i_omega = omega_F * I + ((A - A.conj()) ^ sigma)
    omega = i_omega * GaussRational(0, -1)
    assert omega.is_real() and omega.d()
    assert not (i_omega.d() ^ m.one("dz"))
    assert not (i_omega.exp() ^ m.one("dz")).d()
    rhs = m.var("z") + m.var("zb")
    verdict = bundles.fiber_exactness_obstruction(m, sigma, rhs)
    assert not verdict.solvable and any(verdict.witness)
    exact_sigma = m.fn(m.char(1, 0) + m.char(-1, 0)).d()
    fixed = bundles.fiber_exactness_obstruction(m, exact_sigma, rhs)
    assert fixed.solvable
    assert m.fn(fixed.f).d_fiber() == (exact_sigma * rhs) * GaussRational(-1)


def test_c07_shear_equivalence_regression():
    m = corpus.trivial_chart_bundle(1, 1).total
    z, zb = m.var("z"), m.var("zb")
    sigma = m.one("dt1")
    omega_F = m.form("dt1^dt2")
    A1 = m.one("dzb", z * z * (ONE / 2) + z * zb)
    A2 = m.one("dzb", z)
    for A in (A1, A2):
        B = (A + A.conj()) ^ sigma
        assert B.is_real() and not B.d()
        i_omega = omega_F * I + ((A - A.conj()) ^ sigma)
        assert (i_omega * GaussRational(0, -1)).d()
        assert ((B + omega_F * I).exp() ^ m.one("dz")) == (i_omega.exp() ^ m.one("dz"))


def test_c08_reference_tables_match_oracles():
    t2 = corpus.symplectic_torus()
    symp = dolbeault.gh_cohomology(t2, (t2.form("dx^dy") * I).exp()).dims
    assert [symp[1 - k] for k in range(3)] == oracles.torus_betti(2)
    assert [symp[1 - k] for k in range(3)] == oracles.cochain_betti(2, {})
    assert symp == {1: 1, 0: 2, -1: 1}
    t2c = corpus.complex_torus(1)
    cplx = dolbeault.gh_cohomology(t2c, t2c.one("dz")).dims
    assert cplx == oracles.complex_torus_gh(1) == {1: 1, 0: 2, -1: 1}


def test_c09_b_transform_invariance():
    rng = random.Random(109)
    t2 = corpus.symplectic_torus()
    t2c = corpus.complex_torus(1)
    t4c = corpus.complex_torus(2)
    kt = corpus.kodaira_thurston("invariant")
    structures = [
        (t2, (t2.form("dx^dy") * I).exp()),
        (t2c, t2c.one("dz")),
        (t4c, t4c.form("dz1^dz2")),
        (kt.total, bundles.construct_rho(kt)),
    ]
    for model, rho in structures:
        for _ in range(10):
            B = corpus.random_closed_b_field(rng, model)
            assert dolbeault.compare_b_transform(model, rho, B)


def test_c10_kunneth_products():
    fiber = {1 - k: c for k, c in enumerate(oracles.torus_betti(2))}
    r1 = spectral.kunneth_check(corpus.complex_torus(1), 1)
    assert r1.ok and sum(r1.product.values()) == 16
    assert {k: v for k, v in r1.product.items() if v} == oracles.convolve(
        oracles.complex_torus_gh(1), fiber
    )
    r2 = spectral.kunneth_check(corpus.complex_torus(2), 1)
    assert r2.ok and sum(r2.product.values()) == 64
    assert {k: v for k, v in r2.product.items() if v} == oracles.convolve(
        oracles.complex_torus_gh(2), fiber
    )


def _hand_built_complex():
    combos = {m: [("a", m), ("b", m)] for m in range(3)}
    weights = {0: [0, 0], 1: [0, 1], 2: [1, 1]}
    diff = {
        0: [[ZERO, ZERO], [ZERO, ZERO]],
        1: [[ONE, ZERO], [ZERO, ZERO]],
        2: [],
    }
    return spectral.FilteredComplex(None, None, None, 1, 1, combos, weights, diff)


def _recurrence_holds(rep):
    for r in sorted(rep.pages)[:-1]:
        for (p, q), dim_now in rep.pages[r].items():
            out_m = rep.differentials[r].get((p, q), [])
            in_m = rep.differentials[r].get((p - r, q + r - 1), [])
            rank_out = oracles.crank([[(x.re, x.im) for x in row] for row in out_m])
            rank_in = oracles.crank([[(x.re, x.im) for x in row] for row in in_m])
            if rep.pages[r + 1][(p, q)] != dim_now - rank_out - rank_in:
                return False
    return True


def test_c11_spectral_pages_and_convergence():
    hand = spectral.pages(_hand_built_complex())
    assert hand.pages[0] == {(0, 0): 2, (0, 1): 1, (1, 0): 1, (1, 1): 2}
    assert hand.pages[2] == hand.e_infinity
    assert hand.total_cohomology == {0: 2, 1: 1, 2: 1}
    assert _recurrence_holds(hand)

    kt = corpus.kodaira_thurston("invariant")
    triv = bundles.build_bundle(corpus.c_chart(1), 1)
    for bundle in (kt, triv):
        rho = bundles.construct_rho(bundle)
        fc = spectral.build_filtration(
            bundle.total, rho, spectral.fiber_null_space(bundle)
        )
        rep = spectral.pages(fc)
        assert _recurrence_holds(rep)
        gh = dolbeault.gh_cohomology(bundle.total, rho).dims
        n = bundle.total.rank // 2
        for m in range(bundle.total.rank + 1):
            agg = sum(v for (p, q), v in rep.e_infinity.items() if p + q == m)
            assert agg == rep.total_cohomology[m] == gh[n - m]
        if bundle is triv:
            assert rep.stabilization_index == 0
            assert rep.pages[2] == rep.e_infinity
            assert all(not rep.differentials[r] for r in rep.differentials if r >= 2)
            assert spectral.e2_identification(bundle) == rep.pages[2]


def test_c12_cli_determinism_and_exit_codes(capsys):
    plans = [
        ("cohomology", "t2_symp.model", 0),
        ("check", "t2c.model", 0),
        ("btransform", "t4c.model", 0),
        ("spectral", "t2c_triv.model", 0),
        ("spectral", "kt.model", 0),
        ("bundle-verify", "flat56.model", 0),
        ("bundle-verify", "curved47.model", 1),
    ]
    for command, name, want in plans:
        argv = [command, fixture_path(name), "--json"]
        runs = []
        for _ in range(2):
            assert cli.main(argv) == want
            runs.append(capsys.readouterr().out)
        assert runs[0] == runs[1]
        payload = json.loads(runs[0])
        assert payload["schema"] == 1 and payload["command"] == command
    assert cli.main(["check", fixture_path("bad.model")]) == 2
    assert cli.main(["check", fixture_path("missing.model")]) == 2
    err = capsys.readouterr().err
    assert err.count("error") == 2
