"""Generalized-geometry layer: the split pairing, Courant bracket, spinor
module structure, Mukai pairing, purity and integrability certificates."""

import random

import pytest

from gencx import corpus, geometry
from gencx.model import VectorField
from gencx.scalars import GaussRational

from tests.conftest import model_corpus, random_form, random_vector


def _random_section(rng, model):
    X = random_vector(rng, model)
    xi = random_form(rng, model, degree=1, nterms=2)
    return geometry.GenVector(X, xi)


def test_pairing_polarization():
    m = corpus.complex_torus(1)
    u = geometry.GenVector(m.vector("dz"), m.zero())
    v = geometry.GenVector(VectorField(m, {}), m.one("dz"))
    # <X, xi> = xi(X)/2 on a pure frame / pure covector pair
    assert geometry.inner_pairing(u, v).constant_value() == GaussRational(1) / 2
    assert not geometry.inner_pairing(u, u)


def test_clifford_identity_randomized():
    rng = random.Random(7)
    for model in model_corpus():
        for _ in range(15):
            u = _random_section(rng, model)
            phi = random_form(rng, model, degree=rng.randrange(model.rank + 1))
            lhs = geometry.spinor_action(u, geometry.spinor_action(u, phi))
            assert lhs == phi * geometry.inner_pairing(u, u)


def test_b_shear_preserves_pairing():
    rng = random.Random(11)
    for model in model_corpus():
        for _ in range(10):
            u = _random_section(rng, model)
            v = _random_section(rng, model)
            B = random_form(rng, model, degree=2, nterms=2)
            B = B + B.conj()  # real; closedness is not needed for the pairing
            su = geometry.b_shear(u, B)
            sv = geometry.b_shear(v, B)
            assert geometry.inner_pairing(su, sv) == geometry.inner_pairing(u, v)


def test_courant_bracket_sees_structure_constants():
    kt = corpus.kodaira_thurston().total
    u = geometry.GenVector(kt.vector("dz"), kt.zero())
    v = geometry.GenVector(kt.vector("dzb"), kt.zero())
    br = geometry.courant_bracket(u, v)
    # d th2 = (i/2) dz^dzb forces [e_z, e_zb] = -(i/2) e_th2
    want = geometry.GenVector(
        kt.vector("th2", GaussRational(0, -1) / 2), kt.zero()
    )
    assert br == want


def test_courant_bracket_exact_one_form_term():
    m = corpus.c_chart(1)
    z, zb = m.var("z"), m.var("zb")
    u = geometry.GenVector(m.vector("dz"), m.zero())
    v = geometry.GenVector(VectorField(m, {}), m.one("dz", z * zb))
    # [X, f dz] = (L_X f dz) - d(f dz(X))/2 with X the frame dual of dz
    br = geometry.courant_bracket(u, v)
    lie = m.one("dz", z * zb).lie(u.vec)
    correction = m.one("dz", z * zb).interior(u.vec)
    half = GaussRational(1) / 2
    want = geometry.GenVector(VectorField(m, {}), lie - correction.d() * half)
    assert br == want


def test_mukai_pairing_top_degree():
    m = corpus.complex_torus(1)
    s1 = m.form("1 + dz^dzb")
    s2 = m.form("dz^dzb")
    assert geometry.mukai_pairing(s1, s2) == m.form("dz^dzb")
    # degree mismatch contributes nothing
    assert not geometry.mukai_pairing(m.one("dz"), m.scalar(1))


def test_gcs_spec_validation():
    m = corpus.complex_torus(1)
    with pytest.raises(ValueError):
        geometry.GcsSpec(m, B=m.form("dz^dzb")).spinor()  # B not real
    with pytest.raises(ValueError):
        geometry.GcsSpec(m, omega=m.one("dz")).spinor()  # omega not degree 2


def test_pure_spinor_on_reference_structures():
    sym = corpus.symplectic_torus()
    rho, rep = geometry.pure_spinor(
        geometry.GcsSpec(sym, omega=sym.form("dx^dy"))
    )
    assert rep.ok and rep.mode == "constant-volume"
    assert geometry.type_at(rho) == 0

    t2c = corpus.complex_torus(1)
    rho2, rep2 = geometry.pure_spinor(geometry.GcsSpec(t2c, Omega=t2c.one("dz")))
    assert rep2.ok
    assert geometry.type_at(rho2) == 1


def test_degenerate_spinor_rejected():
    m = corpus.complex_torus(1)
    # the bare scalar 1 has vanishing Mukai square in rank 2
    with pytest.raises(ValueError):
        geometry.pure_spinor(geometry.GcsSpec(m))


def _reference_structures():
    sym = corpus.symplectic_torus()
    t2c = corpus.complex_torus(1)
    t4c = corpus.complex_torus(2)
    kt = corpus.kodaira_thurston().total
    return [
        (sym, geometry.GcsSpec(sym, omega=sym.form("dx^dy"))),
        (t2c, geometry.GcsSpec(t2c, Omega=t2c.one("dz"))),
        (t4c, geometry.GcsSpec(t4c, Omega=t4c.form("dz1^dz2"))),
        (kt, geometry.GcsSpec(kt, omega=kt.form("th1^th2"), Omega=kt.one("dz"))),
    ]


def test_annihilator_is_isotropic_and_half_rank():
    for model, gcs in _reference_structures():
        rho, _ = geometry.pure_spinor(gcs)
        point = None if model.invariant else geometry.sample_grid(model)[0]
        L = geometry.annihilator(rho, point=point)
        assert len(L) == model.rank
        for a in L:
            for b in L:
                pairing = geometry.inner_pairing(a, b)
                assert not pairing
            assert not geometry.spinor_action(a, rho)


def test_annihilator_rejects_impure_line():
    m = corpus.complex_torus(2)
    # dz1 is decomposable but its annihilator in rank 8 is too big to be
    # a GCS line: L meets its conjugate
    with pytest.raises(ValueError):
        geometry.annihilator(m.one("dz1"))


def test_integrability_witness_closed_case():
    t2c = corpus.complex_torus(1)
    w = geometry.integrability_witness(t2c.one("dz"))
    assert w.status == "zero" and w.integrable
    assert not geometry.spinor_action(w.u, t2c.one("dz"))


def test_integrability_witness_character_case():
    m = corpus.trivial_chart_bundle(1, 1).total
    e = m.char(1, 0)
    rho = m.one("dt1", e) + m.one("dt2", e * GaussRational(0, 1))
    w = geometry.integrability_witness(rho)
    assert w.status == "witness" and w.integrable
    assert geometry.spinor_action(w.u, rho) == rho.d()


def test_integrability_witness_outside_ring():
    m = corpus.c_chart(1)
    z, zb = m.var("z"), m.var("zb")
    rho = m.one("dz", z * zb + 1)
    # d rho = -z dz^dzb needs the non-polynomial factor z/(1+z zb)
    w = geometry.integrability_witness(rho)
    assert w.status == "no-witness-in-ring"
    assert not w.integrable
    assert w.residual == rho.d()


def test_type_jumps_along_the_chart():
    m = corpus.c_chart(1)
    rho = m.fn(m.var("z")) + m.one("dz")
    assert geometry.type_at(rho, {"z": GaussRational(0)}) == 1
    assert geometry.type_at(rho, {"z": GaussRational(1)}) == 0


def test_b_transform_validation_and_action():
    m = corpus.complex_torus(1)
    rho = m.one("dz")
    with pytest.raises(ValueError):
        geometry.b_transform(rho, m.form("dz^dzb"))  # not real
    c2 = corpus.c_chart(2)
    bad = c2.form("i*z2*zb2*dz1^dzb1")
    assert bad.is_real() and bad.d()
    with pytest.raises(ValueError):
        geometry.b_transform(c2.form("dz1^dz2"), bad)  # not closed

    t4 = corpus.complex_torus(2)
    Omega = t4.form("dz1^dz2")
    B = t4.form("i*dzb1^dzb2 - i*dz1^dz2")
    assert B.is_real() and not B.d()
    sheared = geometry.b_transform(Omega, B)
    assert sheared.degree_part(2) == Omega
    assert sheared.degree_part(4) == B ^ Omega
