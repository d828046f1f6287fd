"""Level decomposition and generalized Dolbeault tables on the reference
structures, cross-checked against independently computed cohomology."""

import math
import random

import pytest

from gencx import bundles, corpus, dolbeault, geometry
from gencx.scalars import GaussRational
from tests import oracles

I = GaussRational(0, 1)


def reference_structures():
    t2 = corpus.symplectic_torus()
    t2c = corpus.complex_torus(1)
    t4c = corpus.complex_torus(2)
    kt = corpus.kodaira_thurston("invariant")
    return [
        (t2, (t2.form("dx^dy") * I).exp()),
        (t2c, t2c.one("dz")),
        (t4c, t4c.form("dz1^dz2")),
        (kt.total, bundles.construct_rho(kt)),
    ]


def test_level_dimensions_are_binomial():
    for model, rho in reference_structures():
        ud = dolbeault.ui_decomposition(model, rho)
        n = model.rank // 2
        assert ud.top == n
        assert ud.levels() == list(range(-n, n + 1))
        for k in range(model.rank + 1):
            assert ud.dim(n - k) == math.comb(model.rank, k)
        assert ud.total_dim() == 2**model.rank


def test_rejections():
    t4c = corpus.complex_torus(2)
    with pytest.raises(ValueError):
        dolbeault.ui_decomposition(t4c, t4c.one("dz1"))  # not pure
    chart = corpus.c_chart(1)
    with pytest.raises(ValueError):
        dolbeault.ui_decomposition(chart, chart.one("dz"))  # not invariant
    odd = corpus.angle_torus(("x", "y", "w"))
    with pytest.raises(ValueError):
        dolbeault.ui_decomposition(odd, odd.scalar(1))  # odd rank


def _matmul(A, B):
    if not A or not B:
        return []
    return [
        [sum((a * b for a, b in zip(row, col)), GaussRational(0)) for col in zip(*B)]
        for row in A
    ]


def _madd(A, B):
    if not A:
        return B
    if not B:
        return A
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def _is_zero(M):
    return all(not x for row in M for x in row)


def test_split_d_pieces_anticommute():
    for model, rho in reference_structures():
        ud = dolbeault.ui_decomposition(model, rho)
        del_ops, dbar_ops = dolbeault.split_d(model, ud)
        for i in ud.levels():
            if i + 1 in del_ops:
                assert _is_zero(_matmul(del_ops[i + 1], del_ops[i]))
            if i - 1 in dbar_ops:
                assert _is_zero(_matmul(dbar_ops[i - 1], dbar_ops[i]))
            mixed = _madd(
                _matmul(dbar_ops.get(i + 1, []), del_ops[i]),
                _matmul(del_ops.get(i - 1, []), dbar_ops[i]),
            )
            assert _is_zero(mixed)


def test_split_d_rejects_nonintegrable_spinor():
    kt = corpus.kodaira_thurston("invariant")
    m = kt.total
    omega = m.form("th1^th2 + 1/2i*dz^dzb")
    assert omega.is_real() and omega.d()
    rho = (omega * I).exp()
    ud = dolbeault.ui_decomposition(m, rho)  # still pure
    with pytest.raises(ValueError):
        dolbeault.split_d(m, ud)


def test_symplectic_torus_table_matches_de_rham():
    t2 = corpus.symplectic_torus()
    table = dolbeault.gh_cohomology(t2, (t2.form("dx^dy") * I).exp())
    assert [table.dims[1 - k] for k in range(3)] == oracles.torus_betti(2)
    assert table.dims == {1: 1, 0: 2, -1: 1}
    assert table.euler() == 0


def test_complex_torus_tables_match_dolbeault_counts():
    t2c = corpus.complex_torus(1)
    table1 = dolbeault.gh_cohomology(t2c, t2c.one("dz"))
    assert table1.dims == oracles.complex_torus_gh(1)
    t4c = corpus.complex_torus(2)
    table2 = dolbeault.gh_cohomology(t4c, t4c.form("dz1^dz2"))
    assert table2.dims == oracles.complex_torus_gh(2)
    assert table2.euler() == 0 and table2.total() == 16


def test_nilmanifold_bundle_table():
    kt = corpus.kodaira_thurston("invariant")
    table = dolbeault.gh_cohomology(kt.total, bundles.construct_rho(kt))
    assert [table.dims[2 - k] for k in range(5)] == [1, 3, 4, 3, 1]
    # the invariant de Rham complex of the same model has matching ranks
    struct = oracles.struct_of_model(kt.total)
    assert oracles.cochain_betti(kt.total.rank, struct) == [1, 3, 4, 3, 1]
    assert table.euler() == 0 and table.total() == 12


def test_b_transform_leaves_table_unchanged():
    rng = random.Random(21)
    for model, rho in reference_structures():
        for _ in range(3):
            B = corpus.random_closed_b_field(rng, model)
            assert dolbeault.compare_b_transform(model, rho, B)


def test_table_rendering_lists_levels():
    t2c = corpus.complex_torus(1)
    text = str(dolbeault.gh_cohomology(t2c, t2c.one("dz")))
    lines = text.splitlines()
    assert lines[0].split() == ["level", "dim"]
    assert len(lines) == 4
