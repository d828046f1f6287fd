"""Exact linear algebra over Q(i), plus parity between the compiled row
reduction kernel and its pure-Python twin."""

import random
from fractions import Fraction

import pytest

from gencx import elim, linalg
from gencx.scalars import GaussRational

try:
    from gencx import _elim
except ImportError:
    _elim = None


def G(re, im=0):
    return GaussRational(re, im)


def random_matrix(rng, nrows, ncols, density=0.7):
    out = []
    for _ in range(nrows):
        row = []
        for _ in range(ncols):
            if rng.random() < density:
                row.append(
                    G(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), rng.randint(-2, 2))
                )
            else:
                row.append(G(0))
        out.append(row)
    return out


def test_rank_known_cases():
    assert linalg.rank([]) == 0
    assert linalg.rank([[G(0), G(0)]]) == 0
    assert linalg.rank([[G(1), G(2)], [G(2), G(4)]]) == 1
    assert linalg.rank([[G(1), G(0)], [G(0, 1), G(1)]]) == 2


def test_nullspace_dimension_and_membership():
    matrix = [[G(1), G(1), G(0)], [G(0), G(0), G(1)]]
    null = linalg.nullspace(matrix, 3)
    assert len(null) == 1
    v = null[0]
    for row in matrix:
        s = G(0)
        for a, b in zip(row, v):
            s = s + a * b
        assert not s
    # empty matrix: whole space
    assert len(linalg.nullspace([], 4)) == 4


def test_solve_consistent_and_inconsistent():
    matrix = [[G(1), G(2)], [G(0), G(1)]]
    sol = linalg.solve(matrix, [G(5), G(2)], 2)
    assert sol == [G(1), G(2)]
    assert linalg.solve([[G(1)], [G(1)]], [G(1), G(2)], 1) is None
    assert linalg.solve([], [], 2) == [G(0), G(0)]


def test_inverse_round_trip(rng):
    for _ in range(10):
        n = rng.randint(1, 4)
        m = random_matrix(rng, n, n, density=0.9)
        if linalg.rank(m) < n:
            continue
        inv = linalg.inverse(m)
        prod = linalg.matmul(m, inv)
        for i in range(n):
            for j in range(n):
                assert prod[i][j] == (G(1) if i == j else G(0))


def test_rank_nullity(rng):
    for _ in range(20):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
        m = random_matrix(rng, nrows, ncols)
        r = linalg.rank(m)
        assert r + len(linalg.nullspace(m, ncols)) == ncols


def test_span_and_extension():
    a = [G(1), G(0), G(1)]
    b = [G(0), G(1), G(0)]
    assert linalg.in_span([a, b], [G(1), G(1), G(1)])
    assert not linalg.in_span([a, b], [G(0), G(0), G(1)])
    chosen = linalg.extend_basis([a], [b, [G(2), G(0), G(2)], [G(0), G(0), G(1)]])
    assert len(chosen) == 2


def test_form_vector_round_trip():
    from gencx import corpus

    m = corpus.complex_torus(1)
    f = m.form("dz + 2i*dzb + dz^dzb")
    keys = linalg.coordinate_keys([f])
    vec = linalg.form_to_vector(f, keys)
    back = linalg.vector_to_form(m, keys, vec)
    assert back == f


@pytest.mark.skipif(_elim is None, reason="compiled kernel not built")
def test_kernel_parity(rng):
    """The compiled kernel and the pure twin agree entry for entry."""
    for _ in range(30):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        matrix = [
            [
                (rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(1, 4))
                for _ in range(ncols)
            ]
            for _ in range(nrows)
        ]
        matrix = [[elim.normalize(*t) for t in row] for row in matrix]
        got_c = _elim.rref([list(r) for r in matrix], ncols)
        got_p = elim.rref([list(r) for r in matrix], ncols)
        assert got_c == got_p


@pytest.mark.skipif(_elim is None, reason="compiled kernel not built")
def test_kernel_scalar_ops_parity():
    xs = [(3, -2, 4), (0, 0, 1), (1, 1, 1), (-5, 7, 3)]
    for x in xs:
        for y in xs:
            assert elim.add(x, y) == _elim.add(x, y)
            assert elim.sub(x, y) == _elim.sub(x, y)
            assert elim.mul(x, y) == _elim.mul(x, y)
        assert elim.neg(x) == _elim.neg(x)
        if x != (0, 0, 1):
            assert elim.inv(x) == _elim.inv(x)


def test_kernel_selection_reports():
    assert linalg.kernel_name() in ("compiled", "pure")
