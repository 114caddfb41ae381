"""Exact matrix layer.

The characteristic polynomial is cross-checked against a cofactor-expansion
oracle computed directly in the polynomial ring (a different algorithm from
the Faddeev-LeVerrier implementation under test).
"""

import random
from fractions import Fraction

import pytest

from hyperrank.errors import RankDeficient
from hyperrank.exact import QMat, QPoly, berkowitz_charpoly_mod, hnf_rows
from hyperrank.exact.intmat import mat_mul_mod, mat_pow_mod, primitive_vector


def charpoly_oracle(m: QMat) -> QPoly:
    """det(xI - A) by Laplace expansion over QPoly entries."""
    n = len(m.rows)
    entries = [[QPoly((-m.rows[i][j],)) + (QPoly.x() if i == j else QPoly.zero())
                for j in range(n)] for i in range(n)]

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = QPoly.zero()
        for j, top in enumerate(rows[0]):
            if top.is_zero():
                continue
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = top * det(minor)
            total = total + (term if j % 2 == 0 else -term)
        return total

    return det(entries)


def random_int_matrix(rng, n, lo=-4, hi=4):
    return QMat([[rng.randrange(lo, hi + 1) for _ in range(n)] for _ in range(n)])


def test_charpoly_frozen_2x2():
    # worked example pinned independently of the oracle machinery
    assert QMat([[2, 1], [1, 1]]).charpoly() == QPoly((1, -3, 1))


def test_charpoly_matches_cofactor_oracle():
    rng = random.Random(5)
    for n in (1, 2, 3, 4, 5):
        for _ in range(15):
            m = random_int_matrix(rng, n)
            assert m.charpoly() == charpoly_oracle(m)


def test_charpoly_rational_entries():
    m = QMat([[Fraction(1, 2), 1], [Fraction(-1, 3), 2]])
    assert m.charpoly() == charpoly_oracle(m)


def test_det_vs_charpoly_constant():
    rng = random.Random(6)
    for _ in range(50):
        n = rng.randrange(1, 5)
        m = random_int_matrix(rng, n)
        cp = m.charpoly()
        assert m.det() == (-1) ** n * cp[0]


def test_det_multiplicative():
    rng = random.Random(8)
    for _ in range(30):
        a = random_int_matrix(rng, 3)
        b = random_int_matrix(rng, 3)
        assert (a @ b).det() == a.det() * b.det()


def test_inverse_and_negative_powers():
    rng = random.Random(9)
    count = 0
    while count < 25:
        m = random_int_matrix(rng, 3)
        if m.det() == 0:
            continue
        count += 1
        assert m @ m.inverse() == QMat.identity(3)
        assert m.power(-2) == (m @ m).inverse()
        assert m.power(0) == QMat.identity(3)
        assert m.power(3) == m @ m @ m


def test_inverse_singular_raises():
    with pytest.raises(RankDeficient):
        QMat([[1, 2], [2, 4]]).inverse()


def test_adjugate_identity():
    rng = random.Random(10)
    count = 0
    while count < 20:
        m = random_int_matrix(rng, 3)
        if m.det() == 0:
            continue
        count += 1
        assert m @ m.adjugate() == QMat.identity(3).scalar(m.det())


def test_solve_roundtrip():
    rng = random.Random(12)
    count = 0
    while count < 20:
        a = random_int_matrix(rng, 3)
        if a.det() == 0:
            continue
        count += 1
        x = random_int_matrix(rng, 3)
        assert a.solve(a @ x) == x


def test_kernel_properties():
    rng = random.Random(13)
    for _ in range(40):
        # build a matrix with known nullity by stacking dependent rows
        n = rng.randrange(2, 5)
        rank = rng.randrange(0, n)
        base = [[rng.randrange(-3, 4) for _ in range(n)] for _ in range(rank)]
        rows = list(base)
        while len(rows) < n:
            mix = [sum(rng.randrange(-2, 3) * base[k][j] for k in range(rank))
                   for j in range(n)] if rank else [0] * n
            rows.append(mix)
        m = QMat(rows)
        kern = m.kernel()
        assert len(kern) == n - m.rank()
        for v in kern:
            assert all(x == 0 for x in m.matvec(v))
            assert all(isinstance(x, int) for x in v)


def test_primitive_vector():
    assert primitive_vector([Fraction(2, 3), Fraction(-4, 3)]) == (1, -2)
    assert primitive_vector([Fraction(-2), Fraction(4)]) == (1, -2)
    with pytest.raises(ValueError):
        primitive_vector([0, 0])


def test_hnf_canonical_under_row_mixing():
    rng = random.Random(14)
    for _ in range(30):
        rows = [[rng.randrange(-5, 6) for _ in range(4)] for _ in range(3)]
        h1 = hnf_rows(rows)
        # apply a random unimodular mix: swap, negate, add multiple
        mixed = [list(r) for r in rows]
        for _ in range(10):
            op = rng.randrange(3)
            i, j = rng.randrange(3), rng.randrange(3)
            if op == 0:
                mixed[i], mixed[j] = mixed[j], mixed[i]
            elif op == 1:
                mixed[i] = [-x for x in mixed[i]]
            elif i != j:
                c = rng.randrange(-2, 3)
                mixed[i] = [x + c * y for x, y in zip(mixed[i], mixed[j])]
        assert hnf_rows(mixed) == h1
        assert hnf_rows(h1) == h1  # idempotent


def test_hnf_pivots_reduced():
    h = hnf_rows([[4, 1, 0], [6, 0, 1]])
    # pivot entries positive, entries above pivots reduced into [0, pivot)
    assert h == hnf_rows(h)
    pivcols = []
    for row in h:
        c = next(j for j, x in enumerate(row) if x != 0)
        assert row[c] > 0
        pivcols.append(c)
    assert pivcols == sorted(pivcols)


def test_berkowitz_matches_faddeev_leverrier_mod_q():
    rng = random.Random(15)
    for q in (5, 8, 9, 2 ** 10, 3 ** 6):
        for _ in range(10):
            n = rng.randrange(1, 5)
            m = random_int_matrix(rng, n)
            exact = m.charpoly()
            want = [int(c) % q for c in exact.coeffs]
            assert berkowitz_charpoly_mod(m.int_rows(), q) == want


def test_mat_pow_mod_matches_exact():
    rng = random.Random(16)
    for _ in range(20):
        m = random_int_matrix(rng, 3)
        q = 2 ** 12
        e = rng.randrange(0, 40)
        exact = m.power(e)
        assert mat_pow_mod(m.int_rows(), e, q) == [
            [int(c) % q for c in row] for row in exact.rows]


def test_mat_mul_mod():
    a = [[1, 2], [3, 4]]
    b = [[5, 6], [7, 8]]
    assert mat_mul_mod(a, b, 100) == [[19, 22], [43, 50]]
