"""Joint Lyapunov spectra: real and p-adic refinement, chambers, expansion.

Oracles: hand-computed eigenvalue data for the frozen fixtures, diagonal
models conjugated by unimodular matrices for the subspace engine, and
per-generator marginals (single-matrix spectra) for random commuting pairs.
"""

import math
import random
from fractions import Fraction

import pytest

from hyperrank.errors import CommutativityViolated, RankDeficient
from hyperrank.exact import QMat
from hyperrank.spectra import (ActionSpec, LyapunovFunctional, LyapunovSpectrum,
                               coarse_classes, diophantine_profile,
                               expanding_elements, joint_spectrum,
                               min_expansion_rate, padic_lyapunov,
                               real_lyapunov, weyl_chambers)

CAT = [[2, 1], [1, 1]]
FIB = [[1, 1], [1, 0]]
L_CAT = math.log((3 + math.sqrt(5)) / 2)     # 0.9624236501192069
L_FIB = math.log((1 + math.sqrt(5)) / 2)     # 0.48121182505960347


def spectrum_of(*gens, **kw):
    return joint_spectrum(ActionSpec(tuple(gens)), **kw)


def synthetic(rank, rows):
    """Hand-built spectrum for the pure cone/rate combinatorics."""
    funcs = tuple(LyapunovFunctional(place=pl, values=tuple(map(float, v)),
                                     multiplicity=1, exact=ex)
                  for pl, v, ex in rows)
    return LyapunovSpectrum(dim=len(rows), rank=rank, functionals=funcs,
                            product_residual=0.0)


class TestActionSpec:
    def test_rejects_non_commuting(self):
        with pytest.raises(CommutativityViolated) as ei:
            ActionSpec(([[1, 1], [0, 1]], [[1, 0], [1, 1]]))
        assert ei.value.pair == (0, 1)

    def test_rejects_singular(self):
        with pytest.raises(RankDeficient):
            ActionSpec(([[1, 2], [2, 4]],))

    def test_rejects_rational_entries(self):
        with pytest.raises(ValueError):
            ActionSpec((QMat([[Fraction(1, 2), 0], [0, 1]]),))

    def test_element_products(self):
        act = ActionSpec((CAT, FIB))
        assert act.element((1, 0)) == QMat(CAT)
        assert act.element((0, 2)) == QMat(FIB) @ QMat(FIB)
        assert act.element((1, -2)) == QMat.identity(2)  # cat = fib^2
        assert act.element((0, 0)) == QMat.identity(2)

    def test_primes_union(self):
        act = ActionSpec(([[2, 0], [0, 3]], [[3, 0], [0, 2]]))
        assert act.primes() == [2, 3]
        assert ActionSpec((CAT,)).primes() == []


class TestSingleMatrixSpectra:
    def test_cat_map_exponents_frozen(self):
        spec = real_lyapunov(CAT)
        assert len(spec) == 2
        assert spec[0][1] == 1 and spec[1][1] == 1
        assert abs(spec[0][0] + L_CAT) < 1e-9
        assert abs(spec[1][0] - L_CAT) < 1e-9

    def test_homothety_multiplicity(self):
        assert real_lyapunov([[2, 0], [0, 2]]) == [(pytest.approx(math.log(2)), 2)]

    def test_rotation_zero_exponents(self):
        (v, m), = real_lyapunov([[0, -1], [1, 0]])
        assert m == 2 and abs(v) < 1e-12

    def test_padic_unimodular_trivial(self):
        assert padic_lyapunov(CAT, 2) == [(Fraction(0), 2)]

    def test_padic_doubling(self):
        assert padic_lyapunov([[2]], 2) == [(Fraction(1), 1)]

    def test_padic_ramified_half_slope(self):
        # x^2 + 2: both roots have valuation 1/2
        assert padic_lyapunov([[0, -2], [1, 0]], 2) == [(Fraction(1, 2), 2)]

    def test_padic_split_slopes(self):
        # eigenvalues 2 and 3
        assert padic_lyapunov([[2, 1], [0, 3]], 2) == [(Fraction(0), 1),
                                                       (Fraction(1), 1)]


class TestJointSpectrum:
    def test_fibonacci_pair_real(self):
        spec = spectrum_of(CAT, FIB)
        assert spec.places == ["real"]
        funcs = sorted(spec.functionals, key=lambda f: f.values[0])
        assert [f.multiplicity for f in funcs] == [1, 1]
        assert abs(funcs[0].values[0] + 2 * L_FIB) < 1e-9
        assert abs(funcs[0].values[1] + L_FIB) < 1e-9
        assert abs(funcs[1].values[0] - 2 * L_FIB) < 1e-9
        assert abs(funcs[1].values[1] - L_FIB) < 1e-9
        assert spec.product_residual < 1e-9

    def test_diagonal_model_conjugated(self):
        # S diag(2,2,3) S^-1 and S diag(3,2,2) S^-1 for unimodular S: the
        # functionals must match the diagonal model place by place.
        a = [[2, 0, 0], [0, 2, 1], [0, 0, 3]]
        b = [[3, -1, 1], [0, 2, 0], [0, 0, 2]]
        spec = spectrum_of(a, b)
        assert spec.places == ["real", 2, 3]
        two = {(f.exact, f.multiplicity) for f in spec.by_place(2)}
        assert two == {((Fraction(1), Fraction(0)), 1),
                       ((Fraction(1), Fraction(1)), 1),
                       ((Fraction(0), Fraction(1)), 1)}
        three = {(f.exact, f.multiplicity) for f in spec.by_place(3)}
        assert three == {((Fraction(0), Fraction(1)), 1),
                         ((Fraction(0), Fraction(0)), 1),
                         ((Fraction(1), Fraction(0)), 1)}
        reals = sorted((tuple(round(v, 9) for v in f.values), f.multiplicity)
                       for f in spec.by_place("real"))
        l2, l3 = round(math.log(2), 9), round(math.log(3), 9)
        assert reals == sorted([((l2, l3), 1), ((l2, l2), 1), ((l3, l2), 1)])

    def test_fractional_slopes_stay_exact(self):
        # A^2 = -2I, so A and A^3 = -2A have 2-adic eigenvalue valuations
        # 1/2 and 3/2, each with multiplicity 2.
        a = QMat([[0, -2], [1, 0]])
        spec = spectrum_of(a, a.power(3))
        (f2,) = spec.by_place(2)
        assert f2.exact == (Fraction(1, 2), Fraction(3, 2))
        assert f2.multiplicity == 2
        (fr,) = spec.by_place("real")
        assert fr.multiplicity == 2
        assert abs(fr.values[0] - 0.5 * math.log(2)) < 1e-9
        assert abs(fr.values[1] - 1.5 * math.log(2)) < 1e-9

    def test_precision_retry_on_deep_valuation(self):
        # v_2 = 40 exceeds the 32-digit base precision; the retry must land it.
        spec = spectrum_of([[2 ** 40]])
        (f2,) = spec.by_place(2)
        assert f2.exact == (Fraction(40),)

    def test_product_formula_and_marginals_random(self):
        rng = random.Random(1105)
        done = 0
        while done < 8:
            a = QMat([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
            if a.det() == 0:
                continue
            b = a @ a - a.scalar(2) + QMat.identity(3).scalar(3)
            if b.det() == 0 or not b.is_integer():
                continue
            act = ActionSpec((a, b))
            spec = joint_spectrum(act)
            assert spec.product_residual <= 1e-9 * act.dim
            for g, gen in enumerate(act.generators):
                for p in act.primes():
                    marg = {}
                    for f in spec.by_place(p):
                        v = f.exact[g]
                        marg[v] = marg.get(v, 0) + f.multiplicity
                    oracle = dict(padic_lyapunov(gen, p))
                    assert marg == oracle, (a, p, g)
                joint = _merge({}, ((f.values[g], f.multiplicity)
                                    for f in spec.by_place("real")))
                single = _merge({}, real_lyapunov(gen))
                assert _close_multisets(joint, single), (a, g)
            done += 1


def _merge(out, pairs, tol=1e-6):
    for v, m in pairs:
        for key in out:
            if abs(key - v) <= tol:
                out[key] += m
                break
        else:
            out[v] = m
    return out


def _close_multisets(d1, d2, tol=1e-5):
    if sum(d1.values()) != sum(d2.values()):
        return False
    left = sorted(d1.items())
    right = sorted(d2.items())
    i = j = 0
    while i < len(left) and j < len(right):
        v1, m1 = left[i]
        v2, m2 = right[j]
        if abs(v1 - v2) > tol:
            return False
        take = min(m1, m2)
        m1 -= take
        m2 -= take
        if m1 == 0:
            i += 1
        else:
            left[i] = (v1, m1)
        if m2 == 0:
            j += 1
        else:
            right[j] = (v2, m2)
    return i == len(left) and j == len(right)


class TestConesAndRates:
    def test_coarse_classes_fibonacci(self):
        spec = spectrum_of(CAT, FIB)
        assert sorted(map(len, coarse_classes(spec))) == [1, 1]

    def test_coarse_classes_synthetic(self):
        spec = synthetic(2, [("real", (1, 2), None),
                             ("real", (3, 6), None),
                             ("real", (-1, -2), None),
                             ("real", (0, 0), None),
                             ("real", (0, 0), None)])
        classes = coarse_classes(spec)
        as_sets = sorted(map(tuple, classes))
        assert as_sets == [(0, 1), (2,), (3, 4)]

    def test_coarse_classes_exact_padic(self):
        spec = synthetic(2, [(2, (-0.6931, -1.3863), (Fraction(1), Fraction(2))),
                             (2, (-1.3863, -2.7726), (Fraction(2), Fraction(4))),
                             (2, (0.6931, 1.3863), (Fraction(-1), Fraction(-2)))])
        classes = coarse_classes(spec)
        assert sorted(map(tuple, classes)) == [(0, 1), (2,)]

    def test_weyl_six_chambers(self):
        spec = synthetic(2, [("real", (1, 0), None),
                             ("real", (0, 1), None),
                             ("real", (1, 1), None)])
        chambers = weyl_chambers(spec)
        assert len(chambers) == 6
        assert len({c.signs for c in chambers}) == 6
        for c in chambers:
            vals = [f.value_at(c.representative) for f in spec.functionals]
            assert all(abs(v) > 1e-9 for v in vals)
            assert tuple(1 if v > 0 else -1 for v in vals) == c.signs

    def test_weyl_two_chambers_single_line(self):
        spec = spectrum_of(CAT, FIB)
        chambers = weyl_chambers(spec)
        assert len(chambers) == 2
        assert chambers[0].signs == tuple(-s for s in chambers[1].signs)

    def test_weyl_exact_rays_from_padic(self):
        spec = spectrum_of([[2, 0], [0, 1]], [[1, 0], [0, 2]])
        chambers = weyl_chambers(spec)
        assert len(chambers) == 4
        rays = {r for c in chambers for r in c.boundary_rays if r is not None}
        assert rays == {(0, 1), (0, -1), (1, 0), (-1, 0)}

    def test_weyl_requires_rank_two(self):
        with pytest.raises(ValueError):
            weyl_chambers(spectrum_of([[2]]))

    def test_expanding_elements_automorphisms_never(self):
        spec = spectrum_of(CAT, FIB)
        assert expanding_elements(spec, 5) == []

    def test_expanding_elements_doubling(self):
        spec = spectrum_of([[2]])
        assert expanding_elements(spec, 2) == [(1,), (2,)]

    def test_min_rate_axis_pair(self):
        spec = synthetic(2, [("real", (1, 0), None), ("real", (0, 1), None)])
        assert abs(min_expansion_rate(spec) - 1.0) < 1e-9

    def test_min_rate_diagonal_pair(self):
        spec = synthetic(2, [("real", (1, 1), None), ("real", (1, -1), None)])
        assert abs(min_expansion_rate(spec) - 1.0) < 1e-9

    def test_min_rate_rank_one(self):
        spec = synthetic(1, [("real", (2,), None), ("real", (-3,), None)])
        assert abs(min_expansion_rate(spec) - 3.0) < 1e-9

    def test_min_rate_scales(self):
        base = synthetic(2, [("real", (1, 0), None), ("real", (0, 1), None)])
        doubled = synthetic(2, [("real", (2, 0), None), ("real", (0, 2), None)])
        assert abs(min_expansion_rate(doubled) - 2 * min_expansion_rate(base)) < 1e-9


class TestDiophantine:
    def test_golden_ratio_profile_frozen(self):
        phi = (1 + math.sqrt(5)) / 2
        c, z = diophantine_profile((1.0, phi), 1, 12)
        assert abs(c - (phi - 1)) < 1e-9
        assert sorted(map(abs, z)) == [1, 1]

    def test_matches_independent_brute_force(self):
        w = (1.0, math.sqrt(2))
        c, z = diophantine_profile(w, 2, 8)
        best = None
        for z1 in range(-8, 9):
            for z2 in range(-8, 9):
                if z1 == 0 and z2 == 0:
                    continue
                n = max(abs(z1), abs(z2))
                val = abs(z1 * w[0] + z2 * w[1]) * n ** 2
                if best is None or val < best:
                    best = val
        assert abs(c - best) < 1e-12
