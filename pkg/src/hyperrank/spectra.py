"""Lyapunov spectra of commuting integer-matrix actions, at every place.

The joint spectrum is computed by sequential invariant-subspace refinement:

* real place: numerical, splitting each block by the log-modulus clusters of
  the restricted generator (numpy eigenvalues; group subspaces are null
  spaces of the group's own characteristic factor evaluated on the block).

* p-adic places: exact, mod p^K.  A block is split by the Newton-polygon
  slope classes of the restricted generator: powering by the lcm of slope
  denominators makes the valuations integral without changing the invariant
  subspaces, then slope-class factors are peeled off by Hensel-splitting the
  unit part and shifting x -> p x, and each class subspace is realized as the
  saturated column span of the complementary factors evaluated on the block.
  Precision loss is tracked; PrecisionExhausted triggers a retry at doubled
  precision from the exact integer inputs.

Valuations are exact Fractions end to end; only the final functional values
(v times log p, log moduli) are floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (CommutativityViolated, PrecisionExhausted, RankDeficient,
                     RootFindingFailure)
from .exact import QMat, primitive_vector, vp_int
from .exact.intmat import (berkowitz_charpoly_mod, mat_mod, mat_mul_mod,
                           mat_pow_mod)
from .exact.modp import hensel_lift
from .exact.newton import lower_hull, newton_polygon


def _factor_int(n: int):
    """Prime factorization of |n| by trial division (desk-scale determinants)."""
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class ActionSpec:
    """k commuting nonsingular integer matrices acting on the d-torus (and on
    its solenoid extension when determinants are not +-1)."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(g if isinstance(g, QMat) else QMat(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("need at least one generator")
        d = gens[0].shape[0]
        for i, g in enumerate(gens):
            if not g.is_square() or g.shape[0] != d:
                raise ValueError(f"generator {i} is not square of dimension {d}")
            if not g.is_integer():
                raise ValueError(f"generator {i} has non-integer entries")
            if g.det() == 0:
                raise RankDeficient(f"generator {i} is singular")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if gens[i] @ gens[j] != gens[j] @ gens[i]:
                    raise CommutativityViolated(i, j)

    @property
    def dim(self):
        return self.generators[0].shape[0]

    @property
    def rank(self):
        return len(self.generators)

    def dets(self):
        return [int(g.det()) for g in self.generators]

    def primes(self):
        """Primes dividing any generator determinant, ascending."""
        out = set()
        for det in self.dets():
            out.update(_factor_int(det))
        return sorted(out)

    def element(self, a):
        """rho(a) = prod generators[i]^a[i]; rational when any a[i] < 0."""
        if len(a) != self.rank:
            raise ValueError(f"element vector must have length {self.rank}")
        out = QMat.identity(self.dim)
        for g, e in zip(self.generators, a):
            if e:
                out = out @ g.power(int(e))
        return out


@dataclass(frozen=True)
class LyapunovFunctional:
    """One joint Lyapunov functional: its place ('real' or a prime p), the
    value vector over the generators, exact valuations when p-adic, and the
    dimension of its subspace."""

    place: object              # 'real' or int prime
    values: tuple              # floats, one per generator
    multiplicity: int
    exact: tuple = None        # Fractions (valuations per generator) for p-adic

    def value_at(self, a):
        return sum(v * float(e) for v, e in zip(self.values, a))

    def exact_at(self, a):
        if self.exact is None:
            raise ValueError("real functionals carry no exact valuations")
        return sum(v * int(e) for v, e in zip(self.exact, a))


@dataclass(frozen=True)
class LyapunovSpectrum:
    dim: int
    rank: int
    functionals: tuple
    product_residual: float    # max over generators of |sum mult * value| (all places)

    def by_place(self, place):
        return [f for f in self.functionals if f.place == place]

    @property
    def places(self):
        seen = []
        for f in self.functionals:
            if f.place not in seen:
                seen.append(f.place)
        return seen


# --- single-matrix spectra --------------------------------------------------


def real_lyapunov(matrix, tol=1e-9):
    """[(log|lambda|, multiplicity)] ascending, clustered within tol."""
    m = matrix if isinstance(matrix, QMat) else QMat(matrix)
    if m.det() == 0:
        raise RankDeficient("singular matrix has a -infinity exponent")
    arr = np.array([[float(c) for c in row] for row in m.rows])
    logm = np.sort(np.log(np.abs(np.linalg.eigvals(arr))))
    out = []
    for v in logm:
        if out and v - out[-1][0] <= max(tol, 1e-10):
            val, mult = out[-1]
            out[-1] = ((val * mult + v) / (mult + 1), mult + 1)
        else:
            out.append((float(v), 1))
    return [(float(v), m_) for v, m_ in out]


def padic_lyapunov(matrix, p):
    """[(valuation, multiplicity)] of the eigenvalues in Q_p-bar, exact,
    ascending by valuation.  Newton polygon of the characteristic polynomial."""
    m = matrix if isinstance(matrix, QMat) else QMat(matrix)
    cp = m.charpoly()
    if cp[0] == 0:
        raise RankDeficient("singular matrix has an eigenvalue 0")
    return list(newton_polygon(cp, p).slopes)


# --- real joint refinement --------------------------------------------------


def _matpoly(coeffs_desc, M):
    out = np.zeros_like(M)
    for c in coeffs_desc:
        out = out @ M + c * np.eye(M.shape[0])
    return out


def _nullspace(P, expect, context):
    u, s, vt = np.linalg.svd(P)
    scale = max(s[0], 1.0)
    small = int(np.sum(s <= 1e-8 * scale))
    if small != expect:
        raise RootFindingFailure(
            f"{context}: null space dimension {small}, expected {expect}; "
            "eigenvalue clusters not separated at working tolerance")
    return vt[len(s) - expect:].T


def _real_refine(action: ActionSpec, tol):
    d = action.dim
    gens = [np.array(g.int_rows(), dtype=float) for g in action.generators]
    blocks = [(np.eye(d), [])]
    for A in gens:
        nxt = []
        for Q, vals in blocks:
            Ar = Q.T @ A @ Q
            eigs = np.linalg.eigvals(Ar)
            logm = np.log(np.abs(eigs))
            order = np.argsort(logm)
            groups = [[order[0]]]
            for idx in order[1:]:
                if logm[idx] - logm[groups[-1][-1]] <= max(tol, 1e-10):
                    groups[-1].append(idx)
                else:
                    groups.append([idx])
            if len(groups) == 1:
                nxt.append((Q, vals + [float(np.mean(logm))]))
                continue
            for grp in groups:
                q = np.real(np.poly(eigs[grp]))  # conjugates share |.|, so real
                P = _matpoly(q, Ar)
                null = _nullspace(P, len(grp), f"block split at |eig| group")
                Qg, _ = np.linalg.qr(Q @ null)
                nxt.append((Qg, vals + [float(np.mean(logm[grp]))]))
        blocks = nxt
    out = [(tuple(vals), Q.shape[1]) for Q, vals in blocks]
    assert sum(m for _, m in out) == d
    return out


# --- p-adic joint refinement ------------------------------------------------


_MIN_PREC = 4  # digits below which saturation results are not trusted


def _polygon_classes(coeffs, p, W):
    """Slope classes [(valuation Fraction >= 0, multiplicity)] of a monic
    polynomial known mod p^W.  Raises PrecisionExhausted when a coefficient
    indistinguishable from zero could cut the hull."""
    degree = len(coeffs) - 1
    pts, skipped = [], []
    for i, c in enumerate(coeffs):
        if c == 0:
            if i == 0:
                raise PrecisionExhausted(
                    "constant term is 0 mod p^W; determinant valuation >= precision")
            if i < degree:
                skipped.append(i)
            continue
        pts.append((i, Fraction(vp_int(c, p))))
    hull = lower_hull(pts)

    def hull_height(i):
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                return y1 + Fraction(y2 - y1, x2 - x1) * (i - x1)
        return None

    for i in skipped:
        h = hull_height(i)
        if h is not None and h >= W:
            raise PrecisionExhausted(
                f"hull at index {i} reaches the precision ceiling {W}")
    classes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        val = Fraction(-(y2 - y1), x2 - x1)
        if classes and classes[-1][0] == val:
            classes[-1] = (val, classes[-1][1] + (x2 - x1))
        else:
            classes.append((val, x2 - x1))
    classes.reverse()
    if any(v < 0 for v, _ in classes):
        raise PrecisionExhausted("negative slope from a p-integral matrix: "
                                 "precision artifact")
    return classes


def _eval_poly_mat(coeffs, M, q):
    n = len(M)
    out = [[0] * n for _ in range(n)]
    for c in reversed(coeffs):
        out = mat_mul_mod(out, M, q)
        for i in range(n):
            out[i][i] = (out[i][i] + c) % q
    return out


def _slope_class_factors(F, p, W):
    """Split monic F (integer root valuations, known mod p^W) into slope-class
    factors: [(coeffs mod p^W', integer valuation, W')]."""
    classes = _polygon_classes(F, p, W)
    if any(v.denominator != 1 for v, _ in classes):
        raise ValueError("slope-class split requires integral valuations")
    if len(classes) == 1:
        return [(list(F), int(classes[0][0]), W)]
    degree = len(F) - 1
    vmax = int(max(v for v, _ in classes))
    if W < _MIN_PREC + vmax * degree:
        raise PrecisionExhausted(
            f"need about {vmax * degree} spare digits for slope shifts, have {W}")
    if min(v for v, _ in classes) == 0:
        # unit part splits off mod p: F = x^w * U with U(0) != 0
        fbar = [c % p for c in F]
        w = next(i for i, c in enumerate(fbar) if c != 0)
        unit_part = fbar[w:]
        g_plus, g_zero = hensel_lift(F, [[0] * w + [1], unit_part], p, W)
        return _slope_class_factors(g_plus, p, W) + [(g_zero, 0, W)]
    # every valuation >= 1: substitute x -> p x (divide roots by p), recurse
    shifted = [F[i] // p ** (degree - i) for i in range(len(F))]
    W1 = W - degree
    q1 = p ** W1
    shifted = [c % q1 for c in shifted]
    out = []
    for g1, v1, Wg in _slope_class_factors(shifted, p, W1):
        dg = len(g1) - 1
        qg = p ** Wg
        g = [g1[i] * p ** (dg - i) % qg for i in range(len(g1))]
        out.append((g, v1 + 1, Wg))
    return out


def _saturate_columns(cols, p, W, expect_dim):
    """Saturated lattice basis of the column span, in pivot-identity form.

    Returns (basis columns, pivot rows, remaining precision).  Gauss-Jordan
    with global-minimal-valuation pivoting; each pivot division by p^v costs v
    digits of working precision.
    """
    q = p ** W
    cols = [[x % q for x in c] for c in cols]
    n = len(cols[0]) if cols else 0
    basis, pivots = [], []
    while True:
        best = None
        for j, c in enumerate(cols):
            for i, x in enumerate(c):
                if x != 0:
                    v = vp_int(x, p)
                    if v < W and (best is None or v < best[0]):
                        best = (v, j, i)
        if best is None:
            break
        v, j, i = best
        c = cols.pop(j)
        if v > 0:
            W -= v
            if W < _MIN_PREC:
                raise PrecisionExhausted("pivot divisions consumed the precision")
            q = p ** W
            c = [(x // p ** v) % q for x in c]
            cols = [[x % q for x in col] for col in cols]
            basis = [[x % q for x in b] for b in basis]
        c = [x * pow(c[i], -1, q) % q for x in c]
        c[i] = 1
        for arr in (cols, basis):
            for cc in arr:
                f = cc[i] % q
                if f:
                    for r in range(n):
                        cc[r] = (cc[r] - f * c[r]) % q
                    cc[i] = 0
        basis.append(c)
        pivots.append(i)
        if len(basis) > expect_dim:
            raise PrecisionExhausted(
                f"span dimension exceeds expected {expect_dim}")
    if len(basis) != expect_dim:
        raise PrecisionExhausted(
            f"span dimension {len(basis)}, expected {expect_dim}")
    return basis, pivots, W


def _restrict(gen, basis, pivots, p, W):
    """Matrix of gen on span(basis) in the pivot-identity coordinates; verifies
    invariance mod p^W."""
    q = p ** W
    m = len(basis)
    n = len(basis[0])
    images = []
    for b in basis:
        images.append([sum(gen[r][s] * b[s] for s in range(n)) % q
                       for r in range(n)])
    X = [[images[j][pivots[l]] for j in range(m)] for l in range(m)]
    for j in range(m):
        for r in range(n):
            recon = sum(X[l][j] * basis[l][r] for l in range(m)) % q
            if recon != images[j][r]:
                raise PrecisionExhausted(
                    "restricted image leaves the subspace at working precision")
    return X


def _split_block(blk, gi, p):
    W = blk["W"]
    R = blk["gens"][gi]
    m = len(R)
    q = p ** W
    cp = berkowitz_charpoly_mod(R, q)
    classes = _polygon_classes(cp, p, W)
    if len(classes) == 1:
        blk["vals"].append(classes[0][0])
        return [blk]
    e = 1
    for v, _ in classes:
        e = e * v.denominator // math.gcd(e, v.denominator)
    B = R if e == 1 else mat_pow_mod(R, e, q)
    cpB = cp if e == 1 else berkowitz_charpoly_mod(B, q)
    facs = _slope_class_factors(cpB, p, W)
    expect = {v * e: mult for v, mult in classes}
    got = {}
    for coeffs, v, _ in facs:
        got[Fraction(v)] = got.get(Fraction(v), 0) + len(coeffs) - 1
    if got != expect:
        raise PrecisionExhausted(
            f"slope factor degrees {got} disagree with polygon {expect}")
    Wf = min([W] + [w for _, _, w in facs])
    qf = p ** Wf
    out = []
    for idx, (coeffs_v, vint, _) in enumerate(facs):
        proj = [[int(i == j) for j in range(m)] for i in range(m)]
        for jdx, (coeffs_w, _, _) in enumerate(facs):
            if jdx != idx:
                proj = mat_mul_mod(proj, _eval_poly_mat(coeffs_w, B, qf), qf)
        cols = [[proj[r][j] for r in range(m)] for j in range(m)]
        basis, pivots, Wn = _saturate_columns(cols, p, Wf,
                                              expect_dim=len(coeffs_v) - 1)
        gens_r = [_restrict(mat_mod(g, p ** Wn), basis, pivots, p, Wn)
                  for g in blk["gens"]]
        out.append(dict(W=Wn, gens=gens_r,
                        vals=blk["vals"] + [Fraction(vint, e)]))
    return out


def _padic_refine(action: ActionSpec, p, prec):
    q = p ** prec
    root = dict(W=prec,
                gens=[mat_mod(g.int_rows(), q) for g in action.generators],
                vals=[])
    blocks = [root]
    for gi in range(action.rank):
        nxt = []
        for blk in blocks:
            nxt.extend(_split_block(blk, gi, p))
        blocks = nxt
    out = [(tuple(blk["vals"]), len(blk["gens"][0])) for blk in blocks]
    assert sum(m for _, m in out) == action.dim
    return out


def _padic_functionals(action, p, base_prec, retries=4):
    prec = base_prec
    last = None
    for _ in range(retries):
        try:
            return _padic_refine(action, p, prec)
        except PrecisionExhausted as exc:
            last = exc
            prec *= 2
    raise PrecisionExhausted(
        f"p = {p}: still failing at {prec // 2} digits: {last}")


# --- the joint spectrum -----------------------------------------------------


def joint_spectrum(action: ActionSpec, tol=1e-9, padic_prec=32) -> LyapunovSpectrum:
    """All joint Lyapunov functionals of the action, real and p-adic places.

    Real values are floats (clustered within tol); p-adic functionals carry
    exact valuations.  The product-formula residual (sum of multiplicity
    times value over all places, per generator) is checked exactly in the
    p-adic part and within float tolerance overall.
    """
    functionals = []
    for vals, mult in _real_refine(action, tol):
        functionals.append(LyapunovFunctional(
            place="real", values=vals, multiplicity=mult))
    logdets = [math.log(abs(det)) for det in action.dets()]
    for p in action.primes():
        blocks = _padic_functionals(action, p, padic_prec)
        for g in range(action.rank):
            total = sum(v[g] * mult for v, mult in blocks)
            expected = vp_int(action.dets()[g], p) if action.dets()[g] % p == 0 else 0
            if total != expected:
                raise RootFindingFailure(
                    f"p = {p}: valuation sum {total} != v_p(det) = {expected} "
                    f"for generator {g}")
        logp = math.log(p)
        for vals, mult in blocks:
            functionals.append(LyapunovFunctional(
                place=p,
                values=tuple(-float(v) * logp for v in vals),
                multiplicity=mult,
                exact=tuple(vals)))
    residual = 0.0
    for g in range(action.rank):
        total = sum(f.values[g] * f.multiplicity for f in functionals)
        residual = max(residual, abs(total))
        real_sum = sum(f.values[g] * f.multiplicity
                       for f in functionals if f.place == "real")
        if abs(real_sum - logdets[g]) > 1e-6 * max(1.0, action.dim):
            raise RootFindingFailure(
                f"real exponents sum to {real_sum}, want log|det| = {logdets[g]}")
    return LyapunovSpectrum(dim=action.dim, rank=action.rank,
                            functionals=tuple(functionals),
                            product_residual=residual)


# --- coarse classes and Weyl chambers ---------------------------------------


def _positively_proportional(f1: LyapunovFunctional, f2: LyapunovFunctional, tol):
    v1, v2 = f1.values, f2.values
    n1 = math.sqrt(sum(x * x for x in v1))
    n2 = math.sqrt(sum(x * x for x in v2))
    if n1 <= tol and n2 <= tol:
        return True           # both zero functionals: one trivial class
    if n1 <= tol or n2 <= tol:
        return False
    if f1.exact is not None and f2.exact is not None and f1.place == f2.place:
        # exact rational decision on the valuation vectors (sign flips: values
        # are -v log p, so positive proportionality means same-sign valuations)
        j = next(i for i, x in enumerate(f1.exact) if x != 0)
        if f2.exact[j] == 0:
            return False
        c = Fraction(f2.exact[j], f1.exact[j])
        if c <= 0:
            return False
        return all(Fraction(y) == c * Fraction(x)
                   for x, y in zip(f1.exact, f2.exact))
    c = sum(x * y for x, y in zip(v1, v2)) / (n1 * n1)
    if c <= 0:
        return False
    dist = math.sqrt(sum((y - c * x) ** 2 for x, y in zip(v1, v2)))
    return dist <= max(tol, 1e-9) * max(1.0, n2)


def coarse_classes(spectrum: LyapunovSpectrum, tol=1e-9):
    """Partition of functional indices into positive-proportionality classes."""
    classes = []
    for i, f in enumerate(spectrum.functionals):
        for cls in classes:
            if _positively_proportional(spectrum.functionals[cls[0]], f, tol):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


@dataclass(frozen=True)
class WeylChamber:
    signs: tuple               # sign of each (nonzero) functional on the chamber
    representative: tuple      # small integer vector strictly inside
    boundary_angles: tuple     # (start, end) angles of the open sector
    boundary_rays: tuple       # exact integer directions when known, else None


def weyl_chambers(spectrum: LyapunovSpectrum, tol=1e-9):
    """Open cones on which every functional has constant nonzero sign (k = 2).

    Each kernel line contributes two boundary rays; chambers are the open
    sectors between consecutive rays, each with a small integer representative.
    """
    if spectrum.rank != 2:
        raise ValueError("Weyl chambers are enumerated for rank-2 actions only")
    funcs = [f for f in spectrum.functionals
             if math.hypot(*f.values) > max(tol, 1e-12)]
    lines = []  # (angle in [0, pi), exact primitive direction or None)
    for f in funcs:
        a, b = f.values
        ang = math.atan2(a, -b) % math.pi
        exact = None
        if f.exact is not None:
            s1, s2 = f.exact
            exact = primitive_vector([-Fraction(s2), Fraction(s1)])
        for li, (la, lex) in enumerate(lines):
            if min(abs(la - ang), math.pi - abs(la - ang)) <= 1e-9:
                if lex is None and exact is not None:
                    lines[li] = (la, exact)
                break
        else:
            lines.append((ang, exact))
    if not lines:
        return []
    rays = []
    for ang, exact in sorted(lines):
        rays.append((ang, exact))
        neg = tuple(-x for x in exact) if exact is not None else None
        rays.append((ang + math.pi, neg))
    rays.sort()
    chambers = []
    for (a0, e0), (a1, e1) in zip(rays, rays[1:] + [(rays[0][0] + 2 * math.pi,
                                                     rays[0][1])]):
        mid = (a0 + a1) / 2
        rep = _integer_direction_in_sector(mid, a0, a1)
        signs = tuple(1 if f.value_at(rep) > 0 else -1 for f in funcs)
        chambers.append(WeylChamber(signs=signs, representative=rep,
                                    boundary_angles=(a0, a1),
                                    boundary_rays=(e0, e1)))
    return chambers


def _integer_direction_in_sector(mid, a0, a1):
    best = None
    for radius in (1, 2, 3, 5, 8, 13, 21, 34, 55):
        for x in range(-radius, radius + 1):
            for y in range(-radius, radius + 1):
                if max(abs(x), abs(y)) != radius:
                    continue
                ang = math.atan2(y, x) % (2 * math.pi)
                for shift in (-2 * math.pi, 0, 2 * math.pi):
                    t = ang + shift
                    if a0 + 1e-12 < t < a1 - 1e-12:
                        score = (radius, abs(t - mid))
                        if best is None or score < best[0]:
                            best = (score, (x, y))
        if best is not None:
            return best[1]
    raise RootFindingFailure(f"no small integer vector inside sector ({a0}, {a1})")


# --- expansion --------------------------------------------------------------


def expanding_elements(spectrum: LyapunovSpectrum, bound, margin=1e-9):
    """Elements a with every real functional strictly positive, |a|_inf <= bound."""
    reals = spectrum.by_place("real")
    out = []
    for a in itertools.product(range(-bound, bound + 1), repeat=spectrum.rank):
        if all(v == 0 for v in a):
            continue
        if all(f.value_at(a) > margin for f in reals):
            out.append(a)
    return out


def min_expansion_rate(spectrum: LyapunovSpectrum):
    """min over the unit sup-norm sphere of max_chi |chi(a)| (all places).

    The objective is convex piecewise-linear on each facet, so the minimum is
    attained where (dim of the facet many) active constraints from
    {chi_i = 0} and {chi_i = +-chi_j} meet; candidates are enumerated over
    all faces of the cube.
    """
    k = spectrum.rank
    rows = [f.values for f in spectrum.functionals]

    def objective(a):
        return max(abs(sum(r[i] * a[i] for i in range(k))) for r in rows)

    hyperplanes = [tuple(r) for r in rows]
    for r1, r2 in itertools.combinations(rows, 2):
        hyperplanes.append(tuple(x - y for x, y in zip(r1, r2)))
        hyperplanes.append(tuple(x + y for x, y in zip(r1, r2)))

    best = None
    for fixed in itertools.product((-1, 0, 1), repeat=k):
        free = [i for i, s in enumerate(fixed) if s == 0]
        if len(free) == k:
            continue  # interior of the cube is not on the sphere
        if not free:
            cand = [float(s) for s in fixed]
            val = objective(cand)
            best = val if best is None else min(best, val)
            continue
        for combo in itertools.combinations(hyperplanes, len(free)):
            A = np.array([[h[i] for i in free] for h in combo])
            b = np.array([-sum(h[i] * fixed[i] for i in range(k) if fixed[i])
                          for h in combo])
            try:
                sol = np.linalg.solve(A, b)
            except np.linalg.LinAlgError:
                continue
            if np.max(np.abs(sol)) > 1 + 1e-9:
                continue
            a = [0.0] * k
            for i, s in enumerate(fixed):
                a[i] = float(s)
            for i, x in zip(free, sol):
                a[i] = float(x)
            val = objective(a)
            best = val if best is None else min(best, val)
    return best


def diophantine_profile(w, L, B):
    """min over integer 0 < |z|_inf <= B of |<z, w>| * |z|_inf^L.

    Exhaustive; returns (c, z_attaining).  Sup norm throughout.
    """
    w = [float(x) for x in w]
    best = None
    for z in itertools.product(range(-B, B + 1), repeat=len(w)):
        norm = max(abs(x) for x in z)
        if norm == 0:
            continue
        c = abs(sum(x * y for x, y in zip(z, w))) * norm ** L
        if best is None or c < best[0]:
            best = (c, z)
    return best
