"""S-adic solenoid points, characters, correlations, and mixing diagnostics.

Points live in the fundamental domain T^d x prod_p Z_p^d: a rational torus
coordinate plus truncated p-adic fibers, one for each prime in S.  A pair
(x, xi) and its translate (x + r, xi - r) by r in Z[1/S]^d name the same
point, so whenever the torus coordinate is reduced into [0, 1) the dropped
integer vector is added to every fiber.  The dual lattice is Z[1/S]^d, and
a character evaluates to

    exp(2 pi i (<m, x> + sum_p {<m, xi_p>}_p))

with {.}_p the p-adic fractional part; pushing a point forward through an
integer matrix multiplies the mode by the transpose, and that identity holds
exactly on the rational phases, which is what the exact correlation and the
inverse-branch arithmetic lean on.

Phases are Fractions end to end; floats appear only inside the final
complex exponential and in Monte Carlo averaging.
"""

from __future__ import annotations

import cmath
import csv
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (DegenerateFit, LeavesDualLattice, NotAnAutomorphism,
                     PrecisionExhausted)
from .exact import QMat, crt_integers, vp_int
from .spectra import _factor_int


# --- points -----------------------------------------------------------------


@dataclass(frozen=True)
class SolenoidPoint:
    x: tuple                   # Fractions, reduced into [0, 1)
    xi: tuple                  # ((p, prec, residues), ...) ascending in p

    @property
    def dim(self):
        return len(self.x)

    @property
    def primes(self):
        return tuple(p for p, _, _ in self.xi)

    def xi_at(self, p):
        for q, prec, res in self.xi:
            if q == p:
                return prec, res
        raise KeyError(f"no fiber coordinate for p = {p}")


def solenoid_point(x, xi=None, primes=(), prec=32):
    """Build a point; without explicit fibers, embeds the rational torus
    coordinate (denominators must then avoid the primes in S)."""
    xs = tuple(Fraction(c) % 1 for c in x)
    if xi is None:
        xi = {}
        for p in primes:
            q = p ** prec
            res = []
            for c in xs:
                if c.denominator % p == 0:
                    raise ValueError(
                        f"cannot embed denominator {c.denominator} at p = {p}; "
                        "pass the fiber coordinate explicitly")
                # fibers carry the negative of the p-adic value of x, so the
                # embedded point pairs with characters the same way the torus
                # point does
                res.append(-c.numerator * pow(c.denominator, -1, q) % q)
            xi[p] = (prec, tuple(res))
    packed = []
    for p in sorted(xi):
        pr, res = xi[p]
        packed.append((p, pr, tuple(int(r) % p ** pr for r in res)))
        if len(packed[-1][2]) != len(xs):
            raise ValueError("fiber dimension disagrees with the torus part")
    return SolenoidPoint(x=xs, xi=tuple(packed))


def haar_sample(count, dim, primes=(), seed=0, prec=32, grid_bits=32):
    """Haar-distributed points: uniform 2^-grid_bits torus coordinates and
    independent uniform residues in each fiber."""
    rng = random.Random(seed)
    den = 1 << grid_bits
    out = []
    for _ in range(count):
        xs = tuple(Fraction(rng.randrange(den), den) for _ in range(dim))
        xi = {p: (prec, tuple(rng.randrange(p ** prec) for _ in range(dim)))
              for p in primes}
        out.append(SolenoidPoint(x=xs, xi=tuple(
            (p,) + xi[p] for p in sorted(xi))))
    return out


# --- the action and its inverse ---------------------------------------------


def dual_action(a: QMat) -> QMat:
    """The action on modes: m -> a^T m."""
    return a.transpose()


def apply(a: QMat, pt: SolenoidPoint) -> SolenoidPoint:
    """Forward image under an integer matrix; fiber precision is unchanged.

    The integer part dropped when the torus coordinate is reduced mod 1 is
    added to every fiber, keeping the pair a single representative.
    """
    rows = a.int_rows()
    raw = [sum(Fraction(rows[i][j]) * pt.x[j] for j in range(pt.dim))
           for i in range(pt.dim)]
    x = tuple(r % 1 for r in raw)
    carry = [int(r - r % 1) for r in raw]
    xi = []
    for p, prec, res in pt.xi:
        q = p ** prec
        xi.append((p, prec, tuple(
            (sum(rows[i][j] * res[j] for j in range(pt.dim)) + carry[i]) % q
            for i in range(pt.dim))))
    return SolenoidPoint(x=x, xi=tuple(xi))


def inverse_levels(a: QMat):
    """Per-prime branching level l_p = v_p(det) - min_ij v_p(adj_ij): the
    inverse needs the fiber coordinate mod p^{l_p} to pick its integer
    translate."""
    det = int(a.det())
    adj = a.adjugate()
    out = {}
    for p in _factor_int(det):
        d = vp_int(det, p)
        m0 = min(vp_int(int(c), p) if c != 0 else d
                 for row in adj.rows for c in row)
        out[p] = d - min(m0, d)
    return out


def apply_inverse(a: QMat, pt: SolenoidPoint) -> SolenoidPoint:
    """Preimage under the solenoid automorphism extending the integer matrix.

    Resolves the branch with the fiber residues: n = CRT(xi_p mod p^{l_p}),
    then x' = a^{-1}(x + n) exactly and xi'_p = a^{-1}(xi_p - n) with l_p
    digits of precision spent at each prime dividing det.
    """
    det = int(a.det())
    if det == 0:
        raise NotAnAutomorphism("singular matrix")
    have = set(pt.primes)
    for p in _factor_int(det):
        if p not in have:
            raise NotAnAutomorphism(
                f"determinant prime {p} is not inverted in this solenoid")
    levels = inverse_levels(a)
    for p, l in levels.items():
        prec, _ = pt.xi_at(p)
        if prec < l:
            raise PrecisionExhausted(
                f"need {l} digits at p = {p}, have {prec}")
    n = []
    for i in range(pt.dim):
        pairs = []
        for p, l in sorted(levels.items()):
            if l > 0:
                _, res = pt.xi_at(p)
                pairs.append((res[i] % p ** l, p ** l))
        n.append(crt_integers(pairs)[0] if pairs else 0)
    ainv = a.inverse()
    raw = [sum(ainv.rows[i][j] * (pt.x[j] + n[j]) for j in range(pt.dim))
           for i in range(pt.dim)]
    x = tuple(r % 1 for r in raw)
    carry = [int(r - r % 1) for r in raw]
    adj = a.adjugate()
    xi = []
    for p, prec, res in pt.xi:
        l = levels.get(p, 0)
        dv = vp_int(det, p) if det % p == 0 else 0
        m0 = dv - l
        adjr = [[int(c) // p ** m0 for c in row] for row in adj.rows]
        u = det // p ** dv
        q = p ** prec
        uinv = pow(u, -1, q)
        new_prec = prec - l
        qn = p ** new_prec
        new_res = []
        for i in range(pt.dim):
            w = sum(adjr[i][j] * (res[j] - n[j]) for j in range(pt.dim))
            w = w * uinv % q
            assert w % p ** l == 0, "branch translate failed to clear the level"
            new_res.append((w // p ** l + carry[i]) % qn)
        xi.append((p, new_prec, tuple(new_res)))
    return SolenoidPoint(x=x, xi=tuple(xi))


# --- characters and trigonometric observables -------------------------------


def _mode_primes(mode):
    out = set()
    for c in mode:
        out.update(_factor_int(Fraction(c).denominator))
    return out


def character_phase(mode, pt: SolenoidPoint) -> Fraction:
    """Exact rational phase <m, x> + sum_p {<m, xi_p>}_p, reduced mod 1."""
    theta = sum((Fraction(m) * c for m, c in zip(mode, pt.x)), Fraction(0))
    for p, prec, res in pt.xi:
        t = 0
        for m in mode:
            den = Fraction(m).denominator
            if den % p == 0:
                t = max(t, vp_int(den, p))
        if t == 0:
            continue
        if prec < t:
            raise PrecisionExhausted(
                f"mode needs {t} digits at p = {p}, point has {prec}")
        q = p ** t
        num = 0
        for m, r in zip(mode, res):
            m = Fraction(m)
            tp = vp_int(m.denominator, p) if m.denominator % p == 0 else 0
            rest = m.denominator // p ** tp
            num += m.numerator * pow(rest, -1, q) * p ** (t - tp) * r
        theta += Fraction(num % q, q)
    return theta % 1


def character_value(mode, pt: SolenoidPoint) -> complex:
    return cmath.exp(2j * math.pi * float(character_phase(mode, pt)))


@dataclass(frozen=True)
class TrigFunction:
    """Finite combination sum_m c_m chi_m with modes in Z[1/S]^d."""

    terms: tuple               # ((mode, coeff complex), ...) deduplicated
    primes: tuple              # the S the modes are allowed to use

    @classmethod
    def build(cls, terms, primes=()):
        primes = tuple(sorted(primes))
        merged = {}
        dim = None
        for mode, coeff in terms:
            mode = tuple(Fraction(c) for c in mode)
            if dim is None:
                dim = len(mode)
            elif len(mode) != dim:
                raise ValueError("modes of mixed dimension")
            bad = _mode_primes(mode) - set(primes)
            if bad:
                raise LeavesDualLattice(
                    f"mode {tuple(str(c) for c in mode)} has denominator "
                    f"primes {sorted(bad)} outside S = {list(primes)}")
            merged[mode] = merged.get(mode, 0) + complex(coeff)
        cleaned = tuple((m, c) for m, c in sorted(merged.items(),
                                                  key=lambda mc: tuple(
                                                      map(str, mc[0])))
                        if c != 0)
        return cls(terms=cleaned, primes=primes)

    @property
    def dim(self):
        return len(self.terms[0][0]) if self.terms else 0

    def mean(self):
        for mode, coeff in self.terms:
            if all(c == 0 for c in mode):
                return coeff
        return 0j

    def conjugate(self):
        return TrigFunction.build(
            [(tuple(-c for c in m), coeff.conjugate())
             for m, coeff in self.terms], self.primes)

    def pushforward(self, a: QMat):
        """f o rho(a): every mode m becomes a^T m."""
        at = a.transpose()
        return TrigFunction.build(
            [(at.matvec(m), coeff) for m, coeff in self.terms], self.primes)

    def evaluate(self, pt: SolenoidPoint) -> complex:
        return sum((coeff * character_value(m, pt) for m, coeff in self.terms),
                   0j)


def cosine(mode, primes=()):
    """cos(2 pi <m, .>) as a TrigFunction."""
    mode = tuple(Fraction(c) for c in mode)
    return TrigFunction.build([(mode, 0.5),
                               (tuple(-c for c in mode), 0.5)], primes)


# --- exact correlation and mixing curves ------------------------------------


def exact_correlation(f: TrigFunction, g: TrigFunction, a: QMat, n_max):
    """C(n) = int (f o rho(a)^n) g  -  (int f)(int g), for n = 0..n_max.

    Mode bookkeeping is exact: the only contributions are pairs with
    (a^T)^n k + m = 0, so each value is a finite sum and the zero values are
    exact zeros, not numerically small ones.
    """
    at = a.transpose()
    targets = {tuple(-c for c in m): coeff for m, coeff in g.terms}
    base = f.mean() * g.mean()
    modes = [(m, c) for m, c in f.terms]
    out = []
    for _ in range(n_max + 1):
        s = sum((c * targets[m] for m, c in modes if m in targets), 0j)
        out.append(s - base)
        modes = [(at.matvec(m), c) for m, c in modes]
    return out


def _escape_index(a: QMat, modes, radius, cap=200):
    """First n from which every dual orbit (a^T)^n k certifiably stays outside
    the closed sup-norm ball of the given radius.

    Float eigen-splitting with a conservative margin: once the expanding
    coordinates of the orbit carry enough mass, they grow monotonically and
    bound the sup norm from below.  Returns None when a^T has (numerically)
    unimodular eigenvalues or the budget runs out.
    """
    at = np.array(a.transpose().int_rows(), dtype=float)
    eigvals, eigvecs = np.linalg.eig(at)
    mods = np.abs(eigvals)
    if np.any(np.abs(mods - 1.0) < 1e-9):
        return None
    expanding = mods > 1.0
    if not np.any(expanding):
        return None
    pinv = np.linalg.inv(eigvecs)
    kappa = np.max(np.sum(np.abs(pinv), axis=1))
    threshold = radius * kappa * (1 + 1e-9)
    worst = 0
    rows = a.transpose().int_rows()
    d = len(rows)
    for k in modes:
        w = [int(c) for c in k]
        n = 0
        while True:
            coords = pinv @ np.array(w, dtype=float)
            if np.max(np.abs(coords[expanding])) > threshold:
                break
            n += 1
            if n > cap:
                return None
            w = [sum(rows[i][j] * w[j] for j in range(d)) for i in range(d)]
        worst = max(worst, n)
    return worst


@dataclass(frozen=True)
class MixingCurve:
    values: tuple              # exact correlations C(0..n_max)
    decay_rate: float          # -slope of the log|C| OLS fit; None if < 2 points
    intercept: float
    fit_points: int
    zero_from: int             # start of the exactly-zero tail (or None)
    certified_zero_from: int   # dual-orbit escape certificate (or None)


def mixing_curve(f: TrigFunction, g: TrigFunction, a: QMat, n_max,
                 fit_range=None) -> MixingCurve:
    """Exact correlation curve plus decay diagnostics.

    The decay rate is fitted on the lags with nonzero correlation; passing an
    explicit fit_range makes an underpopulated fit an error (DegenerateFit)
    instead of a None rate.
    """
    values = exact_correlation(f, g, a, n_max)
    zero_from = None
    for i in range(len(values) - 1, -1, -1):
        if values[i] != 0:
            break
        zero_from = i
    radius = max((max(abs(float(c)) for c in m)
                  for m, _ in g.terms if any(c != 0 for c in m)), default=None)
    cert = None
    if radius is not None:
        nz = [m for m, _ in f.terms if any(c != 0 for c in m)]
        if nz and all(c.denominator == 1 for m in nz for c in m):
            cert = _escape_index(a, nz, radius)
    pts = [(n, math.log(abs(values[n])))
           for n in (fit_range if fit_range is not None
                     else range(len(values)))
           if values[n] != 0]
    if len(pts) < 2:
        if fit_range is not None:
            raise DegenerateFit(
                f"{len(pts)} nonzero correlation values in the requested "
                "range: no decay rate to fit")
        return MixingCurve(values=tuple(values), decay_rate=None,
                           intercept=None, fit_points=len(pts),
                           zero_from=zero_from, certified_zero_from=cert)
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    return MixingCurve(values=tuple(values), decay_rate=float(-slope),
                       intercept=float(intercept), fit_points=len(pts),
                       zero_from=zero_from, certified_zero_from=cert)


# --- Monte Carlo ------------------------------------------------------------


@dataclass(frozen=True)
class McCorrelation:
    n: int
    value: complex
    stderr: float
    samples: int
    conjugated: bool


def monte_carlo_correlation(f: TrigFunction, g: TrigFunction, a: QMat, n,
                            samples=10000, seed=0, conjugate_g=False,
                            prec=32, grid_bits=32) -> McCorrelation:
    """Haar-sampled estimate of the same functional exact_correlation computes
    (with conjugate_g, of int (f o rho(a)^n) conj(g) instead)."""
    if f.primes != g.primes:
        raise ValueError("observables live on different solenoids")
    pts = haar_sample(samples, f.dim, primes=f.primes, seed=seed, prec=prec,
                      grid_bits=grid_bits)
    fn = f.pushforward(a.power(n)) if n else f
    vals = []
    for pt in pts:
        gv = g.evaluate(pt)
        if conjugate_g:
            gv = gv.conjugate()
        vals.append(fn.evaluate(pt) * gv)
    mean = sum(vals) / samples
    gm = g.mean().conjugate() if conjugate_g else g.mean()
    est = mean - f.mean() * gm
    var = sum(abs(v - mean) ** 2 for v in vals) / max(samples - 1, 1)
    return McCorrelation(n=n, value=est, stderr=math.sqrt(var / samples),
                         samples=samples, conjugated=conjugate_g)


# --- central limit diagnostics ----------------------------------------------


@dataclass(frozen=True)
class CltReport:
    n: int
    orbits: int
    variance: float            # sample variance of S_n / sqrt(n)
    sigma2_ref: float          # C(0) + 2 sum_j C(j), exact correlations
    mean: float
    histogram: tuple           # (bin edges, counts)


def _orbit_sampler_bits(a: QMat, n):
    rows = a.int_rows()
    growth = max(sum(abs(c) for c in r) for r in rows)
    return n * max(1, math.ceil(math.log2(max(growth, 2)))) + 64


def clt_check(f: TrigFunction, a: QMat, n=1024, orbits=200, seed=0,
              ref_terms=64, bins=16, prec=32) -> CltReport:
    """Distribution of Birkhoff sums S_n / sqrt(n) for the real part of the
    centered observable, against the exact series variance.

    Orbits start on a dyadic grid fine enough (orbit-length times the matrix
    growth rate, plus slack) that n steps of the exact integer dynamics do
    not collapse onto a coarse invariant subgrid.
    """
    d = f.dim
    rows = a.int_rows()
    bits = _orbit_sampler_bits(a, n)
    den = 1 << bits
    rng = random.Random(seed)
    center = f.mean()
    # precompiled integer phase evaluation: mode terms as (num vec, den, coeff)
    compiled = []
    for mode, coeff in f.terms:
        l = 1
        for c in mode:
            l = l * c.denominator // math.gcd(l, c.denominator)
        compiled.append((tuple(int(c * l) for c in mode), l, coeff))
    sums = []
    for _ in range(orbits):
        num = [rng.randrange(den) for _ in range(d)]
        xi = {p: [rng.randrange(p ** prec) for _ in range(d)]
              for p in f.primes}
        total = 0.0
        for _ in range(n):
            val = 0j
            for ivec, l, coeff in compiled:
                q = l * den
                r = sum(iv * x for iv, x in zip(ivec, num)) % q
                theta = r / q
                for p in f.primes:
                    t = vp_int(l, p) if l % p == 0 else 0
                    if t == 0:
                        continue
                    qq = p ** t
                    rest = l // p ** t
                    s = sum(iv * x for iv, x in zip(ivec, xi[p]))
                    s = s * pow(rest, -1, qq) % qq
                    theta += s / qq
                val += coeff * cmath.exp(2j * math.pi * theta)
            total += (val - center).real
            w = [sum(rows[i][j] * num[j] for j in range(d)) for i in range(d)]
            kv = [wi // den for wi in w]
            num = [wi - ki * den for wi, ki in zip(w, kv)]
            for p in f.primes:
                q = p ** prec
                xi[p] = [(sum(rows[i][j] * xi[p][j] for j in range(d)) + kv[i])
                         % q for i in range(d)]
        sums.append(total / math.sqrt(n))
    arr = np.array(sums)
    corr = exact_correlation(f, f, a, min(ref_terms, n - 1))
    sigma2 = corr[0].real + 2 * sum(c.real for c in corr[1:])
    spread = max(1.0, 4.0 * math.sqrt(abs(sigma2)))
    counts, edges = np.histogram(arr, bins=bins, range=(-spread, spread))
    return CltReport(n=n, orbits=orbits,
                     variance=float(arr.var(ddof=1)),
                     sigma2_ref=float(sigma2),
                     mean=float(arr.mean()),
                     histogram=(tuple(map(float, edges)),
                                tuple(map(int, counts))))


# --- CSV output -------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationRow:
    n: int
    value: complex
    method: str                # "exact" or "mc"
    samples: int = 0           # 0 for exact rows
    stderr: float = 0.0


def correlation_csv(rows, fobj):
    w = csv.writer(fobj)
    w.writerow(["n", "re(C)", "im(C)", "method", "samples", "stderr"])
    for r in rows:
        w.writerow([r.n, repr(r.value.real), repr(r.value.imag), r.method,
                    r.samples, repr(r.stderr)])
