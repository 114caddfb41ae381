"""Factorization over Q: squarefree split, then mod-p factors Hensel-lifted
and recombined over Z.

Inputs here are characteristic polynomials, so everything is monic (rational
coefficients are descaled through a root rescaling first).  Degrees are <= 10
at desk scale, which keeps subset recombination trivial; candidate factor
degrees are pruned by intersecting the attainable-degree sets of the mod-p
patterns at three usable primes.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from ..errors import FactorSearchInconclusive
from . import modp
from .modp import hensel_lift
from .poly import QPoly, squarefree_decomposition


def _is_prime(n):
    if n < 2:
        return False
    for p in range(2, int(n ** 0.5) + 1):
        if n % p == 0:
            return False
    return True


def _usable_primes(ints, count=3, limit=500):
    """Primes where the reduction stays squarefree of full degree."""
    out = []
    p = 2
    while len(out) < count and p < limit:
        if _is_prime(p) and ints[-1] % p != 0:
            fbar = modp.reduce_mod(ints, p)
            if modp.deg(fbar) == len(ints) - 1:
                if modp.is_one(modp.gcd(fbar, modp.derivative(fbar, p), p)):
                    out.append(p)
        p += 1
    return out


def _attainable_degrees(pattern, total):
    """Subset sums of a mod-p factor degree pattern."""
    reach = 1  # bitmask
    for d in pattern:
        reach |= reach << d
    return {k for k in range(total + 1) if reach >> k & 1}


def _mignotte_bound(ints):
    norm2 = math.isqrt(sum(c * c for c in ints)) + 1
    return 2 ** (len(ints) - 1) * norm2


def _symmetric(c, q):
    c %= q
    return c - q if c > q // 2 else c


def _factor_squarefree_monic_int(ints, seed=0):
    """Irreducible monic integer factors of a squarefree monic integer poly."""
    deg = len(ints) - 1
    if deg <= 1:
        return [list(ints)]
    primes = _usable_primes(ints)
    if not primes:
        raise FactorSearchInconclusive(
            f"no usable prime below 500 for degree-{deg} input")
    trials = []
    degree_sets = []
    for p in primes:
        _, factors = modp.factor(ints, p, seed=seed)
        pattern = [modp.deg(list(g)) for g, _ in factors]
        trials.append((p, [list(g) for g, _ in factors]))
        degree_sets.append(_attainable_degrees(pattern, deg))
    allowed = set.intersection(*degree_sets)
    if allowed == {0, deg}:
        return [list(ints)]
    p, mod_factors = min(trials, key=lambda t: len(t[1]))
    if len(mod_factors) == 1:
        return [list(ints)]
    B = _mignotte_bound(ints)
    K = 1
    while p ** K <= 2 * B:
        K += 1
    lifted = hensel_lift(ints, mod_factors, p, K)
    q = p ** K

    out = []
    pool = list(range(len(lifted)))
    current = QPoly(ints)
    size = 1
    while 2 * size <= len(pool):
        hit = None
        for subset in itertools.combinations(pool, size):
            dsum = sum(len(lifted[i]) - 1 for i in subset)
            if dsum not in allowed:
                continue
            prod = [1]
            for i in subset:
                prod = modp._mul_q(prod, lifted[i], q)
            cand = QPoly([_symmetric(c, q) for c in prod])
            quo, rem = divmod(current, cand)
            if rem.is_zero():
                hit = (subset, cand, quo)
                break
        if hit is None:
            size += 1
            continue
        subset, cand, quo = hit
        out.append([int(c) for c in cand.coeffs])
        pool = [i for i in pool if i not in subset]
        current = quo
        size = 1
    if current.degree > 0:
        out.append([int(c) for c in current.coeffs])
    return out


def factor_over_q(f: QPoly, seed=0):
    """[(monic irreducible QPoly, multiplicity)], canonically sorted.

    Accepts any nonzero rational polynomial; the unit content is dropped.
    """
    out = []
    for g, m in squarefree_decomposition(f):
        den = g.denominator_lcm()
        gint = g.scale_root(den)  # monic with integer coefficients
        ints = [int(c) for c in gint.coeffs]
        for fac in _factor_squarefree_monic_int(ints, seed=seed):
            h = QPoly(fac)
            if den != 1:
                h = h.scale_root(Fraction(1, den))
            out.append((h, m))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def is_irreducible_over_q(f: QPoly) -> bool:
    facs = factor_over_q(f)
    return len(facs) == 1 and facs[0][1] == 1
