"""Polynomial arithmetic and factorization over F_p.

Polynomials are ascending int lists with entries reduced into [0, p).  The
factorization pipeline is the classical one: squarefree decomposition (char-p
aware), distinct-degree, then seeded equal-degree splitting, so results are
deterministic for a fixed seed.
"""

from __future__ import annotations

import random

from ..errors import LeadingCoeffVanishes, NotCoprime, ZeroPolynomial


def trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def reduce_mod(coeffs, p):
    return trim([int(c) % p for c in coeffs])


def deg(f):
    return len(f) - 1


def is_one(f):
    return len(f) == 1 and f[0] == 1


def add(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out[i] = (a + b) % p
    return trim(out)


def sub(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out[i] = (a - b) % p
    return trim(out)


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def scalar_mul(c, f, p):
    c %= p
    return trim([c * a % p for a in f])


def divmod_p(f, g, p):
    if not g:
        raise ZeroPolynomial("division by zero mod p")
    f = list(f)
    dg, df = deg(g), deg(f)
    if df < dg:
        return [], trim(f)
    inv_lead = pow(g[-1], -1, p)
    quo = [0] * (df - dg + 1)
    for k in range(df - dg, -1, -1):
        c = f[dg + k] * inv_lead % p
        quo[k] = c
        if c:
            for j, b in enumerate(g):
                f[j + k] = (f[j + k] - c * b) % p
    return trim(quo), trim(f[:dg])


def mod(f, g, p):
    return divmod_p(f, g, p)[1]


def monic(f, p):
    if not f:
        return []
    return scalar_mul(pow(f[-1], -1, p), f, p)


def gcd(f, g, p):
    a, b = list(f), list(g)
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def ext_gcd(f, g, p):
    """(d, s, t) with s f + t g = d, d monic gcd."""
    r0, r1 = list(f), list(g)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_p(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    c = pow(r0[-1], -1, p)
    return scalar_mul(c, r0, p), scalar_mul(c, s0, p), scalar_mul(c, t0, p)


def pow_mod(f, n, g, p):
    """f^n mod g."""
    out, base = [1], mod(f, g, p)
    while n:
        if n & 1:
            out = mod(mul(out, base, p), g, p)
        base = mod(mul(base, base, p), g, p)
        n >>= 1
    return out


def derivative(f, p):
    return trim([i * c % p for i, c in enumerate(f)][1:])


def _pth_root(f, p):
    # In F_p[x], a polynomial with zero derivative is g(x^p) and its p-th
    # root just reindexes coefficients (Frobenius fixes F_p).
    return trim([f[i] for i in range(0, len(f), p)])


def squarefree_decomposition(f, p):
    """[(g, m)] with f = lc * prod g^m, g monic squarefree pairwise coprime."""
    f = monic(f, p)
    if deg(f) < 1:
        return []
    out = []
    fp = derivative(f, p)
    if not fp:
        for g, m in squarefree_decomposition(_pth_root(f, p), p):
            out.append((g, m * p))
        return out
    c = gcd(f, fp, p)
    w = divmod_p(f, c, p)[0]
    i = 1
    while not is_one(w):
        y = gcd(w, c, p)
        z = divmod_p(w, y, p)[0]
        if not is_one(z):
            out.append((z, i))
        w = y
        c = divmod_p(c, y, p)[0]
        i += 1
    if not is_one(c):
        for g, m in squarefree_decomposition(_pth_root(c, p), p):
            out.append((g, m * p))
    return out


def distinct_degree(f, p):
    """[(product of irreducibles of degree d, d)] for monic squarefree f."""
    out = []
    rest = list(f)
    h = [0, 1]  # will hold x^(p^i) mod rest
    i = 0
    while deg(rest) >= 2 * (i + 1):
        i += 1
        h = pow_mod(h, p, rest, p)
        g = gcd(rest, sub(h, [0, 1], p), p)
        if not is_one(g):
            out.append((g, i))
            rest = divmod_p(rest, g, p)[0]
            h = mod(h, rest, p)
    if deg(rest) >= 1:
        out.append((rest, deg(rest)))
    return out


def _random_poly(max_deg, p, rng):
    while True:
        f = trim([rng.randrange(p) for _ in range(max_deg + 1)])
        if deg(f) >= 1:
            return f


def equal_degree_split(f, d, p, rng):
    """Factor monic squarefree f, all of whose irreducible factors have degree d."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        u = _random_poly(n - 1, p, rng)
        if p == 2:
            # additive trace map of F_{2^d} over F_2, evaluated at u mod f
            t = list(u)
            acc = list(u)
            for _ in range(d - 1):
                acc = pow_mod(acc, 2, f, p)
                t = add(t, acc, p)
            g = gcd(f, t, p)
        else:
            w = pow_mod(u, (p ** d - 1) // 2, f, p)
            g = gcd(f, sub(w, [1], p), p)
        if 0 < deg(g) < n:
            left = equal_degree_split(g, d, p, rng)
            right = equal_degree_split(divmod_p(f, g, p)[0], d, p, rng)
            return left + right


def factor(f, p, seed=0):
    """Full factorization of f mod p: (lead, [(irreducible monic, multiplicity)]).

    The factor list is sorted (degree, then coefficients) so output is stable.
    Raises LeadingCoeffVanishes when f reduces to a lower degree mod p and
    ZeroPolynomial when it reduces to zero.
    """
    fbar = reduce_mod(f, p)
    if not fbar:
        raise ZeroPolynomial(f"polynomial vanishes identically mod {p}")
    if deg(fbar) != deg(trim(list(f))):
        raise LeadingCoeffVanishes(f"leading coefficient divisible by {p}")
    lead = fbar[-1]
    rng = random.Random(seed)
    out = []
    for g, m in squarefree_decomposition(fbar, p):
        for h, d in distinct_degree(g, p):
            for irr in equal_degree_split(h, d, p, rng):
                out.append((tuple(irr), m))
    out.sort(key=lambda t: (deg(list(t[0])), t[0]))
    return lead, out


# --- Hensel ----------------------------------------------------------------


def _divmod_q(f, g, q):
    # g monic; coefficients mod q (q a prime power)
    f = [c % q for c in f]
    dg, df = deg(trim(list(g))), deg(trim(list(f)))
    if dg < 0:
        raise ZeroPolynomial("division by zero")
    assert g[dg] % q == 1, "divisor must be monic for mod-q division"
    if df < dg:
        return [], trim(f)
    quo = [0] * (df - dg + 1)
    for k in range(df - dg, -1, -1):
        c = f[dg + k] % q
        quo[k] = c
        if c:
            for j in range(dg + 1):
                f[j + k] = (f[j + k] - c * g[j]) % q
    return trim(quo), trim(f[:dg])


def _mul_q(f, g, q):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % q
    return trim(out)


def _hensel_pair(f, g, h, s, t, p, K):
    """Lift f = g h from mod p to mod p^K; g, h monic coprime, s g + t h = 1 mod p.

    Linear steps: at mod p^(k+1) write the defect as p^k e and correct by the
    unique (u, v) with u h + v g = e, deg u < deg g, deg v < deg h.
    """
    g, h = list(g), list(h)
    q = p
    for _ in range(K - 1):
        qn = q * p
        prod = _mul_q(g, h, qn)
        e = [0] * max(len(f), len(prod))
        for i in range(len(e)):
            a = f[i] if i < len(f) else 0
            b = prod[i] if i < len(prod) else 0
            e[i] = ((a - b) % qn) // q
        e = reduce_mod(e, p)
        if e:
            u = mod(mul(t, e, p), g, p)
            v = divmod_p(sub(e, mul(u, h, p), p), g, p)[0]
            g = [(gi + q * (u[i] if i < len(u) else 0)) % qn for i, gi in enumerate(g)]
            h = [(hi + q * (v[i] if i < len(v) else 0)) % qn for i, hi in enumerate(h)]
        else:
            g = [gi % qn for gi in g]
            h = [hi % qn for hi in h]
        q = qn
    return g, h


def hensel_lift(f, factors, p, K):
    """Lift pairwise-coprime monic factors of f mod p to factors mod p^K.

    f is an integer coefficient list, monic mod p (leading coeff a unit is
    normalized away first).  Returns the lifted monic factors in the order
    given.  Raises NotCoprime when two input factors share a root mod p.
    """
    fbar = reduce_mod(f, p)
    if not fbar:
        raise ZeroPolynomial(f"polynomial vanishes mod {p}")
    if fbar[-1] != 1:
        inv = pow(fbar[-1], -1, p ** K)
        f = [c * inv for c in f]
        fbar = reduce_mod(f, p)
    prod = [1]
    for g in factors:
        g = reduce_mod(g, p)
        if not g or g[-1] != 1:
            raise ValueError("factors must be monic mod p")
        prod = mul(prod, g, p)
    if prod != fbar:
        raise ValueError("factor product does not match f mod p")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            d = gcd(reduce_mod(factors[i], p), reduce_mod(factors[j], p), p)
            if not is_one(d):
                raise NotCoprime(f"factors {i} and {j} share {d} mod {p}")
    q = p ** K
    fq = [c % q for c in f]
    return _lift_tree(fq, [reduce_mod(g, p) for g in factors], p, K)


def _lift_tree(f, factors, p, K):
    if len(factors) == 1:
        return [[c % p ** K for c in f]]
    mid = len(factors) // 2
    left = [1]
    for g in factors[:mid]:
        left = mul(left, g, p)
    right = [1]
    for g in factors[mid:]:
        right = mul(right, g, p)
    d, s, t = ext_gcd(left, right, p)
    if not is_one(d):
        raise NotCoprime("left/right products not coprime mod p")
    lL, lR = _hensel_pair(f, left, right, s, t, p, K)
    return (_lift_tree(lL, factors[:mid], p, K)
            + _lift_tree(lR, factors[mid:], p, K))
