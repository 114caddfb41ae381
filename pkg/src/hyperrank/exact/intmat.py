"""Exact matrices over Q (Fraction entries) plus modular kernels.

QMat is a small immutable dense matrix type: desk scale (dim <= ~10), so the
cubic algorithms with exact arithmetic are the right trade.  Integer-only
helpers (HNF, modular powers, Berkowitz charpoly) live alongside because the
spectra machinery needs them on the same objects.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import RankDeficient
from .poly import QPoly


class QMat:
    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(Fraction(c) for c in r) for r in rows)
        if self.rows:
            n = len(self.rows[0])
            if any(len(r) != n for r in self.rows):
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m, n):
        return cls([[0] * n for _ in range(m)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def is_square(self):
        m, n = self.shape
        return m == n

    def is_integer(self):
        return all(c.denominator == 1 for r in self.rows for c in r)

    def int_rows(self):
        if not self.is_integer():
            raise ValueError("matrix has non-integer entries")
        return [[int(c) for c in r] for r in self.rows]

    def __eq__(self, other):
        if isinstance(other, QMat):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"QMat({[[str(c) for c in r] for r in self.rows]})"

    def __add__(self, other):
        return QMat([[a + b for a, b in zip(ra, rb)]
                     for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return QMat([[a - b for a, b in zip(ra, rb)]
                     for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return QMat([[-a for a in r] for r in self.rows])

    def scalar(self, c):
        c = Fraction(c)
        return QMat([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        bt = list(zip(*other.rows))
        return QMat([[sum(a * b for a, b in zip(row, col)) for col in bt]
                     for row in self.rows])

    def matvec(self, v):
        return tuple(sum(a * Fraction(x) for a, x in zip(row, v))
                     for row in self.rows)

    def transpose(self):
        return QMat(list(zip(*self.rows)))

    def trace(self):
        return sum(self.rows[i][i] for i in range(len(self.rows)))

    def det(self):
        """Gaussian elimination over Fraction with partial pivoting by nonzero."""
        if not self.is_square():
            raise ValueError("det of non-square matrix")
        n = len(self.rows)
        a = [list(r) for r in self.rows]
        out = Fraction(1)
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                out = -out
            out *= a[col][col]
            inv = 1 / a[col][col]
            for i in range(col + 1, n):
                if a[i][col] != 0:
                    f = a[i][col] * inv
                    for j in range(col, n):
                        a[i][j] -= f * a[col][j]
        return out

    def inverse(self):
        if not self.is_square():
            raise ValueError("inverse of non-square matrix")
        n = len(self.rows)
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col] != 0), None)
            if piv is None:
                raise RankDeficient("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for i in range(n):
                if i != col and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return QMat([r[n:] for r in a])

    def adjugate(self):
        """det * inverse for nonsingular input (exact)."""
        d = self.det()
        if d == 0:
            raise RankDeficient("adjugate via inverse needs a nonsingular matrix")
        return self.inverse().scalar(d)

    def power(self, e: int):
        """Integer power; negative exponents go through the exact inverse."""
        if not self.is_square():
            raise ValueError("power of non-square matrix")
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = QMat.identity(len(self.rows))
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def charpoly(self) -> QPoly:
        """det(xI - A), monic, by Faddeev-LeVerrier (exact over Fraction)."""
        if not self.is_square():
            raise ValueError("charpoly of non-square matrix")
        n = len(self.rows)
        coeffs_desc = [Fraction(1)]
        M = QMat.identity(n)
        for k in range(1, n + 1):
            M = self @ M
            ck = -M.trace() / k
            coeffs_desc.append(ck)
            if k < n:
                M = M + QMat.identity(n).scalar(ck)
        return QPoly(list(reversed(coeffs_desc)))

    def rank(self):
        a = [list(r) for r in self.rows]
        m, n = self.shape
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, m) if a[i][col] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / a[r][col]
            for i in range(r + 1, m):
                if a[i][col] != 0:
                    f = a[i][col] * inv
                    for j in range(col, n):
                        a[i][j] -= f * a[r][j]
            r += 1
            if r == m:
                break
        return r

    def solve(self, rhs: "QMat") -> "QMat":
        """Solve self @ X = rhs exactly; raises RankDeficient if inconsistent
        or underdetermined (callers here always have unique solutions)."""
        m, n = self.shape
        _, k = rhs.shape
        a = [list(r) + list(b) for r, b in zip(self.rows, rhs.rows)]
        pivots = []
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, m) if a[i][col] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / a[r][col]
            a[r] = [x * inv for x in a[r]]
            for i in range(m):
                if i != r and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(col)
            r += 1
        for i in range(r, m):
            if any(x != 0 for x in a[i][n:]):
                raise RankDeficient("inconsistent system")
        if r < n:
            raise RankDeficient("underdetermined system")
        sol = [[Fraction(0)] * k for _ in range(n)]
        for row_i, col in enumerate(pivots):
            sol[col] = a[row_i][n:]
        return QMat(sol)

    def kernel(self):
        """Primitive integer basis of the rational null space (list of tuples)."""
        m, n = self.shape
        a = [list(r) for r in self.rows]
        pivots = {}
        r = 0
        for col in range(n):
            piv = next((i for i in range(r, m) if a[i][col] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / a[r][col]
            a[r] = [x * inv for x in a[r]]
            for i in range(m):
                if i != r and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots[col] = r
            r += 1
        basis = []
        for col in range(n):
            if col in pivots:
                continue
            v = [Fraction(0)] * n
            v[col] = Fraction(1)
            for pcol, prow in pivots.items():
                v[pcol] = -a[prow][col]
            basis.append(primitive_vector(v))
        return basis


def primitive_vector(v):
    """Scale a rational vector to a primitive integer vector, first nonzero > 0."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ValueError("zero vector has no primitive form")
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def hnf_rows(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the canonical basis of the row lattice: pivots positive, entries
    above a pivot reduced into [0, pivot), zero rows dropped.
    """
    a = [[int(x) for x in r] for r in rows]
    if not a:
        return []
    m, n = len(a), len(a[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            # Euclid on the two column entries via row operations
            while a[i][col] != 0:
                q = a[r][col] // a[i][col]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                a[r], a[i] = a[i], a[r]
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        for j in range(r):
            q = a[j][col] // a[r][col]
            if q:
                a[j] = [x - q * y for x, y in zip(a[j], a[r])]
        r += 1
        if r == m:
            break
    return [tuple(row) for row in a[:r] if any(row)]


# --- integer matrices mod q -------------------------------------------------


def mat_mod(rows, q):
    return [[int(x) % q for x in r] for r in rows]


def mat_mul_mod(a, b, q):
    n, k, m = len(a), len(b), len(b[0])
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % q for col in bt]
            for row in a]


def mat_pow_mod(a, e, q):
    n = len(a)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    base = mat_mod(a, q)
    while e:
        if e & 1:
            out = mat_mul_mod(out, base, q)
        base = mat_mul_mod(base, base, q)
        e >>= 1
    return out


def berkowitz_charpoly_mod(a, q):
    """Characteristic polynomial det(xI - A) mod q, division-free (Berkowitz).

    Works over Z/q for any modulus q, which Faddeev-LeVerrier cannot (it
    divides by k <= dim).  Returns ascending coefficients, length dim+1.
    """
    n = len(a)
    a = mat_mod(a, q)
    coeffs = [1 % q, (-a[0][0]) % q]  # descending
    for i in range(1, n):
        R = a[i][:i]
        S = [a[j][i] for j in range(i)]
        M = [row[:i] for row in a[:i]]
        t = [1 % q, (-a[i][i]) % q]
        v = S[:]
        for k in range(i):
            dot = sum(x * y for x, y in zip(R, v)) % q
            t.append((-dot) % q)
            if k < i - 1:
                v = [sum(M[r][c] * v[c] for c in range(i)) % q for r in range(i)]
        new = [0] * (len(coeffs) + 1)
        for idx in range(len(new)):
            s = 0
            for k in range(len(t)):
                j = idx - k
                if 0 <= j < len(coeffs):
                    s += t[k] * coeffs[j]
            new[idx] = s % q
        coeffs = new
    return list(reversed(coeffs))
