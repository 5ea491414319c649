r"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are stored as polynomials in zeta_M reduced modulo the M-th
cyclotomic polynomial, with Fraction coefficients, so equality of values
is equality of coefficient vectors.  The module also provides truncated
multivariate power series over a fixed cyclotomic ring; these carry the
exponential kernels whose diagonal coefficients give zeta values at
non-positive integers.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from math import gcd


class CyclotomicError(Exception):
    pass


class NotRational(CyclotomicError):
    """Raised when a rationality extraction meets non-constant coordinates."""

    def __init__(self, coeffs):
        super().__init__(f"element is not rational: {coeffs}")
        self.coeffs = coeffs


class DivisionByZero(CyclotomicError):
    pass


class PAdicPole(CyclotomicError):
    """Denominator divisible by p; the rational has no residue mod p^N."""


class TruncationExceeded(CyclotomicError):
    pass


# ---------------------------------------------------------------------------
# integer polynomial helpers (dense coefficient lists, low degree first)

def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return out


def _poly_divmod(num, den):
    # den monic-leading nonzero
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(1, len(num) - dn)
    while len(num) - 1 >= dn and any(num):
        while num and not num[-1]:
            num.pop()
        if len(num) - 1 < dn:
            break
        q = num[-1] / lead
        shift = len(num) - 1 - dn
        quot[shift] = q
        for i, c in enumerate(den):
            num[shift + i] -= q * c
        num.pop()
    while len(num) > 1 and not num[-1]:
        num.pop()
    return quot, num


def _poly_trim(a):
    a = list(a)
    while len(a) > 1 and not a[-1]:
        a.pop()
    return a


def euler_phi(M: int) -> int:
    out = M
    m = M
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple:
    """Coefficients of Phi_M, low degree first, as exact Fractions."""
    if M == 1:
        return (Fraction(-1), Fraction(1))
    poly = [Fraction(0)] * M + [Fraction(1)]
    poly[0] = Fraction(-1)  # X^M - 1
    for d in range(1, M):
        if M % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(_poly_trim(poly))


@functools.lru_cache(maxsize=None)
def _reduction_tables(M: int):
    """Power basis data: zeta^e in the basis 1..zeta^(phi-1) for e < M."""
    phi = euler_phi(M)
    mod = list(cyclotomic_polynomial(M))
    powers = []
    cur = [Fraction(1)]
    for _ in range(M):
        vec = cur + [Fraction(0)] * (phi - len(cur))
        powers.append(tuple(vec[:phi]))
        cur = [Fraction(0)] + cur
        if len(cur) - 1 >= phi:
            _, cur = _poly_divmod(cur, mod)
        cur = _poly_trim(cur)
    return tuple(powers)


class CycloElem:
    """Element of Q(zeta_M) in the canonical power basis mod Phi_M."""

    __slots__ = ("M", "coeffs")

    def __init__(self, M: int, coeffs):
        phi = euler_phi(M)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coordinates for M={M}")
        self.M = M
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, M: int) -> "CycloElem":
        return cls(M, [Fraction(0)] * euler_phi(M))

    @classmethod
    def one(cls, M: int) -> "CycloElem":
        return cls.from_rational(M, Fraction(1))

    @classmethod
    def from_rational(cls, M: int, r) -> "CycloElem":
        v = [Fraction(0)] * euler_phi(M)
        v[0] = Fraction(r)
        return cls(M, v)

    # -- ring structure ------------------------------------------------
    def _check(self, other):
        if self.M != other.M:
            raise ValueError("mixed cyclotomic conductors")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.from_rational(self.M, other)
        self._check(other)
        return CycloElem(self.M, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.M, [-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.from_rational(self.M, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElem(self.M, [a * other for a in self.coeffs])
        self._check(other)
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        return CycloElem(self.M, _reduce_vec(self.M, prod))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        out = CycloElem.one(self.M)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.from_rational(self.M, other)
        return isinstance(other, CycloElem) and self.M == other.M and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.M, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"CycloElem(M={self.M}, {list(self.coeffs)})"

    # -- field extras ---------------------------------------------------
    def galois(self, t: int) -> "CycloElem":
        """Apply zeta_M -> zeta_M^t; t must be coprime to M."""
        if gcd(t, self.M) != 1:
            raise ValueError("galois substitution needs t coprime to M")
        powers = _reduction_tables(self.M)
        out = [Fraction(0)] * euler_phi(self.M)
        for e, c in enumerate(self.coeffs):
            if not c:
                continue
            vec = powers[(e * t) % self.M]
            for i, w in enumerate(vec):
                if w:
                    out[i] += c * w
        return CycloElem(self.M, out)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])


def _reduce_vec(M, poly):
    phi = euler_phi(M)
    if len(poly) <= phi:
        return poly + [Fraction(0)] * (phi - len(poly))
    powers = _reduction_tables(M)
    out = list(poly[:phi])
    for e in range(phi, len(poly)):
        c = poly[e]
        if not c:
            continue
        vec = powers[e % M]  # zeta^M = 1 folds the exponent
        for i, w in enumerate(vec):
            if w:
                out[i] += c * w
    return out


def root_of_unity(M: int, k: int) -> CycloElem:
    """zeta_M^k in canonical form; root_of_unity(M, 0) == 1."""
    if M < 1:
        raise ValueError("M must be >= 1")
    vec = _reduction_tables(M)[k % M]
    return CycloElem(M, list(vec))


def invert(x: CycloElem) -> CycloElem:
    """Multiplicative inverse via extended gcd against Phi_M."""
    if not x:
        raise DivisionByZero("inverting zero cyclotomic element")
    mod = list(cyclotomic_polynomial(x.M))
    # extended Euclid: r0 = Phi_M, r1 = x; Phi_M irreducible over Q so the
    # gcd is a nonzero constant whenever x != 0
    r0, r1 = mod, _poly_trim(list(x.coeffs))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, _poly_trim(r)
        s0, s1 = s1, _poly_trim(_poly_sub(s0, _poly_mul(q, s1)))
    if not r1[0]:
        raise DivisionByZero("element not invertible mod Phi_M")
    c = r1[0]
    inv = [s / c for s in s1]
    return CycloElem(x.M, _reduce_vec(x.M, inv))


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def extract_rational(x: CycloElem) -> Fraction:
    """Constant coordinate of x; error if any other coordinate is nonzero."""
    if not x.is_rational():
        raise NotRational(x.coeffs)
    return x.coeffs[0]


def reduce_mod_pN(r, p: int, N: int) -> int:
    """The unique residue mod p^N congruent to the p-integral rational r."""
    r = Fraction(r)
    if r.denominator % p == 0:
        raise PAdicPole(f"denominator of {r} is divisible by {p}")
    mod = p ** N
    return (r.numerator % mod) * pow(r.denominator, -1, mod) % mod


# ---------------------------------------------------------------------------
# truncated multivariate power series over Q(zeta_M)


class TruncatedSeries:
    """Power series in nvars variables truncated at a total degree.

    Coefficients live in a fixed cyclotomic ring Q(zeta_M); monomials are
    keyed by exponent tuples.  Multiplication drops terms beyond the
    truncation degree.
    """

    __slots__ = ("M", "nvars", "max_total_degree", "coeffs")

    def __init__(self, M: int, nvars: int, max_total_degree: int, coeffs=None):
        self.M = M
        self.nvars = nvars
        self.max_total_degree = max_total_degree
        self.coeffs = dict(coeffs or {})

    @classmethod
    def constant(cls, M, nvars, max_deg, value) -> "TruncatedSeries":
        if isinstance(value, (int, Fraction)):
            value = CycloElem.from_rational(M, value)
        s = cls(M, nvars, max_deg)
        if value:
            s.coeffs[(0,) * nvars] = value
        return s

    @classmethod
    def variable(cls, M, nvars, max_deg, i, scale=None) -> "TruncatedSeries":
        """scale * y_i as a series (scale defaults to 1)."""
        if scale is None:
            scale = CycloElem.one(M)
        elif isinstance(scale, (int, Fraction)):
            scale = CycloElem.from_rational(M, scale)
        exps = [0] * nvars
        exps[i] = 1
        return cls(M, nvars, max_deg, {tuple(exps): scale})

    def _compat(self, other):
        if (self.M, self.nvars, self.max_total_degree) != (
            other.M,
            other.nvars,
            other.max_total_degree,
        ):
            raise ValueError("incompatible series parameters")

    def __add__(self, other):
        self._compat(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k)
            s = v if w is None else w + v
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return TruncatedSeries(self.M, self.nvars, self.max_total_degree, out)

    def __neg__(self):
        return TruncatedSeries(
            self.M, self.nvars, self.max_total_degree, {k: -v for k, v in self.coeffs.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloElem)):
            if isinstance(other, (int, Fraction)):
                other = CycloElem.from_rational(self.M, other)
            return TruncatedSeries(
                self.M,
                self.nvars,
                self.max_total_degree,
                {k: v * other for k, v in self.coeffs.items() if v * other},
            )
        self._compat(other)
        out = {}
        for k1, v1 in self.coeffs.items():
            d1 = sum(k1)
            for k2, v2 in other.coeffs.items():
                if d1 + sum(k2) > self.max_total_degree:
                    continue
                k = tuple(a + b for a, b in zip(k1, k2))
                p = v1 * v2
                w = out.get(k)
                s = p if w is None else w + p
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return TruncatedSeries(self.M, self.nvars, self.max_total_degree, out)

    __rmul__ = __mul__

    def constant_term(self) -> CycloElem:
        return self.coeffs.get((0,) * self.nvars, CycloElem.zero(self.M))

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term; factorials kept exact."""
        if self.constant_term():
            raise ValueError("exp needs zero constant term")
        out = TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1)
        term = TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1)
        for i in range(1, self.max_total_degree + 1):
            term = term * self * Fraction(1, i)
            if not term.coeffs:
                break
            out = out + term
        return out

    def log(self) -> "TruncatedSeries":
        """log of a series with constant term 1."""
        if self.constant_term() != CycloElem.one(self.M):
            raise ValueError("log needs constant term 1")
        u = self - TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1)
        out = TruncatedSeries(self.M, self.nvars, self.max_total_degree)
        term = TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1)
        for i in range(1, self.max_total_degree + 1):
            term = term * u
            if not term.coeffs:
                break
            out = out + term * Fraction((-1) ** (i + 1), i)
        return out

    def inverse(self) -> "TruncatedSeries":
        """Inverse of a series with invertible constant term."""
        c0 = self.constant_term()
        if not c0:
            raise DivisionByZero("series constant term is zero")
        c0inv = invert(c0)
        # S = c0 (1 - u) with u = 1 - S/c0 ; 1/S = (1 + u + u^2 + ...)/c0
        u = TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1) - self * c0inv
        out = TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1)
        term = TruncatedSeries.constant(self.M, self.nvars, self.max_total_degree, 1)
        for _ in range(self.max_total_degree):
            term = term * u
            if not term.coeffs:
                break
            out = out + term
        return out * c0inv


def series_coefficient(F: TruncatedSeries, target) -> CycloElem:
    """Stored coefficient at the exponent tuple (zero if absent)."""
    target = tuple(target)
    if len(target) != F.nvars:
        raise ValueError("exponent tuple has wrong arity")
    if sum(target) > F.max_total_degree:
        raise TruncationExceeded(f"{target} beyond degree {F.max_total_degree}")
    return F.coeffs.get(target, CycloElem.zero(F.M))
