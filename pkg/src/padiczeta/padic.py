r"""Truncated p-adic integer arithmetic.

Residues mod p^N with explicit precision bookkeeping, the Teichmuller
character omega, the 1-unit part <t> = t/omega(t), the Iwasawa logarithm
(with the normalization log p = 0) and the coordinate
L_u(t) = -log<t>/log(u) for a topological generator u of 1 + qZ_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import PAdicPole, reduce_mod_pN


class PadicError(Exception):
    pass


class DomainError(PadicError):
    pass


class BadGenerator(PadicError):
    pass


class NotCompatible(PadicError):
    pass


def q_of(p: int) -> int:
    """q = 4 if p = 2 else p."""
    return 4 if p == 2 else p


@dataclass(frozen=True)
class PadicInt:
    """Residue in [0, p^N); N is the working precision."""

    p: int
    N: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.N)

    @classmethod
    def from_rational(cls, r, p: int, N: int) -> "PadicInt":
        return cls(p, N, reduce_mod_pN(Fraction(r), p, N))

    def _join(self, other) -> tuple["PadicInt", "PadicInt"]:
        if isinstance(other, int):
            other = PadicInt(self.p, self.N, other)
        elif isinstance(other, Fraction):
            other = PadicInt.from_rational(other, self.p, self.N)
        if other.p != self.p:
            raise PadicError("mixed primes")
        N = min(self.N, other.N)
        return self.truncate(N), other.truncate(N)

    def truncate(self, N: int) -> "PadicInt":
        if N > self.N:
            raise PadicError("cannot inflate precision")
        return PadicInt(self.p, N, self.value % self.p**N)

    def __add__(self, other):
        a, b = self._join(other)
        return PadicInt(a.p, a.N, a.value + b.value)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, self.N, -self.value)

    def __sub__(self, other):
        a, b = self._join(other)
        return PadicInt(a.p, a.N, a.value - b.value)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._join(other)
        return PadicInt(a.p, a.N, a.value * b.value)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        return PadicInt(self.p, self.N, pow(self.value, n, self.p**self.N))

    def invert(self) -> "PadicInt":
        if not self.is_unit():
            raise DomainError("inverting a non-unit")
        return PadicInt(self.p, self.N, pow(self.value, -1, self.p**self.N))

    def valuation(self) -> int:
        """min(N, v_p); exact when the value is a unit or N is large enough."""
        if self.value == 0:
            return self.N
        v, x = 0, self.value
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p}^{self.N})"


def teichmuller(a: PadicInt) -> PadicInt:
    """omega(a): the root-of-unity lift of a's residue; 0 on non-units."""
    if not a.is_unit():
        return PadicInt(a.p, a.N, 0)
    mod = a.p**a.N
    x = a.value
    if a.p == 2:
        # phi(q) = 2: omega(a) = +-1 per a mod 4
        return PadicInt(2, a.N, 1 if a.value % 4 == 1 else -1)
    for _ in range(a.N + 1):
        nxt = pow(x, a.p, mod)
        if nxt == x:
            break
        x = nxt
    return PadicInt(a.p, a.N, x)


def angle(a: PadicInt) -> PadicInt:
    """<a> = a/omega(a) for units (lies in 1 + qZ_p); 0 otherwise."""
    if not a.is_unit():
        return PadicInt(a.p, a.N, 0)
    return a * teichmuller(a).invert()


def iwasawa_log(w: PadicInt) -> PadicInt:
    """log of a 1-unit, log(1+x) = x - x^2/2 + ...; convention log p = 0."""
    p, N = w.p, w.N
    q = q_of(p)
    if (w.value - 1) % q != 0:
        raise DomainError(f"log argument {w.value} is not in 1 + {q}Z_{p}")
    # v(x^k/k) >= k - v_p(k) >= k - log_p(k), increasing in k; choose kmax
    # so every omitted term vanishes mod p^N
    t = 1
    while p ** (t + 1) < N + t + 2:
        t += 1
    kmax = N + t
    maxkv = 0
    k = p
    while k <= kmax:
        maxkv += 1
        k *= p
    A = N + maxkv
    mod = p**A
    x = (w.value - 1) % mod
    acc = 0
    xk = 1
    for k in range(1, kmax + 1):
        xk = (xk * x) % mod
        kv = _vp(k, p)
        kk = k // p**kv
        # v(x^k) >= k > kv, so the residue is exactly divisible by p^kv
        contrib = (xk // p**kv) * pow(kk, -1, mod) % mod
        acc = (acc - contrib if k % 2 == 0 else acc + contrib) % mod
    return PadicInt(p, N, acc % p**N)


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def ell_u(a: PadicInt, u: PadicInt) -> PadicInt:
    """L_u(a) = -log<a>/log(u) mod p^N; u generates 1 + qZ_p."""
    p, N = a.p, a.N
    q = q_of(p)
    vq = 2 if p == 2 else 1
    if not a.is_unit():
        raise DomainError("L_u needs a unit argument")
    uu = PadicInt(p, N + vq + 1, u.value)
    if (uu.value - 1) % q != 0 or ((uu.value - 1) // q) % p == 0:
        raise BadGenerator(f"{u.value} does not generate 1 + {q}Z_{p}")
    aa = PadicInt(p, N + vq + 1, a.value)
    la = iwasawa_log(angle(aa))
    lu = iwasawa_log(uu)
    # both logs are divisible by exactly q; the quotient is a p-adic integer
    mod = p**N
    num = la.value // p**vq
    den = lu.value // p**vq
    return PadicInt(p, N, (-num * pow(den, -1, p**N)) % mod)


def embed_root(c: int, k: int, p: int, N: int, generator: int | None = None) -> PadicInt:
    """An exact c-th root of unity mod p^N, c | p-1, via the Teichmuller lift."""
    if p == 2 or (p - 1) % c != 0:
        raise NotCompatible(f"{c} does not divide {p} - 1")
    g = generator if generator is not None else _smallest_primitive_root(p)
    w = teichmuller(PadicInt(p, N, g))
    return w ** (k * ((p - 1) // c))


def _smallest_primitive_root(p: int) -> int:
    order = p - 1
    factors = set()
    m, d = order, 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise PAdicPole("no primitive root found")  # unreachable for prime p


def ell_u_table(p: int, ell: int, u_value: int) -> dict[int, int]:
    """L_u(t) mod p^ell for every unit residue t mod q*p^ell.

    L_u(t) mod p^ell only depends on t mod q*p^ell, which makes this table
    the fast path for coefficient bucketing.
    """
    q = q_of(p)
    modin = q * p**ell
    out = {}
    Nwork = ell + 3
    u = PadicInt(p, Nwork, u_value)
    for t in range(modin):
        if t % p == 0:
            continue
        val = ell_u(PadicInt(p, Nwork, t), u)
        out[t] = val.value % p**ell
    return out
