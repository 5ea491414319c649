r"""Exact arithmetic for Q and real quadratic fields Q(sqrt(D)) of class number 1.

Elements are pairs (a, b) meaning a + b*omega over the integral basis
{1, omega}; ideals are rank-n lattices in canonical triangular (HNF) form
with a denominator for the fractional case.  Ray class groups modulo an
integral ideal f are computed by brute-force enumeration of the
residue-and-sign group modulo the images of the units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache


class NumberFieldError(Exception):
    pass


class NotSquarefree(NumberFieldError):
    pass


class ClassNumberNotOne(NumberFieldError):
    pass


class ModulusTooLarge(NumberFieldError):
    pass


class NotPrincipal(NumberFieldError):
    pass


# ---------------------------------------------------------------------------
# exact square-root enclosures (used for search boxes only; all final tests
# are exact rational identities)


def sqrt_upper(x: Fraction, scale: int = 10**6) -> Fraction:
    """Rational upper bound of sqrt(x) for x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    n = x.numerator * scale * scale
    d = x.denominator
    return Fraction(math.isqrt(n // d) + 1, scale)


def sqrt_lower(x: Fraction, scale: int = 10**6) -> Fraction:
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    n = x.numerator * scale * scale
    d = x.denominator
    return Fraction(math.isqrt(n // d), scale)


def _is_squarefree(D: int) -> bool:
    if D < 1:
        return False
    d = 2
    m = D
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        if m % d == 0:
            m //= d
        d += 1
    return True


# ---------------------------------------------------------------------------
# fields and elements


@dataclass(frozen=True)
class FieldData:
    """A base field: Q (D = 1) or Q(sqrt(D)) with D squarefree > 1.

    omega is the integral-basis second element; it satisfies
    omega^2 = omega_trace * omega - omega_norm.
    """

    D: int
    n: int
    disc: int
    omega_trace: int
    omega_norm: int
    eps0: "FieldElem" = dc_field(compare=False)
    different: "IdealHNF" = dc_field(compare=False)

    def one(self):
        return FieldElem(self, Fraction(1), Fraction(0))

    def zero(self):
        return FieldElem(self, Fraction(0), Fraction(0))

    def elem(self, a, b=0):
        return FieldElem(self, Fraction(a), Fraction(b))

    def from_sqrtD(self, a, b):
        """The element a + b*sqrt(D) expressed over {1, omega}."""
        a, b = Fraction(a), Fraction(b)
        if self.n == 1:
            if b:
                raise ValueError("sqrt(D) is rational only for D = 1")
            return self.elem(a + b)
        if self.D % 4 == 1:
            # omega = (1+sqrt(D))/2, sqrt(D) = 2*omega - 1
            return FieldElem(self, a - b, 2 * b)
        return FieldElem(self, a, b)

    def maximal_order(self) -> "IdealHNF":
        return IdealHNF.unit_ideal(self)


class FieldElem:
    """a + b*omega with exact rational coordinates."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: FieldData, a, b=0):
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b)
        if field.n == 1 and self.b:
            raise ValueError("rational field element has no omega part")

    # -- basic ring ops -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        return FieldElem(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field.D != self.field.D:
                raise ValueError("mixed fields")
            return other
        return FieldElem(self.field, Fraction(other), Fraction(0))

    def __mul__(self, other):
        other = self._coerce(other)
        T0, N0 = self.field.omega_trace, self.field.omega_norm
        a, b, c, d = self.a, self.b, other.a, other.b
        return FieldElem(self.field, a * c - b * d * N0, a * d + b * c + b * d * T0)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "FieldElem":
        return FieldElem(self.field, self.a + self.b * self.field.omega_trace, -self.b)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.omega_trace if self.field.n == 2 else self.a

    def norm(self) -> Fraction:
        if self.field.n == 1:
            return self.a
        return self.a * self.a + self.a * self.b * self.field.omega_trace + self.b * self.b * self.field.omega_norm

    def inverse(self) -> "FieldElem":
        nm = self.norm()
        if not nm:
            raise ZeroDivisionError("inverting zero")
        if self.field.n == 1:
            return FieldElem(self.field, 1 / self.a)
        cj = self.conj()
        return FieldElem(self.field, cj.a / nm, cj.b / nm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.field.D == other.field.D and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.field.D, self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        if self.field.n == 1:
            return f"{self.a}"
        return f"({self.a} + {self.b}*w)"

    # -- embeddings ------------------------------------------------------
    def embedding_sign(self, i: int) -> int:
        """Exact sign of sigma_i(x); sigma_1 uses +sqrt(disc)."""
        if self.field.n == 1:
            v = self.a
            return 0 if v == 0 else (1 if v > 0 else -1)
        # sigma_i(x) = (2a + b*T0 +- b*sqrt(disc)) / 2
        r = 2 * self.a + self.b * self.field.omega_trace
        s = self.b if i == 0 else -self.b
        if s == 0:
            return 0 if r == 0 else (1 if r > 0 else -1)
        if r == 0:
            return 1 if s > 0 else -1
        if r > 0 and s > 0:
            return 1
        if r < 0 and s < 0:
            return -1
        # opposite signs: compare r^2 against s^2 * disc
        big = r * r > s * s * self.field.disc
        if big:
            return 1 if r > 0 else -1
        return 1 if s > 0 else -1

    def signs(self) -> tuple:
        return tuple(self.embedding_sign(i) for i in range(self.field.n))

    def is_totally_positive(self) -> bool:
        return all(s > 0 for s in self.signs())

    def embedding_bounds(self, i: int) -> tuple:
        """Rational enclosure [lo, hi] of sigma_i(x)."""
        if self.field.n == 1:
            return (self.a, self.a)
        r = Fraction(2 * self.a + self.b * self.field.omega_trace, 2)
        s = Fraction(self.b if i == 0 else -self.b, 2)
        if s >= 0:
            lo = r + s * sqrt_lower(Fraction(self.field.disc))
            hi = r + s * sqrt_upper(Fraction(self.field.disc))
        else:
            lo = r + s * sqrt_upper(Fraction(self.field.disc))
            hi = r + s * sqrt_lower(Fraction(self.field.disc))
        return (lo, hi)

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1


# ---------------------------------------------------------------------------
# ideals in Hermite normal form


class IdealHNF:
    """Fractional ideal as (1/den) * (Z*a + Z*(b + c*omega)), canonical HNF.

    Invariants: a, c > 0, 0 <= b < a, c | a, c | b, and the lattice is an
    O_K-module.  For n = 1 the lattice is Z*a.
    """

    __slots__ = ("field", "a", "b", "c", "den")

    def __init__(self, field: FieldData, a: int, b: int, c: int, den: int = 1):
        if den <= 0 or a <= 0 or (field.n == 2 and c <= 0):
            raise ValueError("bad HNF data")
        g = math.gcd(math.gcd(a, abs(b)), math.gcd(c, den)) if field.n == 2 else math.gcd(a, den)
        self.field = field
        self.a = a // g
        self.b = (b // g) if field.n == 2 else 0
        self.c = (c // g) if field.n == 2 else 1
        self.den = den // g
        if field.n == 2:
            self.b %= self.a

    # -- constructors ----------------------------------------------------
    @classmethod
    def unit_ideal(cls, field: FieldData) -> "IdealHNF":
        return cls(field, 1, 0, 1, 1)

    @classmethod
    def from_generators(cls, field: FieldData, gens) -> "IdealHNF":
        """O_K-ideal generated by the field elements gens."""
        elems = []
        for g in gens:
            if not isinstance(g, FieldElem):
                g = field.elem(g)
            elems.append(g)
            if field.n == 2:
                elems.append(g * FieldElem(field, 0, 1))  # g * omega
        den = 1
        for e in elems:
            den = _lcm(den, _lcm(e.a.denominator, e.b.denominator))
        rows = [(int(e.a * den), int(e.b * den)) for e in elems]
        a, b, c = _hnf_rows(rows, field.n)
        if a == 0:
            raise ValueError("zero ideal")
        return cls(field, a, b, c, den)

    @classmethod
    def principal(cls, field: FieldData, x) -> "IdealHNF":
        return cls.from_generators(field, [x])

    @classmethod
    def from_int(cls, field: FieldData, m: int) -> "IdealHNF":
        return cls.principal(field, field.elem(m))

    # -- structure --------------------------------------------------------
    def basis_elements(self) -> list:
        """Lattice basis as field elements."""
        f = self.field
        if f.n == 1:
            return [FieldElem(f, Fraction(self.a, self.den))]
        return [
            FieldElem(f, Fraction(self.a, self.den), Fraction(0)),
            FieldElem(f, Fraction(self.b, self.den), Fraction(self.c, self.den)),
        ]

    def norm(self) -> Fraction:
        if self.field.n == 1:
            return Fraction(self.a, self.den)
        return Fraction(self.a * self.c, self.den * self.den)

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.basis_elements())

    def smallest_rational(self) -> Fraction:
        """Positive generator of (ideal intersect Q)."""
        return Fraction(self.a, self.den)

    def contains(self, x: FieldElem) -> bool:
        """Exact membership test."""
        if self.field.n == 1:
            q = x.a / Fraction(self.a, self.den)
            return q.denominator == 1
        # x = s*(a/den) + t*(b + c*omega)/den with s, t integers
        t = x.b * self.den / self.c
        if t.denominator != 1:
            return False
        s = (x.a * self.den - t * self.b) / self.a
        return s.denominator == 1

    def __eq__(self, other):
        return (
            isinstance(other, IdealHNF)
            and self.field.D == other.field.D
            and (self.a, self.b, self.c, self.den) == (other.a, other.b, other.c, other.den)
        )

    def __hash__(self):
        return hash((self.field.D, self.a, self.b, self.c, self.den))

    def __repr__(self):
        if self.field.n == 1:
            return f"Ideal({self.a}/{self.den})"
        return f"Ideal([{self.a},0;{self.b},{self.c}]/{self.den})"

    # -- arithmetic ---------------------------------------------------------
    def __mul__(self, other) -> "IdealHNF":
        if isinstance(other, FieldElem):
            other = IdealHNF.principal(self.field, other)
        gens = []
        for e in self.basis_elements():
            for g in other.basis_elements():
                gens.append(e * g)
        return _ideal_from_lattice(self.field, gens)

    def inverse(self) -> "IdealHNF":
        nm = self.norm()
        conj_gens = [e.conj() for e in self.basis_elements()]
        conj_ideal = _ideal_from_lattice(self.field, conj_gens)
        return conj_ideal.scale(1 / nm)

    def scale(self, r) -> "IdealHNF":
        r = Fraction(r)
        if r <= 0:
            raise ValueError("scale must be positive")
        num, den = r.numerator, r.denominator
        return IdealHNF(
            self.field, self.a * num, self.b * num, self.c * num, self.den * den
        )

    def gcd(self, other: "IdealHNF") -> "IdealHNF":
        gens = self.basis_elements() + other.basis_elements()
        return _ideal_from_lattice(self.field, gens)

    def coprime_to(self, other: "IdealHNF") -> bool:
        return self.gcd(other) == IdealHNF.unit_ideal(self.field)

    def divides(self, other: "IdealHNF") -> bool:
        """self | other, i.e. other subset of self."""
        return all(self.contains(e) for e in other.basis_elements())

    def reduce_element(self, x: FieldElem) -> tuple:
        """Canonical residue coordinates of x modulo this integral ideal."""
        if self.den != 1:
            raise ValueError("residues need an integral ideal")
        if not x.is_integral():
            raise ValueError("residue reduction needs an integral element")
        if self.field.n == 1:
            return (int(x.a % self.a),)
        t = x.b % self.c
        k = (x.b - t) / self.c
        u = x.a - k * self.b
        return (int(u % self.a), int(t))

    def residue_to_elem(self, r: tuple) -> FieldElem:
        if self.field.n == 1:
            return self.field.elem(r[0])
        return FieldElem(self.field, Fraction(r[0]), Fraction(r[1]))


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _hnf_rows(rows, n):
    """HNF of the lattice spanned by integer coordinate rows (a, b)."""
    if n == 1:
        g = 0
        for r in rows:
            g = math.gcd(g, abs(r[0]))
        return g, 0, 1
    rows = [list(r) for r in rows if any(r)]
    # eliminate the omega column by gcd steps
    c = 0
    keeper = None
    for r in rows:
        c = math.gcd(c, abs(r[1]))
    if c:
        # find an integer combination achieving omega-coefficient c
        cur = None
        for r in rows:
            if r[1] == 0:
                continue
            if cur is None:
                cur = list(r)
                continue
            g, u, v = _xgcd(cur[1], r[1])
            cur = [u * cur[0] + v * r[0], g]
        keeper = cur
        assert abs(keeper[1]) == c
        if keeper[1] < 0:
            keeper = [-keeper[0], -keeper[1]]
    a = 0
    for r in rows:
        if c:
            k = r[1] // c
            red = r[0] - k * keeper[0]
        else:
            red = r[0]
        a = math.gcd(a, abs(red))
    if c == 0:
        return a, 0, 1
    b = keeper[0] % a if a else keeper[0]
    return a, b, c


def _xgcd(x, y):
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _ideal_from_lattice(field, gens) -> IdealHNF:
    """Lattice (not necessarily O-module closed) spanned by field elements."""
    den = 1
    for e in gens:
        den = _lcm(den, _lcm(e.a.denominator, e.b.denominator))
    rows = [(int(e.a * den), int(e.b * den)) for e in gens]
    a, b, c = _hnf_rows(rows, field.n)
    if a == 0:
        raise ValueError("zero lattice")
    return IdealHNF(field, a, b, c, den)


# ---------------------------------------------------------------------------
# field construction


def _fundamental_unit(D: int, cap: int = 10**7) -> tuple:
    """Smallest unit > 1 as omega-coordinates, via the Pell scan on y."""
    if D % 4 == 1:
        # x^2 - D y^2 = +-4, eps0 = (x + y sqrt D)/2 = (x - y)/2 + y*omega
        for y in range(1, cap):
            for s in (-4, 4):
                t = D * y * y + s
                if t > 0:
                    x = math.isqrt(t)
                    if x * x == t:
                        return Fraction(x - y, 2), Fraction(y)
    else:
        for y in range(1, cap):
            for s in (-1, 1):
                t = D * y * y + s
                if t > 0:
                    x = math.isqrt(t)
                    if x * x == t:
                        return Fraction(x), Fraction(y)
    raise NumberFieldError(f"fundamental unit search exhausted for D={D}")


@lru_cache(maxsize=None)
def make_field(D: int) -> FieldData:
    """Base field for squarefree D >= 1; D = 1 encodes K = Q."""
    if not _is_squarefree(D):
        raise NotSquarefree(f"D={D} is not squarefree")
    if D == 1:
        fld = FieldData(1, 1, 1, 0, 0, None, None)
        object.__setattr__(fld, "eps0", fld.one())
        object.__setattr__(fld, "different", IdealHNF.unit_ideal(fld))
        return fld
    if D % 4 == 1:
        disc, T0, N0 = D, 1, (1 - D) // 4
    else:
        disc, T0, N0 = 4 * D, 0, -D
    fld = FieldData(D, 2, disc, T0, N0, None, None)
    ua, ub = _fundamental_unit(D)
    eps0 = FieldElem(fld, ua, ub)
    if eps0.embedding_sign(0) < 0:
        eps0 = -eps0
    object.__setattr__(fld, "eps0", eps0)
    # different = (f'(omega)) = (2*omega - T0); its norm is |disc|
    diff = IdealHNF.principal(fld, FieldElem(fld, Fraction(-T0), Fraction(2)))
    object.__setattr__(fld, "different", diff)
    assert diff.norm() == abs(disc)
    _verify_class_number_one(fld)
    return fld


def _verify_class_number_one(fld: FieldData):
    """Minkowski-bound principality check; raises ClassNumberNotOne."""
    bound = sqrt_upper(Fraction(fld.disc)) / 2
    p = 2
    while p <= bound:
        if _is_prime(p):
            for ideal in prime_ideals_above(fld, p):
                if ideal.norm() <= bound:
                    try:
                        find_generator(ideal)
                    except NotPrincipal:
                        raise ClassNumberNotOne(
                            f"non-principal prime of norm {ideal.norm()} above {p}"
                        ) from None
        p += 1


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def prime_ideals_above(fld: FieldData, p: int) -> list:
    """Prime ideals of O_K above the rational prime p."""
    if fld.n == 1:
        return [IdealHNF.from_int(fld, p)]
    T0, N0 = fld.omega_trace, fld.omega_norm
    roots = [t for t in range(p) if (t * t - T0 * t + N0) % p == 0]
    if not roots:
        return [IdealHNF.from_int(fld, p)]  # inert
    out = []
    for t in roots:
        # (p, omega - t): HNF a=p, b=(-t mod p), c=1
        out.append(IdealHNF(fld, p, (-t) % p, 1, 1))
    return sorted(set(out), key=lambda ideal: (ideal.a, ideal.b, ideal.c))


def find_generator(ideal: IdealHNF, prefer_positive: bool = True) -> FieldElem:
    """A generator of a (necessarily principal) ideal; deterministic choice.

    Searches the embedding box obtained by folding with the fundamental
    totally positive unit; raises NotPrincipal if the box holds none.
    """
    fld = ideal.field
    if fld.n == 1:
        return fld.elem(ideal.smallest_rational())
    nm = ideal.norm()
    epsp = totally_positive_unit(fld)
    ev_hi = epsp.embedding_bounds(0)[1]
    B = sqrt_upper(nm * ev_hi) + 1
    # candidates xi = (u + v*omega), u = (x*a + y*b)/den, v = y*c/den
    a, b, c, den = ideal.a, ideal.b, ideal.c, ideal.den
    lo0, hi0 = FieldElem(fld, 0, 1).embedding_bounds(0)
    lo1, hi1 = FieldElem(fld, 0, 1).embedding_bounds(1)
    # sigma_i(xi) = u + v*sigma_i(omega); need sigma_1 in (0,B], |sigma_2|<=B
    # v-range: v = (sigma1 - sigma2)/sqrt(disc): |v| <= 2B/sqrt(disc)
    vbound = 2 * B / sqrt_lower(Fraction(fld.disc))
    ymax = int(vbound * den / c) + 1
    candidates = []

    def vrange(v, lo, hi):
        # enclosure of v * sigma_i(omega)
        vals = (v * lo, v * hi)
        return min(vals), max(vals)

    for y in range(-ymax, ymax + 1):
        v = Fraction(y * c, den)
        s0lo, s0hi = vrange(v, lo0, hi0)
        s1lo, s1hi = vrange(v, lo1, hi1)
        # sigma_1 = u + v*sigma_1(omega) in (0, B]; sigma_2 in [-B, B]
        u_hi = min(B - s0lo, B - s1lo)
        u_lo = max(-s0hi, -B - s1hi)
        if u_lo > u_hi:
            continue
        xmin = math.ceil((u_lo * den - y * b) / a)
        xmax = math.floor((u_hi * den - y * b) / a)
        for x in range(xmin, xmax + 1):
            xi = FieldElem(fld, Fraction(x * a + y * b, den), Fraction(y * c, den))
            if not xi:
                continue
            if abs(xi.norm()) == nm and xi.embedding_sign(0) > 0:
                candidates.append(xi)
    if not candidates:
        raise NotPrincipal(f"no generator found for {ideal}")
    if prefer_positive:
        pos = [x for x in candidates if x.is_totally_positive()]
        if pos:
            candidates = pos
    candidates.sort(key=lambda x: (x.trace(), x.a, x.b))
    return candidates[0]


# ---------------------------------------------------------------------------
# units


def totally_positive_unit(F: FieldData) -> FieldElem:
    """Generator of E_+ modulo {1}: eps0 if already totally positive, else eps0^2."""
    if F.n == 1:
        return F.one()
    e = F.eps0
    if e.norm() == 1 and e.is_totally_positive():
        return e
    return e * e


def eplus_f_generator(F: FieldData, f: IdealHNF, cap: int = 10**6) -> tuple:
    """(eps_+^t, t) with t minimal such that eps_+^t = 1 mod* f."""
    if not f.is_integral():
        raise ValueError("modulus must be integral")
    epsp = totally_positive_unit(F)
    if F.n == 1:
        return F.one(), 1
    one_res = f.reduce_element(F.one())
    cur = epsp
    t = 1
    while t <= cap:
        if f.reduce_element(cur) == one_res:
            return cur, t
        cur = cur * epsp
        t += 1
    raise ModulusTooLarge("unit order search exceeded cap")


# ---------------------------------------------------------------------------
# ray class groups


class RayClassData:
    """Ray class group modulo an integral ideal f (with all real places).

    Classes are orbits of (unit residue mod f, sign vector) pairs under the
    subgroup generated by the images of -1 and eps0.  Representatives are
    integral ideals coprime to f of minimal norm in each class.
    """

    def __init__(self, field: FieldData, modulus: IdealHNF, reps, mul_table, class_of,
                 eplus_gen: FieldElem, eplus_exp: int):
        self.field = field
        self.modulus = modulus
        self.reps = reps
        self.mul_table = mul_table
        self._class_of = class_of
        self.eplus_gen = eplus_gen
        self.eplus_exp = eplus_exp

    def __len__(self):
        return len(self.reps)

    def class_of_element(self, x: FieldElem) -> int:
        key = (self.modulus.reduce_element(x), x.signs())
        return self._class_of[key]

    def class_of_ideal(self, ideal: IdealHNF) -> int:
        gen = find_generator(ideal)
        return self.class_of_element(gen)

    def identity_class(self) -> int:
        return self.class_of_element(self.field.one())

    def inverse_class(self, i: int) -> int:
        for j in range(len(self.reps)):
            if self.mul_table[i][j] == self.identity_class():
                return j
        raise NumberFieldError("group table broken")

    def sign_classes(self) -> list:
        """Classes of principal (gamma) with gamma = 1 mod f, arbitrary signs."""
        out = set()
        one_res = self.modulus.reduce_element(self.field.one())
        for signs in _sign_vectors(self.field.n):
            key = (one_res, signs)
            if key in self._class_of:
                out.add(self._class_of[key])
        return sorted(out)


def _sign_vectors(n):
    if n == 1:
        return [(1,), (-1,)]
    return [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def ray_class_data(F: FieldData, f: IdealHNF, residue_cap: int = 10**6,
                   rep_norm_cap: int = 20000) -> RayClassData:
    """Brute-force ray class group modulo f (all real places in the modulus)."""
    if not f.is_integral():
        raise ValueError("modulus must be integral")
    nf = int(f.norm())
    if nf > residue_cap:
        raise ModulusTooLarge(f"N(f) = {nf} exceeds cap {residue_cap}")
    one = IdealHNF.unit_ideal(F)

    # unit residues mod f
    residues = []
    if F.n == 1:
        box = [(i,) for i in range(f.a)]
    else:
        box = [(i, j) for i in range(f.a) for j in range(f.c)]
    for r in box:
        x = f.residue_to_elem(r)
        if _coprime_residue(F, f, x):
            residues.append(r)
    res_index = {r: k for k, r in enumerate(residues)}

    def res_mul(r1, r2):
        x = f.residue_to_elem(r1) * f.residue_to_elem(r2)
        return f.reduce_element(x)

    # the full residue-sign group
    elements = [(r, s) for r in residues for s in _sign_vectors(F.n)]
    elem_index = {e: k for k, e in enumerate(elements)}

    # subgroup generators: images of -1 and eps0
    gens = []
    minus1 = -F.one()
    gens.append((f.reduce_element(minus1), minus1.signs()))
    if F.n == 2:
        gens.append((f.reduce_element(F.eps0), F.eps0.signs()))

    def pair_mul(e1, e2):
        return (res_mul(e1[0], e2[0]), tuple(a * b for a, b in zip(e1[1], e2[1])))

    class_of = {}
    n_classes = 0
    for e in elements:
        if e in class_of:
            continue
        orbit = [e]
        class_of[e] = n_classes
        head = 0
        while head < len(orbit):
            cur = orbit[head]
            head += 1
            for g in gens:
                nxt = pair_mul(cur, g)
                if nxt not in class_of:
                    class_of[nxt] = n_classes
                    orbit.append(nxt)
        n_classes += 1

    # representatives: integral ideals coprime to f, minimal norm per class
    reps = [None] * n_classes
    rep_pairs = [None] * n_classes
    found = 0
    norm = 1
    while found < n_classes:
        if norm > rep_norm_cap:
            raise ModulusTooLarge("representative search exceeded norm cap")
        for ideal in _ideals_of_norm(F, norm):
            if not ideal.coprime_to(f):
                continue
            gen = find_generator(ideal)
            key = (f.reduce_element(gen), gen.signs())
            cls = class_of[key]
            if reps[cls] is None:
                reps[cls] = ideal
                rep_pairs[cls] = key
                found += 1
        norm += 1

    # class(rep_i * rep_j) from the stored generator pairs: generators multiply
    mul_table = []
    for i in range(n_classes):
        row = []
        for j in range(n_classes):
            row.append(class_of[pair_mul(rep_pairs[i], rep_pairs[j])])
        mul_table.append(tuple(row))

    eplus_gen, eplus_exp = eplus_f_generator(F, f)
    return RayClassData(F, f, reps, tuple(mul_table), class_of, eplus_gen, eplus_exp)


def _coprime_residue(F, f, x) -> bool:
    if not x:
        # the zero residue is a unit only modulo the unit ideal
        return f == IdealHNF.unit_ideal(F)
    return IdealHNF.principal(F, x).gcd(f) == IdealHNF.unit_ideal(F)


def _ideals_of_norm(F: FieldData, m: int) -> list:
    """All integral O_K-ideals of norm m, lexicographically ordered."""
    if F.n == 1:
        return [IdealHNF.from_int(F, m)]
    out = []
    T0, N0 = F.omega_trace, F.omega_norm
    for c in range(1, m + 1):
        if m % c:
            continue
        a = m // c
        if a % c:
            continue
        for b in range(0, a, c):
            # O-module closure: a | c*N0 + (b/c + T0)*b
            if (c * N0 + (b // c + T0) * b) % a == 0:
                out.append(IdealHNF(F, a, b, c, 1))
    return out


# ---------------------------------------------------------------------------
# characters


class Character:
    """Character of a ray class group, stored as exponents of e(1/M)."""

    __slots__ = ("ray", "order", "exponents")

    def __init__(self, ray: RayClassData, order: int, exponents: tuple):
        self.ray = ray
        self.order = order
        self.exponents = exponents  # chi(class k) = e(exponents[k] / order)

    def exponent(self, cls: int) -> int:
        return self.exponents[cls]

    def value(self, cls: int):
        from .cyclotomic import root_of_unity

        return root_of_unity(self.order, self.exponents[cls])

    def rational_value(self, cls: int) -> Fraction:
        """Value as a rational; only for characters of order <= 2."""
        if self.order > 2 and any(e % self.order not in (0, self.order // 2) for e in self.exponents):
            raise ValueError("character has irrational values")
        e = self.exponents[cls]
        half = Fraction(e, self.order)
        if half == 0:
            return Fraction(1)
        if half == Fraction(1, 2):
            return Fraction(-1)
        raise ValueError("character value is not rational")

    def true_order(self) -> int:
        g = self.order
        for e in self.exponents:
            g = math.gcd(g, e)
        return self.order // g

    def is_even(self) -> bool:
        """Trivial on every class of (gamma), gamma = 1 mod f, any signs."""
        return all(self.exponents[c] % self.order == 0 for c in self.ray.sign_classes())

    def is_trivial(self) -> bool:
        return all(e % self.order == 0 for e in self.exponents)

    def __repr__(self):
        return f"Character(order={self.true_order()}, exps={self.exponents})"


def all_characters(ray: RayClassData) -> list:
    """Full character table via stepwise extension along a generating chain."""
    n = len(ray.reps)
    ident = ray.identity_class()
    # group exponent
    orders = []
    for g in range(n):
        k, cur = 1, g
        while cur != ident:
            cur = ray.mul_table[cur][g]
            k += 1
        orders.append(k)
    e = 1
    for k in orders:
        e = _lcm(e, k)

    # chain of subgroups; each character stored as an exponent map mod e
    covered = {ident}
    chars = [{ident: 0}]
    while len(covered) < n:
        g = min(x for x in range(n) if x not in covered)
        # smallest k with g^k in the current subgroup
        k, cur = 1, g
        while cur not in covered:
            cur = ray.mul_table[cur][g]
            k += 1
        new_chars = []
        for t in chars:
            target = t[cur]  # t(g^k); k | target is guaranteed (k | e)
            assert target % k == 0
            base = (target // k) % e
            step = e // k
            for j in range(k):
                tg = (base + j * step) % e
                ext = dict(t)
                gi = ident
                for i in range(1, k):
                    gi = ray.mul_table[gi][g]
                    for s, ts in t.items():
                        ext[ray.mul_table[s][gi]] = (ts + i * tg) % e
                new_chars.append(ext)
        chars = new_chars
        covered = set(chars[0])
    out = []
    for t in chars:
        out.append(Character(ray, e, tuple(t[c] for c in range(n))))
    return out


def list_even_characters(R: RayClassData, max_order: int) -> list:
    """Even characters of true order <= max_order (the trivial one included)."""
    out = [ch for ch in all_characters(R) if ch.is_even() and ch.true_order() <= max_order]
    out.sort(key=lambda ch: (ch.true_order(), ch.exponents))
    return out
