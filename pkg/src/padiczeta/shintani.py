r"""Cone decompositions and exact twisted partial zeta values.

The fundamental domain of (R_+^*)^n modulo the totally positive units
congruent to 1 mod f is tiled by semi-open simplicial cones; lattice
points of a ray class inside the cone boxes ("residues") drive every
zeta and Iwasawa-series formula downstream.

Zeta values at 1-m come from the diagonal coefficient of the product
kernel

    prod_k exp(-x_k L_k(y)) / (1 - e(Tr(delta nu v_k)) exp(-L_k(y)))

where L_k(y) = sum_i y_i sigma_i(v_k).  The diagonal coefficient of each
(j, x, delta) term is already invariant under the embedding swap, so the
whole computation stays inside Q(zeta_c) with an auxiliary exact
quadratic pair (s + t sqrt(disc)) representation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import (
    CycloElem,
    TruncatedSeries,
    extract_rational,
    invert,
    root_of_unity,
)
from .numberfield import (
    FieldData,
    FieldElem,
    IdealHNF,
    NumberFieldError,
    RayClassData,
    _xgcd,
    eplus_f_generator,
    find_generator,
    prime_ideals_above,
    sqrt_lower,
    sqrt_upper,
    totally_positive_unit,
)


class ShintaniError(Exception):
    pass


class UnsupportedDegree(ShintaniError):
    pass


class SearchExhausted(ShintaniError):
    pass


class NoBijection(ShintaniError):
    pass


class SingularSystem(ShintaniError):
    pass


class CoverTestFailed(ShintaniError):
    pass


class TraceNormalizationFailed(ShintaniError):
    pass


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class Cone:
    """Semi-open simplicial cone with totally positive basis vectors.

    kappa_k = +1 closes the cone at coordinate k (t_k >= 0, residue
    x_k in [0,1)); kappa_k = -1 opens it (t_k > 0, residue x_k in (0,1]).
    """

    basis: tuple
    kappa: tuple

    def __post_init__(self):
        for v in self.basis:
            if not v.is_totally_positive():
                raise ValueError("cone basis vectors must be totally positive")

    def residue_box(self, k: int) -> tuple:
        """(low_closed, high_closed) flags for residue coordinate k."""
        return (True, False) if self.kappa[k] == 1 else (False, True)

    def scaled(self, factor) -> "Cone":
        return Cone(tuple(v * factor for v in self.basis), self.kappa)


@dataclass(frozen=True)
class ConeDecomposition:
    field: FieldData
    modulus: IdealHNF
    cones: tuple
    unit: FieldElem  # generator of E_+(modulus)
    unit_exp: int  # unit = eps_+^unit_exp


def _colmez_kappa(fld: FieldData, v1: FieldElem, v2: FieldElem) -> tuple:
    """Per-coordinate open/closed flags by the e_n side rule (n = 2).

    kappa_k = +1 when v_k lies on the same side of the line spanned by the
    other basis vector as e_2; sides are exact sign computations.
    """

    def side(spanning: FieldElem, w_pair) -> int:
        # sign of det [sigma(spanning); w] with w a rational pair
        # det = sigma1(s)*w2 - sigma2(s)*w1
        x = spanning
        # represent sigma_i(x) = (r +- b sqrt(disc))/2
        r = 2 * x.a + x.b * fld.omega_trace
        b = x.b
        w1, w2 = w_pair
        # det = ((r + b s)/2) w2 - ((r - b s)/2) w1, s = sqrt(disc)
        # = (r(w2-w1) + b s (w2+w1)) / 2 : sign of  A + B s
        A = r * (w2 - w1)
        B = b * (w2 + w1)
        return _sign_a_plus_b_sqrt(A, B, fld.disc)

    def side_elem(spanning: FieldElem, w: FieldElem) -> int:
        # sign of sigma1(spanning) sigma2(w) - sigma2(spanning) sigma1(w)
        # = sign of the sqrt(disc) part of conj(spanning) * w, times sign(disc>0)
        prod = spanning.conj() * w
        # sigma1(prod) - sigma2(prod) = b(prod) * sqrt(disc)
        b = prod.b
        return 0 if b == 0 else (1 if b > 0 else -1)

    e2 = (Fraction(0), Fraction(1))
    kappa = []
    for k, (vk, other) in enumerate(((v1, v2), (v2, v1))):
        s_e2 = side(other, e2)
        s_vk = side_elem(other, vk)
        kappa.append(1 if s_e2 == s_vk else -1)
    return tuple(kappa)


def _sign_a_plus_b_sqrt(A: Fraction, B: Fraction, disc: int) -> int:
    if B == 0:
        return 0 if A == 0 else (1 if A > 0 else -1)
    if A == 0:
        return 1 if B > 0 else -1
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    if A * A > B * B * disc:
        return 1 if A > 0 else -1
    return 1 if B > 0 else -1


def _scale_into(v: FieldElem, target: IdealHNF, p: int | None, rho: int | None) -> FieldElem:
    """Smallest positive integer multiple of v inside target, with the
    optional exact trace normalization |Tr(lambda v)|_p = p^-rho."""
    fld = v.field
    # {lambda in Z : lambda v in target} = (target * (v)^-1) intersect Z
    quot = target * IdealHNF.principal(fld, v).inverse()
    lam0 = quot.smallest_rational()
    if lam0.denominator != 1:
        num = lam0.numerator
        den = lam0.denominator
        lam0 = Fraction(num * den // math.gcd(num, den), 1)  # smallest integer multiple
        lam0 = Fraction(math.lcm(num, den) // num * num, den)  # unreachable guard
    lam = int(lam0) if lam0.denominator == 1 else int(lam0 * lam0.denominator)
    if rho is not None:
        tr = (v * lam).trace()
        vp = _vp_fraction(tr, p)
        j = rho - vp
        if j < 0:
            raise TraceNormalizationFailed(
                f"v_p(Tr) = {vp} already exceeds requested rho = {rho}"
            )
        lam *= p**j
    return v * lam


def _vp_fraction(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def cone_decomposition(
    F: FieldData,
    f: IdealHNF,
    scale_into: IdealHNF,
    p: int | None = None,
    rho: int | None = None,
) -> ConeDecomposition:
    """Shintani-Colmez decomposition of (R_+^*)^n / E_+(f), scaled.

    For n = 2 the translates eps_+^i C_0 (i < t) of the base Colmez cone
    C_0 = <1, eps_+> tile a fundamental domain of E_+(f) = <eps_+^t>;
    every basis vector is then scaled by a positive integer into
    scale_into (and onto the exact trace valuation rho when requested).
    """
    if F.n == 1:
        unit = F.one()
        v = _scale_into(F.one(), scale_into, p, rho)
        return ConeDecomposition(F, f, (Cone((v,), (-1,)),), unit, 1)
    if F.n != 2:
        raise UnsupportedDegree("only degrees 1 and 2 are instantiated")
    epsp = totally_positive_unit(F)
    eps_f, t = eplus_f_generator(F, f)
    kappa = _colmez_kappa(F, F.one(), epsp)
    cones = []
    for i in range(t):
        w1 = epsp**i
        w2 = epsp ** (i + 1)
        v1 = _scale_into(w1, scale_into, p, rho)
        v2 = _scale_into(w2, scale_into, p, rho)
        cones.append(Cone((v1, v2), kappa))
    return ConeDecomposition(F, f, tuple(cones), eps_f, t)


# ---------------------------------------------------------------------------
# cover certification


def verify_cover(dec: ConeDecomposition, samples: int = 200, seed: int = 0) -> bool:
    """Disjointness certificate: deterministic grid plus random totally
    positive rational vectors; each must lie in exactly one unit^e * C_j."""
    fld = dec.field
    rng = random.Random(seed)
    points = []
    if fld.n == 1:
        points = [(Fraction(k, 3),) for k in range(1, 10)]
        points += [(Fraction(rng.randint(1, 10**6), rng.randint(1, 10**4)),) for _ in range(samples)]
    else:
        grid = [Fraction(a, b) for a in (1, 2, 3, 5) for b in (1, 2, 3)]
        points = [(x, y) for x in grid for y in grid][:40]
        for _ in range(samples):
            points.append(
                (
                    Fraction(rng.randint(1, 10**5), rng.randint(1, 10**3)),
                    Fraction(rng.randint(1, 10**5), rng.randint(1, 10**3)),
                )
            )
    for w in points:
        hits = _cover_hits(dec, w)
        if len(hits) != 1:
            raise CoverTestFailed(f"point {w} hit {hits}")
    return True


def _cover_hits(dec: ConeDecomposition, w) -> list:
    fld = dec.field
    if fld.n == 1:
        v = dec.cones[0].basis[0].a
        return [(0, 0)] if w[0] > 0 else []
    # e-range from float logs; wrong range shows up as a non-unique count
    ew = dec.unit.embedding_bounds(0)[1]
    ratio = float(w[0] / w[1])
    import math as _m

    lu = _m.log(float(ew))
    B = int(abs(_m.log(max(ratio, 1 / ratio))) / max(lu, 1e-9)) + 3
    hits = []
    for e in range(-B, B + 1):
        u = dec.unit**e
        # coordinates of (w / sigma(u)) in each cone basis, exact in Q(sqrt disc)
        for j, cone in enumerate(dec.cones):
            if _cone_contains(fld, cone, w, u):
                hits.append((j, e))
    return hits


def _cone_contains(fld, cone, w, u) -> bool:
    """Exact test: w in u * cone, i.e. solve sum x_k sigma(u v_k) = w."""
    b1 = u * cone.basis[0]
    b2 = u * cone.basis[1]
    # sigma_i(x) = (r_x + s_x sqrt(disc))/2 with r, s rational
    def emb(x):
        return (2 * x.a + x.b * fld.omega_trace, x.b)

    r1, s1 = emb(b1)
    r2, s2 = emb(b2)
    # linear system over Q(sqrt disc):
    #   x1 * (r1 + s1 S)/2 + x2 * (r2 + s2 S)/2 = w1   (S = sqrt disc)
    #   x1 * (r1 - s1 S)/2 + x2 * (r2 - s2 S)/2 = w2
    # adding/subtracting: x1 r1 + x2 r2 = w1 + w2 ; (x1 s1 + x2 s2) S = w1 - w2
    # over Q: treat unknowns x1, x2 in Q (they are rational iff w rational and
    # the basis is Q(sqrt disc)-rational: solve the 2x2 rational system)
    A11, A12 = Fraction(r1), Fraction(r2)
    A21, A22 = Fraction(s1), Fraction(s2)
    rhs1 = Fraction(w[0] + w[1])
    rhs2 = Fraction(w[0] - w[1])  # equals (x1 s1 + x2 s2) * sqrt(disc)
    det = A11 * A22 - A12 * A21
    if det == 0:
        return False
    # x = A^{-1} rhs with the sqrt(disc) folded into rhs2' = rhs2 / sqrt(disc):
    # irrational unless rhs2 = 0; handle exactly by scaling: let y = rhs2 /
    # sqrt(disc); the system x1 s1 + x2 s2 = y, x1 r1 + x2 r2 = rhs1 gives
    # rational x iff y rational; y = rhs2/sqrt(disc) is rational only if
    # rhs2 = 0. For general w the solution lives in Q(sqrt disc):
    # x = p + q sqrt(disc). Solve componentwise.
    # Write x_k = p_k + q_k S. Then:
    #   p1 r1 + p2 r2 + (q1 r1 + q2 r2) S = rhs1        -> two rational eqs
    #   (p1 s1 + p2 s2) S + (q1 s1 + q2 s2) disc = rhs2 -> two rational eqs
    D = Fraction(fld.disc)
    # eq A: p1 r1 + p2 r2 = rhs1 ; q1 r1 + q2 r2 = 0
    # eq B: q1 s1 + q2 s2 = rhs2 / disc * ... careful: rhs2 = (x1 s1 + x2 s2) S
    #   => (p1 s1 + p2 s2) S + (q1 s1 + q2 s2) D = rhs2
    #   rational part: (q1 s1 + q2 s2) D = rhs2 ; sqrt part: p1 s1 + p2 s2 = 0
    # wait: rhs2 is rational, so sqrt part of LHS must vanish:
    #   p1 s1 + p2 s2 = 0 and (q1 s1 + q2 s2) D = rhs2
    # plus from eq A: p1 r1 + p2 r2 = rhs1 and q1 r1 + q2 r2 = 0
    M1 = ((A11, A12), (Fraction(s1), Fraction(s2)))
    p_vec = _solve2(M1, (rhs1, Fraction(0)))
    q_vec = _solve2(M1, (Fraction(0), rhs2 / D))
    if p_vec is None or q_vec is None:
        return False
    for k in range(2):
        sign = _sign_a_plus_b_sqrt(p_vec[k], q_vec[k], fld.disc)
        if cone.kappa[k] == 1:
            if sign < 0:
                return False
        else:
            if sign <= 0:
                return False
    return True


def _solve2(M, rhs):
    (a, b), (c, d) = M
    det = a * d - b * c
    if det == 0:
        return None
    x = (d * rhs[0] - b * rhs[1]) / det
    y = (-c * rhs[0] + a * rhs[1]) / det
    return (x, y)


# ---------------------------------------------------------------------------
# residue enumeration


@dataclass
class ResidueSet:
    """All x = sum x_k v_(j,k) with x in a, x = 1 mod* f, x_k in the kappa box."""

    cone_index: int
    ideal: IdealHNF
    coords: list  # list of coordinate tuples (Fractions)
    elements: list  # matching field elements


def ideal_bezout_one(a: IdealHNF, f: IdealHNF) -> tuple:
    """(alpha, phi) with alpha + phi = 1, alpha in a, phi in f (coprime ideals)."""
    fld = a.field
    gens = a.basis_elements() + f.basis_elements()
    n_a = len(a.basis_elements())
    den = 1
    for g in gens:
        den = math.lcm(den, math.lcm(g.a.denominator, g.b.denominator))
    rows = [[int(g.a * den), int(g.b * den)] for g in gens]
    m = len(rows)
    # HNF with transform: U * rows = H
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def rowop(i, j, q):  # row_i -= q * row_j
        rows[i][0] -= q * rows[j][0]
        rows[i][1] -= q * rows[j][1]
        for k in range(m):
            U[i][k] -= q * U[j][k]

    # clear column 1 (omega coефficient) to a single pivot by gcd steps
    col = 1 if fld.n == 2 else 0
    while True:
        nz = [i for i in range(m) if rows[i][col]]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda i: abs(rows[i][col]))
        piv = nz[0]
        for i in nz[1:]:
            q = rows[i][col] // rows[piv][col]
            rowop(i, piv, q)
    if fld.n == 2:
        pivots = [i for i in range(m) if rows[i][1]]
        zero_rows = [i for i in range(m) if not rows[i][1]]
        while True:
            nz = [i for i in zero_rows if rows[i][0]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(rows[i][0]))
            piv = nz[0]
            for i in nz[1:]:
                q = rows[i][0] // rows[piv][0]
                rowop(i, piv, q)
        lead = [i for i in zero_rows if rows[i][0]]
    else:
        lead = [i for i in range(m) if rows[i][0]]
    if not lead:
        raise NumberFieldError("ideals not coprime")
    i0 = lead[0]
    g = rows[i0][0]
    if den % g != 0:
        raise NumberFieldError("ideals not coprime (gcd does not divide 1)")
    scale = den // g
    combo = [scale * U[i0][k] for k in range(m)]
    alpha = fld.zero()
    for k in range(n_a):
        alpha = alpha + gens[k] * combo[k]
    phi = fld.zero()
    for k in range(n_a, m):
        phi = phi + gens[k] * combo[k]
    # alpha + phi should be the element den*scale... renormalize to 1
    total = alpha + phi
    if not (total.b == 0 and total.a != 0):
        raise NumberFieldError("bezout combination failed")
    alpha = alpha * (1 / total.a)
    phi = phi * (1 / total.a)
    assert alpha + phi == fld.one()
    assert a.contains(alpha) and f.contains(phi)
    return alpha, phi


def enumerate_residues(dec: ConeDecomposition, a: IdealHNF) -> list:
    """Complete residue sets per cone; exact lattice-point enumeration."""
    fld = dec.field
    f = dec.modulus
    af = a * f
    if f == IdealHNF.unit_ideal(fld):
        x0 = fld.one()
    else:
        alpha, _ = ideal_bezout_one(a, f)
        x0 = alpha
    out = []
    for j, cone in enumerate(dec.cones):
        coords, elems = _residues_for_cone(fld, cone, af, x0)
        out.append(ResidueSet(j, a, coords, elems))
    return out


def _residues_for_cone(fld, cone, lattice: IdealHNF, x0: FieldElem):
    basis = cone.basis
    if fld.n == 1:
        v = basis[0].a
        m = lattice.smallest_rational()
        # x = x0 + k m with x/v in the box (0,1]
        # k ranges so that 0 < (x0 + k m) <= v
        kmin = math.ceil((Fraction(0) - x0.a) / m + Fraction(1, 10**9))
        coords, elems = [], []
        k = math.ceil((-x0.a) / m)
        while x0.a + k * m <= 0:
            k += 1
        while x0.a + k * m <= v:
            x = x0.a + k * m
            coords.append((Fraction(x, v),))
            elems.append(fld.elem(x))
            k += 1
        return coords, elems
    m1, m2 = lattice.basis_elements()
    # coordinates: solve V * x = target over {1, omega} coordinates
    V = ((basis[0].a, basis[1].a), (basis[0].b, basis[1].b))
    c0 = _solve2(V, (x0.a, x0.b))
    A1 = _solve2(V, (m1.a, m1.b))
    A2 = _solve2(V, (m2.a, m2.b))
    if c0 is None or A1 is None or A2 is None:
        raise ShintaniError("degenerate cone basis")
    # point coords = c0 + s A1 + t A2, integers s, t; box per kappa
    # enumerate s-range from the inverse map applied to box corners
    Ainv_det = A1[0] * A2[1] - A2[0] * A1[1]
    if Ainv_det == 0:
        raise ShintaniError("degenerate residue lattice")
    corners = []
    for bx in (0, 1):
        for by in (0, 1):
            rx = Fraction(bx) - c0[0]
            ry = Fraction(by) - c0[1]
            s = (A2[1] * rx - A2[0] * ry) / Ainv_det
            t = (-A1[1] * rx + A1[0] * ry) / Ainv_det
            corners.append((s, t))
    smin = math.floor(min(c[0] for c in corners)) - 1
    smax = math.ceil(max(c[0] for c in corners)) + 1
    coords, elems = [], []
    for s in range(smin, smax + 1):
        # t-interval from the two coordinate constraints
        lo, hi = None, None
        feasible = True
        base0 = c0[0] + s * A1[0]
        base1 = c0[1] + s * A1[1]
        for k, (bk, ak) in enumerate(((base0, A2[0]), (base1, A2[1]))):
            lo_closed, hi_closed = cone.residue_box(k)
            # constraint: low <=(<) bk + ak t <=(<) high with [0,1) or (0,1]
            lo_b, hi_b = Fraction(0), Fraction(1)
            if ak == 0:
                ok_low = bk >= lo_b if lo_closed else bk > lo_b
                ok_high = bk < hi_b if not hi_closed else bk <= hi_b
                if not (ok_low and ok_high):
                    feasible = False
                    break
                continue
            t_at_lo = (lo_b - bk) / ak
            t_at_hi = (hi_b - bk) / ak
            if ak > 0:
                tlo, thi = t_at_lo, t_at_hi
                lo_cl, hi_cl = lo_closed, hi_closed
            else:
                tlo, thi = t_at_hi, t_at_lo
                lo_cl, hi_cl = hi_closed, lo_closed
            lo = (tlo, lo_cl) if lo is None or (tlo, lo_cl) > lo else lo
            hi = (thi, hi_cl) if hi is None or (thi, not hi_cl) < (hi[0], not hi[1]) else hi
            if lo is None:
                lo = (tlo, lo_cl)
            if hi is None:
                hi = (thi, hi_cl)
        if not feasible:
            continue
        if lo is None or hi is None:
            continue
        tstart = math.ceil(lo[0]) if (lo[1] and lo[0] == math.ceil(lo[0])) or lo[0] != math.ceil(lo[0]) else int(lo[0]) + 1
        # integer t respecting open/closed endpoints
        tstart = math.ceil(lo[0])
        if not lo[1] and Fraction(tstart) == lo[0]:
            tstart += 1
        tend = math.floor(hi[0])
        if not hi[1] and Fraction(tend) == hi[0]:
            tend -= 1
        for t in range(tstart, tend + 1):
            xc = (base0 + t * A2[0], base1 + t * A2[1])
            ok = True
            for k in range(2):
                lo_closed, hi_closed = cone.residue_box(k)
                val = xc[k]
                if val < 0 or (val == 0 and not lo_closed):
                    ok = False
                    break
                if val > 1 or (val == 1 and not hi_closed):
                    ok = False
                    break
            if not ok:
                continue
            x = x0 + m1 * s + m2 * t
            if not x:
                continue
            coords.append(xc)
            elems.append(x)
    order = sorted(range(len(coords)), key=lambda i: coords[i])
    return [coords[i] for i in order], [elems[i] for i in order]
