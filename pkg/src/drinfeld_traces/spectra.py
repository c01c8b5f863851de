"""Spectral data of Hecke operators recovered from their trace sequences.

Given s_i = Tr(T^i | S_{k,l}), the characteristic polynomial follows from
Newton's identities while dim < p.  Beyond that, only eigenvalues whose
multiplicity is nonzero mod p are visible: they are the roots of the minimal
linear recurrence of the sequence, and the Hankel matrix (s_{i+j}) is
singular exactly when some eigenvalue is invisible or repeated.
"""

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .combinat import char2_index_set, dim_cusp, normalize_type, type_ok
from .errors import (CapExceeded, DimensionAtLeastP, InsufficientTerms,
                     OddCharacteristic, ZeroPolynomial)
from .gf import MAX_TABLE_SIZE
from .isogeny import _check_prime, iso_table
from .polyring import NEG_INF, PolyA, PolyAX, format_poly
from .polyring import gcd as poly_gcd
from .traces import DEFAULT_CAP, TraceQuery, trace_auto


# --- the fraction field K = F_q(T) -------------------------------------------

class RationalFn:
    """num/den in lowest terms with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RationalFn):
            num, den0 = num.num, num.den
            den = den0 if den is None else den0 * den
        F = num.F
        if den is None:
            den = PolyA.one(F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = PolyA.one(F)
        elif not den.is_const():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
        if not den.is_monic():
            inv = F.inv(den.lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def F(self):
        return self.num.F

    @classmethod
    def of(cls, x, F=None):
        if isinstance(x, RationalFn):
            return x
        if isinstance(x, PolyA):
            return cls(x)
        return cls(PolyA.const(F, F.from_int(x)))

    def is_zero(self):
        return self.num.is_zero()

    def is_integral(self):
        return self.den.is_one()

    def to_poly(self):
        if not self.is_integral():
            raise ArithmeticError(f"{self} does not lie in F_q[T]")
        return self.num

    def __add__(self, other):
        other = RationalFn.of(other, self.F)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFn.of(other, self.F))

    def __rsub__(self, other):
        return RationalFn.of(other, self.F) - self

    def __mul__(self, other):
        other = RationalFn.of(other, self.F)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFn.of(other, self.F)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in F_q(T)")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFn.of(other, self.F) / self

    def __eq__(self, other):
        if isinstance(other, PolyA):
            other = RationalFn(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def valuation(self, place="inf"):
        """v_inf = deg den - deg num, or the order at a prime polynomial."""
        if self.is_zero():
            raise ZeroPolynomial("valuation of zero")
        if place == "inf":
            return self.den.deg - self.num.deg
        return self.num.valuation(place) - self.den.valuation(place)

    def __str__(self):
        if self.is_integral():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    __repr__ = __str__


class PolyKX:
    """Polynomial in X over K, ascending coefficients."""

    def __init__(self, F, coeffs):
        coeffs = [RationalFn.of(c, F) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.F = F
        self.c = coeffs

    @property
    def deg(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def is_integral(self):
        return all(c.is_integral() for c in self.c)

    def to_polyax(self):
        return PolyAX(self.F, [c.to_poly() for c in self.c])

    def __eq__(self, other):
        if isinstance(other, PolyAX):
            other = PolyKX(other.F, other.c)
        return isinstance(other, PolyKX) and self.c == other.c

    def __str__(self):
        if self.is_integral():
            return str(self.to_polyax())
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            if self.c[i].is_zero():
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            terms.append(f"({self.c[i]})*{mono}" if mono else f"({self.c[i]})")
        return "+".join(terms) or "0"


def _as_k(x, F):
    return RationalFn.of(x, F)


def _field_of(seq, F):
    if F is not None:
        return F
    for x in seq:
        if isinstance(x, (PolyA, RationalFn)):
            return x.F
    raise ValueError("cannot infer the base field from an empty sequence; pass F")


# --- Newton identities ----------------------------------------------------------

def charpoly_from_traces(traces, d, F=None):
    """Monic degree-d polynomial with power sums traces[0..d-1] (traces[i] = p_{i+1})."""
    F = _field_of(traces, F)
    p = F.p
    if d >= p:
        raise DimensionAtLeastP(
            f"dimension {d} is not below the characteristic {p}; Newton's identities "
            f"cannot divide by {p}; use berlekamp_massey for the part of the spectrum "
            "with multiplicity prime to p")
    if len(traces) < d:
        raise InsufficientTerms(f"need {d} power sums, got {len(traces)}")
    ps = [_as_k(t, F) for t in traces[:d]]
    e = [RationalFn(PolyA.one(F))]
    for i in range(1, d + 1):
        acc = RationalFn(PolyA.zero(F))
        for j in range(1, i + 1):
            term = e[i - j] * ps[j - 1]
            acc = acc + term if j % 2 else acc - term
        e.append(acc * PolyA.const(F, F.from_int(pow(i, -1, p))))
    coeffs = [e[d - i] if (d - i) % 2 == 0 else -e[d - i] for i in range(d + 1)]
    try:
        return PolyAX(F, [c.to_poly() for c in coeffs])
    except ArithmeticError as exc:
        raise ArithmeticError(f"characteristic polynomial is not integral: {exc}") from None


def power_sums(f, count):
    """p_1..p_count of the roots of the monic PolyAX f (Newton's identities, no division)."""
    F = f.F
    d = f.deg
    a = f.c
    out = []
    for i in range(1, count + 1):
        acc = a[d - i].scale(F.from_int(i)) if i <= d else PolyA.zero(F)
        for j in range(1, min(i - 1, d) + 1):
            acc = acc + a[d - j] * out[i - j - 1]
        out.append(-acc)
    return out


# --- Berlekamp-Massey -----------------------------------------------------------

def _bm_core(seq, zero, one, is_zero, inv):
    """Connection polynomial C (C[0] = 1) and its length over an abstract field."""
    C, B = [one], [one]
    L, m, b = 0, 1, one
    for n, s in enumerate(seq):
        d = s
        for i in range(1, L + 1):
            if i < len(C):
                d = d + C[i] * seq[n - i]
        if is_zero(d):
            m += 1
            continue
        coef = d * inv(b)
        newC = C + [zero] * max(0, len(B) + m - len(C))
        for i, x in enumerate(B):
            newC[i + m] = newC[i + m] - coef * x
        if 2 * L <= n:
            B, L, b, m = C, n + 1 - L, d, 1
        else:
            m += 1
        C = newC
    C = C + [zero] * max(0, L + 1 - len(C))
    return C[:L + 1], L


def berlekamp_massey(seq, F=None):
    """Minimal monic recurrence polynomial over K of the sequence.

    The result X^L + c_{L-1} X^{L-1} + ... + c_0 satisfies
    sum_i c_i s_{n+i} = 0.  For a power-sum sequence its roots are the
    eigenvalues whose multiplicity is nonzero mod p.
    """
    F = _field_of(seq, F)
    ks = [_as_k(s, F) for s in seq]
    zero, one = RationalFn(PolyA.zero(F)), RationalFn(PolyA.one(F))
    C, L = _bm_core(ks, zero, one, lambda x: x.is_zero(), lambda x: one / x)
    if 2 * L > len(ks):
        raise InsufficientTerms(
            f"recurrence of length {L} is not determined by {len(ks)} terms; "
            f"supply at least {2 * L}")
    return PolyKX(F, list(reversed(C)))


# --- evaluation probes in a table-backed extension ---------------------------

class _Probe:
    """A point alpha of F_{q^m} with the maps needed to work modulo its minimal polynomial."""

    def __init__(self, F, L, emb, m, alpha):
        q = F.q
        self.L, self.alpha = L, alpha
        order = L.q - 1
        self.log_alpha = int(L._log[alpha])
        conj = [alpha]
        for _ in range(m - 1):
            conj.append(L.pow(conj[-1], q))
        self.orbit = min(conj)
        self.full_degree = len(set(conj)) == m
        back = {int(e): c for c, e in enumerate(emb)}
        mu = [1]
        for r in conj:
            nr = L.neg(r)
            nxt = [0] * (len(mu) + 1)
            for i, c in enumerate(mu):
                nxt[i + 1] = L.add(nxt[i + 1], c)
                nxt[i] = L.add(nxt[i], L.mul(c, nr))
            mu = nxt
        self.mu = PolyA(F, [back[c] for c in mu])
        # residue of degree < m for every value in L
        idx = np.arange(q ** m, dtype=np.int64)
        vals = np.zeros(q ** m, dtype=np.int64)
        for e in range(m):
            digit = (idx // q ** e) % q
            ae = L.pow(alpha, e)
            vals = L.vadd(vals, L.vmul(emb[digit], np.full_like(digit, ae)))
        self.residue_index = np.empty(q ** m, dtype=np.int64)
        self.residue_index[vals] = idx
        self.q, self.m, self.F, self.emb, self.order = q, m, F, emb, order

    def evaluate(self, coeff_rows):
        """Values at alpha of polynomials given as a 2-D array of F-codes."""
        L, F = self.L, self.F
        width = coeff_rows.shape[1]
        powers = L._exp[(np.arange(width, dtype=np.int64) * self.log_alpha) % self.order]
        acc = np.zeros((coeff_rows.shape[0], L.r), dtype=np.int64)
        for c in range(1, F.q):
            mask = coeff_rows == c
            if not mask.any():
                continue
            terms = L.vmul(int(self.emb[c]), powers)
            acc += mask.astype(np.int64) @ L.digits[terms]
        return (acc % L.p) @ L._pow_p

    def residue(self, value):
        idx = int(self.residue_index[value])
        q = self.q
        return PolyA(self.F, [(idx // q ** e) % q for e in range(self.m)])


def _probe_field(F):
    m = 1
    while F.q ** (m + 1) <= MAX_TABLE_SIZE:
        m += 1
    if m < 2:
        return None
    L, emb = F.extension(m)
    return L, emb, m


def _coeff_rows(seq, F):
    width = max(1, max(len(s.c) for s in seq))
    rows = np.zeros((len(seq), width), dtype=np.int64)
    for i, s in enumerate(seq):
        rows[i, :len(s.c)] = s.c
    return rows


def _bm_codes(vals, L):
    add, mul, inv = L.add, L.mul, L.inv

    class _E:
        __slots__ = ("v",)

        def __init__(self, v):
            self.v = v

        def __add__(self, o):
            return _E(add(self.v, o.v))

        def __sub__(self, o):
            return _E(L.sub(self.v, o.v))

        def __mul__(self, o):
            return _E(mul(self.v, o.v))

    C, length = _bm_core([_E(int(v)) for v in vals], _E(0), _E(1),
                         lambda x: x.v == 0, lambda x: _E(inv(x.v)))
    return [c.v for c in C], length


def _det_codes(rows, L):
    """Determinant of a square matrix over the table field L (Gaussian elimination)."""
    M = [list(map(int, r)) for r in rows]
    n = len(M)
    det = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = L.neg(det)
        pv = M[col][col]
        det = L.mul(det, pv)
        ip = L.inv(pv)
        for i in range(col + 1, n):
            if M[i][col]:
                f = L.mul(M[i][col], ip)
                Mi, Mc = M[i], M[col]
                for j in range(col, n):
                    if Mc[j]:
                        Mi[j] = L.sub(Mi[j], L.mul(f, Mc[j]))
    return det


def _recurrence_holds(coeffs, seq, rows_needed, F):
    """sum_i coeffs[i] s_{j+i} == 0 exactly in A for j < rows_needed."""
    r = len(coeffs) - 1
    if F.is_prime_field:
        p = F.p
        S = _coeff_rows(seq[:rows_needed + r], F).astype(np.float64)
        Cm = _coeff_rows(coeffs, F).astype(np.float64)
        n = 1
        while n < S.shape[1] + Cm.shape[1]:
            n *= 2
        Sh = np.fft.rfft(S, n)
        Ch = np.fft.rfft(Cm, n)
        acc = np.zeros((rows_needed, Sh.shape[1]), dtype=np.complex128)
        for i in range(r + 1):
            acc += Ch[i][None, :] * Sh[i:i + rows_needed]
        out = np.fft.irfft(acc, n)
        rounded = np.rint(out)
        if np.abs(out - rounded).max() < 0.25:
            return not (rounded.astype(np.int64) % p).any()
    for j in range(rows_needed):
        acc = PolyA.zero(F)
        for i, c in enumerate(coeffs):
            if not c.is_zero():
                acc = acc + c * seq[j + i]
        if not acc.is_zero():
            return False
    return True


def _modular_recurrence(seq, F, seed=0):
    """Minimal recurrence of s_0..s_N with coefficients in A, certified exactly.

    Returns (recurrence as PolyAX or None, length seen at the probes,
    hankel_nonsingular_certified).  Coefficients are rebuilt by CRT over the
    minimal polynomials of random probe points, then checked on the whole
    sequence in A.
    """
    setup = _probe_field(F)
    if setup is None:
        return None, None, False
    L, emb, m = setup
    d = (len(seq) + 1) // 2
    rows = _coeff_rows(seq, F)
    rng = random.Random(seed)
    seen = set()
    best = -1
    C = modulus = None
    max_probes = (L.q - 1) // m
    probes = tries = 0
    checked = False
    idle = 0
    while probes < max_probes and tries < 8 * max_probes:
        tries += 1
        probe = _Probe(F, L, emb, m, rng.randrange(2, L.q))
        if not probe.full_degree or probe.orbit in seen:
            continue
        seen.add(probe.orbit)
        probes += 1
        vals = probe.evaluate(rows)
        if probes <= 3 and 2 * d - 1 == len(seq):
            hank = [[vals[i + j] for j in range(d)] for i in range(d)]
            if _det_codes(hank, L):
                return None, d, True
        conn, length = _bm_codes(vals, L)
        if length < best:
            continue
        rec = list(reversed(conn))
        if length > best:
            best = length
            C, modulus = [probe.residue(c) for c in rec], probe.mu
            checked = False
            continue
        # lift: C += modulus * ((rec - C(alpha)) / modulus(alpha)) as residues mod mu
        at = probe.evaluate(_coeff_rows(C + [modulus], F))
        scale = L.inv(int(at[-1]))
        changed = False
        for i, v in enumerate(rec):
            diff = L.sub(v, int(at[i]))
            if diff:
                C[i] = C[i] + modulus * probe.residue(L.mul(diff, scale))
                changed = True
        modulus = modulus * probe.mu
        if changed:
            checked = False
            idle = 0
            continue
        if checked:
            idle += 1
            if idle > 3:
                break
            continue
        checked = True
        rows_needed = len(seq) - best
        if rows_needed <= 0 or _recurrence_holds(C, seq, rows_needed, F):
            return PolyAX(F, C), best, False
    return None, best, False


# --- Hankel determinants --------------------------------------------------------

def bareiss_det(M):
    """Exact determinant of a square matrix over A (fraction-free elimination)."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    F = M[0][0].F
    A = [list(r) for r in M]
    sign = 1
    prev = PolyA.one(F)
    for k in range(n - 1):
        if A[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if piv is None:
                return PolyA.zero(F)
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return -det if sign < 0 else det


def hankel_matrix(traces, d, F=None, dim=None):
    """(s_{i+j}) with s_0 = dim mod p and s_i = traces[i-1]."""
    F = _field_of(traces, F)
    dim = d if dim is None else dim
    s = [PolyA.const(F, F.from_int(dim))] + list(traces[:2 * d - 2])
    return [[s[i + j] for j in range(d)] for i in range(d)]


# below this many total coefficients Bareiss is cheaper than probing
_DIRECT_HANKEL_SIZE = 400


def repeated_eig_detect(traces, d, F=None, dim=None):
    """(det of the Hankel matrix, repeated) from traces Tr(T^1..T^{2d-2}).

    ``repeated`` is True when det = 0, i.e. some eigenvalue is repeated or
    has multiplicity divisible by p.
    """
    F = _field_of(traces, F)
    if d <= 0:
        return PolyA.one(F), False
    if len(traces) < 2 * d - 2:
        raise InsufficientTerms(f"need {2 * d - 2} traces for a {d}x{d} Hankel matrix")
    M = hankel_matrix(traces, d, F, dim)
    seq = [M[0][0]] + list(traces[:2 * d - 2])
    size = d * max(len(s.c) for s in seq)
    if d > 2 and size > _DIRECT_HANKEL_SIZE:
        rec, _, nonsingular = _modular_recurrence(seq, F)
        if rec is not None and rec.deg < d:
            return PolyA.zero(F), True
    det = bareiss_det(M)
    return det, det.is_zero()


def discriminant(f):
    """prod_{i<j} (a_i - a_j)^2 over the roots of a monic PolyAX, via the Sylvester matrix."""
    d = f.deg
    F = f.F
    if d < 1:
        raise ValueError("discriminant of a constant")
    if d == 1:
        return PolyA.one(F)
    df = PolyAX(F, [f.c[i].scale(F.from_int(i)) for i in range(1, d + 1)])
    a = list(reversed(f.c))
    b = list(reversed(df.c)) if df.c else []
    e = len(b) - 1
    if e < 0:
        return PolyA.zero(F)
    n = d + e
    zero = PolyA.zero(F)
    rows = []
    for i in range(e):
        rows.append([zero] * i + a + [zero] * (n - d - 1 - i))
    for i in range(d):
        rows.append([zero] * i + b + [zero] * (n - e - 1 - i))
    # f is monic, so Res(f, f') = prod f'(a_i) whatever the degree of f'
    res = bareiss_det(rows)
    return res if (d * (d - 1) // 2) % 2 == 0 else -res


# --- characteristic 2 ----------------------------------------------------------

def char2_odd_mult_eigs(k, l, prime, n=1):
    """{prime^(n j) : j in P(k, l, q)}: the eigenvalues of odd multiplicity for even q."""
    F = prime.F
    q = F.q
    if q % 2:
        raise OddCharacteristic("odd-multiplicity eigenvalue lists are defined for even q")
    if not type_ok(k, l, q) or dim_cusp(k, l, q) == 0:
        return []
    pn = prime ** n
    return [pn ** j for j in char2_index_set(k, l, q)]


# --- Newton polygons ------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower hull of the points (i, v(c_{d-i})); segment slopes are root valuations."""

    valuation: str
    vertices: tuple
    segments: tuple

    def slopes(self):
        return [(s, ln) for s, ln in self.segments]

    def to_list(self):
        return [{"slope": str(s), "multiplicity": ln} for s, ln in self.segments]


def _valuation(c, place):
    if isinstance(c, PolyA):
        if c.is_zero():
            return None
        return -c.deg if place == "inf" else c.valuation(place)
    if c.is_zero():
        return None
    return c.valuation(place)


def newton_polygon(poly, valuation="inf"):
    """Newton polygon of a polynomial in X over K at v_inf or at a prime of A."""
    coeffs = list(poly.c) if hasattr(poly, "c") else list(poly)
    while coeffs and (coeffs[-1].is_zero()):
        coeffs.pop()
    if not coeffs:
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    d = len(coeffs) - 1
    pts = []
    for i in range(d + 1):
        v = _valuation(coeffs[d - i], valuation)
        if v is not None:
            pts.append((i, v))
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    if hull[-1][0] < d:
        # zero roots (X divides the polynomial): infinite valuation
        segs.append((math.inf, d - hull[-1][0]))
    tag = "inf" if valuation == "inf" else format_poly(valuation)
    return NewtonPolygon(tag, tuple(hull), tuple(segs))


# --- spectra of Hecke operators -------------------------------------------------

def power_traces(prime, k, l, count, n=1, cap=DEFAULT_CAP):
    """[Tr(T_prime^(n i) | S_{k,l}) for i = 1..count]."""
    return [trace_auto(TraceQuery(prime, n * i, k, l, cap)).value for i in range(1, count + 1)]


@dataclass
class SpectrumReport:
    prime: PolyA
    n: int
    k: int
    l: int
    d: int
    traces: list
    charpoly: PolyAX | None
    hankel_det: PolyA | None
    repeated: bool
    slopes: dict
    slope_source: str
    odd_mult_eigs: list | None = None
    recurrence: PolyAX | None = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        F = self.prime.F
        out = {
            "q": F.q,
            "modulus": F.modulus_str(),
            "prime": format_poly(self.prime),
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "dim": self.d,
            "traces": [format_poly(t) for t in self.traces],
            "charpoly": None if self.charpoly is None else str(self.charpoly),
            "hankel_det": None if self.hankel_det is None else format_poly(self.hankel_det),
            "repeated": self.repeated,
            "slopes": {v: [{"slope": _fmt_slope(s), "abs_slope": _fmt_slope(abs(s)),
                            "multiplicity": m} for s, m in segs]
                       for v, segs in self.slopes.items()},
            "slope_source": self.slope_source,
        }
        if self.odd_mult_eigs is not None:
            out["odd_mult_eigs"] = [format_poly(e) for e in self.odd_mult_eigs]
        if self.recurrence is not None:
            out["recurrence"] = str(self.recurrence)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _fmt_slope(s):
    if s == math.inf:
        return "inf"
    return str(s)


def spectrum(prime, k, l, n=1, cap=DEFAULT_CAP, fallback=False):
    """Spectral report for T_prime^n on S_{k,l}.

    Without ``fallback`` a dimension >= p raises DimensionAtLeastP; with it the
    report carries the recurrence-based partial spectrum instead of a
    characteristic polynomial.
    """
    _check_prime(prime)
    F = prime.F
    q, p = F.q, F.p
    d = dim_cusp(k, l, q)
    notes = []
    if d >= p and not fallback:
        raise DimensionAtLeastP(
            f"dim S_{{{k},{l}}} = {d} is not below p = {p}; the characteristic polynomial "
            "is not determined by traces (use the fallback for the partial spectrum)")
    # Newton needs d power sums; a recurrence of length up to d needs 2d terms
    count = max(2 * d - 2, d) if d < p else 2 * d - 1
    traces = power_traces(prime, k, l, count, n, cap)
    charpoly = recurrence = None
    if d == 0:
        report = SpectrumReport(prime, n, k, l, 0, [], PolyAX(F, [PolyA.one(F)]), PolyA.one(F),
                                False, {}, "charpoly", [] if q % 2 == 0 else None)
        return report
    det, repeated = repeated_eig_detect(traces, d, F)
    if d < p:
        charpoly = charpoly_from_traces(traces, d, F)
        target, source = charpoly, "charpoly"
    else:
        seq = [PolyA.const(F, F.from_int(d))] + traces
        recurrence, _, _ = _modular_recurrence(seq, F)
        if recurrence is None:
            recurrence = berlekamp_massey(seq, F).to_polyax()
        target, source = recurrence, "recurrence"
        notes.append("dimension >= p: slopes cover only eigenvalues with multiplicity prime to p")
    slopes = {"inf": newton_polygon(target, "inf").slopes(),
              format_poly(prime): newton_polygon(target, prime).slopes()}
    odd = char2_odd_mult_eigs(k, l, prime, n) if q % 2 == 0 else None
    return SpectrumReport(prime, n, k, l, d, traces, charpoly, det, repeated, slopes, source,
                          odd, recurrence, notes)


def no_repetition_weights(prime, k_max, l=1, k_min=3):
    """Weights k_min..k_max with S_{k,l} != 0 whose Hankel determinant is nonzero."""
    F = prime.F
    out = []
    for k in range(k_min, k_max + 1):
        d = dim_cusp(k, l, F.q)
        if d == 0:
            continue
        traces = power_traces(prime, k, l, max(2 * d - 2, 0), cap=10 ** 9)
        _, repeated = repeated_eig_detect(traces, d, F)
        if not repeated:
            out.append(k)
    return out


# --- old and new forms ---------------------------------------------------------

def oldnew_criterion(k, l, prime, cap=DEFAULT_CAP):
    """Whether +-prime^((k-2)/2) shows up among the recovered eigenvalues of T_prime."""
    F = prime.F
    q, p = F.q, F.p
    d = dim_cusp(k, l, q)
    out = {"q": q, "prime": format_poly(prime), "k": k, "l": l, "dim": d}
    by_dimension = d < p or (normalize_type(l, q) == 1 and d <= p)
    if d == 0 or (k - 2) % 2:
        out.update(eigenvalue_found=False, decomposition="holds",
                   reason="no eigenvalue can equal +-prime^((k-2)/2)")
        return out
    rep = spectrum(prime, k, l, 1, cap, fallback=True)
    poly = rep.charpoly if rep.charpoly is not None else rep.recurrence
    target = prime ** ((k - 2) // 2)
    found = any(poly.evaluate(c).is_zero() for c in (target, -target))
    out["eigenvalue_found"] = found
    if by_dimension:
        out["decomposition"] = "holds" if not found else "contradiction"
        out["reason"] = "dimension below the characteristic"
    else:
        out["decomposition"] = "undetermined"
        out["reason"] = "an eigenvalue with multiplicity divisible by p is invisible to traces"
    return out


# --- sufficient condition for the strong bound ------------------------------------

def ram_suff_check(prime, n, cap=DEFAULT_CAP):
    """Scan the finite sufficient condition for the strong Ramanujan bound.

    For each exponent tuple (v_0..v_N) in [0, q-1] and t with
    2t = -sum(v) mod q-1 and 2 sum(i v_i) > nd(sum(v) - (q-1)), the census
    sum of #Iso * b^t * prod a_i^v_i must vanish.  Nonzero instances are
    reported, not raised.
    """
    TraceQuery(prime, n, 3, 1, cap).validate()
    F = prime.F
    q = F.q
    nd = n * prime.deg
    N = nd // 2
    table = iso_table(prime, n)
    entries = []
    for w, count in table:
        if count:
            entries.append(([int(w.a.coeff(i)) if i < len(w.a.c) else 0 for i in range(N + 1)],
                            w.b, F.from_int(count)))
    checked = 0
    violations = []

    def rec(i, vec):
        nonlocal checked
        if i == N + 1:
            k = sum(vec)
            if 2 * sum(j * v for j, v in enumerate(vec)) <= nd * (k - (q - 1)):
                return
            for t in range(1, q):
                if (2 * t + k) % (q - 1):
                    continue
                checked += 1
                acc = 0
                for coeffs, b, cnt in entries:
                    term = F.mul(cnt, F.pow(b, t))
                    for a_i, v in zip(coeffs, vec):
                        if v:
                            term = F.mul(term, F.pow(a_i, v))
                    acc = F.add(acc, term)
                if acc:
                    violations.append({"v": list(vec), "t": t, "value": F.format(acc)})
            return
        for v in range(q):
            rec(i + 1, vec + [v])

    rec(0, [])
    return {"q": q, "prime": format_poly(prime), "n": n, "N": N,
            "checked": checked, "violations": violations}


# --- scans and figure data -------------------------------------------------------

def attainment_weight(q, l, n):
    """k_n = (n-1) q^2 + (2l - n) q + 1."""
    return (n - 1) * q * q + (2 * l - n) * q + 1


def predicted_attainment_multiplicity(q, l, n):
    """d_l(n) = n - 2 ceil((n - l) / (q + 1))."""
    return n - 2 * -(-(n - l) // (q + 1))


def _strong_bound(nd, k, q):
    return Fraction(nd * (k - (q + 1)), 2)


def figure_rows(prime, k_values, l, n=1, cap=DEFAULT_CAP):
    """Rows (k, deg Tr, strong bound, log_q(1 + bound - deg Tr)) for weights of the right type."""
    F = prime.F
    q = F.q
    nd = n * prime.deg
    rows = []
    for k in k_values:
        if not type_ok(k, l, q) or dim_cusp(k, l, q) == 0:
            continue
        value = trace_auto(TraceQuery(prime, n, k, l, cap)).value
        bound = _strong_bound(nd, k, q)
        if value.is_zero():
            rows.append((k, None, bound, None))
            continue
        gap = 1 + bound - value.deg
        rows.append((k, value.deg, bound, math.log(gap, q) if gap > 0 else None))
    return rows


def _fmt_fraction(x):
    return str(x.numerator) if x.denominator == 1 else f"{float(x):.1f}"


def figure_csv(rows):
    lines = ["k,deg_trace,strong_bound,log_distance"]
    for k, deg, bound, logd in rows:
        lines.append(",".join([str(k), "" if deg is None else str(deg), _fmt_fraction(bound),
                               "" if logd is None else f"{logd:.6f}"]))
    return "\n".join(lines) + "\n"


def conjecture_scans(prime, k_values, l, cap=DEFAULT_CAP):
    """Per-weight report on the trace distance to the strong bound and slope attainment.

    Nothing here is asserted; mismatches with the predicted attainment
    weights and multiplicities are listed under ``mismatches``.
    """
    F = prime.F
    q, p = F.q, F.p
    nd = prime.deg
    l = normalize_type(l, q)
    targets = {}
    nn = 1
    while True:
        kn = attainment_weight(q, l, nn)
        if kn > max(k_values, default=0):
            break
        if kn >= 0:
            targets[kn] = nn
        nn += 1
    rows = []
    mismatches = []
    for k, deg, bound, logd in figure_rows(prime, k_values, l, 1, cap):
        row = {"k": k, "deg_trace": deg, "strong_bound": _fmt_fraction(bound),
               "distance": None if deg is None else _fmt_fraction(bound - deg)}
        d = dim_cusp(k, l, q)
        row["dim"] = d
        nn = targets.get(k)
        predicted = None
        if nn is not None and q % 2:
            predicted = predicted_attainment_multiplicity(q, l, nn)
            row["k_n_index"] = nn
            row["predicted_multiplicity"] = predicted
        if d < p:
            try:
                rep = spectrum(prime, k, l, 1, cap)
            except CapExceeded as exc:
                row["note"] = f"slopes skipped: {exc}"
            else:
                segs = rep.slopes["inf"]
                attained = sum(m for s, m in segs if -s == bound)
                row["slopes_inf"] = [[_fmt_slope(s), m] for s, m in segs]
                row["attained_multiplicity"] = attained
                if prime.deg == 1 and q % 2:
                    residues = sorted({int(-s) % (q - 1) for s, _ in segs
                                       if s != math.inf and s.denominator == 1})
                    row["slope_residues"] = residues
                    allowed = {(l - 1) % (q - 1), (l - 1 + (q - 1) // 2) % (q - 1)}
                    if any(s != math.inf and s.denominator != 1 for s, _ in segs) or \
                            not set(residues) <= allowed:
                        mismatches.append({"k": k, "kind": "slope residue", "residues": residues})
                if q % 2:
                    expected = predicted if predicted is not None else 0
                    if attained != expected:
                        mismatches.append({"k": k, "kind": "attainment",
                                           "attained": attained, "predicted": expected})
        else:
            row["note"] = f"slopes skipped: dim {d} >= p"
        rows.append(row)
    return {"q": q, "prime": format_poly(prime), "l": l, "rows": rows,
            "attainment_weights": sorted(targets), "mismatches": mismatches}


def dimension_parity_scan(qs, k_max):
    """Weights with #P(k, l, q) != dim S_{k,l} mod 2, for even q (expected none)."""
    from .combinat import char2_count
    bad = []
    for q in qs:
        for l in range(q - 1):
            for k in range(3, k_max + 1):
                if not type_ok(k, l, q):
                    continue
                if (char2_count(k, l, q) - dim_cusp(k, l, q)) % 2:
                    bad.append((q, k, l))
    return bad
