"""Traces of powers of Hecke operators on Drinfeld cusp forms S_{k,l}.

Traces are exact elements of A = F_q[T] in the rescaled normalization
(the operator is divided by the prime).  The general method sums over the
isogeny census of rank-2 Drinfeld modules; closed forms cover degree-1
primes, even q and n*deg(prime) = 2.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .combinat import binom_mod_p, c_kj, dim_cusp, multinomial_mod_p, type_ok
from .errors import (CapExceeded, EvenCharacteristic, OddCharacteristic,
                     RangeViolation, SymmetryMismatch, WrongDegree)
from .isogeny import _check_prime, iso_table
from .polyring import PolyA, PolyAX, format_poly

DEFAULT_CAP = 6
# below this weight the symmetry shortcut saves nothing over the direct sum
SYMMETRY_MIN_WEIGHT = 64


@dataclass(frozen=True)
class TraceQuery:
    """Tr(T_prime^n | S_{k,l}); weights k <= 2 give the zero space."""

    prime: PolyA
    n: int = 1
    k: int = 2
    l: int = 1
    cap: int = DEFAULT_CAP

    @property
    def F(self):
        return self.prime.F

    @property
    def nd(self):
        return self.n * self.prime.deg

    def validate(self, check_cap=True):
        _check_prime(self.prime)
        if self.n < 1:
            raise RangeViolation(f"n must be positive, got {self.n}")
        if self.k < 1:
            raise RangeViolation(f"weight must be positive, got {self.k}")
        if check_cap and self.nd > self.cap:
            raise CapExceeded(
                f"n*deg(prime) = {self.nd} exceeds the cap {self.cap}; raise it with --cap")
        return self

    def with_weight(self, k, l=None):
        return TraceQuery(self.prime, self.n, k, self.l if l is None else l, self.cap)


@dataclass(frozen=True)
class TraceResult:
    query: TraceQuery
    value: PolyA
    method: str

    def unscaled(self):
        """The trace for the operator without the 1/prime normalization."""
        q = self.query
        return self.value * q.prime ** q.n

    def to_dict(self, unscaled=False):
        q = self.query
        value = self.unscaled() if unscaled else self.value
        coeffs = [[i, q.F.format(int(value.c[i]))]
                  for i in range(len(value.c) - 1, -1, -1) if value.c[i]]
        return {
            "q": q.F.q,
            "modulus": q.F.modulus_str(),
            "prime": format_poly(q.prime),
            "n": q.n,
            "k": q.k,
            "l": q.l,
            "trace": format_poly(value),
            "coeffs": coeffs,
            "method": self.method,
        }


# --- helpers -------------------------------------------------------------------

def _horner(terms, X, F):
    """sum terms[j] * X^j for a sparse dict of PolyA coefficients."""
    acc = PolyA.zero(F)
    prev = None
    for j in sorted(terms, reverse=True):
        if prev is not None:
            acc = acc * X ** (prev - j)
        acc = acc + terms[j]
        prev = j
    if prev:
        acc = acc * X ** prev
    return acc


def simple_trace_coefficients(k, l, F):
    """{j: c} with c = (-1)^j C(k-2-j, j) over 0 <= j < (k-2)/2, j = l-1 mod q-1.

    Zero (empty) unless k = 2l mod q-1.
    """
    q, p = F.q, F.p
    if not type_ok(k, l, q):
        return {}
    kp = k - 2
    out = {}
    j = (l - 1) % (q - 1)
    while 2 * j < kp:
        c = c_kj(kp, j, p)
        if c:
            out[j] = F.from_int(c)
        j += q - 1
    return out


def simple_trace_poly(k, l, F):
    """The closed form as a polynomial in X (a PolyA in the variable X)."""
    coeffs = simple_trace_coefficients(k, l, F)
    if not coeffs:
        return PolyA.zero(F)
    arr = np.zeros(max(coeffs) + 1, dtype=np.int64)
    for j, c in coeffs.items():
        arr[j] = c
    return PolyA(F, arr)


def eval_simple_trace(k, l, X):
    F = X.F
    terms = {j: PolyA.const(F, c) for j, c in simple_trace_coefficients(k, l, F).items()}
    return _horner(terms, X, F)


def frobenius_power(a, e):
    """a^e for e a power of p: raise coefficients and spread exponents."""
    F = a.F
    if a.is_zero():
        return a
    out = np.zeros((len(a.c) - 1) * e + 1, dtype=np.int64)
    out[::e] = F.vpow(a.c, e)
    return PolyA(F, out)


# --- general method ------------------------------------------------------------

class TraceEngine:
    """Cached moment sums over the isogeny census of (prime, n).

    With w_t(a) = sum_b #Iso(a, b) b^t, the census is invariant under
    (a, b) -> (c a, c^2 b), so summing over a scaling orbit multiplies a
    monic representative's term by sum_c c^(e + 2t).
    """

    def __init__(self, prime, n):
        F = prime.F
        self.F = F
        self.prime = prime
        self.n = n
        self.pn = prime ** n
        self.table = iso_table(prime, n)
        m = F.q - 1
        self.zero_w = [0] * m
        self.reps = {}
        for w, count in self.table:
            if not count:
                continue
            if w.a.is_zero():
                vec = self.zero_w
            elif w.a.is_monic():
                vec = self.reps.setdefault(w.a, [0] * m)
            else:
                continue
            cc = F.from_int(count)
            for t in range(m):
                vec[t] = F.add(vec[t], F.mul(cc, F.pow(w.b, t)))
        self._powers = {a: [PolyA.one(F)] for a in self.reps}
        self._moments = {}
        self._lock = threading.Lock()

    def _power(self, a, e):
        pw = self._powers[a]
        while len(pw) <= e:
            pw.append(pw[-1] * a)
        return pw[e]

    def moment(self, e, t):
        """sum over all classes of #Iso(a, b) a^e b^t."""
        F = self.F
        m = F.q - 1
        t %= m
        key = (e, t)
        got = self._moments.get(key)
        if got is not None:
            return got
        with self._lock:
            acc = PolyA.zero(F)
            if (e + 2 * t) % m == 0:
                for a, vec in self.reps.items():
                    if vec[t]:
                        acc = acc + self._power(a, e).scale(vec[t])
                acc = -acc
            if e == 0 and self.zero_w[t]:
                acc = acc + PolyA.const(F, self.zero_w[t])
            self._moments[key] = acc
        return acc

    def trace(self, k, l):
        F = self.F
        q, p = F.q, F.p
        if not type_ok(k, l, q):
            return PolyA.zero(F)
        kp = k - 2
        terms = {}
        j = 0
        while 2 * j < kp:
            c = c_kj(kp, j, p)
            if c:
                s = self.moment(kp - 2 * j, j + l - kp - 1)
                if not s.is_zero():
                    terms[j] = s.scale(F.from_int(c))
            j += 1
        return _horner(terms, self.pn, F)

    def epsilon(self, m, N, l):
        """Correction term of the symmetry around weight p^m + 1."""
        F = self.F
        q, p = F.q, F.p
        P = p ** m
        mq = q - 1
        terms = {}
        for j in range((N - 1) // 2 + 1):
            c = c_kj(N - 1, j, p)
            if not c:
                continue
            t = (j + l - N - P) % mq
            e = P + N - 1 - 2 * j
            if (e + 2 * t) % mq:
                continue
            acc = PolyA.zero(F)
            for a, vec in self.reps.items():
                if vec[t]:
                    acc = acc + (frobenius_power(a, P) * self._power(a, N - 1 - 2 * j)).scale(vec[t])
            if not acc.is_zero():
                terms[j] = (-acc).scale(F.from_int(c))
        return _horner(terms, self.pn, F)


_ENGINES = {}
_ENGINES_LOCK = threading.Lock()


def engine_for(prime, n):
    key = (prime.F.q, prime.F.modulus, prime.coeffs(), n)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = TraceEngine(prime, n)
        with _ENGINES_LOCK:
            eng = _ENGINES.setdefault(key, eng)
    return eng


def trace_general(qy):
    qy.validate()
    value = engine_for(qy.prime, qy.n).trace(qy.k, qy.l)
    return TraceResult(qy, value, "general")


# --- closed forms ----------------------------------------------------------------

def trace_deg1(qy):
    qy.validate()
    if qy.prime.deg != 1 or qy.n != 1:
        raise WrongDegree("the degree-1 formula needs deg(prime) = 1 and n = 1")
    return TraceResult(qy, eval_simple_trace(qy.k, qy.l, qy.prime), "deg1_closed")


def trace_char2(qy):
    # no point counts are involved, so the cap does not apply
    qy.validate(check_cap=False)
    if qy.F.p != 2:
        raise OddCharacteristic("the characteristic-2 formula needs even q")
    value = eval_simple_trace(qy.k, qy.l, qy.prime ** qy.n)
    return TraceResult(qy, value, "char2_closed")


def _deg2_terms(k, l, F):
    """{j: polynomial in T} with Tr = sum_j terms[j] * X^j, X = prime^n, nd = 2."""
    q, p = F.q, F.p
    terms = {j: PolyA.const(F, c) for j, c in simple_trace_coefficients(k, l, F).items()}
    if not type_ok(k, l, q):
        return terms
    kp = k - 2
    half = (q - 1) // 2
    extra = {}
    for m in range(half, q - 1):
        coef_m = pow(4, -m, p) * binom_mod_p(m, half, p) % p
        if not coef_m:
            continue
        j = (l - 1 + m) % (q - 1)
        while 2 * j < kp:
            sign = -1 if (j + half) % 2 else 1
            arr = extra.setdefault(j, [0] * max(kp - 2 * j, 1))
            i = (-2 * m) % (q - 1) or (q - 1)
            while i < kp - 2 * j:
                c = multinomial_mod_p([i, j, kp - 2 * j - i], p)
                if c:
                    arr[i] = (arr[i] + sign * c * coef_m) % p
                i += q - 1
            j += q - 1
    for j, arr in extra.items():
        poly = PolyA(F, [F.from_int(c) for c in arr])
        if not poly.is_zero():
            terms[j] = terms.get(j, PolyA.zero(F)) + poly
    return {j: t for j, t in terms.items() if not t.is_zero()}


def trace_deg2(qy):
    qy.validate()
    if qy.F.p == 2:
        raise EvenCharacteristic("the n*deg = 2 formula needs odd q")
    if qy.nd != 2:
        raise WrongDegree(f"the n*deg = 2 formula does not apply to n*deg = {qy.nd}")
    value = _horner(_deg2_terms(qy.k, qy.l, qy.F), qy.prime ** qy.n, qy.F)
    return TraceResult(qy, value, "deg2_closed")


def symmetry_window(k, p, q):
    """(m, N) when k = p^m + 1 + N and the mirrored weight p^m + 1 - N is below q + 1."""
    m = 1
    while p ** m < k - 1:
        P = p ** m
        N = k - 1 - P
        if 1 <= N <= P and P + 1 - N <= q:
            return m, N
        m += 1
    return None


def trace_auto(qy):
    """Cheapest applicable method; the result records which one ran."""
    if qy.F.p == 2:
        return trace_char2(qy)
    qy.validate()
    F = qy.F
    if qy.prime.deg == 1 and qy.n == 1:
        return trace_deg1(qy)
    if qy.nd == 2:
        return trace_deg2(qy)
    window = symmetry_window(qy.k, F.p, F.q)
    if window and qy.k >= SYMMETRY_MIN_WEIGHT:
        m, N = window
        if not type_ok(qy.k, qy.l, F.q):
            return TraceResult(qy, PolyA.zero(F), "symmetry")
        value = engine_for(qy.prime, qy.n).epsilon(m, N, qy.l)
        return TraceResult(qy, value, "symmetry")
    return trace_general(qy)


# --- symmetry, congruences -------------------------------------------------------

def symmetry_check(qy, m, N):
    """Tr(S_{p^m+1+N,l}) - prime^(nN) Tr(S_{p^m+1-N,l-N}), checked against its closed forms."""
    qy.validate()
    F = qy.F
    p, q = F.p, F.q
    if m < 1:
        raise RangeViolation("m must be at least 1")
    P = p ** m
    if not 1 <= N <= P:
        raise RangeViolation(f"N must lie in 1..{P}, got {N}")
    l = qy.l
    eng = engine_for(qy.prime, qy.n)
    upper = eng.trace(P + 1 + N, l)
    lower = eng.trace(P + 1 - N, l - N)
    residual = upper - eng.pn ** N * lower
    eps = eng.epsilon(m, N, l)
    if residual != eps:
        raise SymmetryMismatch(f"residual {residual} differs from epsilon {eps}")
    if qy.prime.deg == 1 and qy.n == 1 and type_ok(P + 1 + N, l, q):
        terms = {}
        for j in range((N - 1) // 2 + 1):
            if (j - (l - 1)) % (q - 1) == 0:
                c = c_kj(N - 1, j, p)
                if c:
                    terms[j] = PolyA.const(F, F.from_int(c))
        explicit = _horner(terms, qy.prime, F)
        if residual != explicit:
            raise SymmetryMismatch(f"residual {residual} differs from the degree-1 form {explicit}")
    if q == 2:
        explicit = eng.trace(N + 1, l)
        if N % 2:
            explicit = explicit + eng.pn ** ((N - 1) // 2)
        if residual != explicit:
            raise SymmetryMismatch(f"residual {residual} differs from the q=2 form {explicit}")
    return residual


def trace_mod_pn(qy, m):
    """The trace mod prime^m from ordinary classes only (m <= n)."""
    qy.validate()
    if not 1 <= m <= qy.n:
        raise RangeViolation(f"modulus power must lie in 1..{qy.n}")
    F = qy.F
    q = F.q
    modulus = qy.prime ** m
    if not type_ok(qy.k, qy.l, q):
        return PolyA.zero(F)
    kp = qy.k - 2
    t = (qy.l - kp - 1) % (q - 1)
    acc = PolyA.zero(F)
    for w, count in iso_table(qy.prime, qy.n):
        if not count or (w.a % qy.prime).is_zero():
            continue
        coef = F.mul(F.from_int(count), F.pow(w.b, t))
        acc = acc + w.a.powmod(kp, modulus).scale(coef)
    return acc % modulus


# --- n*deg = 2 interpolation --------------------------------------------------------

def _nd2_weights(F):
    """{a: [sum_b (1 - leg(a1, b)) b^t for t]} over deg a <= 1."""
    m = F.q - 1
    out = {}
    for a1 in F.elements():
        vec = [0] * m
        for b in F.units():
            w = (1 - F.quad_split(F.neg(a1), b)) % F.p
            if w:
                wb = F.from_int(w)
                for t in range(m):
                    vec[t] = F.add(vec[t], F.mul(wb, F.pow(b, t)))
        for a0 in F.elements():
            out[PolyA(F, [a0, a1])] = vec
    return out


def interp_poly_nd2(k, l, F):
    """f with f(prime^n) = Tr(T_prime^n | S_{k,l}) whenever n*deg(prime) = 2."""
    if F.p == 2:
        raise EvenCharacteristic("the interpolating polynomial is built for odd q")
    q, p = F.q, F.p
    if not type_ok(k, l, q):
        return PolyAX(F, [])
    kp = k - 2
    weights = _nd2_weights(F)
    powers = {a: [PolyA.one(F)] for a in weights}
    coeffs = []
    j = 0
    while 2 * j < kp:
        c = c_kj(kp, j, p)
        acc = PolyA.zero(F)
        if c:
            t = (j + l - kp - 1) % (q - 1)
            e = kp - 2 * j
            for a, vec in weights.items():
                if not vec[t]:
                    continue
                pw = powers[a]
                while len(pw) <= e:
                    pw.append(pw[-1] * a)
                acc = acc + pw[e].scale(vec[t])
            acc = acc.scale(F.from_int(c))
        coeffs.append(acc)
        j += 1
    return PolyAX(F, coeffs)


def square_shift_poly(F):
    """g_q(X) = prod over x in F_q of (X - (T - x)^2)."""
    g = PolyAX(F, [PolyA.one(F)])
    T = PolyA.T(F)
    for x in F.elements():
        r = T - PolyA.const(F, x)
        g = g * PolyAX(F, [-(r * r), PolyA.one(F)])
    return g


def family_weight(q, l, n):
    """Weight of E^n h^(q-1) (l = 0) or E^n h^2 (l = 2)."""
    if l == 0:
        return (q + n + 1) * (q - 1)
    if l == 2:
        return 2 * (q + 1) + n * (q - 1)
    raise RangeViolation("families are defined for types 0 and 2")


def family_template(F, l, n):
    """Square of the known degree-1 eigenvalue, written as a polynomial in X = Q^2."""
    q, p = F.q, F.p
    if l == 0:
        terms = [((n + 1) ** 2, (n + 1) * (q - 1) - 1),
                 (-2 * n * (n + 1), (2 * n + 1) * (q - 1) // 2 - 1),
                 (n * n, n * (q - 1) - 1)]
    elif l == 2:
        terms = [((n + 1) ** 2, 1), (-2 * n * (n + 1), (q + 1) // 2), (n * n, q)]
    else:
        raise RangeViolation("families are defined for types 0 and 2")
    coeffs = {}
    for c, e in terms:
        c %= p
        if c:
            coeffs[e] = (coeffs.get(e, 0) + c) % p
    size = max(coeffs) + 1 if coeffs else 0
    return PolyAX(F, [PolyA.const(F, F.from_int(coeffs.get(i, 0))) for i in range(size)])


def deg2_error_quotient(F, l, n):
    """(f - template) / g_q for the family member n of type l; the division is exact."""
    k = family_weight(F.q, l, n)
    e = interp_poly_nd2(k, l, F) - family_template(F, l, n)
    quo, rem = e.divrem_monic(square_shift_poly(F))
    if rem.c:
        raise ArithmeticError(f"g_q does not divide the error term (q={F.q}, l={l}, n={n})")
    return quo


# --- symmetric functions of Frobenius ------------------------------------------------

def sym_poly_eval(kind, m, a, bpn):
    """p_m or h_m of the two Frobenius roots, from a = pi + pibar and bpn = pi * pibar."""
    F = a.F
    p = F.p
    if m < 0:
        raise RangeViolation("m must be non-negative")
    acc = PolyA.zero(F)
    if kind == "power":
        if m == 0:
            return PolyA.const(F, F.from_int(2))
        for r2 in range(m // 2 + 1):
            r1 = m - 2 * r2
            coef = Fraction(m, r1 + r2) * comb(r1 + r2, r2)
            assert coef.denominator == 1
            c = int(coef) * (-1) ** r2 % p
            if c:
                acc = acc + (a ** r1 * bpn ** r2).scale(F.from_int(c))
        return acc
    if kind == "homogeneous":
        if m % 2 == 0:
            acc = (-bpn) ** (m // 2)
        for j in range((m + 1) // 2):
            c = c_kj(m, j, p)
            if c:
                acc = acc + (a ** (m - 2 * j) * bpn ** j).scale(F.from_int(c))
        return acc
    raise ValueError(f"unknown symmetric function {kind!r}")


# --- special weights in characteristic 2 ---------------------------------------------

def two_power_weight_trace(prime, n, s, m):
    """Closed value at k = 2^s q^m with l = 2^(s-1): prime^-n * sum_j prime^(2^(s-1) q^j n)."""
    F = prime.F
    if F.p != 2:
        raise OddCharacteristic("defined for even q")
    if not 1 <= s <= F.r:
        raise RangeViolation(f"need 1 <= s <= {F.r}, got {s}")
    pn = prime ** n
    acc = PolyA.zero(F)
    for j in range(m):
        acc = acc + pn ** (2 ** (s - 1) * F.q ** j)
    return acc.exact_div(pn)


# --- bounds ---------------------------------------------------------------------

def ramanujan_bound(qy):
    """n d (k-2) / 2, which every nonzero trace stays strictly below."""
    return Fraction(qy.nd * (qy.k - 2), 2)


def strong_ramanujan_bound(qy):
    return Fraction(qy.nd * (qy.k - (qy.F.q + 1)), 2)


def within_bounds(result):
    """(strict Ramanujan holds, strong bound holds) for a computed trace."""
    v = result.value
    if v.is_zero():
        return True, True
    qy = result.query
    return v.deg < ramanujan_bound(qy), v.deg <= strong_ramanujan_bound(qy)


def cusp_dimension(qy):
    return dim_cusp(qy.k, qy.l, qy.F.q)
