"""Polynomials over F_q in the variable T, plus a small A[X] helper.

``PolyA`` stores an immutable int64 coefficient array (index i is the
coefficient of T^i) with no trailing zeros.  Products over prime fields go
through numpy convolution (FFT for long operands); products over
extension fields are done coordinate-wise in an F_p basis and reduced by
the field modulus afterwards.
"""

import itertools
from functools import lru_cache

import numpy as np

from . import _expr
from .errors import EvenCharacteristic, ParseError, ZeroPolynomial


class _NegInf:
    """Degree of the zero polynomial: below every integer, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    __str__ = __repr__

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("NEG_INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int) and other > 0:
            return self
        raise ArithmeticError("NEG_INF can only be scaled by a positive integer")

    __rmul__ = __mul__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("NEG_INF - NEG_INF is undefined")
        return self

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()

_FFT_THRESHOLD = 256


def _fft_convolve(a, b, p):
    n = len(a) + len(b) - 1
    size = 1 << (n - 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b.astype(np.float64), size)
    out = np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)
    return out % p


def _conv_p(a, b, p):
    if min(len(a), len(b)) > _FFT_THRESHOLD:
        return _fft_convolve(a, b, p)
    return np.convolve(a, b) % p


def _series_inverse(g, n, p):
    """Power series inverse of g (g[0] != 0) mod x^n over F_p."""
    h = np.array([pow(int(g[0]), -1, p)], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        gh = _conv_p(g[:k], h, p)[:k]
        gh = (-gh) % p
        gh[0] = (gh[0] + 2) % p
        h = _conv_p(h, gh, p)[:k]
    return h


_NEWTON_THRESHOLD = 64


def _strip(c):
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return c[:0]
    return c[:nz[-1] + 1]


def mul_arrays(F, a, b):
    """Product of two coefficient arrays over F (no canonicalisation)."""
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    p = F.p
    if F.is_prime_field:
        return _conv_p(a, b, p)
    if len(a) == 1:
        return F.vscale(int(a[0]), b)
    if len(b) == 1:
        return F.vscale(int(b[0]), a)
    r = F.r
    Da, Db = F.digits[a], F.digits[b]
    n = len(a) + len(b) - 1
    acc = np.zeros((2 * r - 1, n), dtype=np.int64)
    for i in range(r):
        ai = Da[:, i]
        if not ai.any():
            continue
        for j in range(r):
            bj = Db[:, j]
            if bj.any():
                acc[i + j] += _conv_p(ai, bj, p)
    acc %= p
    m = F.modulus
    for t in range(2 * r - 2, r - 1, -1):
        row = acc[t]
        if row.any():
            for i in range(r):
                if m[i]:
                    acc[t - r + i] = (acc[t - r + i] - row * m[i]) % p
    return acc[:r].T @ F._pow_p


class PolyA:
    """An element of A = F_q[T]."""

    __slots__ = ("F", "c", "_hash")

    def __init__(self, F, coeffs):
        c = np.asarray(coeffs, dtype=np.int64)
        if c.ndim != 1:
            c = c.reshape(-1)
        c = _strip(c)
        c.setflags(write=False)
        self.F = F
        self.c = c
        self._hash = None

    @classmethod
    def _raw(cls, F, c):
        obj = cls.__new__(cls)
        c = _strip(c)
        c.setflags(write=False)
        obj.F, obj.c, obj._hash = F, c, None
        return obj

    # constructors
    @classmethod
    def zero(cls, F):
        return cls._raw(F, np.zeros(0, dtype=np.int64))

    @classmethod
    def one(cls, F):
        return cls.const(F, 1)

    @classmethod
    def const(cls, F, c):
        return cls._raw(F, np.array([c], dtype=np.int64))

    @classmethod
    def T(cls, F):
        return cls._raw(F, np.array([0, 1], dtype=np.int64))

    @classmethod
    def monomial(cls, F, coef, e):
        c = np.zeros(e + 1, dtype=np.int64)
        c[e] = coef
        return cls._raw(F, c)

    @classmethod
    def parse(cls, F, text):
        return _expr.evaluate(str(text), _PolyRing(F))

    # basic queries
    @property
    def deg(self):
        return len(self.c) - 1 if len(self.c) else NEG_INF

    @property
    def lc(self):
        return int(self.c[-1]) if len(self.c) else 0

    def is_zero(self):
        return len(self.c) == 0

    def is_one(self):
        return len(self.c) == 1 and self.c[0] == 1

    def is_const(self):
        return len(self.c) <= 1

    def is_monic(self):
        return self.lc == 1

    def coeff(self, i):
        return int(self.c[i]) if 0 <= i < len(self.c) else 0

    def coeffs(self):
        return tuple(int(x) for x in self.c)

    def key(self):
        """Sort key: degree first, then coefficients from the top down."""
        return (len(self.c), tuple(int(x) for x in self.c[::-1]))

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = PolyA.const(self.F, other % self.F.p) if other else PolyA.zero(self.F)
        if not isinstance(other, PolyA):
            return NotImplemented
        return self.F is other.F and np.array_equal(self.c, other.c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.F.q, self.c.tobytes()))
        return self._hash

    def __bool__(self):
        return len(self.c) > 0

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, PolyA):
            return other
        if isinstance(other, (int, np.integer)):
            return PolyA.const(self.F, int(other) % self.F.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        if len(b):
            out[:len(b)] = self.F.vadd(a[:len(b)], b)
        return PolyA._raw(self.F, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyA._raw(self.F, self.F.vneg(self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PolyA._raw(self.F, mul_arrays(self.F, self.c, other.c))

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by the field element with code c."""
        if c == 0:
            return PolyA.zero(self.F)
        return PolyA._raw(self.F, self.F.vscale(c, self.c))

    def shift(self, e):
        """Multiply by T^e."""
        if self.is_zero() or e == 0:
            return self
        return PolyA._raw(self.F, np.concatenate([np.zeros(e, dtype=np.int64), self.c]))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = PolyA.one(self.F)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divrem(self, g):
        if g.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        F = self.F
        f = self.c.copy()
        dg = len(g.c) - 1
        if len(f) - 1 < dg:
            return PolyA.zero(F), self
        inv = F.inv(g.lc)
        qc = np.zeros(len(f) - dg, dtype=np.int64)
        gc = g.c
        if F.is_prime_field and dg > _NEWTON_THRESHOLD and len(qc) > _NEWTON_THRESHOLD:
            # quotient from reversed polynomials: rev(f) / rev(g) mod x^len(qc)
            p = F.p
            m = len(qc)
            qr = _conv_p(f[::-1][:m], _series_inverse(gc[::-1], m, p), p)[:m]
            qc = np.ascontiguousarray(qr[::-1])
            rem = (f[:dg] - _conv_p(qc, gc, p)[:dg]) % p
            return PolyA._raw(F, qc), PolyA._raw(F, rem)
        if F.is_prime_field:
            p = F.p
            for i in range(len(f) - 1, dg - 1, -1):
                c = int(f[i]) * inv % p
                if c:
                    qc[i - dg] = c
                    f[i - dg:i + 1] = (f[i - dg:i + 1] - c * gc) % p
        else:
            for i in range(len(f) - 1, dg - 1, -1):
                c = F.mul(int(f[i]), inv)
                if c:
                    qc[i - dg] = c
                    f[i - dg:i + 1] = F.vsub(f[i - dg:i + 1], F.vscale(c, gc))
        return PolyA._raw(F, qc), PolyA._raw(F, f[:dg] if dg > 0 else f[:0])

    def __divmod__(self, g):
        return self.divrem(g)

    def __floordiv__(self, g):
        return self.divrem(g)[0]

    def __mod__(self, g):
        return self.divrem(g)[1]

    def exact_div(self, g):
        quo, rem = self.divrem(g)
        if not rem.is_zero():
            raise ArithmeticError(f"{g} does not divide {self}")
        return quo

    def powmod(self, e, m):
        result = PolyA.one(self.F) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result

    def monic(self):
        if self.is_zero():
            raise ZeroPolynomial("cannot normalise the zero polynomial")
        return self.scale(self.F.inv(self.lc))

    def derivative(self):
        if len(self.c) <= 1:
            return PolyA.zero(self.F)
        idx = np.arange(1, len(self.c), dtype=np.int64) % self.F.p
        return PolyA._raw(self.F, self.F.vmul(idx, self.c[1:]))

    def __call__(self, alpha, embed=None, field=None):
        """Evaluate at alpha; with ``embed`` the coefficients are mapped into ``field``."""
        K = field if field is not None else self.F
        coeffs = self.c if embed is None else embed[self.c]
        acc = 0
        for c in coeffs[::-1]:
            acc = K.add(K.mul(acc, alpha), int(c))
        return acc

    def eval_many(self, alphas, embed=None, field=None):
        """Vectorised evaluation at an array of field elements."""
        K = field if field is not None else self.F
        coeffs = self.c if embed is None else embed[self.c]
        acc = np.zeros(len(alphas), dtype=np.int64)
        for c in coeffs[::-1]:
            acc = K.vadd(K.vmul(acc, alphas), np.full(len(alphas), int(c), dtype=np.int64))
        return acc

    def compose(self, h):
        """self(h(T))."""
        acc = PolyA.zero(self.F)
        for c in self.c[::-1]:
            acc = acc * h + int(c)
        return acc

    def valuation(self, prime):
        """Exponent of ``prime`` in self; NEG_INF stands for the zero case."""
        if self.is_zero():
            raise ZeroPolynomial("valuation of zero")
        v, f = 0, self
        while True:
            quo, rem = f.divrem(prime)
            if not rem.is_zero():
                return v
            v, f = v + 1, quo

    def is_irreducible(self):
        if self.deg is NEG_INF or self.deg < 1:
            return False
        return is_irreducible(self)

    # text
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"PolyA({format_poly(self)!r}, q={self.F.q})"


def format_poly(f, var="T", compact=False):
    """Canonical text, highest degree first, e.g. ``T^3+2*T+1``.

    Extension-field coefficients with several terms are parenthesised:
    ``(x+1)*T^2``.  With ``compact`` the ``*`` after a numeric coefficient
    is dropped (``2T^4+1``).
    """
    F = f.F
    if f.is_zero():
        return "0"
    terms = []
    for i in range(len(f.c) - 1, -1, -1):
        c = int(f.c[i])
        if not c:
            continue
        cs = F.format(c)
        if not F.is_prime_field and F.term_count(c) > 1 and i > 0:
            cs = f"({cs})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(cs)
        elif c == 1:
            terms.append(mono)
        else:
            sep = "" if compact and F.is_prime_field else "*"
            terms.append(f"{cs}{sep}{mono}")
    return "+".join(terms)


class _PolyRing(_expr.Ring):
    def __init__(self, F):
        self.F = F

    def const(self, n):
        return PolyA.const(self.F, n % self.F.p)

    def atom(self, name):
        if name == "T":
            return PolyA.T(self.F)
        if name == "x" and not self.F.is_prime_field:
            return PolyA.const(self.F, self.F.p)
        raise ParseError(f"unknown symbol {name!r}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, e):
        return a ** e


def parse_poly(F, text):
    return PolyA.parse(F, text)


# --- gcd and friends -------------------------------------------------------

def gcd(f, g):
    """Monic gcd (zero if both arguments vanish)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic() if not f.is_zero() else f


def xgcd(f, g):
    """(d, u, v) with d = u f + v g monic."""
    F = f.F
    r0, r1 = f, g
    s0, s1 = PolyA.one(F), PolyA.zero(F)
    t0, t1 = PolyA.zero(F), PolyA.one(F)
    while not r1.is_zero():
        quo, rem = r0.divrem(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def is_irreducible(f):
    """Rabin test over F_q."""
    F = f.F
    d = f.deg
    if d is NEG_INF or d < 1:
        return False
    if d == 1:
        return True
    from .gf import prime_factors
    T = PolyA.T(F)
    q = F.q
    if T.powmod(q ** d, f) != T % f:
        return False
    for ell in prime_factors(d):
        h = T.powmod(q ** (d // ell), f) - T
        if gcd(f, h).deg > 0:
            return False
    return True


# --- enumeration -----------------------------------------------------------

def enumerate_polys(F, max_deg, monic=False, include_zero=True):
    """Every polynomial of degree <= max_deg, by degree and then top-down lex.

    ``max_deg = 0`` gives the constants.  With ``monic`` only monic
    polynomials are produced (and never zero).
    """
    q = F.q
    if include_zero and not monic:
        yield PolyA.zero(F)
    for d in range(0, max_deg + 1):
        leads = [1] if monic else range(1, q)
        for lead in leads:
            for rest in itertools.product(range(q), repeat=d):
                c = np.array(list(rest[::-1]) + [lead], dtype=np.int64)
                yield PolyA._raw(F, c)


def polys_of_degree(F, d, monic=False):
    leads = [1] if monic else range(1, F.q)
    for lead in leads:
        for rest in itertools.product(range(F.q), repeat=d):
            yield PolyA._raw(F, np.array(list(rest[::-1]) + [lead], dtype=np.int64))


@lru_cache(maxsize=None)
def _monic_irreducibles(F, d):
    return tuple(f for f in polys_of_degree(F, d, monic=True) if is_irreducible(f))


def monic_irreducibles(F, d):
    """All monic irreducibles of degree d, in enumeration order."""
    return list(_monic_irreducibles(F, d))


def count_monic_irreducibles(q, d):
    from .gf import prime_factors
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            m = d // e
            mu = 0 if any(m % (f * f) == 0 for f in prime_factors(m)) else (-1) ** len(prime_factors(m))
            total += mu * q ** e
    return total // d


# --- factorisation -----------------------------------------------------------

def factor_monic(f):
    """Factor into monic irreducibles: list of (prime, multiplicity).

    Trial division by the monic irreducibles of increasing degree; the
    cofactor left once deg^2 exceeds what remains is itself prime.  Output
    is sorted by degree and then lexicographically.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    F = f.F
    g = f.monic()
    out = []
    d = 1
    while g.deg >= 2 * d:
        for P in _monic_irreducibles(F, d):
            e = 0
            while True:
                quo, rem = g.divrem(P)
                if not rem.is_zero():
                    break
                g, e = quo, e + 1
            if e:
                out.append((P, e))
            if g.deg < 2 * d:
                break
        d += 1
    if g.deg >= 1:
        out.append((g, 1))
    merged = {}
    for P, e in out:
        merged[P] = merged.get(P, 0) + e
    return sorted(merged.items(), key=lambda t: t[0].key())


def prime_divisors(f):
    return [P for P, _ in factor_monic(f)]


def radical(f):
    out = PolyA.one(f.F)
    for P, _ in factor_monic(f):
        out = out * P
    return out


def pth_root(f):
    """The polynomial g with g^p = f, for f with vanishing derivative."""
    F = f.F
    p = F.p
    if any(int(x) for i, x in enumerate(f.c) if i % p):
        raise ValueError("polynomial is not a p-th power")
    roots = [F.pow(int(x), F.q // p) for x in f.c[::p]]
    return PolyA(F, roots)


def squarefree_decomposition(f):
    """Monic squarefree pairwise coprime s_i with f = lc(f) * prod s_i^i.

    Returns a dict {i: s_i} (only non-trivial factors).  Handles the
    characteristic-p case where the derivative vanishes by taking p-th roots.
    """
    if f.is_zero():
        raise ZeroPolynomial("squarefree decomposition of zero")
    F = f.F
    out = {}

    def put(i, s):
        if s.deg >= 1:
            out[i] = out[i] * s if i in out else s

    def rec(g, mult):
        if g.deg < 1:
            return
        c = gcd(g, g.derivative())
        w = g.exact_div(c)
        i = 1
        while w.deg >= 1:
            y = gcd(w, c)
            z = w.exact_div(y)
            put(i * mult, z)
            i += 1
            w = y
            c = c.exact_div(y)
        if c.deg >= 1:
            rec(pth_root(c), mult * F.p)

    rec(f.monic(), 1)
    return out


def squarefree_part(f):
    """(D, g): f = D g^2, D squarefree carrying the leading unit, g monic."""
    if f.is_zero():
        raise ZeroPolynomial("squarefree part of zero")
    if f.F.p == 2:
        raise EvenCharacteristic("squarefree_part is used for odd q only")
    F = f.F
    D = PolyA.const(F, f.lc)
    g = PolyA.one(F)
    for i, s in squarefree_decomposition(f).items():
        if i % 2:
            D = D * s
        if i // 2:
            g = g * s ** (i // 2)
    return D, g


# --- polynomials in X over A ----------------------------------------------

class PolyAX:
    """Dense polynomial in X with PolyA coefficients (index i = X^i)."""

    __slots__ = ("F", "c")

    def __init__(self, F, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.F = F
        self.c = coeffs

    @property
    def deg(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def coeff(self, i):
        return self.c[i] if 0 <= i < len(self.c) else PolyA.zero(self.F)

    def __eq__(self, other):
        return isinstance(other, PolyAX) and self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        return PolyAX(self.F, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return PolyAX(self.F, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyA):
            return PolyAX(self.F, [x * other for x in self.c])
        if not self.c or not other.c:
            return PolyAX(self.F, [])
        out = [PolyA.zero(self.F)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x.is_zero():
                continue
            for j, y in enumerate(other.c):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return PolyAX(self.F, out)

    def divrem_monic(self, g):
        """Division by a polynomial in X whose leading coefficient is 1."""
        if not g.c or not g.c[-1].is_one():
            raise ValueError("divisor must be monic in X")
        rem = list(self.c)
        dg = len(g.c) - 1
        quo = [PolyA.zero(self.F)] * max(len(rem) - dg, 0)
        for i in range(len(rem) - 1, dg - 1, -1):
            c = rem[i]
            if c.is_zero():
                continue
            quo[i - dg] = c
            for j in range(dg + 1):
                rem[i - dg + j] = rem[i - dg + j] - c * g.c[j]
        return PolyAX(self.F, quo), PolyAX(self.F, rem[:dg])

    def evaluate(self, x):
        acc = PolyA.zero(self.F)
        for c in reversed(self.c):
            acc = acc * x + c
        return acc

    def discriminant(self):
        """a1^2 - 4 a0 a2 for a quadratic a2 X^2 + a1 X + a0."""
        if self.deg != 2:
            raise ValueError("discriminant is implemented for quadratics")
        a0, a1, a2 = self.c
        return a1 * a1 - a0 * a2 * 4

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if x.is_zero():
                continue
            s = format_poly(x)
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(s)
            elif x.is_one():
                terms.append(mono)
            elif np.count_nonzero(x.c) == 1 and (x.F.is_prime_field or x.F.term_count(x.lc) == 1):
                terms.append(f"{s}*{mono}")
            else:
                terms.append(f"({s})*{mono}")
        return "+".join(terms)

    __repr__ = __str__


def weil_polynomial(a, b, prime, n):
    """X^2 - aX + b*prime^n as a PolyAX."""
    F = a.F
    return PolyAX(F, [(prime ** n).scale(b), -a, PolyA.one(F)])
