"""Finite fields F_q = F_p[x]/(m(x)) and their extensions F_{q^m}.

An element is stored as a small integer ``c = sum(c_i * p**i)`` whose
base-p digits are its coefficient vector in the basis 1, x, ..., x^(r-1).
Extension fields use exactly the same encoding with their own modulus;
``FieldDesc.extension`` returns the bigger field together with the image
of every element of the smaller one.

Extension fields precompute addition and multiplication tables (as numpy
arrays for vectorised work and as nested lists for scalar work).  The
fields used here have at most a few thousand elements.
"""

from functools import lru_cache

import numpy as np

from . import _expr
from .errors import (EvenCharacteristic, InvalidModulus, NonPrimeCharacteristic,
                     ParseError, ReducibleModulus)

MAX_TABLE_SIZE = 4096
# above this size only 1-D log/exp tables are kept; sums go through digits
DENSE_TABLE_SIZE = 1024


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p as coefficient lists (low degree first) ---------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm] if len(a) > dm else a)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _ppowmod(a, e, m, p):
    result, base = [1], _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible_fp(poly, p):
    """Rabin's test for a monic polynomial over F_p given low degree first."""
    poly = _trim(list(poly))
    r = len(poly) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p ** r, poly, p) != _pmod(x, poly, p):
        return False
    for ell in prime_factors(r):
        h = _ppowmod(x, p ** (r // ell), poly, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(poly, _trim(h), p)) != 1:
            return False
    return True


def default_modulus(p, r):
    """Smallest monic irreducible of degree r, ordered by integer code.

    The code of ``x^r + c_{r-1}x^{r-1} + ... + c_0`` is ``p^r + sum c_i p^i``,
    so this is lexicographic order on (c_{r-1}, ..., c_0).
    """
    if r == 1:
        return (0, 1)
    for c in range(p ** r):
        digits = [(c // p ** i) % p for i in range(r)]
        poly = digits + [1]
        if is_irreducible_fp(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


class _CodeRing(_expr.Ring):
    def __init__(self, F):
        self.F = F

    def const(self, n):
        return n % self.F.p

    def atom(self, name):
        if name != "x" or self.F.r == 1:
            raise ParseError(f"unknown symbol {name!r} for a field of size {self.F.q}")
        return self.F.p

    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def pow(self, a, e):
        return self.F.pow(a, e)


class FieldDesc:
    """The field F_q with q = p^r, built from an explicit modulus."""

    def __init__(self, p, r, modulus):
        self.p = p
        self.r = r
        self.q = p ** r
        self.modulus = tuple(modulus)
        self.is_prime_field = r == 1
        self._ext = {}
        self._pow_p = p ** np.arange(r, dtype=np.int64)
        self.digits = np.array([[(c // p ** i) % p for i in range(r)] for c in range(self.q)],
                               dtype=np.int64)
        if self.is_prime_field:
            q = self.q
            self._inv_l = [0] + [pow(c, q - 2, q) for c in range(1, q)]
        else:
            self._build_tables()

    # construction helpers
    def _slow_mul(self, a, b):
        da = [(a // self.p ** i) % self.p for i in range(self.r)]
        db = [(b // self.p ** i) % self.p for i in range(self.r)]
        prod = _pmod(_pmul(_trim(da), _trim(db), self.p), self.modulus, self.p)
        return sum(c * self.p ** i for i, c in enumerate(prod))

    def _build_tables(self):
        p, q = self.p, self.q
        if q > MAX_TABLE_SIZE:
            raise InvalidModulus(f"field of size {q} exceeds the supported size {MAX_TABLE_SIZE}")
        D = self.digits
        self._neg = ((-D) % p) @ self._pow_p
        if q <= DENSE_TABLE_SIZE:
            self._add = ((D[:, None, :] + D[None, :, :]) % p) @ self._pow_p
            self._sub = self._add[:, self._neg]
        order = q - 1
        factors = prime_factors(order)
        gen = None
        for g in range(2, q):
            ok = True
            for ell in factors:
                if self._slow_pow(g, order // ell) == 1:
                    ok = False
                    break
            if ok:
                gen = g
                break
        exp = np.zeros(order, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        self._exp, self._log, self.generator = exp, log, gen
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % order]
        self._inv = inv
        self._neg_l = self._neg.tolist()
        self._inv_l = inv.tolist()
        self._exp_l = exp.tolist()
        self._log_l = log.tolist()
        self._digits_l = D.tolist()
        if q > DENSE_TABLE_SIZE:
            self._add = self._sub = self._mul = None
            self._add_l = self._sub_l = self._mul_l = None
            return
        idx = (log[:, None] + log[None, :]) % order
        mul = exp[idx]
        mul[0, :] = 0
        mul[:, 0] = 0
        self._mul = mul
        self._add_l = self._add.tolist()
        self._sub_l = self._sub.tolist()
        self._mul_l = mul.tolist()

    def _slow_pow(self, a, e):
        out, base = 1, a
        while e:
            if e & 1:
                out = self._slow_mul(out, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return out

    # identity
    def __repr__(self):
        if self.is_prime_field:
            return f"FieldDesc(F_{self.q})"
        return f"FieldDesc(F_{self.q}, modulus={self.modulus_str()})"

    def modulus_str(self):
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                if not mono:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(mono)
                else:
                    terms.append(f"{c}*{mono}")
        return "+".join(terms)

    def __reduce__(self):
        return (field_create, (self.p, self.r, self.modulus))

    # scalar arithmetic
    def _digit_add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        da, db = self._digits_l[a], self._digits_l[b]
        out, w = 0, 1
        for x, y in zip(da, db):
            out += (x + y) % p * w
            w *= p
        return out

    def add(self, a, b):
        if self.is_prime_field:
            return (a + b) % self.p
        if self._add_l is None:
            return self._digit_add(a, b)
        return self._add_l[a][b]

    def sub(self, a, b):
        if self.is_prime_field:
            return (a - b) % self.p
        if self._sub_l is None:
            return self._digit_add(a, self._neg_l[b])
        return self._sub_l[a][b]

    def neg(self, a):
        if self.is_prime_field:
            return -a % self.p
        return self._neg_l[a]

    def mul(self, a, b):
        if self.is_prime_field:
            return a * b % self.p
        if self._mul_l is None:
            if not a or not b:
                return 0
            return self._exp_l[(self._log_l[a] + self._log_l[b]) % (self.q - 1)]
        return self._mul_l[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv_l[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        e %= self.q - 1
        if self.is_prime_field:
            return pow(a, e, self.p)
        return self._exp_l[self._log_l[a] * e % (self.q - 1)]

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    # vectorised arithmetic on int64 arrays of codes
    def _vdigit_add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        D = self.digits
        return ((D[a] + D[b]) % self.p) @ self._pow_p

    def vadd(self, a, b):
        if self.is_prime_field:
            return (a + b) % self.p
        if self._add is None:
            return self._vdigit_add(np.asarray(a), np.asarray(b))
        return self._add[a, b]

    def vsub(self, a, b):
        if self.is_prime_field:
            return (a - b) % self.p
        if self._sub is None:
            return self._vdigit_add(np.asarray(a), self._neg[b])
        return self._sub[a, b]

    def vneg(self, a):
        if self.is_prime_field:
            return (-a) % self.p
        return self._neg[a]

    def vmul(self, a, b):
        if self.is_prime_field:
            return (a * b) % self.p
        if self._mul is None:
            a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, out)
        return self._mul[a, b]

    def vscale(self, c, a):
        if self.is_prime_field:
            return (c * a) % self.p
        if self._mul is None:
            return self.vmul(c, a)
        return self._mul[c][a]

    def vpow(self, a, e):
        """Elementwise a**e for e >= 0 (with 0**0 = 1)."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.is_prime_field:
            out = np.ones_like(a)
            base = a % self.p
            while e:
                if e & 1:
                    out = out * base % self.p
                base = base * base % self.p
                e >>= 1
            return out
        out = self._exp[(self._log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    # characters and traces
    def legendre(self, c):
        """Quadratic character of c in F_q (q odd): 1, -1 or 0."""
        if self.p == 2:
            raise EvenCharacteristic("the quadratic character needs odd q")
        if c == 0:
            return 0
        return 1 if self.pow(c, (self.q - 1) // 2) == 1 else -1

    def abs_trace(self, c):
        """Absolute trace of c down to F_p, as an integer code < p."""
        total, x = 0, c
        for _ in range(self.r):
            total = self.add(total, x)
            x = self.pow(x, self.p)
        return total

    def quad_split(self, u, v):
        """Splitting type of Y^2 + uY + v over F_q: 1 split, 0 square, -1 irreducible."""
        if self.p == 2:
            if u == 0:
                return 0
            t = self.abs_trace(self.div(v, self.mul(u, u)))
            return 1 if t == 0 else -1
        disc = self.sub(self.mul(u, u), self.mul(4 % self.p, v))
        return self.legendre(disc)

    def quadratic_character(self, alpha, beta):
        """1/0/-1 as X^2 - alpha X + beta is split / a square / irreducible."""
        if self.p == 2:
            raise EvenCharacteristic("the quadratic character is defined for odd q only")
        return self.quad_split(self.neg(alpha), beta)

    def sqrt(self, c):
        """A square root of c, or None.  In characteristic 2 it is unique."""
        if self.p == 2:
            return self.pow(c, self.q // 2)
        for y in range(self.q):
            if self.mul(y, y) == c:
                return y
        return None

    # text format
    def format(self, c):
        if self.is_prime_field:
            return str(c)
        if c == 0:
            return "0"
        terms = []
        for i in range(self.r - 1, -1, -1):
            d = (c // self.p ** i) % self.p
            if not d:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(d))
            elif d == 1:
                terms.append(mono)
            else:
                terms.append(f"{d}*{mono}")
        return "+".join(terms)

    def parse(self, text):
        return _expr.evaluate(str(text), _CodeRing(self))

    def vector(self, c):
        return [int(d) for d in self.digits[c]]

    def element(self, vec):
        vec = [int(v) % self.p for v in vec]
        vec = _pmod(_trim(vec), self.modulus, self.p) if len(vec) > self.r else vec
        return sum(v * self.p ** i for i, v in enumerate(vec))

    def term_count(self, c):
        return int(np.count_nonzero(self.digits[c]))

    # towers
    def extension(self, m):
        """Return (F_{q^m}, embed) where embed[c] is the image of c."""
        if m == 1:
            return self, np.arange(self.q, dtype=np.int64)
        if m in self._ext:
            return self._ext[m]
        big = field_create(self.p, self.r * m)
        if self.is_prime_field:
            embed = np.arange(self.q, dtype=np.int64)
        else:
            root = None
            for z in range(big.q):
                acc = 0
                for coef in reversed(self.modulus):
                    acc = big.add(big.mul(acc, z), coef)
                if acc == 0:
                    root = z
                    break
            powers = [1]
            for _ in range(1, self.r):
                powers.append(big.mul(powers[-1], root))
            embed = np.zeros(self.q, dtype=np.int64)
            for c in range(self.q):
                acc = 0
                for i, d in enumerate(self.vector(c)):
                    if d:
                        acc = big.add(acc, big.mul(d, powers[i]))
                embed[c] = acc
        self._ext[m] = (big, embed)
        return big, embed

    def norm_to_base(self, lam, m):
        """Norm from F_{q^m} to F_q of the F_{q^m}-element ``lam``."""
        big, embed = self.extension(m)
        val = big.pow(lam, (self.q ** m - 1) // (self.q - 1)) if lam else 0
        back = {int(e): c for c, e in enumerate(embed)}
        return back[val]


@lru_cache(maxsize=None)
def _field_cached(p, r, modulus):
    return FieldDesc(p, r, modulus)


def field_create(p, r=1, modulus=None):
    """Build F_{p^r}; the modulus defaults to the smallest monic irreducible."""
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if r < 1:
        raise InvalidModulus("extension degree must be positive")
    if modulus is None:
        modulus = default_modulus(p, r)
    else:
        if isinstance(modulus, str):
            modulus = _parse_fp_poly(modulus, p)
        modulus = _trim([int(c) % p for c in modulus])
        if len(modulus) - 1 != r:
            raise InvalidModulus(f"modulus has degree {len(modulus) - 1}, expected {r}")
        if modulus[-1] != 1:
            raise InvalidModulus("modulus must be monic")
        if not is_irreducible_fp(modulus, p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
        modulus = tuple(modulus)
    return _field_cached(p, r, tuple(modulus))


def field_for_q(q, modulus=None):
    """Field of order q (a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    r, t = 0, q
    while t % p == 0:
        t //= p
        r += 1
    if t != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_create(p, r, modulus)


class _FpPolyRing(_expr.Ring):
    def __init__(self, p):
        self.p = p

    def const(self, n):
        return _trim([n % self.p])

    def atom(self, name):
        if name != "x":
            raise ParseError(f"unknown symbol {name!r} in a modulus")
        return [0, 1]

    def add(self, a, b):
        n = max(len(a), len(b))
        return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % self.p
                      for i in range(n)])

    def neg(self, a):
        return [-c % self.p for c in a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return _pmul(a, b, self.p)


def _parse_fp_poly(text, p):
    return _expr.evaluate(text, _FpPolyRing(p))
