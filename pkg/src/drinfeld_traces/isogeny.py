"""Isogeny classes of rank-2 Drinfeld modules over F_{p^n} and their sizes mod p.

A Weil polynomial X^2 - aX + b*P^n (P the monic prime, b a unit) falls in
one of four cases:

1. gcd(a, P) = 1 and the splitting field is imaginary;
2. n odd, a = 0 and the splitting field is imaginary;
3. n even, deg P odd, a = lam * P^(n/2) with X^2 - lam X + b irreducible over F_q;
4. n even and the polynomial is (X - mu P^(n/2))^2.

The number of isomorphism classes is H(A[pi]) in case 1, the class number
of the maximal order in case 2, 2 in case 3 and (q^d - 1)/(q - 1) in case 4.
Class numbers are only needed mod p, where they reduce to
H(O_L) * prod (1 - chi(P')) over primes P' dividing the conductor, and
H(O_L) itself comes from the Jacobian of the curve attached to L.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

import numpy as np

from .combinat import partitions
from .errors import (InseparableModel, NegativeGenus, NonIntegralZeta, NotDegreeTwo,
                     NotImaginary, NotIrreducible, NotMonic)
from .polyring import (NEG_INF, PolyA, PolyAX, enumerate_polys, gcd, polys_of_degree,
                       prime_divisors, radical, squarefree_part, weil_polynomial, xgcd)


@dataclass(frozen=True)
class WeilClass:
    prime: PolyA
    n: int
    a: PolyA
    b: int
    case: int

    def polynomial(self):
        return weil_polynomial(self.a, self.b, self.prime, self.n)

    def sort_key(self):
        return (self.case, self.a.key(), self.b)


@dataclass
class HyperellipticModel:
    """Smooth model of the curve attached to a quadratic extension L/K.

    ``kind`` is "odd" (curve Y^2 = D), "even" (curve X^2 + rX + s = 0) or
    "inseparable".  ``conductor`` is the monic f with A[pi] = A + f O_L.
    """
    F: object
    kind: str
    genus: int = None
    chi_inf: int = None
    conductor: PolyA = None
    D: PolyA = None
    r: PolyA = None
    s: PolyA = None

    def is_imaginary(self):
        return self.kind == "inseparable" or self.chi_inf != 1


def _genus_even(r, s):
    m = 2 * r.deg
    if s.deg is not NEG_INF:
        m = max(m, s.deg)
    return (m + 1) // 2 - 1


def _sqrt_mod_primes(s, primes, F):
    """l with l^2 = s modulo each prime, glued by CRT (characteristic 2)."""
    modulus = PolyA.one(F)
    out = PolyA.zero(F)
    for P in primes:
        lp = s.powmod(F.q ** P.deg // 2, P)
        # combine out (mod modulus) with lp (mod P)
        _, u, v = xgcd(modulus, P)
        out = (out * v * P + lp * u * modulus) % (modulus * P)
        modulus = modulus * P
    return out


def build_model(c):
    """Hyperelliptic model of the splitting field of a monic quadratic c in A[X]."""
    if c.deg != 2 or not c.coeff(2).is_one():
        raise NotDegreeTwo("expected a monic quadratic in X")
    F = c.F
    c0, c1 = c.coeff(0), c.coeff(1)
    if F.p != 2:
        disc = c1 * c1 - c0 * 4
        D, f = squarefree_part(disc)
        g = (D.deg + 1) // 2 - 1
        chi = F.quad_split(0, F.neg(D.coeff(2 * g + 2)))
        return HyperellipticModel(F, "odd", g, chi, f, D=D)
    r, s = c1, c0
    if r.is_zero():
        return HyperellipticModel(F, "inseparable", conductor=PolyA.one(F), r=r, s=s)
    conductor = PolyA.one(F)
    g = _genus_even(r, s)
    while True:
        ds, dr = s.derivative(), r.derivative()
        fk = gcd(r, ds * ds + s * dr * dr)
        if fk.is_zero():
            fk = r.monic()
        if fk.deg < 1:
            break
        fhat = radical(fk)
        m = fhat.deg
        l = s.powmod(F.q ** m // 2, r)
        num = s + r * l + l * l
        fhat2 = fhat * fhat
        if not (num % fhat2).is_zero():
            # the power s^(q^m/2) is only a square root of s modulo the primes
            # whose degree divides m; fall back to a prime-by-prime root
            l = _sqrt_mod_primes(s, prime_divisors(fhat), F)
            num = s + r * l + l * l
        r = r.exact_div(fhat)
        s = num.exact_div(fhat2)
        conductor = conductor * fhat
        g_new = _genus_even(r, s)
        assert g_new < g, "genus must drop during the reduction"
        g = g_new
    chi = F.quad_split(r.coeff(g + 1), s.coeff(2 * g + 2))
    return HyperellipticModel(F, "even", g, chi, conductor, r=r, s=s)


def is_imaginary(c):
    """(verdict, model) for the splitting field of c."""
    model = build_model(c)
    return model.is_imaginary(), model


def _abs_trace_vec(big, z):
    acc = z.copy()
    t = z
    for _ in range(big.r - 1):
        t = big.vmul(t, t)
        acc = big.vadd(acc, t)
    return acc


def affine_point_count(model, j):
    if model.kind == "inseparable":
        raise InseparableModel("no separable curve for an inseparable extension")
    F = model.F
    big, emb = F.extension(j)
    alphas = np.arange(big.q, dtype=np.int64)
    if model.kind == "odd":
        vals = model.D.eval_many(alphas, emb, big)
        pw = big.vpow(vals, (big.q - 1) // 2)
        counts = np.where(vals == 0, 1, np.where(pw == 1, 2, 0))
        return int(counts.sum())
    rv = model.r.eval_many(alphas, emb, big)
    sv = model.s.eval_many(alphas, emb, big)
    zero = rv == 0
    safe_r = np.where(zero, 1, rv)
    inv_r2 = np.asarray(big._inv_l, dtype=np.int64)[big.vmul(safe_r, safe_r)]
    z = big.vmul(sv, inv_r2)
    tr = _abs_trace_vec(big, z)
    counts = np.where(zero, 1, np.where(tr == 0, 2, 0))
    return int(counts.sum())


def curve_point_count(model, j):
    """#C(F_{q^j}) for the smooth projective model."""
    if model.kind == "inseparable":
        raise InseparableModel("no separable curve for an inseparable extension")
    if model.genus is None or model.genus < 0:
        raise NegativeGenus("the model has genus -1")
    at_inf = {1: 2, 0: 1, -1: 2 if j % 2 == 0 else 0}[model.chi_inf]
    return affine_point_count(model, j) + at_inf


@lru_cache(maxsize=None)
def newton_coefficients(i):
    """r_{i,lam}: e_i = sum over partitions lam of i of r_{i,lam} prod p_j^lam_j."""
    out = []
    for lam in partitions(i):
        parts = sum(lam)
        denom = prod(j ** m * factorial(m) for j, m in enumerate(lam, start=1))
        out.append((lam, Fraction((-1) ** (i - parts), denom)))
    return tuple(out)


def elementary_from_power_sums(power_sums):
    """e_1..e_g from p_1..p_g via the partition expansion."""
    out = []
    for i in range(1, len(power_sums) + 1):
        total = Fraction(0)
        for lam, coef in newton_coefficients(i):
            total += coef * prod(Fraction(power_sums[j]) ** m for j, m in enumerate(lam) if m)
        out.append(total)
    return out


def zeta_numerator(q, g, a):
    """Coefficients (high degree first) of psi(z) from a_1..a_g."""
    e = elementary_from_power_sums(a)
    for x in e:
        if x.denominator != 1:
            raise NonIntegralZeta(f"non-integral coefficient {x}")
    e = [1] + [int(x) for x in e]
    coeffs = [0] * (2 * g + 1)   # coeffs[i] multiplies z^(2g - i)
    for i in range(g + 1):
        coeffs[i] = (-1) ** i * e[i]
        coeffs[2 * g - i] = (-1) ** i * e[i] * q ** (g - i)
    return coeffs


def jacobian_order(model):
    """#J(F_q) as psi(1)."""
    if model.kind == "inseparable":
        raise InseparableModel("no separable curve for an inseparable extension")
    g = model.genus
    if g < 0:
        raise NegativeGenus("the model has genus -1")
    if g == 0:
        return 1
    q = model.F.q
    a = [q ** j + 1 - curve_point_count(model, j) for j in range(1, g + 1)]
    order = sum(zeta_numerator(q, g, a))
    if order <= 0:
        raise NonIntegralZeta(f"non-positive Jacobian order {order}")
    return order


def chi_at_prime(model, P):
    """Splitting symbol of the prime P in L, read off the reduced model mod P."""
    F = model.F
    if model.kind == "odd":
        Dm = model.D % P
        if Dm.is_zero():
            return 0
        w = Dm.powmod((F.q ** P.deg - 1) // 2, P)
        return 1 if w.is_one() else -1
    if model.kind == "inseparable":
        return 0
    rm, sm = model.r % P, model.s % P
    if rm.is_zero():
        return 0
    _, inv, _ = xgcd(rm * rm % P, P)
    z = sm * inv % P
    acc, t = z, z
    for _ in range(F.r * P.deg - 1):
        t = t * t % P
        acc = acc + t
    return 1 if acc.is_zero() else -1


def class_number_maximal_mod_p(model):
    """H(O_L) mod p."""
    p = model.F.p
    if model.kind == "inseparable":
        return 1
    if model.chi_inf == 1:
        raise NotImaginary("the place at infinity splits")
    if model.genus < 0:
        return 1
    return (1 - model.chi_inf) * jacobian_order(model) % p


def hurwitz_mod_p(c, maximal=False):
    """H(A[pi]) mod p for a root pi of c (or H(O_L) with ``maximal``)."""
    model = build_model(c)
    if maximal:
        return class_number_maximal_mod_p(model)
    return _hurwitz_from_model(model)


def _hurwitz_from_model(model):
    p = model.F.p
    h = class_number_maximal_mod_p(model)
    if h and model.conductor.deg > 0:
        for P in prime_divisors(model.conductor):
            h = h * (1 - chi_at_prime(model, P)) % p
            if not h:
                break
    return h


# --- classification -----------------------------------------------------------

def _check_prime(prime):
    if not prime.is_monic():
        raise NotMonic(f"{prime} is not monic")
    if not prime.is_irreducible():
        raise NotIrreducible(f"{prime} is not irreducible")


def classify(a, b, prime, n):
    """Case tag 1..4 of X^2 - aX + b prime^n, or 0 if it is not a Weil polynomial.

    Returns (case, model) where model is the hyperelliptic model for cases
    1 and 2 (None otherwise).
    """
    F = prime.F
    d = prime.deg
    if 2 * a.deg > n * d:
        return 0, None
    if not a.is_zero() and gcd(a, prime).is_one():
        model = build_model(weil_polynomial(a, b, prime, n))
        return (1, model) if model.is_imaginary() else (0, None)
    if n % 2:
        if a.is_zero():
            model = build_model(weil_polynomial(a, b, prime, n))
            return (2, model) if model.is_imaginary() else (0, None)
        return 0, None
    half = prime ** (n // 2)
    if a.is_zero():
        lam = 0
    else:
        quo, rem = a.divrem(half)
        if not rem.is_zero() or quo.deg > 0:
            return 0, None
        lam = quo.lc
    split = F.quad_split(F.neg(lam), b)
    if split == 0:
        return 4, None
    if split == -1 and d % 2 == 1:
        return 3, None
    return 0, None


def iso_count_for(case, model, prime, p, q):
    if case == 1:
        return _hurwitz_from_model(model)
    if case == 2:
        return class_number_maximal_mod_p(model)
    if case == 3:
        return 2 % p
    if case == 4:
        return ((q ** prime.deg - 1) // (q - 1)) % p
    return 0


def iso_count(w):
    """#Iso(a, b) mod p for a Weil class."""
    F = w.prime.F
    case, model = classify(w.a, w.b, w.prime, w.n)
    if case != w.case:
        raise ValueError(f"class tagged {w.case} classifies as {case}")
    return iso_count_for(case, model, w.prime, F.p, F.q)


class IsoTable:
    """All Weil classes for (prime, n) with their counts mod p.

    Counts are computed once per orbit of the scaling (a, b) -> (c a, c^2 b).
    """

    def __init__(self, prime, n):
        _check_prime(prime)
        self.prime = prime
        self.n = n
        F = prime.F
        self.F = F
        p, q = F.p, F.q
        max_deg = (n * prime.deg) // 2
        entries = {}
        reps = [PolyA.zero(F)] + [f for d in range(max_deg + 1)
                                  for f in polys_of_degree(F, d, monic=True)]
        for a in reps:
            for b in F.units():
                key = (a, b)
                if key in entries:
                    continue
                case, model = classify(a, b, prime, n)
                count = iso_count_for(case, model, prime, p, q) if case else 0
                for c in F.units():
                    entries[(a.scale(c), F.mul(F.mul(c, c), b))] = (case, count)
        self.classes = sorted(
            (WeilClass(prime, n, a, b, case) for (a, b), (case, _) in entries.items() if case),
            key=WeilClass.sort_key)
        self.counts = {(w.a, w.b): entries[(w.a, w.b)][1] for w in self.classes}

    def __iter__(self):
        for w in self.classes:
            yield w, self.counts[(w.a, w.b)]

    def count(self, a, b):
        return self.counts.get((a, b), 0)

    def nonzero(self):
        """(a, b, count) for classes with a nonzero count mod p."""
        return [(w.a, w.b, self.counts[(w.a, w.b)]) for w in self.classes
                if self.counts[(w.a, w.b)]]


_TABLES = {}
_TABLES_LOCK = threading.Lock()


def iso_table(prime, n):
    key = (prime.F.q, prime.F.modulus, prime.coeffs(), n)
    table = _TABLES.get(key)
    if table is None:
        table = IsoTable(prime, n)
        with _TABLES_LOCK:
            table = _TABLES.setdefault(key, table)
    return table


def enumerate_weil(prime, n):
    """Complete list of Weil classes, ordered by case, deg a, lex a, b."""
    return list(iso_table(prime, n).classes)


def census_rows(prime, n):
    """(a, b, case, count) rows in census order."""
    return [(w.a, w.b, w.case, c) for w, c in iso_table(prime, n)]
