"""Binomials mod p, trace coefficients, cusp form dimensions, char-2 index sets."""

import threading
from math import comb

from .errors import OddCharacteristic


def binom_mod_p(x, y, p):
    """C(x, y) mod p, digit by digit (Lucas)."""
    if y < 0 or x < 0 or y > x:
        return 0
    out = 1
    while y:
        xd, yd = x % p, y % p
        if yd > xd:
            return 0
        out = out * comb(xd, yd) % p
        x //= p
        y //= p
    return out


def binom_odd(x, y):
    """C(x, y) mod 2, i.e. whether the binary digits of y sit inside those of x."""
    return 0 <= y <= x and (x & y) == y


def multinomial_mod_p(parts, p):
    """(sum parts)! / prod(part!) mod p, as a product of binomials."""
    total, out = 0, 1
    for part in parts:
        if part < 0:
            return 0
        total += part
        out = out * binom_mod_p(total, part, p) % p
        if not out:
            return 0
    return out


def c_kj(k, j, p):
    """(-1)^j C(k - j, j) mod p."""
    if j < 0 or 2 * j > k:
        return 0
    v = binom_mod_p(k - j, j, p)
    return (-v) % p if j % 2 else v


def normalize_type(l, q):
    """Representative of l in 1..q-1 (types are taken mod q-1)."""
    if q == 2:
        return 1
    t = l % (q - 1)
    return t if t else q - 1


def type_ok(k, l, q):
    return (k - 2 * l) % (q - 1) == 0


def dim_cusp(k, l, q):
    """Dimension of the space of cusp forms of weight k and type l."""
    l = normalize_type(l, q)
    if not type_ok(k, l, q) or k < l * (q + 1):
        return 0
    return 1 + (k - l * (q + 1)) // (q * q - 1)


def dim_double_cusp(k, l, q):
    d = dim_cusp(k, l, q)
    if normalize_type(l, q) == 1 and d > 0:
        return d - 1
    return d


def char2_index_set(k2, l, q):
    """P(k2, l, q): the j with 0 <= j < k/2 (k = k2 - 2), j = l - 1 mod q - 1, C(k-j, j) odd."""
    if q % 2:
        raise OddCharacteristic("index sets are defined for even q")
    k = k2 - 2
    out = []
    j = 0
    while 2 * j < k:
        if (j - (l - 1)) % (q - 1) == 0 and binom_odd(k - j, j):
            out.append(j)
        j += 1
    return out


def char2_count(k2, l, q):
    return len(char2_index_set(k2, l, q))


_SB_CACHE = [1, 1]
_SB_LOCK = threading.Lock()


def stern_brocot(k):
    """a_0 = a_1 = 1, a_{2m} = a_m + a_{m-1}, a_{2m+1} = a_m."""
    if k < len(_SB_CACHE):
        return _SB_CACHE[k]
    with _SB_LOCK:
        for i in range(len(_SB_CACHE), k + 1):
            m = i // 2
            _SB_CACHE.append(_SB_CACHE[m] + _SB_CACHE[m - 1] if i % 2 == 0 else _SB_CACHE[m])
    return _SB_CACHE[k]


def fibonacci(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def partitions(n):
    """Partitions of n as multiplicity vectors lam with sum(i * lam[i-1]) = n."""
    def rec(rem, largest):
        if rem == 0:
            yield []
            return
        for part in range(min(rem, largest), 0, -1):
            for rest in rec(rem - part, part):
                yield [part] + rest

    for parts in rec(n, n):
        lam = [0] * n
        for part in parts:
            lam[part - 1] += 1
        yield tuple(lam)
