"""Brute-force census of rank-2 Drinfeld modules over a finite A-field.

Every phi_T = gamma + alpha*tau + beta*tau^2 over F = A/(P^n)-residue field
F_{q^(n d)} is enumerated, its Frobenius characteristic polynomial
X^2 - aX + b P^n is found by solving

    tau^(2m) + b * phi_{P^n} = phi_a * tau^m          (m = n d)

in the skew polynomial ring F{tau}, and modules are grouped into orbits of
the twist action (alpha, beta) -> (alpha c^(q-1), beta c^(q^2-1)).
"""

from collections import Counter

from drinfeld_traces.polyring import PolyA


class SkewRing:
    def __init__(self, L, q):
        self.L = L
        self.q = q
        self._frob = {}

    def frob(self, x, i):
        if i == 0 or x in (0, 1):
            return x
        return self.L.pow(x, self.q ** i)

    def mul(self, f, g):
        L = self.L
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if not a:
                continue
            for j, b in enumerate(g):
                if b:
                    out[i + j] = L.add(out[i + j], L.mul(a, self.frob(b, i)))
        return out

    def add(self, f, g):
        n = max(len(f), len(g))
        f = f + [0] * (n - len(f))
        g = g + [0] * (n - len(g))
        return [self.L.add(x, y) for x, y in zip(f, g)]

    def scale(self, c, f):
        return [self.L.mul(c, x) for x in f]


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def drinfeld_census(prime, n):
    """Counter {(a, b): number of isomorphism classes} by exhaustive search."""
    F = prime.F
    q = F.q
    m = n * prime.deg
    L, emb = F.extension(m)
    back = {int(e): c for c, e in enumerate(emb)}
    gamma = next(z for z in range(L.q) if prime(z, emb, L) == 0)
    R = SkewRing(L, q)

    def phi_of(poly, phiT):
        acc = [0]
        for c in poly.c[::-1]:
            acc = R.add(R.mul(acc, phiT), [int(emb[int(c)])])
        return _trim(acc)

    def char_poly(alpha, beta):
        phiT = [gamma, alpha, beta]
        phiP = phi_of(prime ** n, phiT)
        powers = [[1]]
        for _ in range(m // 2 + 1):
            powers.append(_trim(R.mul(powers[-1], phiT)))
        found = []
        for b in F.units():
            rel = R.add([0] * (2 * m) + [1], R.scale(int(emb[b]), phiP))
            rel = _trim(rel)
            if any(rel[:m]):
                continue
            Q = rel[m:]
            coeffs = {}
            ok = True
            while Q:
                t = len(Q) - 1
                if t % 2:
                    ok = False
                    break
                e = t // 2
                lead = powers[e][-1]
                u = L.div(Q[-1], lead)
                if u not in back:
                    ok = False
                    break
                coeffs[e] = back[u]
                Q = _trim(R.add(Q, R.scale(L.neg(u), powers[e])))
            if ok:
                deg = max(coeffs) if coeffs else -1
                found.append((PolyA(F, [coeffs.get(i, 0) for i in range(deg + 1)]), b))
        if not found:
            raise AssertionError("no characteristic polynomial found")
        if len(found) == 1:
            return found[0]
        # Frobenius lies in A, so the characteristic polynomial is a square
        pn = prime ** n
        sq = [(a, b) for a, b in found if (a * a - pn.scale(F.mul(4 % F.p, b))).is_zero()]
        assert len(sq) == 1, found
        return sq[0]

    units = list(range(1, L.q))
    twist1 = [L.pow(c, q - 1) for c in units]
    twist2 = [L.pow(c, q * q - 1) for c in units]
    seen = set()
    census = Counter()
    for alpha in range(L.q):
        for beta in units:
            if (alpha, beta) in seen:
                continue
            for t1, t2 in zip(twist1, twist2):
                seen.add((L.mul(alpha, t1), L.mul(beta, t2)))
            census[char_poly(alpha, beta)] += 1
    return census
