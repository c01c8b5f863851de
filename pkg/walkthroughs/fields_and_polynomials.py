"""
Finite fields and polynomial rings
==================================

Field elements are small integer codes. Polynomials in T carry their field.
"""

# %%
from drinfeld_traces import PolyA, field_create, field_for_q, format_poly
from drinfeld_traces.polyring import factor_monic, is_irreducible, monic_irreducibles

F9 = field_for_q(9)
print(F9.modulus_str())          # the default modulus for F_9
x = F9.from_int(3)               # code 3 is the class of x
print(F9.format(F9.mul(x, x)))   # x^2 = -1 here

# %%
# a different modulus gives an isomorphic field with other codes
G9 = field_create(3, 2, "x^2+x+2")
print(G9.modulus_str(), G9.format(G9.mul(3, 3)))

# %%
F3 = field_for_q(3)
f = PolyA.parse(F3, "T^6+2T^4+T^2")
for g, e in factor_monic(f):
    print(format_poly(g), e)

# %%
# irreducibles of degree 2 over F_3, used as primes below
primes = monic_irreducibles(F3, 2)
print([format_poly(P) for P in primes])
print(is_irreducible(PolyA.parse(F3, "T^2+1")))

# %%
# compact printing drops the "*" after numeric coefficients, as in the tables
big = PolyA.parse(F3, "2T^8+T^6+2T^2+1")
print(format_poly(big), "->", format_poly(big, compact=True))
