"""
Characteristic polynomials and slopes
=====================================

With dimension below p the traces of powers determine the characteristic
polynomial. Its Newton polygons give the slopes of the eigenvalues.
"""

# %%
from drinfeld_traces import PolyA, field_for_q, spectrum
from drinfeld_traces.errors import DimensionAtLeastP

F = field_for_q(5)
T = PolyA.parse(F, "T")
rep = spectrum(T, 54, 1)
print(rep.d, rep.charpoly)
print(rep.slopes)

# %%
F3 = field_for_q(3)
rep = spectrum(PolyA.parse(F3, "T"), 16, 0)
print(rep.charpoly, rep.slopes["inf"])

# %%
# at dimension p or more the polynomial is out of reach, a recurrence is not
try:
    spectrum(PolyA.parse(F3, "T"), 40, 1)
except DimensionAtLeastP as exc:
    print("refused:", exc)
rep = spectrum(PolyA.parse(F3, "T"), 40, 1, cap=10, fallback=True)
print(rep.slope_source, rep.recurrence)

# %%
# the Hankel determinant vanishes exactly when an eigenvalue repeats
print(rep.hankel_det is not None, rep.repeated)
