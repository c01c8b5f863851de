"""
Counting isogeny classes
========================

Each pair (a, b) gives a Weil polynomial X^2 - aX + b P^n. The census
classifies it and records the number of isomorphism classes mod p.
"""

# %%
from drinfeld_traces import PolyA, census_rows, field_for_q, format_poly
from drinfeld_traces.isogeny import iso_table

F = field_for_q(3)
P = PolyA.parse(F, "T")
rows = census_rows(P, 2)
for a, b, case, count in rows[:8]:
    print(format_poly(a), F.format(b), case, count)

# %%
# how many classes of each kind
from collections import Counter
print(Counter(case for _, _, case, _ in rows))

# %%
# only nonzero counts contribute to traces
table = iso_table(P, 2)
print(len(table.nonzero()), "of", len(table.classes), "classes have a nonzero count mod 3")

# %%
# the same census over a degree-2 prime
Q = PolyA.parse(F, "T^2+1")
print(len(census_rows(Q, 1)))
