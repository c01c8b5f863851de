"""
Repeated eigenvalues in characteristic 2
========================================
"""

# %%
from drinfeld_traces import PolyA, field_for_q, format_poly
from drinfeld_traces.combinat import char2_index_set, stern_brocot
from drinfeld_traces.spectra import char2_odd_mult_eigs, no_repetition_weights

F = field_for_q(2)
T = PolyA.parse(F, "T")
print(no_repetition_weights(T, 40))

# %%
# eigenvalues with odd multiplicity, read off from an index set
print(char2_index_set(20, 1, 2))
print([format_poly(e) for e in char2_odd_mult_eigs(20, 1, T)])

# %%
# the count of that index set follows the Stern sequence
print([stern_brocot(k) for k in range(1, 17)])
