"""
How close traces come to the bound
==================================

For q = 5 and type 3 the trace degree meets the strong bound at a sparse set
of weights. Plotting is left to the reader; this prints the data.
"""

# %%
from drinfeld_traces import PolyA, field_for_q
from drinfeld_traces.spectra import figure_csv, figure_rows

F = field_for_q(5)
rows = figure_rows(PolyA.parse(F, "T"), range(3, 120), 3)
print(figure_csv(rows))

# %%
hits = [k for k, deg, bound, logd in rows if logd == 0]
print("bound attained at", hits)
