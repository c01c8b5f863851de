"""
Traces of Hecke operators
=========================

trace_auto picks the fastest applicable method; trace_general always works.
"""

# %%
from drinfeld_traces import PolyA, TraceQuery, field_for_q, format_poly, trace_auto, trace_general

F = field_for_q(3)
T = PolyA.parse(F, "T")
for k in range(4, 21, 2):
    res = trace_auto(TraceQuery(T, 1, k, 1))
    print(k, format_poly(res.value), res.method)

# %%
# the fast paths agree with the general formula
q = TraceQuery(PolyA.parse(F, "T^2+1"), 1, 30, 1)
print(trace_auto(q).method, trace_auto(q).value == trace_general(q).value)

# %%
# characteristic 2 has its own closed form
F2 = field_for_q(2)
res = trace_auto(TraceQuery(PolyA.parse(F2, "T"), 1, 177, 1))
print(format_poly(res.value), res.method)

# %%
# the operator without the 1/P normalization
print(format_poly(trace_general(TraceQuery(T, 1, 12, 1)).unscaled()))

# %%
# degree of the trace against the strong bound
from drinfeld_traces.traces import strong_ramanujan_bound
q = TraceQuery(T, 1, 40, 1)
print(trace_general(q).value.deg, strong_ramanujan_bound(q))
