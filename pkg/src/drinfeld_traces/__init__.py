"""Traces of Hecke operators on Drinfeld cusp forms for F_q[T]."""

from .errors import *  # noqa: F401,F403
from .gf import FieldDesc, field_create, field_for_q
from .polyring import PolyA, PolyAX, format_poly
from .traces import TraceQuery, TraceResult, trace_auto, trace_general
from .isogeny import iso_table, census_rows
from .spectra import spectrum, newton_polygon, berlekamp_massey, charpoly_from_traces

__version__ = "0.1.0"
