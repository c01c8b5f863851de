import random
from itertools import product

import pytest

from drinfeld_traces.combinat import dim_cusp, type_ok
from drinfeld_traces.errors import (CapExceeded, EvenCharacteristic, OddCharacteristic,
                                    RangeViolation, WrongDegree)
from drinfeld_traces.gf import field_for_q
from drinfeld_traces.polyring import PolyA, format_poly, monic_irreducibles
from drinfeld_traces.traces import (TraceQuery, interp_poly_nd2, sym_poly_eval, symmetry_check,
                                    trace_auto, trace_char2, trace_deg1, trace_deg2,
                                    trace_general, two_power_weight_trace, within_bounds)


def P(F, text):
    return PolyA.parse(F, text)


def tr(q, prime, k, l, n=1, method=trace_auto):
    F = field_for_q(q)
    return method(TraceQuery(P(F, prime), n, k, l))


def test_table_values():
    assert format_poly(tr(3, "T", 12, 1, method=trace_general).value) == "T^2+1"
    assert format_poly(tr(5, "T", 30, 1).value) == "T^4+1"
    assert format_poly(tr(3, "T", 62, 1).value) == "2*T^28+2*T^16+2*T^12+T^10+1"
    assert tr(3, "T", 4, 1).value.is_one()
    assert tr(3, "T", 2, 1, method=trace_general).value.is_zero()


def test_dispatch():
    assert tr(2, "T", 20, 1).method == "char2_closed"
    assert tr(4, "T^2+T+x", 20, 1, n=3).method == "char2_closed"
    assert tr(5, "T+3", 20, 2).method == "deg1_closed"
    assert tr(3, "T^2+1", 20, 2).method == "deg2_closed"
    assert tr(3, "T", 20, 2, n=2).method == "deg2_closed"
    assert tr(3, "T^3+2*T+1", 20, 2).method == "general"
    assert tr(3, "T^3+2*T+1", 162, 1).method == "symmetry"


@pytest.mark.parametrize("k,l", [(162, 1), (162, 2)])
def test_symmetry_path_matches_general(k, l):
    fast = tr(3, "T^3+2*T+1", k, l)
    assert fast.method == "symmetry"
    assert fast.value == tr(3, "T^3+2*T+1", k, l, method=trace_general).value


def test_two_power_weight_range():
    with pytest.raises(RangeViolation):
        two_power_weight_trace(P(field_for_q(4), "T"), 1, 3, 1)


def test_deg1_substitution():
    F = field_for_q(5)
    x = P(F, "T+3")
    for k, l in product(range(3, 40), range(1, 5)):
        a = trace_deg1(TraceQuery(x, 1, k, l)).value
        b = trace_deg1(TraceQuery(PolyA.T(F), 1, k, l)).value
        assert a == b.compose(x)
        assert a == trace_general(TraceQuery(x, 1, k, l)).value


def test_method_errors():
    F3 = field_for_q(3)
    with pytest.raises(WrongDegree):
        trace_deg1(TraceQuery(P(F3, "T^2+1"), 1, 10, 1))
    with pytest.raises(WrongDegree):
        trace_deg2(TraceQuery(P(F3, "T"), 1, 10, 1))
    with pytest.raises(OddCharacteristic):
        trace_char2(TraceQuery(P(F3, "T"), 1, 10, 1))
    with pytest.raises(EvenCharacteristic):
        trace_deg2(TraceQuery(P(field_for_q(2), "T"), 2, 10, 1))
    with pytest.raises(CapExceeded):
        trace_general(TraceQuery(P(F3, "T"), 7, 10, 1))
    with pytest.raises(RangeViolation):
        trace_general(TraceQuery(P(F3, "T"), 0, 10, 1))


def test_cap_override():
    F = field_for_q(3)
    res = trace_general(TraceQuery(PolyA.T(F), 7, 10, 2, cap=7))
    assert res.value == trace_auto(TraceQuery(PolyA.T(F), 1, 10, 2)).value ** 7


@pytest.mark.parametrize("q,text,n", [(3, "T", 2), (3, "T^2+1", 1), (3, "T^3+2*T+1", 1),
                                      (5, "T", 2), (2, "T^2+T+1", 2)])
def test_type_gate_and_bounds(q, text, n):
    F = field_for_q(q)
    pr = P(F, text)
    for k, l in product(range(1, 40), range(1, q)):
        res = trace_auto(TraceQuery(pr, n, k, l))
        if not type_ok(k, l, q):
            assert res.value.is_zero()
        strict, strong = within_bounds(res)
        assert strict
        if pr.deg * n <= 3:
            assert strong


def test_one_dimensional_powers():
    for q, text in ((3, "T"), (3, "T+1"), (5, "T"), (3, "T^2+1")):
        F = field_for_q(q)
        pr = P(F, text)
        for k, l in product(range(3, 40), range(1, q)):
            if dim_cusp(k, l, q) != 1:
                continue
            t1 = trace_auto(TraceQuery(pr, 1, k, l)).value
            t2 = trace_general(TraceQuery(pr, 2, k, l)).value
            assert t2 == t1 * t1


def test_square_trace_at_2q2_minus_2():
    F = field_for_q(3)
    T = PolyA.T(F)
    t1 = trace_auto(TraceQuery(T, 1, 16, 0)).value
    t2 = trace_auto(TraceQuery(T, 2, 16, 0)).value
    const = P(F, "2*T^12+T^10+T^4")
    assert t2 == t1 * t1 - const * 2


def test_two_power_weights():
    F2 = field_for_q(2)
    for text, n in (("T", 1), ("T^2+T+1", 2)):
        pr = P(F2, text)
        assert trace_char2(TraceQuery(pr, n, 17, 1)).value.is_one()
    for q, r, text in ((2, 1, "T+1"), (4, 2, "T+x"), (8, 3, "T")):
        pr = P(field_for_q(q), text)
        for s, m, n in product(range(1, r + 1), (1, 2), (1, 2)):
            k = 2 ** s * q ** m
            got = trace_char2(TraceQuery(pr, n, k, 2 ** (s - 1))).value
            assert got == two_power_weight_trace(pr, n, s, m)


def test_weight_177_chain():
    F = field_for_q(2)
    T = PolyA.T(F)
    eps = symmetry_check(TraceQuery(T, 1, 3, 1), 7, 48)
    lower = trace_general(TraceQuery(T, 1, 81, 1)).value
    assert format_poly(T ** 48 * lower + eps) == "T^80+T^64+T^48+T^16+1"


def test_symmetry_edge_cases():
    F = field_for_q(3)
    T = PolyA.T(F)
    # N = p^m: the mirrored weight is 1, so the residual is the whole trace
    for l in (1, 2):
        eps = symmetry_check(TraceQuery(T, 1, 3, l), 2, 9)
        assert eps == trace_general(TraceQuery(T, 1, 19, l)).value
    for l in (1, 2):
        lower = trace_general(TraceQuery(T, 1, 9, l - 1)).value
        upper = trace_general(TraceQuery(T, 1, 11, l)).value
        symmetry_check(TraceQuery(T, 1, 3, l), 2, 1)
        if not lower.is_zero():
            assert upper.deg == 1 + lower.deg
    with pytest.raises(RangeViolation):
        symmetry_check(TraceQuery(T, 1, 3, 1), 2, 10)


def test_interpolating_polynomial():
    for q in (3, 5):
        F = field_for_q(q)
        pairs = [(pr, 2) for pr in monic_irreducibles(F, 1)] + \
                [(pr, 1) for pr in monic_irreducibles(F, 2)]
        for k, l in product(range(3, 25), range(1, q)):
            f = interp_poly_nd2(k, l, F)
            assert f.deg is None or f.deg < 0 or 2 * f.deg < k - 2
            for pr, n in pairs:
                assert f.evaluate(pr ** n) == trace_general(TraceQuery(pr, n, k, l)).value
    with pytest.raises(EvenCharacteristic):
        interp_poly_nd2(10, 1, field_for_q(2))


@pytest.mark.parametrize("q", [3, 5])
def test_symmetric_functions(q):
    F = field_for_q(q)
    rng = random.Random(q)
    for _ in range(10):
        a = PolyA(F, [rng.randrange(q) for _ in range(3)])
        bpn = PolyA(F, [rng.randrange(q) for _ in range(3)])
        p = [PolyA.const(F, F.from_int(2)), a]
        h = [PolyA.one(F), a]
        for m in range(2, 21):
            p.append(a * p[-1] - bpn * p[-2])
            h.append(p[m] + bpn * h[m - 2])
        for m in range(21):
            assert sym_poly_eval("power", m, a, bpn) == p[m]
            assert sym_poly_eval("homogeneous", m, a, bpn) == h[m]
