import math
import random
from itertools import product

import pytest

from drinfeld_traces.combinat import char2_index_set, dim_cusp
from drinfeld_traces.errors import DimensionAtLeastP, InsufficientTerms, ZeroPolynomial
from drinfeld_traces.gf import field_for_q
from drinfeld_traces.polyring import PolyA, PolyAX
from drinfeld_traces.spectra import (RationalFn, _modular_recurrence, attainment_weight,
                                     berlekamp_massey, char2_odd_mult_eigs,
                                     charpoly_from_traces, conjecture_scans, discriminant,
                                     figure_csv, figure_rows, newton_polygon, oldnew_criterion,
                                     power_sums, power_traces, ram_suff_check,
                                     repeated_eig_detect, spectrum)


def P(F, text):
    return PolyA.parse(F, text)


def roots_poly(F, roots):
    f = PolyAX(F, [PolyA.one(F)])
    for r in roots:
        f = f * PolyAX(F, [-r, PolyA.one(F)])
    return f


def test_rational_functions():
    F = field_for_q(5)
    rng = random.Random(0)

    def rnd():
        num = PolyA(F, [rng.randrange(5) for _ in range(3)])
        den = PolyA(F, [rng.randrange(5) for _ in range(2)] + [rng.randrange(1, 5)])
        return RationalFn(num, den)

    for _ in range(40):
        a, b, c = rnd(), rnd(), rnd()
        assert a + b == b + a
        assert (a + b) * c == a * c + b * c
        if not b.is_zero():
            assert (a / b) * b == a
    T = PolyA.T(F)
    x = RationalFn(T * T + T, T * 2)
    assert x.den.is_monic() and x == RationalFn(T + PolyA.one(F), PolyA.const(F, 2))
    assert RationalFn(PolyA.one(F), T ** 3).valuation("inf") == 3
    assert RationalFn(T ** 2, T + PolyA.one(F)).valuation(T) == 2


def test_charpoly_examples():
    F = field_for_q(3)
    T = PolyA.T(F)
    tr = P(F, "T^2+1")
    assert charpoly_from_traces([tr], 1, F) == PolyAX(F, [-tr, PolyA.one(F)])
    rep = spectrum(T, 16, 0)
    assert str(rep.charpoly) == "X^2+T*X+2*T^12+T^10+T^4"
    for pr in (T, P(F, "T^2+1"), P(F, "T^3+2*T+1")):
        assert spectrum(pr, 12, 0).charpoly == PolyAX(F, [-pr ** 3, PolyA.one(F)])


def test_dimension_at_least_p():
    F = field_for_q(3)
    with pytest.raises(DimensionAtLeastP):
        spectrum(PolyA.T(F), 40, 1)
    with pytest.raises(DimensionAtLeastP):
        charpoly_from_traces([PolyA.one(F)] * 3, 3, F)
    rep = spectrum(PolyA.T(F), 40, 1, cap=10, fallback=True)
    assert rep.charpoly is None and rep.recurrence is not None and rep.notes


def test_berlekamp_massey_examples():
    F = field_for_q(3)
    one = PolyA.one(F)
    assert berlekamp_massey([one] * 6, F) == PolyAX(F, [-one, one])
    T = PolyA.T(F)
    seq = [T ** n + T ** (3 * n) for n in range(6)]
    assert berlekamp_massey(seq, F) == roots_poly(F, [T, T ** 3])
    with pytest.raises(InsufficientTerms):
        berlekamp_massey(seq[:3], F)
    F2 = field_for_q(2)
    seq17 = [PolyA.const(F2, dim_cusp(17, 1, 2) % 2)] + power_traces(PolyA.T(F2), 17, 1, 9,
                                                                     cap=100)
    assert berlekamp_massey(seq17, F2) == PolyAX(F2, [PolyA.one(F2), PolyA.one(F2)])


def test_repeated_eigenvalue_detection():
    F2 = field_for_q(2)
    T = PolyA.T(F2)
    for k, expect in ((12, False), (9, True)):
        d = dim_cusp(k, 1, 2)
        _, rep = repeated_eig_detect(power_traces(T, k, 1, 2 * d - 2, cap=100), d, F2)
        assert rep is expect
    F3 = field_for_q(3)
    det, rep = repeated_eig_detect([P(F3, "T^2+1")], 1, F3)
    assert det.is_one() and not rep


@pytest.mark.parametrize("q,k,l", [(3, 16, 0), (5, 48, 0), (5, 30, 1), (7, 40, 2), (5, 58, 3)])
def test_hankel_matches_discriminant(q, k, l):
    F = field_for_q(q)
    rep = spectrum(PolyA.T(F), k, l)
    if rep.d >= 2:
        assert rep.hankel_det == discriminant(rep.charpoly)
        assert rep.repeated == rep.hankel_det.is_zero()


def test_modular_certificate_agrees_with_exact_path():
    F = field_for_q(2)
    T = PolyA.T(F)
    for k in (40, 61, 87):
        d = dim_cusp(k, 1, 2)
        seq = [PolyA.const(F, d % 2)] + power_traces(T, k, 1, 2 * d - 1, cap=10 ** 9)
        rec, length, _ = _modular_recurrence(seq, F)
        assert rec == berlekamp_massey(seq, F).to_polyax()
        assert rec == roots_poly(F, char2_odd_mult_eigs(k, 1, T))


def test_round_trip_and_injectivity():
    for q in (3, 5, 7):
        F = field_for_q(q)
        T = PolyA.T(F)
        for k, l in product(range(3, 60), range(1, q)):
            d = dim_cusp(k, l, q)
            if d == 0 or d >= F.p:
                continue
            rep = spectrum(T, k, l)
            assert not rep.charpoly.coeff(0).is_zero()
            sums = power_sums(rep.charpoly, 2 * d - 2 if d > 1 else 1)
            assert [s.to_poly() if hasattr(s, "to_poly") else s for s in sums][:len(rep.traces)] \
                == rep.traces
            for s, _ in rep.slopes["inf"]:
                assert 0 <= -s < (k - 2) / 2


def test_newton_polygons():
    F = field_for_q(3)
    T = PolyA.T(F)
    f = PolyAX(F, [P(F, "2*T^12+T^10+T^4"), T, PolyA.one(F)])
    poly = newton_polygon(f, "inf")
    assert poly.slopes() == [(-6, 2)]
    g = PolyAX(F, [-T ** 3, PolyA.one(F)])
    assert newton_polygon(g, T).slopes() == [(3, 1)]
    h = PolyAX(F, [PolyA.zero(F), -T, PolyA.one(F)])
    assert newton_polygon(h, T).slopes()[-1][0] == math.inf
    with pytest.raises(ZeroPolynomial):
        newton_polygon(PolyAX(F, []), "inf")


def test_odd_multiplicity_eigenvalues():
    F = field_for_q(2)
    pr = P(F, "T^2+T+1")
    assert char2_odd_mult_eigs(17, 1, pr) == [PolyA.one(F)]
    F4 = field_for_q(4)
    T4 = PolyA.T(F4)
    # (12, 1) is outside the type gate: P is {0, 3} but the space is zero
    assert char2_index_set(12, 1, 4) == [0, 3]
    assert char2_odd_mult_eigs(12, 1, T4) == []
    assert char2_odd_mult_eigs(20, 1, T4) == [T4 ** j for j in char2_index_set(20, 1, 4)]
    assert char2_odd_mult_eigs(20, 1, T4)
    assert char2_odd_mult_eigs(2, 1, T4) == []


def test_old_new_criterion():
    F = field_for_q(3)
    T = PolyA.T(F)
    out = oldnew_criterion(12, 0, T)
    assert out["decomposition"] == "holds" and not out["eigenvalue_found"]
    for k, l in product(range(3, 41), (1, 2)):
        assert oldnew_criterion(k, l, T, cap=10)["decomposition"] in ("holds", "undetermined")


@pytest.mark.parametrize("q,text,n", [(3, "T", 1), (3, "T", 3), (5, "T", 1), (3, "T^2+1", 1),
                                      (2, "T", 3), (4, "T", 1), (3, "T", 4)])
def test_ramanujan_sufficient_condition(q, text, n):
    report = ram_suff_check(P(field_for_q(q), text), n)
    assert report["checked"] > 0
    assert report["violations"] == []


def test_conjecture_scan_reports():
    F = field_for_q(5)
    T = PolyA.T(F)
    ks = list(range(18, 140))
    out = conjecture_scans(T, ks, 3)
    assert out["mismatches"] == []
    assert attainment_weight(5, 3, 1) == 26
    rows = figure_rows(T, ks, 3)
    zero = [k for k, _, _, logd in rows if logd == 0]
    assert zero == [26, 66, 106]
    by_k = {k: logd for k, _, _, logd in rows}
    for off in range(2, 20, 4):
        if 26 - off in by_k and 26 + off in by_k:
            assert by_k[26 - off] == pytest.approx(by_k[26 + off])
    assert figure_csv(rows).startswith("k,deg_trace,strong_bound,log_distance\n")
