from itertools import product

import pytest

from drinfeld_oracle import drinfeld_census
from drinfeld_traces.errors import InseparableModel, NotImaginary, NotIrreducible, NotMonic
from drinfeld_traces.gf import field_for_q
from drinfeld_traces.isogeny import (census_rows, class_number_maximal_mod_p, curve_point_count,
                                     enumerate_weil, hurwitz_mod_p, is_imaginary, iso_count,
                                     iso_table, jacobian_order)
from drinfeld_traces.polyring import (PolyA, PolyAX, enumerate_polys, monic_irreducibles,
                                      squarefree_part)


def P(F, text):
    return PolyA.parse(F, text)


def X2(F, c1, c0):
    """X^2 + c1 X + c0."""
    return PolyAX(F, [c0, c1, PolyA.one(F)])


def test_prime_checks():
    F = field_for_q(3)
    with pytest.raises(NotIrreducible):
        iso_table(P(F, "T^2-1"), 1)
    with pytest.raises(NotMonic):
        iso_table(P(F, "2*T+1"), 1)


def test_degree_one_census():
    F = field_for_q(3)
    T = PolyA.T(F)
    table = iso_table(T, 1)
    for w, count in table:
        assert w.a.deg <= 0
        assert count == 1
    assert table.count(T, 1) == 0
    assert table.count(PolyA.one(F), 1) == 1


def test_case_four_classes():
    F = field_for_q(3)
    T = PolyA.T(F)
    rows = [(a, b, case, c) for a, b, case, c in census_rows(T, 2) if case == 4]
    assert {(str(a), b) for a, b, _, _ in rows} == {("2*T", 1), ("T", 1)}
    assert all(c == 1 for *_, c in rows)
    for w in enumerate_weil(T, 2):
        assert w.a.is_zero() or w.a.deg <= 1


@pytest.mark.parametrize("q,text,n", [(2, "T", 1), (2, "T", 2), (2, "T^2+T+1", 1), (3, "T", 1),
                                      (3, "T", 2), (3, "T^2+1", 1), (3, "T", 3), (4, "T", 1),
                                      (5, "T", 2)])
def test_matches_brute_force(q, text, n):
    F = field_for_q(q)
    pr = P(F, text)
    census = drinfeld_census(pr, n)
    table = iso_table(pr, n)
    for key in set(census) | set(table.counts):
        assert census.get(key, 0) % F.p == table.count(*key)


def test_imaginary_examples():
    F = field_for_q(3)
    T = PolyA.T(F)
    zero = PolyA.zero(F)
    assert is_imaginary(X2(F, zero, T))[0]
    assert not is_imaginary(X2(F, zero, -(T * T + PolyA.one(F))))[0]
    F2 = field_for_q(2)
    c = X2(F2, PolyA.zero(F2), PolyA.T(F2))
    ok, model = is_imaginary(c)
    assert ok and model.kind == "inseparable"
    assert hurwitz_mod_p(c) == 1
    with pytest.raises(InseparableModel):
        curve_point_count(model, 1)


def test_not_imaginary_guard():
    F = field_for_q(3)
    _, model = is_imaginary(X2(F, PolyA.zero(F), -(PolyA.T(F) ** 2 + PolyA.one(F))))
    with pytest.raises(NotImaginary):
        class_number_maximal_mod_p(model)


def test_point_counts_and_jacobians():
    F = field_for_q(3)
    zero = PolyA.zero(F)
    for D in enumerate_polys(F, 3):
        if D.deg is not None and D.deg >= 1:
            D0, g = squarefree_part(D)
            if g.deg != 0:
                continue
            _, model = is_imaginary(X2(F, zero, -D))
            if model.genus == 0:
                assert curve_point_count(model, 1) == 4
                assert jacobian_order(model) == 1
            elif model.genus == 1:
                n1 = curve_point_count(model, 1)
                assert abs(n1 - 4) <= 2 * 3 ** 0.5
                assert jacobian_order(model) == n1
                assert curve_point_count(model, 2) >= n1


def test_genus_two_weil_interval():
    F = field_for_q(3)
    zero = PolyA.zero(F)
    c = X2(F, zero, -P(F, "T^5+2*T+1"))
    _, model = is_imaginary(c)
    assert model.genus == 2
    h = jacobian_order(model)
    assert (3 ** 0.5 - 1) ** 4 <= h <= (3 ** 0.5 + 1) ** 4


@pytest.mark.parametrize("q", [2, 4])
def test_even_class_number_parity(q):
    F = field_for_q(q)
    checked = 0
    for r, s in product(enumerate_polys(F, 1), enumerate_polys(F, 3)):
        if s.is_zero():
            continue
        c = X2(F, r, s)
        ok, _ = is_imaginary(c)
        if not ok:
            continue
        checked += 1
        odd = hurwitz_mod_p(c) % 2 == 1
        assert odd == (r.is_zero() or r.deg == 0)
    assert checked > 20


@pytest.mark.parametrize("q", [3, 5])
def test_degree_two_closed_form(q):
    F = field_for_q(q)
    pairs = [(pr, 2) for pr in monic_irreducibles(F, 1)] + \
            [(pr, 1) for pr in monic_irreducibles(F, 2)]
    for pr, n in pairs:
        table = iso_table(pr, n)
        for a in enumerate_polys(F, 1):
            for b in F.units():
                expected = (1 - F.quadratic_character(a.coeff(1), b)) % F.p
                assert table.count(a, b) == expected


@pytest.mark.parametrize("q", [2, 4])
def test_even_counts_are_degree_indicators(q):
    F = field_for_q(q)
    for d, n in ((1, 1), (1, 2), (2, 1), (1, 3)):
        for pr in monic_irreducibles(F, d)[:2]:
            for w, c in iso_table(pr, n):
                assert c == (1 if w.a.is_zero() or w.a.deg <= 0 else 0)


def test_iso_count_agrees_with_table():
    F = field_for_q(3)
    pr = P(F, "T^2+1")
    table = iso_table(pr, 2)
    for w, c in table:
        assert iso_count(w) == c


@pytest.mark.parametrize("q,d,n", [(3, 1, 2), (3, 2, 2), (5, 1, 4), (5, 2, 1)])
def test_leading_coefficient_sums(q, d, n):
    F = field_for_q(q)
    pr = monic_irreducibles(F, d)[0]
    nd = n * d
    for m, t in product(range(1, q), range(q - 1)):
        acc = 0
        for w, c in iso_table(pr, n):
            if c and not w.a.is_zero() and w.a.deg == nd // 2:
                term = F.mul(F.from_int(c), F.mul(F.pow(w.a.lc, m), F.pow(w.b, t)))
                acc = F.add(acc, term)
        assert acc == 0


@pytest.mark.parametrize("q,text,n", [(3, "T", 1), (3, "T", 2), (3, "T^2+1", 1), (5, "T", 1),
                                      (2, "T", 3)])
def test_constant_term_sums(q, text, n):
    F = field_for_q(q)
    pr = P(F, text)
    for k, t in product(range(0, 2 * (q - 1) + 1), range(q - 1)):
        acc = 0
        for w, c in iso_table(pr, n):
            if c:
                a0 = w.a.coeff(0) if not w.a.is_zero() else 0
                acc = F.add(acc, F.mul(F.from_int(c), F.mul(F.pow(a0, k) if k else 1,
                                                            F.pow(w.b, t))))
        expected = 1 if (k != 0 and k % (q - 1) == 0 and t == 0) else 0
        assert acc == expected, (k, t)
