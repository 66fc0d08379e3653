"""Classification oracles: expected values below were computed by direct
enumeration from the definitions (the rings are small enough to do by hand)
and are frozen; the library must reproduce them exactly."""

import pytest

from znalg.algebra import direct_product, triangular_algebra, zn, zn_poly_x2
from znalg.classify import (
    check_lifting_proposition,
    classify_elements,
    decomposition_report,
    is_exchange,
    jacobson_radical,
    quotient_by_ideal,
    search_exchange_counterexample,
)
from znalg.errors import CapExceeded, IdealNotInRadical, QuotientNotFree


def brute_idempotents(A):
    # independent of classify internals: definition scan
    return sorted(x for x in A.elements() if A.mul(x, x) == x)


def brute_units(A):
    elems = list(A.elements())
    return sorted(x for x in elems
                  if any(A.mul(x, y) == A.one() and A.mul(y, x) == A.one()
                         for y in elems))


def test_z2x_classification_frozen():
    A = zn_poly_x2(2)
    rep = classify_elements(A)
    assert rep.idempotents == [(0, 0), (1, 0)]
    assert [u for u, _ in rep.units] == [(1, 0), (1, 1)]
    assert sorted(x for x, _ in rep.nilpotents) == [(0, 0), (0, 1)]
    # recorded inverses are two-sided
    for u, v in rep.units:
        assert A.mul(u, v) == A.one() == A.mul(v, u)


def test_z4_classification_frozen():
    A = zn(4)
    rep = classify_elements(A)
    assert rep.idempotents == [(0,), (1,)]
    assert [u for u, _ in rep.units] == [(1,), (3,)]
    assert sorted(x for x, _ in rep.nilpotents) == [(0,), (2,)]


def test_one_is_idempotent_and_unit_everywhere():
    for A in (zn(2), zn(5), zn_poly_x2(3), triangular_algebra(2, 2)):
        rep = classify_elements(A)
        assert A.one() in rep.idempotents
        assert A.one() in dict(rep.units)


def test_oracle_agreement_on_catalog():
    for A in (zn(4), zn_poly_x2(2), triangular_algebra(2, 2),
              direct_product([zn(2), zn(2)])):
        rep = classify_elements(A)
        assert rep.idempotents == brute_idempotents(A)
        assert [u for u, _ in rep.units] == brute_units(A)


def test_z2x_flags():
    rep = decomposition_report(zn_poly_x2(2))
    assert rep.flags["clean"]
    assert rep.flags["nil_clean"]
    assert rep.flags["uniquely_clean"]
    assert rep.flags["uniquely_nil_clean"]


def test_z3_not_nil_clean():
    rep = decomposition_report(zn(3))
    assert rep.flags["clean"]
    assert not rep.flags["nil_clean"]
    assert rep.failures["nil_clean"]["element"] == (2,)


def test_t2z2_nil_clean_but_not_uniquely():
    # e11 = e11 + 0 = (e11 + e12) + e12 gives two decompositions
    rep = decomposition_report(triangular_algebra(2, 2))
    assert rep.flags["nil_clean"]
    assert not rep.flags["uniquely_nil_clean"]
    bad = rep.failures["uniquely_nil_clean"]
    assert bad["count"] >= 2


def test_z2xz2_idempotents_are_everything():
    P = direct_product([zn(2), zn(2)])
    rep = classify_elements(P)
    assert len(rep.idempotents) == 4


def test_witness_records_reverify():
    A = triangular_algebra(2, 2)
    rep = decomposition_report(A)
    for a, rec in rep.witnesses.items():
        if rec["clean"]:
            e, u = rec["clean"]
            assert A.add(e, u) == a
            assert A.mul(e, e) == e
            assert u in dict(rep.units)
        if rec["nil_clean"]:
            e, x = rec["nil_clean"]
            assert A.add(e, x) == a
            assert A.mul(e, e) == e
        if rec["strongly_clean"]:
            e, u = rec["strongly_clean"]
            assert A.mul(e, u) == A.mul(u, e)


def test_flag_implications_on_catalog():
    for A in (zn(2), zn(3), zn(4), zn_poly_x2(2),
              direct_product([zn(2), zn(2)]), triangular_algebra(2, 2)):
        rep = decomposition_report(A)
        if rep.flags["clean"]:
            assert rep.flags["exchange"]
        if rep.flags["uniquely_clean"]:
            assert rep.flags["clean"]
        if rep.flags["uniquely_nil_clean"]:
            assert rep.flags["nil_clean"]


def test_exchange_z2x():
    assert is_exchange(zn_poly_x2(2)).is_exchange


def test_exchange_witness_z3():
    rep = is_exchange(zn(3))
    assert rep.is_exchange
    e, r, s = rep.witnesses[(2,)]
    A = zn(3)
    assert A.mul((2,), r) == e
    assert A.mul(A.sub(A.one(), (2,)), s) == A.sub(A.one(), e)
    # e = 1 works too: 1 = 2*2 in Z3 and 0 lies in (1-2)Z3
    assert A.mul((2,), (2,)) == (1,)
    assert A.zero() in {A.mul(A.sub(A.one(), (2,)), b) for b in A.elements()}


def test_exchange_witnesses_reverify_everywhere():
    for A in (zn(4), triangular_algebra(2, 2)):
        rep = is_exchange(A)
        assert rep.is_exchange and rep.sides_agree
        one = A.one()
        for a, (e, r, s) in rep.witnesses.items():
            assert A.mul(e, e) == e
            assert A.mul(a, r) == e
            assert A.mul(A.sub(one, a), s) == A.sub(one, e)


def test_units_form_a_group():
    for A in (zn(4), zn_poly_x2(2), triangular_algebra(2, 2)):
        units = classify_elements(A).units
        unit_set = {u for u, _ in units}
        # the inverse of a unit is a unit, and inversion is an involution
        inverses = dict(units)
        for u, v in units:
            assert v in unit_set
            assert inverses[v] == u


def test_jacobson_radical_frozen():
    assert jacobson_radical(zn(4)) == [(0,), (2,)]
    assert jacobson_radical(zn_poly_x2(2)) == [(0, 0), (0, 1)]
    assert jacobson_radical(zn(2)) == [(0,)]


def test_quotient_z4_by_two():
    Q, project, ideal = quotient_by_ideal(zn(4), [(2,)])
    assert ideal == {(0,), (2,)}
    assert Q.size == 2 and Q.n == 2
    assert project((3,)) == project((1,))
    assert project(Q and (1,)) == Q.one()


def test_quotient_by_zero_is_identity():
    A = zn_poly_x2(2)
    Q, project, ideal = quotient_by_ideal(A, [])
    assert ideal == {A.zero()}
    assert Q.table == A.table and Q.unit == A.unit
    for x in A.elements():
        assert project(x) == x


def test_quotient_t2_by_strict_upper():
    A = triangular_algebra(2, 2)
    e01 = (0, 1, 0)
    Q, project, ideal = quotient_by_ideal(A, [e01])
    assert len(ideal) == 2
    assert Q.size == 4
    # isomorphic to Z2 x Z2: every element idempotent
    assert all(Q.mul(q, q) == q for q in Q.elements())


def test_quotient_projection_is_ring_map():
    A = zn(4)
    Q, project, ideal = quotient_by_ideal(A, [(2,)])
    for x in A.elements():
        for y in A.elements():
            assert project(A.mul(x, y)) == Q.mul(project(x), project(y))
            assert project(A.add(x, y)) == Q.add(project(x), project(y))
    assert project(A.one()) == Q.one()
    # fibers all have size |I|
    from collections import Counter
    sizes = Counter(project(x) for x in A.elements())
    assert set(sizes.values()) == {len(ideal)}


def test_quotient_represents_over_smaller_modulus():
    # (Z4 x Z4) / ((2,2)) has additive exponent 2: the quotient drops to a
    # rank-2 table over Z2 isomorphic to Z2 x Z2
    A = direct_product([zn(4), zn(4)])
    Q, project, ideal = quotient_by_ideal(A, [(2, 2)])
    assert sorted(ideal) == [(0, 0), (0, 2), (2, 0), (2, 2)]
    assert Q.n == 2 and Q.rank == 2
    assert all(Q.mul(q, q) == q for q in Q.elements())
    for x in A.elements():
        for y in A.elements():
            assert project(A.mul(x, y)) == Q.mul(project(x), project(y))


def test_quotient_not_free_detected():
    # Z4[x]/(x^2) has the ideal {0, 2x}; the quotient has additive group
    # Z4 x Z2, which no single-modulus table can carry
    A = zn_poly_x2(4)
    with pytest.raises(QuotientNotFree):
        quotient_by_ideal(A, [(0, 2)])


def test_lifting_proposition_z4():
    rep = check_lifting_proposition(zn(4), [(2,)])
    assert rep.base_clean and rep.quotient_clean and rep.idempotents_lift
    assert rep.biconditional_holds


def test_lifting_proposition_z2x():
    rep = check_lifting_proposition(zn_poly_x2(2), [(0, 1)])
    assert rep.biconditional_holds


def test_lifting_proposition_zero_ideal_degenerates():
    rep = check_lifting_proposition(zn(3), [])
    assert rep.base_clean == rep.quotient_clean
    assert rep.idempotents_lift


def test_lifting_proposition_rejects_non_radical_ideal():
    # the ideal generated by 1 is everything, never inside the radical
    with pytest.raises(IdealNotInRadical):
        check_lifting_proposition(zn(4), [(1,)])


def test_counterexample_search_frozen_hits():
    # hand enumeration: hits are (a, e) with e in aR but 1-e not in (1-a)R,
    # e.g. a = 1, e = 0: 1-e = 1 is not in 0*R
    report = search_exchange_counterexample([zn(2), zn(3), zn(4)])
    by_name = {e["algebra"]: e for e in report.entries}
    assert by_name["Z2"]["hits"] == [((1,), (0,))]
    assert by_name["Z3"]["hits"] == [((1,), (0,))]
    assert by_name["Z4"]["hits"] == [((1,), (0,)), ((3,), (0,))]


def test_counterexample_search_empty_catalog():
    report = search_exchange_counterexample([])
    assert report.entries == [] and report.total_hits == 0


def test_cap_refusal():
    A = zn(2)
    with pytest.raises(CapExceeded):
        classify_elements(A, cap=1)
