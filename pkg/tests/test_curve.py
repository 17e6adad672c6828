import math
import random

import pytest

from ecdlog.algebra import prime_field, build_extension, embedding
from ecdlog.curve import (
    Curve, INF, curve_search, find_point_of_order, NoSuchPoint,
    CurveSearchExhausted, OrderFlagsUnsatisfiable, order_flags_ok,
)


def make_curve(p, d, a):
    F = build_extension(prime_field(p), d)
    return Curve(F, *[F.from_int(c) if isinstance(c, int) else c for c in a])


def test_group_law_identities():
    rng = random.Random(4)
    for (p, d, a) in [(5, 1, (0, 0, 0, 1, 1)), (3, 1, (0, 1, 0, 0, 2)),
                      (2, 2, (1, 0, 0, 0, 1)), (7, 1, (0, 0, 0, 3, 4))]:
        E = make_curve(p, d, a)
        if E.discriminant == 0:
            continue
        K = E.field
        pts = E.enumerate_points(K)
        for _ in range(100):
            P, R, S = (rng.choice(pts) for _ in range(3))
            assert E.is_on(K, E.add(K, P, R))
            assert E.add(K, P, INF) == P
            assert E.add(K, P, E.neg(K, P)) is INF
            assert E.add(K, P, R) == E.add(K, R, P)
            assert E.add(K, E.add(K, P, R), S) == E.add(K, P, E.add(K, R, S))


def test_order_annihilates_points():
    E = make_curve(5, 1, (0, 0, 0, 1, 1))
    N = E.group_order()
    K = E.field
    for P in E.enumerate_points(K):
        assert E.mul_point(K, N, P) is INF


def test_known_order_and_hasse():
    # y^2 = x^3 + x over F_3 has exactly 4 points
    E = make_curve(3, 1, (0, 0, 0, 1, 0))
    assert E.group_order() == 4
    for (p, d, a) in [(5, 1, (0, 0, 0, 2, 3)), (7, 1, (0, 0, 0, 1, 6)),
                      (3, 2, (0, 1, 0, 0, 2))]:
        E = make_curve(p, d, a)
        if E.discriminant == 0:
            continue
        q = E.field.card
        N = E.group_order()
        assert abs(N - q - 1) <= 2 * math.isqrt(q) + 1


def test_bsgs_order_matches_enumeration():
    # force the BSGS path with a tiny enum bound, cross-check by enumeration
    for a in [(0, 0, 0, 1, 1), (0, 1, 0, 2, 1), (0, 0, 0, 3, 1)]:
        E = make_curve(5, 2, a)
        if E.discriminant == 0:
            continue
        n_bsgs = E._order_bsgs(enum_bound=1)
        assert n_bsgs == len(E.enumerate_points(E.field))


def test_group_order_ext_matches_enumeration():
    E = make_curve(3, 1, (0, 1, 0, 0, 2))
    K2 = build_extension(E.field, 2)
    K4 = build_extension(K2, 2)
    assert E.group_order_ext(1) == E.group_order()
    assert E.group_order_ext(2) == len(E.enumerate_points(K2))
    assert E.group_order_ext(4) == len(E.enumerate_points(K4))


def test_frobenius_point_properties():
    E = make_curve(3, 1, (0, 1, 0, 0, 2))
    Fq = E.field
    K = build_extension(Fq, 4)
    rng = random.Random(8)
    for _ in range(30):
        P = E.random_point(K, rng)
        R = E.random_point(K, rng)
        fP = E.frobenius_point(P, 1, Fq, K)
        assert E.is_on(K, fP)
        # Frobenius commutes with addition
        assert E.frobenius_point(E.add(K, P, R), 1, Fq, K) == \
            E.add(K, fP, E.frobenius_point(R, 1, Fq, K))
        # rational points are fixed
        emb = embedding(Fq, K)
        Pq = E.random_point(Fq, rng)
        PqK = (emb(Pq[0]), emb(Pq[1]))
        assert E.frobenius_point(PqK, 1, Fq, K) == PqK
        # the Galois group has order 4
        assert E.frobenius_point(P, 4, Fq, K) == P


def test_find_point_of_order():
    E = make_curve(5, 1, (0, 0, 0, 1, 1))
    N = E.group_order()
    assert find_point_of_order(E, 1) is INF
    K = E.field
    for n in range(2, N + 1):
        if N % n != 0:
            with pytest.raises(NoSuchPoint):
                find_point_of_order(E, n)
            continue
        try:
            Q = find_point_of_order(E, n)
        except NoSuchPoint:
            continue
        assert E.point_order(K, Q, N) == n
    # n beyond the Hasse bound can never divide the order
    with pytest.raises(NoSuchPoint):
        find_point_of_order(E, N * 2)


def test_curve_search():
    F5 = prime_field(5)
    E, Q = curve_search(F5, 2)
    assert E.is_ordinary() and E.point_order(F5, Q, E.group_order()) == 2
    # deterministic
    E2, Q2 = curve_search(F5, 2)
    assert E.a == E2.a and Q == Q2
    with pytest.raises(CurveSearchExhausted):
        curve_search(prime_field(2), 100)
    # flags
    assert order_flags_ok(5, {"not_power_of_two", "not_23_smooth"})
    assert not order_flags_ok(4, {"not_power_of_two"})
    assert not order_flags_ok(6, {"not_23_smooth"})
    with pytest.raises(OrderFlagsUnsatisfiable):
        curve_search(F5, 4, flags={"not_power_of_two"})


def test_curve_search_char2_and_char3_ordinary():
    F4 = build_extension(prime_field(2), 2)
    E, Q = curve_search(F4, 3)
    assert E.field.p == 2 and E.is_ordinary()
    F3 = prime_field(3)
    E3, Q3 = curve_search(F3, 5)
    assert E3.group_order() % 5 == 0 and E3.is_ordinary()
    assert E3.point_order(F3, Q3, E3.group_order()) == 5
