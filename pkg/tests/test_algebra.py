import random

import pytest

from ecdlog.algebra import (
    prime_field, build_extension, composite_field, embedding, coerce_down,
    norm_element, factor_poly, roots_in_field, is_irreducible,
    first_irreducible, pmul, padd, psub, pdivmod, pgcd, pmonic, peval,
    p_xq_mod, pnorm, squarefree_decomposition, mat_rank, mat_kernel, mat_det,
    multiplicative_order,
)
from ecdlog.intutil import factorize, is_prime, crt


def test_factorize_roundtrip():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randrange(2, 10 ** 9)
        f = factorize(n)
        prod = 1
        for p, e in f.items():
            assert is_prime(p)
            prod *= p ** e
        assert prod == n


def test_crt():
    x, m = crt([2, 3], [5, 7])
    assert m == 35 and x % 5 == 2 and x % 7 == 3


@pytest.mark.parametrize("p,d", [(2, 1), (3, 1), (2, 8), (3, 4), (5, 3), (7, 2)])
def test_field_ops(p, d):
    F = build_extension(prime_field(p), d)
    rng = random.Random(17)
    for _ in range(200):
        a, b, c = F.rand(rng), F.rand(rng), F.rand(rng)
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.sub(F.add(a, b), b) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
        # Frobenius is additive (fresh-man's dream)
        assert F.frob_p(F.add(a, b)) == F.add(F.frob_p(a), F.frob_p(b))
        assert F.frob_p(a) == F.pow(a, p)


def test_degree_one_extension_is_base():
    F = prime_field(3)
    assert build_extension(F, 1) is F


def test_cardinality_and_generator_order():
    # |F_9^x| = 8: the order of any unit divides 8
    F = build_extension(prime_field(3), 2)
    assert F.card == 9
    for a in F.all_elements():
        if a:
            assert F.pow(a, 8) == 1


def test_frobenius_orbit_length_f256():
    # a sampled generator of F_256 has Frobenius orbit of size exactly 8
    F = build_extension(prime_field(2), 8)
    rng = random.Random(3)
    while True:
        a = F.rand_nonzero(rng)
        if multiplicative_order(F, a) == 255:
            break
    orbit = [a]
    x = F.frob_p(a)
    while x != a:
        orbit.append(x)
        x = F.frob_p(x)
    assert len(orbit) == 8


def test_frobenius_relative_base_fixes_base():
    Fq = build_extension(prime_field(3), 2)
    K = build_extension(Fq, 2)
    emb = embedding(Fq, K)
    rng = random.Random(5)
    for _ in range(20):
        a = Fq.rand(rng)
        assert K.frobenius(emb(a), 1, Fq) == emb(a)
        b = K.rand(rng)
        assert K.frobenius(b, 2, Fq) == b  # Galois group order
        assert K.frobenius(K.frobenius(b, 1, Fq), -1, Fq) == b


def test_embedding_is_ring_hom_and_composes():
    Fq = build_extension(prime_field(2), 2)
    K2 = build_extension(Fq, 2)
    K4 = build_extension(K2, 2)
    e1 = embedding(Fq, K2)
    e2 = embedding(K2, K4)
    e_direct = embedding(Fq, K4)
    rng = random.Random(7)
    for _ in range(50):
        a, b = Fq.rand(rng), Fq.rand(rng)
        assert e1(Fq.add(a, b)) == K2.add(e1(a), e1(b))
        assert e1(Fq.mul(a, b)) == K2.mul(e1(a), e1(b))
        assert e2(e1(a)) == e_direct(a)


def test_coerce_down_roundtrip():
    Fq = build_extension(prime_field(5), 2)
    K = build_extension(Fq, 3)
    emb = embedding(Fq, K)
    rng = random.Random(9)
    for _ in range(30):
        a = Fq.rand(rng)
        assert coerce_down(K, Fq, emb(a)) == a
    # an element outside the subfield raises
    while True:
        x = K.rand(rng)
        if K.frobenius(x, 1, Fq) != x:
            break
    with pytest.raises(ValueError):
        coerce_down(K, Fq, x)


def test_norm_element():
    Fq = prime_field(5)
    K = build_extension(Fq, 4)
    rng = random.Random(11)
    for _ in range(30):
        a = K.rand_nonzero(rng)
        # independent conjugate product
        prod = 1
        x = a
        for _ in range(4):
            prod = K.mul(prod, x)
            x = K.frob_p(x)
        n = norm_element(K, Fq, a)
        assert embedding(Fq, K)(n) == prod
        b = K.rand_nonzero(rng)
        assert norm_element(K, Fq, K.mul(a, b)) == Fq.mul(
            norm_element(K, Fq, a), norm_element(K, Fq, b))
    # norm of an element of the subfield is its [K:sub]-power
    emb = embedding(Fq, K)
    a = Fq.rand_nonzero(rng)
    assert norm_element(K, Fq, emb(a)) == Fq.pow(a, 4)
    assert norm_element(K, Fq, 1) == 1


def test_factor_poly_roundtrip_and_xq_minus_x():
    rng = random.Random(13)
    for (p, d) in [(2, 2), (3, 1), (5, 1), (3, 2)]:
        F = build_extension(prime_field(p), d)
        for _ in range(25):
            A = [F.rand(rng) for _ in range(rng.randrange(2, 9))]
            pnorm(A)
            if len(A) < 2:
                continue
            lc, facs = factor_poly(F, A, rng)
            prod = [lc]
            for g, m in facs:
                assert g[-1] == 1
                for _ in range(m):
                    prod = pmul(F, prod, g)
            assert prod == A
    # x^q - x over F_q splits into q distinct monic linear factors
    F = build_extension(prime_field(3), 2)
    A = [0, F.neg(1)] + [0] * (F.card - 2) + [1]
    lc, facs = factor_poly(F, A, rng)
    assert len(facs) == F.card and all(len(g) == 2 and m == 1 for g, m in facs)


def test_squarefree_decomposition_with_p_powers():
    F = prime_field(3)
    rng = random.Random(23)
    # (x-1)^3 * (x+1)^2 over F_3 (exercises the p | multiplicity branch)
    A = [1]
    for r, m in [(1, 3), (2, 2)]:
        for _ in range(m):
            A = pmul(F, A, [F.neg(r), 1])
    lc, out = squarefree_decomposition(F, A)
    rebuilt = [lc]
    for g, m in out:
        for _ in range(m):
            rebuilt = pmul(F, rebuilt, g)
    assert rebuilt == A
    assert sorted(m for _, m in out) == [2, 3]


def test_known_factorizations():
    # (x-1)^2 over F_5
    F5 = prime_field(5)
    A = pmul(F5, [4, 1], [4, 1])
    lc, facs = factor_poly(F5, A)
    assert lc == 1 and facs == [([4, 1], 2)]
    # x^2 + 1 irreducible over F_3 (no roots among the 3 elements)
    F3 = prime_field(3)
    assert all(peval(F3, [1, 0, 1], x) != 0 for x in range(3))
    assert is_irreducible(F3, [1, 0, 1])


def test_roots_against_bruteforce():
    F = build_extension(prime_field(3), 2)
    rng = random.Random(29)
    for _ in range(20):
        A = [F.rand(rng) for _ in range(7)]
        pnorm(A)
        if len(A) < 2:
            continue
        rts = dict(roots_in_field(F, A, rng))
        brute = set()
        for x in F.all_elements():
            if peval(F, A, x) == 0:
                brute.add(x)
        assert set(rts) == brute
    assert roots_in_field(F, [5 % 3], rng) == []
    # (x-a)(x-b) has exactly roots {a, b}
    a, b = F.gen, F.add(F.gen, 1)
    A = pmul(F, [F.neg(a), 1], [F.neg(b), 1])
    assert set(r for r, _ in roots_in_field(F, A, rng)) == {a, b}


def test_first_irreducible_deterministic():
    F = prime_field(2)
    g1 = first_irreducible(F, 4)
    g2 = first_irreducible(F, 4)
    assert g1 == g2 and is_irreducible(F, g1)


def test_composite_field_parent_root():
    F = prime_field(7)
    g = first_irreducible(F, 3)
    L = composite_field(F, g)
    assert L.deg == 3
    assert peval(L, [embedding(F, L)(c) for c in g], L.parent_root) == 0


def test_mat_helpers():
    F = prime_field(5)
    assert mat_rank(F, [[1, 2], [2, 4]]) == 1
    ker = mat_kernel(F, [[1, 2, 3]], 3)
    assert len(ker) == 2
    assert mat_det(F, [[1, 2], [3, 4]]) == (4 - 6) % 5
