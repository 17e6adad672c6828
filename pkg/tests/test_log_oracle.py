import random

from ecdlog.algebra import embedding
from ecdlog.curve import INF
from ecdlog.ecfunc import ECFunc
from ecdlog.divisor import (
    Divisor, divisor_of_function, infinite_place, log_divisor,
    place_from_point,
)
from ecdlog.model import build_model
from ecdlog.algebra import build_extension


def random_effective_divisor(E, k, degree, rng):
    """Random effective divisor over k of the given degree (mixed place types)."""
    from ecdlog.divisor import Divisor
    coeffs = {}
    left = degree
    while left > 0:
        d = rng.randrange(1, left + 1)
        K = build_extension(k, d)
        P = E.random_point(K, rng)
        pl = place_from_point(E, k, P, K)
        if pl.degree > left:
            continue
        coeffs[pl] = coeffs.get(pl, 0) + 1
        left -= pl.degree
    return Divisor(E, k, coeffs)


def test_log_of_function_divisor_matches_residue_log():
    m = build_model(3, 5, r_override=1)
    E, k = m.curve, m.base_field
    g = m.find_generator()
    rng = random.Random(21)
    for _ in range(6):
        f = ECFunc(E, k, [k.rand(rng) for _ in range(3)],
                   [k.rand(rng) for _ in range(2)], [1])
        if f.is_zero():
            continue
        D = divisor_of_function(f)
        # diagram commutativity: Log(div f) = log(residue of normalized f)
        lhs = log_divisor(D, m, g)
        rhs = m.dlog_residue(m.residue_eval(f.normalized()), g) % m.ell
        assert lhs == rhs


def test_log_additivity():
    m = build_model(3, 5, r_override=1)
    E, k = m.curve, m.base_field
    g = m.find_generator()
    rng = random.Random(22)
    for _ in range(4):
        D1 = random_effective_divisor(E, k, 3, rng)
        D2 = random_effective_divisor(E, k, 2, rng)
        l1 = log_divisor(D1, m, g)
        l2 = log_divisor(D2, m, g)
        l12 = log_divisor(D1.add(D2), m, g)
        assert l12 == (l1 + l2) % m.ell


def test_log_miller_consistency():
    m = build_model(3, 5, r_override=1)
    E, k = m.curve, m.base_field
    g = m.find_generator()
    rng = random.Random(23)
    N = m.N
    P = E.random_point(k, rng)
    D = Divisor.of_point(E, k, P)
    # Log(N([P] - [0])) = N * Log([P] - [0])
    DP = D.sub(Divisor(E, k, {infinite_place(E, k): 1}))
    assert log_divisor(DP.scale(N), m, g) == (N * log_divisor(D, m, g)) % m.ell
