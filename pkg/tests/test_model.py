import math
import random

import pytest

from ecdlog.algebra import embedding, prime_field, build_extension, peval
from ecdlog.curve import INF
from ecdlog.ecfunc import ECFunc
from ecdlog.model import (
    build_model, choose_parameters, verify_model, kernel_place,
    KernelPlaceError, ModelError, PoleAtKernelPlace, FieldModel,
)


def test_choose_parameters_formula():
    # exact-rational evaluations of the ceiling formula
    assert choose_parameters(2, 5)[0] == 8
    assert choose_parameters(3, 2, flags=frozenset())[0] == 2
    # override accepted
    assert choose_parameters(3, 5, r_override=1)[0] == 1
    # effective degree substitution when the order flags fail
    r, n_eff = choose_parameters(3, 4)
    assert n_eff == 20
    r, n_eff = choose_parameters(3, 5)
    assert n_eff == 5
    with pytest.raises(ModelError):
        choose_parameters(3, 1)


def small_model():
    return build_model(3, 5, r_override=1)


def test_build_model_and_verify():
    m = small_model()
    assert m.base_field.card == 3 and m.n == 5
    assert m.N == 5 and m.order == 242
    assert m.ell == 242 and m.s == 1
    rep = verify_model(m, random.Random(0), n_random=30)
    assert rep["all_pass"], rep


def test_fiber_census_counts():
    m = small_model()
    total, comps = m.fiber_census()
    assert total == m.N
    assert comps == m.N // m.n


def test_kernel_place_rejects_n1():
    m = small_model()
    with pytest.raises(KernelPlaceError):
        kernel_place(m.curve, m.Q, 1)


def test_corrupted_q_fails_congruence():
    m = small_model()
    bad = FieldModel(m.p, m.r, m.requested_n, m.n, m.curve,
                     m.curve.mul_point(m.base_field, 2, m.Q), m.I, m.eta)
    rep = verify_model(bad, random.Random(1), n_random=5)
    assert not rep["all_pass"]


def test_residue_eval_basics():
    m = small_model()
    E, K, F = m.curve, m.base_field, m.field
    # constants map to themselves
    c = 2
    assert m.residue_eval(ECFunc.const(E, K, c)) == embedding(K, F)(c)
    # multiples of I evaluate to zero
    fI = ECFunc(E, K, list(m.I), [], [1])
    assert m.residue_eval(fI) == 0
    # x evaluates to the x-coordinate of the place point
    assert m.residue_eval(ECFunc.x(E, K)) == m.place_point[0]
    # pole detection
    with pytest.raises(PoleAtKernelPlace):
        m.residue_eval(ECFunc(E, K, [1], [], list(m.I)))
    # cancellation: (I * x) / I has residue x
    fx = ECFunc(E, K, [0, 1], [], [1])
    g = ECFunc(E, K, pmul_list(K, list(m.I), [0, 1]), [], list(m.I))
    assert m.residue_eval(g) == m.place_point[0]


def pmul_list(K, A, B):
    from ecdlog.algebra import pmul
    return pmul(K, A, B)


def test_element_to_function_roundtrip():
    m = small_model()
    F = m.field
    rng = random.Random(2)
    for _ in range(25):
        w = F.rand(rng)
        f = m.element_to_function(w)
        assert m.residue_eval(f) == w


def test_oracle_dlog_roundtrip():
    m = small_model()
    F = m.field
    g = m.find_generator()
    rng = random.Random(3)
    assert m.dlog_residue(1, g) == 0
    assert m.dlog_residue(g, g) == 1
    for _ in range(10):
        x = rng.randrange(m.order)
        assert m.dlog_residue(F.pow(g, x), g) == x


def test_unit_log():
    m = small_model()
    K, F = m.base_field, m.field
    g = m.find_generator()
    for c in range(1, K.card):
        L = m.unit_log(c, g)
        assert F.pow(g, L) == embedding(K, F)(c)


def test_build_model_p5():
    m = build_model(5, 5, r_override=1)
    assert m.base_field.card == 5
    rep = verify_model(m, random.Random(4), n_random=10)
    assert rep["all_pass"], rep


def test_build_model_char2():
    # q = 16 carries a point of order 5
    m = build_model(2, 5, r_override=4)
    assert m.base_field.card == 16 and m.N % 5 == 0
    rep = verify_model(m, random.Random(5), n_random=10)
    assert rep["all_pass"], rep
