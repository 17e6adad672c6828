"""Degree 3-to-2 elimination: rewrite the Log of a degree-3 divisor over a
tower level in terms of Logs of degree <= 2 divisors over the same level.

For a candidate point P on the curve, the unique span polynomial
f = a3 x^(q+1) + a2 x^q + a1 x + a0 vanishing (after the Frobenius-twisted
substitution) on the input divisor is the kernel of a 3x4 linear system; the
elimination succeeds when f splits into linear factors over the level field,
which happens for roughly one candidate in q^3.
"""

import random

from .algebra import (
    build_extension, embedding, mat_kernel, roots_in_field, pmul, pnorm,
    peval,
)
from .curve import INF
from .ecfunc import ECFunc, compose_translation
from .divisor import (
    Divisor, divisor_of_function, place_from_point, translate_divisor, x_fiber,
    infinite_place, _power_basis_solver,
)
from .relation import Relation, RelationError, assemble_relation
from .traps import classify_traps3, exceptional_candidates_32, resolve_affine_points


class DegenerateKernel(Exception):
    pass


class PoleConfiguration(Exception):
    pass


class TrapInput(Exception):
    pass


class BudgetExhausted(Exception):
    def __init__(self, trials):
        super().__init__("sampling budget exhausted after %d trials" % trials)
        self.trials = trials


def vanishing_poly(model, k, D, P):
    """The span polynomial vanishing on D relative to P (kernel of the 3x4
    system with rows (u*v, v, u, 1) expanded over the level field)."""
    E = model.curve
    Fq = model.base_field
    Q = model.q_point_in(k)
    Pq = INF if P is INF else E.frobenius_point(P, 1, Fq, k)
    rows = []
    for pl, mult in D.items():
        if pl.is_infinite:
            raise ValueError("input divisor touches infinity")
        K1, R = pl.representative()
        embk = embedding(k, K1)
        Pk = P if P is INF else (embk(P[0]), embk(P[1]))
        Pqk = Pq if Pq is INF else (embk(Pq[0]), embk(Pq[1]))
        Qk = (embk(Q[0]), embk(Q[1]))
        U = E.add(K1, R, Pk)
        V = E.add(K1, E.add(K1, R, Qk), Pqk)
        if U is INF or V is INF:
            raise PoleConfiguration("P hits the pole configuration of D")
        u, v = U[0], V[0]
        entries = [K1.mul(u, v), v, u, 1]
        if K1 is k:
            rows.append(entries)
        else:
            solver = _power_basis_solver(k, K1, _canonical_root(k, K1, pl))
            cols = [solver(e) for e in entries]
            d = K1.deg // k.deg
            for t in range(d):
                rows.append([cols[j][t] for j in range(4)])
    ker = mat_kernel(k, rows, 4)
    if len(ker) != 1:
        raise DegenerateKernel("kernel dimension %d" % len(ker))
    # columns were ordered (a_{q+1}, a_q, a_1, a_0); reverse and normalize so
    # the highest nonzero coefficient is 1 (canonical representative)
    vec = ker[0][::-1]
    piv = max(i for i in range(4) if vec[i])
    inv = k.inv(vec[piv])
    return tuple(k.mul(inv, c) for c in vec)  # (a0, a1, aq, aq1)


def _canonical_root(k, K1, pl):
    d, mx, _ybr = pl.key
    emb = embedding(k, K1)
    rts = roots_in_field(K1, [emb(c) for c in mx], random.Random(0x5EED ^ K1.card))
    return min(r for r, _ in rts)


def relation_function_32(model, k, fc, P):
    """The curve function associated to a candidate: substitutes the
    Frobenius-twisted translations into the span polynomial."""
    E = model.curve
    Fq = model.base_field
    a0, a1c, aq, aq1 = fc
    Q = model.q_point_in(k)
    Pq = INF if P is INF else E.frobenius_point(P, 1, Fq, k)
    T = E.add(k, Q, Pq)
    x = ECFunc.x(E, k)
    tP = compose_translation(x, P)
    tT = compose_translation(x, T)
    G = ECFunc.const(E, k, a0)
    if a1c:
        G = G.add(tP.mulc(a1c))
    if aq:
        G = G.add(tT.mulc(aq))
    if aq1:
        G = G.add(tT.mul(tP).mulc(aq1))
    return G


def split_poly_32(k, fc, q):
    """Roots (with multiplicity) when the span polynomial splits over k;
    None when it does not split completely."""
    poly = pnorm([fc[0], fc[1]] + [0] * (q - 2) + [fc[2], fc[3]])
    deg = len(poly) - 1
    if deg < 1:
        return None, None
    rts = roots_in_field(k, poly)
    if sum(m for _, m in rts) != deg:
        return None, None
    return poly, rts


def build_relation_32(model, level, D, fc, P):
    """Exact relation from a split candidate; raises RelationError if the
    candidate does not actually produce one."""
    E = model.curve
    k = model.level_field(level)
    poly, rts = split_poly_32(k, fc, model.base_field.card)
    if rts is None:
        raise RelationError("candidate polynomial does not split")
    # check the re-multiplication f = lc * prod (x - r)
    prod = [poly[-1]]
    for r, m in rts:
        for _ in range(m):
            prod = pmul(k, prod, [k.neg(r), 1])
    if prod != poly:
        raise RelationError("root re-multiplication failed")
    G = relation_function_32(model, k, fc, P)
    H_parts = []
    H_lead = poly[-1]
    minusP = E.neg(k, P) if P is not INF else INF
    for r, m in rts:
        fib = Divisor(E, k, [(pl, e) for pl, e in x_fiber(E, k, [k.neg(r), 1])])
        delta = translate_divisor(fib, minusP)
        H_parts.append((delta, m))
        w = compose_translation(ECFunc.x(E, k), P).sub(ECFunc.const(E, k, r))
        H_lead = k.mul(H_lead, k.pow(w.lead(), m))
        if minusP is not INF:
            H_parts.append((Divisor.of_point(E, k, minusP), -2 * m))
    return assemble_relation(model, "3to2", level, k, D, {"f": fc, "P": P},
                             G, H_parts, H_lead)


def sample_point(E, k, rng):
    """Uniform random affine point of E(k) by rejection."""
    while True:
        x = k.rand(rng)
        ys = E.y_coordinates(k, x, rng)
        if not ys:
            continue
        if len(ys) == 2:
            return (x, ys[rng.randrange(2)])
        if rng.randrange(2) == 0:
            return (x, ys[0])


def eliminate_3to2(model, level, D, rng, policy, output_filter=None,
                   stats=None):
    """Find a verified relation for a degree-3 divisor at the given level.

    Samples candidate points until the span polynomial splits and the
    outputs pass the caller's trap filter; falls back to exhaustive
    enumeration of the curve when the budget runs out and the level field is
    small enough.
    """
    k = model.level_field(level)
    q = model.base_field.card
    if D.degree() != 3 or not D.is_effective():
        raise ValueError("expected an effective degree-3 divisor")
    if policy.check_input_traps:
        if classify_traps3(model, D, level, c=policy.c)["any"]:
            raise TrapInput("input divisor is a trap at level %d" % level)
    budget = policy.max_trials(q)
    trials = 0

    def try_P(P):
        nonlocal trials
        trials += 1
        try:
            fc = vanishing_poly(model, k, D, P)
        except (PoleConfiguration, DegenerateKernel):
            return None
        poly, rts = split_poly_32(k, fc, q)
        if rts is None:
            return None
        try:
            rel = build_relation_32(model, level, D, fc, P)
        except RelationError:
            return None
        if output_filter is not None and not output_filter(rel):
            return None
        return rel

    for _ in range(budget):
        rel = try_P(sample_point(model.curve, k, rng))
        if rel is not None:
            if stats is not None:
                stats["trials"] = trials
            return rel
    if k.card <= policy.enum_bound:
        for P in model.curve.enumerate_points(k):
            rel = try_P(P)
            if rel is not None:
                if stats is not None:
                    stats["trials"] = trials
                return rel
    raise BudgetExhausted(trials)


def exceptional_points_32(model, D):
    """Wrapper re-exporting the special candidates (see traps module)."""
    return exceptional_candidates_32(model, D)
