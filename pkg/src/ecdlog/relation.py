"""Relation records produced by the eliminations, and their verification.

A relation ties the Log of the norm of an input divisor over a tower level
to Logs of norms of lower-degree divisors over the same level.  It is stored
with the sampled witness data ((f, P) or (f, t)) so that a verifier can
rebuild everything deterministically; scalars coming from leading
coefficients are tracked exactly as an element of F_q (their logs live in
the small norm-one subgroup and are computed only at solve time).

Semantics, writing m = [k : F_q] and Y for the aggregated torsion-point
unknown (the implementation realizes Y as Log of the place of -Q):

    Log(N(input)) = sum coeff_j * Log(N(D_j)) + q_coeff * Y + log(scalar)
"""

from .divisor import (
    Divisor, divisor_of_function, infinite_place, log_divisor, place_from_point,
)
from .curve import INF
from .algebra import embedding, coerce_down, norm_element


class RelationError(Exception):
    pass


class Relation:
    __slots__ = ("kind", "level", "input", "witness", "outputs", "q_coeff",
                 "scalar", "cofactor")

    def __init__(self, kind, level, input_div, witness, outputs, q_coeff,
                 scalar, cofactor=None):
        self.kind = kind
        self.level = level
        self.input = input_div
        self.witness = witness
        self.outputs = outputs  # list of (Divisor over k, int coeff)
        self.q_coeff = q_coeff
        self.scalar = scalar    # element of F_q (norm of the unit part)
        self.cofactor = cofactor

    def __repr__(self):
        return "Relation(%s, level %d, %d outputs)" % (
            self.kind, self.level, len(self.outputs))


def assemble_relation(model, kind, level, k, D, witness, G, H_parts, H_lead):
    """Build the relation from exact divisor data.

    G is the curve function whose residue matches the product side; H_parts
    is the exact divisor of the product side as a list of (Divisor, coeff);
    H_lead its leading coefficient (in k).  The identity used is

      Log(N(div G)) + log N(lead G) = Log(N(div H)) + log N(lead H),

    rearranged so the input divisor D sits alone on the left.
    """
    E = model.curve
    Fq = model.base_field
    divG = divisor_of_function(G)
    # place-level coefficient map of divG - divH - D
    acc = {}
    for pl, n in divG.coeffs.items():
        acc[pl] = acc.get(pl, 0) + n
    for HD, c in H_parts:
        for pl, n in HD.coeffs.items():
            acc[pl] = acc.get(pl, 0) - c * n
    for pl, n in D.coeffs.items():
        acc[pl] = acc.get(pl, 0) - n
    # the input must be exactly covered: divG >= D on the affine part
    for pl, n in D.coeffs.items():
        if divG.coeffs.get(pl, 0) < n:
            raise RelationError("input divisor not contained in div(G)")
    # outputs: -acc, dropping the infinite place (its Log vanishes) and
    # converting the place of -Q into the aggregated unknown
    minusQ = place_from_point(E, k, E.neg(k, model.q_point_in(k)), k)
    m = k.deg // Fq.deg
    outputs = []
    q_coeff = 0
    for pl, n in sorted(acc.items(), key=lambda t: t[0].sort_key()):
        if n == 0 or pl.is_infinite:
            continue
        coeff = -n
        if pl is minusQ:
            q_coeff += coeff * m
            continue
        outputs.append((Divisor(E, k, {pl: 1}), coeff))
    scalar = norm_element(k, Fq, k.div(H_lead, G.lead()))
    return Relation(kind, level, D, witness, outputs, q_coeff, scalar,
                    cofactor=divG.without_infinity().sub(D))


def verify_relation_log(rel, model, g):
    """Oracle check of a relation mod ell (norms down to F_q, Miller, BSGS)."""
    from .divisor import norm_divisor
    ell = model.ell
    Fq = model.base_field
    E = model.curve
    lhs = log_divisor(norm_divisor(rel.input, Fq), model, g)
    rhs = 0
    for D, c in rel.outputs:
        rhs = (rhs + c * log_divisor(norm_divisor(D, Fq), model, g)) % ell
    if rel.q_coeff:
        mq = place_from_point(E, Fq, E.neg(Fq, model.Q), Fq)
        Ydiv = Divisor(E, Fq, {mq: 1})
        rhs = (rhs + rel.q_coeff * log_divisor(Ydiv, model, g)) % ell
    rhs = (rhs + model.unit_log(rel.scalar, g)) % ell
    return lhs == rhs
