"""Trap predicates for the eliminations, including the leveled variants.

A degree-3 or degree-4 divisor is a trap when the corresponding elimination
is not guaranteed to produce a usable split point; membership is decided by
explicit point/line conditions, rank tests at the exceptional candidates,
and (for the leveled sets) Frobenius-twisted reductions to the base
predicates.  Divisors with repeated geometric points are flagged
conservatively: they lie in the closures anyway and never occur as
irreducible places in the descent.
"""

import math
import random

from .algebra import (
    build_extension, embedding, factor_poly, roots_in_field, peval, pdeg,
    pmonic, pmul, padd, psub, pmulc, pnorm, mat_det,
)
from .curve import INF
from .ecfunc import ECFunc


def _lcm(a, b):
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# duplication, two-torsion, halving
# ---------------------------------------------------------------------------

_DUP_CACHE = {}


def duplication_x(E):
    """(num, den) over E.field with x([2]P) = num(x)/den(x)."""
    cached = _DUP_CACHE.get(E)
    if cached is not None:
        return cached
    K = E.field
    a1, a2, a3, a4, a6 = E.coeffs_in(K)
    xf = ECFunc.x(E, K)
    yf = ECFunc.y(E, K)
    num = ECFunc(E, K, [a4, K.smul(2, a2), 3 % K.p], [K.neg(a1)], [1])
    den = ECFunc(E, K, [a3, a1], [2 % K.p], [1])
    lam = num.div(den)
    dup = lam.mul(lam).add(lam.mulc(a1)).sub(
        ECFunc.const(E, K, a2)).sub(xf).sub(xf)
    assert not dup.B, "x-coordinate of [2]P must be y-free"
    _DUP_CACHE[E] = (list(dup.A), list(dup.C))
    return _DUP_CACHE[E]


def halving_points(E, K, T):
    """(Kc, [P]) with 2P = T, all in one extension Kc of K.

    Returns every preimage (c of them on an ordinary curve: 4 in odd
    characteristic, 2 in characteristic 2), including the infinite one when
    T is itself 2-torsion.
    """
    num0, den0 = duplication_x(E)
    emb = embedding(E.field, K)
    num = [emb(c) for c in num0]
    den = [emb(c) for c in den0]
    if T is INF:
        # P in E[2]: affine x-roots of den plus the point at infinity
        quart = list(den)
    else:
        quart = psub(K, num, pmulc(K, den, T[0]))
    _, facs = factor_poly(K, pmonic(K, quart))
    L = 1
    for m, _mu in facs:
        L = _lcm(L, 2 * pdeg(m))
    Kc = build_extension(K, L) if L > 1 else K
    embc = embedding(K, Kc)
    Temb = T if T is INF else (embc(T[0]), embc(T[1]))
    rts = roots_in_field(Kc, [embc(c) for c in quart],
                         random.Random(0x2D1))
    out = []
    for x0, _mult in rts:
        for y0 in E.y_coordinates(Kc, x0):
            P = (x0, y0)
            if E.mul_point(Kc, 2, P) == Temb:
                out.append(P)
    if T is INF:
        out.append(INF)
    return Kc, out


def two_torsion_count(E):
    """Number of geometric 2-torsion points (4 if odd char, 2 if char 2)."""
    return 2 if E.field.p == 2 else 4


# ---------------------------------------------------------------------------
# exceptional candidates of the 3->2 elimination
# ---------------------------------------------------------------------------

def _qth_root(K, q, v):
    return K.pow(v, K.card // q)


def resolve_affine_points(D):
    """(K, [points]) with multiplicity expansion; rejects infinite support."""
    K, pts = D.geometric_points()
    out = []
    for P, n in pts:
        if P is INF:
            raise ValueError("divisor touches the point at infinity")
        if n < 0:
            raise ValueError("divisor is not effective")
        out.extend([P] * n)
    return K, out


def exceptional_candidates_32(model, D):
    """The special split candidates (f, P) with f = (x-beta)^q (x-alpha).

    For each of the three splittings D = D' + [D3] and both orientations,
    every P with 2P = -(D1+D2) (or 2P^(q) = -(D1+D2+2Q)) contributes one
    candidate.  Returns a list of dicts with a common field per candidate;
    degenerate configurations are skipped (fewer candidates signals a trap).
    """
    E = model.curve
    q = model.base_field.card
    Kb, pts = resolve_affine_points(D)
    if len(pts) != 3:
        raise ValueError("expected a degree-3 divisor")
    out = []
    for split_idx in range(3):
        D3 = pts[split_idx]
        D1, D2 = [pts[j] for j in range(3) if j != split_idx]
        for orientation in (0, 1):
            if orientation == 0:
                T = E.neg(Kb, E.add(Kb, D1, D2))
                Kc, halves = halving_points(E, Kb, T)
                Ps = halves
            else:
                embq = embedding(model.base_field, Kb)
                Q2 = E.mul_point(Kb, 2, (embq(model.Q[0]), embq(model.Q[1])))
                T = E.neg(Kb, E.add(Kb, E.add(Kb, D1, D2), Q2))
                Kc, halves = halving_points(E, Kb, T)
                # P with P^(q) = R
                Ps = [E.frobenius_point(R, -1, model.base_field, Kc)
                      if R is not INF else INF for R in halves]
            embc = embedding(Kb, Kc)
            d1, d2, d3 = [(embc(X[0]), embc(X[1])) for X in (D1, D2, D3)]
            embq = embedding(model.base_field, Kc)
            Qc = (embq(model.Q[0]), embq(model.Q[1]))
            for P in Ps:
                if orientation == 0:
                    A = E.add(Kc, P, d1)
                    Pq = E.frobenius_point(P, 1, model.base_field, Kc)
                    Bq = E.add(Kc, E.add(Kc, Pq, Qc), d3)
                else:
                    A = E.add(Kc, P, d3)
                    Pq = E.frobenius_point(P, 1, model.base_field, Kc)
                    Bq = E.add(Kc, E.add(Kc, Pq, Qc), d1)
                if A is INF or Bq is INF or P is INF:
                    # degenerate candidate (pole configuration)
                    continue
                alpha = A[0]
                betaq = Bq[0]
                beta = _qth_root(Kc, q, betaq)
                a0 = Kc.mul(betaq, alpha)
                fc = (a0, Kc.neg(betaq), Kc.neg(alpha), 1)
                out.append({
                    "field": Kc, "f": fc, "P": P, "alpha": alpha,
                    "beta": beta, "betaq": betaq,
                    "split": split_idx, "orientation": orientation,
                    "points": (d1, d2, d3),
                })
    return out


def count_distinct_candidates(model, cands):
    """Embed all candidates into one field and count distinct (f, P)."""
    if not cands:
        return 0
    lcm = 1
    for c in cands:
        lcm = _lcm(lcm, c["field"].deg)
    seen = set()
    for c in cands:
        K = c["field"]
        Kc = _common_field(K, lcm)
        emb = embedding(K, Kc)
        f = tuple(emb(v) for v in c["f"])
        P = c["P"] if c["P"] is INF else (emb(c["P"][0]), emb(c["P"][1]))
        seen.add((f, P))
    return len(seen)


_COMMON = {}


def _common_field(K, absdeg):
    from .algebra import prime_field
    key = (K.p, absdeg)
    F = _COMMON.get(key)
    if F is None:
        F = build_extension(prime_field(K.p), absdeg)
        _COMMON[key] = F
    return F


# ---------------------------------------------------------------------------
# base trap predicates
# ---------------------------------------------------------------------------

def _ecfunc_partials(h, P):
    """(dh/dx, dh/dy) of an ECFunc h = (A+By)/C at an affine point P."""
    K = h.K
    from .algebra import pdiff
    x0, y0 = P
    A, B, C = h.A, h.B, h.C
    Av, Bv, Cv = peval(K, A, x0), peval(K, B, x0), peval(K, C, x0)
    dA, dB, dC = (peval(K, pdiff(K, A), x0), peval(K, pdiff(K, B), x0),
                  peval(K, pdiff(K, C), x0))
    numv = K.add(Av, K.mul(Bv, y0))
    dnum = K.add(dA, K.mul(dB, y0))
    hx = K.div(K.sub(K.mul(dnum, Cv), K.mul(numv, dC)), K.mul(Cv, Cv))
    hy = K.div(Bv, Cv)
    return hx, hy


def _curve_partials(E, K, P):
    a1, a2, a3, a4, a6 = E.coeffs_in(K)
    x0, y0 = P
    ex = K.sub(K.mul(a1, y0),
               K.add(K.smul(3, K.mul(x0, x0)),
                     K.add(K.smul(2, K.mul(a2, x0)), a4)))
    ey = K.add(K.smul(2, y0), K.add(K.mul(a1, x0), a3))
    return ex, ey


def trap3_base(model, D, with_rank_test=True):
    """Membership report for the base degree-3 trap classes."""
    E = model.curve
    Fq = model.base_field
    K, pts = resolve_affine_points(D)
    if len(pts) != 3:
        raise ValueError("expected degree 3")
    embq = embedding(Fq, K)
    Q = (embq(model.Q[0]), embq(model.Q[1]))
    Q2 = E.mul_point(K, 2, Q)
    rep = {}
    rep["t30"] = len(set(pts)) < 3
    t31 = False
    t32 = False
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            sab = E.add(K, pts[a], pts[b])
            sab_q = E.frobenius_point(sab, 1, Fq, K)
            for c in range(3):
                if c == a:
                    continue
                if sab_q == E.add(K, E.add(K, pts[a], pts[c]), Q2):
                    t31 = True
        for c in range(3):
            if E.frobenius_point(pts[a], 1, Fq, K) == E.add(K, pts[c], Q):
                t32 = True
    rep["t31"] = t31
    rep["t32"] = t32
    rep["t33"] = False
    if with_rank_test and not (rep["t30"] or rep["t31"]):
        rep["t33"] = _t33_rank_test(model, D)
    rep["any"] = rep["t30"] or rep["t31"] or rep["t32"] or rep["t33"]
    return rep


def _t33_rank_test(model, D):
    """Singular at all exceptional candidates <=> member of the rank-test trap."""
    E = model.curve
    Fq = model.base_field
    cands = exceptional_candidates_32(model, D)
    if not cands:
        return True
    from .ecfunc import translation_functions
    for c in cands:
        K = c["field"]
        P = c["P"]
        if P is INF:
            continue
        beta, betaq = c["beta"], c["betaq"]
        ex, ey = _curve_partials(E, K, P)
        rows = [[0, 0, ex, ey]]
        embq = embedding(Fq, K)
        Qc = (embq(model.Q[0]), embq(model.Q[1]))
        Pq = E.frobenius_point(P, 1, Fq, K)
        singular_here = None
        for Dpt in c["points"]:
            tx, _ty = translation_functions(E, K, Dpt)
            u = E.add(K, Dpt, P)
            v = E.add(K, E.add(K, Dpt, Qc), Pq)
            if u is INF or v is INF:
                singular_here = False
                break
            ux, uy = _ecfunc_partials(tx, P)
            w = K.sub(v[0], betaq)
            rows.append([w, K.sub(u[0], beta), K.mul(ux, w), K.mul(uy, w)])
        if singular_here is False:
            return False
        if mat_det(K, rows) != 0:
            return False
    return True


def _line(K, P1, P2, E=None):
    """Projective coefficients (u0,u1,u2) of the line through P1, P2 in the
    (1 : x : y) plane; tangent when the points coincide."""
    x1, y1 = P1
    x2, y2 = P2
    if P1 != P2:
        return (K.sub(K.mul(x1, y2), K.mul(x2, y1)),
                K.sub(y1, y2), K.sub(x2, x1))
    ex, ey = _curve_partials(E, K, P1)
    # tangent: ex*(x - x1) + ey*(y - y1) = 0
    return (K.neg(K.add(K.mul(ex, x1), K.mul(ey, y1))), ex, ey)


def _concurrent(K, l1, l2, l3):
    return mat_det(K, [list(l1), list(l2), list(l3)]) == 0


_PAIRS4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def trap4_base(model, D):
    """Membership report for the base degree-4 trap classes."""
    E = model.curve
    Fq = model.base_field
    K, pts = resolve_affine_points(D)
    if len(pts) != 4:
        raise ValueError("expected degree 4")
    rep = {}
    if len(set(pts)) < 4:
        rep.update({"repeated": True, "t40": True, "t41": True, "t42": True,
                    "t43": True, "t44": True, "t45": True, "any": True})
        return rep
    rep["repeated"] = False
    embq = embedding(Fq, K)
    Q = (embq(model.Q[0]), embq(model.Q[1]))
    ptsQ = [E.add(K, P, Q) for P in pts]
    if any(P is INF for P in ptsQ):
        # translated point at infinity: line tests degenerate; flag
        rep.update({"t40": True, "t41": True, "t42": True, "t43": True,
                    "t44": True, "t45": True, "any": True})
        return rep
    lines = {pr: _line(K, pts[pr[0]], pts[pr[1]], E) for pr in _PAIRS4}
    linesQ = {pr: _line(K, ptsQ[pr[0]], ptsQ[pr[1]], E) for pr in _PAIRS4}
    lines_q = {pr: tuple(K.frobenius(c, 1, Fq) for c in lines[pr])
               for pr in _PAIRS4}

    def disjoint_triples():
        for i in range(6):
            for j in range(i + 1, 6):
                for k3 in range(j + 1, 6):
                    a, b, c = _PAIRS4[i], _PAIRS4[j], _PAIRS4[k3]
                    if set(a) & set(b) & set(c):
                        continue
                    yield a, b, c

    rep["t40"] = any(_concurrent(K, lines[a], lines[b], lines[c])
                     for a, b, c in disjoint_triples())
    rep["t41"] = any(_concurrent(K, linesQ[a], linesQ[b], linesQ[c])
                     for a, b, c in disjoint_triples())
    t42 = False
    t43 = False
    for a in _PAIRS4:
        for b in _PAIRS4:
            if a >= b:
                continue
            for c in _PAIRS4:
                if _concurrent(K, lines_q[a], lines_q[b], linesQ[c]):
                    t42 = True
                lq_a = tuple(K.frobenius(v, 1, Fq) for v in lines[c])
                if _concurrent(K, linesQ[a], linesQ[b], lq_a):
                    t43 = True
            if t42 and t43:
                break
    rep["t42"] = t42
    rep["t43"] = t43
    rep["t44"] = any(
        E.add(K, E.add(K, pts[a], pts[b]), pts[c]) is INF
        for a in range(4) for b in range(a + 1, 4) for c in range(b + 1, 4))
    rep["t45"] = _t45_test(model, K, pts, ptsQ, lines, linesQ)
    rep["any"] = any(rep[k] for k in ("t40", "t41", "t42", "t43", "t44", "t45"))
    return rep


def _t45_test(model, K, pts, ptsQ, lines, linesQ):
    """Rank-test trap of the 4->3 elimination, via the closed product
    formulas at each of the six exceptional pairs; degenerate reductions are
    treated as vanishing (conservative)."""
    E = model.curve
    Fq = model.base_field
    q = Fq.card
    for (j, k3) in _PAIRS4:
        m, n = [t for t in range(4) if t not in (j, k3)]
        u = lines[(j, k3)]
        vq = linesQ[(m, n)]
        v = tuple(_qth_root(K, q, c) for c in vq)

        def a_coords(t):
            x0, y0 = pts[t]
            a0 = K.add(v[0], K.add(K.mul(v[1], x0), K.mul(v[2], y0)))
            a1 = K.add(u[0], K.add(K.mul(u[1], x0), K.mul(u[2], y0)))
            return a0, a1, y0

        def b_coords(t):
            x0, y0 = ptsQ[t]
            b0 = K.add(vq[0], K.add(K.mul(vq[1], x0), K.mul(vq[2], y0)))
            b1 = K.add(K.frobenius(u[0], 1, Fq),
                       K.add(K.mul(K.frobenius(u[1], 1, Fq), x0),
                             K.mul(K.frobenius(u[2], 1, Fq), y0)))
            return b0, b1, y0

        a_m, b_m = a_coords(m), b_coords(m)
        a_n, b_n = a_coords(n), b_coords(n)
        a_j, b_j = a_coords(j), b_coords(j)
        a_k, b_k = a_coords(k3), b_coords(k3)
        # precondition determinant from the (j,k3) rows
        pre = K.sub(K.mul(K.mul(b_j[0], a_j[0]), K.mul(b_k[0], a_k[2])),
                    K.mul(K.mul(b_k[0], a_k[0]), K.mul(b_j[0], a_j[2])))
        if pre == 0:
            continue  # treated as vanishing at this pair
        D11 = K.mul(K.mul(b_m[1], b_n[1]),
                    K.sub(K.mul(a_m[0], a_n[1]), K.mul(a_n[0], a_m[1])))
        D12 = K.mul(K.mul(b_m[1], b_n[1]),
                    K.sub(K.mul(a_m[0], a_n[2]), K.mul(a_n[0], a_m[2])))
        D21 = K.sub(
            K.mul(K.mul(b_m[1], a_m[0]), K.mul(b_n[2], a_n[1])),
            K.mul(K.mul(b_n[1], a_n[0]), K.mul(b_m[2], a_m[1])))
        val = K.sub(K.mul(D11, K.pow(D12, q)), K.mul(K.pow(D11, q), D21))
        if val != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# leveled traps
# ---------------------------------------------------------------------------

def _pair_quad_in_t4(model, K, P1, P2, m):
    """[P1]+[P2]+[P1^F]+[P2^F] in the base degree-4 traps, F = q^(2^(m-1))."""
    from .divisor import Divisor, place_from_point
    E = model.curve
    Fq = model.base_field
    e = 2 ** (m - 1)
    P1f = E.frobenius_point(P1, e, Fq, K)
    P2f = E.frobenius_point(P2, e, Fq, K)
    pts = [P1, P2, P1f, P2f]
    if len(set(pts)) < 4:
        return True
    D = Divisor(E, K, [(place_from_point(E, K, P, K), 1) for P in pts])
    return trap4_base(model, D)["any"]


def _pair_triple_in_t3(model, K, P1, P2):
    from .divisor import Divisor, place_from_point
    E = model.curve
    P3 = E.neg(K, E.add(K, P1, P2))
    if P3 is INF or P1 == P2 or P1 == P3 or P2 == P3:
        return True
    D = Divisor(E, K, [(place_from_point(E, K, P, K), 1)
                       for P in (P1, P2, P3)])
    return trap3_base(model, D)["any"]


def pair_in_T3(model, K, P1, P2, i, c):
    """(P1, P2) in the leveled pair set T_3(i) with floor constant c."""
    for m in range(max(c, 1), i + 1):
        if _pair_quad_in_t4(model, K, P1, P2, m):
            return True
    if i - 1 >= c and _pair_triple_in_t3(model, K, P1, P2):
        return True
    return False


def pair_in_T4(model, K, P1, P2, i, c):
    if _pair_triple_in_t3(model, K, P1, P2):
        return True
    for m in range(max(c, 1), i + 1):
        if _pair_quad_in_t4(model, K, P1, P2, m):
            return True
    return False


def classify_traps3(model, D, level, c=2, with_rank_test=True):
    """Full membership report over the degree-3 trap classes at a level."""
    rep = trap3_base(model, D, with_rank_test=with_rank_test)
    rep["leveled"] = False
    if not rep["any"] and level >= c:
        K, pts = resolve_affine_points(D)
        leveled = True
        for a in range(3):
            for b in range(a + 1, 3):
                if not pair_in_T3(model, K, pts[a], pts[b], level, c):
                    leveled = False
                    break
            if not leveled:
                break
        rep["leveled"] = leveled
    rep["any"] = rep["any"] or rep["leveled"]
    return rep


def classify_traps4(model, D, level, c=2):
    rep = trap4_base(model, D)
    rep["leveled"] = False
    if not rep["any"] and level >= c:
        K, pts = resolve_affine_points(D)
        leveled = True
        for a in range(4):
            for b in range(a + 1, 4):
                if not pair_in_T4(model, K, pts[a], pts[b], level, c):
                    leveled = False
                    break
            if not leveled:
                break
        rep["leveled"] = leveled
    rep["any"] = rep["any"] or rep["leveled"]
    return rep
