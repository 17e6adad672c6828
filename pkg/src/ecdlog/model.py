"""Construction and validation of the curve-based residue-field model.

The target field F_{q^n} is realized as the residue field of a degree-n
place on an ordinary elliptic curve E/F_q carrying a rational point Q of
order n: the place is a component of the fiber {P : phi_q(P) = P + Q} of
Frobenius-minus-identity, so that on the residue field the q-power Frobenius
acts as translation by Q.  Elements of F_{q^n} are polynomials in the
x-coordinate of the place (with a y-term only in the degenerate fallback
representation), which makes "lift a field element to a curve function"
trivial and exact.
"""

import math
import random

from .algebra import (
    prime_field, build_extension, composite_field, embedding, coerce_down,
    factor_poly, pinvmod, pmod, pmonic, pnorm, pmul, padd, psub, pmulc,
    pdivmod, roots_in_field,
    peval, pdeg, is_irreducible, multiplicative_order,
)
from .curve import (
    Curve, INF, curve_search, find_point_of_order, order_flags_ok,
    OrderFlagsUnsatisfiable, CurveSearchExhausted,
)
from .ecfunc import ECFunc, compose_translation, frobenius_compose
from .intutil import factorize, pohlig_hellman

DEFAULT_FLAGS = frozenset({"not_power_of_two", "not_23_smooth"})


class ModelError(Exception):
    pass


class PoleAtKernelPlace(Exception):
    pass


def choose_parameters(p, n, r_override=None, flags=DEFAULT_FLAGS):
    """Tower exponent r and the effective extension degree.

    r is the smallest integer with 4*p^r >= n^4 (exact integer comparison),
    unless overridden by the caller; the extension degree is replaced by 5n
    when n itself violates the order flags.
    """
    if n < 2:
        raise ModelError("extension degree must be >= 2")
    effective_n = n if order_flags_ok(n, flags) else 5 * n
    if r_override is not None:
        r = r_override
    else:
        r = 1
        while 4 * p ** r < effective_n ** 4:
            r += 1
    return r, effective_n


class KernelPlaceError(Exception):
    pass


def _translation_fiber_equations(E, Q):
    """The two y-reduced equations cutting out {P : phi_q(P) = P + Q}.

    Returns ((A1, B1), (A2, B2)) of x-polynomial pairs over F_q, standing
    for A + B*Y; generic points of the fiber away from x = x(Q) satisfy
    both.
    """
    K = E.field
    q = K.card
    a1, a2, a3, a4, a6 = E.coeffs_in(K)
    xQ, yQ = Q
    # helpers over the coordinate ring: pairs (A(x), B(x)) for A + B y
    G = [a6, a4, a2, 1]
    L = [a3, a1]

    def mulp(u, v):
        AA = pmul(K, u[0], v[0])
        BB = pmul(K, u[1], v[1])
        AB = padd(K, pmul(K, u[0], v[1]), pmul(K, v[0], u[1]))
        return (padd(K, AA, pmul(K, BB, G)), psub(K, AB, pmul(K, BB, L)))

    def addp(u, v):
        return (padd(K, u[0], v[0]), padd(K, u[1], v[1]))

    def con(c):
        return ([c] if c else [], [])

    def xpol(P):
        return (list(P), [])

    xq = ([0] * q + [1], [])
    # y^q in the coordinate ring
    yq = ([1], [])
    base = ([], [1])
    e = q
    while e:
        if e & 1:
            yq = mulp(yq, base)
        base = mulp(base, base)
        e >>= 1
    dx = xpol([xQ, K.neg(1)])          # x_Q - x
    dy = addp(con(yQ), ([], [K.p - 1]))  # y_Q - y
    # F1 = x^q (xQ-x)^2 - (yQ-y)^2 - a1 (yQ-y)(xQ-x) + (a2+x+xQ)(xQ-x)^2
    dx2 = mulp(dx, dx)
    t = mulp(xq, dx2)
    t = addp(t, (pneg_list(K, mulp(dy, dy)[0]), pneg_list(K, mulp(dy, dy)[1])))
    u = mulp(dy, dx)
    t = addp(t, (pmulc(K, u[0], K.neg(a1)), pmulc(K, u[1], K.neg(a1))))
    t = addp(t, mulp(xpol([K.add(a2, xQ), 1]), dx2))
    F1 = t
    # F2 = y^q (xQ-x) - (yQ-y)(x - x^q) + (y + a3 + a1 x^q)(xQ-x)
    xminusxq = ([0, 1] + [0] * (q - 2) + [K.neg(1)], [])
    t2 = mulp(yq, dx)
    w = mulp(dy, xminusxq)
    t2 = addp(t2, (pneg_list(K, w[0]), pneg_list(K, w[1])))
    v = addp(addp(con(a3), ([], [1])), (pmulc(K, [0] * q + [1], a1), []))
    t2 = addp(t2, mulp(v, dx))
    F2 = t2
    return F1, F2


def pneg_list(K, A):
    return [K.neg(c) for c in A]


def kernel_place(E, Q, n):
    """One degree-n component of the Frobenius-translation fiber.

    Returns (I, eta): I monic irreducible of degree n over F_q, and eta a
    polynomial with y = eta(x) on the component.  Components whose
    x-coordinate generates only a subfield are discarded; raises
    KernelPlaceError when no component is usable.
    """
    if n < 2:
        raise KernelPlaceError("model requires n > 1")
    K = E.field
    (A1, B1), (A2, B2) = _translation_fiber_equations(E, Q)
    R = psub(K, pmul(K, A1, B2), pmul(K, A2, B1))
    pnorm(R)
    if not R:
        raise KernelPlaceError("degenerate fiber equations")
    _, facs = factor_poly(K, pmonic(K, R))
    Fc = build_extension(K, n)
    embc = embedding(K, Fc)
    for m, _mu in facs:
        if pdeg(m) != n:
            continue
        eta = None
        for (Ai, Bi) in ((A1, B1), (A2, B2)):
            Bm = pmod(K, Bi, m)
            if not pnorm(list(Bm)):
                continue
            try:
                inv = pinvmod(K, Bm, m)
            except ZeroDivisionError:
                continue
            eta = pmod(K, pmul(K, pneg_list(K, pmod(K, Ai, m)), inv), m)
            break
        if eta is None:
            continue
        # verify the defining condition on the reconstructed point
        rts = [r for r, _ in roots_in_field(Fc, [embc(c) for c in m],
                                           random.Random(0x5EED ^ Fc.card))]
        x0 = min(rts)
        y0 = peval(Fc, [embc(c) for c in eta], x0)
        P = (x0, y0)
        if not E.is_on(Fc, P):
            continue
        QF = (embc(Q[0]), embc(Q[1]))
        if E.frobenius_point(P, 1, K, Fc) != E.add(Fc, P, QF):
            continue
        return list(m), list(eta)
    raise KernelPlaceError("no degree-%d component with rational y found" % n)


class FieldModel:
    """The assembled model: curve, torsion point, kernel place, residue field."""

    def __init__(self, p, r, requested_n, n, E, Q, I, eta):
        self.p = p
        self.r = r
        self.requested_n = requested_n
        self.n = n
        self.curve = E
        self.base_field = E.field
        self.Q = Q
        self.I = tuple(I)
        self.eta = tuple(eta)
        self.N = E.group_order()
        K = E.field
        self.field = composite_field(K, list(I),
                                     name="F_%d^%d" % (p, r * n))
        x0 = self.field.parent_root
        embq = embedding(K, self.field)
        y0 = peval(self.field, [embq(c) for c in eta], x0)
        self.place_point = (x0, y0)
        order = K.card ** n - 1
        self.order = order
        self.fact_order = factorize(order)
        fN = factorize(self.N)
        ell = 1
        s = 1
        for prm, e in self.fact_order.items():
            if prm in fN:
                s *= prm ** e
            else:
                ell *= prm ** e
        self.ell = ell
        self.s = s
        self.fact_ell = {prm: e for prm, e in self.fact_order.items()
                         if prm not in fN}
        self.fact_s = {prm: e for prm, e in self.fact_order.items() if prm in fN}
        self.fallback_repr = False
        self._gen = None

    def __repr__(self):
        return "FieldModel(p=%d, q=%d, n=%d, N=%d, ell=%d)" % (
            self.p, self.base_field.card, self.n, self.N, self.ell)

    def level_field(self, i):
        """The tower level F_{q^(2^i)}, built as iterated quadratic steps."""
        k = self.base_field
        for _ in range(i):
            k = build_extension(k, 2)
        return k

    def q_point_in(self, K):
        emb = embedding(self.base_field, K)
        return (emb(self.Q[0]), emb(self.Q[1]))

    # -- residue arithmetic ----------------------------------------------------

    def element_to_function(self, w):
        """ECFunc over F_q (a polynomial in x) whose residue is w."""
        coeffs = self.field._to_rep(w)
        return ECFunc(self.curve, self.base_field, pnorm(list(coeffs)), [], [1])

    def residue_eval(self, f):
        """Value of f at the kernel place, an element of the residue field.

        Handles the case where the canonical denominator vanishes along the
        place by cancelling powers of I against the numerator (at most one
        y-branch of the primitive numerator vanishes, so the conjugate trick
        ends the recursion).
        """
        K = self.base_field
        F = self.field
        if f.K is not K:
            raise ValueError("residue evaluation expects a function over F_q")
        emb = embedding(K, F)
        x0, y0 = self.place_point
        I = list(self.I)

        def val_poly(P):
            return peval(F, [emb(c) for c in P], x0)

        C = list(f.C)
        s = 0
        while True:
            q, rem = pdivmod(K, C, I)
            if rem:
                break
            C = q
            s += 1
        cval = val_poly(C)
        if s == 0:
            num = F.add(val_poly(f.A), F.mul(val_poly(f.B), y0))
            return F.div(num, cval)
        # strip I-content from the numerator
        A, B = list(f.A), list(f.B)
        t = 0
        while t < s:
            qa, ra = pdivmod(K, A, I) if A else ([], [])
            qb, rb = pdivmod(K, B, I) if B else ([], [])
            if (A and pnorm(list(ra))) or (B and pnorm(list(rb))):
                break
            A, B = qa, qb
            t += 1
        if t == s:
            num = F.add(val_poly(A), F.mul(val_poly(B), y0))
            return F.div(num, cval)
        prim = ECFunc(self.curve, K, A, B, [1], reduce=False)
        pval = F.add(val_poly(A), F.mul(val_poly(B), y0))
        if pval != 0:
            raise PoleAtKernelPlace("pole of order %d at the kernel place" % (s - t))
        # numerator vanishes on the place: cancel via the y-conjugate norm
        N = prim.norm_x()
        mu = 0
        while True:
            q, rem = pdivmod(K, N, I)
            if pnorm(list(rem)):
                break
            N = q
            mu += 1
        v = t + mu - s
        if v > 0:
            return 0
        if v < 0:
            raise PoleAtKernelPlace("pole of order %d at the kernel place" % (-v))
        a1, _, a3, _, _ = self.curve.coeffs_in(K)
        conjA = psub(K, A, pmul(K, B, [a3, a1]))
        conjB = pneg_list(K, B)
        conj_val = F.add(val_poly(conjA), F.mul(val_poly(conjB), y0))
        return F.div(val_poly(N), F.mul(cval, conj_val))

    # -- oracle dlog -------------------------------------------------------------

    def find_generator(self, rng=None):
        if self._gen is not None:
            return self._gen
        rng = rng or random.Random(0x6E ^ self.field.card)
        F = self.field
        while True:
            g = F.rand_nonzero(rng)
            if multiplicative_order(F, g, self.fact_order) == self.order:
                self._gen = g
                return g

    def dlog_residue(self, h, g=None):
        """Discrete log of h base g in the residue field (generic PH/BSGS)."""
        F = self.field
        if g is None:
            g = self.find_generator()
        x = pohlig_hellman(F.mul, F.inv, 1, F.pow, g, h, self.fact_order)
        if x is None:
            raise ModelError("oracle dlog failed (is g a generator?)")
        return x

    def unit_log(self, c, g):
        """log_g of an element of the base field F_q, embedded in the residue
        field; cheap because it lives in the order (q-1) subgroup."""
        K = self.base_field
        F = self.field
        if c == 0:
            raise ZeroDivisionError("log of zero")
        cemb = embedding(K, F)(c)
        if cemb == 1:
            return 0
        m = (self.order) // (K.card - 1)
        lam = F.pow(g, m)
        sub_ord = factorize(K.card - 1)
        j = pohlig_hellman(F.mul, F.inv, 1, F.pow, lam, cemb, sub_ord)
        if j is None:
            raise ModelError("base-field element outside the norm-one subgroup")
        return (j * m) % self.order

    # -- fiber census ------------------------------------------------------------

    def fiber_census(self):
        """Exhaustively count points with phi_q(P) = P + Q over F_{q^n}."""
        E = self.curve
        K = self.base_field
        F = self.field
        embq = embedding(K, F)
        QF = (embq(self.Q[0]), embq(self.Q[1]))
        count = 0
        for P in E.enumerate_points(F):
            if P is INF:
                continue
            if E.frobenius_point(P, 1, K, F) == E.add(F, P, QF):
                count += 1
        return count, count // self.n


def build_model(p, n, r_override=None, flags=DEFAULT_FLAGS, max_curves=64):
    """Assemble the model for F_{p^(r*n_eff)} deterministically."""
    r, n_eff = choose_parameters(p, n, r_override, flags)
    Fq = build_extension(prime_field(p), r)
    E, Q = curve_search(Fq, n_eff, flags=flags)
    tried = 0
    while True:
        try:
            I, eta = kernel_place(E, Q, n_eff)
            break
        except KernelPlaceError:
            tried += 1
            if tried >= max_curves:
                raise
            # another generator of <Q>
            j = tried + 1
            while math.gcd(j, n_eff) != 1:
                j += 1
            Q = E.mul_point(Fq, j, Q)
    return FieldModel(p, r, n, n_eff, E, Q, I, eta)


def verify_model(model, rng=None, n_random=100):
    """Check the defining congruence and the arithmetic bookkeeping."""
    rng = rng or random.Random(0xFEED)
    E = model.curve
    K = model.base_field
    F = model.field
    report = {}
    embq = embedding(K, F)
    QF = (embq(model.Q[0]), embq(model.Q[1]))
    P = model.place_point
    report["point_on_curve"] = E.is_on(F, P)
    report["frobenius_is_translation"] = (
        E.frobenius_point(P, 1, K, F) == E.add(F, P, QF))
    ok = True
    cur = P
    seen = set()
    for i in range(model.n):
        expect = E.add(F, P, E.mul_point(F, i, QF))
        cur_i = E.frobenius_point(P, i, K, F)
        ok = ok and (cur_i == expect) and (cur_i not in seen)
        seen.add(cur_i)
    ok = ok and E.frobenius_point(P, model.n, K, F) == P
    report["orbit_structure"] = ok
    report["place_degree"] = (pdeg(list(model.I)) == model.n
                              and is_irreducible(K, list(model.I)))
    # residue congruence f(phi(.)) == f(tau_Q(.)) at the place
    fs = [ECFunc.x(E, K), ECFunc.y(E, K),
          ECFunc.x(E, K).mul(ECFunc.y(E, K))]
    for _ in range(n_random):
        A = [K.rand(rng) for _ in range(rng.randrange(1, 4))]
        B = [K.rand(rng) for _ in range(rng.randrange(0, 3))]
        f = ECFunc(E, K, A, B, [1])
        if not f.is_zero():
            fs.append(f)
    cong = True
    for f in fs:
        lhs = model.residue_eval(frobenius_compose(f, 1, K))
        rhs = model.residue_eval(compose_translation(f, model.Q))
        cong = cong and (lhs == rhs)
    report["residue_congruence"] = cong
    # ring homomorphism on pole-free functions
    hom = True
    for _ in range(20):
        f = ECFunc(E, K, [K.rand(rng) for _ in range(3)],
                   [K.rand(rng) for _ in range(2)], [1])
        g = ECFunc(E, K, [K.rand(rng) for _ in range(2)],
                   [K.rand(rng)], [1])
        if f.is_zero() or g.is_zero():
            continue
        hom = hom and (model.residue_eval(f.mul(g))
                       == F.mul(model.residue_eval(f), model.residue_eval(g)))
        hom = hom and (model.residue_eval(f.add(g))
                       == F.add(model.residue_eval(f), model.residue_eval(g)))
    report["residue_homomorphism"] = hom
    report["ell_coprime_N"] = math.gcd(model.ell, model.N) == 1
    report["ell_divides_order"] = model.order % model.ell == 0
    report["order_splits"] = model.ell * model.s == model.order
    report["s_primes_divide_N"] = all(model.N % prm == 0 for prm in model.fact_s)
    report["ordinary"] = E.is_ordinary()
    report["all_pass"] = all(v for v in report.values())
    return report
