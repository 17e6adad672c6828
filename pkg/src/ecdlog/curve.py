"""Elliptic curves in generalized Weierstrass form over the field layer.

Points are `None` (the point at infinity) or `(x, y)` tuples of packed field
elements; the field of definition of the coordinates is passed explicitly to
the group-law methods, and curve coefficients are embedded (and cached) into
whichever field the points live in.

Point counting is exact: full enumeration up to a configured bound, and
baby-step giant-step order finding in the Hasse interval above it, with an
enumeration fallback whenever the interval does not pin the order uniquely.
"""

import math
import random

from .algebra import embedding, roots_in_field
from .intutil import factorize

INF = None


class CurveSearchExhausted(Exception):
    pass


class EnumerationBoundExceeded(Exception):
    pass


class OrderFlagsUnsatisfiable(Exception):
    """The requested torsion order violates the configured order flags."""


ENUM_BOUND = 1 << 12


class Curve:
    """y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 over self.field."""

    def __init__(self, field, a1, a2, a3, a4, a6):
        self.field = field
        self.a = (a1, a2, a3, a4, a6)
        self._coeff_cache = {field: self.a}
        self._order = None
        self._order_factored = None
        b2 = field.add(field.mul(a1, a1), field.smul(4, a2))
        b4 = field.add(field.smul(2, a4), field.mul(a1, a3))
        b6 = field.add(field.mul(a3, a3), field.smul(4, a6))
        t1 = field.add(field.mul(field.mul(a1, a1), a6), field.smul(4, field.mul(a2, a6)))
        t2 = field.mul(a1, field.mul(a3, a4))
        t3 = field.mul(a2, field.mul(a3, a3))
        t4 = field.mul(a4, a4)
        b8 = field.sub(field.add(t1, field.sub(t3, t4)), t2)
        d = field.sub(
            field.sub(
                field.neg(field.mul(field.mul(b2, b2), b8)),
                field.smul(8, field.mul(b4, field.mul(b4, b4))),
            ),
            field.smul(27, field.mul(b6, b6)),
        )
        d = field.add(d, field.smul(9, field.mul(b2, field.mul(b4, b6))))
        self.discriminant = d

    def __repr__(self):
        return "Curve(%s; a=%s)" % (self.field, list(self.a))

    def key(self):
        return (self.field.p, self.field.deg) + self.a

    def coeffs_in(self, K):
        c = self._coeff_cache.get(K)
        if c is None:
            emb = embedding(self.field, K)
            c = tuple(emb(ai) for ai in self.a)
            self._coeff_cache[K] = c
        return c

    # -- group law ----------------------------------------------------------

    def is_on(self, K, P):
        if P is INF:
            return True
        a1, a2, a3, a4, a6 = self.coeffs_in(K)
        x, y = P
        lhs = K.mul(y, K.add(y, K.add(K.mul(a1, x), a3)))
        rhs = K.add(K.mul(x, K.mul(x, K.add(x, a2))), K.add(K.mul(a4, x), a6))
        return lhs == rhs

    def neg(self, K, P):
        if P is INF:
            return INF
        a1, _, a3, _, _ = self.coeffs_in(K)
        x, y = P
        return (x, K.neg(K.add(y, K.add(K.mul(a1, x), a3))))

    def add(self, K, P, R):
        if P is INF:
            return R
        if R is INF:
            return P
        a1, a2, a3, a4, a6 = self.coeffs_in(K)
        x1, y1 = P
        x2, y2 = R
        if x1 == x2:
            if R == self.neg(K, P):
                return INF
            # x1 == x2 and R != -P force R == P: doubling, and P is not
            # 2-torsion so the tangent denominator is nonzero
            den = K.add(K.smul(2, y1), K.add(K.mul(a1, x1), a3))
            num = K.add(
                K.smul(3, K.mul(x1, x1)),
                K.add(K.smul(2, K.mul(a2, x1)), K.sub(a4, K.mul(a1, y1))),
            )
            lam = K.div(num, den)
        else:
            lam = K.div(K.sub(y2, y1), K.sub(x2, x1))
        x3 = K.sub(K.add(K.mul(lam, lam), K.mul(a1, lam)), K.add(a2, K.add(x1, x2)))
        y3 = K.sub(K.mul(lam, K.sub(x1, x3)), K.add(y1, K.add(K.mul(a1, x3), a3)))
        return (x3, y3)

    def sub_pts(self, K, P, R):
        return self.add(K, P, self.neg(K, R))

    def mul_point(self, K, n, P):
        if n < 0:
            return self.mul_point(K, -n, self.neg(K, P))
        R = INF
        while n:
            if n & 1:
                R = self.add(K, R, P)
            P = self.add(K, P, P)
            n >>= 1
        return R

    def frobenius_point(self, P, e, base, K=None):
        """Coordinate map (x, y) -> (x^(|base|^e), y^(|base|^e)) in field K."""
        if P is INF:
            return INF
        if K is None:
            K = self.field
        x, y = P
        return (K.frobenius(x, e, base), K.frobenius(y, e, base))

    # -- point solving and enumeration ---------------------------------------

    def y_coordinates(self, K, x, rng=None):
        """All y with (x, y) on the curve, as a list (length 0, 1 or 2)."""
        a1, a2, a3, a4, a6 = self.coeffs_in(K)
        b = K.add(K.mul(a1, x), a3)
        rhs = K.add(K.mul(x, K.mul(x, K.add(x, a2))), K.add(K.mul(a4, x), a6))
        return [r for r, _ in solve_quadratic(K, b, K.neg(rhs))]

    def enumerate_points(self, K=None):
        """All points over K, infinity first; quadratic-solver tables built once."""
        if K is None:
            K = self.field
        a1, a2, a3, a4, a6 = self.coeffs_in(K)
        pts = [INF]
        if K.p == 2:
            # y^2 + b y = c with b = a1 x + a3: if b != 0, y = b*u with
            # u^2 + u = c / b^2; build the Artin-Schreier table once
            as_table = {}
            for u in K.all_elements():
                v = K.add(K.mul(u, u), u)
                as_table.setdefault(v, []).append(u)
            for x in K.all_elements():
                b = K.add(K.mul(a1, x), a3)
                c = K.add(K.mul(x, K.mul(x, K.add(x, a2))), K.add(K.mul(a4, x), a6))
                if b == 0:
                    y = K.pow(c, K.card // 2)  # unique square root
                    pts.append((x, y))
                else:
                    d = K.div(c, K.mul(b, b))
                    for u in as_table.get(d, ()):
                        pts.append((x, K.mul(b, u)))
        else:
            sq = {}
            for u in K.all_elements():
                sq.setdefault(K.mul(u, u), []).append(u)
            inv2 = K.inv(2 % K.p if K.p > 2 else 1)
            for x in K.all_elements():
                b = K.add(K.mul(a1, x), a3)
                c = K.add(K.mul(x, K.mul(x, K.add(x, a2))), K.add(K.mul(a4, x), a6))
                # (y + b/2)^2 = c + b^2/4
                h = K.mul(b, inv2)
                d = K.add(c, K.mul(h, h))
                for u in sq.get(d, ()):
                    pts.append((x, K.sub(u, h)))
        return pts

    def random_point(self, K, rng):
        while True:
            x = K.rand(rng)
            ys = self.y_coordinates(K, x, rng)
            if ys:
                return (x, rng.choice(ys))

    # -- order computations ---------------------------------------------------

    def point_order(self, K, P, group_order, factored=None):
        if P is INF:
            return 1
        if factored is None:
            factored = factorize(group_order)
        o = group_order
        for p, e in factored.items():
            for _ in range(e):
                if self.mul_point(K, o // p, P) is INF:
                    o //= p
                else:
                    break
        return o

    def group_order(self, enum_bound=ENUM_BOUND):
        """|E(F_q)| over the definition field, exact."""
        if self._order is not None:
            return self._order
        K = self.field
        q = K.card
        if q <= enum_bound:
            n = len(self.enumerate_points(K))
        else:
            n = self._order_bsgs(enum_bound)
        assert abs(n - (q + 1)) <= 2 * math.isqrt(q) + 1
        self._order = n
        self._order_factored = factorize(n)
        return n

    def _order_bsgs(self, enum_bound):
        K = self.field
        q = K.card
        lo = q + 1 - 2 * math.isqrt(q)
        hi = q + 1 + 2 * math.isqrt(q)
        rng = random.Random(0x0D ^ hash(self.key()))
        L = 1
        for _ in range(12):
            P = self.random_point(K, rng)
            # all m in [lo, hi] with m*P = INF, via BSGS over the interval
            width = hi - lo + 1
            m0 = math.isqrt(width) + 1
            baby = {}
            R = INF
            for j in range(m0):
                baby.setdefault(R, j)
                R = self.add(K, R, P)
            base = self.mul_point(K, lo, P)
            giant = self.neg(K, self.mul_point(K, m0, P))
            matches = []
            cur = base
            for i in range(m0 + 1):
                j = baby.get(cur)
                if j is not None and lo + i * m0 + j <= hi:
                    matches.append(lo + i * m0 + j)
                cur = self.add(K, cur, giant)
            mgcd = 0
            for m in matches:
                mgcd = math.gcd(mgcd, m)
                for m2 in matches:
                    mgcd = math.gcd(mgcd, abs(m - m2)) if m != m2 else mgcd
            ordP = self.point_order(K, P, mgcd) if mgcd else 0
            if ordP:
                L = L * ordP // math.gcd(L, ordP)
            cands = [m for m in range(lo + (-lo) % L, hi + 1, L)] if L > 1 else []
            if len(cands) == 1:
                return cands[0]
        if q <= (1 << 16):
            return len(self.enumerate_points(K))
        raise EnumerationBoundExceeded("group order not determined for q=%d" % q)

    def group_order_ext(self, m):
        """|E(F_{q^m})| from the trace recursion."""
        q = self.field.card
        t1 = q + 1 - self.group_order()
        t_prev, t_cur = 2, t1
        for _ in range(m - 1):
            t_prev, t_cur = t_cur, t1 * t_cur - q * t_prev
        return q ** m + 1 - t_cur

    def is_ordinary(self):
        t = self.field.card + 1 - self.group_order()
        return t % self.field.p != 0


class NoSuchPoint(Exception):
    pass


def find_point_of_order(E, n, rng=None):
    """A point of exact order n on E over its definition field.

    Returns INF for n == 1; raises NoSuchPoint when no point of order n
    exists.  Deterministic for enumerable groups.
    """
    if n == 1:
        return INF
    K = E.field
    N = E.group_order()
    if N % n != 0:
        raise NoSuchPoint("n does not divide the group order")
    fN = E._order_factored
    if K.card <= ENUM_BOUND:
        for P in E.enumerate_points(K):
            if P is INF:
                continue
            o = E.point_order(K, P, N, fN)
            if o % n == 0:
                Q = E.mul_point(K, o // n, P)
                assert E.point_order(K, Q, N, fN) == n
                return Q
        raise NoSuchPoint("no point of order %d" % n)
    if rng is None:
        rng = random.Random(0xF1 ^ hash(E.key()) ^ n)
    for _ in range(256):
        P = E.random_point(K, rng)
        o = E.point_order(K, P, N, fN)
        if o % n == 0:
            return E.mul_point(K, o // n, P)
    raise NoSuchPoint("no point of order %d found by sampling" % n)


def order_flags_ok(n, flags):
    """flags is a subset of {"not_power_of_two", "not_23_smooth"}."""
    if "not_power_of_two" in flags and n & (n - 1) == 0:
        return False
    if "not_23_smooth" in flags:
        m = n
        for p in (2, 3):
            while m % p == 0:
                m //= p
        if m == 1:
            return False
    return True


def curve_search(q_field, n, flags=frozenset(), enum_bound=ENUM_BOUND):
    """First ordinary curve over q_field with a rational point of exact order n.

    Enumeration order: short Weierstrass (a1=a3=0) lexicographic in odd
    characteristic; the a1=1, a3=a4=0 family first in characteristic 2, then
    the general form.  Deterministic.
    """
    if n < 2:
        raise ValueError("torsion order must be >= 2")
    if not order_flags_ok(n, flags):
        raise OrderFlagsUnsatisfiable("order %d violates flags %s" % (n, set(flags)))
    K = q_field
    q = K.card
    if n > q + 1 + 2 * math.isqrt(q):
        raise CurveSearchExhausted("order %d exceeds the Hasse bound" % n)

    def candidates():
        if K.p == 2:
            for i2 in range(K.card):
                for i6 in range(K.card):
                    yield (1, K.element_from_index(i2), 0, 0, K.element_from_index(i6))
            for i1 in range(K.card):
                for i2 in range(K.card):
                    for i3 in range(K.card):
                        for i4 in range(K.card):
                            for i6 in range(K.card):
                                yield tuple(K.element_from_index(i)
                                            for i in (i1, i2, i3, i4, i6))
        else:
            for i2 in range(K.card):
                for i4 in range(K.card):
                    for i6 in range(K.card):
                        yield (0, K.element_from_index(i2), 0,
                               K.element_from_index(i4), K.element_from_index(i6))

    for a in candidates():
        E = Curve(K, *a)
        if E.discriminant == 0:
            continue
        try:
            N = E.group_order(enum_bound)
        except EnumerationBoundExceeded:
            raise
        if N % n != 0 or not E.is_ordinary():
            continue
        try:
            Q = find_point_of_order(E, n)
        except NoSuchPoint:
            continue
        return E, Q
    raise CurveSearchExhausted("no ordinary curve with a point of order %d over %s"
                               % (n, K))
