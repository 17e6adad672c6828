"""Places, divisors, divisors of functions, Miller-style function building.

A place over a level field k is a Galois orbit of geometric points: it is
keyed canonically by the minimal polynomial m(T) of the x-coordinate over k
together with either the y-coordinate expressed as a polynomial in the
x-generator (when the x-orbit already has full size) or a marker saying the
two y-branches over m are swapped by the top Frobenius step.  Keys are plain
tuples of packed field elements, so place equality and hashing never depend
on which ambient extension a point was first computed in.  Representative
points are materialized on demand in the canonical extension tower and the
lexicographically smallest conjugate is chosen.
"""

import random

from .algebra import (
    build_extension, embedding, coerce_down, factor_poly, roots_in_field,
    peval, pmul, pnorm, pdivmod, pgcd, pmonic, padd, psub, pmulc,
    _fp_gauss_solve,
)
from .curve import INF
from .ecfunc import ECFunc

_PLACE_CACHE = {}
_PBASIS_CACHE = {}


class NotPrincipal(Exception):
    pass


class Place:
    """A closed point of E over the level field k (or the infinite place)."""

    __slots__ = ("E", "k", "key", "degree", "_rep", "_trace", "_mx", "_ybr")

    def __new__(cls, E, k, key):
        cached = _PLACE_CACHE.get((E, k, key))
        if cached is not None:
            return cached
        self = object.__new__(cls)
        self.E = E
        self.k = k
        self.key = key
        if key == ("inf",):
            self.degree = 1
        else:
            d, mx, ybr = key
            self.degree = d
            self._mx = mx
            self._ybr = ybr
        self._rep = None
        self._trace = None
        _PLACE_CACHE[(E, k, key)] = self
        return self

    @property
    def is_infinite(self):
        return self.key == ("inf",)

    def __repr__(self):
        if self.is_infinite:
            return "Place(inf/%s)" % self.k
        return "Place(deg %d /%s)" % (self.degree, self.k)

    def __hash__(self):
        return hash((id(self.E), id(self.k), self.key))

    def __eq__(self, other):
        return self is other

    def sort_key(self):
        if self.is_infinite:
            return (0,)
        d, mx, ybr = self.key
        return (1, d, mx, ybr)

    # -- representatives ------------------------------------------------------

    def representative(self):
        """(K, point) with point the lex-least conjugate in the canonical tower."""
        if self._rep is None:
            if self.is_infinite:
                self._rep = (self.k, INF)
            else:
                d, mx, ybr = self.key
                k, E = self.k, self.E
                dx = len(mx) - 1
                F1 = build_extension(k, dx)
                rts = roots_in_field(F1, [embedding(k, F1)(c) for c in mx],
                                     random.Random(0x5EED ^ F1.card))
                x0 = min(r for r, _ in rts)
                if ybr[0] == "y":
                    emb = embedding(k, F1)
                    y0 = peval(F1, [emb(c) for c in ybr[1]], x0)
                    self._rep = (F1, (x0, y0))
                else:
                    F2 = build_extension(F1, 2)
                    e2 = embedding(F1, F2)
                    ys = self.E.y_coordinates(F2, e2(x0))
                    self._rep = (F2, (e2(x0), min(ys)))
        return self._rep

    def points(self):
        """All geometric points of the place over its representative field."""
        K, P = self.representative()
        if P is INF:
            return K, [INF]
        out = [P]
        cur = self.E.frobenius_point(P, 1, self.k, K)
        while cur != P:
            out.append(cur)
            cur = self.E.frobenius_point(cur, 1, self.k, K)
        assert len(out) == self.degree
        return K, out

    def trace_point(self):
        """Sum over the geometric points of the place, as a point over k."""
        if self._trace is None:
            if self.is_infinite:
                self._trace = INF
            else:
                K, pts = self.points()
                S = INF
                for P in pts:
                    S = self.E.add(K, S, P)
                if S is INF:
                    self._trace = INF
                else:
                    self._trace = (coerce_down(K, self.k, S[0]),
                                   coerce_down(K, self.k, S[1]))
        return self._trace

    def frobenius(self, e, base):
        """The conjugate place under the |base|^e-power Frobenius (key map)."""
        if self.is_infinite:
            return self
        d, mx, ybr = self.key
        k = self.k
        fx = tuple(k.frobenius(c, e, base) for c in mx)
        if ybr[0] == "y":
            fy = ("y", tuple(k.frobenius(c, e, base) for c in ybr[1]))
        else:
            fy = ybr
        return Place(self.E, k, (d, fx, fy))


def infinite_place(E, k):
    return Place(E, k, ("inf",))


def _power_basis_solver(k, F1, x0):
    """Express elements of F1 in the k-basis {1, x0, ..., x0^(d-1)}."""
    key = (k, F1, x0)
    sol = _PBASIS_CACHE.get(key)
    if sol is not None:
        return sol
    d = F1.deg // k.deg
    emb = embedding(k, F1)
    cols = []
    pw = 1
    for j in range(d):
        base = 1
        for i in range(k.deg):
            cols.append(F1.coeffs(F1.mul(emb(base), pw)))
            base = k.mul(base, k.gen)
        pw = F1.mul(pw, x0)
    n = F1.deg
    rows = [[cols[j][i] for j in range(n)] + [1 if t == i else 0 for t in range(n)]
            for i in range(n)]
    pivots = _fp_gauss_solve(F1.p, rows, n)
    assert len(pivots) == n

    def solve(x, _rows=rows, _piv=pivots, _F1=F1, _k=k, _d=d):
        digits = _F1.coeffs(x)
        vals = [0] * _F1.deg
        for rowi, c in enumerate(_piv):
            acc = 0
            row = _rows[rowi]
            for t in range(_F1.deg):
                if digits[t]:
                    acc += row[_F1.deg + t] * digits[t]
            vals[c] = acc % _F1.p
        out = []
        for j in range(_d):
            out.append(_k.from_coeffs(vals[j * _k.deg:(j + 1) * _k.deg]))
        return out

    _PBASIS_CACHE[key] = solve
    return solve


def place_from_point(E, k, P, K):
    """The place of P in E over k, for P a point with coordinates in K >= k."""
    if P is INF:
        return infinite_place(E, k)
    x, y = P
    xs = [x]
    cur = K.frobenius(x, 1, k)
    while cur != x:
        xs.append(cur)
        cur = K.frobenius(cur, 1, k)
    dx = len(xs)
    # minimal polynomial of x over k
    m = [1]
    for xi in xs:
        m = pmul(K, m, [K.neg(xi), 1])
    mk = tuple(coerce_down(K, k, c) for c in m)
    fullP = E.frobenius_point(P, dx, k, K)
    if fullP == P:
        # y lies in k(x): interpolate y as a polynomial in x through the orbit
        if dx == 1:
            ybr = ("y", (coerce_down(K, k, y),))
        else:
            ys = [y]
            curp = E.frobenius_point(P, 1, k, K)
            for _ in range(dx - 1):
                ys.append(curp[1])
                curp = E.frobenius_point(curp, 1, k, K)
            poly = _lagrange(K, xs, ys)
            ybr = ("y", tuple(coerce_down(K, k, c)
                              for c in poly + [0] * (dx - len(poly))))
        return Place(E, k, (dx, mk, ybr))
    return Place(E, k, (2 * dx, mk, ("conj",)))


def _lagrange(K, xs, ys):
    out = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = [1]
        den = 1
        for j, xj in enumerate(xs):
            if i == j:
                continue
            num = pmul(K, num, [K.neg(xj), 1])
            den = K.mul(den, K.sub(xi, xj))
        out = padd(K, out, pmulc(K, num, K.div(yi, den)))
    return out


class Divisor:
    """Formal integer combination of places over one level field."""

    __slots__ = ("E", "k", "coeffs")

    def __init__(self, E, k, coeffs=None):
        self.E = E
        self.k = k
        self.coeffs = {}
        if coeffs:
            for pl, n in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                if n:
                    self.coeffs[pl] = self.coeffs.get(pl, 0) + n
            self.coeffs = {pl: n for pl, n in self.coeffs.items() if n}

    @classmethod
    def of_point(cls, E, k, P, K=None, mult=1):
        return cls(E, k, {place_from_point(E, k, P, K or k): mult})

    def __repr__(self):
        return "Div(%s)" % {repr(p): n for p, n in self.items()}

    def items(self):
        return sorted(self.coeffs.items(), key=lambda t: t[0].sort_key())

    def degree(self):
        return sum(p.degree * n for p, n in self.coeffs.items())

    def affine_degree(self):
        return sum(p.degree * n for p, n in self.coeffs.items()
                   if not p.is_infinite)

    def add(self, other):
        out = dict(self.coeffs)
        for pl, n in other.coeffs.items():
            out[pl] = out.get(pl, 0) + n
        return Divisor(self.E, self.k, out)

    def neg(self):
        return Divisor(self.E, self.k, {p: -n for p, n in self.coeffs.items()})

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, c):
        return Divisor(self.E, self.k, {p: c * n for p, n in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, Divisor) and self.E is other.E
                and self.k is other.k and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.E), id(self.k),
                     tuple(sorted(((p.key, n) for p, n in self.coeffs.items())))))

    def is_effective(self):
        return all(n > 0 for n in self.coeffs.values())

    def sigma(self):
        """Sum on E of all geometric points with multiplicity, over k."""
        E, k = self.E, self.k
        S = INF
        for pl, n in self.coeffs.items():
            S = E.add(k, S, E.mul_point(k, n, pl.trace_point()))
        return S

    def without_infinity(self):
        return Divisor(self.E, self.k,
                       {p: n for p, n in self.coeffs.items() if not p.is_infinite})

    def geometric_points(self):
        """(K, [(point, mult)]) over a common splitting extension K."""
        E, k = self.E, self.k
        degs = [1]
        for pl in self.coeffs:
            if not pl.is_infinite:
                K, _ = pl.representative()
                degs.append(K.deg // k.deg)
        L = 1
        for d in degs:
            L = L * d // _gcd(L, d)
        Kbig = build_extension(k, L)
        out = []
        for pl, n in self.items():
            if pl.is_infinite:
                out.append((INF, n))
                continue
            Kp, _ = pl.representative()
            emb = embedding(Kp, Kbig)
            _, pts = pl.points()
            for P in pts:
                out.append(((emb(P[0]), emb(P[1])), n))
        return Kbig, out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# fibers of the x-map and divisors of functions
# ---------------------------------------------------------------------------

def x_fiber(E, k, m):
    """Places above the monic irreducible m(x) over k.

    Returns a list of (place, e) where e is the ramification index of the
    x-map at the place (2 exactly at 2-torsion fibers), so that the divisor
    of the function m(x) is sum(e * deg(m)/?) ... concretely:
    div(m(x)) = sum e_i [P_i] - 2 deg(m) [infinity].
    """
    dm = len(m) - 1
    F1 = build_extension(k, dm)
    emb = embedding(k, F1)
    rts = roots_in_field(F1, [emb(c) for c in m], random.Random(0xF1B ^ F1.card))
    x0 = min(r for r, _ in rts)
    ys = E.y_coordinates(F1, x0)
    if len(ys) == 2:
        solver = _power_basis_solver(k, F1, x0)
        out = []
        for y0 in ys:
            ypoly = tuple(solver(y0))
            out.append((Place(E, k, (dm, tuple(m), ("y", ypoly))), 1))
        return out
    if len(ys) == 1:
        solver = _power_basis_solver(k, F1, x0)
        ypoly = tuple(solver(ys[0]))
        return [(Place(E, k, (dm, tuple(m), ("y", ypoly))), 2)]
    return [(Place(E, k, (2 * dm, tuple(m), ("conj",))), 1)]


def divisor_of_function(f):
    """Exact divisor of a nonzero ECFunc; degree 0 and sigma = identity."""
    if f.is_zero():
        raise ValueError("zero function has no divisor")
    E, K = f.E, f.K
    k = K
    coeffs = {}

    def add_place(pl, n):
        if n:
            coeffs[pl] = coeffs.get(pl, 0) + n

    # split numerator into x-content g(x) and primitive part (A1 + B1 y);
    # after content removal at most one y-branch vanishes above any fiber
    A, B = list(f.A), list(f.B)
    if not B:
        g, A1, B1 = pmonic(k, A), [], []
    elif not A:
        g, A1, B1 = pmonic(k, B), [], [1]
    else:
        g = pgcd(k, A, B)
        A1 = pdivmod(k, A, g)[0]
        B1 = pdivmod(k, B, g)[0]
    if len(g) > 1:
        _, gfac = factor_poly(k, g)
        for m, mu in gfac:
            for pl, e in x_fiber(E, k, m):
                add_place(pl, mu * e)
    if B1 or len(A1) > 1:
        prim = ECFunc(E, k, A1, B1, [1], reduce=False)
        N = prim.norm_x()
        if len(N) > 1:
            _, nfac = factor_poly(k, pmonic(k, N))
            for m, mu in nfac:
                fib = x_fiber(E, k, m)
                if len(fib) == 2:
                    chosen = None
                    for pl, _e in fib:
                        d, mx, ybr = pl.key
                        F1 = build_extension(k, d)
                        embk = embedding(k, F1)
                        rts = roots_in_field(F1, [embk(c) for c in mx],
                                             random.Random(0x5EED ^ F1.card))
                        x0 = min(r for r, _ in rts)
                        y0 = peval(F1, [embk(c) for c in ybr[1]], x0)
                        val = peval(F1, [embk(c) for c in A1], x0)
                        val = F1.add(val, F1.mul(
                            peval(F1, [embk(c) for c in B1], x0), y0))
                        if val == 0:
                            chosen = pl
                            break
                    assert chosen is not None, "no vanishing branch found"
                    add_place(chosen, mu)
                elif fib[0][1] == 2:
                    # ramified (2-torsion) fiber
                    add_place(fib[0][0], mu)
                else:
                    # inert fiber: one place containing both branches
                    assert mu % 2 == 0, "inert fiber with odd multiplicity"
                    add_place(fib[0][0], mu // 2)
    # denominator
    C = list(f.C)
    if len(C) > 1:
        _, cfac = factor_poly(k, C)
        for m, mu in cfac:
            for pl, e in x_fiber(E, k, m):
                add_place(pl, -mu * e)
    # infinity balances the degree; cross-check against the pole-order formula
    aff = sum(pl.degree * n for pl, n in coeffs.items())
    add_place(infinite_place(E, k), -aff)
    assert f.ord_at_infinity() == -aff, "fiber multiplicities inconsistent"
    return Divisor(E, k, coeffs)


# ---------------------------------------------------------------------------
# norms, translations, conjugates
# ---------------------------------------------------------------------------

def norm_place(pl, sub):
    """(place over sub, multiplicity) image of the norm of a single place."""
    E, k = pl.E, pl.k
    if pl.is_infinite:
        return infinite_place(E, sub), k.deg // sub.deg
    K, P = pl.representative()
    npl = place_from_point(E, sub, P, K)
    mult = pl.degree * (k.deg // sub.deg) // npl.degree
    return npl, mult


def norm_divisor(D, sub):
    """Galois-conjugate sum of D down to the subfield sub, regrouped."""
    out = {}
    for pl, n in D.coeffs.items():
        npl, mult = norm_place(pl, sub)
        out[npl] = out.get(npl, 0) + n * mult
    return Divisor(D.E, sub, out)


def translate_divisor(D, R):
    """Pullback divisor: each point P of D is replaced by P + R (R over k)."""
    if R is INF:
        return D
    E, k = D.E, D.k
    out = {}
    for pl, n in D.coeffs.items():
        if pl.is_infinite:
            npl = place_from_point(E, k, R, k)
        else:
            K, P = pl.representative()
            emb = embedding(k, K)
            RK = (emb(R[0]), emb(R[1]))
            npl = place_from_point(E, k, E.add(K, P, RK), K)
        out[npl] = out.get(npl, 0) + n
    return Divisor(E, k, out)


def negate_divisor_points(D):
    E, k = D.E, D.k
    out = {}
    for pl, n in D.coeffs.items():
        if pl.is_infinite:
            npl = pl
        else:
            K, P = pl.representative()
            npl = place_from_point(E, k, E.neg(K, P), K)
        out[npl] = out.get(npl, 0) + n
    return Divisor(E, k, out)


def frobenius_divisor(D, e, base):
    return Divisor(D.E, D.k,
                   {pl.frobenius(e, base): n for pl, n in D.coeffs.items()})


# ---------------------------------------------------------------------------
# Miller-style construction: a function with a prescribed principal divisor
# ---------------------------------------------------------------------------

def _line_through(E, K, P, R):
    """ECFunc vanishing on P, R and -(P+R) (chord, tangent or vertical)."""
    a1, a2, a3, a4, a6 = E.coeffs_in(K)
    x1, y1 = P
    if R == E.neg(K, P):
        return ECFunc(E, K, [K.neg(x1), 1], [], [1])
    if P == R:
        den = K.add(K.smul(2, y1), K.add(K.mul(a1, x1), a3))
        num = K.add(K.smul(3, K.mul(x1, x1)),
                    K.add(K.smul(2, K.mul(a2, x1)), K.sub(a4, K.mul(a1, y1))))
        lam = K.div(num, den)
    else:
        x2, y2 = R
        lam = K.div(K.sub(y2, y1), K.sub(x2, x1))
    # y - y1 - lam (x - x1)
    c0 = K.sub(K.mul(lam, x1), y1)
    return ECFunc(E, K, [c0, K.neg(lam)], [1], [1])


def function_with_divisor(D, normalized=True):
    """A function over D.k with divisor exactly D; raises NotPrincipal.

    Built by chord-and-tangent accumulation over a splitting extension, then
    the coefficients are rescaled and coerced back down to the level field.
    """
    E, k = D.E, D.k
    if D.degree() != 0:
        raise NotPrincipal("divisor has nonzero degree")
    if D.sigma() is not INF:
        raise NotPrincipal("sigma does not vanish")
    if not D.without_infinity().coeffs:
        return ECFunc.const(E, k, 1)
    K, pts = D.geometric_points()
    worklist = []
    f = ECFunc.const(E, K, 1)
    for P, n in pts:
        if P is INF or n == 0:
            continue
        if n < 0:
            # [P] - [0] = -([-P] - [0]) + div(x - x(P))
            f = f.mul(ECFunc(E, K, [K.neg(P[0]), 1], [], [1]).pow(n))
            P = E.neg(K, P)
            n = -n
        worklist.extend([P] * n)
    worklist.sort()
    # repeatedly fold two points into their sum, accumulating line functions
    while len(worklist) >= 2:
        P = worklist.pop()
        R = worklist.pop()
        S = E.add(K, P, R)
        line = _line_through(E, K, P, R)
        f = f.mul(line)
        if S is not INF:
            f = f.div(ECFunc(E, K, [K.neg(S[0]), 1], [], [1]))
            worklist.append(S)
            worklist.sort()
    assert not worklist, "divisor reduction left a point (sigma was nonzero?)"
    if normalized:
        f = f.normalized()
    # coefficients are Galois-stable after normalization: coerce down
    if K is not k:
        down = lambda c: coerce_down(K, k, c)
        f = ECFunc(E, k, [down(c) for c in f.A], [down(c) for c in f.B],
                   [down(c) for c in f.C], reduce=False)
    return f


# ---------------------------------------------------------------------------
# the Log oracle
# ---------------------------------------------------------------------------

def log_divisor(D, model, g=None, ell=None):
    """Log of a divisor over F_q, via Miller + residue + generic dlog.

    This is the verification oracle: Log(D) = dlog(residue(f)) / N mod ell
    where div(f) = N*(D - deg(D)[infinity]), f normalized.  Requires the
    model's residue field to be small enough for the generic dlog.
    """
    if ell is None:
        ell = model.ell
    E = model.curve
    k = model.base_field
    if D.k is not k:
        raise ValueError("log oracle expects a divisor over the base field")
    N = model.N
    D0 = D.without_infinity()
    Dadj = D0.sub(Divisor(E, k, {infinite_place(E, k): D0.degree()}))
    f = function_with_divisor(Dadj.scale(N))
    r = model.residue_eval(f)
    x = model.dlog_residue(r, g)
    return (x * pow(N, -1, ell)) % ell
