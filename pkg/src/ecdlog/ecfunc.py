"""Rational functions on an elliptic curve in canonical (a(x)+b(x)y)/c(x) form.

The coordinate ring K[E] = K[x,y]/(curve) is represented by pairs of
univariate polynomials (A, B) standing for A(x) + B(x)*y; y^2 is reduced via
the curve equation.  A general function keeps a y-free denominator C(x)
(monic, gcd(A,B,C)=1), which is always reachable by rationalizing with the
y-conjugate.  Pole orders at the point at infinity follow from x having a
double and y a triple pole there; the leading coefficient is taken in the
expansion with respect to the uniformizer -x/y, in which x = t^-2(1+...) and
y = -t^-3(1+...).
"""

from .algebra import (
    padd, psub, pmul, pmulc, pneg, pdivmod, pgcd, pmonic, pnorm, peval,
    embedding,
)


class ECFunc:
    __slots__ = ("E", "K", "A", "B", "C")

    def __init__(self, E, K, A, B, C, reduce=True):
        self.E = E
        self.K = K
        if reduce:
            A, B, C = self._canonical(E, K, A, B, C)
        self.A = A
        self.B = B
        self.C = C

    @staticmethod
    def _canonical(E, K, A, B, C):
        A, B, C = pnorm(list(A)), pnorm(list(B)), pnorm(list(C))
        if not C:
            raise ZeroDivisionError("zero denominator")
        g = pgcd(K, pgcd(K, A, B) if (A or B) else C, C)
        if len(g) > 1:
            A = pdivmod(K, A, g)[0]
            B = pdivmod(K, B, g)[0]
            C = pdivmod(K, C, g)[0]
        if C[-1] != 1:
            lc = K.inv(C[-1])
            A, B, C = pmulc(K, A, lc), pmulc(K, B, lc), pmonic(K, C)
        return A, B, C

    # -- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, E, K, c):
        return cls(E, K, [c] if c else [], [], [1], reduce=False)

    @classmethod
    def x(cls, E, K):
        return cls(E, K, [0, 1], [], [1], reduce=False)

    @classmethod
    def y(cls, E, K):
        return cls(E, K, [], [1], [1], reduce=False)

    @classmethod
    def from_xpoly(cls, E, K, A):
        return cls(E, K, list(A), [], [1])

    def __repr__(self):
        return "ECFunc(A=%s,B=%s,C=%s)" % (self.A, self.B, self.C)

    def is_zero(self):
        return not self.A and not self.B

    def __eq__(self, other):
        return (isinstance(other, ECFunc) and self.E is other.E
                and self.K is other.K and self.A == other.A
                and self.B == other.B and self.C == other.C)

    def __hash__(self):
        return hash((id(self.E), id(self.K), tuple(self.A), tuple(self.B),
                     tuple(self.C)))

    # -- ring ops -------------------------------------------------------------

    def _curve_g(self):
        """x^3 + a2 x^2 + a4 x + a6 and a1 x + a3 over K."""
        K = self.K
        a1, a2, a3, a4, a6 = self.E.coeffs_in(K)
        return [a6, a4, a2, 1], [a3, a1]

    def _num_mul(self, A1, B1, A2, B2):
        """(A1+B1 y)(A2+B2 y) reduced: y^2 = G - (a1 x + a3) y."""
        K = self.K
        G, L = self._curve_g()
        AA = pmul(K, A1, A2)
        BB = pmul(K, B1, B2)
        AB = padd(K, pmul(K, A1, B2), pmul(K, A2, B1))
        A = padd(K, AA, pmul(K, BB, G))
        B = psub(K, AB, pmul(K, BB, L))
        return A, B

    def add(self, other):
        K = self.K
        A = padd(K, pmul(K, self.A, other.C), pmul(K, other.A, self.C))
        B = padd(K, pmul(K, self.B, other.C), pmul(K, other.B, self.C))
        return ECFunc(self.E, K, A, B, pmul(K, self.C, other.C))

    def neg(self):
        K = self.K
        return ECFunc(self.E, K, pneg(K, self.A), pneg(K, self.B), self.C,
                      reduce=False)

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        K = self.K
        A, B = self._num_mul(self.A, self.B, other.A, other.B)
        return ECFunc(self.E, K, A, B, pmul(K, self.C, other.C))

    def mulc(self, c):
        K = self.K
        return ECFunc(self.E, K, pmulc(K, self.A, c), pmulc(K, self.B, c),
                      self.C, reduce=False)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        K = self.K
        # 1/(A+By) = conj/(norm), conj = A - B(a1x+a3) - B y
        G, L = self._curve_g()
        conjA = psub(K, self.A, pmul(K, self.B, L))
        conjB = pneg(K, self.B)
        N, Bz = self._num_mul(self.A, self.B, conjA, conjB)
        assert not Bz, "norm must be y-free"
        return ECFunc(self.E, K, pmul(K, self.C, conjA),
                      pmul(K, self.C, conjB), N)

    def div(self, other):
        return self.mul(other.inv())

    def pow(self, n):
        if n < 0:
            return self.inv().pow(-n)
        r = ECFunc.const(self.E, self.K, 1)
        b = self
        while n:
            if n & 1:
                r = r.mul(b)
            b = b.mul(b)
            n >>= 1
        return r

    def norm_x(self):
        """The y-free product f * conj(f) as a polynomial in x (numerator),
        i.e. N(A+By), paired with C^2."""
        K = self.K
        G, L = self._curve_g()
        t = pmul(K, pmul(K, self.A, self.B), L)
        N = psub(K, psub(K, pmul(K, self.A, self.A), t),
                 pmul(K, pmul(K, self.B, self.B), G))
        return N

    # -- geometry at infinity ---------------------------------------------------

    def num_pole_order(self):
        """Pole order of A + B y at the point at infinity."""
        dA = len(self.A) - 1
        dB = len(self.B) - 1
        cand = []
        if self.A:
            cand.append(2 * dA)
        if self.B:
            cand.append(3 + 2 * dB)
        return max(cand) if cand else None

    def ord_at_infinity(self):
        if self.is_zero():
            raise ValueError("zero function")
        return 2 * (len(self.C) - 1) - self.num_pole_order()

    def lead(self):
        """Leading coefficient in the t = -x/y expansion (x ~ t^-2, y ~ -t^-3)."""
        if self.is_zero():
            raise ValueError("zero function")
        K = self.K
        dA = 2 * (len(self.A) - 1) if self.A else -1
        dB = 3 + 2 * (len(self.B) - 1) if self.B else -1
        num_lead = self.A[-1] if dA > dB else K.neg(self.B[-1])
        return num_lead  # C is monic

    def normalized(self):
        lc = self.lead()
        if lc == 1:
            return self
        return self.mulc(self.K.inv(lc))

    # -- evaluation / coefficient maps -----------------------------------------

    def evaluate(self, P, L=None, emb=None):
        """Value at an affine point P with coordinates in L (default K)."""
        if L is None or L is self.K:
            L = self.K
            emb = None
        if emb is None:
            emb = embedding(self.K, L)
        x0, y0 = P
        A = [emb(c) for c in self.A]
        B = [emb(c) for c in self.B]
        C = [emb(c) for c in self.C]
        den = peval(L, C, x0)
        if den == 0:
            raise ZeroDivisionError("pole at evaluation point")
        num = L.add(peval(L, A, x0), L.mul(peval(L, B, x0), y0))
        return L.div(num, den)

    def map_coeffs(self, fn, K2=None):
        K2 = K2 or self.K
        return ECFunc(self.E, K2, [fn(c) for c in self.A],
                      [fn(c) for c in self.B], [fn(c) for c in self.C])


def translation_functions(E, K, R):
    """(x o tau_R, y o tau_R) as ECFuncs over K, for an affine point R."""
    a1, a2, a3, a4, a6 = E.coeffs_in(K)
    xR, yR = R
    xf = ECFunc.x(E, K)
    yf = ECFunc.y(E, K)
    one = ECFunc.const(E, K, 1)
    lam = yf.sub(ECFunc.const(E, K, yR)).div(xf.sub(ECFunc.const(E, K, xR)))
    tx = lam.mul(lam).add(lam.mulc(a1)).sub(xf).sub(
        ECFunc.const(E, K, K.add(a2, xR)))
    ty = lam.mul(xf.sub(tx)).sub(yf).sub(tx.mulc(a1)).sub(
        ECFunc.const(E, K, a3))
    del one
    return tx, ty


def compose_translation(f, R):
    """f o tau_R for f an ECFunc and R an affine point over f.K (or INF)."""
    if R is None:
        return f
    E, K = f.E, f.K
    tx, ty = translation_functions(E, K, R)
    return substitute(f, tx, ty)


def substitute(f, tx, ty):
    """Evaluate f at (tx, ty) for ECFunc arguments over the same field."""
    E, K = f.E, f.K

    def xpoly_at(P):
        r = ECFunc.const(E, K, 0)
        for c in reversed(P):
            r = r.mul(tx).add(ECFunc.const(E, K, c))
        return r

    num = xpoly_at(f.A).add(xpoly_at(f.B).mul(ty))
    den = xpoly_at(f.C)
    return num.div(den)


def frobenius_compose(f, e, base):
    """f o phi^e where phi is the |base|-power Frobenius on the curve:
    substitutes (x, y) -> (x^Q, y^Q); coefficients are untouched."""
    E, K = f.E, f.K
    Q = base.card ** e
    # x^Q is an x-polynomial; y^Q reduces to A + B y in the coordinate ring
    xq = [0] * Q + [1]
    yA, yB = _ecpoly_pow_y(E, K, Q)
    tx = ECFunc.from_xpoly(E, K, xq)
    ty = ECFunc(E, K, yA, yB, [1])
    return substitute(f, tx, ty)


def _ecpoly_pow_y(E, K, n):
    """y^n in K[E] as (A, B)."""
    a1, a2, a3, a4, a6 = E.coeffs_in(K)
    G = [a6, a4, a2, 1]
    L = [a3, a1]
    rA, rB = [1], []
    bA, bB = [], [1]
    while n:
        if n & 1:
            rA, rB = _num_mul_raw(K, G, L, rA, rB, bA, bB)
        bA, bB = _num_mul_raw(K, G, L, bA, bB, bA, bB)
        n >>= 1
    return rA, rB


def _num_mul_raw(K, G, L, A1, B1, A2, B2):
    AA = pmul(K, A1, A2)
    BB = pmul(K, B1, B2)
    AB = padd(K, pmul(K, A1, B2), pmul(K, A2, B1))
    A = padd(K, AA, pmul(K, BB, G))
    B = psub(K, AB, pmul(K, BB, L))
    return A, B
