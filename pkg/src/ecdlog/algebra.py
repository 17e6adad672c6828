"""Exact arithmetic for prime fields, extension towers, and univariate polynomials.

Every field is stored as an absolute extension F_p[z]/(m(z)).  An element is a
single Python int packing the coefficient vector in base 2**kbits, so that
polynomial convolution is one machine bigint multiply; kbits is chosen with
enough headroom that no carries cross coefficient boundaries during multiply
and reduce.  Extensions remember the field they were built over, and
embeddings are constructed coherently along those parent chains (so embedding
F_q into a tower level and then up the tower agrees with the direct map).

Polynomials over a field are plain lists of packed elements, low degree
first.  Factorization is squarefree decomposition + distinct-degree +
equal-degree splitting, with the randomness drawn from a caller-supplied
generator.
"""

import random

import numpy as _np

from .intutil import factorize


class Field:
    """Absolute extension F_p[z]/(modulus); elements are packed ints."""

    __slots__ = (
        "p", "deg", "modulus", "card", "kbits", "mask", "lowmask",
        "redtable", "gen", "parent", "parent_poly", "parent_root",
        "_frob_tables", "_canexts", "_emb_cache", "_coerce_cache",
        "_from_rep", "_to_rep", "name",
    )

    def __init__(self, p, deg, modulus, parent=None, parent_poly=None):
        self.p = p
        self.deg = deg
        self.modulus = tuple(modulus)  # length deg+1, monic, over F_p
        assert len(self.modulus) == deg + 1 and self.modulus[-1] == 1
        self.card = p ** deg
        d = max(deg, 1)
        kb = (d * d * (p - 1) ** 3 + 4 * d * p * p).bit_length() + 2
        # round up to 16 or 32 bits so packed values can be viewed as numpy
        # arrays during normalization of large fields
        self.kbits = 16 if kb <= 16 else 32
        self._np_dtype = _np.uint16 if self.kbits == 16 else _np.uint32
        self._use_np = deg >= 16
        self._nbytes = (self.kbits // 8) * deg
        self.mask = (1 << self.kbits) - 1
        self.lowmask = (1 << (self.kbits * deg)) - 1
        # z^(deg+i) mod modulus, packed, for i in 0..deg-2
        red = []
        cur = [(-c) % p for c in self.modulus[:deg]]  # z^deg
        red.append(self._pack(cur))
        for _ in range(deg - 2):
            cur = [0] + cur
            hi = cur.pop()
            if hi:
                cur = [(c - hi * m) % p for c, m in zip(cur, self.modulus[:deg])]
            red.append(self._pack(cur))
        self.redtable = red
        self.gen = (1 << self.kbits) if deg > 1 else 1
        self.parent = parent
        self.parent_poly = parent_poly
        self.parent_root = None
        self._frob_tables = {}
        self._canexts = {}
        self._emb_cache = {}
        self._coerce_cache = {}
        self._from_rep = None
        self._to_rep = None
        self.name = "F_%d" % p if deg == 1 else "F_%d^%d" % (p, deg)

    def __repr__(self):
        return self.name

    # -- packing ------------------------------------------------------------

    def _pack(self, coeffs):
        v = 0
        for i, c in enumerate(coeffs):
            if c:
                v |= c << (i * self.kbits)
        return v

    def coeffs(self, a):
        out = [0] * self.deg
        i = 0
        while a:
            out[i] = a & self.mask
            a >>= self.kbits
            i += 1
        return out

    def from_coeffs(self, coeffs):
        return self._pack([c % self.p for c in coeffs])

    def from_int(self, c):
        return c % self.p

    def _norm(self, v):
        if self._use_np and v:
            b = v.to_bytes(self._nbytes, "little")
            arr = _np.frombuffer(b, dtype=self._np_dtype) % self.p
            return int.from_bytes(arr.astype(self._np_dtype).tobytes(), "little")
        p, k, mask = self.p, self.kbits, self.mask
        out = 0
        i = 0
        while v:
            c = (v & mask) % p
            if c:
                out |= c << (i * k)
            v >>= k
            i += 1
        return out

    # -- ring ops -----------------------------------------------------------

    def add(self, a, b):
        return self._norm(a + b)

    def neg(self, a):
        if a == 0:
            return 0
        p, k, mask = self.p, self.kbits, self.mask
        out = 0
        i = 0
        while a:
            c = a & mask
            if c:
                out |= (p - c) << (i * k)
            a >>= k
            i += 1
        return out

    def sub(self, a, b):
        return self._norm(a + self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        v = a * b
        deg, k = self.deg, self.kbits
        hi = v >> (deg * k)
        if hi:
            v &= self.lowmask
            red = self.redtable
            j = 0
            mask = self.mask
            while hi:
                c = hi & mask
                if c:
                    v += c * red[j]
                hi >>= k
                j += 1
        return self._norm(v)

    def smul(self, c, a):
        """Scalar (F_p) times element."""
        c %= self.p
        if c == 0 or a == 0:
            return 0
        return self._norm(a * c)

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in %s" % self.name)
        if a == 1:
            return 1
        if self.deg == 1:
            return pow(a, self.p - 2, self.p)
        # Itoh-Tsujii: a^-1 = N(a)^-1 * (a^((p^(d-1)-1)/(p-1)))^p with N(a) in F_p
        n = self.deg - 1
        s, k = a, 1
        for b in bin(n)[3:]:
            s = self.mul(self.frob_p(s, k), s)
            k *= 2
            if b == "1":
                s = self.mul(self.frob_p(s, 1), a)
                k += 1
        sp = self.frob_p(s, 1)
        nrm = self.mul(sp, a)
        assert nrm & ~self.mask == 0
        return self.smul(pow(nrm, self.p - 2, self.p), sp)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- Frobenius ----------------------------------------------------------

    def _frob_table(self, e):
        """Images of the power basis under x -> x^(p^e)."""
        e %= self.deg
        tab = self._frob_tables.get(e)
        if tab is None:
            if e == 0:
                tab = None  # identity marker
                self._frob_tables[e] = ("id",)
                return ("id",)
            zp = self.pow(self.gen, self.p ** e)
            tab = [1]
            for _ in range(self.deg - 1):
                tab.append(self.mul(tab[-1], zp))
            self._frob_tables[e] = tab
        return tab

    def frob_p(self, a, e=1):
        """a -> a^(p^e), as an F_p-linear map."""
        if self.deg == 1 or a == 0:
            return a
        tab = self._frob_table(e)
        if tab == ("id",):
            return a
        k, mask = self.kbits, self.mask
        acc = 0
        i = 0
        while a:
            c = a & mask
            if c:
                acc += c * tab[i]
            a >>= k
            i += 1
        return self._norm(acc)

    def frobenius(self, a, e, base):
        """a -> a^(|base|^e); base must be a subfield (by degree)."""
        steps = (base.deg * e) % self.deg if self.deg > 1 else 0
        return self.frob_p(a, steps) if steps else a

    # -- misc ---------------------------------------------------------------

    def rand(self, rng):
        return self._pack([rng.randrange(self.p) for _ in range(self.deg)])

    def rand_nonzero(self, rng):
        while True:
            a = self.rand(rng)
            if a:
                return a

    def element_from_index(self, i):
        coeffs = []
        for _ in range(self.deg):
            coeffs.append(i % self.p)
            i //= self.p
        return self._pack(coeffs)

    def all_elements(self):
        for i in range(self.card):
            yield self.element_from_index(i)


_PRIME_FIELDS = {}


def prime_field(p):
    F = _PRIME_FIELDS.get(p)
    if F is None:
        F = Field(p, 1, (0, 1))
        _PRIME_FIELDS[p] = F
    return F


# ---------------------------------------------------------------------------
# polynomials over a field: list of packed elements, low degree first
# ---------------------------------------------------------------------------

def pnorm(A):
    while A and A[-1] == 0:
        A.pop()
    return A


def pdeg(A):
    return len(A) - 1


def padd(F, A, B):
    n = max(len(A), len(B))
    out = [0] * n
    for i, c in enumerate(A):
        out[i] = c
    for i, c in enumerate(B):
        out[i] = F.add(out[i], c)
    return pnorm(out)


def pneg(F, A):
    return [F.neg(c) for c in A]


def psub(F, A, B):
    return padd(F, A, pneg(F, B))


def pmul(F, A, B):
    if not A or not B:
        return []
    out = [0] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        if a == 0:
            continue
        for j, b in enumerate(B):
            if b:
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return pnorm(out)


def pmulc(F, A, c):
    if c == 0:
        return []
    return pnorm([F.mul(a, c) for a in A])


def pdivmod(F, A, B):
    if not B:
        raise ZeroDivisionError("polynomial division by zero")
    A = list(A)
    q = [0] * max(0, len(A) - len(B) + 1)
    binv = 1 if B[-1] == 1 else F.inv(B[-1])
    db = len(B) - 1
    while len(A) >= len(B):
        c = F.mul(A[-1], binv)
        k = len(A) - len(B)
        if c:
            q[k] = c
            for i, b in enumerate(B):
                if b:
                    A[k + i] = F.sub(A[k + i], F.mul(c, b))
        A.pop()
    return pnorm(q), pnorm(A)


def pmod(F, A, B):
    return pdivmod(F, A, B)[1]


def pmonic(F, A):
    if not A:
        return []
    if A[-1] == 1:
        return list(A)
    return pmulc(F, A, F.inv(A[-1]))


def pgcd(F, A, B):
    A, B = list(A), list(B)
    while B:
        A, B = B, pmod(F, A, B)
    return pmonic(F, A)


def pinvmod(F, A, M):
    """Inverse of A modulo M (coprime); extended Euclid."""
    r0, r1 = list(M), pmod(F, A, M)
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if pdeg(r0) != 0:
        raise ZeroDivisionError("not invertible modulo M")
    return pmulc(F, pmod(F, t0, M), F.inv(r0[0]))


def pdiff(F, A):
    out = []
    for i in range(1, len(A)):
        out.append(F.smul(i, A[i]))
    return pnorm(out)


def peval(F, A, x):
    r = 0
    for c in reversed(A):
        r = F.add(F.mul(r, x), c)
    return r


def ppowmod(F, A, n, M):
    R = [1]
    A = pmod(F, A, M)
    while n:
        if n & 1:
            R = pmod(F, pmul(F, R, A), M)
        A = pmod(F, pmul(F, A, A), M)
        n >>= 1
    return R


def pfrob_coeffs(F, A, e, base):
    """Apply coefficient-wise Frobenius x -> x^(|base|^e)."""
    return [F.frobenius(c, e, base) for c in A]


def p_xq_mod(F, M, Q=None):
    """x^Q mod M (Q defaults to |F|), via square-and-multiply."""
    if Q is None:
        Q = F.card
    return ppowmod(F, [0, 1], Q, M)


def is_irreducible(F, A):
    d = pdeg(A)
    if d <= 0:
        return False
    if d == 1:
        return True
    A = pmonic(F, A)
    xq = p_xq_mod(F, A, F.card ** d)
    if pnorm(psub(F, xq, [0, 1])):
        return False
    for r in factorize(d):
        h = p_xq_mod(F, A, F.card ** (d // r))
        if pdeg(pgcd(F, psub(F, h, [0, 1]), A)) != 0:
            return False
    return True


def first_irreducible(F, d):
    """First monic irreducible of degree d in deterministic enumeration order."""
    if d == 1:
        return [0, 1]
    i = 0
    while True:
        coeffs = []
        v = i
        for _ in range(d):
            coeffs.append(F.element_from_index(v % F.card))
            v //= F.card
        A = coeffs + [1]
        if is_irreducible(F, A):
            return A
        i += 1


def _proot(F, a):
    """p-th root (Frobenius inverse) of a field element."""
    return F.pow(a, F.card // F.p) if F.deg > 1 else a


def squarefree_decomposition(F, A):
    """Return (lc, [(g, m)]) with A = lc * prod g^m, g monic squarefree coprime."""
    lc = A[-1]
    A = pmonic(F, A)
    out = []

    def rec(f, mult):
        if pdeg(f) == 0:
            return
        df = pdiff(F, f)
        if not df:
            # f = h(x^p)
            h = [_proot(F, f[i]) for i in range(0, len(f), F.p)]
            rec(h, mult * F.p)
            return
        g = pgcd(F, f, df)
        w = pdivmod(F, f, g)[0]
        i = 1
        while pdeg(w) > 0:
            y = pgcd(F, w, g)
            z = pdivmod(F, w, y)[0]
            if pdeg(z) > 0:
                out.append((z, mult * i))
            g = pdivmod(F, g, y)[0]
            w = y
            i += 1
        if pdeg(g) > 0:
            # leftover p-th power part
            h = [_proot(F, g[j]) for j in range(0, len(g), F.p)]
            rec(h, mult * F.p)

    rec(A, 1)
    return lc, out


def _edf(F, A, d, rng):
    """Split monic squarefree A, all of whose factors have degree d."""
    n = pdeg(A)
    if n == d:
        return [A]
    out = []
    stack = [A]
    Q = F.card
    while stack:
        f = stack.pop()
        if pdeg(f) == d:
            out.append(f)
            continue
        while True:
            h = [F.rand(rng) for _ in range(pdeg(f))]
            pnorm(h)
            if not h:
                continue
            if F.p == 2:
                m = F.deg * d
                t = pmod(F, h, f)
                acc = list(t)
                for _ in range(m - 1):
                    t = pmod(F, pmul(F, t, t), f)
                    acc = padd(F, acc, t)
                g = pgcd(F, acc, f)
            else:
                e = (Q ** d - 1) // 2
                t = ppowmod(F, h, e, f)
                g = pgcd(F, psub(F, t, [1]), f)
            if 0 < pdeg(g) < pdeg(f):
                stack.append(g)
                stack.append(pdivmod(F, f, g)[0])
                break
    return out


def factor_poly(F, A, rng=None):
    """Full factorization: returns (lc, [(irreducible monic, multiplicity)])."""
    if not A:
        raise ValueError("cannot factor the zero polynomial")
    if rng is None:
        rng = random.Random(0xFAC ^ F.card ^ len(A))
    if pdeg(A) == 0:
        return A[0], []
    lc, sqf = squarefree_decomposition(F, A)
    out = []
    for g, mult in sqf:
        # distinct-degree on g
        f = list(g)
        xq = p_xq_mod(F, f)
        h = list(xq)
        d = 1
        while pdeg(f) >= 2 * d:
            cand = pgcd(F, psub(F, h, [0, 1]), f)
            if pdeg(cand) > 0:
                for irr in _edf(F, cand, d, rng):
                    out.append((irr, mult))
                f = pdivmod(F, f, cand)[0]
                if pdeg(f) == 0:
                    break
                h = pmod(F, h, f)
            d += 1
            if pdeg(f) < 2 * d:
                break
            h = ppowmod(F, h, F.card, f)
        if pdeg(f) > 0:
            out.append((f, mult))
    out.sort(key=lambda t: (pdeg(t[0]), t[0]))
    return lc, out


_NONRESIDUE = {}


def sqrt_element(F, a):
    """A square root of a in F, or None (odd characteristic only)."""
    if a == 0:
        return 0
    Q = F.card
    if F.p == 2:
        return F.pow(a, Q // 2)
    if F.pow(a, (Q - 1) // 2) != 1:
        return None
    if Q % 4 == 3:
        return F.pow(a, (Q + 1) // 4)
    # Tonelli-Shanks
    s, t = 0, Q - 1
    while t % 2 == 0:
        t //= 2
        s += 1
    z = _NONRESIDUE.get(F)
    if z is None:
        i = 1
        while True:
            z = F.element_from_index(i)
            if z and F.pow(z, (Q - 1) // 2) != 1:
                break
            i += 1
        _NONRESIDUE[F] = z
    M, cc = s, F.pow(z, t)
    r, w = F.pow(a, (t + 1) // 2), F.pow(a, t)
    while w != 1:
        i, ww = 0, w
        while ww != 1:
            ww = F.mul(ww, ww)
            i += 1
        b = cc
        for _ in range(M - i - 1):
            b = F.mul(b, b)
        M, cc = i, F.mul(b, b)
        w = F.mul(w, cc)
        r = F.mul(r, b)
    return r


_AS_SOLVER = {}


def _artin_schreier_solve(F, d):
    """A solution u of u^2 + u = d over a char-2 field, or None."""
    solver = _AS_SOLVER.get(F)
    if solver is None:
        m = F.deg
        # matrix of u -> u^2 + u in the power basis, over F_2
        cols = []
        for i in range(m):
            b = F._pack([1 if j == i else 0 for j in range(m)])
            img = F.add(F.mul(b, b), b)
            cols.append(F.coeffs(img))
        rows = [[cols[j][i] for j in range(m)] + [1 if t == i else 0 for t in range(m)]
                for i in range(m)]
        pivots = _fp_gauss_solve(2, rows, m)
        solver = (rows, pivots)
        _AS_SOLVER[F] = solver
    rows, pivots = solver
    digits = F.coeffs(d)
    out = [0] * F.deg
    for rowi, c in enumerate(pivots):
        acc = 0
        for t in range(F.deg):
            if digits[t]:
                acc ^= rows[rowi][F.deg + t] & digits[t]
        out[c] = acc & 1
    u = F._pack(out)
    if F.add(F.mul(u, u), u) != d:
        return None
    return u


def solve_quadratic(F, b, c):
    """Roots of T^2 + bT + c in F, as a list of (root, mult)."""
    if F.p == 2:
        if b == 0:
            return [(sqrt_element(F, c), 2)]
        binv2 = F.inv(F.mul(b, b))
        d = F.mul(c, binv2)
        u = _artin_schreier_solve(F, d)
        if u is None:
            return []
        r1 = F.mul(b, u)
        r2 = F.mul(b, F.add(u, 1))
        return sorted([(r1, 1), (r2, 1)])
    disc = F.sub(F.mul(b, b), F.smul(4, c))
    s = sqrt_element(F, disc)
    if s is None:
        return []
    inv2 = F.inv(2 % F.p)
    if s == 0:
        return [(F.mul(F.neg(b), inv2), 2)]
    r1 = F.mul(F.sub(s, b), inv2)
    r2 = F.mul(F.sub(F.neg(s), b), inv2)
    return sorted([(r1, 1), (r2, 1)])


def roots_in_field(F, A, rng=None):
    """Roots of A in F with multiplicities, as a sorted list of (root, mult)."""
    if not A:
        raise ValueError("zero polynomial")
    if pdeg(A) == 0:
        return []
    if pdeg(A) == 1:
        return [(F.div(F.neg(A[0]), A[1]), 1)]
    if pdeg(A) == 2:
        inv = F.inv(A[2])
        return solve_quadratic(F, F.mul(A[1], inv), F.mul(A[0], inv))
    if rng is None:
        rng = random.Random(0x2007 ^ F.card ^ len(A))
    lc, sqf = squarefree_decomposition(F, A)
    out = {}
    for g, mult in sqf:
        if pdeg(g) <= 2:
            for r, m1 in roots_in_field(F, g):
                out[r] = out.get(r, 0) + mult * m1
            continue
        xq = p_xq_mod(F, g)
        lin = pgcd(F, psub(F, xq, [0, 1]), g)
        if pdeg(lin) <= 0:
            continue
        if pdeg(lin) <= 2:
            for r, m1 in roots_in_field(F, lin):
                out[r] = out.get(r, 0) + mult
            continue
        for irr in _edf(F, lin, 1, rng):
            r = F.neg(irr[0])
            out[r] = out.get(r, 0) + mult
    return sorted(out.items())


# ---------------------------------------------------------------------------
# extensions, embeddings, coercions
# ---------------------------------------------------------------------------

def _fp_gauss_solve(p, rows, rhs_width):
    """RREF of rows (lists over F_p, last rhs_width cols are rhs); in place."""
    if not rows:
        return []
    M = _np.array(rows, dtype=_np.int64) % p
    nrows = M.shape[0]
    ncols = M.shape[1] - rhs_width
    pivots = []
    r = 0
    for c in range(ncols):
        nz = _np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        if inv != 1:
            M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        if _np.any(col):
            M -= _np.outer(col, M[r])
            M %= p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    out = M.tolist()
    for i in range(nrows):
        rows[i] = out[i]
    return pivots


class _QuotientRing:
    """K[T]/(g) with tuple-of-K-elements representation; build helper only."""

    def __init__(self, K, g):
        self.K = K
        self.g = pmonic(K, g)
        self.t = pdeg(g)

    def mul(self, a, b):
        prod = pmul(self.K, list(a), list(b))
        rem = pmod(self.K, prod, self.g)
        return tuple(rem + [0] * (self.t - len(rem)))

    def coords(self, a):
        out = []
        for c in a:
            out.extend(self.K.coeffs(c))
        return out


def composite_field(K, g, name=None):
    """Build the field K[T]/(g) as an absolute extension of F_p.

    Returns the new Field L with L.parent == K, L.parent_poly == g, and
    L.parent_root the image of T.  Conversion tables between the absolute
    representation and the K[T]/(g) representation are stored on L.
    """
    p = K.p
    t = pdeg(g)
    if t == 1:
        raise ValueError("degree-1 composite is the base field")
    R = _QuotientRing(K, g)
    D = K.deg * t
    # find a primitive element theta = T + c*gen_K
    cand = [0]
    if K.deg > 1:
        cand += [1, 2, 3]
    rng = random.Random(0xC0F ^ K.card ^ t)
    tries = 0
    while True:
        if cand:
            c = cand.pop(0)
            shift = K.smul(c, K.gen) if K.deg > 1 else c % p
        else:
            shift = K.rand(rng)
            tries += 1
            if tries > 200:
                raise RuntimeError("no primitive element found")
        theta = tuple([shift, 1] + [0] * (t - 2)) if t >= 2 else (shift,)
        pows = [tuple([1] + [0] * (t - 1))]
        for _ in range(D):
            pows.append(R.mul(pows[-1], theta))
        # row-reduce coords of 1, theta, ..., theta^(D-1)
        mat = [R.coords(pows[i]) + [1 if j == i else 0 for j in range(D)]
               for i in range(D)]
        work = [row[:] for row in mat]
        pivots = _fp_gauss_solve(p, work, D)
        if len(pivots) < D:
            continue
        # minimal polynomial: express theta^D over the basis
        target = R.coords(pows[D])
        sol = [0] * D
        for rowi, c in enumerate(pivots):
            acc = target[c]
            sol_row = work[rowi][D:]
            # after RREF, row rowi reads e_c in the coord part
            coefvec = sol_row
            # contribution: coefficient of theta^j in the combination
            for j in range(D):
                sol[j] = (sol[j] + acc * coefvec[j]) % p
        minpoly = [(-s) % p for s in sol] + [1]
        L = Field(p, D, minpoly, parent=K, parent_poly=pmonic(K, g))
        # to_abs: R-coords -> L coords (solve M x = coords)
        # M columns are coords of theta^i
        M = [[R.coords(pows[j])[i] for j in range(D)] for i in range(D)]
        aug = [M[i] + [1 if j == i else 0 for j in range(D)] for i in range(D)]
        piv2 = _fp_gauss_solve(p, aug, D)
        if len(piv2) < D:
            continue
        Minv = [row[D:] for row in aug]

        def to_abs(relem, _Minv=Minv, _R=R, _L=L, _D=D):
            vec = _R.coords(relem)
            out = [0] * _D
            for i in range(_D):
                row = _Minv[i]
                s = 0
                for j in range(_D):
                    if vec[j]:
                        s += row[j] * vec[j]
                out[i] = s % _L.p
            return _L._pack(out)

        def from_abs(x, _M=M, _K=K, _L=L, _t=t):
            digits = _L.coeffs(x)
            vec = [0] * _L.deg
            for i in range(_L.deg):
                row = _M[i]
                s = 0
                for j in range(_L.deg):
                    if digits[j]:
                        s += row[j] * digits[j]
                vec[i] = s % _L.p
            out = []
            for a in range(_t):
                out.append(_K.from_coeffs(vec[a * _K.deg:(a + 1) * _K.deg]))
            return tuple(out)

        L._from_rep = to_abs
        L._to_rep = from_abs
        L.parent_root = to_abs(tuple([0, 1] + [0] * (t - 2)))
        if name:
            L.name = name
        # seed the parent embedding cache
        gen_img = to_abs(tuple([K.gen] + [0] * (t - 1)))
        tab = [1]
        for _ in range(K.deg - 1):
            tab.append(L.mul(tab[-1], gen_img))
        K_emb = _LinearEmbed(K, L, tab)
        L._emb_cache[K] = K_emb
        return L


class _LinearEmbed:
    """F_p-linear embedding given by images of the source power basis."""

    def __init__(self, src, dst, tab):
        self.src = src
        self.dst = dst
        self.tab = tab

    def __call__(self, x):
        if self.src.deg == 1:
            return x
        k, mask = self.src.kbits, self.src.mask
        acc = 0
        i = 0
        while x:
            c = x & mask
            if c:
                acc += c * self.tab[i]
            x >>= k
            i += 1
        return self.dst._norm(acc)


def embedding(A, B):
    """Field embedding A -> B, coherent with A's parent chain."""
    if A is B:
        return lambda x: x
    if A.deg == 1:
        return lambda x: x
    emb = B._emb_cache.get(A)
    if emb is not None:
        return emb
    if B.deg % A.deg:
        raise ValueError("no embedding %s -> %s" % (A, B))
    # coherent route: embed A's parent, then map the parent root of A
    PA = A.parent if A.parent is not None else prime_field(A.p)
    ep = embedding(PA, B)
    if A.parent_poly is not None:
        gB = [ep(c) for c in A.parent_poly]
    else:
        gB = [c for c in A.modulus]
    rts = roots_in_field(B, gB, random.Random(0xE2B ^ A.card ^ B.card))
    if not rts:
        raise ValueError("parent polynomial has no root in %s" % B)
    root = min(r for r, _ in rts)
    if A._to_rep is not None:
        def emb_fn(x, _A=A, _ep=ep, _root=root, _B=B):
            rel = _A._to_rep(x)
            acc = 0
            pw = 1
            for c in rel:
                if c:
                    acc = _B.add(acc, _B.mul(_ep(c), pw))
                pw = _B.mul(pw, _root)
            return acc
        # turn into a linear table for speed
        tab = []
        pw_elem = 1
        for i in range(A.deg):
            tab.append(emb_fn(pw_elem))
            pw_elem = A.mul(pw_elem, A.gen)
        emb = _LinearEmbed(A, B, tab)
    else:
        tab = [1]
        for _ in range(A.deg - 1):
            tab.append(B.mul(tab[-1], root))
        emb = _LinearEmbed(A, B, tab)
    B._emb_cache[A] = emb
    return emb


def coerce_down(B, A, x):
    """Preimage in A of x in B under embedding(A, B); raises if absent."""
    if A is B or A.deg == 1 and B.deg == 1:
        return x
    if A.deg == 1:
        # x must be a constant already
        if x & ~B.mask:
            pass
        emb = embedding(A, B)
        if emb(x & B.mask) == x:
            return x & B.mask
        raise ValueError("element not in prime subfield")
    key = A
    solver = B._coerce_cache.get(key)
    if solver is None:
        emb = embedding(A, B)
        cols = []
        pw = 1
        for i in range(A.deg):
            cols.append(B.coeffs(emb(pw)))
            pw = A.mul(pw, A.gen)
        # solve cols * a = digits(x) by precomputed RREF
        rows = [[cols[j][i] for j in range(A.deg)] + [1 if t == i else 0 for t in range(B.deg)]
                for i in range(B.deg)]
        pivots = _fp_gauss_solve(B.p, rows, B.deg)
        solver = (rows, pivots, emb)
        B._coerce_cache[key] = solver
    rows, pivots, emb = solver
    digits = B.coeffs(x)
    out = [0] * A.deg
    for rowi, c in enumerate(pivots):
        acc = 0
        for t in range(B.deg):
            if digits[t]:
                acc += rows[rowi][A.deg + t] * digits[t]
        out[c] = acc % B.p
    a = A._pack(out)
    if emb(a) != x:
        raise ValueError("element of %s not in subfield %s" % (B, A))
    return a


def build_extension(base, d, name=None):
    """Canonical degree-d extension of base, memoized (deterministic modulus)."""
    if d == 1:
        return base
    L = base._canexts.get(d)
    if L is None:
        g = first_irreducible(base, d)
        L = composite_field(base, g, name=name)
        base._canexts[d] = L
    return L


def norm_element(B, A, x):
    """Norm of x from B down to the subfield A, returned as an element of A."""
    m = B.deg // A.deg
    acc = 1
    y = x
    for _ in range(m):
        acc = B.mul(acc, y)
        y = B.frobenius(y, 1, A)
    return coerce_down(B, A, acc)


def trace_element(B, A, x):
    m = B.deg // A.deg
    acc = 0
    y = x
    for _ in range(m):
        acc = B.add(acc, y)
        y = B.frobenius(y, 1, A)
    return coerce_down(B, A, acc)


def multiplicative_order(F, a, factored=None):
    if a == 0:
        raise ValueError("zero has no multiplicative order")
    n = F.card - 1
    if factored is None:
        factored = factorize(n)
    o = n
    for p, e in factored.items():
        for _ in range(e):
            if F.pow(a, o // p) == 1:
                o //= p
            else:
                break
    return o


# ---------------------------------------------------------------------------
# small dense linear algebra over a field (packed-element matrices)
# ---------------------------------------------------------------------------

def mat_rref(F, rows, width=None):
    """RREF in place; returns pivot column list."""
    if not rows:
        return []
    ncols = width if width is not None else len(rows[0])
    r = 0
    pivots = []
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def mat_rank(F, rows):
    work = [list(r) for r in rows]
    return len(mat_rref(F, work))


def mat_kernel(F, rows, ncols):
    """Basis of the right kernel of the matrix (rows over F, ncols columns)."""
    work = [list(r) for r in rows]
    pivots = mat_rref(F, work, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for rowi, c in enumerate(pivots):
            v[c] = F.neg(work[rowi][free])
        basis.append(v)
    return basis


def mat_det(F, rows):
    n = len(rows)
    work = [list(r) for r in rows]
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            det = F.neg(det)
        det = F.mul(det, work[c][c])
        inv = F.inv(work[c][c])
        for i in range(c + 1, n):
            if work[i][c]:
                f = F.mul(inv, work[i][c])
                work[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(work[i], work[c])]
    return det
