"""Integer helpers: primality, factoring, CRT, and generic baby-step giant-step.

Sizes here are desk scale (group orders up to ~2**40), so trial division
plus Pollard rho is plenty.
"""

import math
import random

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin witnesses, valid far past 2**64
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n, rng):
    if n % 2 == 0:
        return 2
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(0, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n):
    """Full factorization of n >= 1 as a sorted dict {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # deterministic rho: seeded from the remaining cofactor
    rng = random.Random(0xEC0 ^ n)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = m
        for t in range(2, 1 << 12):
            if t * t > m:
                break
            if m % t == 0:
                d = t
                break
        if d == m:
            d = _pollard_rho(m, rng)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(out.items()))


def crt(residues, moduli):
    """Combine residues mod pairwise-coprime moduli; returns (x, prod)."""
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        if n == 1:
            continue
        g = math.gcd(m, n)
        if g != 1:
            raise ValueError("crt moduli must be coprime")
        # x' = x mod m, x' = r mod n
        t = ((r - x) * pow(m, -1, n)) % n
        x, m = x + m * t, m * n
    return x % m if m > 1 else 0, m


def bsgs(mul, inv, identity, g, h, order):
    """Solve g^x = h in a generic group; returns x in [0, order) or None.

    mul/inv/identity define the group; order is an upper bound on the
    order of g (exact order gives the smallest solution).
    """
    if h == identity:
        return 0
    m = math.isqrt(order) + 1
    table = {}
    e = identity
    for j in range(m):
        table.setdefault(e, j)
        e = mul(e, g)
    # giant step factor g^-m
    gm = inv(e) if order else identity  # e == g^m here
    x = h
    for i in range(m + 1):
        j = table.get(x)
        if j is not None:
            val = i * m + j
            return val % order if order else val
        x = mul(x, gm)
    return None


def pohlig_hellman(mul, inv, identity, power, g, h, factored_order):
    """Discrete log of h base g where g has order prod(p^e); None if unsolvable."""
    order = 1
    for p, e in factored_order.items():
        order *= p ** e
    residues, moduli = [], []
    for p, e in factored_order.items():
        pe = p ** e
        cof = order // pe
        gp = power(g, cof)
        hp = power(h, cof)
        # lift digit by digit
        x = 0
        gamma = power(gp, p ** (e - 1))  # order p
        for k in range(e):
            rem = mul(hp, inv(power(gp, x)))
            d = power(rem, p ** (e - 1 - k))
            dk = bsgs(mul, inv, identity, gamma, d, p)
            if dk is None:
                return None
            x += dk * (p ** k)
        residues.append(x)
        moduli.append(pe)
    return crt(residues, moduli)[0]
