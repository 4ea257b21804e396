"""Dense polynomial arithmetic over F_p and factorization mod p.

Polynomials are plain lists of ints in [0, p), ascending degree, trailing
zeros stripped.  Factorization is squarefree decomposition, then
distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting
driven by a seeded deterministic generator so outputs are reproducible.
"""

import random

from .errors import NormforgeError
from .intfunc import factorint, is_prime

DEFAULT_SEED = 0x5EED


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def pnormalize(coeffs, p):
    return trim([c % p for c in coeffs])


def padd(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def psub(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and trim(a):
        if len(a) < len(b):
            break
        coef = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a.pop()
        trim(a)
    return trim(q), trim(a)


def pmod(a, b, p):
    return pdivmod(a, b, p)[1]


def pmonic(a, p):
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def pgcd(a, b, p):
    while b:
        a, b = b, pmod(a, b, p)
    return pmonic(a, p)


def pgcd_ext(a, b, p):
    """(g, s, t) with s*a + t*b = g (g monic)."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, p)
    scale = lambda v: [c * inv % p for c in v]
    return pmonic(r0, p), scale(s0), scale(t0)


def ppow_mod(base, e, mod, p):
    result = [1]
    base = pmod(base, mod, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), mod, p)
        base = pmod(pmul(base, base, p), mod, p)
        e >>= 1
    return result


def pderiv(a, p):
    return trim([(i * c) % p for i, c in enumerate(a)][1:])


def peval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_irreducible_mod_p(f, p):
    """Rabin's irreducibility test (powmod/gcd only)."""
    f = pmonic(pnormalize(f, p), p)
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in sorted(factorint(n)):
        h = psub(ppow_mod(x, p ** (n // r), f, p), x, p)
        if len(pgcd(h, f, p)) != 1:
            return False
    return psub(ppow_mod(x, p ** n, f, p), x, p) == []


def _squarefree_decomp(f, p):
    """[(g_i, multiplicity)] with f = prod g_i^m_i, g_i squarefree, over F_p."""
    out = []
    f = pmonic(f, p)

    def rec(f, mult):
        if len(f) <= 1:
            return
        d = pderiv(f, p)
        if not d:
            # f = g(x^p) = g(x)^p
            g = f[::p]
            rec(g, mult * p)
            return
        c = pgcd(f, d, p)
        w = pdivmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = pgcd(w, c, p)
            fac = pdivmod(w, y, p)[0]
            if len(fac) > 1:
                out.append((pmonic(fac, p), mult * i))
            w, c = y, pdivmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            rec(c, mult)  # leftover is a p-th power; zero-derivative branch lifts it

    rec(f, 1)
    return out


def _distinct_degree(f, p):
    """[(product of irreducibles of degree d, d)] for squarefree monic f."""
    out = []
    x = [0, 1]
    h = x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = ppow_mod(h, p, f, p)
        g = pgcd(psub(h, x, p), f, p)
        if len(g) > 1:
            out.append((g, d))
            f = pdivmod(f, g, p)[0]
            h = pmod(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _equal_degree_split(f, d, p, rng):
    """Cantor-Zassenhaus: split monic squarefree f, all factors of degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if len(a) <= 1:
            continue  # constants cannot split anything
        if p == 2:
            # trace map sum_{i<d} a^(2^i)
            t = list(a)
            acc = list(a)
            for _ in range(d - 1):
                acc = pmod(pmul(acc, acc, p), f, p)
                t = padd(t, acc, p)
            g = pgcd(t, f, p)
        else:
            e = (p ** d - 1) // 2
            t = ppow_mod(a, e, f, p)
            g = pgcd(psub(t, [1], p), f, p)
        if 0 < len(g) - 1 < n:
            left = _equal_degree_split(g, d, p, rng)
            right = _equal_degree_split(pdivmod(f, g, p)[0], d, p, rng)
            return left + right


def factor_poly_mod_p(f, p, seed=DEFAULT_SEED):
    """Factor f over F_p: list of (monic irreducible, multiplicity).

    f can be given as an int-coefficient list or a UniPoly over Z; the list
    is sorted (degree, coefficients) so output order is canonical.
    """
    if not is_prime(p):
        raise NormforgeError(f"{p} is not prime")
    if hasattr(f, "coeffs"):
        f = [c.numerator % p if c.denominator == 1 else _frac_mod(c, p) for c in f.coeffs]
    f = pnormalize(list(f), p)
    if not f:
        raise NormforgeError("cannot factor the zero polynomial")
    if len(f) == 1:
        return []
    rng = random.Random(seed)
    out = []
    for g, mult in _squarefree_decomp(f, p):
        for h, d in _distinct_degree(g, p):
            for irr in _equal_degree_split(h, d, p, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def _frac_mod(c, p):
    if c.denominator % p == 0:
        raise NormforgeError("coefficient denominator divisible by p")
    return c.numerator * pow(c.denominator, -1, p) % p


def poly_from_unipoly_mod_p(f, p):
    """Reduce a UniPoly with p-integral coefficients mod p."""
    return trim([_frac_mod(c, p) for c in f.coeffs])
