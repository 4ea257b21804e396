"""Hensel lifting of coprime polynomial factorizations from mod p to mod p^m.

Two entry points:

* hensel_lift_factorization: the public operation.  Requires f squarefree
  mod p, lifts its irreducible mod-p factors.
* lift_blocks: internal workhorse used for local prime data.  Lifts any
  pairwise-coprime monic block factorization (blocks may be powers g^e, as
  produced by Kummer-Dedekind at ramified primes), which is exactly what the
  local factors of a defining polynomial look like p-adically.

All polynomials here are int lists ascending by degree, coefficients reduced
into [0, p^m).
"""

from .errors import NormforgeError, NotSquarefreeAtP
from .modp import (
    factor_poly_mod_p,
    pgcd,
    pgcd_ext,
    pmul,
    pnormalize,
    trim,
)


def _mod_reduce(a, q):
    return trim([c % q for c in a])


def _mul_mod(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return trim(out)


def _sub_mod(a, b, q):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n)])


def _divmod_monic(a, b, q):
    """Division by monic b with coefficients mod q."""
    assert b and b[-1] == 1
    a = list(a)
    quo = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and trim(a) and len(a) >= len(b):
        coef = a[-1] % q
        shift = len(a) - len(b)
        quo[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % q
        a.pop()
        trim(a)
    return trim(quo), trim(a)


def _lift_pair(f, g, h, s, t, p, k):
    """One linear Hensel step: from mod p^k to mod p^(k+1).

    Invariants: f == g*h mod p^k, s*g + t*h == 1 mod p, g monic.
    """
    q = p ** (k + 1)
    e = _sub_mod(f, _mul_mod(g, h, q), q)
    assert all(c % p ** k == 0 for c in e)
    delta = pnormalize([c // p ** k for c in e], p)
    # correction: g += p^k * (t*delta mod g), h += p^k * (s*delta + carry)
    tg = pmul(t, delta, p)
    qq, rr = _divmod_monic(tg, [c % p for c in g], p)
    gcorr = rr
    hcorr = pnormalize(
        [x + y for x, y in _zip_pad(pmul(s, delta, p), pmul(qq, [c % p for c in h], p))], p
    )
    g2 = _mod_reduce([a + p ** k * b for a, b in _zip_pad(g, gcorr)], q)
    h2 = _mod_reduce([a + p ** k * b for a, b in _zip_pad(h, hcorr)], q)
    return g2, h2


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)) for i in range(n)]


def lift_pair_to(f, g0, h0, p, m):
    """Lift f = g0*h0 (mod p), gcd(g0,h0)=1, both monic, to mod p^m."""
    gcd, s, t = pgcd_ext(g0, h0, p)
    if len(gcd) != 1:
        raise NotSquarefreeAtP("factors are not coprime mod p")
    g, h = [c % p for c in g0], [c % p for c in h0]
    for k in range(1, m):
        g, h = _lift_pair(f, g, h, s, t, p, k)
    return _mod_reduce(g, p ** m), _mod_reduce(h, p ** m)


def lift_blocks(f, blocks, p, m):
    """Lift a pairwise-coprime monic factorization of monic f to mod p^m.

    `blocks` are monic mod-p polynomials with product f mod p.  Returns the
    lifted blocks in the same order.
    """
    f = [c % p ** m for c in f]
    if len(blocks) == 1:
        return [_mod_reduce(f, p ** m)]
    for a_i, b_i in _pairs(blocks):
        if len(pgcd(a_i, b_i, p)) != 1:
            raise NotSquarefreeAtP("blocks are not pairwise coprime mod p")
    # split recursively: first block against product of the rest
    first = blocks[0]
    rest = blocks[1][:]
    for b in blocks[2:]:
        rest = pmul(rest, b, p)
    g, h = lift_pair_to(f, first, rest, p, m)
    return [g] + lift_blocks(h, blocks[1:], p, m)


def _pairs(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]


def hensel_lift_factorization(f, p, m, seed=None):
    """Lift the mod-p factorization of f to coprime monic factors mod p^m.

    Requires f squarefree mod p.  Each returned factor reduces mod p to the
    corresponding irreducible factor of f mod p, and their product is f mod
    p^m (f is assumed monic; a unit leading coefficient is divided out).
    """
    from .modp import DEFAULT_SEED

    if hasattr(f, "int_coeffs"):
        f = f.int_coeffs()
    f = list(f)
    if not trim(list(f)):
        raise NormforgeError("zero polynomial")
    factors = factor_poly_mod_p(f, p, seed=DEFAULT_SEED if seed is None else seed)
    if any(mult > 1 for _, mult in factors):
        raise NotSquarefreeAtP(f"not squarefree mod {p}")
    if f[-1] % p == 0:
        raise NormforgeError("leading coefficient vanishes mod p")
    if f[-1] != 1:
        inv = pow(f[-1], -1, p ** m)
        f = [c * inv % p ** m for c in f]
    blocks = [g for g, _ in factors]
    if len(blocks) == 1:
        return [_mod_reduce(f, p ** m)]
    return lift_blocks(f, blocks, p, m)


def crt_idempotents(blocks, p, m):
    """Idempotent-style CRT data for Z/p^m[x] mod a block factorization.

    For lifted pairwise-coprime monic blocks F_1..F_r of f, returns e_i with
    e_i == 1 mod F_i and e_i == 0 mod F_j (j != i), all mod (p^m, f).
    """
    q = p ** m
    out = []
    full = [1]
    for b in blocks:
        full = _mul_mod(full, b, q)
    for i, b in enumerate(blocks):
        others = [1]
        for j, c in enumerate(blocks):
            if j != i:
                others = _mul_mod(others, c, q)
        # invert `others` modulo (b, p^m): Newton-lift the mod-p inverse
        inv = _invert_mod(others, b, p, m)
        e = _mul_mod(others, inv, q)
        _, e = _divmod_monic(e, full, q)
        out.append(e)
    return out


def _invert_mod(a, modulus, p, m):
    """Inverse of a modulo (monic modulus, p^m); a must be a unit mod p."""
    g, s, _ = pgcd_ext([c % p for c in a], [c % p for c in modulus], p)
    if len(g) != 1:
        raise NormforgeError("not invertible mod p")
    inv = s
    k = 1
    while k < m:
        k = min(2 * k, m)
        q = p ** k
        prod = _mul_mod(a, inv, q)
        _, prod = _divmod_monic(prod, [c % q for c in modulus], q)
        # inv <- inv * (2 - a*inv)
        two_minus = _sub_mod([2], prod, q)
        inv = _mul_mod(inv, two_minus, q)
        _, inv = _divmod_monic(inv, [c % q for c in modulus], q)
    return inv
