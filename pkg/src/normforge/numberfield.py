"""Number fields K = Q[theta]/(f), their elements, primes, and valuations.

Only the order Z[theta] is supported.  Every prime-sensitive operation runs
the Dedekind criterion first and raises NonMonogenicAtP rather than silently
computing in a non-maximal order.

Splitting is Kummer-Dedekind: the primes above p correspond to the
irreducible factors of f mod p, with e = multiplicity and f_deg = degree.
Valuations go through the p-adic block factorization of f: the block lifted
from g^e is the local factor F_P, and

    v_P(alpha) = v_p(Res(F_P, A)) / f_deg      (A integral representative)

corrected for the power of p cleared from denominators.  Residue maps divide
the reduced representative by the cleared p-power inside Z/p^m[x]/(F_P),
which is valid in the discrete valuation ring whatever the ramification.
"""

from fractions import Fraction

from .errors import (
    NoRealConjugates,
    NonMonogenicAtP,
    NormforgeError,
    NotAUnit,
    PrecisionExhausted,
    SearchExhausted,
)
from .finitefield import FiniteField, power_residue_test
from .hensel import _divmod_monic, lift_blocks
from .intfunc import crt, factorint, is_prime, valuation_int
from .modp import (
    factor_poly_mod_p,
    pdivmod,
    pgcd,
    pmul,
    poly_from_unipoly_mod_p,
)
from .polyq import (
    RationalInterval,
    UniPoly,
    poly_gcd,
    poly_gcd_ext,
    real_root_isolate,
    refine_root,
    resultant,
    sign_at_root,
)

INF = float("inf")

MAX_PRECISION = 512


class NumberField:
    """K = Q[theta]/(f) with f monic irreducible over Z."""

    def __init__(self, poly, name=None, check_irreducible=True):
        if not isinstance(poly, UniPoly):
            poly = UniPoly(poly)
        if poly.degree is None or poly.degree < 1:
            raise NormforgeError("defining polynomial must have degree >= 1")
        if not poly.is_monic():
            raise NormforgeError("defining polynomial must be monic")
        if any(c.denominator != 1 for c in poly.coeffs):
            raise NormforgeError("defining polynomial must have integer coefficients")
        if check_irreducible and poly.degree > 1:
            from .zfactor import is_irreducible_over_q

            if not is_irreducible_over_q(poly):
                raise NormforgeError("defining polynomial is reducible over Q")
        self.poly = poly
        self.degree = poly.degree
        self.name = name or f"Q[x]/({_poly_label(poly)})"
        self._block_cache = {}
        self._splitting_cache = {}
        self._real_roots = None

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"NumberField({self.name})"

    @property
    def disc_poly(self):
        from .polyq import discriminant

        return discriminant(self.poly)

    def element(self, coords):
        """Element from power-basis coordinates (length = degree), or a rational."""
        if isinstance(coords, FieldElement):
            if coords.field != self:
                raise NormforgeError("element belongs to another field")
            return coords
        if isinstance(coords, (int, Fraction)):
            vec = [Fraction(coords)] + [Fraction(0)] * (self.degree - 1)
            return FieldElement(self, vec)
        vec = [Fraction(c) for c in coords]
        if len(vec) != self.degree:
            raise NormforgeError("coordinate length must equal the field degree")
        return FieldElement(self, vec)

    def gen(self):
        if self.degree == 1:
            return self.element(-self.poly.coeffs[0])
        return self.element([0, 1] + [0] * (self.degree - 2))

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def real_root_intervals(self):
        if self._real_roots is None:
            self._real_roots = real_root_isolate(self.poly)
        return self._real_roots

    def is_totally_imaginary(self):
        return not self.real_root_intervals()

    def to_json(self):
        return {"poly": self.poly.to_json(), "name": self.name}

    @classmethod
    def from_json(cls, data):
        return cls(UniPoly.from_json(data["poly"]), name=data.get("name"))

    @classmethod
    def rationals(cls):
        return cls(UniPoly([0, 1]), name="Q")

    @classmethod
    def cyclotomic(cls, n):
        from .polyq import cyclotomic_poly

        return cls(cyclotomic_poly(n), name=f"Q(zeta_{n})", check_irreducible=False)


def _poly_label(poly):
    bits = []
    for i, c in enumerate(poly.coeffs):
        if c == 0:
            continue
        if i == 0:
            bits.append(str(c))
        elif i == 1:
            bits.append(f"{c}x" if c != 1 else "x")
        else:
            bits.append(f"{c}x^{i}" if c != 1 else f"x^{i}")
    return " + ".join(bits) if bits else "0"


class FieldElement:
    """Element of a NumberField in the power basis of theta."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = [Fraction(c) for c in coords]

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self):
        if not self.is_rational():
            raise NormforgeError("element is not rational")
        return self.coords[0]

    def poly(self):
        return UniPoly(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.field, tuple(self.coords)))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise NormforgeError("mixed fields")
            return other
        return self.field.element(other)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        other = self._coerce(other)
        prod = self.poly() * other.poly()
        red = prod % self.field.poly
        coords = list(red.coeffs) + [Fraction(0)] * (self.field.degree - len(red.coeffs))
        return FieldElement(self.field, coords)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        g, s, _ = poly_gcd_ext(self.poly(), self.field.poly)
        if g.degree != 0:
            raise NormforgeError("defining polynomial not irreducible?")
        inv = s.scale(1 / g.coeffs[0]) % self.field.poly
        coords = list(inv.coeffs) + [Fraction(0)] * (self.field.degree - len(inv.coeffs))
        return FieldElement(self.field, coords)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self):
        """N_{K/Q}(alpha) = Res(f, A) for monic f."""
        if self.is_zero():
            return Fraction(0)
        return resultant(self.field.poly, self.poly())

    def denominator(self):
        d = 1
        for c in self.coords:
            d = d * c.denominator // _gcd(d, c.denominator)
        return d

    def __repr__(self):
        return f"FieldElement({self.coords} in {self.field.name})"


def _gcd(a, b):
    import math

    return math.gcd(a, b)


class PrimeIdeal:
    """Prime of K above p, presented Kummer-Dedekind style as (p, g(theta))."""

    __slots__ = ("field", "p", "g", "e", "f_deg", "index")

    def __init__(self, field, p, g, e, f_deg, index):
        self.field = field
        self.p = p
        self.g = tuple(g)  # monic irreducible mod p, int coefficients
        self.e = e
        self.f_deg = f_deg
        self.index = index  # position in the canonical splitting order

    def residue_field(self):
        if self.f_deg == 1:
            return FiniteField(self.p)
        return FiniteField(self.p, list(self.g), check=False)

    def __eq__(self, other):
        return (
            isinstance(other, PrimeIdeal)
            and self.field == other.field
            and self.p == other.p
            and self.g == other.g
        )

    def __hash__(self):
        return hash((self.field, self.p, self.g))

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, g={list(self.g)}, e={self.e}, f={self.f_deg})"

    def to_json(self):
        return {"p": self.p, "g": list(self.g), "e": self.e, "f": self.f_deg}


def dedekind_criterion_ok(field, p):
    """True iff Z[theta] is maximal at p (Dedekind's criterion)."""
    fint = field.poly.int_coeffs()
    factors = factor_poly_mod_p(fint, p)
    gbar = [1]
    hbar = [1]
    for g, e in factors:
        gbar = pmul(gbar, g, p)
        for _ in range(e - 1):
            hbar = pmul(hbar, g, p)
    # lift gbar, hbar to Z monic, T = (g*h - f)/p
    glift = UniPoly([c if c <= p // 2 else c - p for c in gbar])
    hlift = UniPoly([c if c <= p // 2 else c - p for c in hbar])
    T = (glift * hlift - field.poly).scale(Fraction(1, p))
    if any(c.denominator != 1 for c in T.coeffs):
        raise AssertionError("Dedekind lift arithmetic broke")
    Tbar = poly_from_unipoly_mod_p(T, p)
    d = pgcd(pgcd(Tbar, gbar, p), hbar, p)
    return len(d) == 1


def splitting_type(field, p):
    """Primes of K above p via Kummer-Dedekind; asserts sum(e*f) = n."""
    key = p
    if key in field._splitting_cache:
        return field._splitting_cache[key]
    if not is_prime(p):
        raise NormforgeError(f"{p} is not prime")
    if not dedekind_criterion_ok(field, p):
        raise NonMonogenicAtP(f"Z[theta] is not maximal at {p} for {field.name}")
    factors = factor_poly_mod_p(field.poly.int_coeffs(), p)
    primes = []
    for idx, (g, e) in enumerate(factors):
        primes.append(PrimeIdeal(field, p, g, e, len(g) - 1, idx))
    total = sum(P.e * P.f_deg for P in primes)
    assert total == field.degree, "fundamental identity sum(e*f) = n violated"
    field._splitting_cache[key] = primes
    return primes


def local_blocks(field, p, m):
    """Lifted coprime blocks of f mod p^m, aligned with splitting_type order."""
    key = (p, m)
    if key in field._block_cache:
        return field._block_cache[key]
    primes = splitting_type(field, p)
    blocks_mod_p = []
    for P in primes:
        b = [1]
        for _ in range(P.e):
            b = pmul(b, list(P.g), p)
        blocks_mod_p.append(b)
    lifted = lift_blocks(field.poly.int_coeffs(), blocks_mod_p, p, m)
    field._block_cache[key] = lifted
    return lifted


def _integral_rep(alpha, p):
    """(A, s) with A an integer-coefficient UniPoly, A(theta) = p^s * d0 * alpha,
    gcd(d0, p) = 1, s = p-part of the coordinate denominators."""
    den = alpha.denominator()
    s = valuation_int(den, p) if den % p == 0 else 0
    scaled = [c * den for c in alpha.coords]
    return UniPoly(scaled), s, den // p ** s


def valuation(field, P, alpha):
    """v_P(alpha); returns the float +inf for alpha = 0.

    Escalates the lifting precision (doubling) until the resultant valuation
    is strictly certified and stable twice, per the precision policy.
    """
    alpha = field.element(alpha)
    if alpha.is_zero():
        return INF
    p = P.p
    A, s, _ = _integral_rep(alpha, p)
    m = 2 * s + 8
    prev = None
    while m <= MAX_PRECISION:
        blocks = local_blocks(field, p, m)
        F = blocks[P.index]
        v_res = _resultant_valuation(F, A.int_coeffs(), p, m)
        if v_res is None or v_res >= m - 1:
            m *= 2
            prev = None
            continue
        if v_res % P.f_deg != 0:
            raise AssertionError("resultant valuation not divisible by f_deg")
        v = v_res // P.f_deg - P.e * s
        if prev == v:
            return v
        prev = v
        m *= 2
    raise PrecisionExhausted(f"valuation at p={p} beyond precision cap")


def _resultant_valuation(F, A, p, m):
    """v_p(Res(F, A)) certified below m, else None.

    F is the lifted monic block (known mod p^m only); Res over the integer
    lifts agrees with the true resultant mod p^m, so any valuation < m is
    exact.  A is reduced centered mod p^m to keep sizes down; F is monic, so
    Res(F, A) = prod A(theta_i) is insensitive to A's nominal degree.
    """
    q = p ** m
    a = [_centered(c, q) for c in A]
    if not any(a):
        return None
    exact = resultant(UniPoly([_centered(c, q) for c in F]), UniPoly(a))
    assert exact.denominator == 1
    exact = int(exact)
    if exact == 0 or exact % q == 0:
        return None
    return valuation_int(exact, p)


def _centered(c, q):
    c %= q
    return c - q if c > q // 2 else c


def residue_map(field, P, alpha, precision_pad=4):
    """Image of alpha in the residue field of P; requires v_P(alpha) = 0."""
    alpha = field.element(alpha)
    if alpha.is_zero():
        raise NotAUnit("zero has positive valuation")
    p = P.p
    A, s, d0 = _integral_rep(alpha, p)
    m = max(2 * s + precision_pad, precision_pad)
    q = p ** m
    blocks = local_blocks(field, p, m)
    F = [c % q for c in blocks[P.index]]
    _, B = _divmod_monic([c % q for c in A.int_coeffs()], F, q)
    # alpha unit at P means A(theta) lies in p^s * O_P exactly
    if any(c % p ** s for c in B):
        raise NotAUnit("element has nonzero valuation at P (p-part mismatch)")
    B = [c // p ** s for c in B]
    k = P.residue_field()
    red = pdivmod([c % p for c in B], list(P.g), p)[1]
    elem = k.element(red)
    if elem.is_zero():
        raise NotAUnit("element reduces to zero at P")
    inv_d0 = k.element(pow(d0 % p, -1, p))
    return elem * inv_d0


def residue_nonqth_power(field, P, c, q):
    """True iff c is NOT a q-th power modulo P (c a unit at P)."""
    c = field.element(c)
    v = valuation(field, P, c)
    if v != 0:
        raise NotAUnit(f"v_P(c) = {v} != 0")
    r = residue_map(field, P, c)
    return not power_residue_test(r, P.residue_field(), q)


def omega_membership(field, alpha, q):
    """Total nonnegativity at real embeddings (q = 2); everything otherwise.

    Membership is relative to this field's real embeddings only; coherence
    along a tower is a reported observation, not decided here.
    """
    if q != 2:
        return True
    alpha = field.element(alpha)
    if alpha.is_zero():
        return True
    roots = field.real_root_intervals()
    if not roots:
        return True
    g = alpha.poly()
    for iv in roots:
        if sign_at_root(g, field.poly, iv) < 0:
            return False
    return True


def primes_over(field, p):
    return splitting_type(field, p)


def theta_phi_membership(field, c, S, q):
    """(c in Theta_q(K, S), c in Phi_q(K)).

    Theta: v_P(c - 1) >= 1 at every P in S (vacuously true for empty S).
    Phi:   v_Q(c - 1) >= 3 * v_Q(q) at every Q above q.
    c = 1 passes both: the zero divisor is divisible by everything.
    """
    c = field.element(c)
    cm1 = c - field.one()
    if cm1.is_zero():
        return True, True
    in_theta = all(valuation(field, P, cm1) >= 1 for P in S)
    in_phi = True
    for Q in splitting_type(field, q):
        if valuation(field, Q, cm1) < 3 * Q.e:
            in_phi = False
            break
    return in_theta, in_phi


def element_support(field, alpha):
    """All primes P with v_P(alpha) != 0, with their valuations.

    Returns a list of (PrimeIdeal, v) sorted by (p, index).  Poles live over
    primes dividing the coordinate denominator; zeros over primes dividing
    Res(f, A) for the integral representative A (no cancellation: every
    v_P(A(theta)) is >= 0).
    """
    alpha = field.element(alpha)
    if alpha.is_zero():
        raise NormforgeError("support of 0 is everything")
    den = alpha.denominator()
    num_res = resultant(field.poly, UniPoly([c * den for c in alpha.coords]))
    assert num_res.denominator == 1
    candidates = set(factorint(den)) if den != 1 else set()
    if num_res != 0:
        candidates |= set(factorint(int(num_res))) if abs(int(num_res)) != 1 else set()
    out = []
    for p in sorted(candidates):
        for P in splitting_type(field, p):
            v = valuation(field, P, alpha)
            if v != 0:
                out.append((P, v))
    return out


def conjugate_interval(alpha, width=Fraction(1, 1024)):
    """Enclosures (min_interval, max_interval) of alpha over real embeddings."""
    field = alpha.field
    roots = field.real_root_intervals()
    if not roots:
        raise NoRealConjugates(f"{field.name} has no real embeddings")
    g = alpha.poly()
    encl = []
    for iv in roots:
        cur = iv
        lo, hi = g.eval_interval(cur.lo, cur.hi)
        while hi - lo > width:
            cur = refine_root(field.poly, cur, cur.width / 4)
            lo, hi = g.eval_interval(cur.lo, cur.hi)
        encl.append((lo, hi))
    min_enc = min(encl, key=lambda t: t[0])
    max_enc = max(encl, key=lambda t: t[1])
    return RationalInterval(*min_enc), RationalInterval(*max_enc)


# ---------------------------------------------------------------------------
# tower edges


class TowerEdge:
    """Inclusion of `lower` into `upper` via the image of lower's generator."""

    def __init__(self, lower, upper, image):
        image = upper.element(image)
        val = lower.poly.compose(image.poly()) % upper.poly
        if not val.is_zero():
            raise NormforgeError("image does not satisfy the lower defining polynomial")
        self.lower = lower
        self.upper = upper
        self.image = image

    def push(self, elem):
        """Image in the upper field of a lower-field element."""
        elem = self.lower.element(elem)
        acc = self.upper.zero()
        for c in reversed(elem.coords):
            acc = acc * self.image + self.upper.element(c)
        return acc

    def relative_ef(self, P_lower):
        """[(P_upper, e_rel, f_rel)] for the upper primes matching P_lower.

        Matching: P_upper lies over P_lower iff the pushed two-element
        generator g_lower(image) has positive valuation at P_upper.
        """
        g_low = UniPoly([Fraction(c) for c in P_lower.g])
        gen_img = g_low.compose(self.image.poly()) % self.upper.poly
        witness = self.upper.element(
            list(gen_img.coeffs) + [Fraction(0)] * (self.upper.degree - len(gen_img.coeffs))
        )
        out = []
        for P_up in splitting_type(self.upper, P_lower.p):
            v = INF if witness.is_zero() else valuation(self.upper, P_up, witness)
            if v > 0:
                e_rel = P_up.e // P_lower.e
                f_rel = P_up.f_deg // P_lower.f_deg
                assert P_up.e % P_lower.e == 0 and P_up.f_deg % P_lower.f_deg == 0
                out.append((P_up, e_rel, f_rel))
        return out


def _pad(poly, n):
    return list(poly.coeffs) + [Fraction(0)] * (n - len(poly.coeffs))


# ---------------------------------------------------------------------------
# constructive strong approximation


def uniformizer(field, P, tries=64):
    """pi with v_P(pi) = 1 and v = 0 at the other primes over the same p."""
    p = P.p
    siblings = [Q for Q in splitting_type(field, p) if Q != P]
    if not siblings and P.e == 1:
        return field.element(p)
    g_mod = UniPoly([Fraction(c) for c in P.g]) % field.poly
    gtheta = field.element(_pad(g_mod, field.degree))
    for j in range(tries):
        cand = gtheta + field.element(p * j)
        if cand.is_zero():
            continue
        if valuation(field, P, cand) != 1:
            continue
        if all(valuation(field, Q, cand) == 0 for Q in siblings):
            return cand
    raise SearchExhausted(f"no uniformizer found for {P}")


def strong_approx_element(field, valuations=(), congruences=(), positivity=False, height_cap=10 ** 6):
    """Element with prescribed exact valuations and congruences.

    valuations:  [(PrimeIdeal, v)] exact orders, distinct primes.
    congruences: [(PrimeIdeal, target FieldElement-or-int, min_valuation k)]
                 meaning v_P(result - target) >= k; target must be a unit or
                 integral at P.
    positivity:  require Omega_2 membership (totally nonnegative).

    Construction: per rational prime p, a residue target in Z[x]/p^m_p is
    assembled block by block (uniformizer powers for exact orders, the
    literal target for congruences, p^shift for untracked blocks), the
    targets are merged by coefficient-wise integer CRT, and the result is
    divided by the cleared p-powers.  Every constraint is re-verified; the
    positivity loop adds multiples of the full modulus, which preserves all
    congruences.  Deterministic throughout.
    """
    byp = {}
    seen = set()
    for P, v in valuations:
        if (P.p, P.index) in seen:
            raise NormforgeError("duplicate prime in constraints")
        seen.add((P.p, P.index))
        byp.setdefault(P.p, {"val": {}, "cong": {}})["val"][P.index] = (P, v)
    for P, target, k in congruences:
        if (P.p, P.index) in seen:
            raise NormforgeError("duplicate prime in constraints")
        seen.add((P.p, P.index))
        byp.setdefault(P.p, {"val": {}, "cong": {}})["cong"][P.index] = (P, field.element(target), k)

    n = field.degree
    for slack in (1, 4, 8):
        residue_targets = []  # (modulus p^m, coefficient vector length n)
        shifts = {}  # p -> cleared power
        for p in sorted(byp):
            data = byp[p]
            primes = splitting_type(field, p)
            neg = min((v for (_, v) in data["val"].values()), default=0)
            shift = max(0, -neg)
            shifts[p] = shift
            need = max(
                [abs(v) + shift * P.e for (P, v) in data["val"].values()]
                + [-(-k // P.e) + shift for (P, _, k) in data["cong"].values()]
                + [1]
            )
            m = need + slack
            q = p ** m
            blocks = local_blocks(field, p, m)
            from .hensel import crt_idempotents

            idem = crt_idempotents(blocks, p, m)
            target_poly = [0] * n
            for P in primes:
                if P.index in data["val"]:
                    _, v = data["val"][P.index]
                    w = v + shift * P.e
                    if w == 0:
                        comp = [1]
                    else:
                        pi = uniformizer(field, P)
                        comp = _int_coeff_vector(pi ** w, q)
                elif P.index in data["cong"]:
                    _, tgt, k = data["cong"][P.index]
                    comp = _int_coeff_vector(tgt * (p ** shift), q)
                else:
                    comp = [p ** shift % q]
                contrib = _mulmod_vec(comp, idem[P.index], q)
                target_poly = [(a + b) % q for a, b in _zip_pad_int(target_poly, contrib)]
            # reduce modulo the full f to stay inside the power basis
            red = _reduce_mod_f(target_poly, field, q)
            residue_targets.append((q, red))

        # coefficient-wise CRT across rational primes
        moduli = [q for q, _ in residue_targets] or [1]
        beta_coords = []
        for i in range(n):
            ress = [vec[i] if i < len(vec) else 0 for _, vec in residue_targets] or [0]
            beta_coords.append(crt(ress, moduli) if residue_targets else 0)
        modulus_all = 1
        for q in moduli:
            modulus_all *= q

        denom = 1
        for p, s in shifts.items():
            denom *= p ** s

        for bump in range(0, 64):
            coords = list(beta_coords)
            coords[0] += bump * modulus_all
            if all(c == 0 for c in coords):
                continue
            beta = field.element([Fraction(c) for c in coords])
            cand = beta * Fraction(1, denom)
            if _verify_constraints(field, cand, valuations, congruences):
                if positivity and not omega_membership(field, cand, 2):
                    continue
                return cand
    raise SearchExhausted("strong approximation search exhausted")


def _int_coeff_vector(elem, q):
    import math

    out = []
    for c in elem.coords:
        if math.gcd(c.denominator, q) != 1:
            raise NormforgeError("congruence target has a denominator at p")
        out.append(c.numerator * pow(c.denominator, -1, q) % q)
    from .modp import trim

    return trim(out)


def _mulmod_vec(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    from .modp import trim

    return trim(out)


def _zip_pad_int(a, b):
    m = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)) for i in range(m)]


def _reduce_mod_f(vec, field, q):
    fint = [c % q for c in field.poly.int_coeffs()]
    _, r = _divmod_monic([c % q for c in vec], fint, q)
    return r + [0] * (field.degree - len(r))


def _verify_constraints(field, cand, valuations, congruences):
    if cand.is_zero():
        return False
    for P, v in valuations:
        if valuation(field, P, cand) != v:
            return False
    for P, target, k in congruences:
        diff = cand - field.element(target)
        if diff.is_zero():
            continue
        if valuation(field, P, diff) < k:
            return False
    return True
