"""Totally real cyclic fields via Gaussian periods, and compositum bookkeeping.

The degree-d subfield of Q(xi_ell) (ell prime, d | ell-1) is generated by the
period eta = sum of xi_ell^h over the index-d subgroup H of (Z/ell)*.  Its
minimal polynomial is expanded with exact arithmetic in Z[xi_ell], no floats.
Residue degrees in the subfield come straight from the image of p in the
quotient group (Z/ell)*/H, which is the Frobenius.

The auxiliary prime search realizes the construction "ell == 1 mod q^m with
q not a q-th power mod ell"; the degree-q layer generator of the compositum
is produced explicitly as a Lagrange resolvent q-th power in Z[xi_{q ell}].
"""

from fractions import Fraction

from .errors import HypothesisFail, NormforgeError, RamifiedCase, SearchExhausted
from .finitefield import FiniteField, power_residue_test
from .intfunc import is_prime, multiplicative_order
from .polyq import UniPoly, cyclotomic_poly
from .zfactor import is_irreducible_over_q


class CyclicFieldData:
    """Degree-d subfield of Q(xi_ell): period polynomial and subgroup."""

    def __init__(self, ell, d, period_poly, subgroup):
        self.ell = ell
        self.degree = d
        self.period_poly = period_poly
        self.subgroup = tuple(sorted(subgroup))
        # totally real iff -1 lies in the subgroup, i.e. (ell-1)/d is even
        self.totally_real = d == 1 or ((ell - 1) // d) % 2 == 0

    def number_field(self):
        from .numberfield import NumberField

        return NumberField(
            self.period_poly, name=f"Q(eta_{self.ell},{self.degree})", check_irreducible=False
        )

    def __repr__(self):
        return f"CyclicFieldData(ell={self.ell}, d={self.degree})"

    def to_json(self):
        return {
            "ell": self.ell,
            "degree": self.degree,
            "period_poly": self.period_poly.to_json(),
            "subgroup": list(self.subgroup),
            "totally_real": self.totally_real,
        }


def find_auxiliary_ell(q, m, bound=10 ** 5):
    """Least prime ell == 1 mod q^m with q not a q-th power mod ell.

    For q = 2 the modulus is raised to at least 4 so the quadratic subfield
    of Q(xi_ell) is totally real ((ell-1)/2 even); higher 2-power levels
    cannot be totally real at all (ell == 1 mod 8 forces 2 to be a square).
    """
    if not is_prime(q) or m < 1:
        raise NormforgeError("q must be prime and m >= 1")
    step = q ** m
    if q == 2:
        step = max(step, 4)
    ell = 1 + step
    while ell <= bound:
        if is_prime(ell) and ell != q:
            if not power_residue_test(q % ell, FiniteField(ell), q):
                return ell
        ell += step
    raise SearchExhausted(f"no auxiliary prime below {bound} (they are infinite in supply)")


def _primitive_root(ell):
    group = ell - 1
    for g in range(2, ell):
        if multiplicative_order(g, ell) == group:
            return g
    raise NormforgeError("no primitive root found (ell not prime?)")


def subgroup_of_index(ell, d):
    """The unique index-d subgroup of (Z/ell)*: the d-th powers."""
    if (ell - 1) % d != 0:
        raise NormforgeError("d must divide ell - 1")
    return sorted({pow(y, d, ell) for y in range(1, ell)})


class CycloVec:
    """Element of Q(xi_n) as a UniPoly reduced mod the n-th cyclotomic."""

    __slots__ = ("n", "poly")

    def __init__(self, n, poly):
        self.n = n
        self.poly = poly % cyclotomic_poly(n)

    @classmethod
    def root_power(cls, n, k):
        return cls(n, UniPoly.monomial(Fraction(1), k % n))

    @classmethod
    def integer(cls, n, c):
        return cls(n, UniPoly([Fraction(c)]))

    def __add__(self, other):
        return CycloVec(self.n, self.poly + other.poly)

    def __sub__(self, other):
        return CycloVec(self.n, self.poly - other.poly)

    def __mul__(self, other):
        return CycloVec(self.n, self.poly * other.poly)

    def __pow__(self, e):
        out = CycloVec.integer(self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_rational(self):
        return all(c == 0 for c in self.poly.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise NormforgeError("cyclotomic element is not rational")
        return self.poly.coeffs[0] if self.poly.coeffs else Fraction(0)


def gaussian_period_subfield(ell, d):
    """CyclicFieldData for the degree-d subfield of Q(xi_ell).

    The period polynomial prod_j (y - eta_j) is expanded with coefficients
    in Z[xi_ell]; the result must come out rational, and irreducibility over
    Q is asserted.
    """
    if not is_prime(ell):
        raise NormforgeError("ell must be prime")
    H = subgroup_of_index(ell, d)
    if d == 1:
        return CyclicFieldData(ell, 1, UniPoly([1, 1]), H)
    g = _primitive_root(ell)
    periods = []
    for j in range(d):
        rep = pow(g, j, ell)
        acc = CycloVec.integer(ell, 0)
        for h in H:
            acc = acc + CycloVec.root_power(ell, rep * h)
        periods.append(acc)
    coeffs = [CycloVec.integer(ell, 1)]
    for eta in periods:
        new = [CycloVec.integer(ell, 0) for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * eta
        coeffs = new
    rat = []
    for c in coeffs:
        if not c.is_rational():
            raise AssertionError("period polynomial has an irrational coefficient")
        rat.append(c.rational_value())
    poly = UniPoly(rat)
    assert poly.is_monic() and poly.degree == d
    if not is_irreducible_over_q(poly):
        raise AssertionError("period polynomial is not irreducible")
    return CyclicFieldData(ell, d, poly, H)


def frobenius_residue_degree(ell, d, p):
    """Residue degree of p in the degree-d subfield: order of p in (Z/ell)*/H."""
    if p == ell:
        raise RamifiedCase("ell is totally ramified in its own cyclotomic subfields")
    if not is_prime(p):
        raise NormforgeError("p must be prime")
    size_H = (ell - 1) // d
    f = 1
    cur = p % ell
    while pow(cur, size_H, ell) != 1:  # cur in H iff cur^{|H|} == 1
        cur = cur * p % ell
        f += 1
        if f > d:
            raise AssertionError("Frobenius order exceeded the group order")
    return f


def compositum_degree_data(G, H):
    """([GH:G], cyclic order of Gal(GH/G)) for a number field G and cyclic H.

    [GH:G] = [H : G cap H]; the intersection is the largest subfield of H
    whose period polynomial has a root in G (H cyclic, so one subfield per
    divisor of the degree).
    """
    from .kpoly import roots_in_field

    d = H.degree
    if d == 1:
        return 1, 1
    d_int = 1
    for dprime in sorted((k for k in range(2, d + 1) if d % k == 0), reverse=True):
        if G.degree % dprime != 0:
            continue
        sub = gaussian_period_subfield(H.ell, dprime)
        if roots_in_field(G, sub.period_poly):
            d_int = dprime
            break
    rel = d // d_int
    return rel, rel


def nonsplit_sublayer(g_prime, H, q):
    """Predicted (e_mult, f_mult) of the degree-q top layer GH/G-hat at g_prime.

    Hypotheses: H cyclic of degree q^r with the base rational prime inert in
    H, and ord_q(f(p_G/p)) = m < r.  The layer is unramified (only ell
    ramifies in H and g_prime.p != ell) and inert at every G-hat factor, so
    the prediction is e x 1, f x q.
    """
    p = g_prime.p
    d = H.degree
    r = 0
    dd = d
    while dd % q == 0:
        dd //= q
        r += 1
    if dd != 1 or r < 1:
        raise HypothesisFail(["H degree not a power of q"], f"[H:Q] = {d}")
    if p == H.ell:
        raise RamifiedCase("base prime ramifies in H")
    f_in_H = frobenius_residue_degree(H.ell, d, p)
    if f_in_H != d:
        raise HypothesisFail(["p splits in H"], f"f_H(p) = {f_in_H} < {d}")
    m = 0
    fg = g_prime.f_deg
    while fg % q == 0:
        fg //= q
        m += 1
    if m >= r:
        raise HypothesisFail(["ord_q f(p_G/p) >= r"], f"m = {m}, r = {r}")
    return 1, q


def kummer_generator(ell, q):
    """(a, H-data) with Q(xi_q)(a^(1/q)) = Q(xi_q) * H, H the degree-q period field.

    a is the q-th power of the Lagrange resolvent r = sum_j xi_q^j eta_j,
    computed exactly in Z[xi_{q ell}] and projected back into Q(xi_q).
    """
    from .numberfield import NumberField

    n = q * ell
    Hdata = gaussian_period_subfield(ell, q)
    g = _primitive_root(ell)
    periods = []
    for j in range(q):
        rep = pow(g, j, ell)
        acc = CycloVec.integer(n, 0)
        for h in Hdata.subgroup:
            acc = acc + CycloVec.root_power(n, q * rep * h)  # xi_ell = xi_n^q
        periods.append(acc)
    xi_q = CycloVec.root_power(n, ell)  # xi_q = xi_n^ell
    resolvent = CycloVec.integer(n, 0)
    for j, eta in enumerate(periods):
        resolvent = resolvent + (xi_q ** j) * eta
    a_vec = resolvent ** q
    K = NumberField.cyclotomic(q)
    coords = _project_to_cyclotomic_subfield(a_vec, n, ell, q)
    a = K.element(coords)
    if a.is_zero():
        raise NormforgeError("Lagrange resolvent vanished; no Kummer generator")
    return a, Hdata


def real_cyclotomic_minpoly(m):
    """Minimal polynomial of 2 cos(2 pi / m) over Q, exact.

    Solved by linear algebra in Q[x]/Phi_m on the powers of beta = xi + xi^(-1);
    the degree is phi(m)/2 for m > 2.
    """
    from .intfunc import euler_phi

    if m < 3:
        raise NormforgeError("m must be at least 3")
    d = euler_phi(m) // 2
    beta = CycloVec.root_power(m, 1) + CycloVec.root_power(m, m - 1)
    dim = cyclotomic_poly(m).degree
    powers = [CycloVec.integer(m, 1)]
    for _ in range(d):
        powers.append(powers[-1] * beta)

    def vec_of(cv):
        return [cv.poly.coeffs[i] if i < len(cv.poly.coeffs) else Fraction(0)
                for i in range(dim)]

    mat = [[vec_of(powers[k])[i] for k in range(d)] for i in range(dim)]
    rhs = [-x for x in vec_of(powers[d])]
    sol = _solve_linear(mat, rhs)
    if sol is None:
        raise AssertionError("power basis of 2cos(2pi/m) is degenerate")
    poly = UniPoly(list(sol) + [Fraction(1)])
    assert is_irreducible_over_q(poly)
    return poly


def _project_to_cyclotomic_subfield(vec, n, ell, q):
    """Coordinates of vec in the power basis of Q(xi_q), xi_q = xi_n^ell."""
    basis = [CycloVec.root_power(n, ell * i).poly for i in range(q - 1)]
    target = vec.poly
    dim = cyclotomic_poly(n).degree
    mat = [[Fraction(0)] * (q - 1) for _ in range(dim)]
    rhs = [Fraction(0)] * dim
    for j, b in enumerate(basis):
        for i in range(dim):
            mat[i][j] = b.coeffs[i] if i < len(b.coeffs) else Fraction(0)
    for i in range(dim):
        rhs[i] = target.coeffs[i] if i < len(target.coeffs) else Fraction(0)
    sol = _solve_linear(mat, rhs)
    if sol is None:
        raise NormforgeError("element does not lie in the cyclotomic subfield")
    return sol


def _solve_linear(mat, rhs):
    """Exact solution of an overdetermined consistent system, else None."""
    rows, cols = len(mat), len(mat[0]) if mat else 0
    aug = [list(row) + [r] for row, r in zip(mat, rhs)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        scale = aug[r][c]
        aug[r] = [v / scale for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    sol = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivots):
        sol[c] = aug[row_idx][cols]
    for i in range(rows):
        if sum(mat[i][j] * sol[j] for j in range(cols)) != rhs[i]:
            return None
    return sol
