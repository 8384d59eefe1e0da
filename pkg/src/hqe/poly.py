"""Univariate polynomials over the valued field: recentering, division, gcd,
Newton-polygon bookkeeping, and root search over the residue field."""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionExhausted
from .field import LAURENT, Field, FieldElem
from .valq import INF, NEG_INF, ValQ, vmin


class Poly:
    """Coefficient-list polynomial; leading coefficient is not an exact zero
    (the zero polynomial has an empty coefficient tuple)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @staticmethod
    def from_rationals(field: Field, rationals) -> "Poly":
        return Poly(field, [field.from_rational(c) for c in rationals])

    @property
    def degree(self):
        """Degree as an int, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> FieldElem:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x: FieldElem) -> FieldElem:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return Poly(self.field, [c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return Poly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def shift_unknown(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Poly(self.field, [self.field.zero()] * k + list(self.coeffs))

    def map_arg(self, scale: FieldElem, offset: FieldElem) -> "Poly":
        """The polynomial g(x) = f(scale*x + offset)."""
        shifted = taylor_shift(self, offset)
        power = self.field.one()
        out = []
        for c in shifted:
            out.append(c * power)
            power = power * scale
        return Poly(self.field, out)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            cs = str(c)
            if i == 0:
                parts.append(f"({cs})")
            elif i == 1:
                parts.append(f"({cs})*x")
            else:
                parts.append(f"({cs})*x^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def derivative(f: Poly, n: int = 1) -> Poly:
    """The n-th derivative; n = 0 returns f, n beyond the degree returns 0."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    coeffs = list(f.coeffs)
    for _ in range(n):
        coeffs = [coeffs[i] * i for i in range(1, len(coeffs))]
    return Poly(f.field, coeffs)


def taylor_shift(f: Poly, alpha: FieldElem):
    """Coefficients of f recentered at alpha: f(x) = sum a_i (x - alpha)^i."""
    b = list(f.coeffs)
    d = len(b) - 1
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            b[j] = b[j] + alpha * b[j + 1]
    return tuple(b) if b else (f.field.zero(),)


def recompose(field: Field, coeffs, alpha: FieldElem) -> Poly:
    """Inverse of taylor_shift: the polynomial sum a_i (x - alpha)^i."""
    b = list(coeffs)
    d = len(b) - 1
    for i in range(d - 1, -1, -1):
        for j in range(i, d):
            b[j] = b[j] - alpha * b[j + 1]
    return Poly(field, b)


def poly_divmod(g: Poly, f: Poly):
    """Quotient and remainder with deg r < deg f.

    Coefficient divisions go through the field, so over laurent-q the result
    is exact whenever each step divides exactly (monic or monomial leading
    coefficient in particular) and carries working precision otherwise.
    """
    if f.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    field = g.field
    rem = list(g.coeffs)
    df, dg = f.degree, g.degree
    if dg is None or dg < df:
        return Poly(field, []), g
    q = [field.zero()] * (dg - df + 1)
    lead = f.leading()
    for i in range(dg - df, -1, -1):
        c = rem[i + df] / lead
        q[i] = c
        if not c.is_zero:
            for j in range(df + 1):
                rem[i + j] = rem[i + j] - c * f.coeffs[j]
    return Poly(field, q), Poly(field, rem[:df])


def poly_pseudo_divmod(g: Poly, f: Poly):
    """Exact pseudo-division: lead(f)^k * g = q*f + r with deg r < deg f.

    No coefficient divisions are performed, so exact inputs give exact
    output.  Returns (q, r, k).
    """
    if f.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    field = g.field
    df, dg = f.degree, g.degree
    if dg is None or dg < df:
        return Poly(field, []), g, 0
    lead = f.leading()
    rem = list(g.coeffs)
    q = [field.zero()] * (dg - df + 1)
    k = 0
    for i in range(dg - df, -1, -1):
        c = rem[i + df]
        if c.is_zero:
            continue
        k += 1
        rem = [r * lead for r in rem]
        q = [qq * lead for qq in q]
        q[i] = c
        for j in range(df + 1):
            rem[i + j] = rem[i + j] - c * f.coeffs[j]
    return Poly(field, q), Poly(field, rem[:df]), k


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd via the pseudo-remainder chain (exact on exact inputs)."""
    a, b = f, g
    while not b.is_zero:
        _, r, _ = poly_pseudo_divmod(a, b)
        # strip the valuation content so coefficients stay tame
        r = _strip_content(r)
        a, b = b, r
    if a.is_zero:
        return a
    return monic(a)


def monic(f: Poly) -> Poly:
    lead = f.leading()
    return Poly(f.field, [c / lead for c in f.coeffs])


def _strip_content(f: Poly) -> Poly:
    if f.is_zero:
        return f
    try:
        vals = [c.val() for c in f.coeffs if not c.is_zero]
    except PrecisionExhausted:
        return f
    m = vmin(vals)
    if not m.is_finite or m == ValQ(0):
        return f
    return Poly(f.field, [c.shift(-m.as_int()) if not c.is_zero else c for c in f.coeffs])


def exact_divide(g: Poly, f: Poly) -> Poly:
    """The quotient g/f when f divides g; raises if the remainder is not
    (provably) zero."""
    q, r = poly_divmod(g, f)
    for c in r.coeffs:
        if c.is_zero or c.is_small:
            continue
        raise ValueError("polynomial does not divide")
    return q


def squarefree_part(f: Poly) -> Poly:
    """f / gcd(f, f'), monic up to the original leading coefficient."""
    d = f.degree
    if d is None or d <= 1:
        return f
    g = poly_gcd(f, derivative(f))
    if g.degree == 0:
        return f
    return exact_divide(f, g)


# ---- Newton-polygon data ---------------------------------------------------


def coeff_vals(f: Poly):
    """Pairs (i, v(a_i)) over the support of f (exact-zero coefficients are
    skipped; a coefficient that is zero only to precision raises)."""
    out = []
    for i, c in enumerate(f.coeffs):
        if c.is_zero:
            continue
        out.append((i, c.val()))
    return out


def argmin_indices(pairs, r: ValQ):
    """Indices i minimizing v(a_i) + i*r among the given (i, v) pairs.

    r = -inf selects the largest support index, r = +inf the smallest.
    """
    if not pairs:
        return []
    if r == INF:
        i0 = min(i for i, _ in pairs)
        return [i0]
    if r == NEG_INF:
        i0 = max(i for i, _ in pairs)
        return [i0]
    best = None
    out = []
    for i, v in pairs:
        w = v + r * i
        if best is None or w < best:
            best = w
            out = [i]
        elif w == best:
            out.append(i)
    return out


def lower_hull(pairs):
    """Vertices of the lower convex hull of {(i, v(a_i))}, by increasing i."""
    pts = sorted((i, v.as_fraction()) for i, v in pairs if v.is_finite)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def slope_root_counts(f: Poly):
    """[(s, n)]: f has exactly n roots of valuation s in the algebraic
    closure, for each finite slope s (s as a Fraction)."""
    pairs = coeff_vals(f)
    hull = lower_hull(pairs)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = -(y2 - y1) / (x2 - x1)
        out.append((s, int(x2 - x1)))
    return out


def count_roots_val_at_least(f: Poly, bound: ValQ) -> int:
    """Number of algebraic-closure roots (with multiplicity) of valuation
    >= bound, excluding roots at exactly 0."""
    n = 0
    for s, k in slope_root_counts(f):
        if ValQ.of(s) >= bound:
            n += k
    low = min(i for i, _ in coeff_vals(f)) if not f.is_zero else 0
    return n + low  # x = 0 counts (valuation +inf)


# ---- roots over the residue field ------------------------------------------


def residue_roots(field: Field, coeffs):
    """All roots, in the residue field, of the residue polynomial given by
    ``coeffs`` (Fractions over laurent-q, integers mod p over padic).

    Over Q this is an exhaustive rational-root search; over F_p a scan.
    """
    if field.backend == LAURENT:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("zero residue polynomial")
        roots = set()
        while cs and cs[0] == 0:
            roots.add(Fraction(0))
            cs.pop(0)
        if len(cs) > 1:
            from math import lcm

            mult = lcm(*[c.denominator for c in cs])
            ics = [int(c * mult) for c in cs]
            for num in _divisors(abs(ics[0])):
                for den in _divisors(abs(ics[-1])):
                    for cand in (Fraction(num, den), Fraction(-num, den)):
                        if sum(c * cand ** i for i, c in enumerate(cs)) == 0:
                            roots.add(cand)
        return sorted(roots)
    p = field.p
    cs = [int(c) % p for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("zero residue polynomial")
    out = []
    for u in range(p):
        acc = 0
        for c in reversed(cs):
            acc = (acc * u + c) % p
        if acc == 0:
            out.append(u)
    return out


def _divisors(n: int):
    if n == 0:
        return []
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
