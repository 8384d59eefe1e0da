"""Exact arithmetic in a henselian valued field K at finite precision.

Two backends share one element type:

* ``laurent-q`` -- formal Laurent series over Q in the uniformizer t,
* ``padic`` -- p-adic numbers for a chosen prime p.

Both have value group Z.  An element is stored as ``pi^v * u`` with a unit
part ``u`` known to ``rel`` digits (``rel = None`` means the unit is known
exactly: a polynomial in t over Q, resp. a rational with no p in it).  Ring
operations compute the provable output precision; a result whose known
digits all cancel degrades to an order bound ("zero modulo pi^A"), and any
question it cannot answer raises PrecisionExhausted.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DivisionByZero,
    FormulaSyntaxError,
    NegativeValue,
    PrecisionExhausted,
)
from .valq import INF, ValQ

LAURENT = "laurent-q"
PADIC = "padic"

# element kinds
_NUM = "n"      # nonzero leading digit known
_ZERO = "z"     # exact zero
_SMALL = "s"    # zero to its known precision: only v >= bound is known


def _int_vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _frac_vp(x: Fraction, p: int) -> int:
    return _int_vp(x.numerator, p) - _int_vp(x.denominator, p)


class Field:
    """Configuration of a backend: kind, prime (padic only), working precision."""

    __slots__ = ("backend", "p", "prec")

    def __init__(self, backend: str, p: int | None = None, prec: int = 64):
        if backend not in (LAURENT, PADIC):
            raise ValueError(f"unknown backend {backend!r}")
        if backend == PADIC:
            if p is None or p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"padic backend needs a prime, got {p!r}")
        else:
            p = None
        if prec < 8:
            raise ValueError("precision must be at least 8")
        self.backend = backend
        self.p = p
        self.prec = prec

    @staticmethod
    def laurent(prec: int = 64) -> "Field":
        return Field(LAURENT, prec=prec)

    @staticmethod
    def padic(p: int, prec: int = 64) -> "Field":
        return Field(PADIC, p, prec)

    def with_prec(self, prec: int) -> "Field":
        return Field(self.backend, self.p, prec)

    @property
    def residue_char(self) -> int:
        return 0 if self.backend == LAURENT else self.p

    def factorial_val(self, m: int) -> ValQ:
        """v(m!): zero over laurent-q, Legendre's formula over Q_p."""
        if self.backend == LAURENT or m <= 1:
            return ValQ(0)
        total, q = 0, self.p
        while q <= m:
            total += m // q
            q *= self.p
        return ValQ(total)

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.backend == other.backend
            and self.p == other.p
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.backend, self.p, self.prec))

    def __repr__(self):
        if self.backend == PADIC:
            return f"Field(padic, p={self.p}, prec={self.prec})"
        return f"Field(laurent-q, prec={self.prec})"

    # ---- element constructors -------------------------------------------

    def zero(self) -> "FieldElem":
        return FieldElem(self, _ZERO, None, None, None)

    def one(self) -> "FieldElem":
        return self.from_rational(1)

    def small(self, abs_bound: int) -> "FieldElem":
        """An element only known to satisfy v >= abs_bound."""
        return FieldElem(self, _SMALL, None, None, abs_bound)

    def from_rational(self, x) -> "FieldElem":
        x = Fraction(x)
        if x == 0:
            return self.zero()
        if self.backend == LAURENT:
            return FieldElem(self, _NUM, 0, (x,), None)
        v = _frac_vp(x, self.p)
        return FieldElem(self, _NUM, v, x / Fraction(self.p) ** v, None)

    def uniformizer(self) -> "FieldElem":
        if self.backend == LAURENT:
            return FieldElem(self, _NUM, 1, (Fraction(1),), None)
        return FieldElem(self, _NUM, 1, Fraction(1), None)

    def monomial(self, coeff, k: int) -> "FieldElem":
        """coeff * pi^k for a rational unit coeff."""
        coeff = Fraction(coeff)
        if coeff == 0:
            return self.zero()
        if self.backend == LAURENT:
            return FieldElem(self, _NUM, k, (coeff,), None)
        v = _frac_vp(coeff, self.p)
        return FieldElem(self, _NUM, v + k, coeff / Fraction(self.p) ** v, None)

    def from_terms(self, terms) -> "FieldElem":
        """Element from (exponent, rational coefficient) pairs; exact."""
        if self.backend == LAURENT:
            acc = {}
            for k, c in terms:
                acc[k] = acc.get(k, Fraction(0)) + Fraction(c)
            acc = {k: c for k, c in acc.items() if c != 0}
            if not acc:
                return self.zero()
            v = min(acc)
            top = max(acc)
            unit = tuple(acc.get(v + i, Fraction(0)) for i in range(top - v + 1))
            return FieldElem(self, _NUM, v, unit, None)
        total = Fraction(0)
        for k, c in terms:
            total += Fraction(c) * Fraction(self.p) ** k
        return self.from_rational(total)

    def from_unit(self, v: int, unit, rel: int | None) -> "FieldElem":
        """Low-level constructor; canonicalizes the unit part."""
        if self.backend == LAURENT:
            unit = tuple(Fraction(c) for c in unit)
            if not unit or unit[0] == 0:
                raise ValueError("laurent unit must have nonzero constant digit")
            if rel is not None:
                unit = unit[:rel]
            unit = _trim(unit)
            return FieldElem(self, _NUM, v, unit, rel)
        if rel is None:
            unit = Fraction(unit)
            if _frac_vp(unit, self.p) != 0:
                raise ValueError("padic unit must have valuation 0")
        else:
            unit = int(unit) % self.p ** rel
            if unit % self.p == 0:
                raise ValueError("padic unit must be nonzero mod p")
        return FieldElem(self, _NUM, v, unit, rel)

    def parse(self, text: str) -> "FieldElem":
        return parse_elem(self, text)


def _trim(unit: tuple) -> tuple:
    n = len(unit)
    while n > 0 and unit[n - 1] == 0:
        n -= 1
    return unit[:n]


class FieldElem:
    """An element of K known to finite (or exact) precision.

    Canonical form: ``pi^v * u`` with the leading digit of ``u`` nonzero,
    unless the element is an exact zero or an order bound.
    """

    __slots__ = ("field", "kind", "v", "unit", "rel")

    def __init__(self, field, kind, v, unit, rel):
        self.field = field
        self.kind = kind
        self.v = v
        self.unit = unit
        self.rel = rel

    # ---- state predicates -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True for the exact zero only."""
        return self.kind == _ZERO

    @property
    def is_small(self) -> bool:
        """True when only an order bound v >= abs_prec is known."""
        return self.kind == _SMALL

    @property
    def is_exact(self) -> bool:
        return self.kind == _ZERO or (self.kind == _NUM and self.rel is None)

    @property
    def abs_prec(self) -> ValQ:
        """Digits below this valuation are known."""
        if self.kind == _ZERO:
            return INF
        if self.kind == _SMALL:
            return ValQ(self.rel)
        if self.rel is None:
            return INF
        return ValQ(self.v + self.rel)

    def val(self) -> ValQ:
        if self.kind == _NUM:
            return ValQ(self.v)
        if self.kind == _ZERO:
            return INF
        raise PrecisionExhausted(
            f"element is zero modulo pi^{self.rel} but not known to be an exact zero"
        )

    # ---- digit access -------------------------------------------------------

    def unit_digits(self, k: int):
        """First k digits of the unit part (tuple over Q, or an int mod p^k)."""
        if self.kind != _NUM:
            raise ValueError("no unit part")
        if self.rel is not None and self.rel < k:
            raise PrecisionExhausted(f"need {k} unit digits, have {self.rel}")
        f = self.field
        if f.backend == LAURENT:
            u = self.unit[:k]
            return u + (Fraction(0),) * (k - len(u))
        if self.rel is None:
            den_inv = pow(self.unit.denominator, -1, f.p ** k)
            return self.unit.numerator * den_inv % f.p ** k
        return self.unit % f.p ** k

    def residue(self, delta) -> "Residue":
        """The class of the element in O / m_delta (digits 0..delta)."""
        delta = ValQ.of(delta)
        if not delta.is_int or delta < 0:
            raise NegativeValue(f"residue order must be a nonnegative integer, got {delta}")
        d = delta.as_int()
        f = self.field
        if self.kind == _ZERO:
            return Residue(f, d, _zero_res(f, d))
        if self.kind == _SMALL:
            if self.rel > d:
                return Residue(f, d, _zero_res(f, d))
            raise PrecisionExhausted("residue not determined at available precision")
        if self.v < 0:
            raise NegativeValue("residue of an element of negative valuation")
        if self.abs_prec <= ValQ(d):
            raise PrecisionExhausted(f"residue mod m_{d} needs {d + 1} known digits")
        if f.backend == LAURENT:
            digits = [Fraction(0)] * (d + 1)
            for i, c in enumerate(self.unit):
                if self.v + i > d:
                    break
                digits[self.v + i] = c
            return Residue(f, d, tuple(digits))
        u = self.unit_digits(d + 1 - self.v) if self.v <= d else 0
        return Residue(f, d, u * f.p ** self.v % f.p ** (d + 1))

    def coeff(self, k: int) -> Fraction:
        """Laurent backend: the coefficient of t^k (must be within precision)."""
        if self.field.backend != LAURENT:
            raise ValueError("coeff() is a laurent-q operation")
        if self.kind == _ZERO:
            return Fraction(0)
        if self.abs_prec <= ValQ(k):
            raise PrecisionExhausted(f"coefficient of t^{k} beyond precision")
        if self.kind == _SMALL or k < self.v:
            return Fraction(0)
        i = k - self.v
        return self.unit[i] if i < len(self.unit) else Fraction(0)

    # ---- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field.backend != self.field.backend or other.field.p != self.field.p:
                raise ValueError("mixed-backend arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self):
        if self.kind != _NUM:
            return self
        if self.field.backend == LAURENT:
            return FieldElem(self.field, _NUM, self.v, tuple(-c for c in self.unit), self.rel)
        u = -self.unit if self.rel is None else (-self.unit) % self.field.p ** self.rel
        return FieldElem(self.field, _NUM, self.v, u, self.rel)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _div(self, other)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self.field.one() / self) ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift(self, k: int) -> "FieldElem":
        """Multiply by pi^k (exact)."""
        if self.kind == _NUM:
            return FieldElem(self.field, _NUM, self.v + k, self.unit, self.rel)
        if self.kind == _SMALL:
            return FieldElem(self.field, _SMALL, None, None, self.rel + k)
        return self

    def truncate_rel(self, k: int) -> "FieldElem":
        """Forget digits beyond k relative digits."""
        if self.kind != _NUM or (self.rel is not None and self.rel <= k):
            return self
        f = self.field
        if f.backend == LAURENT:
            return FieldElem(f, _NUM, self.v, _trim(self.unit[:k]), k)
        return FieldElem(f, _NUM, self.v, self.unit_digits(k), k)

    def truncate_abs(self, k: int) -> "FieldElem":
        """Forget digits at valuation k and beyond (the class mod m_{>=k})."""
        if self.kind == _ZERO:
            return self
        if self.kind == _SMALL:
            return self if self.rel <= k else self.field.small(k)
        if self.v >= k:
            return self.field.small(k)
        return self.truncate_rel(k - self.v)

    # ---- comparison and printing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return (
            self.field.backend == other.field.backend
            and self.field.p == other.field.p
            and self.kind == other.kind
            and self.v == other.v
            and self.unit == other.unit
            and self.rel == other.rel
        )

    def __hash__(self):
        return hash((self.field.backend, self.field.p, self.kind, self.v, self.unit, self.rel))

    def __str__(self):
        return format_elem(self)

    def __repr__(self):
        return f"<{format_elem(self)}>"


class Residue:
    """A class in the ring O/m_delta, represented by its digits 0..delta."""

    __slots__ = ("field", "delta", "data")

    def __init__(self, field, delta, data):
        self.field = field
        self.delta = delta
        self.data = data

    @property
    def is_one(self) -> bool:
        return self == Residue(self.field, self.delta, _one_res(self.field, self.delta))

    def __eq__(self, other):
        return (
            isinstance(other, Residue)
            and self.field.backend == other.field.backend
            and self.field.p == other.field.p
            and self.delta == other.delta
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field.backend, self.field.p, self.delta, self.data))

    def __str__(self):
        if self.field.backend == LAURENT:
            return "(" + ", ".join(str(c) for c in self.data) + ")"
        return f"{self.data} mod {self.field.p}^{self.delta + 1}"

    def __repr__(self):
        return f"Residue[{self.delta}]({self})"


def _zero_res(field, d):
    return (Fraction(0),) * (d + 1) if field.backend == LAURENT else 0


def _one_res(field, d):
    if field.backend == LAURENT:
        return (Fraction(1),) + (Fraction(0),) * d
    return 1


# ---- arithmetic kernels -------------------------------------------------


def _add(x: FieldElem, y: FieldElem) -> FieldElem:
    f = x.field
    if x.kind == _ZERO:
        return y
    if y.kind == _ZERO:
        return x
    cap = min(x.abs_prec, y.abs_prec)  # digits below cap are known
    if x.kind == _SMALL and y.kind == _SMALL:
        return f.small(cap.as_int())
    if x.kind == _SMALL or y.kind == _SMALL:
        num = x if x.kind == _NUM else y
        if ValQ(num.v) < cap:
            return num.truncate_rel(cap.as_int() - num.v)
        return f.small(cap.as_int())
    # both numbers
    if x.v > y.v:
        x, y = y, x
    s = y.v - x.v
    if f.backend == LAURENT:
        if cap == INF:
            length = max(len(x.unit), s + len(y.unit))
        else:
            length = cap.as_int() - x.v
        digits = list(x.unit[:length]) + [Fraction(0)] * max(0, length - len(x.unit))
        for i, c in enumerate(y.unit):
            j = s + i
            if j >= length:
                break
            digits[j] += c
        lead = next((i for i, c in enumerate(digits) if c != 0), None)
        if lead is None:
            if cap == INF:
                return f.zero()
            return f.small(cap.as_int())
        rel = None if cap == INF else length - lead
        return FieldElem(f, _NUM, x.v + lead, _trim(tuple(digits[lead:])), rel)
    # padic
    if cap == INF:
        total = x.unit + y.unit * Fraction(f.p) ** s
        if total == 0:
            return f.zero()
        j = _frac_vp(total, f.p)
        return FieldElem(f, _NUM, x.v + j, total / Fraction(f.p) ** j, None)
    k = cap.as_int() - x.v
    w = (x.unit_digits(k) + y.unit_digits(max(0, k - s)) * f.p ** s) % f.p ** k
    if w == 0:
        return f.small(cap.as_int())
    j = _int_vp(w, f.p)
    return FieldElem(f, _NUM, x.v + j, (w // f.p ** j) % f.p ** (k - j), k - j)


def _mul(x: FieldElem, y: FieldElem) -> FieldElem:
    f = x.field
    if x.kind == _ZERO or y.kind == _ZERO:
        return f.zero()
    if x.kind == _SMALL or y.kind == _SMALL:
        bx = x.rel if x.kind == _SMALL else x.v
        by = y.rel if y.kind == _SMALL else y.v
        return f.small(bx + by)
    rel = _min_rel(x.rel, y.rel)
    if f.backend == LAURENT:
        unit = _lconv(x.unit, y.unit, rel)
        return FieldElem(f, _NUM, x.v + y.v, unit, rel)
    if rel is None:
        return FieldElem(f, _NUM, x.v + y.v, x.unit * y.unit, None)
    u = x.unit_digits(rel) * y.unit_digits(rel) % f.p ** rel
    return FieldElem(f, _NUM, x.v + y.v, u, rel)


def _div(x: FieldElem, y: FieldElem) -> FieldElem:
    f = x.field
    if y.kind == _ZERO:
        raise DivisionByZero("division by exact zero")
    if y.kind == _SMALL:
        raise PrecisionExhausted("divisor is zero to its known precision")
    if x.kind == _ZERO:
        return f.zero()
    if x.kind == _SMALL:
        return f.small(x.rel - y.v)
    rel = _min_rel(x.rel, y.rel)
    if f.backend == PADIC:
        if rel is None:
            return FieldElem(f, _NUM, x.v - y.v, x.unit / y.unit, None)
        k = rel
        u = x.unit_digits(k) * pow(y.unit_digits(k), -1, f.p ** k) % f.p ** k
        return FieldElem(f, _NUM, x.v - y.v, u, k)
    # laurent: exact when the unit division terminates, else truncate
    if rel is None:
        q = _lpolydiv_exact(x.unit, y.unit)
        if q is not None:
            return FieldElem(f, _NUM, x.v - y.v, q, None)
        rel = f.prec
    unit = _lconv(x.unit, _linv(y.unit, rel), rel)
    return FieldElem(f, _NUM, x.v - y.v, unit, rel)


def _min_rel(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _lconv(a: tuple, b: tuple, rel) -> tuple:
    n = len(a) + len(b) - 1 if rel is None else min(rel, len(a) + len(b) - 1)
    if len(a) * len(b) > 72:
        # clear denominators once: integer convolution avoids the per-term
        # gcd cost of Fraction arithmetic on long units
        da = 1
        for c in a:
            da = da * c.denominator // _gcd(da, c.denominator)
        db = 1
        for c in b:
            db = db * c.denominator // _gcd(db, c.denominator)
        ia = [int(c * da) for c in a]
        ib = [int(c * db) for c in b]
        out = [0] * n
        for i, ai in enumerate(ia):
            if i >= n or not ai:
                continue
            top = min(len(ib), n - i)
            for j in range(top):
                if ib[j]:
                    out[i + j] += ai * ib[j]
        den = da * db
        return _trim(tuple(Fraction(v, den) for v in out))
    out = [Fraction(0)] * n
    for i, ai in enumerate(a):
        if i >= n or ai == 0:
            continue
        for j, bj in enumerate(b):
            k = i + j
            if k >= n:
                break
            if bj != 0:
                out[k] += ai * bj
    return _trim(tuple(out))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _linv(u: tuple, k: int) -> tuple:
    """Power-series inverse of a unit, to k digits (Newton doubling)."""
    y = (1 / u[0],)
    n = 1
    while n < k:
        n = min(2 * n, k)
        uy = _lconv(u[:n], y, n)
        two_minus = [-c for c in uy]
        two_minus[0] += 2
        y = _lconv(y, _trim(tuple(two_minus)) or (Fraction(0),), n)
        if not y:
            raise ArithmeticError("series inversion lost its leading digit")
    return _trim(tuple(y))


def _lpolydiv_exact(a: tuple, b: tuple):
    """Exact quotient a/b of unit polynomials, or None if it does not divide."""
    if len(b) == 1:
        return tuple(c / b[0] for c in a)
    if len(a) < len(b):
        return None
    rem = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = rem[i + len(b) - 1] / b[-1]
        q[i] = c
        if c != 0:
            for j, bj in enumerate(b):
                rem[i + j] -= c * bj
    if any(c != 0 for c in rem):
        return None
    return _trim(tuple(q))


# ---- literals: parsing and canonical printing -----------------------------


def format_elem(x: FieldElem) -> str:
    f = x.field
    if x.kind == _ZERO:
        return "0"
    if f.backend == LAURENT:
        if x.kind == _SMALL:
            return f"O(t^{x.rel})"
        parts = []
        for i, c in enumerate(x.unit):
            if c == 0:
                continue
            k = x.v + i
            parts.append(str(c) if k == 0 else f"{c}*t^{k}")
        if not parts:
            parts.append("0")
        s = " + ".join(parts)
        if x.rel is not None:
            s += f" + O(t^{x.v + x.rel})"
        return s
    if x.kind == _SMALL:
        return f"O({f.p}^{x.rel})"
    if x.rel is None:
        q = x.unit * Fraction(f.p) ** x.v
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    q = Fraction(x.unit) * Fraction(f.p) ** x.v
    num = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return f"{num} + O({f.p}^{x.v + x.rel})"


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, s):
        self.skip_ws()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s):
        if not self.eat(s):
            raise FormulaSyntaxError(f"expected {s!r}", self.pos)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            raise FormulaSyntaxError("expected integer", start)
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        save = self.pos
        if self.eat("/"):
            try:
                den = self.integer()
            except FormulaSyntaxError:
                self.pos = save
                return Fraction(num)
            if den <= 0:
                raise FormulaSyntaxError("denominator must be positive", save)
            return Fraction(num, den)
        return Fraction(num)

    def done(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_elem(field: Field, text: str) -> FieldElem:
    """Parse a series / p-adic literal, e.g. ``1 + -1*t^2 + O(t^8)`` or ``3/2 + O(7^10)``."""
    sc = _Scanner(text)
    x = _parse_elem_body(field, sc)
    if not sc.done():
        raise FormulaSyntaxError("trailing input in literal", sc.pos)
    return x


def _parse_elem_body(field: Field, sc: _Scanner) -> FieldElem:
    terms = []
    bound = None
    first = True
    while True:
        if not first and not (sc.eat("+") or sc.peek() == "-"):
            break
        if sc.eat("O("):
            if field.backend == LAURENT:
                sc.expect("t")
                sc.expect("^")
                bound = sc.integer()
            else:
                base = sc.integer()
                if base != field.p:
                    raise FormulaSyntaxError(f"precision base {base} != p = {field.p}", sc.pos)
                sc.expect("^")
                bound = sc.integer()
            sc.expect(")")
            break
        terms.append(_parse_term(field, sc))
        first = False
    x = field.from_terms(terms)
    if bound is None:
        return x
    if x.is_zero or x.val() >= ValQ(bound):
        return field.small(bound)
    return x.truncate_rel(bound - x.v)


def _parse_term(field: Field, sc: _Scanner):
    # term = rat ["*t^" int] | ["-"] "t" ["^" int]     (padic: rat only)
    sc.skip_ws()
    if field.backend == LAURENT:
        neg = False
        save = sc.pos
        if sc.eat("-") and sc.peek() == "t":
            neg = True
        elif sc.pos != save:
            sc.pos = save
        if sc.eat("t"):
            k = sc.integer() if sc.eat("^") else 1
            return (k, Fraction(-1 if neg else 1))
        c = sc.rational()
        if sc.eat("*"):
            sc.expect("t")
            k = sc.integer() if sc.eat("^") else 1
            return (k, c)
        return (0, c)
    return (0, sc.rational())
