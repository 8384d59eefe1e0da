"""Constructive root production: Newton lifting under the henselian bound
v(P(a)) > 2 v(P'(a)) + delta, a certified search for all K-rational roots of
a polynomial, and the passage from collisions to roots of derivatives."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PrecisionExhausted, PreconditionViolated
from .field import LAURENT, Field, FieldElem
from .poly import (
    Poly,
    coeff_vals,
    count_roots_val_at_least,
    derivative,
    residue_roots,
    squarefree_part,
    taylor_shift,
    _strip_content,
)
from .rv import rv
from .valq import INF, ValQ, vmin

_MAX_NEWTON_STEPS = 64


@dataclass(frozen=True)
class LiftCertificate:
    """A root produced by Newton iteration, with the achieved separation
    from the starting point (a lower bound on v(a - b))."""

    root: FieldElem
    iterations: int
    separation: ValQ


def _val_lb(x: FieldElem) -> ValQ:
    """A usable lower bound on v(x): exact when known, the order bound for
    an element that is zero to its precision."""
    if x.is_zero:
        return INF
    if x.is_small:
        return ValQ(x.rel)
    return x.val()


def _refield(x: FieldElem, field: Field) -> FieldElem:
    """The same element viewed in a field clone of different working precision."""
    return FieldElem(field, x.kind, x.v, x.unit, x.rel)


def newton_lift(P: Poly, a: FieldElem, delta=0, target=None) -> LiftCertificate:
    """Lift the approximate root a of P to a root b with v(a - b) > delta.

    Requires coefficients in O, a in O, and v(P(a)) > 2 v(P'(a)) + delta.
    The iteration x <- x - P(x)/P'(x) is verified to strictly increase
    v(P(x)) at every step and stops once v(P(x)) reaches the certification
    target (the working precision by default) or P(x) vanishes at the
    precision available.
    """
    delta = ValQ.of(delta)
    field = P.field
    for c in P.coeffs:
        if not (c.is_zero or _val_lb(c) >= ValQ(0)):
            raise PreconditionViolated("polynomial must have coefficients in O")
    if not (a.is_zero or _val_lb(a) >= ValQ(0)):
        raise PreconditionViolated("starting point must lie in O")
    dP = derivative(P)
    fa = P(a)
    if fa.is_zero:
        return LiftCertificate(a, 0, INF)
    va = _val_lb(fa)
    va_d = dP(a)
    if va_d.is_zero or va_d.is_small:
        raise PreconditionViolated("P'(a) is (indistinguishable from) zero")
    vd = va_d.val()
    if not va > vd * 2 + delta:
        raise PreconditionViolated(
            f"henselian bound fails: v(P(a)) = {va} <= 2*{vd} + {delta}"
        )
    separation = va - vd
    vd_int = vd.as_int() if vd.is_finite else 0
    if target is None:
        target = ValQ(field.prec)
    base_target = target
    # the root is known to v(P(x)) - v(P'(x)) digits, so certifying prec
    # root digits needs v(P(x)) past prec + v(P'); best effort when the
    # input data cannot support that depth
    target = max(target, ValQ(field.prec) + vd)
    # every step loses about v(P') digits of absolute precision over about
    # log2(target) steps, so give that much headroom and truncate at the end
    margin = 10 * max(0, vd_int) + 16
    work = field.with_prec(field.prec + 2 * vd_int + margin)
    # iterates never need digits beyond the certification target plus the
    # per-step losses, so cap their length independently of the field
    cap = min(work.prec, (target.as_int() if target.is_finite else field.prec) + margin)
    P = Poly(work, [_refield(c, work) for c in P.coeffs])
    dP = Poly(work, [_refield(c, work) for c in dP.coeffs])
    x = _refield(a, work)
    fx = P(x)
    vfx = _val_lb(fx)
    steps = 0
    dfx = None
    while vfx < target:
        if fx.is_small:
            # zero at the precision the data supports; nothing more can be
            # revealed by iterating
            if ValQ(fx.rel) >= base_target:
                break
            raise PrecisionExhausted(
                f"root certified only modulo pi^{fx.rel}, target {base_target}"
            )
        if steps >= _MAX_NEWTON_STEPS:
            raise PrecisionExhausted("iteration budget exhausted before certification")
        dfx = dP(x)
        if dfx.is_zero or dfx.is_small:
            raise PrecisionExhausted("derivative lost to precision during iteration")
        x = (x - fx / dfx).truncate_rel(cap)
        steps += 1
        fx = P(x)
        if fx.is_zero or fx.is_small:
            vfx = _val_lb(fx)
            continue
        new_vfx = fx.val()
        if not new_vfx > vfx:
            raise PrecisionExhausted(
                f"v(P(x)) failed to increase ({new_vfx} after {vfx})"
            )
        vfx = new_vfx
    if not fx.is_zero:
        # drop digits beyond the certified accuracy of the root
        last_vd = dfx.val() if dfx is not None and not (dfx.is_zero or dfx.is_small) else vd
        accuracy = vfx - last_vd
        if accuracy.is_finite and not x.is_zero and not x.is_small:
            x = x.truncate_abs(accuracy.as_int())
    root = _refield(x.truncate_rel(field.prec), field)
    return LiftCertificate(root, steps, separation)


# ---- all K-rational roots ---------------------------------------------------


def elem_sort_key(x: FieldElem, digits: int = 6):
    """Deterministic ordering key for field elements (roots, centers)."""
    if x.is_zero:
        return (0, 0, ())
    if x.is_small:
        return (1, x.rel, ())
    take = digits if x.rel is None else min(digits, x.rel)
    u = x.unit_digits(take)
    if x.field.backend == LAURENT:
        key = tuple(u)
    else:
        key = tuple(_digit(u, x.field.p, i) for i in range(take))
    return (2, x.v, key)


def _digit(u: int, p: int, i: int) -> int:
    return (u // p**i) % p


_ROOTS_CACHE: dict = {}


def field_roots(g: Poly) -> list[FieldElem]:
    """All roots of g in K, certified by Newton lifting; exact whenever an
    exact value can be reconstructed and verified.  Deterministic order."""
    field = g.field
    if g.is_zero:
        raise PreconditionViolated("root search on the zero polynomial")
    if g.degree == 0:
        return []
    key = (field, g.coeffs)
    cached = _ROOTS_CACHE.get(key)
    if cached is not None:
        return list(cached)
    g = squarefree_part(g)
    roots: list[FieldElem] = []
    low = next((i for i, c in enumerate(g.coeffs) if not c.is_zero), 0)
    if low > 0:
        roots.append(field.zero())
        g = Poly(field, g.coeffs[low:])
    if g.degree >= 1:
        for s in _integer_slopes(g):
            G = _scale_to_radius(g, s)
            pi_s = field.monomial(1, s)
            for u in _roots_in_O(G, 0, only_units=True):
                roots.append(_snap_exact(g, pi_s * u))
    roots.sort(key=elem_sort_key)
    if len(_ROOTS_CACHE) > 4096:
        _ROOTS_CACHE.clear()
    _ROOTS_CACHE[key] = tuple(roots)
    return roots


def _snap_exact(g: Poly, x: FieldElem) -> FieldElem:
    """Replace a truncated root by an exact one when a short exact candidate
    verifies g(candidate) = 0 in exact arithmetic."""
    if x.is_exact or not x.field or x.is_zero or x.is_small:
        return x
    field = x.field
    candidates = []
    if field.backend == LAURENT:
        candidates.append(field.from_unit(x.v, x.unit, None))
        trimmed = x.truncate_rel(max(1, (x.rel or field.prec) - 4))
        candidates.append(field.from_unit(trimmed.v, trimmed.unit, None))
    else:
        k = max(4, (x.rel or field.prec) - 4)
        fr = _rational_reconstruct(x.unit_digits(k), field.p**k)
        if fr is not None and fr != 0:
            candidates.append(field.from_rational(fr).shift(x.v))
    for cand in candidates:
        if g(cand).is_zero:
            return cand
    return x


def _rational_reconstruct(u: int, m: int):
    """A fraction n/d = u mod m with |n|, d <= sqrt(m/2), if one exists."""
    from fractions import Fraction
    from math import gcd, isqrt

    bound = isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _integer_slopes(g: Poly):
    """Integer candidate valuations for nonzero roots of g."""
    pairs = coeff_vals(g)
    out = []
    from .poly import lower_hull

    hull = lower_hull(pairs)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = -(y2 - y1) / (x2 - x1)
        if s.denominator == 1:
            out.append(int(s))
    return sorted(set(out))


def _scale_to_radius(g: Poly, s: int) -> Poly:
    """g(pi^s * x) normalized to O-coefficients with unit content."""
    field = g.field
    pairs = coeff_vals(g)
    mu = vmin(v + ValQ(i * s) for i, v in pairs)
    coeffs = []
    for i, c in enumerate(g.coeffs):
        coeffs.append(c.shift(i * s - mu.as_int()) if not c.is_zero else c)
    return Poly(field, coeffs)


def _residue_poly(H: Poly):
    out = []
    for c in H.coeffs:
        if c.is_zero or c.val() > ValQ(0):
            out.append(0)
        else:
            out.append(c.unit_digits(1)[0] if H.field.backend == LAURENT else c.unit_digits(1))
    return out


def _roots_in_O(H: Poly, depth: int, only_units: bool = False) -> list[FieldElem]:
    """All roots of H (squarefree) of valuation >= 0 (> 0 excluded when
    only_units).  Recursive digit descent with Newton lifting at simple
    spots; termination rests on the finite separation of the roots of a
    squarefree polynomial in a complete field."""
    field = H.field
    if depth > field.prec + 16:
        raise PrecisionExhausted("root descent exceeded the precision budget")
    H = _strip_content(H)
    if H.degree is None or H.degree == 0:
        return []
    out: list[FieldElem] = []
    if count_roots_val_at_least(H, ValQ(0)) == 0:
        return out
    respoly = _residue_poly(H)
    for c in residue_roots(field, respoly):
        if only_units and c == 0:
            continue
        chat = field.from_rational(c)
        Hc = Poly(field, taylor_shift(H, chat))
        if Hc.coeffs and Hc.coeffs[0].is_zero:
            out.append(chat)
            rest = Poly(field, Hc.coeffs[1:])  # simple root: deflation is exact
            out.extend(chat + w for w in _descend(rest, depth))
            continue
        inner = count_roots_val_at_least(Hc, ValQ(1))
        if inner == 0:
            continue
        if inner == 1:
            va = _val_lb(Hc.coeffs[0])
            vd = Hc.coeffs[1].val() if len(Hc.coeffs) > 1 and not Hc.coeffs[1].is_zero else None
            if vd is not None and va > vd * 2:
                cert = newton_lift(H, chat, 0)
                out.append(cert.root)
                continue
        out.extend(chat + w for w in _descend(Hc, depth))
    return out


def _descend(Hc: Poly, depth: int) -> list[FieldElem]:
    """Roots w of Hc with v(w) >= 1, via the substitution w = pi * w'."""
    field = Hc.field
    pi = field.uniformizer()
    K = Poly(field, [c.shift(i) if not c.is_zero else c for i, c in enumerate(Hc.coeffs)])
    return [pi * w for w in _roots_in_O(K, depth + 1)]


def is_root(g: Poly, x: FieldElem) -> bool:
    """Whether g(x) vanishes at working precision (evaluation of truncated
    data at points of negative valuation costs digits, hence the horizon at
    half the working precision)."""
    y = g(x)
    if y.is_zero:
        return True
    bound = ValQ(g.field.prec // 2)
    if y.is_small:
        return ValQ(y.rel) >= bound
    return y.val() >= bound


def derivative_roots(f: Poly) -> list[tuple[int, FieldElem]]:
    """(n, root) for every K-rational root of f = f^(0), f', ..., f^(d-1)."""
    out = []
    d = f.degree
    for n in range(d):
        for r in field_roots(derivative(f, n)):
            out.append((n, r))
    return out


# ---- collisions -------------------------------------------------------------


def collision_data(f: Poly, alpha: FieldElem, beta: FieldElem):
    """(m, mu, severity) of f at beta around alpha: mu is the minimal
    monomial valuation of f recentered at alpha, evaluated at beta, m the
    largest index attaining it, and severity = v(f(beta)) - mu."""
    a = taylor_shift(f, alpha)
    diff = beta - alpha
    vals = []
    for i, c in enumerate(a):
        term = c * diff**i if i else c
        vals.append(_val_lb(term) if term.is_small else (INF if term.is_zero else term.val()))
    mu = vmin(vals)
    if not mu.is_finite:
        raise PreconditionViolated("all recentered monomials vanish")
    m = max(i for i, v in enumerate(vals) if v == mu)
    fb = f(beta)
    severity = _val_lb(fb) - mu
    return m, mu, severity


def collision_root(f: Poly, alpha: FieldElem, beta: FieldElem, delta=0):
    """From a collision of severity above 2^m (v(m!) + delta), produce n < m
    and lam with f^(n)(lam) = 0 and rv_delta(lam - alpha) = rv_delta(beta - alpha).

    Constructive path: normalize P(x) = f((beta-alpha) x + alpha) / sigma
    with sigma = a_m (beta-alpha)^m, locate the first n (scanning m-1 down
    to 0) whose gap admits Newton lifting of P^(n) from 1, and map the
    lifted root back.
    """
    delta = ValQ.of(delta)
    field = f.field
    m, mu, severity = collision_data(f, alpha, beta)
    threshold = (field.factorial_val(m) + delta) * (2**m)
    if not severity > threshold:
        raise PreconditionViolated(
            f"collision severity {severity} does not exceed 2^{m}(v({m}!)+{delta}) = {threshold}"
        )
    if m == 0:
        raise PreconditionViolated("no collision is possible at the constant index")
    # the normalized polynomial is built by division, so give the whole
    # construction precision headroom and truncate the root at the end
    work = field.with_prec(field.prec + 32)
    f = Poly(work, [_refield(c, work) for c in f.coeffs])
    alpha = _refield(alpha, work)
    beta = _refield(beta, work)
    a = taylor_shift(f, alpha)
    diff = beta - alpha
    sigma = a[m] * diff**m
    P = Poly(work, [a[i] * diff**i / sigma for i in range(len(a))])
    one = work.one()
    vals = []
    for n in range(m + 1):
        vn = _val_lb(derivative(P, n)(one))
        vals.append(vn)
    chosen = None
    for n in range(m - 1, -1, -1):
        # the gap below matches the Newton hypothesis with separation delta;
        # the severity bound guarantees some n satisfies it
        if vals[n] > vals[n + 1] * 2 + delta:
            chosen = n
            break
    if chosen is None:
        raise PreconditionViolated("no derivative gap admits lifting")
    cert = newton_lift(derivative(P, chosen), one, delta, target=ValQ(field.prec))
    lam = _snap_exact(derivative(f, chosen), diff * cert.root + alpha)
    if not lam.is_exact:
        lam = lam.truncate_rel(field.prec)
    return chosen, _refield(lam, field)


def collision_classes(f: Poly, alpha: FieldElem, delta_ann: int, threshold=None):
    """Leading-term classes on the annulus v(x - alpha) = delta_ann that can
    carry collisions past the severity bound, each with a derivative root
    lam inside it.

    Enumerates the roots of the residue polynomial of f scaled to the
    annulus; a class qualifies when it contains a root of some derivative
    (by the collision-to-derivative-root principle this covers every class
    whose severity can exceed 2^m v(m!)), and the returned lam is obtained
    by Newton/collision lifting.  The result is conservative: classes whose
    severity stays below the bound but which do contain a derivative root
    are also reported.
    """
    field = f.field
    a = taylor_shift(f, alpha)
    pairs = [(i, c.val()) for i, c in enumerate(a) if not c.is_zero]
    if not pairs:
        raise PreconditionViolated("zero polynomial")
    vals = {i: v + ValQ(i * delta_ann) for i, v in pairs}
    mu = vmin(vals.values())
    ties = [i for i, w in vals.items() if w == mu]
    if len(ties) <= 1:
        return []
    m_ann = max(ties)
    respoly = []
    for i in range(m_ann + 1):
        c = a[i] if i < len(a) else field.zero()
        if c.is_zero or vals[i] > mu:
            respoly.append(0)
        else:
            u = c.shift(i * delta_ann - mu.as_int())
            respoly.append(u.unit_digits(1)[0] if field.backend == LAURENT else u.unit_digits(1))
    pi_d = field.monomial(1, delta_ann)
    droots = derivative_roots(f)
    out = []
    for c in residue_roots(field, respoly):
        if c == 0:
            continue
        beta = alpha + pi_d * field.from_rational(c)
        _, _, severity = collision_data(f, alpha, beta)
        base = (field.factorial_val(m_ann)) * (2**m_ann)
        lam = None
        n_chosen = None
        if severity > base:
            try:
                n_chosen, lam = collision_root(f, alpha, beta, 0)
            except (PreconditionViolated, PrecisionExhausted):
                lam = None
        if lam is None:
            inside = [(n, r) for n, r in droots if _val_lb(r - beta) > ValQ(delta_ann)]
            if not inside:
                continue
            inside.sort(key=lambda nr: (nr[0], elem_sort_key(nr[1])))
            n_chosen, lam = inside[0]
        out.append((rv(lam - alpha, 0), lam))
    out.sort(key=lambda pair: elem_sort_key(pair[1]))
    return out
