"""Solution regions of one-variable leading-term conditions.

Every atom in one field variable reduces to comparisons of valuations of
polynomials, v(H(x)) + c1 <=> v(G(x)) + c2, plus root equations.  On an
exact cell decomposition both sides are linear in the radii v(x - center),
so the satisfying set is a finite union of swiss cheeses, computed here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .balls import Ball, SwissCheese
from .decomp import decompose, resolution_horizon
from .errors import NonEffectiveQuantifier, PrecisionExhausted
from .field import Field, FieldElem
from .hensel import field_roots, _val_lb
from .poly import Poly
from .valq import INF, NEG_INF, ValQ

# a region is a finite union of swiss cheeses
Region = list


def region_all(field: Field) -> Region:
    return [SwissCheese.all(field)]


def region_empty() -> Region:
    return []


def region_union(a: Region, b: Region) -> Region:
    return list(a) + list(b)


def region_intersect(a: Region, b: Region) -> Region:
    out = []
    for x in a:
        for y in b:
            z = x.intersect(y)
            if not z.is_empty:
                out.append(z)
    return out


def region_nonempty(region: Region) -> bool:
    return any(not c.is_empty for c in region)


def region_contains(region: Region, x: FieldElem) -> bool:
    return any(c.contains(x) for c in region)


def region_without_points(region: Region, points) -> Region:
    return [c.minus_balls([Ball.point(p) for p in points]) for c in region]


def roots_region(f: Poly, field: Field) -> tuple[Region, list]:
    roots = field_roots(f)
    return [SwissCheese.of_ball(Ball.point(r)) for r in roots], roots


# ---- exact cells --------------------------------------------------------------


@dataclass(frozen=True)
class _CellData:
    cheese: SwissCheese
    center: FieldElem
    m: int
    base: ValQ  # v(a_m); the linearized valuation is base + m * v(x - center)


_CONSTANT = object()


_CELLS_CACHE: dict = {}


def exact_cells(H: Poly, field: Field) -> list[_CellData]:
    """Cells on which v(H(x)) = base + m * v(x - center) exactly."""
    if H.is_zero:
        raise NonEffectiveQuantifier("valuation of the zero polynomial")
    if H.degree == 0:
        return [_CellData(SwissCheese.all(field), field.zero(), 0, H.coeffs[0].val())]
    key = (field, H.coeffs)
    cached = _CELLS_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    for p in decompose(H, None, _exact=True):
        assert p.severity_bound == ValQ(0)
        a_m = p.coeffs[p.m]
        base = INF if a_m.is_zero else a_m.val()
        out.append(_CellData(p.cheese, p.center, p.m, base))
    if len(_CELLS_CACHE) > 2048:
        _CELLS_CACHE.clear()
    _CELLS_CACHE[key] = out
    return out


def vcomp_region(H: Poly, c1: ValQ, G, c2: ValQ, op: str, field: Field) -> Region:
    """{x : v(H(x)) + c1  op  v(G(x)) + c2} as a union of swiss cheeses.

    G may be a Poly, the marker _CONSTANT with c2 carrying the whole right
    side, or None for +inf (comparisons against the value of a root)."""
    if G is None:
        # the right side is +inf
        if H.is_zero:
            ok = op in ("<=", "=", ">=")
            return region_all(field) if ok else []
        if op == "<=":
            return region_all(field)
        if op == ">":
            return []
        if op in ("=", ">="):
            reg, _ = roots_region(H, field)
            return reg
        # "<" and "!=" hold exactly away from the roots
        _, roots = roots_region(H, field)
        return region_without_points(region_all(field), roots)
    cellsH = exact_cells(H, field)
    if G is _CONSTANT:
        cellsG = [_CellData(SwissCheese.all(field), field.zero(), 0, ValQ(0))]
    else:
        cellsG = exact_cells(G, field)
    out: Region = []
    for ch in cellsH:
        for cg in cellsG:
            cheese = ch.cheese.intersect(cg.cheese)
            if cheese.is_empty:
                continue
            for piece in _cell_compare(ch, c1, cg, c2, op, cheese, field):
                if not piece.is_empty:
                    out.append(piece)
    return out


def _cell_compare(ch: _CellData, c1, cg: _CellData, c2, op, cheese, field) -> Region:
    A = ch.base + c1 if ch.base.is_finite else INF
    B = cg.base + c2 if cg.base.is_finite else INF
    m1, m2 = ch.m, cg.m
    a1, a2 = ch.center, cg.center
    if m1 == 0 and m2 == 0:
        return [cheese] if _holds(A, B, op) else []
    d = a1 - a2
    dv = INF if d.is_zero else _val_lb(d)
    if not d.is_zero and d.is_small and d.rel < resolution_horizon(field):
        raise PrecisionExhausted("cell centers indistinguishable at precision")
    out: Region = []
    if dv == INF or (not d.is_zero and dv >= ValQ(resolution_horizon(field))):
        # same center: one radius r, w1 = A + m1 r, w2 = B + m2 r
        for lo, hi, inc in _solve(A, m1, B, m2, op, NEG_INF, INF, True):
            out.extend(_radius_range(a1, lo, hi, inc, field))
    else:
        dd = dv
        # r1 < dd forces r2 = r1
        for lo, hi, inc in _solve(A, m1, B, m2, op, NEG_INF, dd - ValQ(1), False):
            out.extend(_radius_range(a1, lo, hi, inc, field))
        # r1 > dd forces r2 = dd
        B2 = B + dd * m2 if B.is_finite else INF
        for lo, hi, inc in _solve(A, m1, B2, 0, op, dd + ValQ(1), INF, True):
            out.extend(_radius_range(a1, lo, hi, inc, field))
        # r1 = dd, r2 = dd
        if _holds(
            (A + dd * m1) if A.is_finite else INF,
            (B + dd * m2) if B.is_finite else INF,
            op,
        ):
            r = dd.as_int()
            both = SwissCheese(
                Ball.at_least(a1, r),
                [Ball.at_least(a1, r + 1), Ball.at_least(a2, r + 1)],
            )
            out.append(both)
        # r1 = dd, r2 > dd (x near a2): solve over r2
        A2 = A + dd * m1 if A.is_finite else INF
        for lo, hi, inc in _solve(A2, 0, B, m2, op, dd + ValQ(1), INF, True):
            out.extend(_radius_range(a2, lo, hi, inc, field))
    return [c.intersect(cheese) for c in out]


def _holds(a: ValQ, b: ValQ, op: str) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(op)


_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}


def _solve(A, m1, B, m2, op, lo, hi, allow_inf):
    """Integer intervals of r in [lo, hi] (plus the radius r = +inf when
    allowed, i.e. the center itself) where A + m1 r  op  B + m2 r.
    Yields triples (lo', hi', include_infinite_radius)."""
    inf_ok = allow_inf and _holds(_affine(A, m1, INF), _affine(B, m2, INF), op)
    finite = []
    if A == INF or B == INF:
        if A == INF and B == INF:
            always = _holds(INF, INF, op)
        elif A == INF:
            always = op in ("!=", ">", ">=")
        else:
            always = op in ("!=", "<", "<=")
        if always:
            finite.append((lo, hi))
    else:
        k = m1 - m2
        if k == 0:
            if _holds(A, B, op):
                finite.append((lo, hi))
        else:
            bound = (B - A) / k
            eff = op if k > 0 else _FLIP[op]
            if eff == "=":
                if bound.is_int:
                    finite.append((bound, bound))
            elif eff == "!=":
                if bound.is_int:
                    finite.append((lo, bound - 1))
                    finite.append((bound + 1, hi))
                else:
                    finite.append((lo, hi))
            elif eff == "<":
                finite.append((lo, ValQ(bound.ceil() - 1)))
            elif eff == "<=":
                finite.append((lo, ValQ(bound.floor())))
            elif eff == ">":
                finite.append((ValQ(bound.floor() + 1), hi))
            else:  # >=
                finite.append((ValQ(bound.ceil()), hi))
    out = []
    attached = False
    for l2, h2 in finite:
        l2, h2 = max(l2, lo), min(h2, hi)
        if l2 > h2:
            continue
        if h2 == INF and inf_ok:
            out.append((l2, h2, True))
            attached = True
        else:
            out.append((l2, h2, False))
    if inf_ok and not attached:
        out.append((ValQ(1), ValQ(0), True))  # no finite radii, the point only
    return out


def _affine(A: ValQ, m: int, r: ValQ) -> ValQ:
    if A == INF:
        return INF
    if r == INF:
        return INF if m > 0 else A
    if r == NEG_INF:
        return NEG_INF if m > 0 else A
    return A + r * m


def _radius_range(center: FieldElem, lo: ValQ, hi: ValQ, include_point: bool, field) -> Region:
    """{x : lo <= v(x - center) <= hi} (integers), optionally with x = center."""
    out = []
    if lo <= hi:
        outer = Ball.at_least(center, lo) if lo != NEG_INF else Ball.all(field)
        holes = []
        if hi != INF:
            holes.append(Ball.at_least(center, hi.as_int() + 1))
        elif not include_point:
            holes.append(Ball.point(center))
        cheese = SwissCheese(outer, holes)
        if not cheese.is_empty:
            out.append(cheese)
        if hi != INF and include_point:
            out.append(SwissCheese.of_ball(Ball.point(center)))
    elif include_point:
        out.append(SwissCheese.of_ball(Ball.point(center)))
    return out
