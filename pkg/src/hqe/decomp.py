"""Swiss-cheese decomposition of K relative to a polynomial: partition into
pieces on which v(f(x)) is pinned between v(a_m (x-alpha)^m) and that value
plus 2^m v(m!), and on which the order-delta leading term of f(x) is a
well-defined leading-term polynomial in the leading term of x - alpha.

The recursion follows the valuation geometry: around a center (a root of a
derivative of f) the Newton data singles out an initial segment of radii on
which the m-th recentered monomial is strictly minimal; past it the maximal
index drops and the recursion continues inward; on the boundary annulus the
residue-root classes that can carry collisions are re-centered at roots of
derivatives found inside them.  A double induction on (m, number of
derivative roots inside) terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .balls import Ball, SwissCheese
from .errors import NotInPiece, PreconditionViolated, PrecisionExhausted, RecursionBound
from .field import LAURENT, Field, FieldElem
from .hensel import _val_lb, derivative_roots, elem_sort_key
from .poly import Poly, argmin_indices, residue_roots, taylor_shift
from .rv import RVElem, rv
from .valq import INF, NEG_INF, ValQ, vmin

_MAX_DEPTH = 600


@dataclass(frozen=True)
class Piece:
    """One cell of a decomposition: on ``cheese``, with a_i the coefficients
    of f recentered at ``center``,

        v(a_m (x-center)^m)  <=  v(f(x))  <=  same + severity_bound,

    and rv_delta(f(x)) equals the projected leading-term polynomial built
    from order delta + v(q) data (q = 1 in residue characteristic 0)."""

    cheese: SwissCheese
    center: FieldElem
    coeffs: tuple
    m: int
    severity_bound: ValQ
    q: int

    def contains(self, x: FieldElem) -> bool:
        return self.cheese.contains(x)

    def eval_v(self, x: FieldElem) -> ValQ:
        """The linearized valuation v(a_m (x-center)^m)."""
        if not self.contains(x):
            raise NotInPiece(f"{x} is not in {self.cheese}")
        a_m = self.coeffs[self.m]
        if self.m == 0:
            return INF if a_m.is_zero else a_m.val()
        r = (x - self.center).val() if not (x - self.center).is_zero else INF
        if r == INF:
            return INF
        self._depth_guard(r)
        return a_m.val() + r * self.m

    def _depth_guard(self, r: ValQ):
        # a piece built around truncated data does not resolve structure
        # below the working precision
        field = self.center.field
        if r >= ValQ(resolution_horizon(field)) and not (
            self.center.is_exact and all(c.is_exact or c.is_zero for c in self.coeffs)
        ):
            raise PrecisionExhausted("point lies deeper than the center is known")

    def eval_rv(self, x: FieldElem, delta) -> RVElem:
        """rv_delta(f(x)) computed from leading-term data only: canonical
        representatives of rv_{delta+v(q)}(a_j (x-center)^j) are summed and
        the sum is projected to order delta."""
        if not self.contains(x):
            raise NotInPiece(f"{x} is not in {self.cheese}")
        delta = ValQ.of(delta).as_int()
        field = self.center.field
        vq = _int_val(field, self.q)
        gamma = delta + vq
        reps = []
        ignored = INF  # lower bound on terms dropped as zero-at-precision
        d = x - self.center
        if not d.is_zero:
            self._depth_guard(_val_lb(d))
        # only gamma + 1 unit digits of each factor survive into the class
        if not (d.is_zero or d.is_small):
            d = d.truncate_rel(gamma + 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            if coeff_unresolved(field, a):
                if j > 0 and d.is_zero:
                    continue  # the whole term vanishes exactly
                lb = ValQ(a.rel) if a.is_small else a.val()
                if j > 0:
                    lb = lb + _val_lb(d) * j
                ignored = min(ignored, lb)
                continue
            if not a.is_small:
                a = a.truncate_rel(gamma + 1)
            term = a * d**j
            if term.is_zero:
                continue
            if term.is_small:
                ignored = min(ignored, ValQ(term.rel))
                continue
            reps.append(rv(term, gamma).rep())
        if not reps:
            return RVElem.inf(field, delta)
        total = field.zero()
        for r in reps:
            total = total + r
        if ignored < INF and not total.is_zero and total.val() + ValQ(gamma) >= ignored:
            raise PrecisionExhausted("dropped term could affect the leading term")
        return rv(total, delta)

    def to_json(self):
        return {
            "cheese": self.cheese.to_json(),
            "center": str(self.center),
            "coeffs": [str(c) for c in self.coeffs],
            "m": self.m,
            "severity_bound": str(self.severity_bound),
            "q": self.q,
        }

    @staticmethod
    def from_json(field: Field, data) -> "Piece":
        return Piece(
            SwissCheese.from_json(field, data["cheese"]),
            field.parse(data["center"]),
            tuple(field.parse(c) for c in data["coeffs"]),
            data["m"],
            _parse_valq(data["severity_bound"]),
            data["q"],
        )


def _parse_valq(s: str) -> ValQ:
    if s == "inf":
        return INF
    if s == "-inf":
        return NEG_INF
    if "/" in s:
        n, d = s.split("/")
        return ValQ(int(n), int(d))
    return ValQ(int(s))


def _int_val(field: Field, q: int) -> int:
    if field.backend == LAURENT:
        return 0
    v = 0
    while q % field.p == 0:
        q //= field.p
        v += 1
    return v


def resolution_horizon(field: Field) -> int:
    """Valuations at or beyond this bound are not resolved as structure.

    Half the working precision: evaluating degree-d data at points of
    moderate negative valuation costs a bounded number of digits, and the
    decomposition itself only reasons about radii far below this line.
    """
    return field.prec // 2


def coeff_unresolved(field: Field, c) -> bool:
    """Whether a coefficient is treated as zero by the decomposition: it
    vanishes to the resolution horizon, or it is inexact with valuation at
    or beyond it (truncated data -- a recentered constant term at a lifted
    root, typically -- whose depth is noise, not structure)."""
    horizon = resolution_horizon(field)
    if c.is_small:
        return c.rel >= horizon
    return not c.is_exact and c.val() >= ValQ(horizon)


def _support_vals(field: Field, coeffs):
    """(index, valuation) pairs of the resolved coefficients; exact
    coefficients always keep their true valuation."""
    pairs = []
    for i, c in enumerate(coeffs):
        if c.is_zero:
            continue
        if coeff_unresolved(field, c):
            continue
        if c.is_small:
            raise PrecisionExhausted(f"coefficient {i} known only modulo pi^{c.rel}")
        pairs.append((i, c.val()))
    return pairs


def m_bound(f: Poly, alpha: FieldElem, S: SwissCheese) -> int:
    """The largest index i such that v(a_i (x-alpha)^i) is minimal for some
    x in S, read off the Newton data over the radii S realizes around alpha."""
    if S.is_empty:
        raise PreconditionViolated("m is undefined on the empty set")
    if f.is_zero:
        raise PreconditionViolated("m is undefined for the zero polynomial")
    coeffs = taylor_shift(f, alpha)
    pairs = _support_vals(f.field, coeffs)
    intervals, point = S.realized_radii(alpha)
    best = 0
    for lo, _hi in intervals:
        idxs = argmin_indices(pairs, lo)
        if idxs:
            best = max(best, max(idxs))
    if point:
        best = max(best, min(i for i, _ in pairs))
    return best


# ---- the decomposition -------------------------------------------------------


def decompose(f: Poly, S: SwissCheese | None = None, _exact: bool = False) -> list[Piece]:
    """Disjoint pieces covering S (default: all of K) with the valuation
    bound of Piece on each; centers are roots of derivatives of f."""
    field = f.field
    if f.is_zero:
        raise PreconditionViolated("cannot decompose the zero polynomial")
    if S is not None and S.is_empty:
        return []
    d = f.degree
    if d == 0:
        cheese = S if S is not None else SwissCheese.all(field)
        return [Piece(cheese, field.zero(), (f.coeffs[0],), 0, ValQ(0), 1)]
    # initial center: the root of the linear derivative, always in K
    top = f.coeffs[d]
    below = f.coeffs[d - 1]
    alpha0 = -(below / (top * d))
    droots = derivative_roots(f)
    pieces = _region(f, alpha0, Ball.all(field), droots, _exact, 0)
    if S is not None:
        pieces = [
            Piece(c, p.center, p.coeffs, p.m, p.severity_bound, p.q)
            for p in pieces
            for c in [p.cheese.intersect(S)]
            if not c.is_empty
        ]
    return pieces


def _count_inside(droots, ball: Ball) -> int:
    n = 0
    seen = []
    for _, r in droots:
        try:
            if ball.contains(r) and not any((r - s).is_zero or _val_lb(r - s) >= ValQ(r.field.prec) for s in seen):
                seen.append(r)
                n += 1
        except PrecisionExhausted:
            n += 1
    return n


def _region(f, center, ball, droots, exact, depth, prev=None) -> list:
    """Decompose ``ball`` (which contains ``center``) for f."""
    if depth > _MAX_DEPTH:
        raise RecursionBound("decomposition recursion exceeded its defensive cap")
    field = f.field
    if ball.kind == "point":
        coeffs = taylor_shift(f, center)
        return [Piece(SwissCheese.of_ball(ball), center, tuple(coeffs), 0, ValQ(0), 1)]
    coeffs = taylor_shift(f, center)
    pairs = _support_vals(field, coeffs)
    if not pairs:
        raise PreconditionViolated("zero polynomial in decomposition")
    gamma = ValQ(ball.radius_int) if ball.kind == "ball" else NEG_INF
    m = max(argmin_indices(pairs, gamma))
    # measure of the double induction: m drops, or the number of derivative
    # roots strictly inside drops
    if prev is not None:
        prev_m, prev_count = prev
        assert m < prev_m or _count_inside(droots, ball) < prev_count, (
            "decomposition measure failed to decrease"
        )
    if m == 0:
        return [Piece(SwissCheese.of_ball(ball), center, tuple(coeffs), 0, ValQ(0), 1)]
    vm = dict(pairs)[m]
    cuts = [(v - vm) / (m - i) for i, v in pairs if i < m]
    if not cuts:
        # the m-th monomial is strictly minimal on the whole ball
        return [Piece(SwissCheese.of_ball(ball), center, tuple(coeffs), m, ValQ(0), 1)]
    rho = vmin(cuts)
    pieces = []
    inner_ball = Ball.more_than(center, rho)
    # radii in [gamma, rho): the m-th monomial is strictly minimal
    outer = SwissCheese(ball, [Ball.at_least(center, rho)])
    if not outer.is_empty:
        pieces.append(Piece(outer, center, tuple(coeffs), m, ValQ(0), 1))
    # the tie annulus at rho, when it is realized in the value group
    count = _count_inside(droots, ball)
    if rho.is_int:
        r = rho.as_int()
        annulus = SwissCheese(Ball.at_least(center, r), [inner_ball])
        if not annulus.is_empty:
            class_balls, slack = _annulus_analysis(
                f, coeffs, center, r, m, droots, exact, depth, pieces, count
            )
            remainder = annulus.minus_balls(class_balls)
            if not remainder.is_empty:
                if slack:
                    bound = field.factorial_val(m) * (2**m)
                    q = factorial(m) ** (2**m) if bound > ValQ(0) else 1
                else:
                    bound, q = ValQ(0), 1
                pieces.append(Piece(remainder, center, tuple(coeffs), m, bound, q))
    # inside: the maximal index drops strictly
    pieces.extend(_region(f, center, inner_ball, droots, exact, depth + 1, (m, count)))
    return pieces


def _annulus_analysis(f, coeffs, center, r, m, droots, exact, depth, pieces, count):
    """Handle the residue-root classes on the annulus v(x-center) = r.

    Classes containing a root of a derivative are re-centered there and
    recursed into (this covers every class whose collision severity can
    exceed 2^m v(m!)); in exact mode the remaining residue-root classes are
    subdivided as well, so every produced piece carries zero slack.
    Returns (class balls removed from the annulus, slack flag).
    """
    field = f.field
    vals = {i: v.as_int() + i * r for i, v in _support_vals(field, coeffs)}
    mu = min(vals.values())
    ties = [i for i, w in vals.items() if w == mu]
    if len(ties) <= 1:
        return [], False
    m_ann = max(ties)
    respoly = []
    for i in range(m_ann + 1):
        if i not in vals or vals[i] > mu:
            respoly.append(0)
        else:
            u = coeffs[i].shift(i * r - mu)
            respoly.append(u.unit_digits(1)[0] if field.backend == LAURENT else u.unit_digits(1))
    pi_r = field.monomial(1, r)
    class_balls = []
    slack = False
    for c in residue_roots(field, respoly):
        if c == 0:
            continue
        beta = center + pi_r * field.from_rational(c)
        cls_ball = Ball.more_than(beta, r)
        inside = [(n, rt) for n, rt in droots if _in_ball(rt, cls_ball)]
        if inside:
            inside.sort(key=lambda nr: (nr[0], elem_sort_key(nr[1])))
            lam = inside[0][1]
            class_balls.append(cls_ball)
            pieces.extend(
                _region(f, lam, Ball.more_than(lam, r), droots, exact, depth + 1, (m, count))
            )
        elif exact:
            # no derivative root: the collision severity in this class is
            # bounded, and finitely many digit levels resolve it exactly
            class_balls.append(cls_ball)
            pieces.extend(
                _region(f, beta, cls_ball, droots, exact, depth + 1, None)
            )
        else:
            slack = True
    return class_balls, slack


def _in_ball(x, ball: Ball) -> bool:
    try:
        return ball.contains(x)
    except PrecisionExhausted:
        return False


# ---- simultaneous decomposition for leading terms ----------------------------


@dataclass(frozen=True)
class Cell:
    """A common cell with one Piece per polynomial, all sharing the cheese."""

    cheese: SwissCheese
    pieces: tuple


@dataclass(frozen=True)
class RVDecomposition:
    polys: tuple
    deltas: tuple
    cells: tuple

    def cell_of(self, x: FieldElem) -> Cell:
        for cell in self.cells:
            if cell.cheese.contains(x):
                return cell
        raise NotInPiece(f"no cell contains {x}")

    def to_json(self):
        return {
            "deltas": [str(d) for d in self.deltas],
            "cells": [
                {
                    "cheese": cell.cheese.to_json(),
                    "pieces": [p.to_json() for p in cell.pieces],
                }
                for cell in self.cells
            ],
        }

    @staticmethod
    def from_json(field: Field, data) -> "RVDecomposition":
        cells = tuple(
            Cell(
                SwissCheese.from_json(field, c["cheese"]),
                tuple(Piece.from_json(field, p) for p in c["pieces"]),
            )
            for c in data["cells"]
        )
        deltas = tuple(_parse_valq(d) for d in data["deltas"])
        return RVDecomposition((), deltas, cells)


def rv_decompose(fs, deltas, _exact: bool = False) -> RVDecomposition:
    """A common partition of K adapted to every f in fs at its order delta:
    intersect the per-polynomial decompositions."""
    fs = list(fs)
    deltas = [ValQ.of(d) for d in deltas]
    if len(fs) != len(deltas):
        raise ValueError("one order per polynomial required")
    for d in deltas:
        if d < 0:
            raise PreconditionViolated("orders must be nonnegative")
    field = fs[0].field
    per_poly = [decompose(f, None, _exact) for f in fs]
    cells = [(SwissCheese.all(field), [])]
    for pieces in per_poly:
        new_cells = []
        for cheese, chosen in cells:
            for p in pieces:
                inter = cheese.intersect(p.cheese)
                if inter.is_empty:
                    continue
                new_cells.append((inter, chosen + [p]))
        cells = new_cells
    packed = []
    for cheese, chosen in cells:
        packed.append(
            Cell(
                cheese,
                tuple(
                    Piece(cheese, p.center, p.coeffs, p.m, p.severity_bound, p.q)
                    for p in chosen
                ),
            )
        )
    return RVDecomposition(tuple(fs), tuple(deltas), tuple(packed))


def piece_eval_v(p: Piece, x: FieldElem) -> ValQ:
    return p.eval_v(x)


def piece_eval_rv(p: Piece, x: FieldElem, delta) -> RVElem:
    return p.eval_rv(x, delta)
