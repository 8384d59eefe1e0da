import random
from fractions import Fraction

import pytest

from hqe.balls import Ball, SwissCheese
from hqe.decomp import Piece, decompose, m_bound, piece_eval_rv, piece_eval_v, rv_decompose
from hqe.errors import NotInPiece
from hqe.field import Field
from hqe.hensel import derivative_roots, is_root
from hqe.poly import Poly, derivative
from hqe.rv import rv
from hqe.valq import INF, ValQ


def val_of(x):
    return INF if x.is_zero else x.val()


def grid(field, ks=range(-6, 7)):
    units = (
        [Fraction(c) for c in (1, -1, 2, -2, 3, -3, 5, -5, 7, -7)] + [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3)]
        if field.backend == "laurent-q"
        else [u for u in range(1, 40) if u % field.p][:13]
    )
    return [field.monomial(c, k) for c in units for k in ks]


def test_m_bound_examples(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-t, zero, laurent.one()])
    assert m_bound(f, zero, SwissCheese.all(laurent)) == 2
    assert m_bound(f, zero, SwissCheese(Ball.at_least(zero, 1))) == 0
    assert m_bound(Poly.from_rationals(laurent, [7]), zero, SwissCheese.all(laurent)) == 0


def test_decompose_x2_minus_t(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-t, zero, laurent.one()])
    pieces = decompose(f)
    assert len(pieces) == 2
    ms = sorted(p.m for p in pieces)
    assert ms == [0, 2]
    for x in grid(laurent):
        owners = [p for p in pieces if p.contains(x)]
        assert len(owners) == 1
        assert owners[0].eval_v(x) == val_of(f(x))


def test_decompose_x2_minus_t2(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-(t * t), zero, laurent.one()])
    pieces = decompose(f)
    assert len(pieces) == 5
    assert sorted(p.m for p in pieces) == [0, 1, 1, 2, 2]
    # centers at the roots appear
    assert any((p.center - t).is_zero for p in pieces)
    assert any((p.center + t).is_zero for p in pieces)


def test_decompose_constant(laurent):
    f = Poly.from_rationals(laurent, [6])
    pieces = decompose(f)
    assert len(pieces) == 1 and pieces[0].m == 0
    assert pieces[0].eval_v(laurent.uniformizer()) == ValQ(0)


def test_decompose_restricted_to_cheese(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-(t * t), zero, laurent.one()])
    S = SwissCheese(Ball.at_least(zero, 0), [Ball.at_least(t, 2)])
    pieces = decompose(f, S)
    for p in pieces:
        assert not p.cheese.is_empty
    for x in grid(laurent, ks=range(0, 5)):
        if not S.contains(x):
            continue
        owners = [p for p in pieces if p.contains(x)]
        assert len(owners) == 1


def poly_from_roots(field, roots, lead=1):
    f = Poly(field, [field.from_rational(lead)])
    for r in roots:
        f = f * Poly(field, [-r, field.one()])
    return f


def random_poly(field, rng, max_deg=5):
    # mix of rational roots placed on the grid and an irreducible tail
    d = rng.randrange(1, max_deg + 1)
    roots = []
    for _ in range(rng.randrange(0, min(3, d) + 1)):
        c = rng.choice([1, 2, 3, -1, -2]) if field.backend != "padic" or field.p != 2 else rng.choice([1, 3, -1])
        roots.append(field.monomial(c, rng.randrange(-2, 3)))
    f = poly_from_roots(field, roots, lead=rng.choice([1, 2, -1]))
    rest = d - len(roots)
    if rest:
        tail = [field.from_rational(rng.randrange(-6, 7)) for _ in range(rest)] + [field.one()]
        f = f * Poly(field, tail)
    return f


def test_partition_and_bounds_random(any_field):
    rng = random.Random(42)
    field = any_field
    pts = grid(field, ks=range(-4, 5))
    for _ in range(12):
        f = random_poly(field, rng)
        pieces = decompose(f)
        for x in pts:
            owners = [p for p in pieces if p.contains(x)]
            assert len(owners) == 1, f"{f} at {x}"
            p = owners[0]
            w = p.eval_v(x)
            fv = val_of(f(x))
            assert w <= fv <= w + p.severity_bound
            if field.backend == "laurent-q":
                assert w == fv


def test_monotonicity_of_m(laurent):
    rng = random.Random(9)
    zero = laurent.zero()
    for _ in range(10):
        f = random_poly(laurent, rng, max_deg=4)
        S = SwissCheese.all(laurent)
        m_outer = m_bound(f, zero, S)
        for c, k in ((1, 0), (2, -1), (1, 2)):
            beta = laurent.monomial(c, k)
            T = SwissCheese(Ball.at_least(beta, k + rng.randrange(1, 4)))
            assert m_bound(f, beta, T) <= m_outer


def test_center_provenance(any_field):
    rng = random.Random(12)
    field = any_field
    for _ in range(6):
        f = random_poly(field, rng, max_deg=4)
        pieces = decompose(f)
        for p in pieces:
            ok = False
            for n in range(f.degree):
                if is_root(derivative(f, n), p.center):
                    ok = True
                    break
            assert ok, f"center {p.center} of {f}"


def test_rv_decompose_single_piece(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-t, zero, laurent.one()])
    dec = rv_decompose([f], [0])
    assert all(p.q == 1 for cell in dec.cells for p in cell.pieces)
    for x in grid(laurent):
        cell = dec.cell_of(x)
        assert piece_eval_rv(cell.pieces[0], x, 0) == rv(f(x), 0)


def test_rv_decompose_multi(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-(t * t), zero, laurent.one()])
    g = Poly(laurent, [-t, laurent.one()])
    dec = rv_decompose([f, g], [0, 1])
    for x in grid(laurent, ks=range(-3, 4)):
        cell = dec.cell_of(x)
        assert piece_eval_rv(cell.pieces[0], x, 0) == rv(f(x), 0)
        assert piece_eval_rv(cell.pieces[1], x, 1) == rv(g(x), 1)


def test_rv_decompose_padic_offsets(padic2):
    f = Poly(padic2, [padic2.from_rational(-17), padic2.zero(), padic2.one()])
    dec = rv_decompose([f], [0])
    bound = ValQ(4)  # 2^2 * v(2!)
    for cell in dec.cells:
        p = cell.pieces[0]
        assert ValQ(len(bin(p.q)) - 3 if p.q > 1 else 0) <= bound
    for x in grid(padic2, ks=range(-3, 4)):
        cell = dec.cell_of(x)
        assert piece_eval_rv(cell.pieces[0], x, 0) == rv(f(x), 0)


def test_piece_eval_errors(laurent):
    zero = laurent.zero()
    t = laurent.uniformizer()
    f = Poly(laurent, [-t, zero, laurent.one()])
    pieces = decompose(f)
    inner = next(p for p in pieces if p.m == 0)
    with pytest.raises(NotInPiece):
        inner.eval_v(laurent.parse("t^-3"))


def test_piece_at_center_root(laurent):
    # the piece containing a root evaluates to +inf there
    t = laurent.uniformizer()
    zero = laurent.zero()
    f = Poly(laurent, [-(t * t), zero, laurent.one()])
    pieces = decompose(f)
    owner = [p for p in pieces if p.contains(t)]
    assert len(owner) == 1
    assert owner[0].eval_v(t) == INF
    assert piece_eval_v(owner[0], t) == INF


def test_piece_eval_rv_correction_example(laurent):
    t = laurent.uniformizer()
    zero = laurent.zero()
    f = Poly(laurent, [-(t * t), zero, laurent.one()])
    pieces = decompose(f)
    owner = next(p for p in pieces if p.contains(t + t**3) and not (p.center - t).is_zero is False)
    x = t + t**3
    owner = next(p for p in pieces if p.contains(x))
    assert piece_eval_rv(owner, x, 0) == rv(f(x), 0)
    assert rv(f(x), 0) == rv(laurent.parse("2*t^4 + t^6"), 0)


def test_json_roundtrip_pieces(laurent):
    t = laurent.uniformizer()
    zero = laurent.zero()
    f = Poly(laurent, [-(t * t), zero, laurent.one()])
    for p in decompose(f):
        back = Piece.from_json(laurent, p.to_json())
        assert back.cheese == p.cheese
        assert back.m == p.m and back.q == p.q
        assert all((a - b).is_zero or (a - b).is_small for a, b in zip(back.coeffs, p.coeffs))
