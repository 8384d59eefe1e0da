import random
from fractions import Fraction

import pytest

from hqe.errors import PreconditionViolated
from hqe.field import Field
from hqe.hensel import (
    LiftCertificate,
    collision_classes,
    collision_root,
    derivative_roots,
    field_roots,
    is_root,
    newton_lift,
)
from hqe.poly import Poly, derivative
from hqe.rv import rv
from hqe.valq import INF, ValQ


def val_at_least(x, bound):
    if x.is_zero:
        return True
    if x.is_small:
        return x.rel >= bound
    return x.val() >= ValQ(bound)


def sq_minus(field, c):
    return Poly(field, [field.from_rational(-1) * c, field.zero(), field.one()])


def binomial_sqrt_coeffs(n):
    """Independent oracle: coefficients of (1+t)^(1/2)."""
    out = [Fraction(1)]
    for k in range(1, n):
        out.append(out[-1] * (Fraction(1, 2) - (k - 1)) / k)
    return out


def digit_sqrt(a, p, start, k):
    """Independent oracle: x with x^2 = a mod p^k by digit search from start."""
    x = start % p
    for j in range(1, k):
        q = p ** (j + 1)
        for d in range(p):
            cand = x + d * p**j
            if (cand * cand - a) % q == 0:
                x = cand
                break
        else:
            raise AssertionError("no digit lifts")
    return x


def test_sqrt_one_plus_t(laurent):
    one = laurent.one()
    t = laurent.uniformizer()
    P = sq_minus(laurent, one + t)
    cert = newton_lift(P, one, 0)
    oracle = binomial_sqrt_coeffs(40)
    for k, c in enumerate(oracle):
        assert cert.root.coeff(k) == c
    assert cert.separation == ValQ(1)
    assert is_root(P, cert.root)


def test_already_root(laurent):
    P = sq_minus(laurent, laurent.one())
    cert = newton_lift(P, laurent.one(), 0)
    assert cert.root == laurent.one()
    assert cert.iterations == 0
    assert cert.separation == INF


def test_sqrt2_in_z7(padic7):
    P = sq_minus(padic7, padic7.from_rational(2))
    cert = newton_lift(P, padic7.from_rational(3), 0)
    assert cert.root.unit_digits(2) == 10
    oracle = digit_sqrt(2, 7, 3, 40)
    assert cert.root.unit_digits(40) == oracle


def test_sqrt17_in_z2(padic2):
    P = sq_minus(padic2, padic2.from_rational(17))
    cert = newton_lift(P, padic2.one(), 0)
    b = cert.root
    assert cert.separation == ValQ(3)
    # oracle branch fixed by b = 1 mod 8
    x = 1
    for j in range(3, 40):
        if (x * x - 17) % 2 ** (j + 1) != 0:
            x += 2 ** (j - 1)
    assert b.unit_digits(39) == x % 2**39


def test_hypothesis_violation(laurent):
    t = laurent.uniformizer()
    P = sq_minus(laurent, t)  # x^2 - t has no hensel configuration at 1
    with pytest.raises(PreconditionViolated):
        newton_lift(P, laurent.one(), 0)


def test_random_engineered_lifts(any_field):
    rng = random.Random(23)
    field = any_field
    one = field.one()
    for _ in range(40):
        a = field.from_rational(rng.randrange(0, 9))
        k = rng.randrange(1, 8)
        e = field.monomial(1, k)
        # P = (x - a - e) * Q with Q(a) a unit
        while True:
            Q = Poly.from_rationals(field, [rng.randrange(-9, 10) for _ in range(rng.randrange(1, 3))] + [1])
            qa = Q(a)
            if not qa.is_zero and qa.val() == ValQ(0):
                break
        root = a + e
        P = Poly(field, [-root, one]) * Q
        delta = rng.randrange(0, k)
        cert = newton_lift(P, a, delta)
        assert cert.separation > ValQ(delta)
        assert val_at_least(cert.root - root, field.prec - 4)
        assert is_root(P, cert.root)


def test_field_roots_examples(laurent, padic2):
    t = laurent.uniformizer()
    assert sorted(str(r) for r in field_roots(sq_minus(laurent, t * t))) == ["-1*t^1", "1*t^1"]
    assert field_roots(sq_minus(laurent, laurent.from_rational(2) * t * t)) == []
    assert field_roots(sq_minus(laurent, t)) == []
    rs = field_roots(sq_minus(padic2, padic2.from_rational(17)))
    assert len(rs) == 2
    for r in rs:
        assert is_root(sq_minus(padic2, padic2.from_rational(17)), r)
    assert field_roots(sq_minus(padic2, padic2.from_rational(3))) == []


def test_field_roots_deg5(laurent):
    t = laurent.uniformizer()
    one = laurent.one()
    roots = [t, 2 * t, t**3, one, -one]
    f = Poly(laurent, [one])
    for r in roots:
        f = f * Poly(laurent, [-r, one])
    found = field_roots(f)
    assert len(found) == 5
    for r in roots:
        assert any((r - s).is_zero for s in found)


def test_field_roots_multiple(laurent):
    t = laurent.uniformizer()
    one = laurent.one()
    lin = Poly(laurent, [-t, one])
    f = lin * lin * Poly(laurent, [one, one])
    found = field_roots(f)
    assert len(found) == 2  # t (despite multiplicity) and -1


def test_collision_root_example(laurent):
    t = laurent.uniformizer()
    one = laurent.one()
    f = sq_minus(laurent, t * t)
    beta = t * (one + t)
    n, lam = collision_root(f, laurent.zero(), beta, 0)
    assert n == 0
    assert is_root(f, lam)
    assert rv(lam, 0) == rv(beta, 0)


def test_collision_root_requires_collision(laurent):
    t = laurent.uniformizer()
    f = sq_minus(laurent, laurent.from_rational(2) * t * t)
    with pytest.raises(PreconditionViolated):
        collision_root(f, laurent.zero(), t, 0)


def test_collision_root_padic2(padic2):
    f = sq_minus(padic2, padic2.from_rational(17))
    # at beta = 1 the severity is 4, not above the threshold 2^2 (v(2!) + 0) = 4
    with pytest.raises(PreconditionViolated):
        collision_root(f, padic2.zero(), padic2.one(), 0)
    # one digit deeper the severity is 6 > 4
    n, lam = collision_root(f, padic2.zero(), padic2.from_rational(9), 0)
    assert n == 0
    assert is_root(f, lam)
    assert rv(lam, 0) == rv(padic2.from_rational(9), 0)


def test_collision_root_separation_order(laurent):
    t = laurent.uniformizer()
    one = laurent.one()
    f = sq_minus(laurent, t * t)
    beta = t * (one + t**9)
    for delta in (0, 1, 2):
        n, lam = collision_root(f, laurent.zero(), beta, delta)
        assert rv(lam, delta) == rv(beta, delta)


def test_collision_classes_examples(laurent):
    t = laurent.uniformizer()
    zero = laurent.zero()
    cc = collision_classes(sq_minus(laurent, t * t), zero, 1)
    assert [str(a) for a, _ in cc] == ["rv[0]{v=1; unit=-1}", "rv[0]{v=1; unit=1}"]
    for a, lam in cc:
        assert is_root(sq_minus(laurent, t * t), lam)
    assert collision_classes(sq_minus(laurent, laurent.from_rational(2) * t * t), zero, 1) == []
    for d in (0, 1, 2, 3):
        assert collision_classes(sq_minus(laurent, t), zero, d) == []


def test_collision_classes_complete_by_sampling(laurent):
    # severity above the bound only occurs inside returned classes
    t = laurent.uniformizer()
    zero = laurent.zero()
    f = sq_minus(laurent, t * t)
    returned = collision_classes(f, zero, 1)
    for c in (1, 2, 3, -1, -2, Fraction(1, 2)):
        x = laurent.monomial(c, 1)
        sev_pos = f(x).val() > ValQ(2)
        in_returned = any((x - lam).val() > ValQ(1) for _, lam in returned)
        assert (not sev_pos) or in_returned


def test_derivative_roots_cover_all_orders(laurent):
    t = laurent.uniformizer()
    one = laurent.one()
    f = Poly(laurent, [-t, one]) * Poly(laurent, [t, one]) * Poly(laurent, [-one, one])
    dr = derivative_roots(f)
    for n, r in dr:
        assert is_root(derivative(f, n), r)
    assert {n for n, _ in dr} == {0, 1, 2}
