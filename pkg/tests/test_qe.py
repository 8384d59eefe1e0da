import random
from fractions import Fraction

import pytest

from hqe.errors import NonEffectiveQuantifier, PrecisionExhausted
from hqe.field import Field
from hqe.formula import (
    FLit,
    parse_formula,
    print_formula,
    has_field_quantifier,
)
from hqe.hensel import field_roots
from hqe.poly import Poly
from hqe.qe import decide, eliminate_linear_exists, normal_form, qe
from hqe.rv import rv
from hqe.semantics import evaluate
from hqe.valq import ValQ


def test_discriminating_pair(laurent):
    assert decide(parse_formula(laurent, "EX y:K. y^2 = t^2"), laurent)
    assert not decide(parse_formula(laurent, "EX y:K. y^2 = 2*t^2"), laurent)


def test_padic_squares(padic2):
    assert decide(parse_formula(padic2, "EX y:K. y^2 = 17"), padic2)
    assert not decide(parse_formula(padic2, "EX y:K. y^2 = 3"), padic2)
    # independent oracle: a 2-adic unit is a square iff it is 1 mod 8
    for u in (9, 25, 33, 41, 17, 3, 5, 7, 11, 15):
        want = u % 8 == 1
        got = decide(parse_formula(padic2, f"EX y:K. y^2 = {u}"), padic2)
        assert got == want, u


def test_hensel_sentences(laurent):
    assert decide(parse_formula(laurent, "EX y:K. y^2 = 1 + t"), laurent)
    assert decide(parse_formula(laurent, "EX y:K. y = 0"), laurent)
    assert not decide(parse_formula(laurent, "EX y:K. y^2 = t"), laurent)
    assert decide(parse_formula(laurent, "EX y:K. y^3 = t^3 & rv[0](y) = rv[0](t)"), laurent)
    assert not decide(parse_formula(laurent, "EX y:K. y^2 = t^2 & rv[0](y - t) = rv[0](t)"), laurent)


def test_forall(laurent):
    assert decide(parse_formula(laurent, "ALL y:K. y^2 = t^2 -> rv[1](y^2) = rv[1](t^2)"), laurent)
    assert not decide(parse_formula(laurent, "ALL y:K. y^2 = t^2"), laurent)


def test_qe_is_identity_on_quantifier_free(laurent):
    phi = parse_formula(laurent, "rv[0](t) = rv[0](t) & v(rv[0](1)) < v(rv[0](t))")
    assert qe(phi, laurent) == phi


def test_qe_output_is_field_quantifier_free(laurent):
    for text in (
        "EX y:K. y^2 = t^2",
        "EX y:K. (y^2 = 1 + t & rv[0](y) = rv[0](1))",
        "!(EX y:K. y^2 = 2*t^2) | EX z:K. z = t",
        "EX y:K. EX z:K. y = z & z^2 = t^2",
    ):
        out = qe(parse_formula(laurent, text), laurent)
        assert not has_field_quantifier(out)
        # output is evaluable (closed)
        evaluate(out, {}, laurent)


def test_qe_with_params(laurent):
    phi = parse_formula(laurent, "EX y:K. y^2 = c")
    assert decide(phi, laurent, params={"c": laurent.parse("t^2")})
    assert not decide(phi, laurent, params={"c": laurent.parse("2*t^2")})
    with pytest.raises(NonEffectiveQuantifier):
        qe(phi, laurent)


def test_region_path_sentences(laurent):
    # no equation conjunct: the region calculus decides
    t = laurent.uniformizer()
    cases = [
        ("EX x:K. rv[0](x) = rv[0](t)", True),
        ("EX x:K. rv[0](x) = rv[0](t) & v(rv[0](x - t)) < v(rv[0](t^3))", True),
        ("EX x:K. rv[0](x) = rv[0](t) & rv[0](x) = rv[0](2*t)", False),
        ("EX x:K. rv[0](x^2 - t^2) = rv[0](t^5)", True),
        ("EX x:K. rv[0](x^2) = rv[0](2*t^2)", False),
        ("EX x:K. v(rv[0](x^2 - t^2)) = v(rv[0](t^7))", True),
        ("EX x:K. !(rv[0](x) = rv[0](x))", False),
        ("EX x:K. oplus[0](rv[0](x), rv[0](-t), rv[0](t^4))", True),
    ]
    for text, want in cases:
        assert decide(parse_formula(laurent, text), laurent) == want, text


def test_region_vs_sampling(any_field):
    """Sampled witnesses imply the eliminated formula is true."""
    field = any_field
    rng = random.Random(31)
    units = (
        [1, 2, -1, 3, -2]
        if field.backend == "laurent-q"
        else [u for u in (1, 2, 3, 5, -1) if u % field.p]
    )
    pts = [field.monomial(c, k) for c in units for k in range(-3, 4)]
    atoms = []
    for c in units[:3]:
        for k in (-1, 0, 1, 2):
            atoms.append(f"rv[0](x - {_lit(field, c, k)}) = rv[0]({_lit(field, c, k + 1)})")
            atoms.append(f"v(rv[0](x)) <= v(rv[0]({_lit(field, c, k)}))")
    for _ in range(30):
        chosen = rng.sample(atoms, 2)
        text = f"EX x:K. {chosen[0]} & {chosen[1]}"
        phi = parse_formula(field, text)
        got = decide(phi, field)
        witnessed = False
        for x in pts:
            try:
                if evaluate(phi.body, {"x": x}, field):
                    witnessed = True
                    break
            except PrecisionExhausted:
                continue
        if witnessed:
            assert got, text


def _lit(field, c, k):
    if field.backend == "laurent-q":
        if k == 0:
            return str(c)
        return f"{c}*t^{k}"
    val = Fraction(c) * Fraction(field.p) ** k
    return str(val.numerator) if val.denominator == 1 else f"{val.numerator}/{val.denominator}"


# ---- linear elimination vs brute-force ball oracle -----------------------------


def brute_force_linear(constraints, field):
    """Independent oracle: if the system is satisfiable, the center of the
    smallest ball satisfies every constraint; check it by direct leading
    term arithmetic."""
    candidates = []
    for z, a, b, delta in constraints:
        delta = ValQ.of(delta).as_int()
        if z.is_zero:
            candidates.append((b / a, True))
            continue
        zs = z / a
        candidates.append(((b / a) + rv(zs, delta).rep(), zs.val() + ValQ(delta)))
    best = None
    for x0, r in candidates:
        if r is True or best is None or (best[1] is not True and r > best[1]):
            best = (x0, r)
            if r is True:
                break
    x0 = best[0]
    for z, a, b, delta in constraints:
        delta = ValQ.of(delta).as_int()
        lhs = rv(z, delta) if not z.is_zero else None
        val = a * x0 - b
        rhs = rv(val, delta) if not val.is_zero else None
        if (lhs is None) != (rhs is None):
            if lhs is None and rhs is not None:
                return False
            if rhs is None and lhs is not None:
                return False
        elif lhs is not None and lhs != rhs:
            return False
    return True


def test_linear_elimination_examples(laurent):
    t = laurent.uniformizer()
    one = laurent.one()
    log = set()
    assert eliminate_linear_exists(
        [(t, one, laurent.zero(), 0), (t, one, -(t**3), 0)], laurent, log
    )
    assert not eliminate_linear_exists(
        [(t, one, laurent.zero(), 0), (2 * t, one, laurent.zero(), 0)], laurent
    )
    assert eliminate_linear_exists([(t, one, laurent.zero(), 0)], laurent)


def test_linear_elimination_vs_oracle(any_field):
    field = any_field
    rng = random.Random(field.p or 99)
    units = [1, 2, 3, -1, -2, 5]
    if field.backend == "padic":
        units = [u for u in units if u % field.p]
    cases_seen = set()
    for _ in range(150):
        n = rng.randrange(1, 5)
        constraints = []
        for _ in range(n):
            z = field.monomial(rng.choice(units), rng.randrange(-3, 4))
            if rng.random() < 0.1:
                z = field.zero()
            a = field.monomial(rng.choice(units), rng.randrange(-1, 2))
            b = field.monomial(rng.choice(units), rng.randrange(-3, 4))
            if rng.random() < 0.3:
                b = field.zero()
            constraints.append((z, a, b, rng.randrange(0, 4)))
        got = eliminate_linear_exists(constraints, field, cases_seen)
        want = brute_force_linear(constraints, field)
        assert got == want, constraints
    assert {1, 3, 4} <= cases_seen


# ---- normal form ----------------------------------------------------------------


def test_normal_form_x2_t2(laurent):
    t = laurent.uniformizer()
    nf = normal_form(parse_formula(laurent, "x^2 = t^2"), "x", laurent)
    assert len(nf.centers) == 2
    assert sorted(str(c) for c in nf.centers) == ["-1*t^1", "1*t^1"]
    assert nf.orders == [0, 0]
    # D is the two-point condition at infinity
    assert print_formula(nf.D) == "w1 = rv[0]{inf} | w2 = rv[0]{inf}"
    for x0, want in [(t, True), (-t, True), (2 * t, False), (laurent.zero(), False)]:
        assert nf.member(x0) == want


def test_normal_form_ball(laurent):
    nf = normal_form(parse_formula(laurent, "v(rv[0](x - 1)) > v(rv[0](1))"), "x", laurent)
    assert len(nf.centers) == 1 and (nf.centers[0] - laurent.one()).is_zero
    assert nf.orders == [0]
    for c, k, want in [(1, 1, True), (1, 0, False), (2, 3, True), (3, -1, False)]:
        x0 = laurent.one() + laurent.monomial(c, k)
        assert nf.member(x0) == want


def test_normal_form_trivial(laurent):
    nf = normal_form(parse_formula(laurent, "true"), "x", laurent)
    assert len(nf.centers) == 1
    assert (nf.centers[0]).is_zero
    assert evaluate(nf.D, {}, laurent)


def test_normal_form_matches_direct_evaluation(any_field):
    field = any_field
    rng = random.Random(field.p or 7)
    units = [1, 2, 3, -1] if field.backend == "laurent-q" else [u for u in (1, 2, 3, 5) if u % field.p]
    pts = [field.monomial(c, k) for c in units for k in range(-3, 4)]
    formulas = [
        "x^2 = {a}",
        "rv[0](x^2 - {a}) = rv[0]({b})",
        "v(rv[0](x - {a})) <= v(rv[0]({b}))",
        "x = {a} | v(rv[0](x)) < v(rv[0]({b}))",
        "!(rv[0](x) = rv[0]({a}))",
    ]
    for _ in range(12):
        tmpl = rng.choice(formulas)
        text = tmpl.format(
            a=_lit(field, rng.choice(units), rng.randrange(-2, 3)),
            b=_lit(field, rng.choice(units), rng.randrange(-2, 3)),
        )
        phi = parse_formula(field, text)
        nf = normal_form(phi, "x", field)
        if field.backend == "laurent-q":
            assert all(g == 0 for g in nf.orders)
        for x0 in pts:
            try:
                want = evaluate(phi, {"x": x0}, field)
            except PrecisionExhausted:
                continue
            assert nf.member(x0) == want, (text, str(x0))
