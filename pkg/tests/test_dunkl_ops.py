import random
from fractions import Fraction

import pytest

from jackdunkl.combinatorics import Params
from jackdunkl.dunkl_ops import (
    apply_poly_of_dunkl,
    apply_poly_of_dunkl_section,
    cherednik_op,
    dunkl_deriv,
    dunkl_deriv_section,
    dunkl_pairing,
    raising_op,
)
from jackdunkl.errors import ParamError
from jackdunkl.exactpoly import LaurentPoly

X = lambda n, i: LaurentPoly.variable(n, i)


def random_poly(rng, nvars, nterms=5, lo=0, hi=3):
    p = LaurentPoly.zero(nvars)
    for _ in range(nterms):
        e = tuple(rng.randint(lo, hi) for _ in range(nvars))
        p = p + LaurentPoly.monomial(nvars, e, Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
    return p


def test_dunkl_on_linear_frozen():
    pr = Params(2, Fraction(1, 2))
    assert dunkl_deriv(pr, 0, X(2, 0)) == LaurentPoly.const(2, Fraction(3, 2))
    assert dunkl_deriv(pr, 0, X(2, 1)) == LaurentPoly.const(2, Fraction(-1, 2))
    pr3 = Params(3, 2)
    # T_1 x_1 = 1 + k(n-1)
    assert dunkl_deriv(pr3, 0, X(3, 0)) == LaurentPoly.const(3, 5)


def test_dunkl_reduces_to_derivative_at_k0():
    rng = random.Random(1)
    pr = Params(3, 0)
    p = random_poly(rng, 3)
    for i in range(3):
        assert dunkl_deriv(pr, i, p) == p.partial(i)


def test_dunkl_on_symmetric_is_derivative():
    pr = Params(3, Fraction(5, 3))
    e2 = (
        X(3, 0) * X(3, 1) + X(3, 0) * X(3, 2) + X(3, 1) * X(3, 2)
    )
    for i in range(3):
        assert dunkl_deriv(pr, i, e2) == e2.partial(i)


def test_dunkl_operators_commute():
    rng = random.Random(2)
    pr = Params(3, Fraction(3, 2))
    for _ in range(6):
        p = random_poly(rng, 3, nterms=4, hi=3)
        for i in range(3):
            for j in range(i + 1, 3):
                a = dunkl_deriv(pr, i, dunkl_deriv(pr, j, p))
                b = dunkl_deriv(pr, j, dunkl_deriv(pr, i, p))
                assert a == b


def test_dunkl_lowers_degree_on_laurent():
    # signed exponents are allowed; degree drops by one
    pr = Params(2, Fraction(1, 2))
    p = LaurentPoly.monomial(2, (2, -1))
    q = dunkl_deriv(pr, 0, p)
    assert all(sum(e) == 0 for e in q.terms)


def test_cherednik_frozen_on_one():
    pr = Params(3, Fraction(1, 2))
    one = LaurentPoly.one(3)
    for j in range(3):
        assert cherednik_op(pr, j, one) == one.scalar_mul(-Fraction(1, 2) * j)


def test_cherednik_operators_commute():
    rng = random.Random(3)
    pr = Params(3, Fraction(2, 3))
    for _ in range(4):
        p = random_poly(rng, 3, nterms=3, hi=2)
        for i in range(3):
            for j in range(i + 1, 3):
                a = cherednik_op(pr, i, cherednik_op(pr, j, p))
                b = cherednik_op(pr, j, cherednik_op(pr, i, p))
                assert a == b


def test_raising_op_monomial_map():
    p = LaurentPoly.monomial(3, (2, 0, 1), Fraction(7))
    assert raising_op(p) == LaurentPoly.monomial(3, (0, 1, 3), Fraction(7))


def test_raising_intertwines_cherednik():
    # D_j Phi = Phi D_{j+1} for j < n-1 (0-based), D_{n-1} Phi = Phi (D_0 + 1)
    rng = random.Random(4)
    pr = Params(3, Fraction(1, 2))
    for _ in range(4):
        p = random_poly(rng, 3, nterms=3, hi=2)
        for j in range(2):
            lhs = cherednik_op(pr, j, raising_op(p))
            rhs = raising_op(cherednik_op(pr, j + 1, p))
            assert lhs == rhs
        lhs = cherednik_op(pr, 2, raising_op(p))
        rhs = raising_op(cherednik_op(pr, 0, p) + p)
        assert lhs == rhs


def test_apply_poly_of_dunkl_matches_manual():
    pr = Params(2, Fraction(1, 2))
    rng = random.Random(5)
    p = random_poly(rng, 2, nterms=4, hi=3)
    q = X(2, 0) ** 2 * X(2, 1) + 3 * X(2, 0)
    manual = dunkl_deriv(
        pr, 0, dunkl_deriv(pr, 0, dunkl_deriv(pr, 1, p))
    ) + dunkl_deriv(pr, 0, p).scalar_mul(3)
    assert apply_poly_of_dunkl(pr, q, p) == manual


def test_apply_poly_rejects_laurent_operator():
    pr = Params(2, 1)
    with pytest.raises(ParamError):
        apply_poly_of_dunkl(pr, LaurentPoly.monomial(2, (-1, 0)), LaurentPoly.one(2))


def test_section_calculus_matches_integer_instances():
    # with mu = M an integer, f * (x1 x2 x3)^(-M) is an honest Laurent
    # polynomial and the conjugated operator must match the plain one
    pr = Params(3, Fraction(1, 2))
    rng = random.Random(6)
    for M in (0, 1, 3):
        delta = LaurentPoly.product_of_vars(3, -M)
        for _ in range(3):
            f = random_poly(rng, 3, nterms=3, hi=2)
            for i in range(3):
                direct = dunkl_deriv(pr, i, f * delta)
                section = dunkl_deriv_section(pr, i, f).subs_mu(M) * delta
                assert direct == section


def test_section_poly_application_matches_integer_instances():
    pr = Params(2, Fraction(3, 2))
    rng = random.Random(7)
    q = X(2, 0) * X(2, 1) + 2 * X(2, 1)
    for M in (0, 2):
        delta = LaurentPoly.product_of_vars(2, -M)
        f = random_poly(rng, 2, nterms=3, hi=2)
        direct = apply_poly_of_dunkl(pr, q, f * delta)
        section = apply_poly_of_dunkl_section(pr, q, f).subs_mu(M) * delta
        assert direct == section


def test_pairing_frozen_and_symmetric():
    pr = Params(2, Fraction(1, 2))
    x1 = X(2, 0)
    assert dunkl_pairing(pr, x1, x1) == Fraction(3, 2)  # 1 + k
    rng = random.Random(8)
    for _ in range(6):
        p = random_poly(rng, 2, nterms=3, hi=3)
        q = random_poly(rng, 2, nterms=3, hi=3)
        assert dunkl_pairing(pr, p, q) == dunkl_pairing(pr, q, p)


def test_pairing_adjoint_multiplication():
    pr = Params(3, Fraction(2, 3))
    rng = random.Random(9)
    for _ in range(5):
        p = random_poly(rng, 3, nterms=3, hi=2)
        q = random_poly(rng, 3, nterms=3, hi=2)
        for i in range(3):
            assert dunkl_pairing(pr, p.times_var(i), q) == dunkl_pairing(
                pr, p, dunkl_deriv(pr, i, q)
            )


def test_pairing_positive_definite_small():
    # Gram matrix on monomials of weight <= 2 has positive leading minors
    pr = Params(2, Fraction(1, 2))
    basis = [
        LaurentPoly.monomial(2, e)
        for e in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    ]
    g = [[dunkl_pairing(pr, a, b) for b in basis] for a in basis]
    # exact leading principal minors via fraction-free Gaussian steps
    from fractions import Fraction as F

    m = [[F(v) for v in row] for row in g]
    size = len(basis)
    for t in range(size):
        # pairing is graded: cross-weight blocks vanish
        piv = m[t][t]
        assert piv > 0
        for r in range(t + 1, size):
            factor = m[r][t] / piv
            m[r] = [m[r][c] - factor * m[t][c] for c in range(size)]
