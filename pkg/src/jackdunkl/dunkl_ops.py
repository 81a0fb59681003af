"""Rational Dunkl and Cherednik operators on exact Laurent polynomials.

All operators act exactly.  The section variants implement the action on
f * (x_1...x_n)^(-mu) with a formal exponent mu, returning coefficients
polynomial in mu; instantiating mu at an integer must (and in tests does)
reproduce the plain operator on the corresponding Laurent polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from .combinatorics import Params
from .errors import ParamError
from .exactpoly import LaurentPoly, MuPoly


def dunkl_deriv(params: Params, i: int, p: LaurentPoly) -> LaurentPoly:
    """Dunkl operator in variable i (0-based): partial derivative plus k
    times the sum of divided differences against every other variable."""
    n = params.n
    if p.nvars != n:
        raise ParamError("polynomial rank mismatch")
    if not 0 <= i < n:
        raise ParamError(f"variable index {i} out of range")
    out = p.partial(i)
    if params.k:
        acc = LaurentPoly.zero(n)
        for j in range(n):
            if j != i:
                acc = acc + p.divided_difference(i, j)
        out = out + acc.scalar_mul(params.k)
    return out


def cherednik_op(params: Params, j: int, p: LaurentPoly) -> LaurentPoly:
    """Cherednik operator in variable j (0-based).

    x_j * (Dunkl in j) + k(1-n) + k * (sum of transpositions with later
    variables).  Polynomial-stable, triangular on monomials; acting on 1
    it returns -k*j times 1.
    """
    n = params.n
    k = params.k
    out = dunkl_deriv(params, j, p).times_var(j)
    out = out + p.scalar_mul(k * (1 - n))
    for i in range(j + 1, n):
        out = out + p.swap_vars(j, i).scalar_mul(k)
    return out


def raising_op(p: LaurentPoly) -> LaurentPoly:
    """Degree-raising map: substitute the cycled variables and multiply by
    the last one.  Sends the monomial with exponent a to the monomial with
    exponent (a_2, ..., a_n, a_1 + 1)."""
    n = p.nvars
    r = LaurentPoly(n)
    for e, c in p.terms.items():
        ne = list(e[1:]) + [e[0] + 1]
        r.terms[tuple(ne)] = c
    return r


def _apply_monomials(params, q, p, op):
    """sum_kappa q_kappa op^kappa p with shared-suffix memoization."""
    n = params.n
    if q.nvars != n or p.nvars != n:
        raise ParamError("polynomial rank mismatch")
    if any(v < 0 for e in q.terms for v in e):
        raise ParamError("operator polynomial must have nonnegative exponents")
    memo = {(0,) * n: p}

    def compute(kappa):
        got = memo.get(kappa)
        if got is not None:
            return got
        i = max(l for l in range(n) if kappa[l] > 0)
        prev = list(kappa)
        prev[i] -= 1
        val = op(i, compute(tuple(prev)))
        memo[kappa] = val
        return val

    out = LaurentPoly.zero(n)
    for e, c in sorted(q.terms.items(), key=lambda t: (sum(t[0]), t[0])):
        out = out + compute(e).scalar_mul(c)
    return out


def apply_poly_of_dunkl(params: Params, q: LaurentPoly, p: LaurentPoly) -> LaurentPoly:
    """Substitute the Dunkl operators for the variables of q, apply to p."""
    return _apply_monomials(params, q, p, lambda i, f: dunkl_deriv(params, i, f))


def dunkl_deriv_section(params: Params, i: int, p: LaurentPoly) -> LaurentPoly:
    """Dunkl operator conjugated by (x_1...x_n)^(-mu), mu formal.

    Equals the plain operator plus the rank-one correction
    -mu * p / x_i; the correction is where MuPoly coefficients enter.
    """
    out = dunkl_deriv(params, i, p)
    corr = p.times_var(i, -1).scalar_mul(-MuPoly.param())
    return out + corr


def apply_poly_of_dunkl_section(
    params: Params, q: LaurentPoly, p: LaurentPoly
) -> LaurentPoly:
    """Like apply_poly_of_dunkl but in the conjugated (section) calculus."""
    return _apply_monomials(
        params, q, p, lambda i, f: dunkl_deriv_section(params, i, f)
    )


def dunkl_pairing(params: Params, p: LaurentPoly, q: LaurentPoly):
    """Exact bilinear pairing: substitute Dunkl operators into p, apply to
    q, take the constant term.  Both arguments need nonnegative exponents.

    Symmetric, and for k >= 0 positive definite; multiplication by a
    variable is adjoint to the matching Dunkl operator.
    """
    if any(v < 0 for e in p.terms for v in e) or any(
        v < 0 for e in q.terms for v in e
    ):
        raise ParamError("pairing needs polynomials, not Laurent polynomials")
    return apply_poly_of_dunkl(params, p, q).constant_term()
