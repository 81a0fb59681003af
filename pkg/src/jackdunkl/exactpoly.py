"""Exact sparse Laurent polynomials over Q, with an optional formal
exponent parameter in the coefficients.

Coefficients are either Fraction or MuPoly (a dense univariate polynomial
in one formal parameter with Fraction coefficients).  Zero coefficients
are never stored.  Exponent vectors are int tuples and may be negative.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import EvalError, ParamError


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise ParamError(f"exact coefficient expected, got float {v!r}")
    return Fraction(v)


class MuPoly:
    """Dense univariate polynomial in a formal parameter, exact coefficients.

    Used for identities that hold for every value of an exponent
    parameter: comparing two MuPoly values compares all coefficients, so
    equality is equality of functions.

    Example
    -------
    >>> t = MuPoly.param()
    >>> (t - 1) * (t + 1)
    MuPoly((Fraction(-1, 1), Fraction(0, 1), Fraction(1, 1)))
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("MuPoly is immutable")

    @staticmethod
    def param() -> "MuPoly":
        """The formal parameter itself."""
        return MuPoly((0, 1))

    @staticmethod
    def const(v) -> "MuPoly":
        return MuPoly((v,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise EvalError("MuPoly is not constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, MuPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MuPoly((other,))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return MuPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MuPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return MuPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return MuPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MuPoly((other,))
        return isinstance(other, MuPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, mu):
        """Horner evaluation; exact for Fraction mu, numeric otherwise."""
        if isinstance(mu, Fraction):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * mu + c
            return acc
        acc = mu * 0
        for c in reversed(self.coeffs):
            acc = acc * mu + (c.numerator / c.denominator)
        return acc

    def __repr__(self):
        return f"MuPoly({self.coeffs!r})"

    def to_json(self):
        return [[c.numerator, c.denominator] for c in self.coeffs]

    @staticmethod
    def from_json(obj) -> "MuPoly":
        return MuPoly(tuple(Fraction(a, b) for a, b in obj))


# ---------------------------------------------------------------------------
# scalar helpers: a coefficient is a Fraction or a MuPoly


def sc_is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, MuPoly) else c == 0


def sc_add(a, b):
    if isinstance(a, MuPoly) or isinstance(b, MuPoly):
        a = a if isinstance(a, MuPoly) else MuPoly((a,))
        return a + b
    return a + b


def sc_mul(a, b):
    if isinstance(a, MuPoly) or isinstance(b, MuPoly):
        a = a if isinstance(a, MuPoly) else MuPoly((a,))
        return a * b
    return a * b


def sc_neg(a):
    return -a


def sc_eval(c, mu):
    if isinstance(c, MuPoly):
        if mu is None:
            raise EvalError("coefficient depends on the formal parameter; pass mu")
        return c(mu)
    return c


def sc_to_json(c):
    if isinstance(c, MuPoly):
        return {"mu": c.to_json()}
    return {"num": c.numerator, "den": c.denominator}


def sc_from_json(obj):
    if "mu" in obj:
        return MuPoly.from_json(obj["mu"])
    return Fraction(obj["num"], obj["den"])


# ---------------------------------------------------------------------------
# Laurent polynomials


def _term_sort_key(expo):
    return (sum(expo), expo)


class LaurentPoly:
    """Sparse Laurent polynomial; terms maps exponent tuples to nonzero
    exact coefficients.

    Example
    -------
    >>> x1 = LaurentPoly.variable(2, 0)
    >>> x2 = LaurentPoly.variable(2, 1)
    >>> (x1 + x2) * x1
    LaurentPoly(2, {(2, 0): Fraction(1, 1), (1, 1): Fraction(1, 1)})
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ParamError(f"exponent {e} has wrong length for nvars={nvars}")
                if not sc_is_zero(c):
                    self.terms[tuple(e)] = c if isinstance(c, MuPoly) else _as_fraction(c)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(nvars) -> "LaurentPoly":
        return LaurentPoly(nvars)

    @staticmethod
    def const(nvars, c) -> "LaurentPoly":
        return LaurentPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def one(nvars) -> "LaurentPoly":
        return LaurentPoly.const(nvars, 1)

    @staticmethod
    def monomial(nvars, expo, c=1) -> "LaurentPoly":
        return LaurentPoly(nvars, {tuple(expo): c})

    @staticmethod
    def variable(nvars, i) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return LaurentPoly(nvars, {tuple(e): 1})

    @staticmethod
    def product_of_vars(nvars, power=1) -> "LaurentPoly":
        """(x_1 ... x_n)^power; power may be negative."""
        return LaurentPoly.monomial(nvars, (power,) * nvars)

    def copy(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, dict(self.terms))

    # -- ring structure ------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ParamError("mixed variable counts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, MuPoly)):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = sc_add(out.get(e, Fraction(0)), c)
            if sc_is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentPoly(self.nvars)
        r.terms = {e: sc_neg(c) for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, MuPoly)):
            other = LaurentPoly.const(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MuPoly)):
            return self.scalar_mul(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = sc_add(out.get(e, Fraction(0)), sc_mul(c1, c2))
                if sc_is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, m):
        if not isinstance(m, int) or m < 0:
            raise ParamError("only nonnegative integer powers")
        acc = LaurentPoly.one(self.nvars)
        base = self
        while m:
            if m & 1:
                acc = acc * base
            m >>= 1
            if m:
                base = base * base
        return acc

    def scalar_mul(self, c) -> "LaurentPoly":
        if sc_is_zero(c if isinstance(c, MuPoly) else Fraction(c)):
            return LaurentPoly.zero(self.nvars)
        r = LaurentPoly(self.nvars)
        r.terms = {e: sc_mul(v, c) for e, v in self.terms.items()}
        return r

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MuPoly)):
            other = LaurentPoly.const(self.nvars, other)
        return (
            isinstance(other, LaurentPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure maps ------------------------------------------------------

    def permute(self, w) -> "LaurentPoly":
        """Permutation action moving slot i of each exponent to slot w[i]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, v in enumerate(e):
                ne[w[i]] = v
            out[tuple(ne)] = c
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    def swap_vars(self, i, j) -> "LaurentPoly":
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i], ne[j] = ne[j], ne[i]
            out[tuple(ne)] = c
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    def reciprocal_args(self) -> "LaurentPoly":
        """Substitute 1/x_i for every x_i (negate all exponents)."""
        r = LaurentPoly(self.nvars)
        r.terms = {tuple(-v for v in e): c for e, c in self.terms.items()}
        return r

    def reverse_vars(self) -> "LaurentPoly":
        """Substitute x_{n+1-i} for x_i."""
        r = LaurentPoly(self.nvars)
        r.terms = {tuple(reversed(e)): c for e, c in self.terms.items()}
        return r

    def partial(self, i) -> "LaurentPoly":
        """Exact partial derivative in variable i (0-based)."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = sc_mul(c, Fraction(e[i]))
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    def times_var(self, i, power=1) -> "LaurentPoly":
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += power
            out[tuple(ne)] = c
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    def divided_difference(self, i, j) -> "LaurentPoly":
        """(p - p with x_i, x_j swapped) / (x_i - x_j), computed exactly.

        Each swap orbit {a, b} with a_i > a_j contributes the telescoping
        sum (c_a - c_b) x^shared * sum_r x_i^{a_i-1-r} x_j^{a_j+r}; there
        is no division, so signed exponents are fine.
        """
        if i == j:
            raise ParamError("divided difference needs distinct variables")
        out = {}
        for e, c in self.terms.items():
            p, q = e[i], e[j]
            if p == q:
                continue  # symmetric in (i, j), cancels
            if p < q:
                se = list(e)
                se[i], se[j] = q, p
                if tuple(se) in self.terms:
                    continue  # orbit handled at its (e[i] > e[j]) representative
                # partner term absent: process the orbit from the mirror side
                e = tuple(se)
                p, q = q, p
                d = sc_neg(c)
            else:
                se = list(e)
                se[i], se[j] = q, p
                d = sc_add(c, sc_neg(self.terms.get(tuple(se), Fraction(0))))
            if sc_is_zero(d):
                continue
            for r in range(p - q):
                ne = list(e)
                ne[i] = p - 1 - r
                ne[j] = q + r
                key = tuple(ne)
                s = sc_add(out.get(key, Fraction(0)), d)
                if sc_is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    # -- inspection ----------------------------------------------------------

    def coeff(self, expo):
        return self.terms.get(tuple(expo), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def min_exponents(self) -> tuple:
        """Per-variable minimum exponent over all terms (0 if empty)."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def total_degree(self):
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def sorted_terms(self):
        """Terms in canonical order: weight descending, then lex descending."""
        return sorted(self.terms.items(), key=lambda t: _term_sort_key(t[0]), reverse=True)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {dict(self.sorted_terms())!r})"

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, point, mu=None):
        """Evaluate at a tuple of Fractions/ints; exact result."""
        if len(point) != self.nvars:
            raise EvalError("point has wrong length")
        if mu is not None and not isinstance(mu, (int, Fraction)):
            raise EvalError("eval_exact needs an exact mu (int or Fraction)")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            m = Fraction(1)
            for v, a in zip(pt, e):
                if a == 0:
                    continue
                if v == 0:
                    if a < 0:
                        raise EvalError("zero coordinate with negative exponent")
                    m = Fraction(0)
                    break
                m *= v ** a
            total += sc_eval(c, mu) * m
        return total

    def eval_float(self, point, mu=None):
        """Evaluate at floats/complex; coefficients are converted once."""
        if len(point) != self.nvars:
            raise EvalError("point has wrong length")
        total = 0.0
        for e, c in self.terms.items():
            m = 1.0
            for v, a in zip(point, e):
                if a == 0:
                    continue
                if v == 0:
                    if a < 0:
                        raise EvalError("zero coordinate with negative exponent")
                    m = 0.0
                    break
                m *= v ** a
            cv = sc_eval(c, mu)
            if isinstance(cv, Fraction):
                cv = cv.numerator / cv.denominator
            total = total + cv * m
        return total

    def eval_many(self, pts, mu=None):
        """Vectorized evaluation on an (m, nvars) float or complex array."""
        pts = np.asarray(pts)
        if pts.ndim != 2 or pts.shape[1] != self.nvars:
            raise EvalError("pts must be (m, nvars)")
        m = pts.shape[0]
        out = np.zeros(m, dtype=pts.dtype if pts.dtype.kind == "c" else float)
        power_cache = {}
        for e, c in self.terms.items():
            mono = np.ones(m, dtype=out.dtype)
            for i, a in enumerate(e):
                if a == 0:
                    continue
                key = (i, a)
                if key not in power_cache:
                    col = pts[:, i]
                    if a < 0 and np.any(col == 0):
                        raise EvalError("zero coordinate with negative exponent")
                    power_cache[key] = col.astype(out.dtype) ** a
                mono = mono * power_cache[key]
            cv = sc_eval(c, mu)
            if isinstance(cv, Fraction):
                cv = cv.numerator / cv.denominator
            out = out + cv * mono
        return out

    def subs_mu(self, mu) -> "LaurentPoly":
        """Instantiate the formal coefficient parameter at an exact value."""
        if not isinstance(mu, (int, Fraction)):
            raise EvalError("subs_mu needs an exact value")
        r = LaurentPoly(self.nvars)
        for e, c in self.terms.items():
            v = c(Fraction(mu)) if isinstance(c, MuPoly) else c
            if v != 0:
                r.terms[e] = v
        return r

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {
            "nvars": self.nvars,
            "terms": [
                {"e": list(e), "c": sc_to_json(c)} for e, c in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json(obj) -> "LaurentPoly":
        r = LaurentPoly(obj["nvars"])
        for t in obj["terms"]:
            r.terms[tuple(t["e"])] = sc_from_json(t["c"])
        return r
