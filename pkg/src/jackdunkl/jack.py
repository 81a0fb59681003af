"""Nonsymmetric and symmetric Jack polynomials for the rational type-A
Dunkl setting, built level by level from the degree-raising map and the
adjacent exchange relation.

Everything in JackTable is exact (Fraction coefficients).  A parallel
float64 level iterator serves the deep truncations needed by quadrature
kernels; the recursion has nonnegative transition coefficients for
k >= 0, so the float path involves no cancellation and is validated
against the exact table on the overlapping weights in the test suite.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import random as _random
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .combinatorics import (
    Params,
    cell_stats,
    cells,
    compositions_of_weight,
    dominance_partitions,
    generalized_pochhammer_coeffs,
    is_partition,
    orbit_of,
    partitions_of_weight,
    sort_desc,
    spectral_vector,
    weight,
)
from .dunkl_ops import (
    apply_poly_of_dunkl_section,
    cherednik_op,
    dunkl_pairing,
    raising_op,
)
from .errors import CacheError, ParamError
from .exactpoly import LaurentPoly, MuPoly

CACHE_ENV = "JACKDUNKL_CACHE_DIR"
_CACHE_FORMAT = 1


def default_maxweight(n: int) -> int:
    if n == 1:
        return 12
    if n == 2:
        return 8
    if n == 3:
        return 6
    return 4


@lru_cache(maxsize=None)
def comp_list(n: int, m: int) -> tuple:
    """Canonical (lex-descending) list of weight-m compositions."""
    return tuple(compositions_of_weight(n, m))


@lru_cache(maxsize=None)
def comp_index(n: int, m: int) -> dict:
    return {c: i for i, c in enumerate(comp_list(n, m))}


def _last_nonzero(comp) -> int:
    """1-based index of the last nonzero slot; 0 for the zero composition."""
    for i in range(len(comp) - 1, -1, -1):
        if comp[i] != 0:
            return i + 1
    return 0


def monomial_symmetric(n, lam) -> LaurentPoly:
    """Monomial symmetric polynomial: sum of the distinct rearrangements."""
    p = LaurentPoly.zero(n)
    for comp in orbit_of(tuple(lam)):
        p = p + LaurentPoly.monomial(n, comp)
    return p


# ---------------------------------------------------------------------------
# product formulas (exact and float)


def eval_one(params: Params, comp) -> Fraction:
    """Value of the monic nonsymmetric polynomial at (1, ..., 1), as a
    product over diagram cells.  Nonnegative compositions only."""
    k = params.k
    n = params.n
    val = Fraction(1)
    for (i, j) in cells(comp):
        arm, leg, coleg = cell_stats(comp, i, j)
        num = Fraction(j) + k * n - k * coleg
        den = Fraction(arm + 1) + k * leg + k
        val *= num / den
    return val


def dprime(params: Params, comp) -> Fraction:
    """Coupling-cleared hook product: prod over cells of (arm + 1 + k*leg).

    At k = 0 it degenerates to the product of the factorials of the parts,
    which keeps every normalization below well defined there.
    """
    k = params.k
    val = Fraction(1)
    for (i, j) in cells(comp):
        arm, leg, _ = cell_stats(comp, i, j)
        val *= Fraction(arm + 1) + k * leg
    return val


def cnorm(params: Params, comp) -> Fraction:
    """Coefficient turning the monic polynomial into the combinatorial
    normalization: weight factorial over the hook product."""
    return Fraction(factorial(weight(comp))) / dprime(params, comp)


def sym_eval_one(params: Params, lam) -> Fraction:
    """Value of the monic symmetric polynomial at (1, ..., 1), via the
    hook-weighted orbit sum (safe at k = 0)."""
    dp_top = dprime(params, lam)
    total = Fraction(0)
    for comp in orbit_of(tuple(lam)):
        total += eval_one(params, comp) / dprime(params, comp)
    return dp_top * total


def sym_eval_one_product(params: Params, lam) -> Fraction:
    """Cell-product form of the symmetric value at (1, ..., 1); needs k > 0."""
    if params.k == 0:
        raise ParamError("product form degenerates at k = 0; use sym_eval_one")
    k = params.k
    n = params.n
    val = Fraction(1)
    for (i, j) in cells(lam):
        arm, leg, coleg = cell_stats(lam, i, j)
        num = Fraction(j - 1) + k * n - k * coleg
        den = Fraction(arm) + k * leg + k
        val *= num / den
    return val


def eval_one_float(params: Params, comp) -> float:
    k = float(params.k)
    n = params.n
    val = 1.0
    for (i, j) in cells(comp):
        arm, leg, coleg = cell_stats(comp, i, j)
        val *= (j + k * n - k * coleg) / (arm + 1 + k * leg + k)
    return val


def dprime_float(params: Params, comp) -> float:
    k = float(params.k)
    val = 1.0
    for (i, j) in cells(comp):
        arm, leg, _ = cell_stats(comp, i, j)
        val *= arm + 1 + k * leg
    return val


# ---------------------------------------------------------------------------
# exact table


class JackTable:
    """Exact nonsymmetric Jack polynomials up to a weight cap.

    Example
    -------
    >>> t = JackTable(Params(2, 1), maxweight=2)
    >>> t.nonsym((1, 0))
    LaurentPoly(2, {(1, 0): Fraction(1, 1), (0, 1): Fraction(1, 2)})
    """

    def __init__(self, params: Params, maxweight: int | None = None):
        self.params = params
        self.maxweight = -1
        self._E = {}
        self._P = {}
        self._float = {}
        self.extend(default_maxweight(params.n) if maxweight is None else maxweight)

    # -- construction --------------------------------------------------------

    def extend(self, maxweight: int) -> "JackTable":
        if maxweight <= self.maxweight:
            return self
        n = self.params.n
        k = self.params.k
        if self.maxweight < 0:
            self._E[(0,) * n] = LaurentPoly.one(n)
            self.maxweight = 0
        for m in range(self.maxweight + 1, maxweight + 1):
            level = sorted(comp_list(n, m), key=_last_nonzero, reverse=True)
            for comp in level:
                j = _last_nonzero(comp)
                if j == n:
                    hat = (comp[-1] - 1,) + comp[:-1]
                    self._E[comp] = raising_op(self._E[hat])
                else:
                    src = list(comp)
                    src[j - 1], src[j] = 0, comp[j - 1]
                    src = tuple(src)
                    spec = spectral_vector(self.params, src)
                    gap = spec[j] - spec[j - 1]
                    if gap <= 0:
                        raise ParamError(
                            f"exchange gap {gap} not positive at {src}; k={k}"
                        )
                    base = self._E[src]
                    self._E[comp] = base.swap_vars(j - 1, j) + base.scalar_mul(k / gap)
            self.maxweight = m
        return self

    # -- accessors ------------------------------------------------------------

    def _split_signed(self, comp):
        comp = tuple(comp)
        if len(comp) != self.params.n:
            raise ParamError("composition length must match the rank")
        shift = max(0, -min(comp))
        base = tuple(v + shift for v in comp)
        return base, shift

    def nonsym(self, comp) -> LaurentPoly:
        """Monic nonsymmetric polynomial; negative parts are handled by the
        product-of-variables shift, extending the table as needed."""
        base, shift = self._split_signed(comp)
        self.extend(weight(base))
        p = self._E[base]
        if shift:
            p = p * LaurentPoly.product_of_vars(self.params.n, -shift)
        return p

    def combinorm(self, comp) -> LaurentPoly:
        """Combinatorially normalized polynomial (nonnegative parts only)."""
        comp = tuple(comp)
        if min(comp) < 0:
            raise ParamError("combinatorial normalization needs nonnegative parts")
        return self.nonsym(comp).scalar_mul(cnorm(self.params, comp))

    def spectral(self, comp) -> tuple:
        return spectral_vector(self.params, comp)

    def eval_one(self, comp) -> Fraction:
        base, _ = self._split_signed(comp)
        return eval_one(self.params, base)

    def sym(self, lam) -> LaurentPoly:
        """Monic symmetric polynomial as the hook-weighted orbit sum of the
        nonsymmetric ones."""
        lam = tuple(lam)
        if not is_partition(lam):
            raise ParamError(f"{lam} is not a partition")
        got = self._P.get(lam)
        if got is not None:
            return got
        self.extend(weight(lam))
        dp_top = dprime(self.params, lam)
        p = LaurentPoly.zero(self.params.n)
        for comp in orbit_of(lam):
            p = p + self._E[comp].scalar_mul(dp_top / dprime(self.params, comp))
        self._P[lam] = p
        return p

    def sym_eval_one(self, lam) -> Fraction:
        return sym_eval_one(self.params, lam)

    def sym_cnorm(self, lam) -> Fraction:
        return cnorm(self.params, lam)

    def sym_combinorm(self, lam) -> LaurentPoly:
        return self.sym(lam).scalar_mul(cnorm(self.params, lam))

    def float_level(self, m: int) -> FloatLevel:
        """Float64 view of one exact homogeneous level, cached."""
        got = self._float.get(m)
        if got is not None:
            return got
        self.extend(m)
        n = self.params.n
        comps = comp_list(n, m)
        index = comp_index(n, m)
        mat = np.zeros((len(comps), len(comps)))
        for r, comp in enumerate(comps):
            for e, c in self._E[comp].terms.items():
                mat[r, index[e]] = float(c)
        level = FloatLevel(m, comps, index, mat)
        self._float[m] = level
        return level

    # -- binomials -------------------------------------------------------------

    def binomials(self, lam) -> dict:
        """Generalized binomial coefficients of lam against all partitions
        of weight <= weight(lam), from the shifted-argument expansion
        sym(lam at 1+x)/sym(lam at 1) = sum binom * sym(mu at x)/sym(mu at 1).
        """
        lam = tuple(lam)
        mtop = weight(lam)
        self.extend(mtop)
        rest = _shift_vars_by_one(self.sym(lam)).scalar_mul(
            1 / sym_eval_one(self.params, lam)
        )
        out = {}
        for m in range(mtop, -1, -1):
            # partitions of m, dominance-compatible (lex-descending) order
            for mu in partitions_of_weight(self.params.n, m):
                c = rest.coeff(mu)
                if c == 0:
                    out[mu] = Fraction(0)
                    continue
                out[mu] = c * sym_eval_one(self.params, mu)
                rest = rest - self.sym(mu).scalar_mul(c)
        if not rest.is_zero():
            raise ParamError("binomial elimination left a remainder")
        return out


@lru_cache(maxsize=None)
def _one_plus_var_power(n: int, i: int, p: int):
    return (LaurentPoly.one(n) + LaurentPoly.variable(n, i)) ** p


def _shift_vars_by_one(poly: LaurentPoly) -> LaurentPoly:
    """Substitute x_i + 1 for every x_i (nonnegative exponents only)."""
    out = LaurentPoly.zero(poly.nvars)
    for e, c in poly.terms.items():
        if any(v < 0 for v in e):
            raise ParamError("shift by one needs nonnegative exponents")
        t = LaurentPoly.const(poly.nvars, c)
        for i, v in enumerate(e):
            if v:
                t = t * _one_plus_var_power(poly.nvars, i, v)
        out = out + t
    return out


# ---------------------------------------------------------------------------
# independent construction (orthogonalization oracle)


def gram_schmidt_sym(params: Params, lam) -> LaurentPoly:
    """Symmetric polynomial via exact orthogonalization, independent of the
    raising/exchange recursion: monic on the top monomial symmetric term and
    pairing-orthogonal to every dominance-smaller monomial symmetric
    polynomial of the same weight."""
    lam = tuple(lam)
    if not is_partition(lam):
        raise ParamError(f"{lam} is not a partition")
    n = params.n
    lower = [
        mu
        for mu in partitions_of_weight(n, weight(lam))
        if dominance_partitions(mu, lam) == "less"
    ]
    basis = [monomial_symmetric(n, mu) for mu in lower]
    target = monomial_symmetric(n, lam)
    if not basis:
        return target
    # solve for coefficients a with [target + sum a_i basis_i, basis_j] = 0
    gram = [[dunkl_pairing(params, bi, bj) for bj in basis] for bi in basis]
    rhs = [-dunkl_pairing(params, target, bj) for bj in basis]
    coeffs = _solve_exact(gram, rhs)
    out = target
    for a, b in zip(coeffs, basis):
        out = out + b.scalar_mul(a)
    return out


def _solve_exact(mat, rhs):
    """Gaussian elimination over Fractions with partial pivoting by size."""
    n = len(rhs)
    a = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ParamError("singular system in exact solve")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# exact verification of the transform eigen-identity


def verify_section_identity(params: Params, comp, table: JackTable | None = None,
                            symmetric: bool = False):
    """Exact check, with the exponent parameter kept formal, that applying
    the polynomial of Dunkl operators to the parameter section reproduces
    the sign times the generalized Pochhammer symbol times the polynomial
    in the reciprocal variables.

    Returns (ok, detail); detail names the first differing coefficient.
    """
    comp = tuple(comp)
    if min(comp) < 0:
        raise ParamError("identity check needs a nonnegative composition")
    if table is None:
        table = JackTable(params, maxweight=weight(comp))
    poly = table.sym(comp) if symmetric else table.nonsym(comp)
    lhs = apply_poly_of_dunkl_section(params, poly, LaurentPoly.one(params.n))
    m = weight(comp)
    poch = MuPoly(generalized_pochhammer_coeffs(params, comp))
    sign = Fraction(-1) ** m
    rhs = poly.reciprocal_args().scalar_mul(poch * sign)
    if lhs == rhs:
        return True, None
    diff = lhs - rhs
    e, c = diff.sorted_terms()[0]
    return False, f"first differing exponent {e}: lhs-rhs coefficient {c!r}"


# ---------------------------------------------------------------------------
# float levels (deep truncations for quadrature kernels)


class FloatLevel:
    """One homogeneous level of the float64 coefficient table.

    mat[r, c] is the coefficient of the weight-m monomial comp_list[c] in
    the monic nonsymmetric polynomial of composition comp_list[r].
    """

    __slots__ = ("m", "comps", "index", "mat")

    def __init__(self, m, comps, index, mat):
        self.m = m
        self.comps = comps
        self.index = index
        self.mat = mat

    def row(self, comp):
        return self.mat[self.index[comp]]

    def values_at(self, point) -> np.ndarray:
        """Values of every polynomial of this level at one point (1d array)."""
        monos = monomial_values(np.asarray(point, dtype=float)[None, :], self.m)[0]
        return self.mat @ monos


@lru_cache(maxsize=None)
def _raising_map(n: int, m: int) -> np.ndarray:
    """Column map: exponent a of weight m-1 to (a_2, ..., a_n, a_1 + 1)."""
    idx = comp_index(n, m)
    prev = comp_list(n, m - 1)
    return np.array([idx[a[1:] + (a[0] + 1,)] for a in prev], dtype=np.int64)


@lru_cache(maxsize=None)
def _swap_map(n: int, m: int, i: int) -> np.ndarray:
    """Column map sending the index of exponent b to that of b with slots
    i, i+1 swapped."""
    idx = comp_index(n, m)
    cur = comp_list(n, m)
    out = np.empty(len(cur), dtype=np.int64)
    for c, b in enumerate(cur):
        sb = list(b)
        sb[i], sb[i + 1] = sb[i + 1], sb[i]
        out[c] = idx[tuple(sb)]
    return out


def _spectral_float(n, kf, comp):
    out = np.empty(n)
    for j, cj in enumerate(comp):
        before = sum(1 for i in range(j) if comp[i] >= cj)
        after = sum(1 for i in range(j + 1, n) if comp[i] > cj)
        out[j] = cj - kf * (before + after)
    return out


def iter_levels_float(params: Params, maxweight: int):
    """Yield FloatLevel objects for weights 0..maxweight, holding only the
    previous level internally."""
    n = params.n
    kf = float(params.k)
    prev = FloatLevel(0, comp_list(n, 0), comp_index(n, 0), np.ones((1, 1)))
    yield prev
    for m in range(1, maxweight + 1):
        comps = comp_list(n, m)
        index = comp_index(n, m)
        mat = np.zeros((len(comps), len(comps)))
        rmap = _raising_map(n, m)
        for comp in sorted(comps, key=_last_nonzero, reverse=True):
            r = index[comp]
            j = _last_nonzero(comp)
            if j == n:
                hat = (comp[-1] - 1,) + comp[:-1]
                mat[r, rmap] = prev.mat[prev.index[hat]]
            else:
                src = list(comp)
                src[j - 1], src[j] = 0, comp[j - 1]
                src = tuple(src)
                spec = _spectral_float(n, kf, src)
                gap = spec[j] - spec[j - 1]
                if gap < 0.5:
                    raise ParamError(f"exchange gap {gap} too small at {src}")
                base = mat[index[src]]
                mat[r] = base[_swap_map(n, m, j - 1)]
                if kf:
                    mat[r] += (kf / gap) * base
        prev = FloatLevel(m, comps, index, mat)
        yield prev


def monomial_values(pts: np.ndarray, m: int) -> np.ndarray:
    """Matrix of monomial values: pts is (q, n), result is (q, N_m) over
    the canonical weight-m exponent list."""
    q, n = pts.shape
    exps = comp_list(n, m)
    out = np.empty((q, len(exps)), dtype=pts.dtype)
    # per-variable power tables up to m
    pw = [np.vander(pts[:, i], m + 1, increasing=True) for i in range(n)]
    for c, e in enumerate(exps):
        acc = pw[0][:, e[0]].copy()
        for i in range(1, n):
            if e[i]:
                acc *= pw[i][:, e[i]]
        out[:, c] = acc
    return out


# ---------------------------------------------------------------------------
# disk cache


def _poly_to_compact(poly: LaurentPoly):
    out = []
    for e, c in poly.sorted_terms():
        if isinstance(c, MuPoly):
            raise CacheError("table polynomials must have plain coefficients")
        out.append(list(e) + [f"{c.numerator}/{c.denominator}"])
    return out


def _poly_from_compact(n, rows) -> LaurentPoly:
    p = LaurentPoly(n)
    for row in rows:
        num, den = row[-1].split("/")
        p.terms[tuple(row[:-1])] = Fraction(int(num), int(den))
    return p


def save_table(table: JackTable, path: str) -> None:
    """Write the exact table as gzipped JSON with a content checksum."""
    n = table.params.n
    body = {
        "levels": [
            [
                {"eta": list(comp), "poly": _poly_to_compact(table._E[comp])}
                for comp in comp_list(n, m)
            ]
            for m in range(table.maxweight + 1)
        ]
    }
    blob = json.dumps(body, sort_keys=True, separators=(",", ":"))
    doc = {
        "format": _CACHE_FORMAT,
        "n": n,
        "k": f"{table.params.k.numerator}/{table.params.k.denominator}",
        "maxweight": table.maxweight,
        "sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "body": body,
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    tmp = path + ".tmp"
    with gzip.open(tmp, "wt", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)


def load_table(path: str, spot_checks: int = 3) -> JackTable:
    """Load a cached table; verifies the checksum and re-derives a few
    eigen-equations as a spot check."""
    try:
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CacheError(f"cannot read table cache {path}: {exc}") from exc
    if doc.get("format") != _CACHE_FORMAT:
        raise CacheError(f"unsupported cache format in {path}")
    blob = json.dumps(doc["body"], sort_keys=True, separators=(",", ":"))
    if hashlib.sha256(blob.encode()).hexdigest() != doc["sha256"]:
        raise CacheError(f"checksum mismatch in {path}")
    params = Params(doc["n"], doc["k"])
    table = JackTable.__new__(JackTable)
    table.params = params
    table.maxweight = doc["maxweight"]
    table._P = {}
    table._E = {}
    table._float = {}
    n = params.n
    for level in doc["body"]["levels"]:
        for item in level:
            comp = tuple(item["eta"])
            table._E[comp] = _poly_from_compact(n, item["poly"])
    expect = sum(len(comp_list(n, m)) for m in range(table.maxweight + 1))
    if len(table._E) != expect:
        raise CacheError(f"cache {path} holds {len(table._E)} of {expect} entries")
    rng = _random.Random(0)
    pool = [c for c in table._E if weight(c) > 0]
    for comp in rng.sample(pool, min(spot_checks, len(pool))):
        spec = spectral_vector(params, comp)
        j = rng.randrange(n)
        got = cherednik_op(params, j, table._E[comp])
        if got != table._E[comp].scalar_mul(spec[j]):
            raise CacheError(f"cache {path} failed the eigen spot check at {comp}")
    return table


def cache_dir() -> str:
    env = os.environ.get(CACHE_ENV)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "jackdunkl")


def cached_table(params: Params, maxweight: int, directory: str | None = None) -> JackTable:
    """Load the exact table from the cache directory, building and saving
    it when absent or unreadable."""
    d = directory or cache_dir()
    name = (
        f"jack_n{params.n}_k{params.k.numerator}_{params.k.denominator}"
        f"_w{maxweight}.json.gz"
    )
    path = os.path.join(d, name)
    if os.path.exists(path):
        try:
            return load_table(path)
        except CacheError:
            pass  # fall through to a rebuild
    table = JackTable(params, maxweight=maxweight)
    save_table(table, path)
    return table
