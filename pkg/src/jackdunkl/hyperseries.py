"""Hypergeometric series of Jack-polynomial type with certified truncation.

Two families are provided: the nonsymmetric-kernel series (summed over all
compositions, written K below) and the symmetric series (summed over
partitions, written F).  Both take tuples of upper and lower parameters;
the kernel of the Dunkl transform is the (0,0) instance.

Truncation error is certified, not estimated: the weight-m block of either
series is bounded by rho(m) * (n |z| |w|)_max^m / m!, where rho(m) is the
exact maximum over weight-m partitions of the absolute parameter ratio,
and the remaining tail past the enumerated range is closed out by a
rigorous geometric majorant.  Reported values carry their bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lgamma, log

import numpy as np
from scipy.special import loggamma as _cplx_loggamma

from .combinatorics import (
    Params,
    generalized_pochhammer_num,
    orbit_of,
    partitions_of_weight,
)
from .errors import ConvergenceError, DomainError, ParamError, PoleError
from .jack import JackTable, dprime_float, eval_one_float, monomial_values

POLE_WINDOW = 1e-6
CLOSEOUT_RATIO = 0.9


# ---------------------------------------------------------------------------
# multivariate gamma function


def _lattice_distance(params: Params, v) -> float:
    """Distance from v to the pole lattice {k(j-1) - a : j <= n, a in N}."""
    best = float("inf")
    kf = float(params.k)
    for j in range(params.n):
        u = complex(v) - kf * j
        # nearest nonpositive integer to Re(u)
        a = min(0, round(u.real))
        best = min(best, abs(u - a))
    return best


def check_no_gamma_pole(params: Params, values) -> None:
    """Raise PoleError when any entry sits numerically on the pole lattice.

    Meant for scalar series parameters, whose symbols run over every row;
    the vector gamma function instead checks each slot against its own row.
    """
    for v in values:
        if _lattice_distance(params, v) < POLE_WINDOW:
            raise PoleError(
                f"argument {v} is within {POLE_WINDOW} of the gamma pole lattice"
            )


def _check_slot_poles(params: Params, lam) -> None:
    kf = float(params.k)
    for j, v in enumerate(lam):
        u = complex(v) - kf * j
        a = min(0, round(u.real))
        if abs(u - a) < POLE_WINDOW:
            raise PoleError(
                f"slot {j} argument {v} is within {POLE_WINDOW} of a gamma pole"
            )


def log_gamma_n(params: Params, lam) -> complex:
    """Log of the multivariate gamma: log d_n(k) + sum_j log Gamma(lam_j - k(j-1)).

    Branch: the principal branch of each factor, summed; ratios of values
    produced by this function are exact up to that shared convention.
    """
    lam = tuple(lam)
    if len(lam) != params.n:
        raise ParamError("argument length must equal the rank")
    _check_slot_poles(params, lam)
    kf = float(params.k)
    out = 0j
    for j in range(1, params.n + 1):
        out += _cplx_loggamma(1 + j * kf) - _cplx_loggamma(1 + kf)
    for j, v in enumerate(lam):
        out += _cplx_loggamma(complex(v) - kf * j)
    return out


def gamma_n(params: Params, lam) -> complex:
    """Multivariate gamma; may be negative (or complex) off the positive cone."""
    lam = tuple(lam)
    if len(lam) != params.n:
        raise ParamError("argument length must equal the rank")
    _check_slot_poles(params, lam)
    kf = float(params.k)
    out = 1.0 + 0j
    for j in range(1, params.n + 1):
        out *= np.exp(_cplx_loggamma(1 + j * kf) - _cplx_loggamma(1 + kf))
    for j, v in enumerate(lam):
        u = complex(v) - kf * j
        if u.imag == 0 and u.real > 0:
            out *= np.exp(lgamma(u.real))
        else:
            # reflection-free: scipy loggamma is the principal branch off
            # the negative axis; real negative non-integer args go through
            # the complex branch and land back on the real axis
            out *= np.exp(_cplx_loggamma(u))
    if abs(out.imag) < 1e-12 * max(1.0, abs(out.real)):
        out = complex(out.real, 0.0)
    return out


# ---------------------------------------------------------------------------
# parameter ratios and certified tails


def _poch_abs(params, v, lam) -> float:
    return abs(generalized_pochhammer_num(params, complex(v), lam))


def rho_exact(params: Params, upper, lower, m: int) -> float:
    """Exact maximum over weight-m partitions of the parameter ratio size."""
    best = 0.0
    for lam in partitions_of_weight(params.n, m):
        num = 1.0
        for u in upper:
            num *= _poch_abs(params, u, lam)
        den = 1.0
        for v in lower:
            den *= _poch_abs(params, v, lam)
        if den == 0.0:
            raise PoleError(f"lower parameter ratio vanishes at {lam}")
        best = max(best, num / den)
    return best


def _log_upper_product(params, upper, m: int) -> float:
    """log of prod_u prod_{a=0}^{m-1} (|u| + k(n-1) + a), the rigorous
    single-row majorant of |[u]_lam| over weight-m partitions."""
    kf = float(params.k)
    out = 0.0
    for u in upper:
        c = abs(complex(u)) + kf * (params.n - 1)
        if c == 0.0:
            return float("-inf")  # the series terminates identically
        out += lgamma(c + m) - lgamma(c)
    return out


def _lower_floor(params, v, t: int) -> float:
    """Rigorous lower bound for any single factor |v - k(j-1) + a| with
    a >= t across rows j: max(lattice distance, t - |v| - k(n-1))."""
    kf = float(params.k)
    return max(_lattice_distance(params, v), t - abs(complex(v)) - kf * (params.n - 1))


def _log_lower_product(params, lower, m: int) -> float:
    """log of the rigorous minorant of prod_v |[v]_lam| over weight-m
    partitions: the r-th smallest box column is at least floor(r/n)."""
    n = params.n
    out = 0.0
    for v in lower:
        for r in range(m):
            out += log(_lower_floor(params, v, r // n))
    return out


def tail_bound(params: Params, upper, lower, x: float, trunc: int,
               mcap: int = 600) -> float:
    """Rigorous bound on the sum of all weight-(> trunc) blocks of either
    series family at argument size x = n * max|z| * max|w|.

    The weight-m block is at most T(m) = x^m/m! * prod_u P_u(m) / prod_v
    Q_v(m): P_u is the single-row majorant of the upper symbols (the
    single-row multiset of box columns stochastically dominates every
    other diagram), Q_v the spread-row minorant of the lower ones (the
    r-th smallest box column of any diagram with at most n rows is at
    least floor(r/n)).  T obeys the exact one-step recurrence
    T(m+1) = T(m) * R(m); past the point where every lower floor has left
    its constant branch, a smooth majorant R^ of R is nonincreasing
    (upper and lower growth factors pair off since p <= q+1), so the
    first m with R^(m) below the closeout ratio ends the tail with a
    geometric sum at that ratio.  Below that
    point the exact per-weight ratio maximum rho(m) is used when it is
    sharper.  Raises ConvergenceError when no closeout exists below mcap.
    """
    if x == 0.0:
        return 0.0
    p, q = len(upper), len(lower)
    if p > q + 1:
        raise DomainError("more upper than lower parameters plus one")
    kf = float(params.k)
    n = params.n
    cu = [abs(complex(u)) + kf * (n - 1) for u in upper]
    if any(c == 0.0 for c in cu):
        return 0.0  # a zero upper parameter terminates the series at weight 0
    cv = [abs(complex(v)) + kf * (n - 1) for v in lower]
    dv = [_lattice_distance(params, v) for v in lower]
    if any(d <= POLE_WINDOW for d in dv):
        raise PoleError("lower parameter within the pole window of the lattice")
    # every lower floor on its linear branch from here on
    m_linear = max([n * int(np.ceil(c + d)) + n for c, d in zip(cv, dv)], default=0)

    def ratio_exact_step(m):
        # R(m) = T(m+1)/T(m), floors included
        val = x / (m + 1)
        for c in cu:
            val *= c + m
        for c, d in zip(cv, dv):
            val /= max(d, m // n - c)
        return val

    def ratio_smooth(m):
        # nonincreasing majorant of R(m') for all m' >= m >= m_linear:
        # pair each upper growth factor with a lower one (or with the
        # factorial when p = q+1); unpaired small uppers tend to 1
        val = x
        uppers = sorted(cu, reverse=True)
        lowers = [m / n - 1 - c for c in cv]  # floor(m/n) - c >= these
        if any(l <= 0 for l in lowers):
            return float("inf")
        used_fact = False
        for i, c in enumerate(uppers):
            if i < len(lowers):
                val *= (c + m) / lowers[i]
            else:
                val *= max((c + m) / (m + 1), 1.0)
                used_fact = True
        if not used_fact:
            val /= m + 1
        for l in lowers[len(uppers):]:
            val /= l
        return val

    log_t = (
        (trunc + 1) * log(x)
        - lgamma(trunc + 2)
        + _log_upper_product(params, upper, trunc + 1)
        - _log_lower_product(params, lower, trunc + 1)
    )
    total = 0.0
    m = trunc + 1
    while m <= mcap:
        if m >= m_linear:
            r = ratio_smooth(m)
            if r <= CLOSEOUT_RATIO:
                return total + np.exp(log_t) * (1.0 + r / (1.0 - r))
        # accumulate this block: the exact per-weight maximum when sharper
        t_here = np.exp(log_t)
        if t_here > 0 and m <= trunc + 80:
            block = min(t_here, rho_exact(params, upper, lower, m)
                        * np.exp(m * log(x) - lgamma(m + 1)))
        else:
            block = t_here
        total += block
        log_t += log(ratio_exact_step(m))
        m += 1
    raise ConvergenceError(
        f"no certified geometric closeout below weight {mcap} for x={x}"
    )


# ---------------------------------------------------------------------------
# series evaluation


@dataclass
class SeriesValue:
    """A truncated series value together with its certificate."""

    value: complex
    truncation_weight: int
    tail: float
    x_bound: float
    weight_terms: list = field(default_factory=list)

    @property
    def real_value(self) -> float:
        return self.value.real if isinstance(self.value, complex) else self.value


def _prep_args(params, z, w):
    z = np.asarray(z)
    w = np.asarray(w)
    if z.shape != (params.n,) or w.shape != (params.n,):
        raise ParamError("argument vectors must have length n")
    if np.iscomplexobj(z) or np.iscomplexobj(w):
        return z.astype(complex), w.astype(complex), complex
    return z.astype(float), w.astype(float), float


def _check_series_domain(params, upper, lower, x):
    p, q = len(upper), len(lower)
    if p > q + 1:
        raise DomainError(f"series with p={p} > q+1={q + 1} upper parameters diverges")
    if p == q + 1 and x >= 1.0:
        raise DomainError(
            f"p = q+1 series certified only for n*max|z|*max|w| < 1, got {x:.4g}"
        )
    check_no_gamma_pole(params, [complex(v) for v in lower])


def _ratio_factory(params, upper, lower):
    cache = {}

    def ratio(lam):
        got = cache.get(lam)
        if got is None:
            num = 1.0 + 0j
            for u in upper:
                num *= generalized_pochhammer_num(params, complex(u), lam)
            for v in lower:
                num /= generalized_pochhammer_num(params, complex(v), lam)
            got = num
            cache[lam] = got
        return got

    return ratio


def _series_eval(params, upper, lower, z, w, table, rel_tol, abs_tol,
                 max_weight, symmetric):
    z, w, scalar = _prep_args(params, z, w)
    x = params.n * float(np.max(np.abs(z)) * np.max(np.abs(w)))
    _check_series_domain(params, upper, lower, x)
    if table is None:
        table = JackTable(params, maxweight=0)
    cap = max_weight if max_weight is not None else 200
    ratio = _ratio_factory(params, upper, lower)
    total = 0.0 + 0j
    comp = 0.0 + 0j  # Kahan compensation
    weight_terms = []
    n = params.n
    for m in range(cap + 1):
        level = table.float_level(m)
        zy = monomial_values(z[None, :], m)[0]
        wy = monomial_values(w[None, :], m)[0]
        ez = level.mat @ zy
        ew = level.mat @ wy
        term = 0.0 + 0j
        if symmetric:
            for lam in partitions_of_weight(n, m):
                pz = 0.0 + 0j
                pw = 0.0 + 0j
                p1 = 0.0
                for comp_ in orbit_of(lam):
                    i = level.index[comp_]
                    dp = dprime_float(params, comp_)
                    pz += ez[i] / dp
                    pw += ew[i] / dp
                    p1 += eval_one_float(params, comp_) / dp
                # orbit sums carry 1/D' already; the symmetric-polynomial
                # prefactors cancel against the one in the denominator
                term += ratio(lam) * pz * pw / p1
        else:
            for i, comp_ in enumerate(level.comps):
                lam = tuple(sorted(comp_, reverse=True))
                dp = dprime_float(params, comp_)
                e1 = eval_one_float(params, comp_)
                term += ratio(lam) * ez[i] * ew[i] / (dp * e1)
        weight_terms.append(complex(term))
        # Kahan update
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        guard = abs_tol + rel_tol * abs(total)
        if abs(term) <= 0.25 * guard or (x == 0.0 and m >= 1):
            bound = tail_bound(params, upper, lower, x, m)
            if bound <= guard:
                val = total if scalar is complex else total.real
                return SeriesValue(val, m, bound, x, weight_terms)
    raise ConvergenceError(
        f"series not certified to tolerance within weight {cap}"
    )


def eval_nonsym_series(params: Params, upper, lower, z, w, *,
                       table: JackTable | None = None, rel_tol: float = 1e-10,
                       abs_tol: float = 0.0, max_weight: int | None = None
                       ) -> SeriesValue:
    """Kernel-type series over all compositions.

    upper/lower are tuples of scalars; the (0,0) case is the Dunkl-kernel
    series. Raises DomainError outside the certified region and
    ConvergenceError when the certificate cannot reach the tolerance.
    """
    return _series_eval(params, tuple(upper), tuple(lower), z, w, table,
                        rel_tol, abs_tol, max_weight, symmetric=False)


def eval_sym_series(params: Params, upper, lower, z, w, *,
                    table: JackTable | None = None, rel_tol: float = 1e-10,
                    abs_tol: float = 0.0, max_weight: int | None = None
                    ) -> SeriesValue:
    """Hypergeometric series over partitions (symmetric arguments)."""
    return _series_eval(params, tuple(upper), tuple(lower), z, w, table,
                        rel_tol, abs_tol, max_weight, symmetric=True)


def kernel_series(params: Params, z, w, **kw) -> SeriesValue:
    """Dunkl-kernel series (no parameters); entire in both arguments."""
    return eval_nonsym_series(params, (), (), z, w, **kw)


def sym_kernel_series(params: Params, z, w, **kw) -> SeriesValue:
    """Symmetrized kernel series; the (0,0) partition series."""
    return eval_sym_series(params, (), (), z, w, **kw)


# ---------------------------------------------------------------------------
# closed forms for small rank


def kernel_rank1(z: float, x: float) -> float:
    """Rank-one kernel: a plain exponential."""
    return float(np.exp(z * x))


def _kummer_positive(a: float, b: float, t: float, tol: float = 1e-14) -> float:
    """Confluent series with all-positive terms; t >= 0, a, b > 0."""
    term = 1.0
    total = 1.0
    m = 0
    while True:
        term *= (a + m) * t / ((b + m) * (m + 1))
        total += term
        m += 1
        if term <= tol * total and m > t:
            return total
        if m > 100000:
            raise ConvergenceError("confluent series did not settle")


def kernel_rank2(params: Params, z, x) -> float:
    """Closed confluent-hypergeometric form of the rank-two kernel.

    Cancellation-free: a Kummer transformation keeps every summed term
    positive for either sign of the cross term.  Used as the fast path
    for large arguments where the series truncation would be impractical.
    """
    if params.n != 2:
        raise ParamError("rank-two form needs n = 2")
    kf = float(params.k)
    zbar = 0.5 * (z[0] + z[1])
    zp = 0.5 * (z[0] - z[1])
    xp = 0.5 * (x[0] - x[1])
    s = x[0] + x[1]
    u = zp * xp
    if kf == 0.0:
        # plain exponential limit
        return float(np.exp(z[0] * x[0] + z[1] * x[1]))
    # antisymmetric direction carries a one-dimensional reflection kernel
    # exp(2u) M(k, 2k+1, -4u); flip by a Kummer transform so the summed
    # series always has positive terms
    au = abs(u)
    aa = kf + 1.0 if u >= 0 else kf
    red = np.exp(-2.0 * au) * _kummer_positive(aa, 2.0 * kf + 1.0, 4.0 * au)
    return float(np.exp(zbar * s) * red)
