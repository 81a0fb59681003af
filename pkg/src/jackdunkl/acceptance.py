"""Desk-scale acceptance suite shared by the test harness and the CLI.

Each criterion function runs one family of checks and returns CheckResult
rows; run_suite drives any subset in a fixed order. Numeric checks compare
quadrature against either a classical closed form or the exact symbolic
side of the library, never against stored outputs of the code under test.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .combinatorics import (
    Params,
    compositions_of_weight,
    compositions_up_to,
    dominance_compositions,
    orbit_of,
    partitions_of_weight,
    spectral_vector,
    weight,
)
from .dunkl_ops import apply_poly_of_dunkl, cherednik_op, dunkl_pairing
from .exactpoly import LaurentPoly
from .hyperseries import eval_nonsym_series, eval_sym_series
from .jack import (
    JackTable,
    cnorm,
    eval_one,
    gram_schmidt_sym,
    verify_section_identity,
)
from .laplace import (
    default_spec,
    post_widder,
    verify_euler,
    verify_hyp_laplace,
    verify_kadell,
    verify_kernel_product,
    verify_macdonald_cherednik,
    verify_master,
)

__all__ = ["CheckResult", "CRITERIA", "run_suite", "suite_passed"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    runtime_ms: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}: {self.detail} [{self.runtime_ms:.0f} ms]"


def _row(name, t0, passed, detail) -> CheckResult:
    return CheckResult(name, passed, detail, (time.perf_counter() - t0) * 1e3)


def _partitions_up_to(n, wmax, *, start=1):
    for m in range(start, wmax + 1):
        yield from partitions_of_weight(n, m)


# ---------------------------------------------------------------------------
# 1. exact operator identity on the inverse-power section


def criterion_section_identity():
    """Operator identity suite, exact in the formal exponent.

    n=2 up to weight 5 and n=3 up to weight 4, k in {1/2, 1, 2, 5/3},
    every composition plus the symmetric variant on partitions.
    """
    out = []
    for n, wmax in ((2, 5), (3, 4)):
        for kstr in ("1/2", "1", "2", "5/3"):
            t0 = time.perf_counter()
            p = Params(n, Fraction(kstr))
            table = JackTable(p, maxweight=wmax)
            bad = []
            ncomp = nlam = 0
            for comp in compositions_up_to(n, wmax):
                ncomp += 1
                ok, why = verify_section_identity(p, comp, table=table)
                if not ok:
                    bad.append((comp, why))
            for lam in _partitions_up_to(n, wmax):
                nlam += 1
                ok, why = verify_section_identity(p, lam, table=table,
                                                  symmetric=True)
                if not ok:
                    bad.append((lam, "symmetric", why))
            detail = (f"{ncomp} compositions + {nlam} partitions exact"
                      if not bad else f"failures: {bad[:3]}")
            out.append(_row(f"section-identity n={n} k={kstr}", t0,
                            not bad, detail))
    return out


# ---------------------------------------------------------------------------
# 2. exact structural suite


def _check_eigen(p, table, wmax, bad):
    for comp in compositions_up_to(p.n, wmax):
        poly = table.nonsym(comp)
        spec = spectral_vector(p, comp)
        for j in range(p.n):
            if cherednik_op(p, j, poly) != poly.scalar_mul(spec[j]):
                bad.append(("eigen", p.n, str(p.k), comp, j))
                return


def criterion_structural():
    out = []

    t0 = time.perf_counter()
    bad = []
    for n, wmax in ((2, 5), (3, 4), (4, 4)):
        for kstr in ("1/2", "5/3"):
            p = Params(n, Fraction(kstr))
            _check_eigen(p, JackTable(p, maxweight=wmax), wmax, bad)
    out.append(_row("commuting-family eigen-equations", t0, not bad,
                    "n=2..4, k in {1/2, 5/3}" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    for n, wmax in ((2, 5), (3, 4), (4, 4)):
        p = Params(n, Fraction(2, 3))
        table = JackTable(p, maxweight=wmax)
        for comp in compositions_up_to(n, wmax):
            poly = table.nonsym(comp)
            if poly.coeff(comp) != 1:
                bad.append(("monic", comp))
            for e, c in poly.terms.items():
                if c < 0:
                    bad.append(("negative", comp, e))
                if dominance_compositions(e, comp) not in ("less", "equal"):
                    bad.append(("dominance", comp, e))
    out.append(_row("triangularity and nonnegativity", t0, not bad,
                    "n=2..4, k=2/3" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    signed = {2: ((-1, 1), (-2, 0), (1, -1), (-1, -2)),
              3: ((-1, 0, 1), (0, -1, 2))}
    for n, comps in signed.items():
        p = Params(n, Fraction(1, 2))
        table = JackTable(p, maxweight=6)
        for comp in comps:
            poly = table.nonsym(comp)
            shift = -min(comp)
            base = tuple(v + shift for v in comp)
            if poly != table.nonsym(base) * LaurentPoly.product_of_vars(n, -shift):
                bad.append(("shift", comp))
            spec = spectral_vector(p, comp)
            for j in range(n):
                if cherednik_op(p, j, poly) != poly.scalar_mul(spec[j]):
                    bad.append(("signed-eigen", comp, j))
    out.append(_row("negative-part shift", t0, not bad,
                    "signed compositions, n=2,3" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    for n, wmax in ((2, 4), (3, 3)):
        p = Params(n, Fraction(1, 2))
        table = JackTable(p, maxweight=wmax)
        for comp in compositions_up_to(n, wmax):
            lhs = table.nonsym(comp).reciprocal_args()
            neg_rev = tuple(-v for v in reversed(comp))
            if lhs != table.nonsym(neg_rev).reverse_vars():
                bad.append(("reciprocal", comp))
    out.append(_row("reciprocal-argument identity", t0, not bad,
                    "n=2,3 up to weight 4" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    for n, wmax in ((2, 6), (3, 6), (4, 4)):
        p = Params(n, Fraction(5, 3))
        table = JackTable(p, maxweight=wmax)
        ones = sum((LaurentPoly.variable(n, i) for i in range(n)),
                   LaurentPoly.zero(n))
        for m in range(wmax + 1):
            total = LaurentPoly.zero(n)
            for comp in compositions_of_weight(n, m):
                total = total + table.combinorm(comp)
            if total != ones ** m:
                bad.append(("power-sum", n, m))
    out.append(_row("power-sum decomposition", t0, not bad,
                    "m <= 6 at n=2,3; m <= 4 at n=4" if not bad
                    else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    for n, wmax, kf in ((2, 4, Fraction(1, 2)), (3, 3, Fraction(5, 3))):
        p = Params(n, kf)
        table = JackTable(p, maxweight=wmax)
        comps = list(compositions_up_to(n, wmax))
        for a in comps:
            la = table.combinorm(a)
            for b in comps:
                if weight(a) != weight(b):
                    continue  # graded pairing; zero by degree count
                got = dunkl_pairing(p, la, table.combinorm(b))
                want = (factorial(weight(a)) * cnorm(p, a) * eval_one(p, a)
                        if a == b else 0)
                if got != want:
                    bad.append(("pairing", a, b))
    out.append(_row("pairing orthogonality", t0, not bad,
                    "n=2 weight 4, n=3 weight 3" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    low = {2: ((1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (2, 0), (0, 3)),
           3: ((1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 0, 2))}
    for n, comps in low.items():
        p = Params(n, Fraction(1, 2))
        table = JackTable(p, maxweight=6)
        delta = LaurentPoly.product_of_vars(n, 1)
        for comp in comps:
            got = apply_poly_of_dunkl(p, delta, table.combinorm(comp))
            if min(comp) == 0:
                if not got.is_zero():
                    bad.append(("lowering-kernel", comp))
                continue
            down = tuple(v - 1 for v in comp)
            ratio = Fraction(factorial(weight(comp)), factorial(weight(down)))
            if got != table.combinorm(down).scalar_mul(ratio):
                bad.append(("lowering", comp))
    out.append(_row("product-of-derivatives lowering", t0, not bad,
                    "strictly positive and boundary cases, n=2,3"
                    if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    perms = {2: ((0, 1), (1, 0)),
             3: ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1),
                 (2, 1, 0))}
    for n, wmax in ((2, 4), (3, 3)):
        p = Params(n, Fraction(1, 2))
        table = JackTable(p, maxweight=wmax)
        for lam in _partitions_up_to(n, wmax):
            target = table.sym(lam).scalar_mul(
                Fraction(1) / table.sym_eval_one(lam))
            for comp in orbit_of(lam):
                e = table.nonsym(comp)
                acc = LaurentPoly.zero(n)
                for w in perms[n]:
                    acc = acc + e.permute(w)
                got = acc.scalar_mul(
                    Fraction(1, factorial(n)) / eval_one(p, comp))
                if got != target:
                    bad.append(("symmetrization", lam, comp))
    out.append(_row("orbit-average symmetrization", t0, not bad,
                    "every orbit member, n=2,3" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    for n in (2, 3):
        p = Params(n, Fraction(1, 2))
        table = JackTable(p, maxweight=4)
        for lam in _partitions_up_to(n, 4):
            binom = table.binomials(lam)
            if binom[lam] != 1 or binom[(0,) * n] != 1:
                bad.append(("binomial-ends", lam))
            for mu, v in binom.items():
                if v < 0:
                    bad.append(("binomial-negative", lam, mu))
    out.append(_row("binomial nonnegativity", t0, not bad,
                    "partitions to weight 4, n=2,3" if not bad
                    else str(bad[:3])))

    return out


# ---------------------------------------------------------------------------
# 3. symmetric polynomials against the Gram-Schmidt oracle


def criterion_gram_schmidt():
    out = []
    for n in (1, 2, 3):
        for kstr in ("1/2", "1", "2"):
            t0 = time.perf_counter()
            p = Params(n, Fraction(kstr))
            table = JackTable(p, maxweight=4)
            bad = []
            count = 0
            for lam in _partitions_up_to(n, 4):
                count += 1
                if gram_schmidt_sym(p, lam) != table.sym(lam):
                    bad.append(lam)
            out.append(_row(f"gram-schmidt n={n} k={kstr}", t0, not bad,
                            f"{count} partitions exact" if not bad
                            else f"mismatch at {bad[:3]}"))
    return out


# ---------------------------------------------------------------------------
# 4. transform identity by quadrature


def criterion_master():
    out = []
    for n in (1, 2, 3):
        tol = 1e-5 if n <= 2 else 1e-3
        zs = [tuple(float(v) for v in (2, 3, 4)[:n]), (1.5,) * n]
        for kstr in ("1/2", "1"):
            p = Params(n, Fraction(kstr))
            mu0 = float(p.k) * (n - 1)
            mus = (mu0 + 1.0, mu0 + 2.5)
            table = JackTable(p, maxweight=2)
            for z in zs:
                t0 = time.perf_counter()
                # one spec per cell keeps the kernel tensors shared
                spec = None
                if n == 3:
                    spec = default_spec(
                        p, z, poly_degree=2 + 2 * float(p.k) * (n - 1) + mus[-1])
                worst = 0.0
                count = 0
                bad = []
                for mu in mus:
                    for comp in compositions_up_to(n, 2):
                        r = verify_master(p, comp, mu, z, spec=spec, tol=tol,
                                          table=table)
                        count += 1
                        worst = max(worst, r.rel_error)
                        if not r.passed:
                            bad.append((comp, mu, r.rel_error))
                    for lam in _partitions_up_to(n, 2):
                        r = verify_master(p, lam, mu, z, spec=spec, tol=tol,
                                          table=table, symmetric=True)
                        count += 1
                        worst = max(worst, r.rel_error)
                        if not r.passed:
                            bad.append((lam, mu, "sym", r.rel_error))
                detail = (f"{count} checks, worst rel {worst:.2e} (tol {tol:g})"
                          if not bad else f"failures: {bad[:3]}")
                out.append(_row(f"master n={n} k={kstr} z={z}", t0,
                                not bad, detail))

    t0 = time.perf_counter()
    r = verify_master(Params(2, Fraction(1, 2)), (0, 0), 2.0, (2.0, 3.0),
                      tol=1e-5)
    err = abs(r.lhs - 1.0 / 36.0)
    out.append(_row("master anchor 1/36", t0, err <= 1e-5 and r.passed,
                    f"|lhs - 1/36| = {err:.2e}"))
    return out


# ---------------------------------------------------------------------------
# 5. beta-contour integrals


def criterion_beta_integrals():
    out = []

    t0 = time.perf_counter()
    r = verify_kadell(Params(1, 0), (0,), 2.0, 2.0, tol=1e-5)
    err = abs(r.lhs - 1.0 / 6.0)
    out.append(_row("selberg-type n=1 beta anchor", t0,
                    r.passed and err <= 1e-8,
                    f"|lhs - 1/6| = {err:.2e}, rel {r.rel_error:.2e}"))

    grid = [
        (Params(2, Fraction(1, 2)), (0, 0), 2.0, 2.0),
        (Params(2, Fraction(1, 2)), (1, 0), 2.0, 3.0),
        (Params(2, Fraction(1, 2)), (1, 1), 2.5, 2.0),
        (Params(2, 1), (2, 1), 2.5, 3.0),
    ]
    for p, lam, mu, nu in grid:
        t0 = time.perf_counter()
        r = verify_kadell(p, lam, mu, nu, tol=1e-5)
        out.append(_row(
            f"selberg-type n=2 k={p.k} lam={lam}", t0, r.passed,
            f"rel {r.rel_error:.2e} (tol 1e-05)"))

    t0 = time.perf_counter()
    r = verify_kadell(Params(3, Fraction(1, 2)), (1, 0, 0), 2.0, 2.5, tol=1e-3)
    out.append(_row("selberg-type n=3", t0, r.passed,
                    f"rel {r.rel_error:.2e} (tol 1e-03)"))

    t0 = time.perf_counter()
    r = verify_euler(Params(1, 0), (), (), 2.0, 4.5, (0.5,), tol=1e-5)
    out.append(_row("euler-type n=1 confluent", t0, r.passed,
                    f"rel {r.rel_error:.2e}"))

    for p, w in ((Params(2, Fraction(1, 2)), (0.3, 0.1)),
                 (Params(2, 1), (0.4, 0.2))):
        t0 = time.perf_counter()
        r = verify_euler(p, (), (), 2.0, 4.5, w, tol=1e-5)
        out.append(_row(f"euler-type n=2 k={p.k} w={w}", t0, r.passed,
                        f"rel {r.rel_error:.2e}"))

    t0 = time.perf_counter()
    p = Params(2, Fraction(1, 2))
    re = verify_euler(p, (), (), 2.0, 4.5, (0.0, 0.0), tol=1e-5)
    rk = verify_kadell(p, (0, 0), 2.0, 2.5, tol=1e-5)
    gap = abs(re.lhs - rk.lhs) / abs(rk.lhs)
    out.append(_row("euler-type at w=0 collapses to beta", t0,
                    re.passed and rk.passed and gap <= 1e-6,
                    f"route gap {gap:.2e}"))
    return out


# ---------------------------------------------------------------------------
# 6. series transform identities


def criterion_series_laplace():
    out = []
    cases = [
        ("n=1 confluent from bessel-type", Params(1, 0), (), (2.5,), 2.0,
         (0.7,), (2.0,), False),
        ("n=2 bessel-type route", Params(2, Fraction(1, 2)), (), (2.5,), 2.0,
         (0.5, 0.2), (3.0, 4.0), False),
        ("n=2 symmetric variant", Params(2, Fraction(1, 2)), (), (2.5,), 2.0,
         (0.5, 0.2), (3.0, 4.0), True),
        ("n=2 balanced kernel route", Params(2, Fraction(1, 2)), (), (), 2.0,
         (0.5, 0.2), (3.0, 4.0), False),
    ]
    for name, p, upper, lower, mu_p, w, z, sym in cases:
        t0 = time.perf_counter()
        r = verify_hyp_laplace(p, upper, lower, mu_p, w, z, symmetric=sym,
                               tol=1e-4)
        out.append(_row(f"series-laplace {name}", t0, r.passed,
                        f"rel {r.rel_error:.2e} (tol 1e-04)"))

    for p, mu, z, w in ((Params(1, 0), 2.0, (0.5,), (0.4,)),
                        (Params(2, Fraction(1, 2)), 2.0, (0.5, 0.4),
                         (0.4, 0.1))):
        t0 = time.perf_counter()
        r = verify_kernel_product(p, mu, z, w, tol=1e-4)
        out.append(_row(f"kernel-product n={p.n}", t0, r.passed,
                        f"rel {r.rel_error:.2e} (tol 1e-04)"))
    return out


# ---------------------------------------------------------------------------
# 7. shifted-lattice transform identity


def criterion_lattice():
    out = []
    etas = ((1, 1), (2, 1), (1, 2), (2, 2), (3, 1))
    for kstr in ("1/2", "1"):
        t0 = time.perf_counter()
        p = Params(2, Fraction(kstr))
        mu = float(p.k) + 1.5
        table = JackTable(p, maxweight=4)
        worst = 0.0
        bad = []
        for eta in etas:
            r = verify_macdonald_cherednik(p, eta, mu, (2.0, 3.0), tol=1e-4,
                                           table=table)
            worst = max(worst, r.rel_error)
            if not r.passed:
                bad.append((eta, r.rel_error))
        out.append(_row(f"lattice-transform k={kstr}", t0, not bad,
                        f"5 spectral points, worst rel {worst:.2e}"
                        if not bad else f"failures: {bad}"))
    return out


# ---------------------------------------------------------------------------
# 8. inversion formula


def criterion_post_widder():
    out = []
    p1 = Params(1, 0)

    for nu in (10, 40):
        t0 = time.perf_counter()
        got = post_widder(p1, lambda X: np.exp(-X[:, 0]), (1.0,), nu)
        want = (nu / (nu + 1.0)) ** (nu + 1)
        err = abs(got - want)
        out.append(_row(f"inversion n=1 order {nu}", t0, err <= 1e-8,
                        f"|got - closed form| = {err:.2e}"))

    t0 = time.perf_counter()
    got = post_widder(p1, lambda X: 1.0, (1.0,), 10)
    ok1 = abs(got - 1.0) <= 1e-8
    p2 = Params(2, Fraction(1, 2))
    got2 = post_widder(p2, lambda X: 1.0, (1.0, 2.0), 5)
    ok2 = abs(got2 - 1.0) <= 1e-6
    out.append(_row("inversion mass normalization", t0, ok1 and ok2,
                    f"n=1 err {abs(got - 1.0):.1e}, n=2 err {abs(got2 - 1.0):.1e}"))

    t0 = time.perf_counter()
    target = 0.25
    errs = []
    for nu in (5, 10, 20, 40):
        val = post_widder(p2, lambda X: 1.0 / (1.0 + X[:, 0] + X[:, 1]),
                          (1.0, 2.0), nu)
        errs.append(abs(val - target))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    final_ok = errs[-1] < 0.05 * target
    seq = ", ".join(f"{e:.2e}" for e in errs)
    out.append(_row("inversion n=2 error decay", t0, decreasing and final_ok,
                    f"errors [{seq}], final < 5% of target: {final_ok}"))
    return out


# ---------------------------------------------------------------------------
# 9. series truncation certificates


def _tail_draw(rng, balanced: bool):
    n = rng.choice((1, 2))
    k = Fraction(rng.choice(("1/2", "1", "5/3")))
    p = Params(n, k)
    mu0 = float(k) * (n - 1)
    # the balanced-plus-one certificate needs n * max z * max w well below 1
    hi = (0.65 if n == 1 else 0.36) if balanced else 0.8
    amax = 1.8 if balanced else 2.5
    z = tuple(rng.uniform(0.05, hi) for _ in range(n))
    w = tuple(rng.uniform(0.05, hi) for _ in range(n))
    a = rng.uniform(0.3, amax)
    b = rng.uniform(0.3, amax)
    c = mu0 + rng.uniform(0.8, 2.7)
    return p, z, w, a, b, c


def criterion_series_tails(seed: int = 0):
    out = []
    rng = random.Random(seed)
    tables = {}

    def table_for(p):
        key = (p.n, p.k)
        if key not in tables:
            tables[key] = JackTable(p, maxweight=6)
        return tables[key]

    types = [
        ("kernel", 0, 0, False),
        ("symmetric kernel", 0, 0, True),
        ("confluent", 1, 1, False),
        ("symmetric confluent", 1, 1, True),
        ("balanced-plus-one", 2, 1, False),
    ]
    for name, np_, nq, sym in types:
        t0 = time.perf_counter()
        ev = eval_sym_series if sym else eval_nonsym_series
        balanced = np_ == nq + 1
        tight_tol = 1e-10 if balanced else 1e-12
        bad = []
        for i in range(50):
            p, z, w, a, b, c = _tail_draw(rng, balanced)
            upper = ((a,), (a, b))[np_ - 1] if np_ else ()
            lower = (c,) if nq else ()
            t = table_for(p)
            loose = ev(p, upper, lower, z, w, table=t, rel_tol=1e-3)
            tight = ev(p, upper, lower, z, w, table=t, rel_tol=tight_tol)
            remainder = abs(tight.value - loose.value)
            if remainder > loose.tail + tight.tail + 1e-15:
                bad.append((i, remainder, loose.tail))
        out.append(_row(f"tail dominates remainder: {name}", t0, not bad,
                        "50 randomized draws" if not bad else str(bad[:3])))

    t0 = time.perf_counter()
    bad = []
    worst = 0.0
    for i in range(50):
        n = rng.choice((1, 2))
        p = Params(n, Fraction(rng.choice(("0", "1/2", "1", "5/3"))))
        z = tuple(rng.uniform(-2.0, 2.0) for _ in range(n))
        ones = (1.0,) * n
        ev = eval_sym_series if i % 2 else eval_nonsym_series
        got = ev(p, (), (), z, ones, rel_tol=1e-13).real_value
        want = math.exp(sum(z))
        rel = abs(got - want) / abs(want)
        worst = max(worst, rel)
        if rel > 1e-12:
            bad.append((z, rel))
    out.append(_row("kernel collapse at unit argument", t0, not bad,
                    f"50 draws, worst rel {worst:.2e}" if not bad
                    else str(bad[:3])))
    return out


# ---------------------------------------------------------------------------
# registry


CRITERIA = (
    ("section-identity", "exact operator identity suite",
     criterion_section_identity, False),
    ("structural", "exact structural identity suite",
     criterion_structural, False),
    ("gram-schmidt", "symmetric polynomials against the pairing oracle",
     criterion_gram_schmidt, False),
    ("master", "transform identity by quadrature",
     criterion_master, False),
    ("beta-integrals", "beta-type integral identities",
     criterion_beta_integrals, False),
    ("series-laplace", "series transform identities",
     criterion_series_laplace, False),
    ("lattice", "shifted-lattice transform identity",
     criterion_lattice, False),
    ("post-widder", "inversion formula checks",
     criterion_post_widder, False),
    ("series-tails", "series truncation certificates",
     criterion_series_tails, True),
)


def run_suite(selected=None, *, seed: int = 0):
    """Run the named criteria (all when None); yields (key, rows) pairs."""
    wanted = None if selected is None else set(selected)
    known = {key for key, *_ in CRITERIA}
    if wanted is not None and not wanted <= known:
        raise ValueError(f"unknown criteria: {sorted(wanted - known)}")
    results = []
    for key, _desc, fn, wants_seed in CRITERIA:
        if wanted is not None and key not in wanted:
            continue
        rows = fn(seed=seed) if wants_seed else fn()
        results.append((key, rows))
    return results


def suite_passed(results) -> bool:
    return all(row.passed for _key, rows in results for row in rows)
