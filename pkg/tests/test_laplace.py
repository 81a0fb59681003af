"""Quadrature transform and identity verifiers against classical oracles.

Rank-one transforms reduce to scalar gamma and beta integrals; zero
multiplicity factorizes the transform into products of one-dimensional
integrals, which pins the chamber assembly including the permuted
images.  The identity verifiers are dual-route by construction: the
quadrature side and the exact gamma/series side are computed through
disjoint code paths.
"""

import json
import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from jackdunkl.combinatorics import Params
from jackdunkl.errors import DomainError, ParamError
from jackdunkl.jack import JackTable
from jackdunkl.laplace import (
    ChamberGrid,
    QuadratureSpec,
    ShiftedSpectral,
    VerificationReport,
    _contract_tensor,
    _kernel_depth,
    _kernel_rank2_grid,
    _series_tensor,
    cherednik_rat,
    cherednik_rat_exact,
    choose_cutoff,
    default_spec,
    dunkl_laplace,
    post_widder,
    verify_euler,
    verify_hyp_laplace,
    verify_kadell,
    verify_kernel_product,
    verify_macdonald_cherednik,
    verify_master,
    weight_omega,
)

P1 = Params(1, 0)
P2H = Params(2, "1/2")
P2K1 = Params(2, 1)


# ---------------------------------------------------------------------------
# spec and report plumbing


def test_quadrature_spec_validation():
    with pytest.raises(ParamError):
        QuadratureSpec(2, Fraction(1, 2), 5.0, 32, 1e-6, scheme="simpson")
    with pytest.raises(ParamError):
        QuadratureSpec(2, Fraction(1, 2), -1.0, 32, 1e-6)
    with pytest.raises(ParamError):
        QuadratureSpec(2, Fraction(1, 2), 5.0, 2, 1e-6)
    assert QuadratureSpec(2, Fraction(1, 2), 5.0, 32, 1e-6).levels == 8
    assert QuadratureSpec(3, Fraction(1, 2), 5.0, 32, 1e-6).levels == 6


def test_spec_bumped_and_with_cutoff():
    s = QuadratureSpec(2, Fraction(1), 5.0, 32, 1e-6)
    b = s.bumped()
    assert b.points_per_axis == 48 and b.levels == s.levels + 1
    assert b.cutoff_r == s.cutoff_r
    c = s.with_cutoff(7.5)
    assert c.cutoff_r == 7.5 and c.points_per_axis == s.points_per_axis


def test_verification_report_serialization():
    r = verify_master(P1, (0,), 2.5, (1.0,))
    d = r.to_dict()
    assert set(d) == {"identityName", "parameters", "lhs", "rhs", "relError",
                      "tolerance", "pass", "runtimeMs", "certificate"}
    assert d["pass"] == (d["relError"] <= d["tolerance"])
    assert d["lhs"]["im"] == pytest.approx(0.0, abs=1e-12)
    round_trip = json.loads(r.to_json())
    assert round_trip["identityName"] == "master"


# ---------------------------------------------------------------------------
# spectral labels


def test_shifted_spectral_point_values():
    s = ShiftedSpectral((1, 0))
    pt = s.spectral_point(P2K1)
    assert pt == (Fraction(3, 2), Fraction(-1, 2))
    assert not s.in_verifier_domain(P2K1)
    assert ShiftedSpectral((2, 1)).spectral_point(P2K1) == (
        Fraction(5, 2), Fraction(1, 2))
    assert ShiftedSpectral((2, 1)).in_verifier_domain(P2K1)


def test_shifted_spectral_signed_flag():
    assert ShiftedSpectral((1, -1)).laurent
    assert not ShiftedSpectral((2, 0)).laurent
    with pytest.raises(ParamError):
        ShiftedSpectral((1, 0, 0)).spectral_point(P2K1)


# ---------------------------------------------------------------------------
# weight and cutoff


def test_weight_omega_values():
    assert weight_omega(np.array([3.0]), Fraction(1, 2)) == 1.0
    assert weight_omega(np.array([3.0, 1.0]), Fraction(1, 2)) == pytest.approx(2.0)
    assert weight_omega(np.array([2.0, 2.0]), 1) == 0.0
    pts = np.array([[3.0, 1.0], [5.0, 2.0]])
    got = weight_omega(pts, 1)
    assert got == pytest.approx([4.0, 9.0])
    assert weight_omega(pts, 0) == pytest.approx([1.0, 1.0])


def test_choose_cutoff_controls():
    from scipy.special import gammaincc

    r = choose_cutoff(P2H, (2.0, 3.0), 1e-6, poly_degree=4.0)
    assert r >= 5.0 / 2.0
    assert gammaincc(5.0, 2.0 * r) <= 1e-6 / 20.0
    r_hi = choose_cutoff(P2H, (2.0, 3.0), 1e-6, poly_degree=9.0)
    assert r_hi >= r
    with pytest.raises(DomainError):
        choose_cutoff(P2H, (-1.0, 3.0), 1e-6)


# ---------------------------------------------------------------------------
# chamber grid


def test_chamber_grid_volume_and_order():
    spec = QuadratureSpec(3, Fraction(1, 2), 2.0, 18, 1e-7, levels=3)
    grid = ChamberGrid(spec)
    # ordered-chamber volume R^n / n!
    assert grid.qweights.sum() == pytest.approx(2.0 ** 3 / 6.0, rel=1e-12)
    assert np.all(grid.X[:, 0] >= grid.X[:, 1] - 1e-15)
    assert np.all(grid.X[:, 1] >= grid.X[:, 2] - 1e-15)
    assert np.all(grid.X >= 0)
    other = ChamberGrid(spec.bumped())
    assert other.signature != grid.signature


def test_chamber_symmetry_invariant():
    # symmetric total integrand: diagonal z makes the kernel symmetric,
    # so the collapsed one-chamber-times-n! assembly must equal the full
    # image sum; both verifier variants walk identical refinement rungs
    p = Params(3, Fraction(1, 2))
    mu = float(p.shift0) + 1.5
    collapsed = verify_master(p, (0, 0, 0), mu, (3.0, 3.0, 3.0),
                              symmetric=True).lhs
    full = verify_master(p, (0, 0, 0), mu, (3.0, 3.0, 3.0)).lhs
    assert abs(full - collapsed) <= 1e-12 * abs(full)

    # loose hand anchor for the measure on one explicit grid
    z = np.array([3.0, 3.0, 3.0])
    spec = default_spec(p, z, rel_tol=1e-6, points=40, poly_degree=2.0)

    def f(X):
        return (X.sum(axis=1)) ** 2

    engine = dunkl_laplace(p, f, z, spec=spec)
    grid = ChamberGrid(spec.bumped())
    hand = math.factorial(3) * np.sum(
        grid.qweights * grid.omega(p.k) * f(grid.X)
        * np.exp(-3.0 * grid.X.sum(axis=1)))
    assert abs(engine - hand) <= 2e-6 * abs(hand)


# ---------------------------------------------------------------------------
# transform classics


def test_laplace_rank1_classics():
    spec = default_spec(P1, (1.0,), poly_degree=2.0)
    got = dunkl_laplace(P1, lambda X: X[:, 0] ** 2, (1.0,), spec=spec)
    assert got.real == pytest.approx(2.0, rel=1e-8)

    spec = default_spec(P1, (2.0,), poly_degree=1.5)
    got = dunkl_laplace(P1, lambda X: X[:, 0] ** 1.5, (2.0,), spec=spec)
    assert got.real == pytest.approx(math.gamma(2.5) * 2.0 ** -2.5, rel=1e-8)

    got = dunkl_laplace(P1, lambda X: np.ones(len(X)), (3.0,))
    assert got.real == pytest.approx(1.0 / 3.0, rel=1e-8)


def test_laplace_factorizes_at_zero_multiplicity_n2():
    # k = 0 kernel is a plain exponential, so the box integral is a
    # product of scalar gamma integrals even for unsymmetric f
    p = Params(2, 0)
    spec = default_spec(p, (2.0, 3.0), poly_degree=2.0)
    got = dunkl_laplace(p, lambda X: X[:, 0] ** 2, (2.0, 3.0), spec=spec)
    assert got.real == pytest.approx((2.0 / 8.0) * (1.0 / 3.0), rel=1e-7)


def test_laplace_factorizes_at_zero_multiplicity_n3():
    # exercises the coefficient-tensor kernel route with every one of
    # the six chamber images, including the non-involutive ones
    p = Params(3, 0)
    z = (3.0, 3.2, 3.4)
    spec = default_spec(p, z, rel_tol=2e-4, points=54, poly_degree=3.0)
    got = dunkl_laplace(p, lambda X: X[:, 0] ** 2 * X[:, 2], z, spec=spec)
    want = (2.0 / 27.0) * (1.0 / 3.2) * (1.0 / 3.4 ** 2)
    assert got.real == pytest.approx(want, rel=5e-4)


# ---------------------------------------------------------------------------
# contraction index algebra


def test_contract_tensor_matches_dense_per_image():
    p = Params(3, Fraction(1, 2))
    args = (-0.8, -0.5, -0.3)
    key, W = _series_tensor(p, args, 8)
    spec = QuadratureSpec(3, Fraction(1, 2), 2.0, 6, 1e-6, levels=2)
    grid = ChamberGrid(spec)
    shift = 0.7
    rng = np.random.default_rng(11)
    sample = rng.choice(len(grid.X), size=5, replace=False)
    for sigma in permutations(range(3)):
        got = _contract_tensor(key, W, grid, sigma, shift)
        for i in sample:
            y = grid.X[i, list(sigma)] - shift
            dense = 0.0
            for e in np.ndindex(W.shape):
                dense += W[e] * y[0] ** e[0] * y[1] ** e[1] * y[2] ** e[2]
            assert got[i] == pytest.approx(dense, rel=1e-11, abs=1e-13)


def test_kernel_tensor_matches_closed_form_n2():
    z = np.array([2.0, 3.0])
    spec = QuadratureSpec(2, Fraction(1, 2), 3.0, 24, 1e-7)
    grid = ChamberGrid(spec)
    s = spec.cutoff_r / 2.0
    depth = _kernel_depth(s * float(np.sum(z)), 1e-12)
    key, W = _series_tensor(P2H, tuple(-z), depth)
    pref = math.exp(-s * float(np.sum(z)))
    for sigma in [(0, 1), (1, 0)]:
        got = pref * _contract_tensor(key, W, grid, sigma, s)
        want, _ = _kernel_rank2_grid(0.5, z, grid.X[:, list(sigma)])
        assert np.max(np.abs(got - want)) <= 1e-10
        bulk = np.abs(want) >= 1e-6
        rel = np.abs(got - want)[bulk] / np.abs(want)[bulk]
        assert np.max(rel) <= 1e-9


# ---------------------------------------------------------------------------
# transform identity: Jack polynomial times coordinate-product power


def test_master_rank1_classical():
    r = verify_master(P1, (2,), 2.5, (2.0,))
    assert r.passed and r.rel_error < 1e-6
    # reduces to Gamma(m + mu) z^(-m - mu)
    assert r.rhs == pytest.approx(math.gamma(4.5) * 2.0 ** -4.5, rel=1e-12)


def test_master_anchor_value():
    r = verify_master(P2H, (0, 0), 2.0, (2.0, 3.0))
    assert abs(r.lhs - 1.0 / 36.0) <= 1e-5
    assert r.passed and r.rel_error < 1e-5


def test_master_nonsymmetric_composition():
    r = verify_master(P2H, (0, 2), float(P2H.shift0) + 1.5, (2.0, 3.0))
    assert r.passed and r.rel_error < 1e-5
    assert r.parameters["eta"] == [0, 2]


def test_master_symmetric_variant():
    r = verify_master(P2H, (2, 1), float(P2H.shift0) + 1.0, (2.0, 3.0),
                      symmetric=True)
    assert r.passed and r.rel_error < 1e-5
    assert r.identity_name == "master-symmetric"


def test_master_certificate_fields():
    r = verify_master(P2H, (0, 0), 2.0, (2.0, 3.0))
    cert = r.certificate
    assert {"quadratureChange", "factorErrorBound",
            "pointsPerAxis", "cutoff"} <= set(cert)
    assert cert["quadratureChange"] < 1e-6
    assert cert["factorErrorBound"] < 1e-6


# ---------------------------------------------------------------------------
# beta-type integrals


def test_kadell_beta_reduction_rank1():
    r = verify_kadell(P1, (0,), 2.0, 2.0)
    assert r.passed
    assert r.lhs.real == pytest.approx(1.0 / 6.0, abs=1e-8)


def test_kadell_rank2():
    for lam, mu, nu in [((0, 0), 2.0, 2.0), ((1, 0), 2.0, 3.0)]:
        r = verify_kadell(P2H, lam, mu, nu)
        assert r.passed and r.rel_error < 1e-5


def test_euler_reduces_to_beta_at_zero_argument():
    re = verify_euler(P2H, (), (), 2.0, 4.5, (0.0, 0.0))
    rk = verify_kadell(P2H, (0, 0), 2.0, 2.5)
    assert re.passed and rk.passed
    assert abs(re.lhs - rk.lhs) <= 1e-8 * abs(rk.lhs)


def test_euler_classical_rank1():
    # integral of e^(w x) against the beta density
    r = verify_euler(P1, (), (), 1.5, 4.0, (0.6,))
    assert r.passed and r.rel_error < 1e-6


def test_euler_rank2_with_parameters():
    r = verify_euler(P2H, (float(P2H.shift0) + 1.2,),
                     (float(P2H.shift0) + 2.7,), 2.0, 4.5, (0.3, 0.1))
    assert r.passed and r.rel_error < 1e-5


# ---------------------------------------------------------------------------
# series transform identities


def test_hyp_laplace_kummer_rank1():
    # Laplace of the 0-1 series gives the 1-1 series: Kummer's relation
    r = verify_hyp_laplace(P1, (), (2.5,), 1.5, (0.8,), (2.0,))
    assert r.passed and r.rel_error < 1e-6


def test_hyp_laplace_rank2_both_variants():
    mu_p = float(P2H.shift0) + 1.5
    r = verify_hyp_laplace(P2H, (), (float(P2H.shift0) + 2.0,), mu_p,
                           (0.5, 0.2), (3.0, 4.0))
    assert r.passed and r.rel_error < 1e-4
    rf = verify_hyp_laplace(P2H, (), (float(P2H.shift0) + 2.0,), mu_p,
                            (0.5, 0.2), (3.0, 4.0), symmetric=True)
    assert rf.passed and rf.identity_name == "hyplaplace-symmetric"


def test_kernel_product_identity():
    r = verify_kernel_product(P2H, 2.0, (0.5, 0.4), (0.4, 0.1))
    assert r.passed and r.rel_error < 1e-5


# ---------------------------------------------------------------------------
# lattice kernel values


def test_cherednik_rat_normalization_and_inversion():
    table = JackTable(P2K1, maxweight=4)
    for eta in [(2, 1), (1, 2), (3, 1)]:
        q = cherednik_rat_exact(P2K1, eta, table=table)
        assert q.eval_exact((1, 1)) == 1
        # reciprocal-argument inversion on the lattice, exact
        rev = tuple(-v for v in reversed(eta))
        qr = cherednik_rat_exact(P2K1, rev, table=table)
        assert q.reciprocal_args() == qr.reverse_vars()
        got = cherednik_rat(P2K1, eta, (0.5, 0.25), table=table)
        want = complex(q.eval_exact((Fraction(1, 2), Fraction(1, 4))))
        assert got == pytest.approx(want, rel=1e-12)


def test_macdonald_cherednik_lattice():
    table = JackTable(P2K1, maxweight=4)
    for eta in [(2, 1), (2, 2)]:
        r = verify_macdonald_cherednik(
            P2K1, eta, float(P2K1.shift0) + 1.5, (2.0, 3.0), table=table)
        assert r.passed and r.rel_error < 1e-6
    r = verify_macdonald_cherednik(
        P2H, (1, 1), float(P2H.shift0) + 1.5, (2.0, 3.0))
    assert r.passed and r.rel_error < 1e-6


def test_macdonald_cherednik_domain():
    with pytest.raises(DomainError):
        verify_macdonald_cherednik(P2K1, (1, -1),
                                   float(P2K1.shift0) + 1.5, (2.0, 3.0))


# ---------------------------------------------------------------------------
# inversion samples


def test_post_widder_probability_normalization():
    got = post_widder(P1, lambda X: np.ones(len(X)), (1.0,), 10)
    assert got == pytest.approx(1.0, abs=1e-8)
    got = post_widder(P2H, lambda X: np.ones(len(X)), (1.0, 2.0), 5)
    assert got == pytest.approx(1.0, abs=1e-6)


def test_post_widder_rank1_closed_form():
    got = post_widder(P1, lambda X: np.exp(-X.sum(axis=1)), (1.0,), 10)
    assert got == pytest.approx((10.0 / 11.0) ** 11, abs=1e-8)


# ---------------------------------------------------------------------------
# stability invariants


def test_resolution_and_cutoff_invariance():
    base = default_spec(P2H, (2.0, 3.0))
    vals = [verify_master(P2H, (0, 0), 2.0, (2.0, 3.0), spec=s).lhs
            for s in (base,
                      default_spec(P2H, (2.0, 3.0), points=2 * base.points_per_axis),
                      base.with_cutoff(1.5 * base.cutoff_r))]
    for v in vals[1:]:
        assert abs(v - vals[0]) <= 1e-6 * abs(vals[0])


def test_tanh_sinh_scheme_agrees():
    ts = default_spec(P2H, (2.0, 3.0), scheme="tanh-sinh")
    r = verify_master(P2H, (0, 0), 2.0, (2.0, 3.0), spec=ts)
    assert r.passed
    gl = verify_master(P2H, (0, 0), 2.0, (2.0, 3.0))
    assert abs(r.lhs - gl.lhs) <= 1e-6 * abs(gl.lhs)


# ---------------------------------------------------------------------------
# domain rejections


def test_domain_rejections():
    with pytest.raises(DomainError):
        verify_master(P2H, (0, 0), float(P2H.shift0) + 0.3, (2.0, 3.0))
    with pytest.raises(ParamError):
        verify_master(P2H, (-1, 0), 2.0, (2.0, 3.0))
    with pytest.raises(ParamError):
        verify_kadell(P2H, (0, 1), 2.0, 2.0)
    with pytest.raises(DomainError):
        verify_euler(P2H, (), (), 2.0, 2.2, (0.1, 0.1))
    with pytest.raises(DomainError):
        verify_hyp_laplace(P2H, (2.0, 3.0), (4.0,), 2.0, (0.1, 0.1), (2.0, 3.0))
    with pytest.raises(DomainError):
        verify_hyp_laplace(P2H, (2.0,), (2.5,), 2.0, (0.9, 0.1), (1.1, 1.2))
    with pytest.raises(DomainError):
        verify_kernel_product(P2H, 2.0, (0.9, 0.8), (0.9, 0.1))
    with pytest.raises(DomainError):
        dunkl_laplace(P1, lambda X: np.ones(len(X)), (-1.0,))
    with pytest.raises(ParamError):
        dunkl_laplace(P2H, lambda X: np.ones(len(X)), (1.0,))
