import math

import numpy as np
import pytest

from pompeiu.errors import CoincidentPoints, DepthCap, DomainError
from pompeiu.geometry import DiskDomain, MultiIndex, PolydiscDomain, wirtinger_split
from pompeiu.kernels import c1, c2, c3, log_term
from pompeiu.operators import (apply_mixed, apply_polydisc, apply_T, constant_field,
                               field_from_callable, field_from_expression)
from pompeiu.oracle import (HoelderEstimate, NestedOracle, PolynomialField,
                            check_norm_bound, disk_norm_estimate, exact_transform,
                            hoelder_seminorm, lemma_lhs_quadrature, nested_apply,
                            polydisc_norm_estimate, wirtinger_exact)

DISK = DiskDomain(1.0)
A, B = 0.31 + 0.12j, -0.22 + 0.41j


# ---------------------------------------------------------------------------
# Nested application
# ---------------------------------------------------------------------------

def test_nested_single_is_plain_T():
    f = field_from_expression("z*zbar", DISK)
    z = 0.2 - 0.3j
    got = nested_apply(f, z, ["T"], top_resolution=(64, 128))
    assert got == pytest.approx(apply_T(f, z, (64, 128)), abs=1e-14)


def test_nested_TT_of_one_at_origin():
    # T(1) = zbar, T(zbar) = zbar^2/2, zero at the origin
    one = constant_field(1.0, DISK)
    assert abs(nested_apply(one, 0, ["T", "T"])) < 1e-8


def test_nested_TTbar_of_one_at_origin():
    # radial computation gives exactly -1
    one = constant_field(1.0, DISK)
    assert nested_apply(one, 0, ["T", "Tbar"]) == pytest.approx(-1.0, abs=1e-6)


def test_nested_depth_cap():
    one = constant_field(1.0, DISK)
    with pytest.raises(DepthCap):
        nested_apply(one, 0, ["T"] * 5)
    with pytest.raises(DomainError):
        nested_apply(one, 0, ["Q"])


def test_nested_accepts_target_sequence():
    one = constant_field(1.0, DISK)
    zs = [0.1, 0.2 + 0.1j]
    got = nested_apply(one, zs, ["T"])
    want = np.conj(np.asarray(zs, dtype=complex))  # T(1) = zbar
    assert np.allclose(got, want, atol=1e-10)


def test_nested_requires_disk_domain():
    one = constant_field(1.0, PolydiscDomain(2, 1.0))
    with pytest.raises(DomainError):
        NestedOracle(one)


def test_nested_matches_closed_forms_depth_2():
    rng = np.random.default_rng(21)
    poly = PolynomialField(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    f = poly.to_field(DISK)
    oracle = NestedOracle(f)
    for z in (0.15 + 0.2j, -0.3 - 0.1j):
        mixed = apply_mixed(f, z, 1, 1)
        nested = oracle.evaluate(z, ["T", "Tbar"])
        assert abs(nested - mixed) <= 1e-5 * max(1.0, abs(mixed))


def test_nested_oracle_memoizes_suffix_grids():
    one = constant_field(1.0, DISK)
    oracle = NestedOracle(one)
    oracle.evaluate(0.1, ["T", "Tbar"])
    assert ("Tbar",) in oracle._memo
    first = oracle._memo[("Tbar",)]
    oracle.evaluate(0.2, ["T", "Tbar"])
    assert oracle._memo[("Tbar",)] is first


# ---------------------------------------------------------------------------
# Lemma left-hand sides
# ---------------------------------------------------------------------------

def test_lem4_k1_is_pure_log():
    got = lemma_lhs_quadrature("lem4", A, B, 1, 1.0)
    want = 2j * np.pi * log_term(A, B, 1.0)
    assert abs(got - want) <= 1e-5 * abs(want)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_lem4_matches_c1_plus_log(k):
    got = lemma_lhs_quadrature("lem4", A, B, k, 1.0)
    want = 2j * np.pi * (c1(A, B, k) + (A - B) ** (k - 1) * log_term(A, B, 1.0))
    assert abs(got - want) <= 1e-5 * max(1.0, abs(want))


def test_lem5_residue_value():
    got = lemma_lhs_quadrature("lem5", A, B, (1, 1), 1.0)
    assert got == pytest.approx(2j * np.pi * (-np.conj(B)), abs=1e-12)
    got2 = lemma_lhs_quadrature("lem5", A, B, (2, 3), 1.0)
    assert got2 == pytest.approx(2j * np.pi * c2(A, B, 2, 3, 1.0), abs=1e-10)


@pytest.mark.parametrize("mu,nu", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)])
def test_lem6_matches_c3(mu, nu):
    got = lemma_lhs_quadrature("lem6", A, B, (mu, nu), 1.0)
    want = 2j * np.pi * c3(A, B, mu, nu, 1.0)
    assert abs(got - want) <= 1e-5 * max(1.0, abs(got))


def test_lemma_quadrature_converges_4x():
    want = 2j * np.pi * c3(A, B, 2, 2, 1.0)
    errs = []
    for res in [(16, 32), (32, 64), (64, 128)]:
        got = lemma_lhs_quadrature("lem6", A, B, (2, 2), 1.0, res)
        errs.append(abs(got - want))
    floor = 1e-10 * abs(want)
    for coarse, fine in zip(errs, errs[1:]):
        assert fine <= max(coarse / 4.0, floor)


def test_lemma_coincident_points():
    with pytest.raises(CoincidentPoints):
        lemma_lhs_quadrature("lem6", 0.2, 0.2, (1, 1), 1.0)
    with pytest.raises(DomainError):
        lemma_lhs_quadrature("lem9", A, B, (1, 1), 1.0)


# ---------------------------------------------------------------------------
# Exact polynomial calculus
# ---------------------------------------------------------------------------

def test_wirtinger_exact_values():
    zzbar = PolynomialField.from_dict({(1, 1): 1.0})
    assert wirtinger_exact(zzbar, 1, 1).coeffs[0, 0] == 1.0
    zbar3 = PolynomialField.from_dict({(0, 3): 1.0})
    d = wirtinger_exact(zbar3, 0, 1)
    assert complex(d(np.asarray(0.5j))) == pytest.approx(3 * np.conj(0.5j) ** 2)
    z2zb2 = PolynomialField.from_dict({(2, 2): 1.0})
    dd = wirtinger_exact(z2zb2, 2, 2)
    assert complex(dd(np.asarray(0.3 + 0.1j))) == pytest.approx(4.0)


def test_wirtinger_exact_cross_checked_by_fd():
    rng = np.random.default_rng(22)
    poly = PolynomialField(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    exact = wirtinger_exact(poly, 2, 1)
    stencil = wirtinger_split(2, 1)
    z = 0.2 - 0.35j
    fd = stencil.apply_richardson(lambda w: poly(np.asarray(w, dtype=complex)), z, 1e-2)
    assert fd == pytest.approx(complex(exact(np.asarray(z))), rel=1e-7, abs=1e-9)


def test_degree_cap():
    with pytest.raises(DomainError):
        PolynomialField(np.zeros((10, 2)))


# ---------------------------------------------------------------------------
# Hoelder estimators
# ---------------------------------------------------------------------------

def test_hoelder_of_constant_is_zero():
    f = constant_field(3.7 - 1.1j, DISK)
    est = hoelder_seminorm(f, 0.5, k=1, sample_budget=100, seed=0)
    assert est.value == 0.0


def test_hoelder_identity_field_approaches_sqrt2():
    # |f(z)-f(z')|/|z-z'|^(1/2) = |z-z'|^(1/2), maximized at the diameter: sqrt(2R)
    f = field_from_expression("z", DISK)
    est = hoelder_seminorm(f, 0.5, k=1, sample_budget=3000, seed=1)
    assert est.value <= math.sqrt(2.0) + 1e-12
    assert est.value >= math.sqrt(2.0) - 0.1


def test_hoelder_monotone_in_budget():
    f = field_from_expression("zbar^2", DISK)
    values = [hoelder_seminorm(f, 0.5, k=1, sample_budget=n, seed=2).value
              for n in (50, 100, 400)]
    assert values[0] <= values[1] <= values[2]


def test_hoelder_below_dense_grid_sup():
    # discrete estimate never exceeds a dense-grid reference sup
    f = field_from_expression("zbar^2", DISK)
    est = hoelder_seminorm(f, 0.5, k=1, sample_budget=500, seed=3).value
    ts = np.linspace(0, 2 * np.pi, 181)[:-1]
    boundary = np.exp(1j * ts)
    pts = np.concatenate([r * boundary for r in (0.5, 0.8, 1.0)])
    za, zb = np.meshgrid(pts, pts)
    mask = np.abs(za - zb) > 1e-9
    quot = np.abs(np.conj(za) ** 2 - np.conj(zb) ** 2)[mask] / np.abs(za - zb)[mask] ** 0.5
    assert est <= np.max(quot) * (1 + 1e-9)


def test_hoelder_polydisc_second_order():
    p2 = PolydiscDomain(2, 1.0)
    f = field_from_expression("z1*z2", p2)
    est = hoelder_seminorm(f, 0.5, k=2, sample_budget=300, seed=4)
    assert isinstance(est, HoelderEstimate)
    # |Delta_12 f| = |z1 - z1'| |z2 - z2'|, so the quotient is bounded by 2R^(1/2) each
    assert 0 < est.value <= 2.0 + 1e-9


# ---------------------------------------------------------------------------
# Norm bound (one-sided)
# ---------------------------------------------------------------------------

def test_norm_bound_zero_field():
    zero = constant_field(0.0, DISK)
    rep = check_norm_bound(zero, 1, 1, 0.5, resolution=(16, 32), sup_points=3, pairs=3)
    assert rep.holds and rep.lhs == 0.0


def test_norm_bound_constant_field():
    one = constant_field(1.0, DISK)
    rep = check_norm_bound(one, 1, 1, 0.5, resolution=(24, 48), sup_points=4, pairs=4)
    assert rep.holds
    # the bound constant alone dwarfs the achievable lhs
    assert rep.rhs / max(rep.lhs, 1e-12) > 100


def test_norm_bound_random_polynomial():
    rng = np.random.default_rng(23)
    poly = PolynomialField(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    f = poly.to_field(DISK)
    rep = check_norm_bound(f, 2, 1, 0.5, resolution=(24, 48), sup_points=4, pairs=4)
    assert rep.holds


def test_norm_bound_order_cap():
    one = constant_field(1.0, DISK)
    with pytest.raises(DomainError):
        check_norm_bound(one, 3, 2, 0.5)


def test_disk_norm_estimate_positive():
    f = field_from_expression("z+zbar", DISK)
    assert disk_norm_estimate(f, 0.5, sample_budget=200) > 0


# ---------------------------------------------------------------------------
# Polydisc norm growth: no published constant, so only boundedness under
# refinement is asserted.
# ---------------------------------------------------------------------------

def test_polydisc_transform_norm_bounded_under_refinement():
    p2 = PolydiscDomain(2, 1.0)
    f = field_from_expression("z1*z2bar+1", p2)
    mu, nu = MultiIndex((1, 1)), MultiIndex((1, 1))

    def transformed(res):
        def ev(z1, z2):
            z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
            z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
            z1b, z2b = np.broadcast_arrays(z1, z2)
            out = np.array([apply_polydisc(f, (complex(w1), complex(w2)), mu, nu, res)
                            for w1, w2 in zip(z1b.ravel(), z2b.ravel())])
            return out.reshape(z1b.shape)
        return field_from_callable(ev, p2)

    coarse = polydisc_norm_estimate(transformed((12, 24)), 0.5, sample_budget=12, seed=5)
    fine = polydisc_norm_estimate(transformed((24, 48)), 0.5, sample_budget=12, seed=5)
    assert fine <= 2.0 * coarse + 1e-9
    assert coarse <= 10.0  # desk-scale sanity: no blow-up


def test_exact_transform_boundary_term():
    # T(z^2 zbar)(w) = w^2 wbar^2/2 - R^4/2 (boundary residue active: p >= q+1)
    mono = PolynomialField.from_dict({(2, 1): 1.0})
    out = exact_transform(mono, 1.0)
    w = 0.3 + 0.1j
    assert complex(out(np.asarray(w))) == pytest.approx(w**2 * np.conj(w) ** 2 / 2 - 0.5)
