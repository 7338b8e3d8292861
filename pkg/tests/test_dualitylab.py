"""Duality kernels, closed forms, generator-level identities and the
continuum scaling limit."""

import numpy as np
import pytest

from asymtransport import configspace as cs
from asymtransport import dualitylab as dl
from asymtransport import engine, models
from asymtransport.configspace import ModelParams

P = ModelParams(q=0.8, k=0.5, sigma=0.5, L=3)


def test_kernel_indicator_support():
    eta = np.array([2, 0, 1])
    assert dl.d_asip(eta, np.array([3, 0, 0]), P) == 0.0
    assert dl.d_asip(eta, np.array([0, 0, 0]), P) == 1.0


def test_kernel_forms_differ_by_sector_constant():
    eta = np.array([3, 1, 2])
    for xi in (np.array([1, 0, 2]), np.array([2, 1, 0]),
               np.array([0, 1, 1])):
        prod = dl.d_asip(eta, xi, P, form="product")
        poch = dl.d_asip(eta, xi, P, form="pochhammer")
        assert prod == pytest.approx(
            dl.form_conversion_factor(xi, P) * poch, rel=1e-12)


def test_kernel_reduces_to_sip_kernel_at_q_one():
    p1 = ModelParams(q=1.0, k=0.75, L=3)
    eta = np.array([2, 1, 3])
    xi = np.array([1, 0, 2])
    assert dl.d_asip(eta, xi, p1) == pytest.approx(
        dl.d_sip(eta, xi, 0.75), rel=1e-12)


def test_single_walker_closed_form():
    eta = np.array([2, 0, 3])
    for ell in (1, 2, 3):
        closed = dl.d_asip_single(eta, ell, P)
        kernel = dl.d_asip(eta, dl.dual_occupation([ell], 3), P)
        assert closed == pytest.approx(kernel, rel=1e-12, abs=1e-15)


def test_multi_walker_closed_form():
    eta = np.array([2, 1, 3])
    for ells in ((1, 2), (1, 3), (2, 3)):
        closed = dl.d_asip_multi(eta, ells, P)
        kernel = dl.d_asip(eta, dl.dual_occupation(ells, 3), P)
        assert closed == pytest.approx(kernel, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("form", ["product", "pochhammer"])
@pytest.mark.parametrize("q,k", [(0.6, 0.5), (0.9, 1.7)])
def test_selfduality_small_grid(q, k, form):
    p = ModelParams(q=q, k=k)
    rep = dl.verify_selfduality_asip(3, 3, 2, p, form=form)
    assert rep.passed, str(rep)


def test_thermal_selfduality_same_kernel():
    rep = dl.verify_thermal_selfduality(3, 3, 2, ModelParams(q=0.8, k=0.5))
    assert rep.passed, str(rep)


def test_abep_sip_duality_random_instances():
    rng = engine.SeedTree(13).stream(0)
    worst = 0.0
    for _ in range(10):
        L = int(rng.integers(2, 5))
        x = rng.uniform(0.2, 2.0, size=L)
        xi = rng.integers(0, 3, size=L)
        p = ModelParams(q=1.0, k=float(rng.uniform(0.4, 1.6)),
                        sigma=float(rng.uniform(0.1, 1.0)), L=L)
        rep = dl.verify_abep_sip_duality(x, xi, p)
        worst = max(worst, rep.residual)
    assert worst < 1e-5


def test_g_map_conjugation():
    p = ModelParams(q=1.0, k=0.6, sigma=0.4, L=3)
    x = np.array([0.7, 1.1, 0.4])
    rep = dl.verify_g_map_conjugation(
        lambda z: float(z[0] ** 3 + z[1] * z[2]), x, p)
    assert rep.passed, str(rep)


def test_scaling_limit_monotone():
    errs, target = dl.duality_scaling_limit_check(
        np.array([1.0, 2.0]), np.array([1, 0]), 0.5, 0.5, [100, 1000])
    assert target == pytest.approx(0.08554821486874875, rel=1e-12)
    assert errs[1] < errs[0]
    assert errs[1] < 1e-2


def test_continuous_kernels_at_zero_dual():
    x = np.array([0.5, 1.5])
    p = ModelParams(q=1.0, k=0.5, sigma=0.3, L=2)
    assert dl.d_abep(x, np.array([0, 0]), p) == 1.0
    assert dl.d_akmp(x, np.array([0, 0]), 0.3) == 1.0


def test_akmp_kernel_is_monomial_in_g():
    x = np.array([0.5, 1.5])
    sigma = 0.3
    xi = np.array([2, 1])
    g = cs.g_map(x, sigma)
    ref = g[0] ** 2 / 2.0 * g[1]
    assert dl.d_akmp(x, xi, sigma) == pytest.approx(ref, rel=1e-12)


def test_thermal_continuous_duality():
    p = ModelParams(q=1.0, k=0.75, sigma=0.5, L=3)
    rep = dl.thermal_continuous_duality_residual(
        np.array([0.7, 1.1, 0.4]), np.array([1, 0, 2]), p)
    assert rep.passed, str(rep)


def test_renormalized_dual_expectation_initial_value():
    eta = np.array([2, 1, 0])
    ells = (1, 2)
    p = ModelParams(q=0.8, k=0.5, L=3)
    val = dl.renormalized_dual_expectation(eta, ells, 0.0, p)
    pref = np.prod([p.q ** (-2.0 * cs.tail_count(eta, m + 1))
                    for m in ells])
    ref = pref * dl.d_asip(eta, dl.dual_occupation(ells, 3), p)
    assert val == pytest.approx(ref, rel=1e-10)


def test_renormalized_dual_expectation_finite_t():
    eta = np.array([2, 1, 0])
    p = ModelParams(q=0.8, k=0.5, L=3)
    val = dl.renormalized_dual_expectation(eta, (1,), 0.7, p)
    assert np.isfinite(val)


def test_check_report_formatting():
    rep = dl.CheckReport(name="x", params={}, residual=1e-3,
                         threshold=1e-5)
    assert not rep.passed
    assert "FAIL" in str(rep)
