"""The deformed ladder-operator construction: commutation relations,
conserved quantities, and the re-derivation of rates and duality kernel."""

import numpy as np
import pytest

from asymtransport import configspace as cs
from asymtransport import dualitylab as dl
from asymtransport import models, qalgebra as qa
from asymtransport.configspace import ModelParams
from asymtransport.qcalc import q_number

Q, K, NMAX = 0.7, 0.85, 6


def _safe(n_max):
    """Indices of basis states whose ladder images stay inside the
    truncation."""
    return slice(0, n_max)


def test_site_commutation_relations():
    ops = qa.site_operators(K, Q, NMAX)
    s = _safe(NMAX)
    lhs = qa.commutator(ops["Kplus"], ops["Kminus"])
    rhs = -qa.q_number_of_diagonal(2.0 * ops["K0"], Q)
    assert np.abs((lhs - rhs)[s, s]).max() < 1e-12
    for sign, name in ((+1.0, "Kplus"), (-1.0, "Kminus")):
        comm = qa.commutator(ops["K0"], ops[name])
        assert np.abs((comm - sign * ops[name])[s, s]).max() < 1e-12


def test_rescaled_generator_relations():
    ops = qa.site_operators(K, Q, NMAX)
    s = _safe(NMAX - 1)
    E, F, Km = ops["E"], ops["F"], ops["K"]
    assert np.abs((Km @ E - Q ** 2 * E @ Km)[s, s]).max() < 1e-12
    assert np.abs((Km @ F - Q ** -2 * F @ Km)[s, s]).max() < 1e-12
    comm = qa.commutator(E, F)
    rhs = -(Km - ops["Kinv"]) / (Q - 1.0 / Q)
    assert np.abs((comm - rhs)[s, s]).max() < 1e-12


def test_casimir_is_scalar():
    C = qa.casimir_matrix(K, Q, NMAX)
    scalar = q_number(K, Q) * q_number(K - 1.0, Q)
    assert np.abs(C - scalar * np.eye(NMAX + 1)).max() < 1e-11


def test_hamiltonian_constant_q_one_limit():
    assert qa.hamiltonian_constant(0.75, 1.0) == pytest.approx(
        2 * 0.75 * (2 * 0.75 - 1), rel=1e-12)
    # continuity in q near 1
    assert qa.hamiltonian_constant(0.75, 1.0 - 1e-9) == pytest.approx(
        qa.hamiltonian_constant(0.75, 1.0), rel=1e-6)


def test_delta_casimir_forms_agree():
    A = qa.delta_casimir_pair(K, Q, 4, form="explicit")
    B = qa.delta_casimir_pair(K, Q, 4, form="sandwiched")
    # compare on the sector-exact part of the two-site truncation
    idx = [i * 5 + j for i in range(5) for j in range(5) if i + j <= 4]
    assert np.abs((A - B)[np.ix_(idx, idx)]).max() < 1e-11


def test_hamiltonian_symmetric_and_annihilates_vacuum():
    H = qa.build_hamiltonian(3, K, Q, 3)
    assert np.abs(H - H.T).max() < 1e-11
    assert np.abs(H[:, 0]).max() < 1e-11


def test_hamiltonian_commutes_with_symmetries():
    L, n_max = 3, 3
    H = qa.build_hamiltonian(L, K, Q, n_max)
    sym = qa.coproduct_symmetries(L, K, Q, n_max)
    for name in ("Kplus", "Kminus", "K0", "E", "F"):
        res = qa.sector_symmetry_residual(H, sym[name], L, n_max, n_max - 1)
        assert res < 1e-11, name


def test_splus_closed_form_equals_q_exponential():
    S_exp = qa.splus_from_qexp(3, K, Q, 3)
    S_cf = qa.splus_closed_form(3, K, Q, 3)
    assert np.abs(S_exp - S_cf).max() < 1e-10


def test_pseudo_factorization():
    assert qa.pseudo_factorization_residual(3, K, Q, 3) < 1e-10


def test_derive_generator_matches_rates():
    L, n_max = 3, 3
    rates = qa.derive_generator(L, K, Q, n_max)
    for n in range(n_max + 1):
        sec = cs.enumerate_sector(L, n)
        idx = qa.sector_indices(sec, n_max)
        ref = models.build_generator(
            sec, "asip", ModelParams(q=Q, k=K, L=L)).matrix.toarray()
        assert np.abs(rates[np.ix_(idx, idx)] - ref).max() < 1e-10


def test_derive_duality_matches_kernel():
    L, n_max = 3, 3
    D = qa.derive_duality(L, K, Q, n_max)
    p = ModelParams(q=Q, k=K, L=L)
    for ne in range(1, n_max + 1):
        for nx in range(ne + 1):
            s_eta = cs.enumerate_sector(L, ne)
            s_xi = cs.enumerate_sector(L, nx)
            ref = dl.d_asip_matrix(s_eta, s_xi, p)
            blk = D[np.ix_(qa.sector_indices(s_eta, n_max),
                           qa.sector_indices(s_xi, n_max))]
            assert np.abs(blk - ref).max() < 1e-10


def test_basis_index_round_trip():
    L, n_max = 3, 4
    for eta in ((0, 0, 0), (4, 0, 0), (1, 2, 3), (0, 4, 4)):
        idx = qa.basis_index(np.array(eta), n_max)
        assert tuple(qa.basis_config(idx, L, n_max)) == eta


def test_matrix_q_exp_scalar_case():
    # for a nilpotent 2x2 the series terminates: 1 + X
    X = np.array([[0.0, 0.0], [2.0, 0.0]])
    out = qa.matrix_q_exp(X, 0.49)
    assert np.allclose(out, np.eye(2) + X)
