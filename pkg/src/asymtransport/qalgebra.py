"""Deformed-algebra construction of the asymmetric inclusion process.

The chain of exact linear-algebra facts implemented and machine-checked
here:

1. a triple of ladder operators with deformed commutation relations
   ``[K+, K-] = -[2 K0]`` and ``[K0, K+-] = +- K+-``, represented on the
   occupation basis, with a scalar Casimir element;
2. a co-product turning one-site operators into two-site ones; applying it
   to the Casimir gives the two-site Hamiltonian summand, and adding a
   constant makes the all-empty state a ground state;
3. global raising/lowering operators built by iterating the co-product are
   symmetries of the Hamiltonian, and the deformed exponential of the
   global raising operator pseudo-factorizes over sites into an operator
   with explicit matrix elements;
4. conjugating the Hamiltonian by its positive ground state produces
   exactly the particle-jump generator of the asymmetric inclusion
   process, and conjugating the exponential symmetry by the ground state
   on both sides produces (up to a sector constant) its self-duality
   kernel.

All operators are dense matrices on the truncated occupation basis
``{0, ..., n_max}`` per site; identities are exact on any particle-number
sector whose total fits strictly inside the truncation.
"""

import itertools
import math

import numpy as np

from . import dualitylab, models, qcalc
from .configspace import ModelParams
from .qcalc import curly_q_factorial, q_binomial, q_number

__all__ = [
    "site_operators", "casimir_matrix", "commutator",
    "delta_casimir_pair", "hamiltonian_constant", "build_hamiltonian",
    "embed", "coproduct_symmetries", "basis_index", "basis_config",
    "sector_indices", "splus_closed_form", "splus_from_qexp",
    "ground_state_vector", "derive_generator", "derive_duality",
    "symmetry_residual", "pseudo_factorization_residual",
]


def site_operators(k, q, n_max):
    """One-site operators on the truncated occupation basis.

    Returns a dict with the ladder triple ``Kplus``, ``Kminus``, ``K0``
    (``K+|n> = sqrt([n+2k][n+1]) |n+1>``, ``K-|n> = sqrt([n][n+2k-1])
    |n-1>``, ``K0|n> = (n+k)|n>``), the diagonal exponentials ``qK0``,
    ``qK0inv``, ``K = q^(2 K0)``, ``Kinv``, and the rescaled pair
    ``E = q^K0 K+``, ``F = K- q^-K0`` satisfying ``K E = q^2 E K``,
    ``K F = q^-2 F K``, ``[E, F] = -(K - K^-1)/(q - 1/q)``.
    """
    qcalc.check_q(q)
    d = n_max + 1
    n = np.arange(d, dtype=float)
    Kp = np.zeros((d, d))
    Km = np.zeros((d, d))
    for m in range(n_max):
        amp = math.sqrt(q_number(m + 2 * k, q) * q_number(m + 1, q))
        Kp[m + 1, m] = amp
        Km[m, m + 1] = math.sqrt(q_number(m + 1, q) * q_number(m + 2 * k, q))
    K0 = np.diag(n + k)
    qK0 = np.diag(q ** (n + k))
    qK0inv = np.diag(q ** (-(n + k)))
    ops = {
        "Kplus": Kp, "Kminus": Km, "K0": K0,
        "qK0": qK0, "qK0inv": qK0inv,
        "K": qK0 @ qK0, "Kinv": qK0inv @ qK0inv,
        "E": qK0 @ Kp, "F": Km @ qK0inv,
        "identity": np.eye(d),
    }
    return ops


def commutator(A, B):
    return A @ B - B @ A


def q_number_of_diagonal(D, q):
    """Apply the symmetric q-number to a diagonal matrix spectrally."""
    d = np.diag(D).copy()
    return np.diag([q_number(v, q) for v in d])


def casimir_matrix(k, q, n_max):
    """``[K0][K0 - 1] - K+ K-``; a scalar ``[k][k-1]`` times the identity
    in this representation."""
    ops = site_operators(k, q, n_max)
    return q_number_of_diagonal(ops["K0"], q) \
        @ q_number_of_diagonal(ops["K0"] - np.eye(n_max + 1), q) \
        - ops["Kplus"] @ ops["Kminus"]


def hamiltonian_constant(k, q):
    """Per-edge constant making the all-empty state a ground state:
    ``(q^2k - q^-2k)(q^(2k-1) - q^-(2k-1))/(q - 1/q)^2``; the q -> 1
    limit is ``2k(2k-1)``."""
    if q == 1.0:
        return 2.0 * k * (2.0 * k - 1.0)
    return (q ** (2 * k) - q ** (-2 * k)) \
        * (q ** (2 * k - 1) - q ** (-(2 * k - 1))) / (q - 1.0 / q) ** 2


def delta_casimir_pair(k, q, n_max, form="explicit"):
    """Two-site image of the Casimir under the co-product, as a dense
    matrix on the pair basis (left site most significant).

    form
    ----
    "explicit" : hopping terms sandwiched between ``q^K0`` (left) and
        ``q^-K0`` (right), plus ``K+K- (x) q^-2K0``, ``q^2K0 (x) K+K-``
        and a diagonal combination of ``q^(+-2K0) (x) q^(+-2K0)``.  At
        q = 1 the diagonal combination degenerates to
        ``-(K0 (x) 1 + 1 (x) K0)(K0 (x) 1 + 1 (x) K0 - 1)``.
    "sandwiched" : the fully sandwiched rewriting
        ``q^K0 { K+ (x) K- + K- (x) K+ - A (q^K0 - q^-K0) (x) (...)
        - B (q^K0 + q^-K0) (x) (...) } q^-K0`` with scalar constants A, B;
        requires q < 1.
    """
    ops = site_operators(k, q, n_max)
    Kp, Km, qK0, qK0inv = ops["Kplus"], ops["Kminus"], ops["qK0"], ops["qK0inv"]
    K, Kinv, I = ops["K"], ops["Kinv"], ops["identity"]
    sandwich_l = np.kron(qK0, I)
    sandwich_r = np.kron(I, qK0inv)
    hop = np.kron(Kp, Km) + np.kron(Km, Kp)
    if form == "explicit":
        out = sandwich_l @ hop @ sandwich_r
        out += np.kron(Kp @ Km, Kinv) + np.kron(K, Kp @ Km)
        if q == 1.0:
            tot = np.kron(ops["K0"], I) + np.kron(I, ops["K0"])
            out -= tot @ (tot - np.eye(tot.shape[0]))
        else:
            c = 1.0 / (q - 1.0 / q) ** 2
            out -= c * (np.kron(K, K) / q + q * np.kron(Kinv, Kinv)
                        - (q + 1.0 / q) * np.eye(K.shape[0] ** 2))
        return out
    if form == "sandwiched":
        if q == 1.0:
            raise ValueError("sandwiched form needs q < 1")
        A = (q ** k + q ** (-k)) * (q ** (k - 1) + q ** (-(k - 1))) \
            / (2.0 * (q - 1.0 / q) ** 2)
        B = (q ** k - q ** (-k)) * (q ** (k - 1) - q ** (-(k - 1))) \
            / (2.0 * (q - 1.0 / q) ** 2)
        minus = qK0 - qK0inv
        plus = qK0 + qK0inv
        brace = hop - A * np.kron(minus, minus) - B * np.kron(plus, plus)
        return sandwich_l @ brace @ sandwich_r
    raise ValueError("unknown form %r" % (form,))


def embed(op, site, L, n_max):
    """Place a one- or two-site operator at (1-based) ``site`` in the
    L-site tensor product, identity elsewhere; site 1 is the most
    significant tensor factor."""
    d = n_max + 1
    width = round(math.log(op.shape[0], d))
    out = np.eye(d ** (site - 1))
    out = np.kron(out, op)
    out = np.kron(out, np.eye(d ** (L - site + 1 - width)))
    return out


def build_hamiltonian(L, k, q, n_max, form="explicit"):
    """Sum over edges of the embedded two-site Casimir image plus the
    per-edge constant; annihilates the all-empty state and is symmetric."""
    d = n_max + 1
    pair = delta_casimir_pair(k, q, n_max, form=form)
    c = hamiltonian_constant(k, q)
    H = np.zeros((d ** L, d ** L))
    for i in range(1, L):
        H += embed(pair, i, L, n_max)
        H += c * np.eye(d ** L)
    return H


def coproduct_symmetries(L, k, q, n_max):
    """Global operators commuting with the Hamiltonian.

    Returns a dict with the iterated co-product images ``Kplus``,
    ``Kminus`` (site operator dressed by ``q^K0`` on the left and
    ``q^-K0`` on the right), the total ``K0``, and the rescaled global
    raising/lowering operators ``E = sum_i K_1...K_(i-1) E_i`` and
    ``F = sum_i F_i K_(i+1)^-1...K_L^-1``.
    """
    ops = site_operators(k, q, n_max)
    d = n_max + 1
    dim = d ** L

    def dressed(local, at):
        factors = []
        for j in range(1, L + 1):
            if j < at:
                factors.append(ops["qK0"])
            elif j == at:
                factors.append(local)
            else:
                factors.append(ops["qK0inv"])
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        return m

    Kp_L = np.zeros((dim, dim))
    Km_L = np.zeros((dim, dim))
    K0_L = np.zeros((dim, dim))
    E_L = np.zeros((dim, dim))
    F_L = np.zeros((dim, dim))
    for i in range(1, L + 1):
        Kp_L += dressed(ops["Kplus"], i)
        Km_L += dressed(ops["Kminus"], i)
        K0_L += embed(ops["K0"], i, L, n_max)
        # E term: K_1 ... K_(i-1) E_i, identity to the right
        factors = [ops["K"]] * (i - 1) + [ops["E"]] + [ops["identity"]] * (L - i)
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        E_L += m
        # F term: identity to the left, F_i K_(i+1)^-1 ... K_L^-1
        factors = [ops["identity"]] * (i - 1) + [ops["F"]] + [ops["Kinv"]] * (L - i)
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        F_L += m
    return {"Kplus": Kp_L, "Kminus": Km_L, "K0": K0_L, "E": E_L, "F": F_L}


def basis_index(eta, n_max):
    """Tensor-basis index of an occupation vector (site 1 most
    significant)."""
    idx = 0
    for v in eta:
        if not 0 <= v <= n_max:
            raise ValueError("occupation outside the truncated basis")
        idx = idx * (n_max + 1) + int(v)
    return idx


def basis_config(idx, L, n_max):
    out = []
    for _ in range(L):
        idx, r = divmod(idx, n_max + 1)
        out.append(r)
    return np.array(out[::-1], dtype=int)


def sector_indices(sector, n_max):
    """Tensor-basis indices of all configurations of a sector."""
    return np.array([basis_index(c, n_max) for c in sector.configs])


def matrix_q_exp(X, r):
    """Terminating deformed exponential of a nilpotent matrix:
    ``sum_n X^n / {n}_r!``."""
    term = np.eye(X.shape[0])
    acc = term.copy()
    n = 0
    while True:
        n += 1
        term = term @ X / qcalc.curly_q_number(n, r)
        if not term.any():
            return acc
        acc += term
        if n > 10_000:
            raise ArithmeticError("matrix exponential series did not terminate")


def splus_from_qexp(L, k, q, n_max):
    """Exponential symmetry as the deformed exponential of the global
    raising operator; the series terminates on the truncated basis."""
    E_L = coproduct_symmetries(L, k, q, n_max)["E"]
    return matrix_q_exp(E_L, q ** 2)


def splus_closed_form(L, k, q, n_max):
    """Closed-form matrix elements of the exponential symmetry:

    ``<eta|S+|xi> = prod_i sqrt(binom(eta_i, eta_i - xi_i)_q
    binom(eta_i + 2k - 1, eta_i - xi_i)_q)
    q^((eta_i - xi_i)(1 + k + xi_i + 2 sum_(m<i) (xi_m + k)))``
    supported on eta >= xi sitewise.  Both binomials are written with the
    integer lower index eta_i - xi_i so that non-integer 2k is allowed.
    """
    d = n_max + 1
    dim = d ** L
    out = np.zeros((dim, dim))
    for col in range(dim):
        xi = basis_config(col, L, n_max)
        _fill_splus_column(out, col, xi, L, k, q, n_max)
    return out


def _fill_splus_column(out, col, xi, L, k, q, n_max):
    # iterate over all eta >= xi within the truncation
    ranges = [range(int(x), n_max + 1) for x in xi]
    for eta in itertools.product(*ranges):
        val = 1.0
        acc = 0.0  # sum of (xi_m + k) over m < i
        for i0 in range(L):
            e, x = eta[i0], int(xi[i0])
            l = e - x
            val *= math.sqrt(q_binomial(e, l, q)
                             * q_binomial(e + 2 * k - 1, l, q))
            val *= q ** (l * (1 + k + x + 2 * acc))
            acc += x + k
        out[basis_index(eta, n_max), col] = val


def ground_state_vector(L, k, q, n_max):
    """Strictly positive ground state: the exponential symmetry applied to
    the all-empty state, ``g(eta) = prod_i sqrt(binom(eta_i + 2k - 1,
    eta_i)_q) q^(eta_i (1 - k + 2 k i))``."""
    d = n_max + 1
    g = np.zeros(d ** L)
    for idx in range(d ** L):
        eta = basis_config(idx, L, n_max)
        val = 1.0
        for i0, e in enumerate(eta):
            i = i0 + 1
            val *= math.sqrt(q_binomial(e + 2 * k - 1, e, q)) \
                * q ** (e * (1.0 - k + 2.0 * k * i))
        g[idx] = val
    return g


def derive_generator(L, k, q, n_max, form="explicit"):
    """Ground-state conjugation of the Hamiltonian,
    ``G^-1 H G`` with G = diag(ground state); entry (x, y) is the jump
    rate x -> y and rows sum to zero on particle-number sectors that fit
    in the truncation."""
    H = build_hamiltonian(L, k, q, n_max, form=form)
    g = ground_state_vector(L, k, q, n_max)
    return (H * g[None, :]) / g[:, None]


def derive_duality(L, k, q, n_max):
    """Ground-state two-sided conjugation of the exponential symmetry,
    ``G^-1 S+ G^-1``, which equals ``q^(2 (k - 1) |xi|)`` times the
    self-duality kernel (the conversion constant depends only on the dual
    particle number, so the conjugation is itself a duality function on
    every sector pair); returns the normalized matrix
    ``D(eta, xi) = <eta|G^-1 S+ G^-1|xi> q^(-2 (k - 1) |xi|)``.
    """
    S = splus_closed_form(L, k, q, n_max)
    g = ground_state_vector(L, k, q, n_max)
    raw = (S / g[:, None]) / g[None, :]
    d = n_max + 1
    D = np.zeros_like(raw)
    for col in range(d ** L):
        n_xi = int(basis_config(col, L, n_max).sum())
        D[:, col] = raw[:, col] * q ** (-2.0 * (k - 1.0) * n_xi)
    return D


def symmetry_residual(H, S):
    """Relative commutation residual ``|[H, S]| / max(1, |H S|, |S H|)``."""
    a = H @ S
    b = S @ H
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    return float(np.abs(a - b).max()) / scale


def sector_symmetry_residual(H, S, L, n_max, n_total_max):
    """Commutation residual restricted to matrix entries whose row and
    column configurations both have at most ``n_total_max`` particles;
    this excludes the rows truncated by the finite basis (a raising
    operator maps total n to n + 1, so use n_total_max <= n_max - 1)."""
    comm = H @ S - S @ H
    scale = max(1.0, float(np.abs(H @ S).max()))
    d = n_max + 1
    keep = np.array([basis_config(i, L, n_max).sum() <= n_total_max
                     for i in range(d ** L)])
    return float(np.abs(comm[np.ix_(keep, keep)]).max()) / scale


def pseudo_factorization_residual(L, k, q, n_max):
    """Residual of the site-by-site factorization of the deformed
    exponential of the global raising operator:
    ``exp(E^(L)) = exp(E_1) exp(K_1 E_2) ... exp(K_1...K_(L-1) E_L)``."""
    ops = site_operators(k, q, n_max)
    lhs = splus_from_qexp(L, k, q, n_max)
    rhs = np.eye((n_max + 1) ** L)
    for i in range(1, L + 1):
        factors = [ops["K"]] * (i - 1) + [ops["E"]] + [ops["identity"]] * (L - i)
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        rhs = rhs @ matrix_q_exp(m, q ** 2)
    scale = max(1.0, float(np.abs(lhs).max()))
    return float(np.abs(lhs - rhs).max()) / scale
