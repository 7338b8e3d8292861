"""Transition rates, generator matrices, diffusion generators, and the
stationary measures of the discrete and continuous transport models.

Discrete models on a chain of L sites:

* ``asip``   -- q-deformed inclusion process with drift to the left;
* ``sip``    -- its symmetric q = 1 limit;
* ``qtazrp`` -- totally asymmetric zero-range process reached from the
  inclusion process under the time rescaling ``(1-q^2) q^(4k-1)`` as
  k grows;
* ``th_asip`` / ``th_sip`` -- instantaneous-thermalization versions whose
  edge updates jump straight to the edge-conditioned stationary split.

Continuous models (diffusion generators, applied by finite differences):
the asymmetric energy diffusion (sigma > 0) and its symmetric limit.
"""

import math

import numpy as np
from scipy import integrate, sparse, special

from . import configspace, qcalc
from .configspace import ModelParams
from .qcalc import q_number, q_binomial, q_pochhammer

__all__ = [
    "SparseRateMatrix", "asip_edge_rates", "sip_edge_rates", "qtazrp_rate",
    "build_generator", "edge_rate_table",
    "abep_generator_apply", "bep_generator_apply",
    "theta_edge", "adep_relax_pair",
    "asip_marginal_pmf", "asip_marginal_Z", "asip_marginal_Z_closed",
    "asip_marginal_mean", "asip_marginal_mean_closed",
    "abep_marginal_pdf", "abep_marginal_Z",
    "detailed_balance_residual", "alpha_max",
    "ring_product_measure_gap", "qtazrp_limit_gap",
]


class SparseRateMatrix:
    """CTMC generator on an enumerated sector: rows sum to zero, off-diagonal
    entries are the nonnegative transition rates."""

    def __init__(self, dimension, rows, cols, rates):
        rates = np.asarray(rates, dtype=float)
        if (rates < 0).any():
            raise ValueError("negative off-diagonal rate")
        off = sparse.csr_matrix((rates, (rows, cols)), shape=(dimension, dimension))
        off.sum_duplicates()
        diag = -np.asarray(off.sum(axis=1)).ravel()
        self.matrix = (off + sparse.diags(diag)).tocsr()
        self.dimension = dimension

    def toarray(self):
        return self.matrix.toarray()

    def row_sum_residual(self):
        return float(np.abs(self.matrix.sum(axis=1)).max())

    def to_coordinate_text(self):
        """One `row col value` line per stored entry, for external inspection."""
        coo = self.matrix.tocoo()
        return "\n".join("%d %d %.17g" % (r, c, v)
                         for r, c, v in zip(coo.row, coo.col, coo.data))


def asip_edge_rates(eta, i, params):
    """Jump rates across edge i for the asymmetric inclusion process.

    Returns
    -------
    (rate_right, rate_left) : tuple of float
        ``rate_right = q^(eta_i - eta_j + 2k - 1) [eta_i] [2k + eta_j]`` and
        ``rate_left  = q^(eta_i - eta_j - 2k + 1) [2k + eta_i] [eta_j]``
        where j is the right site of the edge and [.] is the symmetric
        q-number.  At q = 1 these reduce to the symmetric inclusion rates.
    """
    q, k = params.q, params.k
    a, b = params.edge_sites(i)
    na, nb = int(eta[a - 1]), int(eta[b - 1])
    right = q ** (na - nb + (2 * k - 1)) * q_number(na, q) * q_number(2 * k + nb, q)
    left = q ** (na - nb - (2 * k - 1)) * q_number(2 * k + na, q) * q_number(nb, q)
    return right, left


def sip_edge_rates(eta, i, k, L=None, boundary="closed"):
    """Symmetric inclusion rates: right = eta_i (2k + eta_j), left mirrored."""
    L = len(eta) if L is None else L
    p = ModelParams(q=1.0, k=k, L=L, boundary=boundary)
    a, b = p.edge_sites(i)
    na, nb = int(eta[a - 1]), int(eta[b - 1])
    return float(na * (2 * k + nb)), float((2 * k + na) * nb)


def qtazrp_rate(y, i, q):
    """Left-jump rate of the totally asymmetric zero-range process.

    A particle at the right site of edge i jumps left at rate
    ``(q^(-2 y_j) - 1)/(q^(-2) - 1)`` with y_j its departure-site occupancy;
    monotone increasing and unbounded in y_j.
    """
    qcalc.check_q(q)
    nb = int(y[i])  # y[i] is the right site of edge i under 1-based labels
    if q == 1.0:
        return float(nb)
    return (q ** (-2 * nb) - 1.0) / (q ** (-2) - 1.0)


def _qtazrp_rates(eta, i, params):
    a, b = params.edge_sites(i)
    nb = int(eta[b - 1])
    if params.q == 1.0:
        return 0.0, float(nb)
    return 0.0, (params.q ** (-2 * nb) - 1.0) / (params.q ** (-2) - 1.0)


_EDGE_RATE_FNS = {
    "asip": asip_edge_rates,
    "sip": lambda eta, i, p: sip_edge_rates(eta, i, p.k, L=p.L, boundary=p.boundary),
    "qtazrp": _qtazrp_rates,
}


def edge_rate_table(model, params, n_max):
    """Occupancy-pair lookup tables (right[na, nb], left[na, nb]) for the
    single-particle-move models; the simulation fast path indexes these
    instead of re-evaluating q-deformed rates per event."""
    rate_fn = _EDGE_RATE_FNS[model]
    p2 = ModelParams(q=params.q, k=params.k, sigma=params.sigma, L=2)
    right = np.zeros((n_max + 1, n_max + 1))
    left = np.zeros((n_max + 1, n_max + 1))
    for na in range(n_max + 1):
        for nb in range(n_max + 1):
            right[na, nb], left[na, nb] = rate_fn(np.array([na, nb]), 1, p2)
    return right, left


def build_generator(sector, model, params):
    """Generator matrix of the named model restricted to a sector.

    ``model`` is one of asip, sip, qtazrp (single-particle moves) or
    th_asip, th_sip (rate-1 edge redistribution rows built from the exact
    conditional split laws).
    """
    if model in ("th_asip", "th_sip"):
        from . import thermal
        if model == "th_asip":
            return thermal.th_asip_generator(sector, params)
        return thermal.th_sip_generator(sector, params.k, boundary=params.boundary)
    try:
        rate_fn = _EDGE_RATE_FNS[model]
    except KeyError:
        raise ValueError("unknown model %r" % (model,))
    if sector.L != params.L:
        raise ValueError("sector length does not match params.L")
    rows, cols, rates = [], [], []
    for a, eta in enumerate(sector.configs):
        ev = np.asarray(eta)
        for i in range(1, params.n_edges + 1):
            si, sj = params.edge_sites(i)
            r_right, r_left = rate_fn(ev, i, params)
            if r_right > 0:
                tgt = sector.index[tuple(configspace.move_particle(ev, si, sj))]
                rows.append(a); cols.append(tgt); rates.append(r_right)
            if r_left > 0:
                tgt = sector.index[tuple(configspace.move_particle(ev, sj, si))]
                rows.append(a); cols.append(tgt); rates.append(r_left)
    return SparseRateMatrix(len(sector), rows, cols, rates)


def _abep_edge_coeffs(x, i, k, sigma):
    """Second- and first-order coefficients of the edge diffusion generator
    along the direction e_i - e_{i+1} (1-based edge index i)."""
    u, v = float(x[i - 1]), float(x[i])
    if sigma == 0.0:
        return u * v, -2.0 * k * (u - v)
    eu = -math.expm1(-2.0 * sigma * u)          # 1 - e^{-2 sigma u}
    ev = math.expm1(2.0 * sigma * v)            # e^{2 sigma v} - 1
    a2 = eu * ev / (4.0 * sigma ** 2)
    a1 = -(eu * ev + 2.0 * k * (eu - ev)) / (2.0 * sigma)
    return a2, a1


def _directional_derivs(f, x, i, h):
    v = np.zeros(len(x))
    v[i - 1], v[i] = 1.0, -1.0
    fp, f0, fm = f(x + h * v), f(x), f(x - h * v)
    d1 = (fp - fm) / (2.0 * h)
    d2 = (fp - 2.0 * f0 + fm) / h ** 2
    return d1, d2


def abep_generator_apply(f, x, i, params, h=None, richardson=True):
    """Apply the edge diffusion generator to f at x by central differences.

    ``h`` defaults to ``1e-4 * max(1, |x|_inf)``; with ``richardson`` the
    h and h/2 stencils are combined for O(h^4) accuracy.  Points within 2h
    of the energy boundary are rejected (degenerate stencil).
    """
    x = np.asarray(x, dtype=float)
    if h is None:
        h = 1e-4 * max(1.0, float(np.abs(x).max()))
    if min(x[i - 1], x[i]) < 2.0 * h:
        raise ValueError("stencil reaches the boundary; reduce h or move x")
    a2, a1 = _abep_edge_coeffs(x, i, params.k, params.sigma)

    def value(step):
        d1, d2 = _directional_derivs(f, x, i, step)
        return a2 * d2 + a1 * d1

    if not richardson:
        return value(h)
    return (4.0 * value(h / 2.0) - value(h)) / 3.0


def bep_generator_apply(f, x, i, k, h=None, richardson=True):
    """Symmetric-limit counterpart of :func:`abep_generator_apply`."""
    p = ModelParams(q=1.0, k=k, sigma=0.0, L=max(2, len(x)))
    return abep_generator_apply(f, x, i, p, h=h, richardson=richardson)


def theta_edge(x, i, params):
    """Instantaneous energy flow across edge i: the drift coefficient of the
    edge generator, so that applying the generator to x_i gives
    ``theta_edge(x, i) - theta_edge(x, i-1)``."""
    _, a1 = _abep_edge_coeffs(x, i, params.k, params.sigma)
    return a1


def adep_relax_pair(a, b, sigma, t_max=200.0, dt=None, kind="adep",
                    tol=1e-11):
    """Relax the two-site deterministic energy flow to its fixed point.

    ``kind`` selects the flow: "adep" (asymmetric), "dep" (symmetric limit,
    equal split) or "tadep" (totally asymmetric, all energy to the left
    site).  Raises if the flow has not converged by ``t_max``.
    """
    if a < 0 or b < 0:
        raise ValueError("energies must be >= 0")

    def velocity(kind, u, v):
        if kind == "dep" or (kind == "adep" and sigma == 0.0):
            return -(u - v)
        if kind == "adep":
            return -(2.0 - math.exp(-2.0 * sigma * u)
                     - math.exp(2.0 * sigma * v)) / (2.0 * sigma)
        if kind == "tadep":
            return -(1.0 - math.exp(2.0 * sigma * v)) / (2.0 * sigma)
        raise ValueError("unknown kind %r" % (kind,))

    def rhs(t, y):
        w = velocity(kind, y[0], y[1])
        return [w, -w]

    sol = integrate.solve_ivp(rhs, (0.0, t_max), [float(a), float(b)],
                              rtol=1e-12, atol=1e-13, dense_output=False)
    u, v = sol.y[:, -1]
    if abs(velocity(kind, u, v)) > tol:
        raise RuntimeError("two-site flow not converged by t_max=%g" % t_max)
    return float(u), float(v)


def alpha_max(params, i=None):
    """Upper end of the admissible alpha interval for the discrete product
    measures: alpha < q^-(2k+1) globally."""
    return params.q ** (-(2.0 * params.k + 1.0))


def _asip_weight(n, i, params, alpha):
    q, k = params.q, params.k
    return alpha ** n * q_binomial(n + 2 * k - 1, n, q) * q ** (4 * k * i * n)


def _asip_weight_ratio_limit(i, params, alpha):
    # limiting ratio w(n+1)/w(n) as n grows; the series converges iff < 1
    q, k = params.q, params.k
    if q == 1.0:
        return alpha
    return alpha * q ** (4 * k * i - (2 * k - 1))


def asip_marginal_Z(i, params, alpha, tol=1e-14, n_cap=100_000):
    """Normalization of the site-i marginal of the reversible product
    measures, by series summation with a certified geometric tail bound.

    When 2k is an integer the closed form
    ``1/ (alpha q^(4ki - 2k + 1); q^2)_{2k}`` is available and is used as a
    cross-check in the tests, not here.
    """
    rho_inf = _asip_weight_ratio_limit(i, params, alpha)
    if rho_inf >= 1.0:
        raise ValueError("series diverges: alpha out of the admissible range")
    acc = 0.0
    w = 1.0
    n = 0
    while True:
        acc += w
        q, k = params.q, params.k
        ratio = alpha * q ** (4 * k * i) \
            * q_number(n + 2 * k, q) / q_number(n + 1, q)
        w_next = w * ratio
        # all later term ratios are bounded by rho, so the tail is geometric
        rho = max(ratio, rho_inf)
        if rho < 1.0 and w_next / (1.0 - rho) < tol * acc:
            return acc
        w = w_next
        n += 1
        if n > n_cap:
            raise RuntimeError("marginal normalization did not converge")


def asip_marginal_Z_closed(i, params, alpha):
    """Closed form of the marginal normalization; requires 2k integer."""
    if not params.two_k_integer:
        raise ValueError("closed form needs 2k integer")
    q, k = params.q, params.k
    m = int(round(2 * k))
    return 1.0 / q_pochhammer(alpha * q ** (4 * k * i - (2 * k - 1)), q ** 2, m)


def asip_marginal_pmf(i, n, params, alpha):
    """P(eta_i = n) under the reversible product measure labeled alpha."""
    if n < 0:
        return 0.0
    return _asip_weight(n, i, params, alpha) / asip_marginal_Z(i, params, alpha)


def asip_marginal_mean(i, params, alpha, tol=1e-13):
    """Mean occupancy of site i; equals the alpha log-derivative of the
    normalization.  Computed by direct series summation (valid for any k);
    the tests cross-check the integer-2k closed form
    ``sum_l 1/(q^(-2l) (alpha q^(4ki-2k+1))^(-1) - 1)``."""
    Z = asip_marginal_Z(i, params, alpha)
    rho_inf = _asip_weight_ratio_limit(i, params, alpha)
    acc = 0.0
    w = 1.0
    n = 0
    while True:
        acc += n * w
        q, k = params.q, params.k
        ratio = alpha * q ** (4 * k * i) \
            * q_number(n + 2 * k, q) / q_number(n + 1, q)
        w = w * ratio
        n += 1
        rho = max(ratio, rho_inf)
        if rho < 1.0 and (n + 1.0) * w / (1.0 - rho) ** 2 < tol * max(acc, Z):
            break
        if n > 100_000:
            raise RuntimeError("mean series did not converge")
    return acc / Z


def asip_marginal_mean_closed(i, params, alpha):
    """Integer-2k closed form for the mean occupancy of site i."""
    if not params.two_k_integer:
        raise ValueError("closed form needs 2k integer")
    q, k = params.q, params.k
    base = alpha * q ** (4 * k * i - 2 * k + 1)
    return sum(1.0 / (q ** (-2 * l) / base - 1.0)
               for l in range(int(round(2 * k))))


def abep_marginal_Z(i, params, gamma):
    """Normalization ``(1/2 sigma) B(2ki + gamma/(2 sigma), 2k)`` of the
    continuous-model marginal at site i; requires gamma > -4 sigma k."""
    sigma, k = params.sigma, params.k
    if sigma <= 0:
        if gamma <= 0:
            raise ValueError("need gamma > 0 in the symmetric limit")
        return math.exp(special.gammaln(2 * k) - 2 * k * math.log(gamma))
    shape = 2 * k * i + gamma / (2.0 * sigma)
    if shape <= 0:
        raise ValueError("need gamma > -4 sigma k i")
    return float(special.beta(shape, 2 * k)) / (2.0 * sigma)


def abep_marginal_pdf(i, x, params, gamma):
    """Density of the site-i marginal of the continuous reversible product
    measures: ``(1 - e^(-2 sigma x))^(2k-1) e^(-(4 sigma k i + gamma) x) / Z``.
    The sigma -> 0 limit is a Gamma(2k, gamma) density."""
    sigma, k = params.sigma, params.k
    if x < 0:
        return 0.0
    if sigma == 0.0:
        return float(x ** (2 * k - 1) * math.exp(-gamma * x)
                     / abep_marginal_Z(i, params, gamma))
    w = (-math.expm1(-2.0 * sigma * x)) ** (2 * k - 1) \
        * math.exp(-(4 * sigma * k * i + gamma) * x)
    return w / abep_marginal_Z(i, params, gamma)


def detailed_balance_residual(sector, model, params, weight_fn, scale=1e-300):
    """Largest relative detailed-balance violation of ``weight_fn`` (an
    unnormalized stationary candidate) over all transition pairs of the
    model's generator on the sector."""
    gen = build_generator(sector, model, params)
    coo = gen.matrix.tocoo()
    mu = np.array([weight_fn(np.asarray(c)) for c in sector.configs])
    worst = 0.0
    for r, c, v in zip(coo.row, coo.col, coo.data):
        if r == c or v <= 0:
            continue
        flow = mu[r] * v
        back = mu[c] * gen.matrix[c, r]
        worst = max(worst, abs(flow - back) / max(scale, abs(flow)))
    return worst


def ring_product_measure_gap(L, N, params, n_starts=8, seed=0):
    """Smallest stationarity violation achievable by a homogeneous product
    measure on the periodic chain, restricted to the (L, N) sector.

    The candidate is mu(eta) prop prod_i w(eta_i) with w(0) = 1 and free
    positive single-site weights; the violation is ``max |mu Q| / max Q``
    after normalizing mu.  A strictly positive lower bound certifies that
    no homogeneous product measure is stationary on the ring.
    """
    from scipy import optimize
    p = ModelParams(q=params.q, k=params.k, sigma=params.sigma, L=L,
                    boundary="periodic")
    sector = configspace.enumerate_sector(L, N)
    Q = build_generator(sector, "asip", p).matrix.toarray()
    q_scale = np.abs(Q).max()
    occ = np.array(sector.configs)

    def violation(log_w):
        log_w = np.clip(log_w, -25.0, 25.0)
        w = np.concatenate([[0.0], log_w])
        log_mu = w[occ].sum(axis=1)
        mu = np.exp(log_mu - log_mu.max())
        mu /= mu.sum()
        return np.abs(mu @ Q).max() / q_scale

    rng = np.random.default_rng(seed)
    best = np.inf
    for s in range(n_starts):
        x0 = rng.normal(scale=2.0, size=N) if s else np.zeros(N)
        res = optimize.minimize(violation, x0, method="Nelder-Mead",
                                options={"xatol": 1e-12, "fatol": 1e-14,
                                         "maxiter": 20000})
        best = min(best, float(res.fun))
    return best


def qtazrp_limit_gap(params, n_max):
    """Worst absolute gap, over occupancy pairs up to n_max, between the
    rescaled left rate ``(1 - q^2) q^(4k - 1) x`` (asymmetric inclusion)
    and the zero-range left rate; vanishes as k grows."""
    q, k = params.q, params.k
    scale = (1.0 - q * q) * q ** (4.0 * k - 1.0)
    worst = 0.0
    for na in range(n_max + 1):
        for nb in range(n_max + 1):
            eta = np.array([na, nb])
            _, left = asip_edge_rates(eta, 1, params)
            target = qtazrp_rate(np.array([0, nb]), 1, q)
            worst = max(worst, abs(scale * left - target))
    return worst
