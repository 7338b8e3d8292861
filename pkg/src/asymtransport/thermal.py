"""Edge redistribution laws and instantaneous-thermalization dynamics.

A thermalized edge update does not move one particle (or an infinitesimal
amount of energy); it resamples the whole edge content from the stationary
law conditioned on the edge total:

* discrete, asymmetric: a q-deformed Beta-Binomial split;
* discrete, symmetric: a Beta-Binomial(n_tot, 2k, 2k) split;
* continuous, asymmetric: an exponentially tilted Beta split of the edge
  energy; at k = 1/2 and vanishing tilt this is the classical uniform
  energy redistribution model.

Each edge carries an exponential rate-1 clock.
"""

import math

import numpy as np
from scipy import integrate, stats

from .qcalc import q_binomial
from . import models

__all__ = [
    "qbetabinom_weights", "qbetabinom_pmf", "sample_qbetabinom",
    "betabinom_pmf", "tilted_beta_pdf", "tilted_beta_mean",
    "sample_tilted_beta", "th_asip_generator", "th_sip_generator",
    "th_abep_step", "akmp_step", "simulate_thermal_continuous",
]


def qbetabinom_weights(n_tot, q, k):
    """Normalized pmf vector (length n_tot + 1) of the q-deformed
    Beta-Binomial split of an edge carrying n_tot particles.

    ``pmf(r) propto q^(-4kr) binom_q(r + 2k - 1, r)
    binom_q(2k + n_tot - r - 1, n_tot - r)``; this equals the two-site
    product-measure law conditioned on the sum, for any pair of adjacent
    sites (the site-dependent factors cancel).
    """
    r = np.arange(n_tot + 1)
    w = np.array([
        q ** (-4.0 * k * rr)
        * q_binomial(rr + 2 * k - 1, rr, q)
        * q_binomial(2 * k + (n_tot - rr) - 1, n_tot - rr, q)
        for rr in r
    ])
    return w / w.sum()


def qbetabinom_pmf(r, n_tot, q, k):
    if not 0 <= r <= n_tot:
        return 0.0
    return float(qbetabinom_weights(n_tot, q, k)[r])


def sample_qbetabinom(n_tot, q, k, rng, size=None):
    """Exact inverse-CDF sampling over the finite support."""
    cdf = np.cumsum(qbetabinom_weights(n_tot, q, k))
    u = rng.random(size)
    return int(np.searchsorted(cdf, u)) if size is None \
        else np.searchsorted(cdf, u)


def betabinom_pmf(r, n_tot, k):
    """Symmetric-limit split law: Beta-Binomial(n_tot, 2k, 2k)."""
    return float(stats.betabinom.pmf(r, n_tot, 2 * k, 2 * k))


_TILT_SMALL = 1e-8
_norm_cache = {}
_cdf_cache = {}


def _tilted_beta_unnorm(w, a, k):
    """Unnormalized density on [0,1] with tilt a = 2 sigma E."""
    w = np.asarray(w, dtype=float)
    core = np.expm1(a * w) * (-np.expm1(-a * (1.0 - w)))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.exp(a * w) * np.where(core > 0, core, 0.0) ** (2 * k - 1)
    return np.where((w < 0) | (w > 1), 0.0, np.nan_to_num(out))


def tilted_beta_pdf(w, E, sigma, k):
    """Density of the energy fraction kept by the left site after a
    thermalized edge update of total energy E.

    The tilt parameter is ``2 sigma E``; as it vanishes the law becomes
    Beta(2k, 2k), and at k = 1/2 the closed form
    ``2 sigma E e^(2 sigma E w) / (e^(2 sigma E) - 1)`` holds.
    """
    if E <= 0:
        raise ValueError("edge energy must be > 0")
    a = 2.0 * sigma * E
    if a < _TILT_SMALL:
        return float(stats.beta.pdf(w, 2 * k, 2 * k))
    if abs(k - 0.5) < 1e-14:
        return float(a * math.exp(a * np.clip(w, 0, 1)) / math.expm1(a)) \
            if 0 <= w <= 1 else 0.0
    key = (a, float(k))
    if key not in _norm_cache:
        val, _ = integrate.quad(lambda u: float(_tilted_beta_unnorm(u, a, k)),
                                0.0, 1.0, epsabs=1e-12, epsrel=1e-10, limit=200)
        _norm_cache[key] = val
    return float(_tilted_beta_unnorm(w, a, k)) / _norm_cache[key]


def tilted_beta_mean(E, sigma, k):
    """Mean fraction kept by the left site, by adaptive quadrature."""
    val, _ = integrate.quad(lambda w: w * tilted_beta_pdf(w, E, sigma, k),
                            0.0, 1.0, epsabs=1e-11, epsrel=1e-10, limit=200)
    return val


def _tabulated_inverse_cdf(a, k, n_grid=4097):
    key = (a, float(k), n_grid)
    if key not in _cdf_cache:
        grid = np.linspace(0.0, 1.0, n_grid)
        pdf = _tilted_beta_unnorm(grid, a, k)
        cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) * 0.5)])
        cdf /= cdf[-1]
        _cdf_cache[key] = (grid, cdf)
    return _cdf_cache[key]


def sample_tilted_beta(E, sigma, k, rng, size=None):
    """Sample the tilted split law.

    k = 1/2 uses the exact closed-form inverse CDF
    ``w = ln(1 + u (e^a - 1)) / a``; other k use a deterministic tabulated
    inverse CDF so that results depend only on the stream state.
    """
    if E <= 0:
        raise ValueError("edge energy must be > 0")
    a = 2.0 * sigma * E
    u = rng.random(size)
    if a < _TILT_SMALL:
        return stats.beta.ppf(u, 2 * k, 2 * k) if size is not None \
            else float(stats.beta.ppf(u, 2 * k, 2 * k))
    if abs(k - 0.5) < 1e-14:
        w = np.log1p(u * math.expm1(a)) / a
        return float(w) if size is None else w
    grid, cdf = _tabulated_inverse_cdf(a, k)
    w = np.interp(u, cdf, grid)
    return float(w) if size is None else w


def th_asip_generator(sector, params):
    """Thermalized discrete generator: each edge redistributes its particle
    total by the q-deformed Beta-Binomial law at rate 1."""
    return _thermal_generator(
        sector, params.n_edges, params.boundary,
        lambda n_tot: qbetabinom_weights(n_tot, params.q, params.k))


def th_sip_generator(sector, k, boundary="closed"):
    """Symmetric thermalized generator: Beta-Binomial(n_tot, 2k, 2k) rows;
    at k = 1/2 every row is a discrete uniform split."""
    n_edges = sector.L if boundary == "periodic" else sector.L - 1
    return _thermal_generator(
        sector, n_edges, boundary,
        lambda n_tot: stats.betabinom.pmf(np.arange(n_tot + 1), n_tot,
                                          2 * k, 2 * k))


def _thermal_generator(sector, n_edges, boundary, law):
    rows, cols, rates = [], [], []
    L = sector.L
    for a, eta in enumerate(sector.configs):
        for i in range(1, n_edges + 1):
            si = i - 1
            sj = 0 if (boundary == "periodic" and i == L) else i
            n_tot = eta[si] + eta[sj]
            pmf = law(n_tot)
            for r in range(n_tot + 1):
                if r == eta[si]:
                    continue
                tgt = list(eta)
                tgt[si], tgt[sj] = r, n_tot - r
                rows.append(a)
                cols.append(sector.index[tuple(tgt)])
                rates.append(float(pmf[r]))
    return models.SparseRateMatrix(len(sector), rows, cols, rates)


def th_abep_step(x, edge, params, rng):
    """One thermalized continuous edge update: replace (x_i, x_{i+1}) by
    (wE, (1-w)E) with E the edge total and w from the tilted split law.
    Energy is conserved exactly; E = 0 leaves x unchanged."""
    x = np.asarray(x, dtype=float).copy()
    i = edge - 1
    E = x[i] + x[i + 1]
    if E <= 0:
        return x
    w = sample_tilted_beta(E, params.sigma, params.k, rng)
    x[i], x[i + 1] = w * E, (1.0 - w) * E
    return x


def akmp_step(x, edge, sigma, rng):
    """Asymmetric uniform-split energy redistribution (the k = 1/2 case)."""
    p = models.ModelParams(q=1.0, k=0.5, sigma=sigma, L=max(2, len(x)))
    return th_abep_step(x, edge, p, rng)


def simulate_thermal_continuous(x0, t_max, params, rng):
    """Continuous-time thermal dynamics: each edge updates at rate 1.

    Returns (final config, events) with events a list of
    (time, edge, w) records.
    """
    x = np.asarray(x0, dtype=float).copy()
    n_edges = len(x) - 1
    t = 0.0
    events = []
    while True:
        t += rng.exponential(1.0 / n_edges)
        if t > t_max:
            return x, events
        edge = int(rng.integers(1, n_edges + 1))
        E = x[edge - 1] + x[edge]
        if E > 0:
            w = sample_tilted_beta(E, params.sigma, params.k, rng)
            x[edge - 1], x[edge] = w * E, (1.0 - w) * E
            events.append((t, edge, w))
