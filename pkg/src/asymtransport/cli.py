"""Command line interface: identity verification suites, exact-simulation
runs, current-moment tables, rate-function grids, and redistribution
sampler diagnostics.

All numeric output is CSV with fixed headers; reports are plain text, one
line per identity.  An identical experiment description + seed gives
byte-identical outputs for any worker count.
"""

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import (configspace, currents, dualitylab, engine, models, qalgebra,
               thermal)
from .configspace import ModelParams
from .dualitylab import CheckReport

__all__ = ["main", "ExperimentSpec", "run_suite", "SUITES"]

SUITES = ("duality", "algebra", "measures", "thermal", "limits")

STOCHASTIC_COMMANDS = ("simulate", "current", "thermalize")


@dataclass
class ExperimentSpec:
    """Flat description of one CLI run; round-trips losslessly through the
    sectioned key-value config file format."""

    command: str = "verify"
    suite: str = "duality"
    model: str = "asip"
    q: float = 0.8
    k: float = 0.5
    sigma: float = 0.5
    L: int = 4
    n: int = 3
    init: str = ""
    t: float = 1.0
    times: str = ""
    bond: int = 0
    window: int = 40
    formula: str = "q-step"
    bernoulli: float = 0.5
    x_min: float = 0.0
    x_max: float = 4.0
    points: int = 21
    sampler: str = "qbetabinom"
    alpha: float = 0.3
    energy: float = 1.0
    bins: int = 20
    samples: int = 10000
    replicas: int = 1000
    seed: int = -1
    workers: int = 1
    perturb_q: float = 0.0
    out: str = "-"

    def save(self, path):
        cp = configparser.ConfigParser()
        cp[self.command] = {
            f.name: repr(getattr(self, f.name)) for f in fields(self)
            if f.name != "command"
        }
        with open(path, "w") as fh:
            cp.write(fh)

    @classmethod
    def load(cls, path, command):
        cp = configparser.ConfigParser()
        if not cp.read(path):
            raise SystemExit("cannot read config file %r" % path)
        spec = cls(command=command)
        if command not in cp:
            return spec
        for f in fields(cls):
            if f.name == "command" or f.name not in cp[command]:
                continue
            raw = cp[command][f.name]
            if f.type is str or f.name in ("init", "times", "out"):
                setattr(spec, f.name, raw.strip("'\""))
            elif f.type is int:
                setattr(spec, f.name, int(raw))
            else:
                setattr(spec, f.name, float(raw))
        return spec


def _open_out(path):
    if path in ("-", ""):
        return sys.stdout, False
    return open(path, "w"), True


def _emit(path, lines):
    fh, close = _open_out(path)
    for line in lines:
        fh.write(line + "\n")
    if close:
        fh.close()


def _fmt(x):
    return "%.17g" % float(x)


# ---------------------------------------------------------------- verify

def _suite_duality(p, p_bad):
    """p_bad carries the (possibly perturbed) q used on the kernel side."""
    out = []
    for L, ne, nx in ((3, 3, 2), (4, 4, 3)):
        s_eta = configspace.enumerate_sector(L, ne)
        s_xi = configspace.enumerate_sector(L, nx)
        pl = ModelParams(q=p.q, k=p.k, L=L)
        pl_bad = ModelParams(q=p_bad.q, k=p_bad.k, L=L)
        gen_eta = models.build_generator(s_eta, "asip", pl)
        gen_xi = models.build_generator(s_xi, "asip", pl)
        D = dualitylab.d_asip_matrix(s_eta, s_xi, pl_bad)
        out.append(CheckReport(
            name="self-duality",
            params=dict(L=L, n_eta=ne, n_xi=nx, q=p.q, k=p.k),
            residual=dualitylab.generator_duality_residual(gen_eta, gen_xi, D),
            threshold=1e-10))
    eta = np.array([2, 0, 3])
    xi = np.array([1, 0, 2])
    prod = dualitylab.d_asip(eta, xi, p_bad, form="product")
    poch = dualitylab.d_asip(eta, xi, p, form="pochhammer")
    factor = dualitylab.form_conversion_factor(xi, p)
    out.append(CheckReport(
        name="kernel-form-conversion", params=dict(q=p.q, k=p.k),
        residual=abs(prod - factor * poch) / abs(prod), threshold=1e-12))
    single = dualitylab.d_asip_single(eta, 1, p_bad)
    kernel = dualitylab.d_asip(eta, dualitylab.dual_occupation([1], 3), p)
    out.append(CheckReport(
        name="one-walker-closed-form", params=dict(q=p.q, k=p.k),
        residual=abs(single - kernel) / max(1.0, abs(kernel)),
        threshold=1e-12))
    pc = ModelParams(q=p_bad.q if p_bad.q != p.q else 1.0, k=p.k,
                     sigma=p.sigma, L=3)
    if pc.q == 1.0:
        x = np.array([0.7, 1.1, 0.4])
        out.append(dualitylab.verify_abep_sip_duality(x, xi, pc))
        out.append(dualitylab.verify_g_map_conjugation(
            lambda z: float(z[0] ** 2 * z[1] + z[2]), x, pc))
        errs, _ = dualitylab.duality_scaling_limit_check(
            np.array([1.0, 2.0]), np.array([1, 0]), p.sigma, p.k,
            [100, 1000])
        out.append(CheckReport(
            name="kernel-scaling-limit", params=dict(sigma=p.sigma, k=p.k),
            residual=errs[-1] if errs[-1] < errs[0] else 1.0,
            threshold=1e-2))
    else:
        out.append(CheckReport(
            name="abep-sip-duality", params=dict(q=pc.q),
            residual=abs(pc.q - 1.0), threshold=1e-12))
    return out


def _suite_algebra(p, p_bad):
    L, n_max = 3, 3
    out = []
    rates = qalgebra.derive_generator(L, p_bad.k, p_bad.q, n_max)
    worst = 0.0
    for ne in range(0, n_max + 1):
        sector = configspace.enumerate_sector(L, ne)
        idx = qalgebra.sector_indices(sector, n_max)
        block = rates[np.ix_(idx, idx)]
        ref = models.build_generator(
            sector, "asip", ModelParams(q=p.q, k=p.k, L=L)).matrix.toarray()
        worst = max(worst, np.abs(block - ref).max()
                    / max(1.0, np.abs(ref).max()))
    out.append(CheckReport(
        name="generator-from-hamiltonian", params=dict(L=L, q=p.q, k=p.k),
        residual=worst, threshold=1e-10))

    D = qalgebra.derive_duality(L, p_bad.k, p_bad.q, n_max)
    worst = 0.0
    for ne in range(1, n_max + 1):
        for nx in range(0, ne + 1):
            s_eta = configspace.enumerate_sector(L, ne)
            s_xi = configspace.enumerate_sector(L, nx)
            ref = dualitylab.d_asip_matrix(
                s_eta, s_xi, ModelParams(q=p.q, k=p.k, L=L))
            block = D[np.ix_(qalgebra.sector_indices(s_eta, n_max),
                             qalgebra.sector_indices(s_xi, n_max))]
            worst = max(worst, np.abs(block - ref).max()
                        / max(1.0, np.abs(ref).max()))
    out.append(CheckReport(
        name="duality-from-symmetry", params=dict(L=L, q=p.q, k=p.k),
        residual=worst, threshold=1e-10))

    H = qalgebra.build_hamiltonian(L, p.k, p.q, n_max)
    sym = qalgebra.coproduct_symmetries(L, p.k, p.q, n_max)
    worst = max(qalgebra.sector_symmetry_residual(H, sym[name], L, n_max,
                                                  n_max - 1)
                for name in ("Kplus", "Kminus", "K0", "E", "F"))
    out.append(CheckReport(
        name="hamiltonian-symmetries", params=dict(L=L, q=p.q, k=p.k),
        residual=worst, threshold=1e-10))

    S_exp = qalgebra.splus_from_qexp(L, p.k, p.q, n_max)
    S_cf = qalgebra.splus_closed_form(L, p.k, p.q, n_max)
    out.append(CheckReport(
        name="exponential-symmetry-closed-form",
        params=dict(L=L, q=p.q, k=p.k),
        residual=np.abs(S_exp - S_cf).max() / max(1.0, np.abs(S_cf).max()),
        threshold=1e-10))

    from .qcalc import q_number
    C = qalgebra.casimir_matrix(p.k, p.q, 12)
    scalar = q_number(p.k, p.q) * q_number(p.k - 1.0, p.q)
    out.append(CheckReport(
        name="casimir-scalar", params=dict(q=p.q, k=p.k),
        residual=np.abs(C - scalar * np.eye(13)).max() / max(1.0, abs(scalar)),
        threshold=1e-10))
    return out


def _suite_measures(p, p_bad):
    out = []
    L, N = 3, 3
    alpha = 0.3 * models.alpha_max(p)
    sector = configspace.enumerate_sector(L, N)

    def weight(eta):
        return math.exp(sum(
            math.log(models.asip_marginal_pmf(i + 1, int(n), p_bad, alpha))
            for i, n in enumerate(eta)))

    out.append(CheckReport(
        name="detailed-balance", params=dict(L=L, N=N, q=p.q, k=p.k),
        residual=models.detailed_balance_residual(sector, "asip", p3(p, L),
                                                  weight),
        threshold=1e-12))
    worst_z = 0.0
    worst_m = 0.0
    for i in (0, 1, 2):
        z_series = models.asip_marginal_Z(i, p, alpha)
        z_closed = models.asip_marginal_Z_closed(i, p_bad, alpha)
        worst_z = max(worst_z, abs(z_series - z_closed) / abs(z_series))
        m_series = models.asip_marginal_mean(i, p, alpha)
        m_closed = models.asip_marginal_mean_closed(i, p_bad, alpha)
        worst_m = max(worst_m, abs(m_series - m_closed)
                      / max(1.0, abs(m_series)))
    out.append(CheckReport(
        name="normalization-closed-form", params=dict(q=p.q, k=p.k),
        residual=worst_z, threshold=1e-10))
    out.append(CheckReport(
        name="mean-occupation-closed-form", params=dict(q=p.q, k=p.k),
        residual=worst_m, threshold=1e-10))
    gap = models.ring_product_measure_gap(3, 3, p, n_starts=4)
    out.append(CheckReport(
        name="ring-has-no-product-measure", params=dict(L=3, N=3, q=p.q),
        residual=1e-6 / gap, threshold=1.0))
    return out


def _suite_thermal(p, p_bad):
    out = []
    n_tot, i, alpha_frac = 5, 1, 0.3
    alpha = alpha_frac * models.alpha_max(p)
    pm = np.array([models.asip_marginal_pmf(i, r, p, alpha)
                   * models.asip_marginal_pmf(i + 1, n_tot - r, p, alpha)
                   for r in range(n_tot + 1)])
    pm /= pm.sum()
    ref = np.array([thermal.qbetabinom_pmf(r, n_tot, p_bad.q, p_bad.k)
                    for r in range(n_tot + 1)])
    out.append(CheckReport(
        name="split-law-is-conditioned-product",
        params=dict(n=n_tot, q=p.q, k=p.k),
        residual=np.abs(pm - ref).max(), threshold=1e-12))

    L, N = 3, 3
    sector = configspace.enumerate_sector(L, N)
    gen = thermal.th_asip_generator(sector, p3(p, L))
    mu = np.array([math.exp(sum(
        math.log(models.asip_marginal_pmf(j + 1, int(n), p_bad, alpha))
        for j, n in enumerate(c))) for c in sector.configs])
    mu /= mu.sum()
    out.append(CheckReport(
        name="thermal-stationarity", params=dict(L=L, N=N, q=p.q, k=p.k),
        residual=float(np.abs(mu @ gen.matrix.toarray()).max()),
        threshold=1e-10))

    out.append(dualitylab.verify_thermal_selfduality(3, 3, 2, p3(p_bad, 3)))
    pc = ModelParams(q=1.0, k=p.k, sigma=p.sigma, L=3)
    out.append(dualitylab.thermal_continuous_duality_residual(
        np.array([0.7, 1.1, 0.4]), np.array([1, 0, 2]), pc))

    worst = 0.0
    for sE in (0.5, 1.0, 4.0):
        for k in (0.5, 1.0):
            m = thermal.tilted_beta_mean(sE / p.sigma, p.sigma, k)
            worst = max(worst, 0.5 - m)
    out.append(CheckReport(
        name="left-bias-of-split-mean", params=dict(sigma=p.sigma),
        residual=max(worst, 0.0), threshold=1e-12))
    return out


def _suite_limits(p, p_bad):
    out = []
    eta = np.array([3, 1])
    pq1 = ModelParams(q=1.0 - abs(p_bad.q - p.q), k=p.k, L=2)
    r, l = models.asip_edge_rates(eta, 1, pq1)
    rs, ls = models.sip_edge_rates(eta, 1, p.k)
    out.append(CheckReport(
        name="symmetric-limit-rates", params=dict(k=p.k),
        residual=max(abs(r - rs), abs(l - ls)) / max(1.0, rs, ls),
        threshold=1e-12))
    gaps = [models.qtazrp_limit_gap(ModelParams(q=0.7, k=k), 6)
            for k in (2, 4, 8, 16)]
    monotone = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    out.append(CheckReport(
        name="zero-range-limit", params=dict(q=0.7, k=16),
        residual=gaps[-1] + (p_bad.q - p.q) if monotone else 1.0,
        threshold=1e-3))
    a, b = 1.0, 1.0
    u, v = models.adep_relax_pair(a, b, 1.0)
    A = 0.5 * math.log(0.5 * (1.0 + math.exp(2.0 * (a + b))))
    out.append(CheckReport(
        name="two-site-flow-fixed-point", params=dict(sigma=1.0),
        residual=max(abs(u - A), abs(v - (a + b - A))), threshold=1e-8))
    ut, vt = models.adep_relax_pair(a, b, 1.0, kind="tadep")
    out.append(CheckReport(
        name="totally-asymmetric-flow-fixed-point", params=dict(sigma=1.0),
        residual=max(abs(ut - (a + b)), abs(vt)), threshold=1e-8))
    return out


def p3(p, L):
    return ModelParams(q=p.q, k=p.k, sigma=p.sigma, L=L)


_SUITE_FNS = {
    "duality": _suite_duality,
    "algebra": _suite_algebra,
    "measures": _suite_measures,
    "thermal": _suite_thermal,
    "limits": _suite_limits,
}


def run_suite(suite, spec):
    """Run one verification suite; returns the list of check reports."""
    p = ModelParams(q=spec.q, k=spec.k, sigma=spec.sigma)
    p_bad = ModelParams(q=spec.q + spec.perturb_q, k=spec.k,
                        sigma=spec.sigma)
    return _SUITE_FNS[suite](p, p_bad)


def cmd_verify(spec):
    suites = SUITES if spec.suite == "all" else (spec.suite,)
    reports = []
    for suite in suites:
        reports.extend(run_suite(suite, spec))
    lines = ["[%s]" % "+".join(suites)] + [str(r) for r in reports]
    ok = all(r.passed for r in reports)
    lines.append("result: %s (%d checks)" % ("pass" if ok else "FAIL",
                                             len(reports)))
    _emit(spec.out, lines)
    return 0 if ok else 1


# -------------------------------------------------------------- simulate

def _initial_config(spec):
    if spec.init:
        eta = np.asarray(configspace.config_from_line(spec.init))
        if len(eta) != spec.L and spec.L != ExperimentSpec.L:
            raise SystemExit("init length %d does not match L=%d"
                             % (len(eta), spec.L))
        return eta
    if spec.n > spec.L:
        raise SystemExit("default initial condition needs n <= L "
                         "(one particle per site from the left)")
    return np.array([1] * spec.n + [0] * (spec.L - spec.n))


def cmd_simulate(spec):
    _require_seed(spec)
    if spec.t <= 0:
        raise SystemExit("need a positive time horizon")
    eta0 = _initial_config(spec)
    p = ModelParams(q=spec.q, k=spec.k, sigma=spec.sigma, L=len(eta0))
    tables = models.edge_rate_table(spec.model, p,
                                    n_max=int(eta0.sum()))
    tree = engine.SeedTree(spec.seed)
    lines = ["replica,time,edge,direction"]
    for r in range(spec.replicas):
        log = engine.simulate_ctmc(tables, eta0, spec.t, tree.stream(r))
        for t, edge, direction in log.events:
            lines.append("%d,%s,%d,%d" % (r, _fmt(t), edge, direction))
    _emit(spec.out, lines)
    return 0


# --------------------------------------------------------------- current

def cmd_current(spec):
    _require_seed(spec)
    p = ModelParams(q=spec.q, k=spec.k, sigma=spec.sigma)
    W = spec.window
    half = W // 2
    rows = ["formula,param_hash,theory,mc,se,z"]
    if spec.formula == "q-step":
        eta0 = np.array([2] * half + [0] * (W - half))
        theory = currents.q_moment_fixed_config(eta0, -half, spec.bond,
                                                spec.t, p)
        tables = models.edge_rate_table("asip", p, n_max=int(eta0.sum()))
        digest = currents.param_hash("q-step", spec.q, spec.k, spec.t, W,
                                     spec.bond)

        def init(rng):
            return eta0
    elif spec.formula == "q-product":
        mu = [1.0 - spec.bernoulli, spec.bernoulli]
        theory = currents.q_moment_product(mu, spec.t, p)
        tables = models.edge_rate_table("asip", p, n_max=W)
        digest = currents.param_hash("q-product", spec.q, spec.k, spec.t, W,
                                     spec.bernoulli)

        def init(rng):
            return (rng.random(W) < spec.bernoulli).astype(int)
    elif spec.formula == "energy-product":
        lam_p = math.exp(2.0 * spec.sigma * spec.energy)
        lam_m = math.exp(-2.0 * spec.sigma * spec.energy)
        theory = currents.abep_moment_product(lam_p, lam_m, spec.t, spec.k)
        bessel = currents.abep_moment_fixed(
            np.full(4 * spec.window, spec.energy), -2 * spec.window, 0,
            spec.t, spec.k, spec.sigma)
        rows.append("%s,%s,%s,%s,%s,%s" % (
            "energy-product", currents.param_hash(
                "energy-product", spec.sigma, spec.k, spec.t, spec.energy),
            _fmt(theory), _fmt(bessel), _fmt(0.0),
            _fmt(abs(theory - bessel))))
        _emit(spec.out, rows)
        return 0
    else:
        raise SystemExit("unknown formula %r" % spec.formula)

    def job(rng, r):
        eta = init(rng)
        log = engine.simulate_ctmc(tables, eta, spec.t, rng,
                                   record_events=False)
        keep = half + spec.bond
        J = log.final_config()[keep:].sum() - eta[keep:].sum()
        return spec.q ** (2.0 * J)

    res = engine.run_ensemble(job, spec.replicas, spec.seed,
                              workers=spec.workers)
    mc, se = float(res.mean[0]), float(res.se[0])
    row = currents.comparison_row(spec.formula, digest, theory, mc, se)
    rows.append("%s,%s,%s,%s,%s,%s" % (
        row["formula"], row["param_hash"], _fmt(row["theory"]),
        _fmt(row["mc"]), _fmt(row["se"]), _fmt(row["z"])))
    _emit(spec.out, rows)
    return 0


# ------------------------------------------------------------------ rate

def cmd_rate(spec):
    if spec.points < 1:
        raise SystemExit("need a nonempty grid (points >= 1)")
    if spec.model == "asip":
        a, b = currents.walker_rates(spec.q, spec.k)
        mu = [1.0 - spec.bernoulli, spec.bernoulli]
        _, lam_inv = currents.marginal_q_factors(mu, spec.q)
        log_factor = math.log(spec.q ** (-4.0 * spec.k) * lam_inv)
    elif spec.model == "sip":
        a = b = 2.0 * spec.k
        log_factor = 2.0 * spec.sigma * spec.energy
    else:
        raise SystemExit("rate tables exist for models asip and sip")
    xs = np.linspace(spec.x_min, spec.x_max, spec.points)
    lines = ["x,I(x)"]
    lines += ["%s,%s" % (_fmt(x), _fmt(currents.rate_function(x, a, b)))
              for x in xs]
    limit = currents.growth_rate(log_factor, a, b)
    inf = 0.0 if a >= b else currents.rate_function(0.0, a, b)
    lines.append("sup,inf,limit")
    lines.append("%s,%s,%s" % (_fmt(limit), _fmt(inf), _fmt(limit)))
    _emit(spec.out, lines)
    return 0


# ------------------------------------------------------------ thermalize

def cmd_thermalize(spec):
    _require_seed(spec)
    rng = engine.SeedTree(spec.seed).stream(0)
    lines = ["bin,empirical,exact"]
    if spec.sampler == "qbetabinom":
        draws = thermal.sample_qbetabinom(spec.n, spec.q, spec.k, rng,
                                          size=spec.samples)
        counts = np.bincount(draws, minlength=spec.n + 1) / spec.samples
        for r in range(spec.n + 1):
            lines.append("%d,%s,%s" % (
                r, _fmt(counts[r]),
                _fmt(thermal.qbetabinom_pmf(r, spec.n, spec.q, spec.k))))
    elif spec.sampler in ("tilted-beta", "kmp"):
        sigma = spec.sigma if spec.sampler == "tilted-beta" else 0.0
        k = spec.k if spec.sampler == "tilted-beta" else 0.5
        draws = thermal.sample_tilted_beta(spec.energy, sigma, k, rng,
                                           size=spec.samples)
        edges = np.linspace(0.0, 1.0, spec.bins + 1)
        counts, _ = np.histogram(draws, bins=edges)
        from scipy import integrate
        for j in range(spec.bins):
            mass, _ = integrate.quad(
                lambda w: thermal.tilted_beta_pdf(w, spec.energy, sigma, k),
                edges[j], edges[j + 1], epsabs=1e-12, epsrel=1e-10,
                limit=200)
            lines.append("%s,%s,%s" % (
                _fmt(0.5 * (edges[j] + edges[j + 1])),
                _fmt(counts[j] / spec.samples), _fmt(mass)))
    else:
        raise SystemExit("unknown sampler %r" % spec.sampler)
    _emit(spec.out, lines)
    return 0


# ------------------------------------------------------------------ main

def _require_seed(spec):
    if spec.seed < 0:
        raise SystemExit("--seed is required for stochastic commands")


def _add_common(sub):
    sub.add_argument("--config", default=None,
                     help="sectioned key-value file with per-command defaults")
    sub.add_argument("--q", type=float)
    sub.add_argument("--k", type=float)
    sub.add_argument("--sigma", type=float)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--out")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="asymtransport",
        description="asymmetric transport models: verification, exact "
                    "simulation, current moments, rate functions, "
                    "redistribution samplers")
    sp = ap.add_subparsers(dest="command", required=True)

    v = sp.add_parser("verify", help="run an identity verification suite")
    _add_common(v)
    v.add_argument("--suite", choices=SUITES + ("all",))
    v.add_argument("--perturb-q", type=float, dest="perturb_q",
                   help="fault injection: offset q on one side of each "
                        "identity; a nonzero value must make the suite fail")

    s = sp.add_parser("simulate", help="exact trajectory ensembles")
    _add_common(s)
    s.add_argument("--model", choices=("asip", "sip", "qtazrp"))
    s.add_argument("--L", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--init", help="explicit initial occupancies, "
                                  "comma separated")
    s.add_argument("--t", type=float)
    s.add_argument("--replicas", type=int)

    c = sp.add_parser("current", help="theory-vs-simulation current moments")
    _add_common(c)
    c.add_argument("--formula",
                   choices=("q-step", "q-product", "energy-product"))
    c.add_argument("--t", type=float)
    c.add_argument("--bond", type=int)
    c.add_argument("--window", type=int)
    c.add_argument("--bernoulli", type=float)
    c.add_argument("--energy", type=float)
    c.add_argument("--replicas", type=int)
    c.add_argument("--workers", type=int)

    r = sp.add_parser("rate", help="rate function grid and growth rate")
    _add_common(r)
    r.add_argument("--model", choices=("asip", "sip"))
    r.add_argument("--x-min", type=float, dest="x_min")
    r.add_argument("--x-max", type=float, dest="x_max")
    r.add_argument("--points", type=int)
    r.add_argument("--bernoulli", type=float)
    r.add_argument("--energy", type=float)

    t = sp.add_parser("thermalize", help="redistribution sampler diagnostics")
    _add_common(t)
    t.add_argument("--sampler", choices=("qbetabinom", "tilted-beta", "kmp"))
    t.add_argument("--n", type=int)
    t.add_argument("--energy", type=float)
    t.add_argument("--bins", type=int)
    t.add_argument("--samples", type=int)

    return ap


_COMMANDS = {
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "current": cmd_current,
    "rate": cmd_rate,
    "thermalize": cmd_thermalize,
}


def spec_from_args(args):
    if getattr(args, "config", None):
        spec = ExperimentSpec.load(args.config, args.command)
    else:
        spec = ExperimentSpec(command=args.command)
    for f in fields(ExperimentSpec):
        val = getattr(args, f.name, None)
        if val is not None:
            setattr(spec, f.name, val)
    return spec


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = spec_from_args(args)
    return _COMMANDS[spec.command](spec)


if __name__ == "__main__":
    sys.exit(main())
