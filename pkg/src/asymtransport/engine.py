"""Exact continuous-time Markov chain simulation and deterministic ensembles.

The simulator is the standard exponential-clock construction: wait an
Exp(total rate) time, pick a transition with probability proportional to its
rate.  Edge rates are updated incrementally (a jump at edge i only changes
the rates of edges i-1, i, i+1), so each event costs O(1) rate evaluations.

Reproducibility contract: every replica draws from its own counter-based
stream keyed by (master seed, replica index), and ensemble reduction always
runs in replica order, so results are byte-identical for any worker count.
"""

from dataclasses import dataclass, field
import concurrent.futures
import math

import numpy as np

__all__ = [
    "SeedTree", "TrajectoryLog", "simulate_ctmc", "simulate_dual_walker",
    "run_ensemble", "EnsembleResult",
]

OCCUPANCY_CAP = 10_000


class SeedTree:
    """Derives independent, reproducible per-replica random streams from a
    master seed using a counter-based generator keyed (seed, replica)."""

    def __init__(self, master_seed):
        self.master_seed = int(master_seed)

    def stream(self, replica):
        key = np.array([self.master_seed & 0xFFFFFFFFFFFFFFFF,
                        int(replica) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass
class TrajectoryLog:
    """Ordered jump events of one discrete trajectory.

    Events are (time, edge, direction) with direction +1 for a rightward
    particle move across the edge and -1 for leftward.  The current J_i(t)
    across bond (i-1, i) is the signed number of crossings of edge i-1 up
    to time t, and always equals the change of the tail count N_i.
    """

    initial: np.ndarray
    t_final: float
    events: list = field(default_factory=list)
    final: np.ndarray = None

    def final_config(self):
        if self.final is not None:
            return self.final
        eta = np.asarray(self.initial).copy()
        for _, edge, direction in self.events:
            if direction > 0:
                eta[edge - 1] -= 1
                eta[edge] += 1
            else:
                eta[edge - 1] += 1
                eta[edge] -= 1
        return eta

    def current_at(self, i, t):
        """Net signed crossings of bond (i-1, i) up to time t; i = 1 (no bond
        to the left of the first site) gives 0 identically."""
        edge = i - 1
        if edge < 1:
            return 0
        return sum(int(d) for (s, e, d) in self.events if e == edge and s <= t)

    def to_lines(self):
        return ["%.17g,%d,%d" % ev for ev in self.events]

    @staticmethod
    def events_from_lines(lines):
        out = []
        for line in lines:
            t, e, d = line.strip().split(",")
            out.append((float(t), int(e), int(d)))
        return out


def simulate_ctmc(rates_spec, eta0, t_max, rng, occupancy_cap=OCCUPANCY_CAP,
                  record_events=True):
    """Simulate a discrete edge-jump process exactly.

    Parameters
    ----------
    rates_spec : callable or (array, array)
        Either ``rate_fn(eta, i) -> (rate_right, rate_left)`` for 1-based
        edge i on a closed chain, or a pair of occupancy-indexed lookup
        tables ``(right[na, nb], left[na, nb])`` giving the edge rates for
        left/right site occupancies (na, nb).  Tables make the hot loop a
        vectorized lookup and are the fast path for Monte Carlo runs.
    eta0 : array_like of int
    t_max : float
    rng : numpy Generator
    occupancy_cap : int
        Aborts if any site exceeds this (runaway clustering guard).
    record_events : bool
        When False the event list is left empty (currents are still
        recoverable from the tail-count change between the initial and
        final configurations).
    """
    eta = np.asarray(eta0, dtype=int).copy()
    L = len(eta)
    n_edges = L - 1
    tabular = not callable(rates_spec)
    if tabular:
        table_r, table_l = rates_spec
        cap = min(occupancy_cap, table_r.shape[0] - 1)
    else:
        cap = occupancy_cap
    rates = np.empty((n_edges, 2))

    def refresh():
        if tabular:
            rates[:, 0] = table_r[eta[:-1], eta[1:]]
            rates[:, 1] = table_l[eta[:-1], eta[1:]]
        else:
            for i in range(1, n_edges + 1):
                rates[i - 1] = rates_spec(eta, i)

    refresh()
    log = TrajectoryLog(initial=eta.copy(), t_final=t_max)
    flat = rates.ravel()
    t = 0.0
    while True:
        total = flat.sum()
        if total <= 0.0:
            log.final = eta.copy()
            return log
        t += rng.exponential(1.0 / total)
        if t > t_max:
            log.final = eta.copy()
            return log
        u = rng.random() * total
        j = int(np.searchsorted(np.cumsum(flat), u))
        edge, lr = divmod(min(j, 2 * n_edges - 1), 2)
        if lr == 0:
            eta[edge] -= 1
            eta[edge + 1] += 1
            if record_events:
                log.events.append((t, edge + 1, +1))
        else:
            eta[edge] += 1
            eta[edge + 1] -= 1
            if record_events:
                log.events.append((t, edge + 1, -1))
        if eta[edge] > cap or eta[edge + 1] > cap:
            raise RuntimeError("occupancy cap %d exceeded" % cap)
        if tabular:
            lo, hi = max(0, edge - 1), min(n_edges, edge + 2)
            sl = slice(lo, hi)
            rates[sl, 0] = table_r[eta[lo:hi], eta[lo + 1:hi + 1]]
            rates[sl, 1] = table_l[eta[lo:hi], eta[lo + 1:hi + 1]]
        else:
            for i in range(max(1, edge), min(n_edges, edge + 2) + 1):
                rates[i - 1] = rates_spec(eta, i)


def simulate_dual_walker(kind, start, t, params, rng):
    """Final position of a single dual walker on the integers.

    * ``asip_single``: jumps right at rate ``q^{2k}[2k]`` and left at rate
      ``q^{-2k}[2k]``; its displacement is exactly the difference of two
      independent Poisson counts, which is how it is sampled.
    * ``sip_single``: jumps both ways at rate 2k.
    """
    from .qcalc import q_number
    if kind == "asip_single":
        q, k = params.q, params.k
        mu_r = q_number(2 * k, q) * q ** (2 * k) * t
        mu_l = q_number(2 * k, q) * q ** (-2 * k) * t
    elif kind == "sip_single":
        mu_r = mu_l = 2.0 * params.k * t
    else:
        raise ValueError("unknown walker kind %r" % (kind,))
    return int(start + rng.poisson(mu_r) - rng.poisson(mu_l))


@dataclass
class EnsembleResult:
    mean: np.ndarray
    se: np.ndarray
    replicas: int

    def z_scores(self, reference):
        return (np.asarray(reference) - self.mean) / self.se


def run_ensemble(job, replicas, master_seed, workers=1):
    """Run ``job(rng, replica) -> scalar or vector`` over independent
    replicas and reduce to mean and standard error.

    The result is a deterministic function of (job, replicas, master_seed):
    replica r always uses the stream keyed (master_seed, r), and the
    reduction sums a preallocated array in index order, so scheduling and
    worker count cannot change the output bytes.
    """
    if replicas < 1:
        raise ValueError("need replicas >= 1")
    tree = SeedTree(master_seed)

    def one(r):
        return np.atleast_1d(np.asarray(job(tree.stream(r), r), dtype=float))

    first = one(0)
    values = np.empty((replicas,) + first.shape)
    values[0] = first
    rest = range(1, replicas)
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
            for r, v in zip(rest, ex.map(one, rest)):
                values[r] = v
    else:
        for r in rest:
            values[r] = one(r)
    mean = values.mean(axis=0)
    if replicas > 1:
        se = values.std(axis=0, ddof=1) / math.sqrt(replicas)
    else:
        se = np.full_like(mean, np.nan)
    return EnsembleResult(mean=mean, se=se, replicas=replicas)
