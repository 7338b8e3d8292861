"""Configuration types, tail sums, the g coordinate map, sector enumeration.

Site indices in the public API are 1-based because the site label enters the
formulas themselves (factors like ``q^{4 k i n}`` depend on i).  Edges are
labeled by their left site, so a chain of L sites has edges 1..L-1 (closed)
or 1..L with wrap-around (periodic).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import qcalc

__all__ = [
    "ModelParams", "as_discrete_config", "as_continuous_config",
    "move_particle", "tail_count", "partial_energy", "total_energy",
    "g_map", "g_inverse", "Sector", "enumerate_sector",
    "config_to_line", "config_from_line",
]

SECTOR_CAP = 2_000_000


@dataclass(frozen=True)
class ModelParams:
    """Parameter bundle read by every rate, measure and duality formula.

    Parameters
    ----------
    q : float
        Asymmetry parameter in (0, 1]; q = 1 is the symmetric case.
    k : float
        Attraction/shape parameter, k > 0.
    sigma : float, optional
        Asymmetry of the continuous (energy) models, sigma >= 0.
    L : int, optional
        Number of lattice sites, L >= 2.
    boundary : {"closed", "periodic"}, optional
    """

    q: float
    k: float
    sigma: float = 0.0
    L: int = 2
    boundary: str = "closed"

    def __post_init__(self):
        qcalc.check_q(self.q)
        if self.k <= 0:
            raise ValueError("k must be > 0")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.L < 2:
            raise ValueError("L must be >= 2")
        if self.boundary not in ("closed", "periodic"):
            raise ValueError("boundary must be 'closed' or 'periodic'")

    @property
    def two_k_integer(self):
        """True when 2k is a (positive) integer; some closed forms need it."""
        return abs(2.0 * self.k - round(2.0 * self.k)) < 1e-12

    @property
    def n_edges(self):
        return self.L if self.boundary == "periodic" else self.L - 1

    def edge_sites(self, i):
        """The (left, right) 1-based site pair of edge i."""
        if not 1 <= i <= self.n_edges:
            raise IndexError("edge index %d out of range" % i)
        return i, 1 if (self.boundary == "periodic" and i == self.L) else i + 1


def as_discrete_config(eta):
    eta = np.asarray(eta, dtype=int)
    if eta.ndim != 1 or (eta < 0).any():
        raise ValueError("occupation vector must be 1-d with entries >= 0")
    return eta


def as_continuous_config(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or (x < 0).any():
        raise ValueError("energy vector must be 1-d with entries >= 0")
    return x


def move_particle(eta, i, j):
    """Move one particle from site i to site j (1-based), returning a copy."""
    eta = as_discrete_config(eta)
    L = len(eta)
    if not (1 <= i <= L and 1 <= j <= L) or i == j:
        raise IndexError("bad site pair (%d, %d)" % (i, j))
    if eta[i - 1] == 0:
        raise ValueError("site %d is empty" % i)
    out = eta.copy()
    out[i - 1] -= 1
    out[j - 1] += 1
    return out


def tail_count(eta, i):
    """N_i: number of particles at sites i..L; N_{L+1} = 0."""
    L = len(eta)
    if not 1 <= i <= L + 1:
        raise IndexError("site index %d out of 1..%d" % (i, L + 1))
    return int(np.sum(eta[i - 1:]))


def partial_energy(x, i):
    """E_i: total energy at sites i..L; E_{L+1} = 0."""
    L = len(x)
    if not 1 <= i <= L + 1:
        raise IndexError("site index %d out of 1..%d" % (i, L + 1))
    return float(np.sum(x[i - 1:]))


def total_energy(x):
    return float(np.sum(x))


def g_map(x, sigma):
    """Coordinate change conjugating the asymmetric energy diffusion to the
    symmetric one.

    ``g_i(x) = (exp(-2 sigma E_{i+1}) - exp(-2 sigma E_i)) / (2 sigma)``
    with E_i the partial energies.  sigma = 0 returns x unchanged (the map
    tends to the identity).  The image always satisfies
    ``total_energy(g(x)) < 1/(2 sigma)``.
    """
    x = as_continuous_config(x)
    if sigma == 0.0:
        return x.copy()
    suffix = np.concatenate([np.cumsum(x[::-1])[::-1], [0.0]])
    return (np.exp(-2.0 * sigma * suffix[1:]) - np.exp(-2.0 * sigma * suffix[:-1])) \
        / (2.0 * sigma)


def g_inverse(z, sigma):
    """Inverse of g_map; z must have total energy < 1/(2 sigma)."""
    z = np.asarray(z, dtype=float)
    if sigma == 0.0:
        return z.copy()
    suffix = np.concatenate([np.cumsum(z[::-1])[::-1], [0.0]])
    top = 1.0 - 2.0 * sigma * suffix[1:]
    bot = 1.0 - 2.0 * sigma * suffix[:-1]
    if (bot <= 0.0).any() or (top <= 0.0).any():
        raise ValueError("z outside the image of g_map (needs total < 1/(2 sigma))")
    return np.log(top / bot) / (2.0 * sigma)


@dataclass(frozen=True)
class Sector:
    """All occupation vectors with given length L and total N, indexed.

    The ordering is lexicographic descending in the first coordinate, so the
    first config is (N, 0, ..., 0); matrix layouts are reproducible.
    """

    L: int
    N: int
    configs: tuple
    index: dict = field(repr=False)

    def __len__(self):
        return len(self.configs)

    def array(self):
        return np.array(self.configs, dtype=int)


def _compositions(L, N):
    if L == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in _compositions(L - 1, N - first):
            yield (first,) + rest


def enumerate_sector(L, N, cap=SECTOR_CAP):
    """Enumerate the (L, N) sector; raises if its size exceeds ``cap``."""
    if L < 1 or N < 0:
        raise ValueError("need L >= 1 and N >= 0")
    size = math.comb(N + L - 1, N)
    if size > cap:
        raise ValueError("sector size %d exceeds cap %d" % (size, cap))
    configs = tuple(_compositions(L, N))
    index = {c: j for j, c in enumerate(configs)}
    return Sector(L=L, N=N, configs=configs, index=index)


def config_to_line(v):
    """Flat comma-separated text form of a configuration."""
    v = np.asarray(v)
    if np.issubdtype(v.dtype, np.integer):
        return ",".join(str(int(a)) for a in v)
    return ",".join(repr(float(a)) for a in v)


def config_from_line(line, kind="discrete"):
    parts = [p for p in line.strip().split(",") if p != ""]
    if kind == "discrete":
        return as_discrete_config([int(p) for p in parts])
    return as_continuous_config([float(p) for p in parts])
