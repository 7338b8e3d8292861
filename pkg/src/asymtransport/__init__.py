"""Asymmetric interacting particle and energy transport models.

Exact q-deformed transition rates, reversible measures, duality kernels,
the deformed-algebra construction behind them, thermalized (redistribution)
dynamics, and closed-form exponential moments of currents, together with
machine checks of every identity against independent numerics and
stochastic simulation.
"""

from . import (configspace, currents, dualitylab, engine, models, qalgebra,
               qcalc, thermal)
from .configspace import ModelParams

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "qcalc", "configspace", "models", "engine", "thermal",
    "dualitylab", "qalgebra", "currents",
]
