"""Large-deviation rate function of the biased dual walker.

The walker jumps right at rate a and left at rate b; its velocity
satisfies a large-deviation principle with an explicit rate function,
the Legendre transform of the jump cumulant a(e^z - 1) + b(e^-z - 1).
The exponential growth rate of current moments is the constrained
Legendre dual of the rate function; we show the finite-time slope
approach it.
"""

import math

import numpy as np

from asymtransport import currents
from asymtransport.configspace import ModelParams

q, k = 0.8, 0.5
a, b = currents.walker_rates(q, k)
print("walker rates: a = %.6f (right), b = %.6f (left)" % (a, b))
print("mean velocity a - b = %.6f, I(a - b) = %.2e"
      % (a - b, currents.rate_function(a - b, a, b)))

print("\n  x      I(x)       numerical Legendre")
for x in np.linspace(0.0, 2.0, 6):
    exact = currents.rate_function(x, a, b)
    num = currents.rate_function_legendre(x, a, b)
    print("  %.2f   %.8f   %.8f" % (x, exact, num))

mu = [0.5, 0.5]
limit = currents.growth_rate_discrete(mu, q, k)
print("\nvariational growth rate (Bernoulli 1/2): %.10f" % limit)
p = ModelParams(q=q, k=k)
for t in (5.0, 10.0, 20.0, 40.0):
    slope = math.log(currents.q_moment_product(mu, t, p)) / t
    print("  t = %4.0f  slope %.10f  rel. gap %.1e"
          % (t, slope, abs(slope - limit) / limit))
