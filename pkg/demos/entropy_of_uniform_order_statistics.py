"""How sharp is the closed-form entropy of a uniform order statistic?

The k-th smallest of n uniform draws follows Beta(k, n+1-k), and its
differential entropy has an exact expression built from harmonic numbers:

    h(U_(k)) = T_{k-1} + T_{n-k} - T_n - H_n,   T_r = log(r!) - r H_r.

This script evaluates the exact formula against brute-force numerical
integration, then shows how fast the large-n expansion closes in on it.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import betaincinv, gammaln

from ordent import (
    uniform_order_stat_entropy_exact,
    uniform_order_stat_entropy_expansion,
    entropy_expansion_linear_coefficient,
)

# ---------------------------------------------------------------------------
# 1. The exact formula vs direct integration of -w log w
# ---------------------------------------------------------------------------
print("exact formula vs quadrature of the Beta entropy integrand")
for n, k in [(2, 1), (10, 3), (100, 50), (5000, 1500)]:
    a, b = float(k), float(n + 1 - k)
    lc = gammaln(a + b) - gammaln(a) - gammaln(b)

    def neg_w_log_w(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        logw = lc + (a - 1) * math.log(u) + (b - 1) * math.log1p(-u)
        return -math.exp(logw) * logw

    pts = [float(betaincinv(a, b, t)) for t in (0.01, 0.5, 0.99)]
    brute = quad(neg_w_log_w, 0, 1, points=pts, limit=300)[0]
    exact = uniform_order_stat_entropy_exact(n, k)
    print(f"  n={n:>5} k={k:>5}: exact={exact:+.12f} quad={brute:+.12f} "
          f"diff={abs(exact - brute):.1e}")

# ---------------------------------------------------------------------------
# 2. The large-n expansion and its O(1/n^2) residual
# ---------------------------------------------------------------------------
# The expansion reads
#   h = 1/2 log(2 pi e (p - 1/n)(1-p)/n) + (1/p + 1/(1-p) - 4)/(6n) + 1/(12 n^2)
# and the linear coefficient vanishes exactly at the median.
print("\nexpansion residual shrinks like 1/n^2 (note the n^2-scaled column)")
for p in (0.3, 0.5):
    print(f"  p = {p}   (1/(6n) coefficient = {entropy_expansion_linear_coefficient(p):+.6f})")
    for n in (100, 1000, 10_000, 100_000):
        k = round(n * p)
        resid = uniform_order_stat_entropy_expansion(n, p) - uniform_order_stat_entropy_exact(n, k)
        print(f"    n={n:>6}: residual = {resid:+.3e}   residual * n^2 = {resid * n * n:+.4f}")

print("\nthe scaled residual settles to a constant, so the truncation error is Theta(1/n^2)")
