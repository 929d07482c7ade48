"""Closed-form divergence bounds and their specializations
=========================================================

Three routes to the same number, then the regimes where each
specialized form is the one you actually want.
"""

import numpy as np

from pabi import (
    IterationSpec,
    QuadraticModulus,
    dissipative_shift_series,
    kl_bound_pla,
    renyi_bound_general,
    renyi_bound_sqrt_shift,
    solve_closed_form,
)

alpha = 2.0

# route 1: general bound on an explicit spec
mod = QuadraticModulus(c=1.0, h=0.5)
spec = IterationSpec(diameter=2.0, sigmas=(1.0,) * 8, moduli=(mod,) * 8)
general = renyi_bound_general(alpha, spec)
print(f"general bound:       {general.value:.12f}")
parts = ", ".join(f"{k}={float(v):.6f}" for k, v in general.breakdown.items())
print(f"  breakdown: {parts}")

# route 2: uniform-parameter shortcut, exact harmonic sum
uniform = renyi_bound_sqrt_shift(alpha, diameter=2.0, h=0.5, sigma=1.0, horizon=8)
print(f"uniform shortcut:    {uniform.value:.12f}")

# route 3: optimal shifts by hand, then (alpha/2) * E(u*)
sol = solve_closed_form(spec)
print(f"(alpha/2) * E(u*):   {alpha / 2.0 * sol.objective:.12f}")

# the log-form upper bound trades the harmonic sum for ln(T)+1
loose = renyi_bound_sqrt_shift(alpha, 2.0, 0.5, 1.0, 8, form="log-upper")
print(f"log-form upper:      {loose.value:.12f} (always >= exact)")

# contractive chains replace the harmonic sum with a geometric series;
# the series is sandwiched between two closed logs
for c in (0.9, 0.99):
    s = dissipative_shift_series(c, 50)
    lo = 1.0 + np.log((1.0 - c ** 51) / (1.0 - c * c))
    hi = 1.0 + np.log((1.0 - c ** 50) / (1.0 - c))
    print(f"c={c}: series={s:.6f} in [{lo:.6f}, {hi:.6f}]")

# KL bound for a projected Langevin step: order-1 limit of the log form
kl = kl_bound_pla(diameter=1.0, eta=0.125, h=0.0, horizon=16)
print(f"Langevin KL bound (h=0): {kl:.6f} = D^2 / (4 eta T)")
