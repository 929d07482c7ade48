"""Optimal shift sequences for iterated noisy maps.

Divergence accounting for T projected noisy steps reduces to choosing
interpolation levels u_0 = D, u_1, ..., u_T = 0 and paying
(phi_{t-1}(u_{t-1}) - u_t)^2 / sigma_{t-1}^2 at step t, where phi_t is the
step's modulus of continuity and sigma_t its noise level.  This module
evaluates that objective, produces its unique minimizer in closed form
through a backward weight recursion, and cross-checks the closed form
against a multistart numeric minimizer at small horizons.  The objective
is not convex as a function on R^{T-1}, which is exactly why the numeric
route exists as an independent witness.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._util import env_threads, require
from .errors import OracleConvergenceError
from .moduli import QuadraticModulus

FEASIBILITY_TOL = 1e-12


@dataclass(frozen=True)
class IterationSpec:
    """Description of a horizon-T projected noisy iteration.

    diameter bounds the initial displacement; sigmas and moduli give the
    per-step noise standard deviations and gradient-map moduli for steps
    0 .. T-1.
    """

    diameter: float
    sigmas: tuple
    moduli: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigmas", tuple(float(s) for s in self.sigmas))
        object.__setattr__(self, "moduli", tuple(self.moduli))
        require(self.diameter > 0, "diameter", "diameter must be strictly positive")
        require(len(self.sigmas) >= 1, "horizon", "at least one step is required")
        require(
            len(self.sigmas) == len(self.moduli),
            "lengths",
            "sigmas and moduli must have equal length",
        )
        require(
            all(s > 0 for s in self.sigmas),
            "sigma",
            "noise levels must be strictly positive",
        )
        require(
            all(isinstance(m, QuadraticModulus) for m in self.moduli),
            "moduli",
            "moduli must be QuadraticModulus instances",
        )

    @property
    def horizon(self) -> int:
        return len(self.sigmas)

    @classmethod
    def uniform(cls, diameter, horizon, modulus, sigma):
        """Spec with a single modulus and noise level repeated over the horizon."""
        require(horizon >= 1, "horizon", "horizon must be a positive integer")
        return cls(diameter, (float(sigma),) * int(horizon), (modulus,) * int(horizon))

    def arrays(self):
        c = np.array([m.c for m in self.moduli])
        h = np.array([m.h for m in self.moduli])
        s2 = np.array([s * s for s in self.sigmas])
        return c, h, s2


@dataclass(frozen=True)
class ShiftSolution:
    """Levels u_0 .. u_T, induced per-step shifts a_1 .. a_T, objective value."""

    u: tuple
    a: tuple
    objective: float


def objective_E(spec: IterationSpec, u_inner) -> float:
    """Shift objective at interior levels u_1 .. u_{T-1} (endpoints implied).

    E(u) = sum_t (phi_{t-1}(u_{t-1}) - u_t)^2 / sigma_{t-1}^2 with u_0 = D
    and u_T = 0, the moduli evaluated by formula.  Defined on all of
    R^{T-1}; feasibility is not required here.
    """
    u_inner = np.asarray(u_inner, dtype=float)
    T = spec.horizon
    require(
        u_inner.shape == (T - 1,),
        "length",
        f"expected {T - 1} interior levels, got shape {u_inner.shape}",
    )
    c, h, s2 = spec.arrays()
    u = np.concatenate(([spec.diameter], u_inner, [0.0]))
    phi = np.sqrt(c * u[:-1] ** 2 + h)
    return float(np.sum((phi - u[1:]) ** 2 / s2))


def solve_closed_form(spec: IterationSpec) -> ShiftSolution:
    """Unique minimizer of the shift objective via the backward weight recursion.

    Backward pass: g_t = (sigma_t^2 + g_{t+1}) / c_t accumulates tail noise
    weights normalized by the running contraction product (g_t equals the
    tail sum S_t = sum_{j>=t} sigma_j^2 prod_{l>j} c_l divided by
    prod_{l>=t} c_l).  Forward pass: u_t is the tail-to-total weight ratio
    times phi_{t-1}(u_{t-1}),

        u_t = g_t / (sigma_{t-1}^2 + g_t) * phi_{t-1}(u_{t-1}).

    A g_t overflowing to inf (long strongly contracting tails) saturates
    the ratio at 1, which is its correct limit.
    """
    c, h, s2 = spec.arrays()
    T = spec.horizon
    g = np.empty(T)
    acc = 0.0
    for t in range(T - 1, -1, -1):
        acc = (s2[t] + acc) / c[t]
        g[t] = acc
    u = np.empty(T + 1)
    u[0] = spec.diameter
    for t in range(1, T):
        gt = g[t]
        ratio = 1.0 if math.isinf(gt) else gt / (s2[t - 1] + gt)
        u[t] = ratio * spec.moduli[t - 1].evaluate(u[t - 1])
    u[T] = 0.0
    a = np.array([spec.moduli[t].evaluate(u[t]) for t in range(T)]) - u[1:]
    objective = float(np.sum(a * a / s2))
    return ShiftSolution(u=tuple(u), a=tuple(a), objective=objective)


def stationarity_residuals(spec: IterationSpec, u) -> np.ndarray:
    """Residuals of the interior first-order conditions at levels u.

    For t = 1 .. T-1:

        (c_t s_{t-1}^2 + s_t^2) u_t - s_{t-1}^2 phi_t'(u_t) u_{t+1}
            - s_t^2 phi_{t-1}(u_{t-1})

    where s_t = sigma_t.  All residuals vanish at the closed-form solution.
    """
    u = np.asarray(u, dtype=float)
    T = spec.horizon
    require(u.shape == (T + 1,), "length", f"expected {T + 1} levels, got {u.shape}")
    c, h, s2 = spec.arrays()
    res = np.empty(T - 1)
    for t in range(1, T):
        phi_prev = spec.moduli[t - 1].evaluate(u[t - 1])
        dphi = spec.moduli[t].derivative(u[t])
        res[t - 1] = (
            (c[t] * s2[t - 1] + s2[t]) * u[t]
            - s2[t - 1] * dphi * u[t + 1]
            - s2[t] * phi_prev
        )
    return res


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violations: tuple

    def __bool__(self) -> bool:
        return self.feasible


def feasibility_check(spec: IterationSpec, u) -> FeasibilityReport:
    """Endpoint and interleaving checks for a level sequence u_0 .. u_T.

    Endpoints are compared exactly; nonnegativity and the interleaving
    phi_{t-1}(u_{t-1}) >= u_t get a 1e-12 slack.
    """
    u = np.asarray(u, dtype=float)
    T = spec.horizon
    require(u.shape == (T + 1,), "length", f"expected {T + 1} levels, got {u.shape}")
    violations = []
    if u[0] != spec.diameter:
        violations.append(f"u_0 != D (u_0={u[0]!r}, D={spec.diameter!r})")
    if u[T] != 0.0:
        violations.append(f"u_T != 0 (u_T={u[T]!r})")
    for t in range(T + 1):
        if u[t] < -FEASIBILITY_TOL:
            violations.append(f"u_{t}={u[t]!r} < 0")
    for t in range(1, T + 1):
        phi_val = spec.moduli[t - 1].evaluate(max(float(u[t - 1]), 0.0))
        if phi_val < u[t] - FEASIBILITY_TOL:
            violations.append(f"phi_{t - 1}(u_{t - 1})={phi_val!r} < u_{t}={u[t]!r}")
    return FeasibilityReport(not violations, tuple(violations))


def _forward_radii(spec: IterationSpec) -> np.ndarray:
    r = np.empty(spec.horizon)
    r[0] = spec.diameter
    for t in range(1, spec.horizon):
        r[t] = spec.moduli[t - 1].evaluate(r[t - 1])
    return r


def _certify_stationary(fun, x, upper, f_best, tol):
    # Finite-difference first-order check: interior coordinates need a small
    # gradient, coordinates pinned at a bound only a correctly signed one.
    scale = max(1.0, abs(f_best))
    for i in range(len(x)):
        xi = float(x[i])
        step = 1e-5 * max(1.0, abs(xi))
        at_lower = xi < 1e-9
        at_upper = upper[i] - xi < 1e-9
        bumped = x.copy()
        if at_lower:
            bumped[i] = xi + step
            grad_i = (fun(bumped) - f_best) / step
            ok = grad_i >= -tol * scale
        elif at_upper:
            bumped[i] = xi - step
            grad_i = (f_best - fun(bumped)) / step
            ok = grad_i <= tol * scale
        else:
            step = min(step, xi / 2.0, (upper[i] - xi) / 2.0)
            plus = x.copy()
            plus[i] = xi + step
            minus = x.copy()
            minus[i] = xi - step
            grad_i = (fun(plus) - fun(minus)) / (2.0 * step)
            ok = abs(grad_i) <= tol * scale
        if not ok:
            raise OracleConvergenceError(
                f"stationarity certificate failed at coordinate {i}: "
                f"finite-difference gradient {grad_i:.3e} exceeds tolerance"
            )


def numeric_oracle(
    spec: IterationSpec,
    restarts: int = 8,
    tol: float = 1e-4,
    *,
    max_horizon: int = 12,
    seed: int = 0,
    threads: int | None = None,
) -> ShiftSolution:
    """Multistart bounded minimization of the shift objective.

    Independent of the closed form: starts are two deterministic points
    (the linear interpolation of D down to 0, and the box midpoint) plus
    seeded uniform draws inside the forward-reachable box
    [0, r_1] x ... x [0, r_{T-1}] with r_0 = D, r_t = phi_{t-1}(r_{t-1}).
    Each start is polished by bound-constrained quasi-Newton descent with
    finite-difference gradients; the winner is the smallest objective with
    ties broken by start index, and must pass a central-difference
    stationarity certificate with tolerance tol.  The number of parallel
    workers honors PABI_THREADS when threads is None; the reduction is
    deterministic either way.
    """
    require(restarts >= 1, "restarts", "restarts must be a positive integer")
    require(tol > 0, "tolerance", "tol must be strictly positive")
    T = spec.horizon
    require(
        T <= max_horizon,
        "horizon_too_large",
        f"numeric oracle supports horizons up to {max_horizon}, got {T}",
        required_value=max_horizon,
    )
    s2 = np.array([s * s for s in spec.sigmas])
    if T == 1:
        a0 = spec.moduli[0].evaluate(spec.diameter)
        return ShiftSolution((spec.diameter, 0.0), (a0,), float(a0 * a0 / s2[0]))

    upper = _forward_radii(spec)[1:]

    def fun(v):
        return objective_E(spec, v)

    rng = np.random.default_rng(seed)
    linear = np.minimum(spec.diameter * np.arange(T - 1, 0, -1) / T, upper)
    starts = [linear, upper / 2.0]
    while len(starts) < restarts:
        starts.append(rng.uniform(0.0, upper))
    starts = starts[:restarts]
    bounds = [(0.0, float(b)) for b in upper]

    def solve(x0):
        return optimize.minimize(
            fun,
            x0,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": 500, "maxfun": 20000, "ftol": 1e-15, "gtol": 1e-10},
        )

    workers = env_threads() if threads is None else max(1, int(threads))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, starts))
    else:
        results = [solve(x0) for x0 in starts]
    best_idx = min(range(len(results)), key=lambda i: (results[i].fun, i))
    best = results[best_idx]
    x = np.clip(np.asarray(best.x, dtype=float), 0.0, upper)
    f_best = fun(x)
    _certify_stationary(fun, x, upper, f_best, tol)
    u = np.concatenate(([spec.diameter], x, [0.0]))
    a = np.array([spec.moduli[t].evaluate(u[t]) for t in range(T)]) - u[1:]
    return ShiftSolution(tuple(u), tuple(a), float(np.sum(a * a / s2)))
