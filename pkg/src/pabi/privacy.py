"""Renyi-DP accountant for projected noisy SGD with Poisson subsampling.

Natural logarithms throughout.  The per-step subsampled-Gaussian cost
uses the standard upper bound 2 alpha q^2 / sigma^2, valid only below an
order threshold alpha_star(q, sigma) that this module computes and
enforces on every path; no subsampling term is ever returned without
that check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import ceil_int, require
from .errors import OracleConvergenceError

_ALPHA_TOL = 1e-6
_ALPHA_FLOOR = 1.0 + 1e-6
_GRID_SLACK = 1e-9


@dataclass(frozen=True)
class PrivacySpec:
    """Inputs of one noisy-SGD privacy accounting question.

    sigma is the noise multiplier: the per-step Gaussian has standard
    deviation eta * sigma.  b is the expected Poisson batch size, so the
    sampling rate is q = b / n and must stay below 1/5.
    """

    n: int
    b: float
    L: float
    M: float
    p: float
    eta: float
    sigma: float
    alpha: float
    T: int
    D: float

    def __post_init__(self):
        require(int(self.n) == self.n and self.n >= 1, "dataset_size", "n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))
        require(self.b > 0, "batch_size", "b must be strictly positive")
        require(self.b <= self.n, "batch_size", "b must not exceed n")
        q = self.b / self.n
        require(
            q < 0.2,
            "sampling_rate",
            f"q = b/n = {q:.6g} must be below 1/5",
            required_value=0.2,
        )
        require(self.L > 0, "lipschitz", "L must be strictly positive")
        require(self.M > 0, "growth_constant", "M must be strictly positive")
        require(0.0 <= self.p <= 1.0, "smoothness_order", "p must lie in [0, 1]")
        require(self.eta > 0, "stepsize", "eta must be strictly positive")
        require(self.sigma > 0, "noise_multiplier", "sigma must be strictly positive")
        require(self.alpha > 1.0, "alpha", "alpha must exceed 1")
        require(int(self.T) == self.T and self.T >= 1, "horizon", "T must be a positive integer")
        object.__setattr__(self, "T", int(self.T))
        require(self.D > 0, "diameter", "D must be strictly positive")

    @property
    def q(self) -> float:
        return self.b / self.n

    @property
    def sigma_reduced(self) -> float:
        """Noise-to-sensitivity ratio b*sigma/(2*sqrt(2)*L) of one step."""
        return self.b * self.sigma / (2.0 * math.sqrt(2.0) * self.L)


@dataclass(frozen=True)
class EpsilonResult:
    epsilon: float
    regime: str
    tbar: int
    v_term: float
    alpha_star: float
    breakdown: dict = field(default_factory=dict)


def tbar(D: float, n: int, eta: float, L: float) -> int:
    """Phase-transition horizon ceil(D*n / (4*eta*L))."""
    require(D > 0, "diameter", "D must be strictly positive")
    require(n > 0, "dataset_size", "n must be positive")
    require(eta > 0, "stepsize", "eta must be strictly positive")
    require(L > 0, "lipschitz", "L must be strictly positive")
    return max(1, ceil_int(D * n / (4.0 * eta * L)))


def _mironov_ok(alpha: float, q: float, sigma: float) -> bool:
    # validity predicate for the 2*alpha*q^2/sigma^2 subsampling bound;
    # the second condition is kept in product form because its divisor
    # m + ln(q*alpha) + 1/(2 sigma^2) can be negative
    if alpha <= 1.0:
        return False
    m = math.log1p(1.0 / (q * (alpha - 1.0)))
    s2 = sigma * sigma
    if alpha > m * s2 / 2.0 - math.log(s2):
        return False
    lhs = alpha * (m + math.log(q * alpha) + 1.0 / (2.0 * s2))
    return lhs <= m * m * s2 / 2.0 - math.log(5.0 * s2)


def _bisect_alpha(lo: float, hi: float, q: float, sigma: float) -> float:
    # lo valid, hi invalid; returns the valid endpoint at tolerance
    while hi - lo > _ALPHA_TOL:
        mid = 0.5 * (lo + hi)
        if _mironov_ok(mid, q, sigma):
            lo = mid
        else:
            hi = mid
    return lo


def alpha_star(q: float, sigma: float) -> float:
    """Largest Renyi order at which the subsampling bound is valid.

    Found by doubling until the validity predicate fails, then bisection
    to 1e-6, returning the valid (lower) endpoint.  The predicate is not
    known to be monotone in alpha, so the result is audited on a
    256-point grid below it; on any gap the largest prefix-valid order
    is returned instead.
    """
    require(0.0 < q < 0.2, "sampling_rate", "q must lie in (0, 1/5)", required_value=0.2)
    require(sigma >= 4.0, "noise_multiplier", "sigma must be at least 4", required_value=4.0)
    if not _mironov_ok(_ALPHA_FLOOR, q, sigma):
        require(False, "alpha_validity", "no valid alpha range for these (q, sigma)")
    lo = _ALPHA_FLOOR
    hi = 2.0
    iterations = 0
    while _mironov_ok(hi, q, sigma):
        lo = hi
        hi *= 2.0
        iterations += 1
        if iterations > 200:
            raise OracleConvergenceError("alpha_star doubling did not terminate")
    out = _bisect_alpha(lo, hi, q, sigma)
    grid = np.linspace(_ALPHA_FLOOR, out, 256)
    for i in range(1, len(grid)):
        if not _mironov_ok(float(grid[i]), q, sigma):
            return _bisect_alpha(float(grid[i - 1]), float(grid[i]), q, sigma)
    return out


def s_alpha_bound(q: float, sigma: float, alpha: float) -> float:
    """Per-step subsampled-Gaussian Renyi cost 2*alpha*q^2/sigma^2.

    Hard-errors when alpha exceeds alpha_star(q, sigma); the closed form
    is simply not a bound out there.
    """
    star = alpha_star(q, sigma)
    require(alpha > 1.0, "alpha", "alpha must exceed 1")
    require(
        alpha <= star,
        "alpha_validity",
        f"alpha = {alpha:.6g} exceeds the validity threshold {star:.6g}",
        required_value=star,
    )
    return 2.0 * alpha * q * q / (sigma * sigma)


def v_term(D: float, M: float, tbar: int, eta: float, p: float) -> float:
    """Cap correction (2*tbar/D * (eta*M/2)^{1/(1-p)})^2 * (1-p)/(1+p) * ln(tbar*e).

    Zero at p = 1 (the limit); inf when the power overflows.
    """
    require(D > 0, "diameter", "D must be strictly positive")
    require(M > 0, "growth_constant", "M must be strictly positive")
    require(int(tbar) == tbar and tbar >= 1, "tbar", "tbar must be a positive integer")
    require(0.0 <= p <= 1.0, "smoothness_order", "p must lie in [0, 1]")
    require(eta > 0, "stepsize", "eta must be strictly positive")
    if p == 1.0:
        return 0.0
    try:
        r = (eta * M / 2.0) ** (1.0 / (1.0 - p))
        base = 2.0 * tbar / D * r
        return base * base * ((1.0 - p) / (1.0 + p)) * (math.log(tbar) + 1.0)
    except OverflowError:
        return math.inf


def epsilon_nsgd(spec: PrivacySpec) -> EpsilonResult:
    """Renyi-DP bound for T steps of projected noisy SGD.

    Headline epsilon is the capped composition form
    s_alpha * min(T, 2*tbar + V); the three-term direct bound is kept in
    breakdown["epsilon_theorem"] and never exceeds
    s_alpha * (2*tbar + V).
    """
    q = spec.q
    sigma_min = 8.0 * math.sqrt(2.0) * spec.L / spec.b
    require(
        spec.sigma > sigma_min,
        "noise_multiplier",
        f"sigma = {spec.sigma:.6g} must exceed 8*sqrt(2)*L/b = {sigma_min:.6g}",
        required_value=sigma_min,
    )
    t_bar = tbar(spec.D, spec.n, spec.eta, spec.L)
    require(
        spec.T > t_bar,
        "horizon",
        f"T = {spec.T} must exceed tbar = {t_bar}",
        required_value=t_bar,
    )
    sigma_prime = spec.sigma_reduced
    star = alpha_star(q, sigma_prime)
    require(
        spec.alpha <= star,
        "alpha_validity",
        f"alpha = {spec.alpha:.6g} exceeds the validity threshold {star:.6g}",
        required_value=star,
    )
    s_alpha = s_alpha_bound(q, sigma_prime, spec.alpha)
    v = v_term(spec.D, spec.M, t_bar, spec.eta, spec.p)

    composition_term = 16.0 * spec.L * spec.L * t_bar / (spec.n * spec.n)
    diameter_term = spec.D * spec.D / (spec.eta * spec.eta * t_bar)
    if spec.p == 1.0:
        smoothness_term = 0.0
    else:
        try:
            smoothness_term = (
                4.0
                * spec.eta ** (2.0 * spec.p / (1.0 - spec.p))
                * ((1.0 - spec.p) / (1.0 + spec.p))
                * (spec.M / 2.0) ** (2.0 / (1.0 - spec.p))
                * (math.log(t_bar) + 1.0)
            )
        except OverflowError:
            smoothness_term = math.inf
    eps_thm = spec.alpha / (spec.sigma * spec.sigma) * (
        composition_term + diameter_term + smoothness_term
    )

    cap_steps = min(float(spec.T), 2.0 * t_bar + v)
    eps_cap = s_alpha * cap_steps
    regime = "capped" if spec.T >= 2.0 * t_bar + v else "growing"
    return EpsilonResult(
        epsilon=eps_cap,
        regime=regime,
        tbar=t_bar,
        v_term=v,
        alpha_star=star,
        breakdown={
            "epsilon_cap": eps_cap,
            "epsilon_theorem": eps_thm,
            "s_alpha": s_alpha,
            "sigma_reduced": sigma_prime,
            "q": q,
            "cap_steps": cap_steps,
            "composition_term": composition_term,
            "diameter_term": diameter_term,
            "smoothness_term": smoothness_term,
        },
    )


def privacy_curve_sweep(base: PrivacySpec, eta_grid, p_values=None) -> list:
    """Rows of (eta, p, tbar, v, bound, ln_bound) with bound = 2*tbar + V.

    eta iterates in grid order, the p values cycle within each eta.  The
    grid must stay inside [1/n, n^{-1/5}] (tiny relative slack at the
    endpoints).
    """
    grid = [float(x) for x in eta_grid]
    require(len(grid) > 0, "eta_grid", "eta grid must be non-empty")
    if p_values is None:
        p_values = [base.p]
    ps = [float(x) for x in p_values]
    for p in ps:
        require(0.0 <= p <= 1.0, "smoothness_order", f"p = {p:.6g} must lie in [0, 1]")
    lo = 1.0 / base.n
    hi = base.n ** (-0.2)
    for eta in grid:
        require(
            lo * (1.0 - _GRID_SLACK) <= eta <= hi * (1.0 + _GRID_SLACK),
            "eta_grid",
            f"eta = {eta:.6g} outside the sweep window [{lo:.6g}, {hi:.6g}]",
        )
    rows = []
    for eta in grid:
        t_bar = tbar(base.D, base.n, eta, base.L)
        for p in ps:
            v = v_term(base.D, base.M, t_bar, eta, p)
            bound = 2.0 * t_bar + v
            rows.append(
                {
                    "eta": eta,
                    "p": p,
                    "tbar": t_bar,
                    "v": v,
                    "bound": bound,
                    "ln_bound": math.log(bound),
                }
            )
    return rows
