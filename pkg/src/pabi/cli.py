"""Command-line frontend.

Subcommands: bound, shifts, mixing, privacy, sweep, simulate.  Every
run is fully determined by its flags plus the seed.  Floats in CSV
output carry 17 significant digits; JSON floats use Python's exact
shortest round-trip representation.  A flat JSON file mirroring the
flags (keys = flag names with dashes replaced by underscores) can be
passed via --config; explicit flags win over the file.  --echo-config
prints the resolved configuration as JSON and exits, and that output
re-fed through --config reproduces the run.  Exit codes: 0 success,
2 violated precondition (JSON {code, message, required_value} on
stderr), 1 internal error.  PABI_THREADS caps oracle parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bounds import (
    kl_bound_pla,
    renyi_bound_dissipative,
    renyi_bound_general,
    renyi_bound_sqrt_shift,
)
from .errors import PreconditionError
from .mixing import mixing_time_dissipative, mixing_time_weakly_smooth, theta_threshold
from .moduli import QuadraticModulus
from .privacy import PrivacySpec, epsilon_nsgd, privacy_curve_sweep
from .shifts import IterationSpec, numeric_oracle, solve_closed_form
from .simulate import (
    AbsLipschitz,
    ChainConfig,
    DissipativeQuadratic,
    PowerWeaklySmooth,
    QuadraticSmooth,
    run_chains,
    samples_to_csv,
    validate_mixing_bound,
)

_META_FLAGS = ("config", "echo_config", "output", "command", "subcommand")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _need(args, names):
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + name.replace("_", "-")
            raise PreconditionError("missing_flag", f"{flag} is required for this subcommand")


def _float_list(text: str) -> list:
    out = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if piece:
            out.append(float(piece))
    require_nonempty = len(out) > 0
    if not require_nonempty:
        raise PreconditionError("flag_value", f"empty numeric list {text!r}")
    return out


def _parse_grid(text: str) -> list:
    """geometric:start,end,count (endpoints inclusive) or a comma list."""
    text = str(text).strip()
    if text.startswith("geometric:"):
        parts = _float_list(text[len("geometric:"):])
        if len(parts) != 3:
            raise PreconditionError("eta_grid", "geometric grid needs start,end,count")
        start, end, count = parts
        n = int(count)
        if n != count or n < 1:
            raise PreconditionError("eta_grid", "grid count must be a positive integer")
        if start <= 0 or end <= 0:
            raise PreconditionError("eta_grid", "geometric grid endpoints must be positive")
        if n == 1:
            return [start]
        return [float(x) for x in np.geomspace(start, end, n)]
    return _float_list(text)


def _per_step(text, horizon: int, name: str) -> list:
    values = _float_list(text)
    if len(values) == 1:
        return values * horizon
    if len(values) != horizon:
        raise PreconditionError(name, f"--{name} needs 1 or {horizon} comma-separated values")
    return values


def _build_potential(args, dim: int):
    kind = args.potential
    if kind == "abs":
        return AbsLipschitz(args.L if args.L is not None else 1.0)
    if kind == "power":
        _need(args, ["p", "M"])
        return PowerWeaklySmooth(args.p, args.M)
    if kind == "quad":
        _need(args, ["beta"])
        return QuadraticSmooth(args.beta)
    if kind == "dissipative":
        _need(args, ["kappa", "beta", "lam"])
        return DissipativeQuadratic(kappa=args.kappa, beta=args.beta, lam=args.lam, dim=dim)
    raise PreconditionError("potential", f"unknown potential {kind!r}")


def _run_bound(args) -> str:
    if args.pla_kl:
        _need(args, ["D", "eta", "h", "T"])
        value = kl_bound_pla(args.D, args.eta, args.h, args.T)
        if args.format == "json":
            return json.dumps({"kind": "kl-pla", "value": value}) + "\n"
        return _fmt(value) + "\n"
    _need(args, ["alpha", "D", "T", "sigma", "c", "h"])
    exact = args.form == "exact"
    if args.c == 1.0:
        res = renyi_bound_sqrt_shift(
            args.alpha, args.D, args.h, args.sigma, args.T,
            "exact-harmonic" if exact else "log-upper",
        )
    elif 0.0 < args.c < 1.0:
        res = renyi_bound_dissipative(
            args.alpha, args.D, args.c, args.h, args.sigma, args.T,
            "exact-sum" if exact else "log-upper",
        )
    else:
        if not exact:
            raise PreconditionError("form", "log-upper form needs c <= 1")
        spec = IterationSpec.uniform(args.D, args.T, QuadraticModulus(args.c, args.h), args.sigma)
        res = renyi_bound_general(args.alpha, spec)
    if args.format == "json":
        return json.dumps({"alpha": res.alpha, "value": res.value, "breakdown": res.breakdown}) + "\n"
    return _fmt(res.value) + "\n"


def _run_shifts(args) -> str:
    _need(args, ["D", "T", "sigma", "c", "h"])
    horizon = args.T
    cs = _per_step(args.c, horizon, "c")
    hs = _per_step(args.h, horizon, "h")
    sigmas = _per_step(args.sigma, horizon, "sigma")
    moduli = tuple(QuadraticModulus(c, h) for c, h in zip(cs, hs))
    spec = IterationSpec(diameter=args.D, sigmas=tuple(sigmas), moduli=moduli)
    sol = solve_closed_form(spec)
    u_list = [float(x) for x in sol.u]
    a_list = [float(x) for x in sol.a]
    if args.oracle:
        oracle = numeric_oracle(spec, restarts=args.restarts, tol=args.tol, seed=args.seed)
        gap = (oracle.objective - sol.objective) / sol.objective
        return json.dumps(
            {
                "u": u_list,
                "a": a_list,
                "closed_objective": sol.objective,
                "oracle_objective": oracle.objective,
                "relative_gap": gap,
            }
        ) + "\n"
    if args.format == "json":
        return json.dumps({"u": u_list, "a": a_list, "objective": sol.objective}) + "\n"
    lines = ["t,u,a"]
    for t in range(horizon + 1):
        a_part = _fmt(sol.a[t]) if t < horizon else ""
        lines.append(f"{t},{_fmt(sol.u[t])},{a_part}")
    return "\n".join(lines) + "\n"


def _mixing_payload(result) -> dict:
    return {
        "t_mix": result.t_mix,
        "T_star": result.constituents["T_star"],
        "rounds": result.constituents["rounds"],
        "regime_checks": result.regime_checks,
    }


def _run_mixing(args) -> str:
    if args.subcommand == "threshold":
        _need(args, ["p", "M", "D"])
        theta = theta_threshold(args.p, args.M, args.D)
        if args.format == "json":
            return json.dumps({"theta": theta}) + "\n"
        return _fmt(theta) + "\n"
    if args.subcommand == "weakly-smooth":
        _need(args, ["D", "eta", "p", "M"])
        result = mixing_time_weakly_smooth(args.D, args.eta, args.p, args.M, args.eps)
    else:
        _need(args, ["D", "eta", "lam", "kappa", "beta"])
        result = mixing_time_dissipative(args.D, args.eta, args.lam, args.kappa, args.beta, args.eps)
    payload = _mixing_payload(result)
    if args.format == "csv":
        return "t_mix,T_star,rounds\n" + f"{payload['t_mix']},{payload['T_star']},{payload['rounds']}\n"
    return json.dumps(payload) + "\n"


def _run_privacy_epsilon(args) -> str:
    _need(args, ["n", "b", "L", "M", "p", "eta", "sigma", "alpha", "T", "D"])
    spec = PrivacySpec(
        n=args.n, b=args.b, L=args.L, M=args.M, p=args.p,
        eta=args.eta, sigma=args.sigma, alpha=args.alpha, T=args.T, D=args.D,
    )
    res = epsilon_nsgd(spec)
    payload = {
        "epsilon": res.epsilon,
        "regime": res.regime,
        "tbar": res.tbar,
        "v_term": res.v_term,
        "alpha_star": res.alpha_star,
        "breakdown": res.breakdown,
    }
    if args.format == "csv":
        head = "epsilon,regime,tbar,v_term,alpha_star"
        row = f"{_fmt(res.epsilon)},{res.regime},{res.tbar},{_fmt(res.v_term)},{_fmt(res.alpha_star)}"
        return head + "\n" + row + "\n"
    return json.dumps(payload) + "\n"


def _run_sweep(args) -> str:
    _need(args, ["n", "L", "M", "D", "p", "eta_grid"])
    grid = _parse_grid(args.eta_grid)
    ps = _float_list(args.p)
    b = args.b if args.b is not None else 1.0
    base = PrivacySpec(
        n=args.n, b=b, L=args.L, M=args.M, p=ps[0],
        eta=grid[0], sigma=max(1.0, 32.0 * args.L / b), alpha=2.0, T=1, D=args.D,
    )
    rows = privacy_curve_sweep(base, grid, ps)
    if args.format == "json":
        return json.dumps(rows) + "\n"
    lines = ["eta,p,tbar,v,bound,ln_bound"]
    for r in rows:
        lines.append(
            f"{_fmt(r['eta'])},{_fmt(r['p'])},{r['tbar']},{_fmt(r['v'])},"
            f"{_fmt(r['bound'])},{_fmt(r['ln_bound'])}"
        )
    return "\n".join(lines) + "\n"


def _run_simulate(args) -> str:
    dim = args.dim
    potential = _build_potential(args, dim)
    if args.subcommand == "validate-mixing":
        _need(args, ["D", "eta"])
        report = validate_mixing_bound(
            potential, args.D, args.eta,
            n_chains=args.chains, seed=args.seed, dim=dim, bins=args.bins,
        )
        return json.dumps(report) + "\n"
    _need(args, ["D", "eta", "T"])
    sigma = args.sigma if args.sigma is not None else math.sqrt(2.0 * args.eta)
    config = ChainConfig(
        dim=dim, diameter=args.D, eta=args.eta, sigma=sigma,
        T=args.T, n_chains=args.chains, seed=args.seed, kind=args.kind,
    )
    init = np.array(_float_list(args.init)) if args.init != "0" else np.zeros(dim)
    samples = run_chains(potential, config, init)
    if args.format == "json":
        return json.dumps(samples.tolist()) + "\n"
    return samples_to_csv(samples)


def _add_common(parser: argparse.ArgumentParser, default_format: str = "csv") -> None:
    parser.add_argument("--config", default=None, help="flat JSON file of flag values")
    parser.add_argument("--echo-config", action="store_true", help="print resolved config and exit")
    parser.add_argument("--output", default=None, help="write to this path instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default=default_format)


def _potential_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--potential", choices=("abs", "power", "quad", "dissipative"), default="abs")
    parser.add_argument("--L", type=float, default=None)
    parser.add_argument("--p", type=float, default=None)
    parser.add_argument("--M", type=float, default=None)
    parser.add_argument("--beta", type=float, default=None)
    parser.add_argument("--kappa", type=float, default=None)
    parser.add_argument("--lam", type=float, default=None)


def _sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--b", type=float, default=None)
    parser.add_argument("--L", type=float, default=None)
    parser.add_argument("--M", type=float, default=None)
    parser.add_argument("--D", type=float, default=None)
    parser.add_argument("--p", default=None, help="comma list of smoothness orders")
    parser.add_argument("--eta-grid", default=None, help="geometric:start,end,count or comma list")
    _add_common(parser, "csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pabi",
        description="Divergence bounds, mixing times, and privacy curves for projected noisy iterations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    registry = {}

    bound = sub.add_parser("bound", help="Renyi bound for constant per-step parameters")
    for flag in ("--alpha", "--D", "--sigma", "--c", "--h", "--eta"):
        bound.add_argument(flag, type=float, default=None)
    bound.add_argument("--T", type=int, default=None)
    bound.add_argument("--form", choices=("exact", "log-upper"), default="exact")
    bound.add_argument("--pla-kl", action="store_true", help="KL bound for Langevin steps instead")
    _add_common(bound, "csv")
    registry[("bound",)] = (bound, _run_bound)

    shifts = sub.add_parser("shifts", help="optimal shift sequence and objective")
    shifts.add_argument("--D", type=float, default=None)
    shifts.add_argument("--T", type=int, default=None)
    for flag in ("--sigma", "--c", "--h"):
        shifts.add_argument(flag, default=None, help="scalar or comma list of length T")
    shifts.add_argument("--oracle", action="store_true", help="also run the numeric optimizer")
    shifts.add_argument("--restarts", type=int, default=8)
    shifts.add_argument("--tol", type=float, default=1e-4)
    shifts.add_argument("--seed", type=int, default=0)
    _add_common(shifts, "csv")
    registry[("shifts",)] = (shifts, _run_shifts)

    mixing = sub.add_parser("mixing", help="mixing-time estimates")
    mixing_sub = mixing.add_subparsers(dest="subcommand", required=True)
    threshold = mixing_sub.add_parser("threshold", help="inverse-stepsize threshold")
    for flag in ("--p", "--M", "--D"):
        threshold.add_argument(flag, type=float, default=None)
    _add_common(threshold, "csv")
    registry[("mixing", "threshold")] = (threshold, _run_mixing)
    weak = mixing_sub.add_parser("weakly-smooth")
    for flag in ("--D", "--eta", "--p", "--M"):
        weak.add_argument(flag, type=float, default=None)
    weak.add_argument("--eps", type=float, default=0.5)
    _add_common(weak, "json")
    registry[("mixing", "weakly-smooth")] = (weak, _run_mixing)
    diss = mixing_sub.add_parser("dissipative")
    for flag in ("--D", "--eta", "--lam", "--kappa", "--beta"):
        diss.add_argument(flag, type=float, default=None)
    diss.add_argument("--eps", type=float, default=0.5)
    _add_common(diss, "json")
    registry[("mixing", "dissipative")] = (diss, _run_mixing)

    privacy = sub.add_parser("privacy", help="noisy-SGD privacy accounting")
    privacy_sub = privacy.add_subparsers(dest="subcommand", required=True)
    eps_cmd = privacy_sub.add_parser("epsilon", help="single-point accountant")
    eps_cmd.add_argument("--n", type=int, default=None)
    eps_cmd.add_argument("--T", type=int, default=None)
    for flag in ("--b", "--L", "--M", "--p", "--eta", "--sigma", "--alpha", "--D"):
        eps_cmd.add_argument(flag, type=float, default=None)
    _add_common(eps_cmd, "json")
    registry[("privacy", "epsilon")] = (eps_cmd, _run_privacy_epsilon)
    psweep = privacy_sub.add_parser("sweep", help="privacy-curve table over a stepsize grid")
    _sweep_flags(psweep)
    registry[("privacy", "sweep")] = (psweep, _run_sweep)

    sweep = sub.add_parser("sweep", help="alias of privacy sweep")
    _sweep_flags(sweep)
    registry[("sweep",)] = (sweep, _run_sweep)

    simulate = sub.add_parser("simulate", help="Monte-Carlo runs and validation")
    simulate_sub = simulate.add_subparsers(dest="subcommand", required=True)
    run = simulate_sub.add_parser("run", help="sample final iterates")
    _potential_flags(run)
    run.add_argument("--D", type=float, default=None)
    run.add_argument("--eta", type=float, default=None)
    run.add_argument("--sigma", type=float, default=None, help="per-step noise std, default sqrt(2*eta)")
    run.add_argument("--T", type=int, default=None)
    run.add_argument("--chains", type=int, default=1000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--dim", type=int, default=1)
    run.add_argument("--kind", choices=("box", "ball"), default="box")
    run.add_argument("--init", default="0", help="scalar or comma vector, default the origin")
    _add_common(run, "csv")
    registry[("simulate", "run")] = (run, _run_simulate)
    validate = simulate_sub.add_parser("validate-mixing", help="empirical check of the TV horizon")
    _potential_flags(validate)
    validate.add_argument("--D", type=float, default=None)
    validate.add_argument("--eta", type=float, default=None)
    validate.add_argument("--chains", type=int, default=100_000)
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument("--dim", type=int, default=1)
    validate.add_argument("--bins", type=int, default=None)
    _add_common(validate, "json")
    registry[("simulate", "validate-mixing")] = (validate, _run_simulate)

    return parser, registry


def _command_path(args) -> tuple:
    path = (args.command,)
    if getattr(args, "subcommand", None):
        path = path + (args.subcommand,)
    return path


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, registry = build_parser()
    try:
        args = parser.parse_args(argv)
        leaf, handler = registry[_command_path(args)]
        known = {a.dest for a in leaf._actions if a.dest != "help"}
        if args.config is not None:
            with open(args.config) as fh:
                loaded = json.load(fh)
            unknown = sorted(set(loaded) - known)
            if unknown:
                raise PreconditionError("config", f"unknown config keys: {', '.join(unknown)}")
            leaf.set_defaults(**loaded)
            args = parser.parse_args(argv)
        if args.echo_config:
            resolved = {
                dest: getattr(args, dest)
                for dest in sorted(known)
                if dest not in _META_FLAGS and getattr(args, dest) is not None
            }
            sys.stdout.write(json.dumps(resolved, sort_keys=True) + "\n")
            return 0
        text = handler(args)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    except PreconditionError as err:
        payload = {"code": err.code, "message": str(err), "required_value": err.required_value}
        sys.stderr.write(json.dumps(payload) + "\n")
        return 2
    except SystemExit:
        raise
    except Exception as err:  # noqa: BLE001 - single exit-code boundary
        sys.stderr.write(json.dumps({"code": "internal", "message": str(err)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
