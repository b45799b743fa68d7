"""Command-line entry point: ``fogoffload {generate,run,verify,analyze,sweep}``.

Exit codes: 0 success, 1 verification negative, 2 usage or domain error,
3 I/O error, 4 non-convergence, 5 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import game, oracle, scenario as scen
from .experiments import sweep
from .model import InfeasibleProfileError, LOCAL, all_local

OK, NEGATIVE, USAGE, IO, NO_CONVERGENCE, CAP = 0, 1, 2, 3, 4, 5


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _weights(text: str, name: str):
    """``LO:HI`` -> range, ``X`` -> fixed value."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return (float(lo), float(hi)), None
        return None, float(text)
    except ValueError:
        raise CommandError(USAGE, f"{name}: expected LO:HI or a number, got {text!r}") from None


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise CommandError(IO, f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise CommandError(USAGE, f"{path}: malformed JSON: {e}") from None


def _write(path: str, text: str) -> None:
    try:
        scen.write_atomic(path, text)
    except OSError as e:
        raise CommandError(IO, f"cannot write {path}: {e.strerror}") from None


def _load_scenario(path: str):
    try:
        return scen.load(path)
    except OSError as e:
        raise CommandError(IO, f"cannot read {path}: {e.strerror}") from None
    except scen.ScenarioFormatError as e:
        raise CommandError(USAGE, f"{path}: {e}") from None


def _load_profile(path: str, n_users: int) -> tuple:
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("profile")
    if not isinstance(data, list):
        raise CommandError(USAGE, f"{path}: expected a profile list or a report with 'profile'")
    try:
        profile = tuple(game.parse_profile_entry(x) for x in data)
    except ValueError as e:
        raise CommandError(USAGE, f"{path}: {e}") from None
    if len(profile) != n_users:
        raise CommandError(USAGE, f"{path}: profile has {len(profile)} entries for {n_users} users")
    return profile


def _generator_config(args, base: dict) -> scen.GeneratorConfig:
    if args.preset and (args.lambda_e or args.lambda_t):
        raise CommandError(USAGE, "--preset delay-sensitive conflicts with --lambda-e/--lambda-t")
    cfg = dict(base)
    for flag, key in (("users", "n_users"), ("fog", "n_fog"), ("cloud_rtt", "cloud_rtt_s"), ("seed", "seed")):
        if getattr(args, flag) is not None:
            cfg[key] = getattr(args, flag)
    if args.lambda_e:
        rng, fixed = _weights(args.lambda_e, "--lambda-e")
        cfg.pop("weight_energy", None)
        if rng:
            cfg["weight_energy_range"] = rng
        else:
            cfg["weight_energy"] = fixed
    if args.lambda_t:
        rng, fixed = _weights(args.lambda_t, "--lambda-t")
        cfg.pop("weight_time", None)
        if rng:
            cfg["weight_time_range"] = rng
        else:
            cfg["weight_time"] = fixed
    if args.preset == "delay-sensitive":
        cfg["weight_energy"], cfg["weight_time"] = 0.0, 1.0
    try:
        return scen.GeneratorConfig.from_dict(cfg)
    except (TypeError, ValueError) as e:
        raise CommandError(USAGE, str(e)) from None


def _dynamics(args) -> game.DynamicsConfig:
    eps = args.epsilon
    if args.algo == "eps-br":
        if eps is None or not eps > 0:
            raise CommandError(USAGE, "--algo eps-br requires a positive --epsilon")
    else:
        if eps not in (None, 0, 0.0):
            raise CommandError(USAGE, "--epsilon only applies to --algo eps-br")
        eps = 0.0
    shuffle = None
    order = getattr(args, "order", "byid")
    if order != "byid":
        head, _, seed = order.partition(":")
        if head != "shuffle" or not seed.isdigit():
            raise CommandError(USAGE, f"--order: expected byid or shuffle:SEED, got {order!r}")
        shuffle = int(seed)
    try:
        return game.DynamicsConfig(epsilon=eps, max_rounds=getattr(args, "max_rounds", None),
                                   shuffle_seed=shuffle)
    except ValueError as e:
        raise CommandError(USAGE, str(e)) from None


def cmd_generate(args) -> int:
    base = _read_json(args.config) if args.config else {}
    if not isinstance(base, dict):
        raise CommandError(USAGE, f"{args.config}: expected a JSON object")
    if "n_users" not in base and args.users is None:
        raise CommandError(USAGE, "--users is required")
    cfg = _generator_config(args, base)
    _write(args.out, scen.dumps(scen.generate(cfg)))
    return OK


def cmd_run(args) -> int:
    s = _load_scenario(args.scenario)
    dyn = _dynamics(args)
    init = all_local(s.n_users) if args.init == "local" else _load_profile(args.init, s.n_users)
    try:
        report = game.run_dynamics(s, dyn, init)
    except InfeasibleProfileError as e:
        raise CommandError(USAGE, f"--init: {e}") from None
    _write(args.out, json.dumps(report.to_dict(), indent=2) + "\n")
    if not report.converged:
        print(f"no convergence after {report.rounds} rounds", file=sys.stderr)
        return NO_CONVERGENCE
    return OK


def cmd_verify(args) -> int:
    s = _load_scenario(args.scenario)
    profile = _load_profile(args.profile, s.n_users)
    eps = args.epsilon or 0.0
    if eps < 0:
        raise CommandError(USAGE, "--epsilon must be >= 0")
    try:
        bad = game.first_violation(s, profile, eps)
    except InfeasibleProfileError as e:
        raise CommandError(USAGE, str(e)) from None
    kind = f"{eps}-Nash equilibrium" if eps > 0 else "Nash equilibrium"
    if bad is None:
        print(f"ok: profile is a {kind}")
        return OK
    n, a, gain = bad
    target = "local" if a == LOCAL else f"server {a}"
    print(f"not a {kind}: user {n} gains {gain!r} by switching to {target}")
    return NEGATIVE


def cmd_analyze(args) -> int:
    s = _load_scenario(args.scenario)
    try:
        report = oracle.poa(s, cap=args.cap, heuristic=args.heuristic)
    except oracle.EnumerationCapError as e:
        print(f"{e}; pass --heuristic for an estimate", file=sys.stderr)
        return CAP
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if report.exact and not report.bound_holds:
        print(f"PoA {report.poa} exceeds its bound {report.bound}", file=sys.stderr)
        return NEGATIVE
    return OK


def _values(text: str, axis: str) -> list:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise CommandError(USAGE, "--values must list at least one value")
    try:
        return [float(t) if axis == "cloud_rtt" else int(t) for t in items]
    except ValueError:
        raise CommandError(USAGE, f"--values: cannot parse {text!r}") from None


def cmd_sweep(args) -> int:
    axis = {"n": "N", "s": "S", "rtt": "cloud_rtt"}[args.axis]
    values = _values(args.values, axis)
    if args.reps < 1:
        raise CommandError(USAGE, "--reps must be >= 1")
    template = _generator_config(args, {"n_users": 200, "n_fog": 50})
    dyn = _dynamics(args)
    try:
        result = sweep(axis, values, template, dyn, args.reps, template.seed,
                       compute_opt=not args.no_opt, workers=args.workers)
    except ValueError as e:
        raise CommandError(USAGE, str(e)) from None
    _write(args.out_csv, result.to_csv())
    _write(args.out_json, result.to_json())
    return OK


def _scenario_flags(p):
    p.add_argument("--users", type=int, help="number of users N")
    p.add_argument("--fog", type=int, help="number of fog nodes S")
    p.add_argument("--cloud-rtt", type=float, help="cloud roundtrip delay in seconds")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    p.add_argument("--lambda-e", help="energy weight, LO:HI range or a fixed value")
    p.add_argument("--lambda-t", help="time weight, LO:HI range (LO > 0) or a fixed value")
    p.add_argument("--preset", choices=["delay-sensitive"], help="pin lambda_E=0, lambda_T=1")


def _dynamics_flags(p):
    p.add_argument("--algo", choices=["br", "eps-br"], default="br")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--order", default="byid", help="byid or shuffle:SEED")
    p.add_argument("--max-rounds", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fogoffload", description="Fog-cloud computation offloading game simulator.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("generate", help="write a seeded random scenario")
    _scenario_flags(p)
    p.add_argument("--config", help="GeneratorConfig JSON file; flags override its fields")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run best-response or epsilon-better-response dynamics")
    p.add_argument("--scenario", required=True)
    _dynamics_flags(p)
    p.add_argument("--init", default="local", help="'local' or a profile/report JSON file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check a profile is a (epsilon-)Nash equilibrium")
    p.add_argument("--scenario", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--epsilon", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="price of anarchy and its bound")
    p.add_argument("--scenario", required=True)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.add_argument("--heuristic", action="store_true",
                   help="estimate from the dynamics fixed point when the space is too large")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="replicated parameter sweep to CSV and JSON")
    p.add_argument("--axis", choices=["n", "s", "rtt"], required=True)
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--reps", type=int, default=20)
    _scenario_flags(p)
    _dynamics_flags(p)
    p.add_argument("--no-opt", action="store_true", help="skip the social-optimum column")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-json", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandError as e:
        print(f"fogoffload {args.verb}: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
