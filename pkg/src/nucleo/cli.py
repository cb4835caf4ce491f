"""Command-line front end: ``nucleo {compute,least-core,profile,verify,brute}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import enumeration
from .dp_oracle import profile
from .errors import DimensionMismatchError, NucleoError, ValidationError
from .game import Game, check_imputation, format_rational, load_game, parse_rational
from .solver import NucleolusSolver, SolverConfig

COMMANDS = ("compute", "least-core", "profile", "verify", "brute")
EXIT_MISMATCH = 4


@dataclass
class RunConfig:
    command: str
    game_path: str
    payoff: list[Fraction] | None = None
    j: int | None = None
    seed: int = 0
    output_format: str = "json"
    guard_n: int | None = None
    stages: bool = False


def _rats(xs) -> list[str]:
    return [format_rational(x) for x in xs]


def _stage_json(rec, full: bool) -> dict:
    out = {"epsilon": format_rational(rec.epsilon), "tight_count": str(rec.tight_count)}
    if full:
        out.update(
            index=rec.index,
            rank=rec.rank,
            interior_point=_rats(rec.interior_point),
            generated_constraints=rec.cuts,
            oracle_calls=rec.oracle_calls,
            lp_solves=rec.lp_solves,
            face_basis=[
                {"coefficients": _rats(e.coefficients), "rhs": format_rational(e.rhs)}
                for e in rec.face_basis.equations
            ],
        )
    return out


def _need_payoff(cfg: RunConfig, game: Game) -> list[Fraction]:
    if cfg.payoff is None:
        raise ValidationError(f"--payoff is required for {cfg.command}")
    if len(cfg.payoff) != game.n:
        raise DimensionMismatchError(
            f"payoff has {len(cfg.payoff)} entries, game has {game.n} agents"
        )
    return cfg.payoff


def execute(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; returns ``(exit status, report)``. Raises NucleoError on failure."""
    game = load_game(cfg.game_path)
    report: dict = {"command": cfg.command, "game": game.to_json()}
    guard = cfg.guard_n if cfg.guard_n is not None else enumeration.NUCLEOLUS_GUARD
    status = 0
    if cfg.command == "compute":
        solver = NucleolusSolver(game, SolverConfig(seed=cfg.seed))
        point, history = solver.run()
        report["nucleolus"] = _rats(point)
        report["stages"] = [_stage_json(r, cfg.stages) for r in history]
    elif cfg.command == "least-core":
        rec = NucleolusSolver(game, SolverConfig(seed=cfg.seed)).solve_stage()
        report["epsilon"] = format_rational(rec.epsilon)
        report["payoff"] = _rats(rec.interior_point)
        if cfg.stages:
            report["stages"] = [_stage_json(rec, True)]
    elif cfg.command == "profile":
        p = _need_payoff(cfg, game)
        j = cfg.j if cfg.j is not None else game.n + 1
        if j < 1:
            raise ValidationError("--j must be >= 1")
        prof = profile(game, p, j)
        report["payoff"] = _rats(p)
        report["m"] = _rats(prof.m)
        report["counts"] = [str(c) for c in prof.counts]
    elif cfg.command == "verify":
        p = check_imputation(game, _need_payoff(cfg, game))
        ref = enumeration.brute_nucleolus(game, guard=guard)
        report["payoff"] = _rats(p)
        report["nucleolus"] = _rats(ref)
        report["match"] = tuple(p) == tuple(ref)
        status = 0 if report["match"] else EXIT_MISMATCH
    elif cfg.command == "brute":
        stages = enumeration.brute_stages(game, guard=guard)
        report["nucleolus"] = _rats(stages[-1].point)
        report["stages"] = [
            {"epsilon": format_rational(s.epsilon), "tight_count": str(len(s.tight))}
            for s in stages
        ]
    else:  # argparse guards this
        raise ValidationError(f"unknown command {cfg.command!r}")
    return status, report


def _text(report: dict) -> str:
    lines = [f"game: quota {report['game']['quota']}, weights {report['game']['weights']}"]
    for key in ("nucleolus", "payoff"):
        if key in report:
            lines.append(f"{key}: " + " ".join(report[key]))
    if "epsilon" in report:
        lines.append(f"least-core value: {report['epsilon']}")
    if "stages" in report:
        lines.append(f"{'stage':>5}  {'epsilon':>14}  tight_count")
        for i, st in enumerate(report["stages"], start=1):
            lines.append(f"{i:>5}  {st['epsilon']:>14}  {st['tight_count']}")
    if "m" in report:
        lines.append(f"{'level':>5}  {'deficit':>14}  count")
        for t, (m, c) in enumerate(zip(report["m"], report["counts"]), start=1):
            lines.append(f"{t:>5}  {m:>14}  {c}")
    if "match" in report:
        lines.append("match: " + ("yes" if report["match"] else "no"))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nucleo", description="Exact least core and nucleolus of weighted voting games."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--game", required=True, help='JSON file {"quota": q, "weights": [...]}')
    parser.add_argument("--payoff", help="comma-separated rationals, e.g. 1/2,1/2,0")
    parser.add_argument("--j", type=int, help="number of deficit levels (default n+1)")
    parser.add_argument("--seed", type=int, help="certification seed (fallback: $NUCLEO_SEED)")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--guard-n", type=int, help="enumeration limit for verify/brute")
    parser.add_argument("--stages", action="store_true", help="dump full per-stage records")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    try:
        seed = args.seed
        if seed is None:
            env = os.environ.get("NUCLEO_SEED")
            try:
                seed = int(env) if env else 0
            except ValueError as exc:
                raise ValidationError(f"NUCLEO_SEED is not an integer: {env!r}") from exc
        payoff = None
        if args.payoff is not None:
            payoff = [parse_rational(t) for t in args.payoff.split(",")]
        cfg = RunConfig(
            command=args.command,
            game_path=args.game,
            payoff=payoff,
            j=args.j,
            seed=seed,
            output_format=fmt,
            guard_n=args.guard_n,
            stages=args.stages,
        )
        status, report = execute(cfg)
    except NucleoError as exc:
        err = {"type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        if fmt == "json":
            print(json.dumps({"error": err}, indent=2))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(json.dumps(report, indent=2) if fmt == "json" else _text(report))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
