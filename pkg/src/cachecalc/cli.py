"""Command-line sweeps over the memory ratio.

    cachecalc run --K 3 --N 3 --gamma 0:1/60:1 --schemes linp,uncoded,converse
    cachecalc verify --K 3 --N 3 --gamma 1/2 --trials 10 --seed 0
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, bounds, gf, lp
from .config import SystemConfig
from .sim import NonGenericPlacement, run_trial

SCHEMES = ("linp", "uncoded", "mds", "yma", "converse", "table1")
DEFAULT_SCHEMES = ("linp", "uncoded", "mds", "converse")


class SpecError(ValueError):
    pass


@dataclass
class RunSpec:
    K: int
    N: int
    gamma_grid: list[Fraction]
    schemes: tuple[str, ...] = DEFAULT_SCHEMES
    sim: bool = False
    B_min: int = 24
    trials: int = 10
    seed: int = 0
    demand: str = "canonical"
    output_path: str | None = None
    format: str = "tsv"
    jobs: int = 1

    def validate(self) -> None:
        if self.K < 1 or self.N < 1:
            raise SpecError("K and N must be positive")
        if not self.gamma_grid:
            raise SpecError("gamma grid is empty")
        if any(not 0 <= g <= 1 for g in self.gamma_grid):
            raise SpecError("gamma values must lie in [0, 1]")
        if any(b <= a for a, b in zip(self.gamma_grid, self.gamma_grid[1:])):
            raise SpecError("gamma grid must be strictly increasing")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise SpecError(f"unknown schemes: {', '.join(sorted(unknown))}")
        if self.sim and "linp" not in self.schemes:
            raise SpecError("--sim requires the linp scheme")
        if self.format not in ("tsv", "csv"):
            raise SpecError("format must be tsv or csv")
        if self.trials < 1 or self.B_min < 1:
            raise SpecError("trials and B-min must be positive")


def parse_gamma(text: str) -> list[Fraction]:
    """``start:step:end`` (inclusive, exact) or a comma-separated list."""
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise SpecError(f"range must be start:step:end, got {text!r}")
            start, step, end = (Fraction(x) for x in parts)
            if step <= 0:
                raise SpecError("gamma step must be positive")
            out = []
            g = start
            while g <= end:
                out.append(g)
                g += step
            return out
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"cannot parse gamma grid {text!r}: {exc}") from exc


def fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return f"{v:.12g}"


def scheme_value(name: str, cfg: SystemConfig):
    if name == "linp":
        return lp.solve(cfg).objective
    if name == "uncoded":
        return bounds.uncoded_load(cfg)
    if name == "mds":
        return bounds.mds_load(cfg).load if cfg.gamma > 0 else None
    if name == "yma":
        return bounds.yma_envelope_value(cfg)
    if name == "converse":
        return bounds.converse(cfg)
    if name == "table1":
        return bounds.table1_load(cfg) if cfg.K >= 2 and cfg.N >= 2 else None
    raise SpecError(name)


def _trial(args):
    cfg, seed, B_min, demand = args
    return run_trial(cfg, seed, B_min=B_min, demand=demand)


def simulate(spec: RunSpec, cfg: SystemConfig):
    """All trials for one gamma, in seed order."""
    jobs = [(cfg, spec.seed + i, spec.B_min, spec.demand) for i in range(spec.trials)]
    if spec.jobs > 1:
        with ProcessPoolExecutor(spec.jobs) as ex:
            return list(ex.map(_trial, jobs))
    return [_trial(j) for j in jobs]


def _meta(spec: RunSpec) -> list[str]:
    return [
        f"# meta: K={spec.K} N={spec.N} seed={spec.seed} prime={gf.get_prime()} version={__version__}",
        "# note: converse = max(Delta1, Delta2 where K>=3, N>=2); general-placement bounds are not included",
    ]


def run(spec: RunSpec) -> int:
    spec.validate()
    order = [s for s in SCHEMES if s in spec.schemes]
    sep = "\t" if spec.format == "tsv" else ","
    header = ["gamma"] + order + (["sim_load", "sim_ok"] if spec.sim else [])
    lines = _meta(spec) + [sep.join(header)]
    failed = False
    for g in spec.gamma_grid:
        cfg = SystemConfig(spec.K, spec.N, g)
        row = [fmt(g)] + [fmt(scheme_value(s, cfg)) for s in order]
        if spec.sim:
            try:
                res = simulate(spec, cfg)
            except NonGenericPlacement:
                row += ["NA", f"0/{spec.trials}"]
                failed = True
            else:
                loads = {r.load for r in res}
                passed = sum(r.ok for r in res)
                row += [fmt(loads.pop()) if len(loads) == 1 else "mixed", f"{passed}/{spec.trials}"]
                failed |= passed < spec.trials
        lines.append(sep.join(row))
    _emit(spec, lines)
    return 1 if failed else 0


def verify(spec: RunSpec) -> int:
    spec.validate()
    lines = _meta(spec)
    failed = False
    for g in spec.gamma_grid:
        cfg = SystemConfig(spec.K, spec.N, g)
        obj = lp.solve(cfg).objective
        try:
            res = simulate(spec, cfg)
        except NonGenericPlacement as exc:
            lines.append(f"gamma={g} lp={obj} sim=NA decode=0/{spec.trials} error={exc}")
            failed = True
            continue
        loads = {r.load for r in res}
        passed = sum(r.ok for r in res)
        fallbacks = sum(r.fallback for r in res)
        sim = fmt(loads.pop()) if len(loads) == 1 else "mixed"
        lines.append(f"gamma={g} lp={obj} sim={sim} decode={passed}/{spec.trials} fallback={fallbacks}")
        failed |= passed < spec.trials or sim != str(obj)
    _emit(spec, lines)
    return 1 if failed else 0


def _emit(spec: RunSpec, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if spec.output_path:
        Path(spec.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cachecalc", description=__doc__.splitlines()[0])
    ap.add_argument("command", nargs="?", choices=("run", "verify"), default="run")
    ap.add_argument("--K", type=int, required=True, help="active users")
    ap.add_argument("--N", type=int, required=True, help="files")
    ap.add_argument("--gamma", required=True, help="start:step:end or comma list of fractions")
    ap.add_argument("--schemes", default=",".join(DEFAULT_SCHEMES), help=f"subset of {','.join(SCHEMES)}")
    ap.add_argument("--sim", action="store_true", help="add simulated load columns")
    ap.add_argument("--B-min", type=int, default=24, dest="B_min")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--demand", choices=("canonical", "random"), default="canonical")
    ap.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    ap.add_argument("--out", default=None)
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for simulation trials")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        spec = RunSpec(
            K=args.K,
            N=args.N,
            gamma_grid=parse_gamma(args.gamma),
            schemes=tuple(s.strip() for s in args.schemes.split(",") if s.strip()),
            sim=args.sim,
            B_min=args.B_min,
            trials=args.trials,
            seed=args.seed,
            demand=args.demand,
            output_path=args.out,
            format=args.format,
            jobs=args.jobs,
        )
        spec.validate()
        if args.command == "verify":
            return verify(spec)
        return run(spec)
    except SpecError as exc:
        ap.print_usage(sys.stderr)
        print(f"cachecalc: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cachecalc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
