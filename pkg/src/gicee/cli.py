"""Command-line surface: region sweeps, scheme comparisons, self-validation.

Commands write frontiers as CSV (``r1_bits,r2_bits``) with a JSON sidecar
describing the run, so any plotting tool can reproduce the region charts.
Exit codes: 0 ok, 1 configuration error, 2 validation failure, 3 solver
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .gaussmi import (
    DECODABLE,
    RECEIVERS,
    conditional_mi,
    mi_covariance_oracle,
    receiver_view,
)
from .model import (
    ChannelParams,
    PowerState,
    TimeSharedAllocation,
    preset,
    validate_allocation,
)
from .polytope import (
    Frontier,
    SolverFailure,
    grid_feasibility_oracle,
    project_frontier,
)
from .region import (
    R1_OBJECTIVE,
    R2_OBJECTIVE,
    VARIANTS,
    RegionSpec,
    build_system,
    region_for_allocation,
    region_union,
)
from .schemes import CTDMA_TAGS, ctdma_region

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

_CHANNEL_FLAGS = ("c12", "c21", "c1e", "c2e", "p1", "p2")


class ConfigError(Exception):
    """Bad flags, config file or input data."""


def _add_channel_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="use a built-in example channel (fig2, fig3)")
    for name in _CHANNEL_FLAGS:
        parser.add_argument(f"--{name}", type=float, help=f"channel parameter {name}")
    parser.add_argument("--config", type=Path,
                        help="JSON file with defaults; explicit flags win")


def _merge_config(args: argparse.Namespace) -> dict:
    """Flatten flags over config-file values; None means 'not given'."""
    merged: dict = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        merged.update(loaded)
    for key, value in vars(args).items():
        if key in ("config", "func") or value is None:
            continue
        merged[key] = value
    return merged


def _resolve_channel(cfg: dict) -> ChannelParams:
    preset_name = cfg.get("preset")
    inline = [name for name in _CHANNEL_FLAGS if cfg.get(name) is not None]
    if preset_name and inline:
        raise ConfigError("give either --preset or inline channel values, not both")
    if preset_name:
        try:
            return preset(preset_name)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if len(inline) == len(_CHANNEL_FLAGS):
        try:
            return ChannelParams(**{name: float(cfg[name]) for name in _CHANNEL_FLAGS})
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if inline:
        missing = sorted(set(_CHANNEL_FLAGS) - set(inline))
        raise ConfigError(f"inline channel is missing {missing}")
    raise ConfigError("no channel given: use --preset or all six inline values")


def _require(cfg: dict, key: str, minimum: int, label: str,
             default: int | None = None) -> int:
    value = int(cfg.get(key, default if default is not None else minimum))
    if value < minimum:
        raise ConfigError(f"{label} must be at least {minimum}, got {value}")
    return value


def _sidecar_path(out: Path) -> Path:
    if out.suffix == ".csv":
        return out.with_suffix(".json")
    return Path(str(out) + ".json")


def _write_frontier(out: Path, frontier: Frontier, sidecar: dict) -> None:
    lines = ["r1_bits,r2_bits"]
    lines.extend(f"{r1:.9g},{r2:.9g}" for r1, r2 in frontier.points)
    out.write_text("\n".join(lines) + "\n")
    sidecar = dict(sidecar, tool="gicee", version=__version__,
                   points=len(frontier.points))
    _sidecar_path(out).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def cmd_region(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    channel = _resolve_channel(cfg)
    variant = cfg.get("variant", "r3")
    if variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}, got {variant!r}")
    steps = _require(cfg, "steps", 2, "steps", default=11)
    directions = _require(cfg, "directions", 3, "directions", default=16)
    states = _require(cfg, "states", 1, "states", default=1)
    out = Path(cfg.get("out") or "region.csv")
    spec = RegionSpec(
        channel=channel, variant=variant, steps=steps,
        directions=directions, states=states,
        weight_steps=int(cfg.get("weight_steps", 5)),
    )
    frontier = region_union(spec, workers=cfg.get("workers"))
    _write_frontier(out, frontier, {
        "command": "region",
        "channel": channel.to_dict(),
        "variant": variant,
        "grid": {"steps": steps, "states": states},
        "directions": directions,
        "allocations": frontier.metadata.get("allocations"),
        "infeasible_allocations": frontier.metadata.get("infeasible_allocations"),
    })
    return EXIT_OK


def cmd_ctdma(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    channel = _resolve_channel(cfg)
    variant = cfg.get("variant", "ctdma")
    if variant not in CTDMA_TAGS:
        raise ConfigError(f"variant must be one of {CTDMA_TAGS}, got {variant!r}")
    steps = _require(cfg, "steps", 2, "steps", default=11)
    out = Path(cfg.get("out") or "ctdma.csv")
    frontier = ctdma_region(channel, variant=variant, steps=steps)
    _write_frontier(out, frontier, {
        "command": "ctdma",
        "channel": channel.to_dict(),
        "variant": variant,
        "grid": {"steps": steps},
    })
    return EXIT_OK


def cmd_point(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    channel = _resolve_channel(cfg)
    alloc_path = cfg.get("alloc")
    if not alloc_path:
        raise ConfigError("--alloc FILE is required")
    try:
        data = json.loads(Path(alloc_path).read_text())
        alloc = TimeSharedAllocation.from_dict(data)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot load allocation {alloc_path}: {exc}") from exc
    report = validate_allocation(channel, alloc)
    if not report.ok:
        raise ConfigError(f"allocation invalid ({report.code}): {report.detail}")
    directions = _require(cfg, "directions", 3, "directions", default=64)
    frontier = region_for_allocation(channel, alloc, directions)
    payload = {
        "channel": channel.to_dict(),
        "directions": directions,
        "infeasible": frontier.is_empty,
        "points": [[r1, r2] for r1, r2 in frontier.points],
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    out = cfg.get("out")
    if out:
        Path(out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def _random_state(rng: np.random.Generator, p1: float, p2: float) -> PowerState:
    shares = rng.uniform(0.0, 1.0, 8)
    u1 = shares[:4] / max(shares[:4].sum(), 1e-12) * p1 * rng.uniform(0.0, 1.0)
    u2 = shares[4:] / max(shares[4:].sum(), 1e-12) * p2 * rng.uniform(0.0, 1.0)
    return PowerState(*u1, *u2)


def _random_channel(rng: np.random.Generator) -> ChannelParams:
    return ChannelParams(
        c12=rng.uniform(0.0, 2.5), c21=rng.uniform(0.0, 2.5),
        c1e=rng.uniform(0.0, 1.2), c2e=rng.uniform(0.0, 1.2),
        p1=rng.uniform(1.0, 15.0), p2=rng.uniform(1.0, 15.0),
    )


def mi_oracle_suite(seed: int, samples: int) -> float:
    """Max deviation between the closed MI form and the covariance oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        channel = _random_channel(rng)
        state = PowerState(*rng.uniform(0.0, 8.0, 8))
        receiver = RECEIVERS[rng.integers(0, 3)]
        decodable = sorted(DECODABLE[receiver])
        subset = [i for i in decodable if rng.uniform() < 0.5]
        closed = conditional_mi(receiver_view(channel, state, receiver), subset)
        oracle = mi_covariance_oracle(channel, state, receiver, subset)
        worst = max(worst, abs(closed - oracle))
    return worst


def hausdorff_gap(frontier: Frontier,
                  feasible: frozenset[tuple[float, float]],
                  pitch: float) -> float:
    """Chessboard Hausdorff distance between the oracle's feasible grid set
    and the grid points under the projected frontier, in pitch units."""
    if frontier.is_empty:
        return math.inf if feasible else 0.0
    under = set()
    n1 = int(frontier.max_r1 / pitch + 1e-9)
    n2 = int(frontier.max_r2 / pitch + 1e-9)
    for i in range(n1 + 1):
        limit = frontier.r2_at(i * pitch) + 1e-9
        for j in range(n2 + 1):
            if j * pitch <= limit:
                under.add((i * pitch, j * pitch))
    if not feasible or not under:
        return math.inf if feasible != frozenset(under) else 0.0

    def one_sided(src, dst):
        return max(
            min(max(abs(a1 - b1), abs(a2 - b2)) for b1, b2 in dst)
            for a1, a2 in src
        )

    return max(one_sided(feasible, under), one_sided(under, feasible)) / pitch


def projection_suite(seed: int, systems: int, directions: int = 24) -> float:
    """Worst frontier-vs-grid-oracle gap (pitch units) over random systems.

    Runs until ``systems`` feasible instances have been compared; infeasible
    draws still assert that the oracle agrees the region is empty.  The
    eavesdropper gains are kept moderate so feasible systems are common.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    feasible_seen = 0
    for _ in range(50 * systems):
        if feasible_seen >= systems:
            break
        channel = ChannelParams(
            c12=rng.uniform(0.1, 2.2), c21=rng.uniform(0.1, 2.2),
            c1e=rng.uniform(0.0, 0.7), c2e=rng.uniform(0.0, 0.7),
            p1=rng.uniform(1.0, 15.0), p2=rng.uniform(1.0, 15.0),
        )
        alloc = TimeSharedAllocation.single_state(
            _random_state(rng, channel.p1, channel.p2)
        )
        system = build_system(channel, alloc)
        frontier = project_frontier(system, R1_OBJECTIVE, R2_OBJECTIVE, directions)
        if frontier.is_empty:
            if grid_feasibility_oracle(system, R1_OBJECTIVE, R2_OBJECTIVE, 0.25):
                worst = max(worst, math.inf)
            continue
        feasible_seen += 1
        pitch = max(frontier.max_r1, frontier.max_r2, 1e-3) / 10.0
        feasible = grid_feasibility_oracle(system, R1_OBJECTIVE, R2_OBJECTIVE, pitch)
        worst = max(worst, hausdorff_gap(frontier, feasible, pitch))
    if feasible_seen < systems:
        return math.inf
    return worst


def submodularity_suite(seed: int, trials: int = 40) -> float:
    """Worst submodularity margin of the subset-MI set function (>= 0 ok)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        channel = _random_channel(rng)
        state = PowerState(*rng.uniform(0.0, 8.0, 8))
        receiver = RECEIVERS[rng.integers(0, 3)]
        view = receiver_view(channel, state, receiver)
        ground = sorted(DECODABLE[receiver])
        subsets = []
        for mask in range(2 ** len(ground)):
            subsets.append(frozenset(
                ground[k] for k in range(len(ground)) if mask >> k & 1
            ))
        value = {s: conditional_mi(view, s) for s in subsets}
        for small in subsets:
            for big in subsets:
                if not small <= big:
                    continue
                for i in ground:
                    if i in big:
                        continue
                    margin = (value[small | {i}] - value[small]) - (
                        value[big | {i}] - value[big]
                    )
                    worst = min(worst, margin)
    return -worst


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    seed = int(cfg.get("seed", 0))
    samples = _require(cfg, "samples", 1, "samples", default=1000)
    systems = _require(cfg, "systems", 1, "systems", default=20)
    tol = float(cfg.get("tol", 1e-12))

    ok = True
    dev = mi_oracle_suite(seed, samples)
    passed = dev <= tol
    ok &= passed
    print(f"mi-oracle: {'pass' if passed else 'FAIL'} "
          f"max_dev={dev:.3e} tol={tol:.1e} samples={samples}")

    gap = projection_suite(seed + 1, systems)
    passed = gap <= 1.0 + 1e-6
    ok &= passed
    print(f"projection: {'pass' if passed else 'FAIL'} "
          f"max_gap={gap:.3f} pitch units, systems={systems}")

    margin = submodularity_suite(seed + 2)
    passed = margin <= 1e-12
    ok &= passed
    print(f"submodularity: {'pass' if passed else 'FAIL'} "
          f"worst_violation={margin:.3e}")

    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gicee",
        description="Secrecy rate regions for the two-user Gaussian "
                    "interference channel with an external eavesdropper",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_region = sub.add_parser("region", help="binning/prefixing power-grid region")
    _add_channel_args(p_region)
    p_region.add_argument("--variant")
    p_region.add_argument("--steps", type=int)
    p_region.add_argument("--directions", type=int)
    p_region.add_argument("--states", type=int)
    p_region.add_argument("--weight-steps", dest="weight_steps", type=int)
    p_region.add_argument("--workers", type=int)
    p_region.add_argument("--out", type=str)
    p_region.set_defaults(func=cmd_region)

    p_ctdma = sub.add_parser("ctdma", help="closed-form time-division region")
    _add_channel_args(p_ctdma)
    p_ctdma.add_argument("--variant")
    p_ctdma.add_argument("--steps", type=int)
    p_ctdma.add_argument("--out", type=str)
    p_ctdma.set_defaults(func=cmd_ctdma)

    p_point = sub.add_parser("point", help="frontier of one allocation file")
    _add_channel_args(p_point)
    p_point.add_argument("--alloc", type=str, help="allocation JSON file")
    p_point.add_argument("--directions", type=int)
    p_point.add_argument("--out", type=str)
    p_point.set_defaults(func=cmd_point)

    p_val = sub.add_parser("validate", help="run the internal oracle suites")
    p_val.add_argument("--config", type=Path)
    p_val.add_argument("--seed", type=int)
    p_val.add_argument("--samples", type=int)
    p_val.add_argument("--systems", type=int)
    p_val.add_argument("--tol", type=float)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
