"""Formula-vs-oracle verification records and the batch sweep harness.

Every record is self-contained: it stores the input, both dimensions, the
case path and the seeds/primes used, so any mismatch replays exactly.  Sweep
output is JSONL, one record per instance in deterministic grid order, byte
identical across reruns (parallel workers included).
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .classify import InvariantViolation
from .dimension import dimension
from .oracle import DEFAULT_PRIME, CurveSamplingError, oracle_dimension
from .systems import FatPointSystem, _raw_virtual_dim


@dataclass(frozen=True)
class VerificationRecord:
    d: int
    m: tuple[int, ...]
    formula_dim: int | None
    oracle_dim: int | None
    match: bool
    stable: bool
    case_path: tuple[str, ...]
    vdim: int
    edim: int
    speciality: int | None
    primes: tuple[int, ...]
    seeds: tuple[int, ...]
    trials: tuple[dict, ...] = ()
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "m": list(self.m),
            "formula_dim": self.formula_dim,
            "oracle_dim": self.oracle_dim,
            "match": self.match,
            "stable": self.stable,
            "case_path": list(self.case_path),
            "vdim": self.vdim,
            "edim": self.edim,
            "speciality": self.speciality,
            "primes": list(self.primes),
            "seeds": list(self.seeds),
            "trials": [dict(t) for t in self.trials],
            "error": self.error,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


def run_verification(
    system: FatPointSystem,
    primes=(DEFAULT_PRIME,),
    seeds=(0, 1, 2),
) -> VerificationRecord:
    """Run the formula driver and the oracle on one system, emit one record."""
    norm = system.normalize()
    vdim = _raw_virtual_dim(norm)
    edim = max(-1, vdim)
    formula_dim = None
    oracle_dim = None
    case_path: tuple[str, ...] = ()
    speciality = None
    stable = False
    trials: tuple[dict, ...] = ()
    error = None
    try:
        res = dimension(norm)
        formula_dim = res.dim
        case_path = res.case_path
        speciality = res.speciality
        report = oracle_dimension(norm, primes=primes, seeds=seeds)
        oracle_dim = report.dim
        stable = report.stable
        trials = tuple(t.to_json_dict() for t in report.trials)
    except (InvariantViolation, CurveSamplingError, ValueError, RuntimeError) as exc:
        error = f"{type(exc).__name__}: {exc}"
    match = error is None and formula_dim == oracle_dim
    return VerificationRecord(
        d=norm.degree,
        m=norm.multiplicities,
        formula_dim=formula_dim,
        oracle_dim=oracle_dim,
        match=match,
        stable=stable,
        case_path=case_path,
        vdim=vdim,
        edim=edim,
        speciality=speciality,
        primes=tuple(primes),
        seeds=tuple(seeds),
        trials=trials,
        error=error,
    )


@dataclass(frozen=True)
class SweepConfig:
    """Grid bounds and trial plan for a verification sweep."""

    d_max: int
    r_max: int
    m_max: int
    mode: str = "exhaustive"
    samples: int | None = None
    primes: tuple[int, ...] = (DEFAULT_PRIME,)
    seed: int = 0
    trials: int = 3
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(self.primes))
        if self.d_max < 1 or self.r_max < 1 or self.m_max < 1:
            raise ValueError("grid bounds must be positive")
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "random" and (self.samples is None or self.samples < 1):
            raise ValueError("random mode needs samples >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        for p in self.primes:
            if p <= 2 * self.d_max:
                raise ValueError(f"prime {p} must exceed 2 * d_max = {2 * self.d_max}")

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(range(self.seed, self.seed + self.trials))

    @classmethod
    def from_json_dict(cls, data: dict) -> "SweepConfig":
        known = {
            "d_max",
            "r_max",
            "m_max",
            "mode",
            "samples",
            "primes",
            "seed",
            "trials",
            "workers",
        }
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "primes" in kwargs:
            kwargs["primes"] = tuple(int(p) for p in kwargs["primes"])
        return cls(**kwargs)


def enumerate_grid(d_max: int, r_max: int, m_max: int):
    """Yield (d, mults) in deterministic lexicographic grid order.

    Multiplicities are non-increasing multisets only: the dimension is
    permutation invariant, so this shrinks the grid by orders of magnitude.
    """
    values = tuple(range(m_max, 0, -1))
    for d in range(d_max + 1):
        for r in range(r_max + 1):
            for mults in itertools.combinations_with_replacement(values, r):
                yield d, mults


def grid_instances(config: SweepConfig) -> list[tuple[int, tuple[int, ...]]]:
    grid = list(enumerate_grid(config.d_max, config.r_max, config.m_max))
    if config.mode == "exhaustive":
        return grid
    rng = random.Random(f"sweep:{config.seed}")
    take = min(config.samples, len(grid))
    picked = rng.sample(range(len(grid)), take)
    return [grid[i] for i in sorted(picked)]


def _sweep_task(args) -> dict:
    d, mults, primes, seeds = args
    record = run_verification(FatPointSystem(d, mults), primes=primes, seeds=seeds)
    return record.to_json_dict()


def run_sweep(config: SweepConfig, out_stream=None) -> dict:
    """Execute the sweep, stream JSONL records, return the summary tallies."""
    instances = grid_instances(config)
    tasks = [(d, m, config.primes, config.seeds) for d, m in instances]
    summary = {"total": 0, "matches": 0, "mismatches": 0, "unstable": 0, "errors": 0}

    def consume(rec: dict):
        summary["total"] += 1
        if rec["error"] is not None:
            summary["errors"] += 1
        elif rec["match"]:
            summary["matches"] += 1
        else:
            summary["mismatches"] += 1
        if rec["error"] is None and not rec["stable"]:
            summary["unstable"] += 1
        if out_stream is not None:
            out_stream.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")

    if config.workers > 1:
        # executor.map preserves submission order: the writer stays deterministic
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for rec in pool.map(_sweep_task, tasks, chunksize=16):
                consume(rec)
    else:
        for task in tasks:
            consume(_sweep_task(task))
    return summary
