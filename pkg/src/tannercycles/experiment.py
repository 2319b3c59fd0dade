"""
Monte Carlo driver: sample graphs from an ensemble, count their short
cycles and aggregate the counts against the analytic predictions.

Trial ``i`` always uses ``RngStream(master_seed, i)``, so a report is
deterministic for a fixed configuration and any trial can be replayed on
its own regardless of thread count or completion order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .census import census_any
from .ensembles import EnsembleKind, EnsembleSpec, draw
from .graph import BipartiteMultigraph, ExponentMatrix
from .rng import RngStream
from .stats import histogram_of, poisson_gof
from .theory import (
    MeanBounds,
    cyclic_lift_mean_bounds,
    expected_cycles_irregular,
    lets_multiplicity_estimate,
)
from .walks import EnumerationCapError, tbc_count

CSV_VERSION = 1
CSV_COLUMNS = ("c", "mean", "var", "theory_lower", "theory_point", "theory_upper", "gof_stat", "gof_p")
INTERPRETATION_NOTE = (
    "reported values are means over independent trials; published table entries "
    "are read as single realizations"
)


class TrialError(RuntimeError):
    def __init__(self, trial: int, cause: BaseException):
        super().__init__(f"trial {trial} failed: {cause}")
        self.trial = trial


@dataclass(frozen=True)
class ExperimentConfig:
    spec: EnsembleSpec
    trials: int
    max_cycle_length: int
    master_seed: int = 0
    chordless: bool = False
    output_path: str | None = None
    format: str = "json"
    threads: int = 1
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.max_cycle_length < 4 or self.max_cycle_length % 2:
            raise ValueError("max_cycle_length must be even and at least 4")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    @property
    def lengths(self) -> range:
        return range(4, self.max_cycle_length + 1, 2)


@dataclass(frozen=True)
class CycleStats:
    c: int
    histogram: dict[int, int]
    mean: float
    var: float
    theory: MeanBounds | None = None
    gof_stat: float | None = None
    gof_p: float | None = None

    @property
    def trials(self) -> int:
        return sum(self.histogram.values())

    @property
    def stderr(self) -> float:
        return math.sqrt(self.var / self.trials) if self.trials > 1 else math.nan

    def row(self) -> dict:
        th = self.theory
        return {
            "c": self.c,
            "mean": self.mean,
            "var": self.var,
            "theory_lower": th.lower if th else None,
            "theory_point": th.point_estimate if th else None,
            "theory_upper": th.upper if th else None,
            "gof_stat": self.gof_stat,
            "gof_p": self.gof_p,
        }


@dataclass(frozen=True)
class EnsembleReport:
    ensemble: dict
    master_seed: int
    trials: int
    stats: tuple[CycleStats, ...]
    chordless_stats: tuple[CycleStats, ...] | None
    trial_counts: tuple[dict[int, int], ...]
    trial_chordless: tuple[dict[int, int], ...] | None = None
    notes: tuple[str, ...] = field(default=(INTERPRETATION_NOTE,))

    @property
    def seeds(self) -> list[tuple[int, int]]:
        """``(master_seed, stream_index)`` of every trial."""
        return [(self.master_seed, i) for i in range(self.trials)]

    def by_length(self, c: int, chordless: bool = False) -> CycleStats:
        src = self.chordless_stats if chordless else self.stats
        if src is None:
            raise KeyError("report has no chordless statistics")
        for s in src:
            if s.c == c:
                return s
        raise KeyError(f"no statistics for length {c}")

    def samples(self, c: int, chordless: bool = False) -> list[int]:
        src = self.trial_chordless if chordless else self.trial_counts
        if src is None:
            raise KeyError("report has no chordless samples")
        return [t[c] for t in src]

    def to_json(self) -> str:
        def stats_json(items):
            if items is None:
                return None
            return [
                {**s.row(), "histogram": {str(k): v for k, v in s.histogram.items()}}
                for s in items
            ]

        doc = {
            "csv_version": CSV_VERSION,
            "ensemble": self.ensemble,
            "master_seed": self.master_seed,
            "trials": self.trials,
            "seeds": self.seeds,
            "stats": stats_json(self.stats),
            "chordless_stats": stats_json(self.chordless_stats),
            "notes": list(self.notes),
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_csv(self, chordless: bool = False) -> str:
        src = self.chordless_stats if chordless else self.stats
        return stats_to_csv(src)


def stats_to_csv(items) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for s in items:
        writer.writerow({k: "" if v is None else v for k, v in s.row().items()})
    return buf.getvalue()


def replay(cfg: ExperimentConfig, trial: int) -> tuple[BipartiteMultigraph, ExponentMatrix | None]:
    """Regenerate the sample graph of one trial."""
    return draw(cfg.spec, RngStream(cfg.master_seed, trial))


def _run_trial(cfg: ExperimentConfig, trial: int) -> tuple[dict[int, int], dict[int, int] | None]:
    try:
        g, _ = replay(cfg, trial)
        census = census_any(g, cfg.max_cycle_length, cfg.chordless)
    except Exception as exc:
        raise TrialError(trial, exc) from exc
    return census.counts, census.chordless_counts


def theory_for(spec: EnsembleSpec, c: int, chordless: bool = False) -> MeanBounds | None:
    """Analytic prediction attached to the report, or ``None`` if unavailable."""
    try:
        if spec.kind in (EnsembleKind.SIMPLE, EnsembleKind.CONFIGURATION):
            seq = spec.degree_sequence
            if chordless:
                du, dw = set(seq.u_degrees), set(seq.w_degrees)
                if len(du) != 1 or len(dw) != 1:
                    return None
                v = lets_multiplicity_estimate(du.pop(), dw.pop(), c // 2)
                return MeanBounds(c=c, lower=v, upper=v, point_estimate=v)
            return expected_cycles_irregular(seq, c)
        if chordless:
            return None
        if spec.kind is EnsembleKind.RANDOM_LIFT:
            v = float(tbc_count(spec.protograph, c))
            return MeanBounds(c=c, lower=v, upper=v, point_estimate=v)
        return cyclic_lift_mean_bounds(spec.protograph, c, spec.lifting_degree)
    except (EnumerationCapError, ValueError):
        return None


def _aggregate(c: int, samples: list[int], theory: MeanBounds | None) -> CycleStats:
    arr = np.asarray(samples, dtype=float)
    mean = float(arr.mean())
    var = float(arr.var(ddof=1)) if arr.size > 1 else 0.0
    hist = histogram_of(samples)
    gof_stat = gof_p = None
    if theory is not None and theory.point_estimate > 0:
        try:
            gof_stat, gof_p = poisson_gof(hist, theory.point_estimate)
        except ValueError:
            pass
    return CycleStats(c=c, histogram=hist, mean=mean, var=var, theory=theory, gof_stat=gof_stat, gof_p=gof_p)


def run_experiment(cfg: ExperimentConfig) -> EnsembleReport:
    """
    Run all trials and aggregate them.

    Trials run on a thread pool (the sampling and census kernels release
    the GIL); results are collected by trial index so the report does not
    depend on scheduling.
    """
    indices = range(cfg.trials)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda i: _run_trial(cfg, i), indices))
    else:
        results = [_run_trial(cfg, i) for i in indices]

    counts = tuple(r[0] for r in results)
    chordless = tuple(r[1] for r in results) if cfg.chordless else None
    stats = tuple(
        _aggregate(c, [t[c] for t in counts], theory_for(cfg.spec, c)) for c in cfg.lengths
    )
    cstats = None
    if chordless is not None:
        cstats = tuple(
            _aggregate(c, [t[c] for t in chordless], theory_for(cfg.spec, c, chordless=True))
            for c in cfg.lengths
        )
    report = EnsembleReport(
        ensemble=cfg.spec.describe(),
        master_seed=cfg.master_seed,
        trials=cfg.trials,
        stats=stats,
        chordless_stats=cstats,
        trial_counts=counts,
        trial_chordless=chordless,
        notes=(INTERPRETATION_NOTE, *cfg.notes),
    )
    if cfg.output_path:
        text = report.to_json() if cfg.format == "json" else report.to_csv()
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    return report
