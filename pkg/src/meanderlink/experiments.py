"""Monte Carlo and exhaustive experiments against the exact expectations.

Randomness: trials are grouped in fixed blocks of ``BLOCK`` consecutive
trial indices, and block ``b`` draws from
``SeedSequence(entropy=seed, spawn_key=(b,))``. Every per-trial value is an
integer, so the sums are exact and a report does not depend on how blocks
are spread over workers.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import combinatorics as cb
from . import meander as mg
from . import pstring as ps

BLOCK = 2048
Z_GATE = 4.0
MAX_ENUMERATION_S = 6
MAX_UNLINKED_R = 10
DEFAULT_CHECKPOINTS = (10, 50, 100, 200)

SKELETON_STATS = ("pierced_circles", "nestings", "nesting_bigons", "twists")
DIAGRAM_STATS = ("face_bigons", "components", "unlinked_circle_fraction", "crossing_count")
STATISTICS = SKELETON_STATS + DIAGRAM_STATS

REPORT_FIELDS = ("statistic", "s", "r", "trials", "seed", "mean", "stderr", "closed_form", "z")


@dataclass(frozen=True)
class ExperimentReport:
    statistic: str
    s: int
    r: int
    trials: int
    seed: int
    empirical_mean: float
    empirical_stderr: float
    closed_form: Fraction | None
    z_score: float | None

    def as_row(self) -> dict:
        return {
            "statistic": self.statistic,
            "s": self.s,
            "r": self.r,
            "trials": self.trials,
            "seed": self.seed,
            "mean": self.empirical_mean,
            "stderr": self.empirical_stderr,
            "closed_form": None if self.closed_form is None else str(self.closed_form),
            "z": self.z_score,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_row())

    def passes(self, gate: float = Z_GATE) -> bool:
        if self.closed_form is None:
            return True
        if self.z_score is None:
            return Fraction(self.empirical_mean) == self.closed_form
        return abs(self.z_score) < gate


def reports_to_csv(reports: list[ExperimentReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        row = rep.as_row()
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue()


def closed_form(statistic: str, s: int, r: int) -> Fraction | None:
    if statistic == "pierced_circles":
        return cb.expected_pierced_circles(s)
    if statistic == "nestings":
        return cb.expected_nestings(s)
    if statistic == "nesting_bigons":
        return cb.expected_bigons(s)
    if statistic == "twists":
        return cb.expected_twists(s, r)
    if statistic == "unlinked_circle_fraction":
        return Fraction(1, 2**r)
    if statistic == "crossing_count":
        return Fraction((2 * s - 1) * r * r)
    return None


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))


def _skeleton_values(statistic: str, s: int, r: int, count: int, rng: np.random.Generator) -> list[int]:
    if s <= ps.INT64_MAX_PAIRS:
        top = ps.sample_words(s, count, rng)
        bottom = ps.sample_words(s, count, rng)
        nt = ps.nesting_mask(top)
        nb = ps.nesting_mask(bottom)
        if statistic == "pierced_circles":
            values = (nt[:, :-1] & nb[:, 1:]).sum(axis=1)
        elif statistic == "nestings":
            values = nt.sum(axis=1)
        else:
            values = nt.sum(axis=1) + nb.sum(axis=1)
            if statistic == "twists":
                values = (2 * s - 1) * r * r - values
        return [int(x) for x in values]
    out = []
    for _ in range(count):
        g = mg.build_graph(ps.sample_uniform(s, rng), ps.sample_uniform(s, rng))
        if statistic == "pierced_circles":
            out.append(len(mg.pierced_circles(g)))
            continue
        nt = len(ps.nestings(g.top))
        if statistic == "nestings":
            out.append(nt)
            continue
        both = nt + len(ps.nestings(g.bottom))
        out.append(both if statistic == "nesting_bigons" else (2 * s - 1) * r * r - both)
    return out


def _diagram_value(statistic: str, s: int, r: int, rng: np.random.Generator) -> int:
    while True:
        g = mg.build_graph(ps.sample_uniform(s, rng), ps.sample_uniform(s, rng))
        if statistic != "unlinked_circle_fraction" or mg.pierced_circles(g):
            break
    d = mg.assemble(g, r, mg.sample_assignment(s, r, rng))
    if statistic == "crossing_count":
        return d.num_crossings
    if statistic == "components":
        return d.num_components
    if statistic == "face_bigons":
        return mg.diagram_stats(d).bigons
    circle = mg.circle_copy_component(d, mg.pierced_circles(g)[0], 1)
    return int(mg.unlinked_from_all(d, circle))


def _run_block(args: tuple[str, int, int, int, int, int]) -> tuple[int, int]:
    statistic, s, r, seed, block, count = args
    rng = block_rng(seed, block)
    if statistic in SKELETON_STATS:
        values = _skeleton_values(statistic, s, r, count, rng)
    else:
        values = [_diagram_value(statistic, s, r, rng) for _ in range(count)]
    return sum(values), sum(v * v for v in values)


def _check_request(statistic: str, s: int, r: int, trials: int) -> None:
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {', '.join(STATISTICS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if s < 1 or r < 1:
        raise ValueError(f"need s, r >= 1, got s={s}, r={r}")
    if statistic == "unlinked_circle_fraction" and s < 2:
        raise ValueError("unlinked_circle_fraction needs s >= 2 so that pierced circles exist")


def run_monte_carlo(statistic: str, s: int, r: int, trials: int, seed: int,
                    workers: int = 1) -> ExperimentReport:
    _check_request(statistic, s, r, trials)
    jobs = []
    for block, start in enumerate(range(0, trials, BLOCK)):
        jobs.append((statistic, s, r, seed, block, min(BLOCK, trials - start)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, jobs))
    else:
        parts = [_run_block(job) for job in jobs]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = Fraction(total, trials)
    if trials > 1:
        var = (Fraction(total_sq) - total * mean) / (trials - 1)
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    target = closed_form(statistic, s, r)
    z = None
    if target is not None and stderr > 0:
        z = float((mean - target) / Fraction(stderr))
    return ExperimentReport(statistic, s, r, trials, seed, float(mean), stderr, target, z)


@dataclass(frozen=True)
class EnumerationReport:
    s: int
    histogram: dict[int, int]
    matches_formula: dict[int, bool]

    @property
    def matches(self) -> bool:
        return all(self.matches_formula.values())


def run_enumeration(s: int) -> EnumerationReport:
    """Pierced-circle histogram over every meander graph, compared with E(s, k)."""
    if not 1 <= s <= MAX_ENUMERATION_S:
        raise ValueError(f"exhaustive enumeration supports 1 <= s <= {MAX_ENUMERATION_S}")
    strings = ps.enumerate_all(s)
    histogram = {k: 0 for k in range(s + 1)}
    for top in strings:
        for bottom in strings:
            histogram[len(mg.pierced_circles(mg.build_graph(top, bottom)))] += 1
    matches = {k: histogram[k] == cb.count_E(s, k) for k in histogram}
    return EnumerationReport(s, histogram, matches)


_SENSE_PAIRS = tuple(itertools.product((mg.OVER, mg.UNDER), repeat=2))


def run_unlinked_exact(r: int) -> Fraction:
    """Exact fraction of sense choices leaving one circle copy unlinked from all r axis copies."""
    if not 1 <= r <= MAX_UNLINKED_R:
        raise ValueError(f"r must be in 1..{MAX_UNLINKED_R}")
    good = sum(
        all(mg.senses_unlinked(a, b) for a, b in combo)
        for combo in itertools.product(_SENSE_PAIRS, repeat=r)
    )
    return Fraction(good, 4**r)


@dataclass(frozen=True)
class ConvergencePoint:
    s: int
    a_s: float
    e_ratio: float
    gap: float  # |e_ratio - (7 + 4 sqrt 3)|


def run_convergence(max_s: int, checkpoints=DEFAULT_CHECKPOINTS) -> list[ConvergencePoint]:
    if max_s < 4:
        raise ValueError("max_s must be >= 4")
    limit = cb.characteristic_roots()[2]
    points = {p.s: p for p in cb.ratio_sequence(max_s)}
    out = []
    for s in checkpoints:
        if s in points:
            p = points[s]
            ratio = float(p.e_ratio)
            out.append(ConvergencePoint(s, float(p.a_s), ratio, abs(ratio - limit)))
    return out


def expected_volume_report(s: int, r: int, alternating: bool) -> dict:
    bounds = cb.volume_bounds(s, r, alternating)
    twists = cb.expected_twists(s, r)
    return {
        "s": s,
        "r": r,
        "alternating": alternating,
        "expected_twists": str(twists),
        "upper": bounds.upper,
        "upper_formula": "10*v3*(s-3)" if r == 1 else "10*v3*((2s-1)r^2-s-3)",
        "lower": bounds.lower,
        "lower_formula": "v3*((2s-1)r^2-s-5)/2" if bounds.lower is not None else None,
        "vacuous": bounds.vacuous,
        "twists_vacuous": twists <= 0,
        "v3": cb.V3,
    }
