"""Exhaustive architecture search: best configuration per repeater family,
global winner per parameter point, and sweep/region-map datasets.

All searches enumerate their discrete grids in a fixed lexicographic order
and keep the first strict cost minimum, so results are deterministic and
ties break toward the earlier configuration. Grid points are independent;
the region map can fan them out over worker processes and reassembles rows
in grid order, which keeps the output byte-identical for any worker count.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import gen1, gen2, gen3
from .core import (
    CSS_CATALOG,
    CostResult,
    CssCode,
    Gen1Config,
    Gen2EncConfig,
    Gen2NoEncConfig,
    Gen3Config,
    HardwareParams,
)

FAMILIES = ("gen1", "gen2_noenc", "gen2_enc", "gen3")

_POW2_SEGMENTS = tuple(2**k for k in range(1, 11))  # 2 .. 1024
_POW2_MEMORIES = tuple(2**k for k in range(8))  # 1 .. 128
_GEN_ROUNDS = (1, 2, 5, 10)
_GEN3_SPACINGS = tuple(k * 0.5 for k in range(1, 21))  # 0.5 .. 10 km


@dataclass(frozen=True)
class Gen1Search:
    schemes: tuple[str, ...] = ("deutsch", "dur")
    min_levels: int = 1
    max_levels: int = 7
    max_rounds: int = 2


@dataclass(frozen=True)
class Gen2Search:
    """Grid for the swap-chain families. Spacings are L_tot/k for the given
    segment counts, dropped below min_spacing_km; memories spans powers of
    two up to 128 pairs per link (see the README for how the default grids
    shape reported optima)."""

    segment_counts: tuple[int, ...] = _POW2_SEGMENTS
    memories: tuple[int, ...] = _POW2_MEMORIES
    gen_rounds: tuple[int, ...] = _GEN_ROUNDS
    min_spacing_km: float = 1.0
    codes: tuple[CssCode, ...] = CSS_CATALOG  # used by the encoded family only


@dataclass(frozen=True)
class Gen3Search:
    spacings_km: tuple[float, ...] = _GEN3_SPACINGS
    min_n: int = 2
    max_n: int = 20
    min_m: int = 2
    max_m: int = 20
    max_photons: int = 200


@dataclass(frozen=True)
class SearchSpace:
    gen1: Gen1Search = field(default_factory=Gen1Search)
    gen2: Gen2Search = field(default_factory=Gen2Search)
    gen3: Gen3Search = field(default_factory=Gen3Search)


@dataclass(frozen=True)
class Candidate:
    family: str
    config: object
    result: CostResult


@dataclass(frozen=True)
class OptimumReport:
    """Best candidate per family plus the global cost-coefficient winner."""

    per_family: dict
    winner: Optional[Candidate]


def describe_config(config) -> str:
    """Compact one-line description of any protocol configuration."""
    if isinstance(config, Gen1Config):
        rounds = ",".join(str(m) for m in config.rounds)
        return f"scheme={config.scheme} levels={config.levels} rounds={rounds}"
    if isinstance(config, Gen2NoEncConfig):
        return (
            f"spacing_km={config.spacing_km!r} memories={config.memories}"
            f" gen_rounds={config.gen_rounds}"
        )
    if isinstance(config, Gen2EncConfig):
        code = f"[[{config.code.n_phys},1,{2 * config.code.t + 1}]]"
        return (
            f"code={code} spacing_km={config.spacing_km!r}"
            f" memories={config.memories} gen_rounds={config.gen_rounds}"
        )
    if isinstance(config, Gen3Config):
        return f"n={config.n} m={config.m} spacing_km={config.spacing_km!r}"
    raise TypeError(f"unknown config type {type(config)!r}")


def evaluate_config(params: HardwareParams, config, l_tot_km: float) -> CostResult:
    """Dispatch a configuration to its family's evaluator."""
    if isinstance(config, Gen1Config):
        return gen1.evaluate(params, config, l_tot_km)
    if isinstance(config, Gen2NoEncConfig):
        return gen2.evaluate_no_encoding(params, config, l_tot_km)
    if isinstance(config, Gen2EncConfig):
        return gen2.evaluate_encoded(params, config, l_tot_km)
    if isinstance(config, Gen3Config):
        return gen3.evaluate(params, config, l_tot_km)
    raise TypeError(f"unknown config type {type(config)!r}")


# Each cached table is a few MB (one entry per schedule), so keep few of them.
@lru_cache(maxsize=32)
def _gen1_candidates(search: Gen1Search, eps_g: float, xi: float):
    """Schedule summaries in enumeration order, shared across grid points
    with the same error parameters."""
    out = []
    for scheme in search.schemes:
        for levels in range(search.min_levels, search.max_levels + 1):
            for rounds in itertools.product(
                range(search.max_rounds + 1), repeat=levels + 1
            ):
                summary = gen1._schedule_summary(scheme, rounds, eps_g, xi)
                out.append((scheme, levels, rounds, summary))
    return out


def optimize_gen1(
    params: HardwareParams, l_tot_km: float, search: Gen1Search = Gen1Search()
) -> Optional[Candidate]:
    best = None
    best_key = None
    for scheme, levels, rounds, summary in _gen1_candidates(
        search, params.eps_g, params.xi
    ):
        res = gen1._finish(summary, params, levels, l_tot_km)
        if res.feasible and (best is None or res.cost_coeff < best_key):
            best = (scheme, levels, rounds, res)
            best_key = res.cost_coeff
    if best is None:
        return None
    scheme, levels, rounds, res = best
    return Candidate("gen1", Gen1Config(scheme, levels, rounds), res)


def _gen2_spacings(search: Gen2Search, l_tot_km: float) -> tuple[float, ...]:
    return tuple(
        l_tot_km / k
        for k in search.segment_counts
        if l_tot_km / k >= search.min_spacing_km
    )


def optimize_gen2_noenc(
    params: HardwareParams, l_tot_km: float, search: Gen2Search = Gen2Search()
) -> Optional[Candidate]:
    best = None
    for spacing in _gen2_spacings(search, l_tot_km):
        for memories in search.memories:
            for gen_rounds in search.gen_rounds:
                config = Gen2NoEncConfig(memories, spacing, gen_rounds)
                res = gen2.evaluate_no_encoding(params, config, l_tot_km)
                if res.feasible and (
                    best is None or res.cost_coeff < best.result.cost_coeff
                ):
                    best = Candidate("gen2_noenc", config, res)
    return best


def optimize_gen2_enc(
    params: HardwareParams, l_tot_km: float, search: Gen2Search = Gen2Search()
) -> Optional[Candidate]:
    best = None
    for code in search.codes:
        for spacing in _gen2_spacings(search, l_tot_km):
            for memories in search.memories:
                for gen_rounds in search.gen_rounds:
                    config = Gen2EncConfig(code, memories, spacing, gen_rounds)
                    res = gen2.evaluate_encoded(params, config, l_tot_km)
                    if res.feasible and (
                        best is None or res.cost_coeff < best.result.cost_coeff
                    ):
                        best = Candidate("gen2_enc", config, res)
    return best


def optimize_gen3(
    params: HardwareParams, l_tot_km: float, search: Gen3Search = Gen3Search()
) -> Optional[Candidate]:
    best = None
    for spacing in search.spacings_km:
        for n in range(search.min_n, search.max_n + 1):
            for m in range(search.min_m, search.max_m + 1):
                if n * m > search.max_photons:
                    continue
                config = Gen3Config(n, m, spacing)
                res = gen3.evaluate(params, config, l_tot_km)
                if res.feasible and (
                    best is None or res.cost_coeff < best.result.cost_coeff
                ):
                    best = Candidate("gen3", config, res)
    return best


def optimize_family(
    family: str,
    params: HardwareParams,
    l_tot_km: float,
    space: SearchSpace = SearchSpace(),
) -> Optional[Candidate]:
    """Exhaustive search of one family; None when nothing is feasible."""
    if family == "gen1":
        return optimize_gen1(params, l_tot_km, space.gen1)
    if family == "gen2_noenc":
        return optimize_gen2_noenc(params, l_tot_km, space.gen2)
    if family == "gen2_enc":
        return optimize_gen2_enc(params, l_tot_km, space.gen2)
    if family == "gen3":
        return optimize_gen3(params, l_tot_km, space.gen3)
    raise ValueError(f"unknown family {family!r}")


def optimize_all(
    params: HardwareParams,
    l_tot_km: float,
    space: SearchSpace = SearchSpace(),
) -> OptimumReport:
    """Best candidate of every family and the global winner."""
    per_family = {f: optimize_family(f, params, l_tot_km, space) for f in FAMILIES}
    winner = None
    for family in FAMILIES:
        cand = per_family[family]
        if cand is not None and (
            winner is None or cand.result.cost_coeff < winner.result.cost_coeff
        ):
            winner = cand
    return OptimumReport(per_family, winner)


def report_row(
    params: HardwareParams, l_tot_km: float, report: OptimumReport
) -> dict:
    """Flatten one optimization outcome into an output-table row."""
    row = {
        "eta_c": params.eta_c,
        "eps_g": params.eps_g,
        "t0": params.t0,
        "l_tot_km": l_tot_km,
    }
    if report.winner is None:
        row.update(
            winner="none",
            config="",
            rate_sbits_per_s=0.0,
            cost=float("inf"),
            cost_coeff=float("inf"),
            feasible=False,
        )
    else:
        w = report.winner
        row.update(
            winner=w.family,
            config=describe_config(w.config),
            rate_sbits_per_s=w.result.rate_sbits_per_s,
            cost=w.result.cost,
            cost_coeff=w.result.cost_coeff,
            feasible=True,
        )
    for family in FAMILIES:
        cand = report.per_family[family]
        row[f"cost_coeff_{family}"] = (
            cand.result.cost_coeff if cand is not None else float("inf")
        )
    return row


def sweep(
    axis: str,
    values: tuple[float, ...],
    params: HardwareParams,
    l_tot_km: float,
    space: SearchSpace = SearchSpace(),
) -> list[dict]:
    """One optimization per value of a single hardware axis or of the total
    distance."""
    if axis == "l_tot":
        return [
            report_row(params, value, optimize_all(params, value, space))
            for value in values
        ]
    if axis not in ("eta_c", "eps_g", "t0"):
        raise ValueError(f"sweep axis must be eta_c, eps_g, t0 or l_tot, got {axis!r}")
    rows = []
    for value in values:
        point = params.with_(**{axis: value})
        rows.append(report_row(point, l_tot_km, optimize_all(point, l_tot_km, space)))
    return rows


def _map_task(args) -> list[dict]:
    """All inner-axis rows for one (eta_c, eps_g) cell; must stay importable
    at module top level so worker processes can unpickle it."""
    base, eta_c, eps_g, t0_values, l_tot_km, space = args
    point_base = base.with_(eta_c=eta_c, eps_g=eps_g)
    rows = []
    for t0 in t0_values:
        point = point_base.with_(t0=t0)
        rows.append(report_row(point, l_tot_km, optimize_all(point, l_tot_km, space)))
    return rows


def region_map(
    eta_values: tuple[float, ...],
    eps_values: tuple[float, ...],
    t0_values: tuple[float, ...],
    l_tot_km: float,
    space: SearchSpace = SearchSpace(),
    params: HardwareParams = HardwareParams(),
    threads: int = 1,
) -> list[dict]:
    """Winner label and cost for every (eta_c, eps_g, t0) lattice point.

    Rows come back in lattice order (eta outermost, t0 innermost) regardless
    of the worker count.
    """
    tasks = [
        (params, eta, eps, tuple(t0_values), l_tot_km, space)
        for eta in eta_values
        for eps in eps_values
    ]
    if threads <= 1:
        chunks = map(_map_task, tasks)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_map_task, tasks, chunksize=1))
    return [row for chunk in chunks for row in chunk]
