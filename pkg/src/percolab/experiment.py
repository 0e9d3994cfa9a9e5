"""Monte Carlo percolation experiments across the 1/(np) threshold.

Sweeps run the DFS explorer over a grid of retention multipliers c (so
rho = c/(np)) and a block of seeds, with vertex-indexed uniforms giving exact
monotone coupling across the grid for a fixed seed. Trials package the three
standard single-rho measurements:

  super: rho = (1+eps)/(np); fraction of seeds with L1 >= ceil(eps/p) and
         fraction with L2 <= (4/eps^2)(ln n)^2, plus a per-run check that the
         outer complement of a connected size-ceil(eps/p) witness set stays
         below its closed-form bound.
  sub:   rho = (1-eps)/(np); fraction with L1 < (4/eps^2)(ln n)^2 (and the
         sharper contrast fraction with L1 < eps/p).
  hd:    the super measurement with a hereditary-degree report attached; a
         falsified hypothesis flags the summary but the measurement proceeds.

Whp acceptance is operationalized as a fraction of seeds at fixed n; every
emitted artifact embeds the certification profile it ran under. The env var
PERCOLAB_THREADS caps worker threads (default 1); results are independent of
the thread count.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .certify import PseudoRandomProfile, _bump, certify, estimate_slacks, hd_check
from .errors import NotCertified, RhoOutOfRange, SampledModeUnavailable
from .graph import Graph, GeneratorSpec, generate, load_edge_list, max_co_degree
from .lemmas import grow_connected_set, outer_complement_check
from .percolate import BernoulliStream, dfs_percolate, largest_two

SCHEMA = "percolab/1"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("PERCOLAB_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    workers = _thread_count()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def seed_block(seeds: Union[Sequence[int], Tuple[int, int]]) -> List[int]:
    """Normalize either an explicit list or (base, count) to a seed list."""
    if isinstance(seeds, tuple) and len(seeds) == 2:
        base, count = seeds
        if count < 1:
            raise ValueError("replication count must be >= 1")
        return [base + i for i in range(count)]
    out = [int(s) for s in seeds]
    if not out:
        raise ValueError("need at least one seed")
    return out


def resolve_graph(source: Union[GeneratorSpec, str, Graph]) -> Graph:
    if isinstance(source, Graph):
        return source
    if isinstance(source, GeneratorSpec):
        return generate(source)
    return load_edge_list(source)


def derive_profile(g: Graph, p: float) -> PseudoRandomProfile:
    """Certification attached to every experiment: tightest slacks when the
    exact co-degree scan is feasible, measured-lower-bound slacks (sampled
    mode, a2 undecided) beyond the cap."""
    try:
        a_n, b_n = estimate_slacks(g, p)
    except SampledModeUnavailable:
        deg = g.degrees()
        a_n = max(g.n * p - int(deg.min()), int(deg.max()) - g.n * p, 0.0)
        while not (deg.min() > g.n * p - a_n and deg.max() < g.n * p + a_n):
            a_n = _bump(a_n, g.n * p)
        co = max_co_degree(g)
        b_n = co.value - g.n * p * p
        while not co.value < g.n * p * p + b_n:
            b_n = _bump(b_n, g.n * p * p)
    return certify(g, p, a_n, b_n)


@dataclass
class SweepConfig:
    source: Union[GeneratorSpec, str, Graph]
    p: float
    rho_grid: List[float]  # multipliers c, rho = c/(np)
    seeds: Union[Sequence[int], Tuple[int, int]]
    epsilon: float = 0.3
    clip_rho: bool = False
    out: Optional[str] = None


@dataclass
class SweepRow:
    c: float
    rho: float
    seed: int
    retained: int
    L1: int
    L2: int


@dataclass
class SweepResult:
    rows: List[SweepRow]
    aggregates: Dict[float, dict]
    c_star: Optional[float]
    giant_size: int
    l2_bound: float
    n: int
    p: float
    epsilon: float
    grid: List[float]
    seeds: List[int]
    profile: PseudoRandomProfile


def _rho_for(c: float, n: int, p: float, clip: bool) -> float:
    if c < 0:
        raise RhoOutOfRange(f"multiplier must be >= 0, got {c}")
    rho = c / (n * p)
    if rho >= 1.0:
        if not clip:
            raise RhoOutOfRange(f"c = {c} gives rho = {rho:.4g} >= 1")
        rho = 1.0
    return rho


def aggregate_rows(rows: List[SweepRow], giant_size: int, l2_bound: float) -> Dict[float, dict]:
    """Per-multiplier aggregates, recomputable from the CSV rows."""
    by_c: Dict[float, List[SweepRow]] = {}
    for r in rows:
        by_c.setdefault(r.c, []).append(r)
    out = {}
    for c, rs in sorted(by_c.items()):
        l1s = sorted(r.L1 for r in rs)
        l2s = sorted(r.L2 for r in rs)
        k = len(rs)
        out[c] = {
            "runs": k,
            "mean_L1": sum(l1s) / k,
            "median_L1": (l1s[k // 2] if k % 2 else (l1s[k // 2 - 1] + l1s[k // 2]) / 2),
            "mean_L2": sum(l2s) / k,
            "median_L2": (l2s[k // 2] if k % 2 else (l2s[k // 2 - 1] + l2s[k // 2]) / 2),
            "giant_freq": sum(r.L1 >= giant_size for r in rs) / k,
            "l2_bound_freq": sum(r.L2 <= l2_bound for r in rs) / k,
        }
    return out


def run_sweep(cfg: SweepConfig) -> SweepResult:
    g = resolve_graph(cfg.source)
    profile = derive_profile(g, cfg.p)
    seeds = seed_block(cfg.seeds)
    eps = cfg.epsilon
    giant_size = math.ceil(eps / cfg.p)
    l2_bound = (4.0 / eps ** 2) * math.log(g.n) ** 2 if g.n > 1 else 0.0
    jobs = [(c, _rho_for(c, g.n, cfg.p, cfg.clip_rho), s)
            for c in cfg.rho_grid for s in seeds]

    def one(job):
        c, rho, seed = job
        outcome = dfs_percolate(g, BernoulliStream(rho=rho, seed=seed))
        l1, l2 = largest_two(outcome)
        return SweepRow(c=c, rho=rho, seed=seed,
                        retained=len(outcome.retained), L1=l1, L2=l2)

    rows = _map(one, jobs)
    aggregates = aggregate_rows(rows, giant_size, l2_bound)
    c_star = None
    for c in sorted(aggregates):
        if aggregates[c]["giant_freq"] >= 0.5:
            c_star = c
            break
    result = SweepResult(rows=rows, aggregates=aggregates, c_star=c_star,
                         giant_size=giant_size, l2_bound=l2_bound,
                         n=g.n, p=cfg.p, epsilon=eps,
                         grid=list(cfg.rho_grid), seeds=seeds, profile=profile)
    if cfg.out:
        emit_csv(result, cfg.out + ".csv")
        emit_json(result, cfg.out + ".json")
    return result


def emit_csv(result: SweepResult, path):
    """One data row per run: c,rho,seed,retained,L1,L2 (floats via repr)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("c,rho,seed,retained,L1,L2\n")
        for r in result.rows:
            fh.write(f"{r.c!r},{r.rho!r},{r.seed},{r.retained},{r.L1},{r.L2}\n")


def emit_json(result: SweepResult, path):
    payload = {
        "schema": SCHEMA,
        "kind": "sweep",
        "n": result.n,
        "p": result.p,
        "epsilon": result.epsilon,
        "grid": result.grid,
        "seeds": result.seeds,
        "giant_size": result.giant_size,
        "l2_bound": result.l2_bound,
        "aggregates": {repr(c): a for c, a in result.aggregates.items()},
        "c_star": result.c_star,
        "profile": json.loads(result.profile.to_json()),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


@dataclass
class TrialRow:
    seed: int
    retained: int
    L1: int
    L2: int
    outer_ok: Optional[bool] = None


@dataclass
class TrialSummary:
    kind: str  # "super" | "sub" | "hd"
    n: int
    p: float
    epsilon: float
    rho: float
    rows: List[TrialRow]
    giant_size: int
    l2_bound: float
    frac_giant: float
    frac_l2_bound: float
    frac_small: Optional[float]  # sub only: fraction with L1 < eps/p
    max_L1: int
    frac_outer_ok: Optional[float]
    profile: PseudoRandomProfile
    hd_report: Optional[object] = None
    hd_falsified: Optional[bool] = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA,
            "kind": f"trial_{self.kind}",
            "n": self.n,
            "p": self.p,
            "epsilon": self.epsilon,
            "rho": self.rho,
            "giant_size": self.giant_size,
            "l2_bound": self.l2_bound,
            "frac_giant": self.frac_giant,
            "frac_l2_bound": self.frac_l2_bound,
            "frac_small": self.frac_small,
            "max_L1": self.max_L1,
            "frac_outer_ok": self.frac_outer_ok,
            "profile": json.loads(self.profile.to_json()),
            "rows": [[r.seed, r.retained, r.L1, r.L2, r.outer_ok] for r in self.rows],
        }
        if self.kind == "hd":
            d["hd_falsified"] = self.hd_falsified
            if self.hd_report is not None:
                d["hd_worst_ratio"] = self.hd_report.worst_ratio
                d["hd_beta"] = self.hd_report.beta
                d["hd_witness"] = list(self.hd_report.witness) if self.hd_report.witness else None
        d.update(self.extras)
        return d


def _run_block(g: Graph, rho: float, seeds: List[int], profile, epsilon: float,
               check_outer: bool) -> List[TrialRow]:
    giant_size = math.ceil(epsilon / profile.p)

    def one(seed):
        outcome = dfs_percolate(g, BernoulliStream(rho=rho, seed=seed))
        l1, l2 = largest_two(outcome)
        outer_ok = None
        if check_outer and l1 >= giant_size and giant_size >= 1:
            comp = max(outcome.components, key=len)
            c_set = grow_connected_set(g, comp[0], giant_size, within=comp)
            outer_ok = outer_complement_check(g, c_set, profile, epsilon).passed
        return TrialRow(seed=seed, retained=len(outcome.retained),
                        L1=l1, L2=l2, outer_ok=outer_ok)

    return _map(one, seeds)


def supercritical_trial(g: Graph, p: float, epsilon: float, seeds,
                        profile: Optional[PseudoRandomProfile] = None,
                        check_outer: bool = True) -> TrialSummary:
    """rho = (1+eps)/(np): giant and uniqueness fractions over the seed block."""
    if profile is None:
        profile = derive_profile(g, p)
    if not profile.a1 or profile.a2 is False:
        raise NotCertified(f"need a1 and a2 not falsified, got a1={profile.a1} a2={profile.a2}")
    rho = (1 + epsilon) / (g.n * p)
    if not 0.0 <= rho < 1.0:
        raise RhoOutOfRange(f"rho = {rho:.4g} outside [0, 1)")
    seeds = seed_block(seeds)
    rows = _run_block(g, rho, seeds, profile, epsilon, check_outer)
    return _summarize("super", g, p, epsilon, rho, rows, profile)


def subcritical_trial(g: Graph, p: float, epsilon: float, seeds,
                      profile: Optional[PseudoRandomProfile] = None) -> TrialSummary:
    """rho = (1-eps)/(np): every component should stay polylog-small."""
    if profile is None:
        profile = derive_profile(g, p)
    if not profile.a3:
        raise NotCertified(f"need a3, got a3={profile.a3}")
    rho = (1 - epsilon) / (g.n * p)
    if not 0.0 <= rho < 1.0:
        raise RhoOutOfRange(f"rho = {rho:.4g} outside [0, 1)")
    seeds = seed_block(seeds)
    rows = _run_block(g, rho, seeds, profile, epsilon, check_outer=False)
    return _summarize("sub", g, p, epsilon, rho, rows, profile)


def hd_uniqueness_trial(g: Graph, p: float, epsilon: float, beta: float, seeds,
                        profile: Optional[PseudoRandomProfile] = None,
                        hd_trials: int = 10, hd_seed: int = 0,
                        check_outer: bool = True) -> TrialSummary:
    """The super measurement under the hereditary-degree hypothesis set (no
    a3 requirement); a falsified HD check flags the summary with a witness
    and the measurement still runs."""
    if profile is None:
        profile = derive_profile(g, p)
    if not profile.a1 or profile.a2 is False:
        raise NotCertified(f"need a1 and a2 not falsified, got a1={profile.a1} a2={profile.a2}")
    rho = (1 + epsilon) / (g.n * p)
    if not 0.0 <= rho < 1.0:
        raise RhoOutOfRange(f"rho = {rho:.4g} outside [0, 1)")
    report = hd_check(g, beta=beta, subset_fraction=0.9, trials=hd_trials,
                      seed=hd_seed, p=p)
    seeds = seed_block(seeds)
    rows = _run_block(g, rho, seeds, profile, epsilon, check_outer)
    summary = _summarize("hd", g, p, epsilon, rho, rows, profile)
    summary.hd_report = report
    summary.hd_falsified = report.falsified
    return summary


def _summarize(kind, g, p, epsilon, rho, rows, profile) -> TrialSummary:
    giant_size = math.ceil(epsilon / p)
    l2_bound = (4.0 / epsilon ** 2) * math.log(g.n) ** 2 if g.n > 1 else 0.0
    k = len(rows)
    checked = [r.outer_ok for r in rows if r.outer_ok is not None]
    return TrialSummary(
        kind=kind, n=g.n, p=p, epsilon=epsilon, rho=rho, rows=rows,
        giant_size=giant_size, l2_bound=l2_bound,
        frac_giant=sum(r.L1 >= giant_size for r in rows) / k,
        frac_l2_bound=sum(r.L2 <= l2_bound for r in rows) / k,
        # integer L1 < eps/p is equivalent to L1 < ceil(eps/p); the integer
        # form avoids float noise when eps/p lands on an integer
        frac_small=sum(r.L1 < giant_size for r in rows) / k,
        max_L1=max(r.L1 for r in rows),
        frac_outer_ok=(sum(checked) / len(checked)) if checked else None,
        profile=profile)


def emit_trial_json(summary: TrialSummary, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n")
