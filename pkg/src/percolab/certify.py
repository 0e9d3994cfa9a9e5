"""Degree / co-degree certification of a graph against a target density p.

The three verdicts are strict inequalities over measured extremes:

  a1:  min_degree  >  n*p - a_n
  a2:  max_codegree < n*p**2 + b_n      (exact co-degree mode only)
  a3:  max_degree  <  n*p + a_n

Ties fail. In sampled co-degree mode the measured maximum is only a lower
bound, so a2 cannot be decided: the verdict field is None, to be read as
"not falsified by sampling".

The hereditary-degree check is falsification-only: it samples uniform subsets
U of a fixed size plus one greedily built adversarial subset, and reports the
worst ratio max_{v in U} d(v, U) / (p|U|). "falsified" is a sound verdict;
"not falsified" is evidence, not proof.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import SampledModeUnavailable, SubsetTooSmall
from .graph import EXACT_CODEGREE_CAP, Graph, degrees_into, max_co_degree
from .rng import derived


@dataclass(frozen=True)
class PseudoRandomProfile:
    n: int
    p: float
    a_n: float
    b_n: float
    min_degree: int
    max_degree: int
    max_codegree: int
    codegree_mode: str  # "exact" | "sampled"
    a1: bool
    a2: Optional[bool]  # None in sampled mode: not falsified, not decided
    a3: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "p": self.p,
                "a_n": self.a_n,
                "b_n": self.b_n,
                "min_degree": self.min_degree,
                "max_degree": self.max_degree,
                "max_codegree": self.max_codegree,
                "codegree_mode": self.codegree_mode,
                "a1": self.a1,
                "a2": self.a2,
                "a3": self.a3,
            },
            indent=2,
            sort_keys=True,
        )


def certify(g: Graph, p: float, a_n: float, b_n: float,
            exact_cap: int = EXACT_CODEGREE_CAP) -> PseudoRandomProfile:
    """Measure degree/co-degree extremes and evaluate the three verdicts."""
    deg = g.degrees()
    min_degree = int(deg.min()) if g.n else 0
    max_degree = int(deg.max()) if g.n else 0
    co = max_co_degree(g, exact_cap=exact_cap)
    a1 = min_degree > g.n * p - a_n
    a3 = max_degree < g.n * p + a_n
    a2 = co.value < g.n * p * p + b_n if co.mode == "exact" else None
    if a2 is None and co.value >= g.n * p * p + b_n:
        a2 = False  # sampled lower bound already breaks the inequality
    return PseudoRandomProfile(
        n=g.n, p=p, a_n=a_n, b_n=b_n,
        min_degree=min_degree, max_degree=max_degree,
        max_codegree=co.value, codegree_mode=co.mode,
        a1=bool(a1), a2=a2, a3=bool(a3),
    )


def estimate_slacks(g: Graph, p: float,
                    exact_cap: int = EXACT_CODEGREE_CAP) -> Tuple[float, float]:
    """Tightest (a_n, b_n) making all three verdicts strictly true.

    Starts from the measured gaps and nudges upward by ulps until the strict
    inequalities hold, so certify(g, p, a_n, b_n) round-trips to all-true.
    """
    if g.n > exact_cap:
        raise SampledModeUnavailable(
            f"exact co-degree needs n <= {exact_cap}, got {g.n}")
    deg = g.degrees()
    min_degree = int(deg.min()) if g.n else 0
    max_degree = int(deg.max()) if g.n else 0
    a_n = max(g.n * p - min_degree, max_degree - g.n * p, 0.0)
    while not (min_degree > g.n * p - a_n and max_degree < g.n * p + a_n):
        a_n = _bump(a_n, g.n * p)
    co = max_co_degree(g, exact_cap=exact_cap)
    b_n = co.value - g.n * p * p
    while not co.value < g.n * p * p + b_n:
        b_n = _bump(b_n, g.n * p * p)
    return a_n, b_n


def _bump(x: float, scale: float) -> float:
    # next float after x, stepping at least one ulp of `scale`: a tie like
    # min_degree == n*p needs a_n near ulp(n*p), and nextafter alone from a
    # tiny x would crawl there one subnormal at a time
    step = math.ulp(scale) if scale > 0 else 5e-324
    return max(math.nextafter(x, math.inf), x + step)


@dataclass(frozen=True)
class HDReport:
    beta: float
    subset_fraction: float
    trials: int
    worst_ratio: float
    falsified: bool
    witness: Optional[Tuple[object, int]]  # (subset label, vertex)


def hd_check(g: Graph, beta: float, subset_fraction: float = 0.9,
             trials: int = 50, seed: int = 0, p: Optional[float] = None) -> HDReport:
    """Sample-falsify max_{v in U} d(v, U) < (1 + beta) * p|U| over large U.

    Tests `trials` uniform subsets of size floor(subset_fraction * n) plus one
    greedy adversarial subset. p defaults to the empirical density
    2*edge_count / (n*(n-1)); pass it explicitly when certifying against a
    target density. Per-trial subsets use derived streams (seed, trial), so
    the report is independent of evaluation order.
    """
    if p is None:
        p = 2 * g.edge_count / (g.n * (g.n - 1)) if g.n > 1 else 0.0
    if not 0.9 <= subset_fraction <= 1.0:
        raise SubsetTooSmall(f"subset_fraction must be in [0.9, 1], got {subset_fraction}")
    if trials < 1:
        raise ValueError("trials >= 1 required")
    size = int(subset_fraction * g.n)
    if size < 1:
        raise SubsetTooSmall(f"subset of size {size} from n={g.n}")
    worst = 0.0
    witness = None
    falsified = False

    def consider(label, in_u):
        nonlocal worst, witness, falsified
        d = degrees_into(g, in_u)
        d[~in_u] = -1
        v = int(np.argmax(d))
        ratio = float(d[v]) / (p * size) if p > 0 and size > 0 else 0.0
        if ratio > worst:
            worst = ratio
        if ratio >= 1.0 + beta and not falsified:
            falsified = True
            witness = (label, v)

    for t in range(trials):
        u_idx = derived(seed, t).choice(g.n, size=size, replace=False)
        in_u = np.zeros(g.n, dtype=bool)
        in_u[u_idx] = True
        consider(t, in_u)

    # Adversarial subset: drop the n-|U| vertices with least degree into the
    # current U, iterated 3 times: keeps the high-in-degree core.
    in_u = np.ones(g.n, dtype=bool)
    for _ in range(3):
        d = degrees_into(g, in_u)
        d_masked = np.where(in_u, d, np.iinfo(np.int64).max)
        drop = np.argsort(d_masked, kind="stable")[: g.n - size]
        in_u = np.ones(g.n, dtype=bool)
        in_u[drop] = False
    consider("adversarial", in_u)

    return HDReport(beta=beta, subset_fraction=subset_fraction, trials=trials,
                    worst_ratio=worst, falsified=falsified, witness=witness)
