"""Deterministic bound checks on concrete graphs, with witnesses on failure.

Every checker returns a LemmaReport. For exhaustive modes `passed` is a proof
over the examined universe; for sampled modes it only means "not falsified".
Set sizes take ceilings wherever a real-valued size formula needs an integer,
and the rounding is recorded in the report parameters.
"""

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import (
    AssumptionsNotCertified,
    CombinationOverflow,
    EmptySet,
    NotConnected,
    PreconditionViolated,
    SizeMismatch,
    SlackTooLarge,
    USmall,
)
from .graph import Graph, co_degree, degrees_into
from .rng import derived

EXHAUSTIVE_SET_CAP = 5_000_000

LEMMA_IDS = (
    "expansion",
    "variance",
    "xi_count",
    "outer_complement",
    "inclusion_exclusion",
    "binomial_tails",
)


@dataclass
class LemmaReport:
    lemma_id: str
    passed: bool
    checked_count: int
    witness: Optional[object]
    parameters: dict
    measured: object
    bound: object

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, ExpansionWitness):
            w = {"H": list(w.H), "neighborhood_size": w.neighborhood_size,
                 "bound": w.bound}
        return {
            "lemma_id": self.lemma_id,
            "passed": self.passed,
            "checked_count": self.checked_count,
            "witness": w,
            "parameters": self.parameters,
            "measured": self.measured,
            "bound": self.bound,
        }


@dataclass(frozen=True)
class ExpansionWitness:
    H: tuple
    neighborhood_size: int
    bound: float


def neighborhood_size(g: Graph, H: Sequence[int]) -> int:
    """|{v not in H : v has a neighbor in H}| by direct mask union."""
    mask = np.zeros(g.n, dtype=bool)
    for v in H:
        mask[g.neighbors_of(int(v))] = True
    mask[list(H)] = False
    return int(mask.sum())


def inclusion_exclusion_lower_bound(g: Graph, H: Sequence[int]) -> int:
    """Signed lower bound sum(deg) - sum(pairwise co-degree) - |H|; always
    <= the exact external neighborhood size (Bonferroni)."""
    hs = [int(v) for v in H]
    if not hs:
        raise EmptySet("H must be nonempty")
    total = sum(g.degree(v) for v in hs)
    for u, v in itertools.combinations(hs, 2):
        total -= co_degree(g, u, v)
    return total - len(hs)


def _require_certified(profile, need_a3: bool):
    # a2 = None means the sampled co-degree scan did not falsify the bound;
    # the derived inequalities are then evidence-based, which we accept and
    # echo via codegree_mode in the parameters.
    if not profile.a1 or profile.a2 is False or (need_a3 and not profile.a3):
        raise AssumptionsNotCertified(
            f"profile verdicts a1={profile.a1} a2={profile.a2} a3={profile.a3}")


def expansion_check(g: Graph, profile, m: int, alpha0: float,
                    mode: str = "exhaustive", c: float = 1e-3,
                    samples: int = 10_000, seed: int = 0,
                    set_cap: int = EXHAUSTIVE_SET_CAP) -> LemmaReport:
    """No vertex set H with |H| = m has |N_G(H)| < (1-alpha0)(npm - np^2 m^2/2).

    Requires c < m*p <= 1/3 for the supplied c in (0, 1/3). Exhaustive mode
    proves the verdict over all C(n, m) sets (refused above `set_cap`);
    sampled mode tries `samples` random sets plus one greedy adversarial set
    and can only falsify.
    """
    n, p = g.n, profile.p
    if not 0.0 < c < 1.0 / 3.0:
        raise PreconditionViolated(f"c must be in (0, 1/3), got {c}")
    if not c < m * p <= 1.0 / 3.0:
        raise PreconditionViolated(f"need c < m*p <= 1/3, got m*p = {m * p}")
    bound = (1.0 - alpha0) * (n * p * m - n * p * p * m * m / 2.0)
    params = {"p": p, "a_n": profile.a_n, "b_n": profile.b_n, "m": m,
              "alpha0": alpha0, "c": c, "mode": mode}

    if mode == "exhaustive":
        total = math.comb(n, m)
        if total > set_cap:
            raise CombinationOverflow(f"C({n},{m}) = {total} exceeds cap {set_cap}")
        worst, witness_set = _expansion_scan_all(g, m)
        checked = total
    elif mode == "sampled":
        worst, witness_set = _expansion_scan_sampled(g, m, samples, seed)
        checked = samples + 1
    else:
        raise ValueError(f"unknown mode {mode!r}")

    passed = worst >= bound
    witness = None if passed else ExpansionWitness(
        H=tuple(witness_set), neighborhood_size=worst, bound=bound)
    return LemmaReport("expansion", bool(passed), checked, witness,
                       params, measured=worst, bound=bound)


def _dense_adjacency(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n), dtype=bool)
    for v in range(g.n):
        A[v, g.neighbors_of(v)] = True
    return A


def _expansion_scan_all(g: Graph, m: int):
    n = g.n
    A = _dense_adjacency(g)
    worst = n + 1
    witness = ()
    if m == 1:
        deg = A.sum(axis=1)
        i = int(np.argmin(deg))
        return int(deg[i]), (i,)
    if m == 2:
        for i in range(n - 1):
            union = A[i] | A[i + 1:]
            # members of H inside the union: union[i] and union[j] both equal A[i, j]
            sizes = union.sum(axis=1) - 2 * A[i, i + 1:]
            j = int(np.argmin(sizes))
            if sizes[j] < worst:
                worst = int(sizes[j])
                witness = (i, i + 1 + j)
        return worst, witness
    if m == 3:
        for i in range(n - 2):
            Ai = A[i]
            for j in range(i + 1, n - 1):
                u2 = Ai | A[j]
                u3 = u2[None, :] | A[j + 1:]
                sizes = u3.sum(axis=1)
                # subtract members of H = {i, j, k} that land in the union
                sizes -= (u2[i] | A[j + 1:, i]).astype(np.int64)
                sizes -= (u2[j] | A[j + 1:, j]).astype(np.int64)
                sizes -= u2[j + 1:].astype(np.int64)
                k = int(np.argmin(sizes))
                if sizes[k] < worst:
                    worst = int(sizes[k])
                    witness = (i, j, j + 1 + k)
        return worst, witness
    # generic fallback for m >= 4 (cap keeps the count manageable)
    for combo in itertools.combinations(range(n), m):
        size = _neighborhood_dense(A, combo)
        if size < worst:
            worst = size
            witness = combo
    return worst, witness


def _neighborhood_dense(A: np.ndarray, H) -> int:
    mask = np.zeros(A.shape[0], dtype=bool)
    for v in H:
        mask |= A[v]
    mask[list(H)] = False
    return int(mask.sum())


def _expansion_scan_sampled(g: Graph, m: int, samples: int, seed: int):
    worst = g.n + 1
    witness = ()
    for k in range(samples):
        H = derived(seed, k).choice(g.n, size=m, replace=False)
        size = neighborhood_size(g, H)
        if size < worst:
            worst = size
            witness = tuple(int(v) for v in H)
    # adversarial: grow greedily from the minimum-degree vertex, always adding
    # the vertex that keeps the running neighborhood smallest
    deg = g.degrees()
    H = [int(np.argmin(deg))]
    mask = np.zeros(g.n, dtype=bool)
    mask[g.neighbors_of(H[0])] = True
    while len(H) < m:
        best_v, best_gain = -1, g.n + 1
        candidates = np.flatnonzero(mask) if mask.any() else np.arange(g.n)
        for v in candidates:
            v = int(v)
            if v in H:
                continue
            gain = int((~mask[g.neighbors_of(v)]).sum())
            if gain < best_gain:
                best_gain, best_v = gain, v
        H.append(best_v)
        mask[g.neighbors_of(best_v)] = True
    size = neighborhood_size(g, H)
    if size < worst:
        worst = size
        witness = tuple(sorted(H))
    return worst, witness


def variance_bound_check(g: Graph, U: Sequence[int], profile) -> LemmaReport:
    """Exact population variance of d(X, U) for X uniform on [n], against

      p(1-p)|U| + |U|(a_n - b_n)/n + (b_n/n)|U|^2 + 2(a_n p/n)|U| - a_n^2 |U|^2 / n^2

    and additionally the coarse bound 2p|U| + (3 b_n / n)|U|^2 when |U| >= n/2.
    """
    _require_certified(profile, need_a3=True)
    n, p, a, b = g.n, profile.p, profile.a_n, profile.b_n
    us = sorted({int(v) for v in U})
    mask = np.zeros(n, dtype=bool)
    mask[us] = True
    d = degrees_into(g, mask)
    sd = int(d.sum())
    sd2 = int((d * d).sum())
    var = sd2 / n - (sd / n) ** 2 if n else 0.0
    u = len(us)
    rhs = (p * (1 - p) * u + u * (a - b) / n + (b / n) * u * u
           + 2 * (a * p / n) * u - (a * a * u * u) / (n * n)) if n else 0.0
    remark_rhs = None
    remark_passed = None
    if n and 2 * u >= n:
        remark_rhs = 2 * p * u + (3 * b / n) * u * u
        remark_passed = bool(var <= remark_rhs)
    passed = var <= rhs
    params = {"p": p, "a_n": a, "b_n": b, "u_size": u,
              "codegree_mode": profile.codegree_mode,
              "remark_bound": remark_rhs, "remark_passed": remark_passed}
    return LemmaReport("variance", bool(passed), 1,
                       None if passed else {"u_size": u, "variance": var},
                       params, measured=var, bound=rhs)


def xi_count_check(g: Graph, U: Sequence[int], profile, alpha: float) -> LemmaReport:
    """Exact count of vertices with d(v, U) >= (1+alpha) p |U| against
    4/(alpha p)^2 * (4p + 12 b_n). Needs |U| >= n/2 and a_n <= alpha p n / 2."""
    _require_certified(profile, need_a3=True)
    n, p, a, b = g.n, profile.p, profile.a_n, profile.b_n
    us = sorted({int(v) for v in U})
    if 2 * len(us) < n:
        raise USmall(f"|U| = {len(us)} < n/2 = {n / 2}")
    if a > alpha * p * n / 2:
        raise SlackTooLarge(f"a_n = {a} > alpha*p*n/2 = {alpha * p * n / 2}")
    mask = np.zeros(n, dtype=bool)
    mask[us] = True
    d = degrees_into(g, mask)
    threshold = (1 + alpha) * p * len(us)
    xi = int((d >= threshold).sum())
    bound = 4.0 / (alpha * p) ** 2 * (4 * p + 12 * b)
    passed = xi <= bound
    witness = None
    if not passed:
        witness = {"vertices": np.flatnonzero(d >= threshold)[:10].tolist()}
    params = {"p": p, "a_n": a, "b_n": b, "alpha": alpha, "u_size": len(us),
              "threshold": threshold, "codegree_mode": profile.codegree_mode}
    return LemmaReport("xi_count", bool(passed), 1, witness, params,
                       measured=xi, bound=bound)


def grow_connected_set(g: Graph, root: int, size: int,
                       within: Optional[Sequence[int]] = None) -> List[int]:
    """First `size` vertices of a BFS from root (optionally confined to
    `within`); raises NotConnected when the reachable set is too small."""
    allowed = None
    if within is not None:
        allowed = np.zeros(g.n, dtype=bool)
        allowed[list(within)] = True
        if not allowed[root]:
            raise NotConnected(f"root {root} not in the confining set")
    seen = {int(root)}
    frontier = [int(root)]
    order = [int(root)]
    while frontier and len(order) < size:
        nxt = []
        for v in frontier:
            for w in g.neighbors_of(v):
                w = int(w)
                if w in seen or (allowed is not None and not allowed[w]):
                    continue
                seen.add(w)
                order.append(w)
                nxt.append(w)
                if len(order) == size:
                    return sorted(order)
        frontier = nxt
    if len(order) < size:
        raise NotConnected(f"only {len(order)} vertices reachable, need {size}")
    return sorted(order)


def _is_connected_induced(g: Graph, C: List[int]) -> bool:
    if not C:
        return False
    cset = set(C)
    seen = {C[0]}
    frontier = [C[0]]
    while frontier:
        nxt = []
        for v in frontier:
            for w in g.neighbors_of(v):
                w = int(w)
                if w in cset and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen) == len(cset)


def outer_complement_check(g: Graph, C: Sequence[int], profile,
                           epsilon: float) -> LemmaReport:
    """Exact count of vertices neither in C nor adjacent to C, against
    n(1 - eps + eps^2/2 + eps*l_n) with l_n = a_n/n + (eps/2) b_n/(n p^2).

    C must induce a connected subgraph of size ceil(eps/p) (+/- 1 rounding
    tolerance). The looser variant with eps^2 instead of eps^2/2 is evaluated
    alongside and echoed in the parameters.
    """
    _require_certified(profile, need_a3=False)
    n, p, a, b = g.n, profile.p, profile.a_n, profile.b_n
    cs = sorted({int(v) for v in C})
    if not cs:
        raise EmptySet("C must be nonempty")
    if not _is_connected_induced(g, cs):
        raise NotConnected("C does not induce a connected subgraph")
    target = math.ceil(epsilon / p)
    if abs(len(cs) - target) > 1:
        raise SizeMismatch(f"|C| = {len(cs)}, need ceil(eps/p) = {target} (+/- 1)")
    nbhd = neighborhood_size(g, cs)
    outer = n - nbhd - len(cs)
    l_n = a / n + (epsilon / 2) * b / (n * p * p)
    bound_proof = n * (1 - epsilon + epsilon ** 2 / 2 + epsilon * l_n)
    bound_statement = n * (1 - epsilon + epsilon ** 2 + epsilon * l_n)
    passed = outer <= bound_proof
    params = {"p": p, "a_n": a, "b_n": b, "epsilon": epsilon, "l_n": l_n,
              "c_size": len(cs), "c_size_target": target,
              "neighborhood_size": nbhd,
              "bound_statement": bound_statement,
              "statement_passed": bool(outer <= bound_statement),
              "codegree_mode": profile.codegree_mode}
    return LemmaReport("outer_complement", bool(passed), 1,
                       None if passed else {"outer_size": outer, "C": cs[:10]},
                       params, measured=outer, bound=bound_proof)
