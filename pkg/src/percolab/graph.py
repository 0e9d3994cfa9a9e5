"""Ground-graph construction and queries.

Graphs are immutable, undirected, simple, with vertices labelled 0..n-1.
Adjacency is stored in compressed sparse row form: `offsets[v]:offsets[v+1]`
slices `neighbors` to give the sorted neighbor list of v.

Generation is deterministic given the spec: all randomness comes from
PCG64(SeedSequence(seed)) (see rng module). The gnp generator samples
unordered pairs in lexicographic order via geometric skipping: with
q = log(1-p), each gap between successive edges is floor(log(1-u)/q) for a
fresh uniform u; uniforms are drawn from the root stream of the seed and the
consumed prefix is identical whether drawn one at a time or in batches, so an
independent scalar re-implementation reproduces the edge set exactly.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (
    GraphTooSmall,
    InvalidSpec,
    NonSimple,
    ParseError,
    ResourceLimit,
    SameVertex,
    VertexOutOfRange,
)
from .rng import derived, generator

# Expected-edge ceiling for generators; n**2 bits ceiling for exact co-degree.
DEFAULT_EDGE_CAP = 50_000_000
EXACT_CODEGREE_CAP = 20_000

_GNP_BATCH = 1 << 16


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph in CSR adjacency form."""

    n: int
    offsets: np.ndarray  # int64, length n+1
    neighbors: np.ndarray  # int32, length 2*edge_count, sorted per row
    edge_count: int

    def degree(self, v) -> int:
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} not in 0..{self.n - 1}")
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors_of(self, v) -> np.ndarray:
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} not in 0..{self.n - 1}")
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def has_edge(self, u, v) -> bool:
        row = self.neighbors_of(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v


def co_degree(g: Graph, u, v) -> int:
    """Number of common neighbors |N_u ∩ N_v|; symmetric in (u, v)."""
    if u == v:
        raise SameVertex(f"co_degree needs u != v, got {u}")
    a = g.neighbors_of(u)
    b = g.neighbors_of(v)
    return int(np.intersect1d(a, b, assume_unique=True).size)


def degree(g: Graph, v) -> int:
    return g.degree(v)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for one graph construction; fields unused by `kind` stay None."""

    kind: str
    n: Optional[int] = None
    p: Optional[float] = None
    q: Optional[int] = None
    seed: Optional[int] = None
    path: Optional[str] = None


_KIND_FIELDS = {
    "gnp": {"n", "p", "seed"},
    "complete": {"n"},
    "paley": {"q"},
    "near_regular_perturbed": {"n", "p", "seed"},
    "from_file": {"path"},
}


def _validate_spec(spec: GeneratorSpec):
    if spec.kind not in _KIND_FIELDS:
        raise InvalidSpec(f"unknown kind {spec.kind!r}")
    needed = _KIND_FIELDS[spec.kind]
    given = {f for f in ("n", "p", "q", "seed", "path") if getattr(spec, f) is not None}
    if given != needed:
        raise InvalidSpec(f"kind {spec.kind!r} needs exactly {sorted(needed)}, got {sorted(given)}")
    if "n" in needed and spec.n < 0:
        raise InvalidSpec(f"n must be >= 0, got {spec.n}")
    if "p" in needed and not 0.0 < spec.p < 1.0:
        raise InvalidSpec(f"p must be in (0,1), got {spec.p}")
    if "q" in needed:
        if spec.q < 5 or not _is_prime(spec.q) or spec.q % 4 != 1:
            raise InvalidSpec(f"q must be a prime = 1 mod 4, got {spec.q}")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def generate(spec: GeneratorSpec, edge_cap: int = DEFAULT_EDGE_CAP) -> Graph:
    """Build the graph described by `spec`; pure function of its parameters."""
    _validate_spec(spec)
    if spec.kind == "gnp":
        _check_cap(spec.n * (spec.n - 1) / 2 * spec.p, edge_cap)
        eu, ev = _gnp_pairs(spec.n, spec.p, spec.seed)
        return _from_edge_arrays(spec.n, eu, ev)
    if spec.kind == "complete":
        _check_cap(spec.n * (spec.n - 1) / 2, edge_cap)
        eu, ev = _complete_pairs(spec.n)
        return _from_edge_arrays(spec.n, eu, ev)
    if spec.kind == "paley":
        _check_cap(spec.q * (spec.q - 1) / 4, edge_cap)
        eu, ev = _paley_pairs(spec.q)
        return _from_edge_arrays(spec.q, eu, ev)
    if spec.kind == "near_regular_perturbed":
        _check_cap(spec.n * (spec.n - 1) / 2 * spec.p, edge_cap)
        return _near_regular_perturbed(spec.n, spec.p, spec.seed)
    return load_edge_list(spec.path)


def _check_cap(expected_edges: float, cap: int):
    if expected_edges > cap:
        raise ResourceLimit(f"expected {expected_edges:.3g} edges exceeds cap {cap}")


def _from_edge_arrays(n: int, eu: np.ndarray, ev: np.ndarray) -> Graph:
    # Input: unique unordered pairs with eu < ev. Symmetrize, then CSR.
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order].astype(np.int32)
    offsets = np.searchsorted(src, np.arange(n + 1, dtype=np.int64)).astype(np.int64)
    offsets.setflags(write=False)
    dst.setflags(write=False)
    return Graph(n=n, offsets=offsets, neighbors=dst, edge_count=len(eu))


def _gnp_pairs(n: int, p: float, seed: int):
    total = n * (n - 1) // 2
    if total == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy()
    rng = generator(seed)
    log1mp = np.log1p(-p)
    # cum[u] = lexicographic index of pair (u, u+1)
    rows = np.arange(n, dtype=np.int64)
    cum = rows * n - rows * (rows + 1) // 2
    out_u, out_v = [], []
    pos = -1
    while True:
        u = rng.random(_GNP_BATCH)
        gaps = np.floor(np.log1p(-u) / log1mp).astype(np.int64)
        ks = pos + np.cumsum(gaps + 1)
        done = ks[-1] >= total
        if done:
            ks = ks[ks < total]
        if len(ks):
            us = np.searchsorted(cum, ks, "right") - 1
            out_u.append(us)
            out_v.append(ks - cum[us] + us + 1)
        if done:
            break
        pos = int(ks[-1])
    return np.concatenate(out_u), np.concatenate(out_v)


def _complete_pairs(n: int):
    iu = np.triu_indices(n, k=1)
    return iu[0].astype(np.int64), iu[1].astype(np.int64)


def _paley_pairs(q: int):
    # x ~ y iff x - y is a nonzero quadratic residue mod q; q = 1 mod 4 makes
    # -1 a residue, so adjacency is symmetric.
    residues = sorted({(x * x) % q for x in range(1, q)})
    pairs = set()
    for a in range(q):
        for r in residues:
            b = (a + r) % q
            if a != b:
                pairs.add((min(a, b), max(a, b)))
    if pairs:
        arr = np.array(sorted(pairs), dtype=np.int64)
        return arr[:, 0], arr[:, 1]
    z = np.zeros(0, dtype=np.int64)
    return z, z.copy()


def _near_regular_perturbed(n: int, p: float, seed: int, fraction: float = 0.01) -> Graph:
    base = _gnp_pairs(n, p, seed)
    codes = set((base[0] * n + base[1]).tolist())
    rng = derived(seed, 1)
    k = max(1, int(np.ceil(fraction * n)))
    chosen = rng.choice(n, size=min(k, n), replace=False)
    for x in chosen:
        y = int(rng.integers(0, n - 1))
        y += y >= x  # uniform over [n] \ {x}
        u, v = (int(x), y) if x < y else (y, int(x))
        code = u * n + v
        if code in codes:
            codes.remove(code)
        else:
            codes.add(code)
    arr = np.fromiter(sorted(codes), dtype=np.int64, count=len(codes))
    return _from_edge_arrays(n, arr // n, arr % n)


def degrees_into(g: Graph, in_set: np.ndarray) -> np.ndarray:
    """d(v, U) for every vertex v, where in_set is a boolean mask of U."""
    counts = np.zeros(g.n, dtype=np.int64)
    nonempty = g.offsets[:-1] < g.offsets[1:]
    if nonempty.any():
        hits = in_set[g.neighbors].astype(np.int64)
        counts[nonempty] = np.add.reduceat(hits, g.offsets[:-1][nonempty])
    return counts


@dataclass(frozen=True)
class CoDegreeResult:
    value: int
    pair: Tuple[int, int]
    mode: str  # "exact" | "sampled"


def max_co_degree(g: Graph, exact_cap: int = EXACT_CODEGREE_CAP,
                  sample_pairs: int = 50_000) -> CoDegreeResult:
    """Maximum co-degree over unordered pairs, with one attaining pair.

    Exact strategy (n <= exact_cap): one packed bitset row per vertex (n**2
    bits total) and popcounted row ANDs; runtime grows like n**3, several
    minutes near the default cap. Beyond the cap: exact intersection counts
    over `sample_pairs` sampled pairs plus all pairs among the top-degree 1%
    of vertices, mode flagged "sampled" (a lower bound on the true maximum).
    Deterministic for a given graph; the sampling stream is keyed by
    (n, edge_count).
    """
    if g.n < 2:
        raise GraphTooSmall("max_co_degree needs n >= 2")
    if g.n <= exact_cap:
        value, pair = _max_codegree_exact(g)
        return CoDegreeResult(value=value, pair=pair, mode="exact")
    value, pair = _max_codegree_sampled(g, sample_pairs)
    return CoDegreeResult(value=value, pair=pair, mode="sampled")


def _packed_rows(g: Graph, rows: np.ndarray) -> np.ndarray:
    out = np.zeros((len(rows), (g.n + 7) // 8), dtype=np.uint8)
    block = np.zeros((1, g.n), dtype=bool)
    for i, v in enumerate(rows):
        block[0, :] = False
        block[0, g.neighbors_of(int(v))] = True
        out[i] = np.packbits(block, axis=1)[0]
    return out


def _max_codegree_exact(g: Graph):
    packed = _packed_rows(g, np.arange(g.n))
    best = -1
    pair = (0, 1)
    for u in range(g.n - 1):
        counts = np.bitwise_count(packed[u] & packed[u + 1:]).sum(axis=1, dtype=np.int64)
        i = int(np.argmax(counts))
        if counts[i] > best:
            best = int(counts[i])
            pair = (u, u + 1 + i)
    return best, pair


def _max_codegree_sampled(g: Graph, sample_pairs: int):
    best = -1
    pair = (0, 1)
    # All pairs among the top-degree 1% (ties broken by index): high-degree
    # vertices dominate the maximum.
    t = max(2, g.n // 100)
    deg = g.degrees()
    top = np.sort(np.argsort(-deg, kind="stable")[:t])
    packed = _packed_rows(g, top)
    for i in range(len(top) - 1):
        counts = np.bitwise_count(packed[i] & packed[i + 1:]).sum(axis=1, dtype=np.int64)
        j = int(np.argmax(counts))
        if counts[j] > best:
            best = int(counts[j])
            pair = (int(top[i]), int(top[i + 1 + j]))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((0xC0DE6, g.n, g.edge_count))))
    us = rng.integers(0, g.n, size=sample_pairs)
    vs = rng.integers(0, g.n - 1, size=sample_pairs)
    vs = vs + (vs >= us)
    for u, v in zip(us.tolist(), vs.tolist()):
        c = int(np.intersect1d(g.neighbors_of(u), g.neighbors_of(v), assume_unique=True).size)
        if c > best:
            best = c
            pair = (min(u, v), max(u, v))
    return best, pair


_HEADER_PREFIX = "# n="


def load_edge_list(path) -> Graph:
    """Parse the canonical edge-list format (see save_edge_list)."""
    declared_n = None
    us, vs = [], []
    seen = set()
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("n="):
                    try:
                        declared_n = int(body[2:])
                    except ValueError:
                        raise ParseError(line_no, f"bad header {line!r}")
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(line_no, f"expected two vertex ids, got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(line_no, f"non-integer vertex id in {line!r}")
            if u < 0 or v < 0:
                raise ParseError(line_no, f"negative vertex id in {line!r}")
            if u == v:
                raise NonSimple(line_no, f"self-loop {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise NonSimple(line_no, f"duplicate edge {key}")
            seen.add(key)
            if declared_n is not None and max(u, v) >= declared_n:
                raise ParseError(line_no, f"vertex {max(u, v)} outside declared n={declared_n}")
            us.append(key[0])
            vs.append(key[1])
            max_id = max(max_id, v, u)
    n = declared_n if declared_n is not None else max_id + 1
    arr_u = np.array(us, dtype=np.int64)
    arr_v = np.array(vs, dtype=np.int64)
    order = np.lexsort((arr_v, arr_u))
    return _from_edge_arrays(n, arr_u[order], arr_v[order])


def save_edge_list(g: Graph, path):
    """Write canonical form: '# n=<N>' header, then 'u v' lines with u < v,
    sorted by (u, v). save -> load -> save is byte-identical."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_HEADER_PREFIX}{g.n}\n")
        for u in range(g.n):
            row = g.neighbors_of(u)
            for v in row[np.searchsorted(row, u + 1):]:
                fh.write(f"{u} {v}\n")
