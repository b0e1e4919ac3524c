"""Shared-seed randomness and a local maximal-matching oracle.

The matching is the randomized greedy matching under hashed edge priorities:
an edge belongs to it iff no adjacent edge of smaller priority does.  Any
vertex's partner can be answered by exploring only lower-priority edges around
it, and every instance built on the same seed describes the same global
matching, whatever order the queries arrive in.
"""

from __future__ import annotations

import hashlib
import os
import threading
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64) + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


class Seed:
    """32-byte root from which every random choice is derived by keyed hashing."""

    def __init__(self, root=None):
        if root is None:
            root = os.urandom(32)
        elif isinstance(root, Seed):
            root = root.root
        elif isinstance(root, str):
            root = bytes.fromhex(root.removeprefix("0x"))
        elif isinstance(root, (int, np.integer)):
            root = hashlib.sha256(b"int:" + str(int(root)).encode()).digest()
        root = bytes(root)
        if len(root) != 32:
            root = hashlib.sha256(root).digest()
        self.root = root
        self._consumed = 0
        self._lock = threading.Lock()
        self._bases: dict[str, int] = {}

    @property
    def bytes_consumed(self) -> int:
        return self._consumed

    def _charge(self, k: int) -> None:
        with self._lock:
            self._consumed += k

    def hex(self) -> str:
        return self.root.hex()

    def _base(self, tag: str) -> int:
        base = self._bases.get(tag)
        if base is None:
            digest = hashlib.blake2b(tag.encode(), key=self.root, digest_size=8).digest()
            base = int.from_bytes(digest, "little")
            self._bases[tag] = base
        return base

    def hash64(self, tag: str, *parts: int) -> int:
        self._charge(8)
        h = self._base(tag)
        for p in parts:
            h = splitmix64(h ^ (int(p) & MASK64))
        return h

    def hash64_many(self, tag: str, *parts: np.ndarray) -> np.ndarray:
        """Vectorized ``hash64``: identical values, one per row of the broadcast parts."""
        arrays = np.broadcast_arrays(*[np.asarray(p, dtype=np.int64) for p in parts])
        size = arrays[0].size if arrays else 1
        self._charge(8 * size)
        h = np.full(arrays[0].shape if arrays else (), self._base(tag), dtype=np.uint64)
        for a in arrays:
            h = splitmix64_array(h ^ a.astype(np.uint64))
        return h

    def generator(self, tag: str) -> np.random.Generator:
        self._charge(32)
        digest = hashlib.blake2b(tag.encode(), key=self.root, digest_size=32).digest()
        return np.random.default_rng(np.frombuffer(digest, dtype=np.uint32))

    def child(self, tag: str) -> "Seed":
        self._charge(32)
        return Seed(hashlib.blake2b(b"child:" + tag.encode(), key=self.root, digest_size=32).digest())

    def __repr__(self) -> str:
        return f"Seed({self.root.hex()[:16]}..., consumed={self._consumed})"


def as_seed(seed) -> Seed:
    return seed if isinstance(seed, Seed) else Seed(seed)


def vertex_rand(seed: Seed, tag: str, vid) -> int:
    parts = vid if isinstance(vid, tuple) else (vid,)
    return seed.hash64(tag, *parts)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


class DepthExceeded(RuntimeError):
    pass


class MatchingLCA:
    """Partner queries for the hashed-priority greedy maximal matching.

    ``neighbors(v)`` must return the neighbour list of v in an undirected
    simple graph and be a pure function of v.  With ``memo="instance"``
    resolved edges and neighbour lists are cached across queries; the cached
    values are pure functions of (graph, seed), so answers do not depend on
    query history.  ``memo="query"`` starts every query cold, which makes the
    recorded probe counts honest per-query locality measurements.
    """

    def __init__(self, neighbors: Callable[[int], Iterable[int]], seed, *, tag: str = "edge",
                 delta: float = 0.01, depth_cap: int = 10_000, memo: str = "instance",
                 contains: Optional[Callable[[int], bool]] = None):
        if memo not in ("instance", "query"):
            raise ValueError("memo must be 'instance' or 'query'")
        self._neighbors = neighbors
        self.seed = as_seed(seed)
        self.tag = tag
        self.delta = delta
        self.depth_cap = depth_cap
        self.memo = memo
        self._contains = contains
        self._lock = threading.RLock()
        self._nbr_cache: dict[int, list[int]] = {}
        self._edge_cache: dict[tuple[int, int], bool] = {}
        self._rank_cache: dict[tuple[int, int], tuple[int, int, int]] = {}
        self.query_probes: list[int] = []
        self._probes = 0

    def _nbrs(self, v: int) -> list[int]:
        got = self._nbr_cache.get(v)
        if got is None:
            self._probes += 1
            got = [int(u) for u in self._neighbors(v)]
            self._nbr_cache[v] = got
        return got

    def rank(self, u: int, v: int) -> tuple[int, int, int]:
        key = edge_key(u, v)
        r = self._rank_cache.get(key)
        if r is None:
            r = (self.seed.hash64(self.tag, *key), *key)
            self._rank_cache[key] = r
        return r

    def _lower_edges(self, e: tuple[int, int]) -> list[tuple[int, int]]:
        re = self.rank(*e)
        out = set()
        for end in e:
            for w in self._nbrs(end):
                f = edge_key(end, w)
                if f != e and self.rank(*f) < re:
                    out.add(f)
        return sorted(out, key=lambda f: self.rank(*f))

    def _in_matching(self, e: tuple[int, int]) -> bool:
        memo = self._edge_cache
        if e in memo:
            return memo[e]
        stack = [[e, self._lower_edges(e), 0]]
        while stack:
            frame = stack[-1]
            edge, lower, i = frame
            while i < len(lower):
                f = lower[i]
                known = memo.get(f)
                if known is None:
                    break
                if known:
                    memo[edge] = False
                    break
                i += 1
            frame[2] = i
            if edge in memo:
                stack.pop()
                continue
            if i == len(lower):
                memo[edge] = True
                stack.pop()
                continue
            if len(stack) >= self.depth_cap:
                raise DepthExceeded(f"exploration depth exceeded {self.depth_cap}")
            f = lower[i]
            stack.append([f, self._lower_edges(f), 0])
        return memo[e]

    def partner(self, v: int) -> Optional[int]:
        v = int(v)
        if self._contains is not None and not self._contains(v):
            raise KeyError(f"vertex {v} not in graph")
        with self._lock:
            if self.memo == "query":
                self._nbr_cache.clear()
                self._edge_cache.clear()
            start = self._probes
            answer = None
            incident = sorted((edge_key(v, u) for u in self._nbrs(v)), key=lambda f: self.rank(*f))
            for e in incident:
                if self._in_matching(e):
                    answer = e[1] if e[0] == v else e[0]
                    break
            self.query_probes.append(self._probes - start)
            return answer

    __call__ = partner

    def probe_stats(self) -> dict:
        q = self.query_probes
        return {
            "queries": len(q),
            "max_probes": max(q) if q else 0,
            "mean_probes": float(np.mean(q)) if q else 0.0,
            "seed_bytes": self.seed.bytes_consumed,
        }


def ghaffari_matching(neighbors: Callable[[int], Iterable[int]], seed, delta: float, v: int,
                      tag: str = "edge") -> Optional[int]:
    """One-shot partner query; equivalent to ``MatchingLCA(...).partner(v)``."""
    return MatchingLCA(neighbors, seed, tag=tag, delta=delta, memo="query").partner(v)


def edge_ranks(seed: Seed, tag: str, u_ids: np.ndarray, v_ids: np.ndarray,
               primary: Optional[np.ndarray] = None) -> np.ndarray:
    """Dense ranks 0..E-1 of edges ordered by (primary, hash priority, min id, max id)."""
    a = np.minimum(u_ids, v_ids)
    b = np.maximum(u_ids, v_ids)
    h = seed.hash64_many(tag, a, b)
    keys = [b, a, h] if primary is None else [b, a, h, primary]
    order = np.lexsort(keys)
    ranks = np.empty(len(order), dtype=np.int64)
    ranks[order] = np.arange(len(order))
    return ranks


def greedy_matching_global(n_vertices: int, u: np.ndarray, v: np.ndarray,
                           ranks: np.ndarray) -> np.ndarray:
    """Greedy matching in increasing rank order, computed in parallel rounds.

    Returns ``mate`` with mate[i] = matched index or -1.  Each round adds all
    edges whose rank is minimal at both endpoints, which is exactly the set the
    sequential greedy pass would add next.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    ranks = np.asarray(ranks, dtype=np.int64)
    mate = np.full(n_vertices, -1, dtype=np.int64)
    alive = np.ones(len(u), dtype=bool)
    sentinel = np.iinfo(np.int64).max
    while alive.any():
        ua, va, ra = u[alive], v[alive], ranks[alive]
        best = np.full(n_vertices, sentinel, dtype=np.int64)
        np.minimum.at(best, ua, ra)
        np.minimum.at(best, va, ra)
        win = (best[ua] == ra) & (best[va] == ra)
        mate[ua[win]] = va[win]
        mate[va[win]] = ua[win]
        alive &= (mate[u] < 0) & (mate[v] < 0)
    return mate


def check_maximal(mate: np.ndarray, u: np.ndarray, v: np.ndarray) -> bool:
    """Valid involution with no edge left between two unmatched vertices."""
    idx = np.nonzero(mate >= 0)[0]
    if np.any(mate[mate[idx]] != idx):
        return False
    return not np.any((mate[u] < 0) & (mate[v] < 0))


@dataclass
class FuzzReport:
    passed: bool
    trials: int
    vertices: int
    mismatches: list = field(default_factory=list)


def consistency_fuzz(factory: Callable[[], Callable[[int], Hashable]], vertices: Sequence[int],
                     trials: int, rng=None) -> FuzzReport:
    """Query every vertex in ``trials`` random orders, each on a fresh instance."""
    rng = np.random.default_rng(rng)
    vertices = [int(v) for v in vertices]
    reference = None
    mismatches = []
    for t in range(trials):
        lca = factory()
        order = rng.permutation(len(vertices))
        answers = {vertices[i]: lca(vertices[i]) for i in order}
        if reference is None:
            reference = answers
            continue
        for v in vertices:
            if answers[v] != reference[v]:
                mismatches.append((t, v, reference[v], answers[v]))
    return FuzzReport(not mismatches, trials, len(vertices), mismatches[:20])


class FirstComeMatching:
    """Negative control: greedily matches in query order, keeping state across queries."""

    def __init__(self, neighbors: Callable[[int], Iterable[int]]):
        self._neighbors = neighbors
        self._mate: dict[int, int] = {}

    def __call__(self, v: int) -> Optional[int]:
        if v in self._mate:
            return self._mate[v]
        for u in self._neighbors(v):
            if u not in self._mate:
                self._mate[v], self._mate[u] = u, v
                return u
        return None


def random_graph(n_vertices: int, edge_prob: float, rng) -> dict[int, list[int]]:
    rng = np.random.default_rng(rng)
    adj: dict[int, list[int]] = {v: [] for v in range(n_vertices)}
    for a in range(n_vertices):
        for b in range(a + 1, n_vertices):
            if rng.random() < edge_prob:
                adj[a].append(b)
                adj[b].append(a)
    return adj


def random_bounded_degree_graph(n_vertices: int, max_degree: int, rng) -> dict[int, list[int]]:
    """Random graph built by proposing edges and rejecting those exceeding the degree cap."""
    rng = np.random.default_rng(rng)
    adj: dict[int, set[int]] = {v: set() for v in range(n_vertices)}
    for _ in range(n_vertices * max_degree // 2):
        a, b = (int(x) for x in rng.integers(0, n_vertices, 2))
        if a != b and len(adj[a]) < max_degree and len(adj[b]) < max_degree:
            adj[a].add(b)
            adj[b].add(a)
    return {v: sorted(s) for v, s in adj.items()}


def bench_lca(adj: dict[int, list[int]], seed, queries: int, *, ceiling: int = 100_000,
              rng=None) -> dict:
    """Per-query probe statistics for cold queries at random vertices."""
    rng = np.random.default_rng(rng)
    lca = MatchingLCA(lambda v: adj[v], seed, memo="query", contains=lambda v: v in adj)
    verts = np.array(sorted(adj))
    for v in rng.choice(verts, size=min(queries, len(verts)), replace=False):
        lca.partner(int(v))
    stats = lca.probe_stats()
    stats["ceiling"] = ceiling
    stats["over_ceiling"] = int(sum(q > ceiling for q in lca.query_probes))
    stats["max_degree"] = max((len(a) for a in adj.values()), default=0)
    stats["vertices"] = len(adj)
    return stats
