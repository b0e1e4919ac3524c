"""Matchings on the violation graph of a real-valued function over a poset.

An edge joins comparable x < y with f(x) > f(y); its weight (violation score)
is f(x) - f(y).  ``match_violations`` builds the layered matching: thresholds
t = 2, 1, 1/2, ... while t > eps/2, each layer adding a maximal matching of
the still-unmatched edges of score >= t.  For eps below 1/N it instead runs a
greedy pass over all violated edges in decreasing score.

Two interchangeable realizations are provided: a local one answering each
``partner`` query by exploring around the vertex, and a materialized one
computing every layer at once with array operations.  Both use the same hashed
edge priorities and therefore produce the same matching.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np

from .boolfn import Evaluator
from .lca import MatchingLCA, Seed, as_seed, edge_ranks, greedy_matching_global
from .poset import PosetAccess, truncated_cube

FunctionLike = Union[Evaluator, np.ndarray]


def _as_evaluator(P: PosetAccess, f: FunctionLike) -> Evaluator:
    if isinstance(f, Evaluator):
        return f
    values = np.asarray(f, dtype=float)
    els = P.elements()
    if values.shape != els.shape:
        raise ValueError("value array must align with the poset's elements")
    return Evaluator(lambda v: values[P.index_of(v)], vectorized=lambda vs: values[P.index_of(vs)],
                     meta="element-aligned values")


def _element_values(P: PosetAccess, f: FunctionLike) -> np.ndarray:
    if isinstance(f, Evaluator):
        return f.many(P.elements())
    values = np.asarray(f, dtype=float)
    if values.shape != P.elements().shape:
        raise ValueError("value array must align with the poset's elements")
    return values


def layer_thresholds(eps: float) -> list[float]:
    out, t = [], 2.0
    while t > eps / 2:
        out.append(t)
        t /= 2
    return out


def filter_edges(P: PosetAccess, f: Evaluator, t: float, M: Callable[[int], Optional[int]],
                 x: int) -> list[int]:
    """Comparable y with score >= t against x that ``M`` leaves unmatched."""
    if t <= 0:
        raise ValueError("threshold must be positive")
    fx = f(x)
    out = []
    for y in P.all_succs(x):
        if fx >= f(y) + t and M(y) is None:
            out.append(y)
    for y in P.all_preds(x):
        if fx <= f(y) - t and M(y) is None:
            out.append(y)
    return out


def _no_match(_v: int) -> Optional[int]:
    return None


class Matching:
    """A partner map on the vertices of a poset."""

    poset: PosetAccess

    def partner(self, v: int) -> Optional[int]:
        raise NotImplementedError

    def __call__(self, v: int) -> Optional[int]:
        return self.partner(v)

    def mate_indices(self) -> np.ndarray:
        """Partner of each element as an element index, -1 if unmatched."""
        els = self.poset.elements()
        mate = np.full(len(els), -1, dtype=np.int64)
        for i, v in enumerate(els.tolist()):
            p = self.partner(v)
            if p is not None:
                mate[i] = self.poset.index_of(p)
        return mate

    def pairs(self) -> list[tuple[int, int]]:
        """Matched pairs (lower, upper) as vertex ids."""
        els = self.poset.elements()
        mate = self.mate_indices()
        out = []
        for i in np.nonzero(mate >= 0)[0]:
            j = mate[i]
            a, b = int(els[i]), int(els[j])
            if self.poset._precedes(a, b):
                out.append((a, b))
            elif not self.poset._precedes(b, a):
                raise AssertionError(f"matched incomparable pair {a}, {b}")
        return out

    def weight(self, f: FunctionLike) -> float:
        return matching_weight(self, f)


class MaterializedMatching(Matching):
    def __init__(self, poset: PosetAccess, mate: np.ndarray, info: Optional[dict] = None):
        self.poset = poset
        self._mate = np.asarray(mate, dtype=np.int64)
        self.info = info or {}

    def partner(self, v: int) -> Optional[int]:
        if not self.poset.contains(v):
            return None
        j = self._mate[int(self.poset.index_of(v))]
        return None if j < 0 else int(self.poset.elements()[j])

    def mate_indices(self) -> np.ndarray:
        return self._mate.copy()


class LocalLayeredMatching(Matching):
    """Layer j answers from layer j-1 when it has matched v; otherwise it asks a
    matching oracle running on the graph of unmatched edges of score >= t_j."""

    def __init__(self, poset: PosetAccess, f: Evaluator, eps: float, seed: Seed,
                 memo: str = "instance", depth_cap: int = 10_000):
        self.poset = poset
        self.f = f
        self.eps = eps
        self.seed = seed
        self.thresholds = layer_thresholds(eps)
        self.layers: list[Callable[[int], Optional[int]]] = []
        self.oracles: list[MatchingLCA] = []
        prev: Callable[[int], Optional[int]] = _no_match
        for j, t in enumerate(self.thresholds):
            oracle = MatchingLCA(self._filtered(prev, t), seed, tag=f"layer/{j}",
                                 memo=memo, depth_cap=depth_cap)
            layer = self._compose(prev, oracle)
            self.oracles.append(oracle)
            self.layers.append(layer)
            prev = layer

    def _filtered(self, prev, t):
        def neighbors(x: int) -> list[int]:
            if prev(x) is not None:
                return []
            return filter_edges(self.poset, self.f, t, prev, x)
        return neighbors

    @staticmethod
    def _compose(prev, oracle):
        def layer(x: int) -> Optional[int]:
            p = prev(x)
            return p if p is not None else oracle.partner(x)
        return layer

    def partner(self, v: int) -> Optional[int]:
        if not self.poset.contains(v):
            return None
        return self.layers[-1](int(v)) if self.layers else None

    def probe_stats(self) -> dict:
        per_layer = [o.probe_stats() for o in self.oracles]
        return {
            "layers": len(per_layer),
            "max_probes": max((s["max_probes"] for s in per_layer), default=0),
            "evaluator_probes": self.f.probe_count,
            "seed_bytes": self.seed.bytes_consumed,
        }


def _violation_edges(P: PosetAccess, values: np.ndarray):
    lo, hi = P.comparable_pairs()
    score = values[lo] - values[hi]
    return lo, hi, score


def materialize_layers(P: PosetAccess, values: np.ndarray, eps: float, seed: Seed,
                       record: Optional[list] = None) -> np.ndarray:
    """All layers of the threshold-halving matching, computed globally."""
    els = P.elements()
    lo, hi, score = _violation_edges(P, values)
    N = len(els)
    mate = np.full(N, -1, dtype=np.int64)
    for j, t in enumerate(layer_thresholds(eps)):
        sel = (score >= t) & (mate[lo] < 0) & (mate[hi] < 0)
        if sel.any():
            u, v = lo[sel], hi[sel]
            ranks = edge_ranks(seed, f"layer/{j}", els[u], els[v])
            layer_mate = greedy_matching_global(N, u, v, ranks)
            newly = layer_mate >= 0
            mate[newly] = layer_mate[newly]
        if record is not None:
            record.append((t, mate.copy()))
    return mate


def greedy_by_score(P: PosetAccess, values: np.ndarray, seed: Seed) -> np.ndarray:
    """Greedy matching over violated pairs in decreasing score, ties by hashed priority."""
    els = P.elements()
    lo, hi, score = _violation_edges(P, values)
    sel = score > 0
    u, v = lo[sel], hi[sel]
    ranks = edge_ranks(seed, "greedy", els[u], els[v], primary=-score[sel])
    return greedy_matching_global(len(els), u, v, ranks)


def match_violations(P: PosetAccess, f: FunctionLike, eps: float, seed, *,
                     mode: str = "materialized", branch: str = "auto",
                     memo: str = "instance") -> Matching:
    """Matching on the violation graph whose weight is at least N(dist_1/4 - eps) w.h.p.

    ``branch`` selects the greedy pass ("greedy"), the layered construction
    ("layered"), or the rule eps < 1/N => greedy ("auto").  ``mode`` chooses
    between array materialization and per-query local answers for the layered
    construction; the greedy pass is always materialized.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if branch not in ("auto", "layered", "greedy"):
        raise ValueError(f"unknown branch {branch!r}")
    if mode not in ("materialized", "local"):
        raise ValueError(f"unknown mode {mode!r}")
    seed = as_seed(seed)
    if branch == "auto":
        branch = "greedy" if eps < 1 / P.n_elements else "layered"
    if branch == "greedy":
        values = _element_values(P, f)
        return MaterializedMatching(P, greedy_by_score(P, values, seed), {"branch": "greedy"})
    if mode == "local":
        return LocalLayeredMatching(P, _as_evaluator(P, f), eps, seed, memo=memo)
    values = _element_values(P, f)
    return MaterializedMatching(P, materialize_layers(P, values, eps, seed), {"branch": "layered"})


class HypercubeMatching(Matching):
    """Matching on the truncated cube; points outside the band are unmatched."""

    def __init__(self, n: int, f: Evaluator, eps: float, seed, mode: str = "materialized",
                 branch: str = "auto"):
        self.n = n
        self.poset = truncated_cube(n, eps)
        self.inner = match_violations(self.poset, f, eps, seed, mode=mode, branch=branch)

    def partner(self, v: int) -> Optional[int]:
        if not self.poset.contains(v):
            return None
        return self.inner.partner(v)

    def mate_indices(self) -> np.ndarray:
        return self.inner.mate_indices()

    @cached_property
    def full_mate(self) -> np.ndarray:
        """Partner of every point of the cube (-1 if none), indexed by mask."""
        mate = np.full(1 << self.n, -1, dtype=np.int64)
        els = self.poset.elements()
        idx = self.inner.mate_indices()
        has = idx >= 0
        mate[els[has]] = els[idx[has]]
        return mate


def hypercube_matching(f: Evaluator, n: int, eps: float, seed, mode: str = "materialized",
                       branch: str = "auto") -> HypercubeMatching:
    return HypercubeMatching(n, f, eps, seed, mode=mode, branch=branch)


def matching_weight(M: Matching, f: FunctionLike) -> float:
    """Sum over matched pairs x < y of f(x) - f(y)."""
    P = M.poset
    values = _element_values(P, f)
    mate = M.mate_indices()
    idx = np.nonzero(mate >= 0)[0]
    total = 0.0
    for i in idx:
        j = mate[i]
        a, b = int(P.elements()[i]), int(P.elements()[j])
        if P._precedes(a, b):
            total += values[i] - values[j]
    return float(total)


def check_valid(M: Matching, f: FunctionLike) -> bool:
    """Involution whose pairs are all comparable and violated."""
    P = M.poset
    values = _element_values(P, f)
    mate = M.mate_indices()
    els = P.elements()
    for i in np.nonzero(mate >= 0)[0]:
        j = mate[i]
        if mate[j] != i:
            return False
        a, b = int(els[i]), int(els[j])
        if P._precedes(a, b):
            if not values[i] > values[j]:
                return False
        elif P._precedes(b, a):
            if not values[j] > values[i]:
                return False
        else:
            return False
    return True


def is_maximal_above(P: PosetAccess, values: np.ndarray, mate: np.ndarray, t: float) -> bool:
    """No edge of score >= t has both endpoints unmatched."""
    lo, hi, score = _violation_edges(P, values)
    sel = score >= t
    return not np.any((mate[lo[sel]] < 0) & (mate[hi[sel]] < 0))
