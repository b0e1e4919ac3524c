"""Implicit posets: the truncated hypercube, explicit DAGs, and comparability
queries.

Every poset exposes its elements in a fixed order; functions over a poset are
handled either as query-counted evaluators keyed by vertex id, or as arrays
aligned with ``elements()``.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .boolfn import ENUM_CAP, DimensionError, _check_dim, popcount


class Relation(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class MembershipError(KeyError):
    """A vertex outside the poset was queried."""


class CycleError(ValueError):
    """An explicit edge list contains a directed cycle."""


class PosetAccess(ABC):
    n_elements: int
    max_degree: int
    height: int

    @abstractmethod
    def contains(self, v) -> bool: ...

    @abstractmethod
    def immediate_preds(self, v) -> list: ...

    @abstractmethod
    def immediate_succs(self, v) -> list: ...

    @abstractmethod
    def all_preds(self, v) -> list: ...

    @abstractmethod
    def all_succs(self, v) -> list: ...

    @abstractmethod
    def elements(self) -> np.ndarray: ...

    @abstractmethod
    def _precedes(self, u, v) -> bool:
        """u strictly below v; both known members."""

    def _require(self, v) -> None:
        if not self.contains(v):
            raise MembershipError(v)

    def comparable(self, u, v) -> Relation:
        self._require(u)
        self._require(v)
        if u == v:
            return Relation.EQUAL
        if self._precedes(u, v):
            return Relation.LESS
        if self._precedes(v, u):
            return Relation.GREATER
        return Relation.INCOMPARABLE

    def index_of(self, v) -> np.ndarray:
        """Positions of vertex ids within ``elements()``."""
        els = self.elements()
        v = np.asarray(v, dtype=np.int64)
        idx = np.searchsorted(els, v)
        idx = np.minimum(idx, len(els) - 1)
        if np.any(els[idx] != v):
            raise MembershipError("vertex not in poset")
        return idx

    @cached_property
    def _pairs(self) -> tuple[np.ndarray, np.ndarray]:
        els = self.elements()
        lo, hi = [], []
        for j, v in enumerate(els):
            preds = self.all_preds(int(v))
            lo.extend(preds)
            hi.extend([int(v)] * len(preds))
        if not lo:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return self.index_of(lo), self.index_of(hi)

    def comparable_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays (lo, hi) listing every pair elements[lo] < elements[hi]."""
        return self._pairs

    @cached_property
    def _covers(self) -> tuple[np.ndarray, np.ndarray]:
        els = self.elements()
        lo, hi = [], []
        for v in els:
            succs = self.immediate_succs(int(v))
            lo.extend([int(v)] * len(succs))
            hi.extend(succs)
        if not lo:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return self.index_of(lo), self.index_of(hi)

    def cover_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays of the covering (Hasse) relation."""
        return self._covers

    def is_monotone(self, values, tol: float = 0.0) -> bool:
        """Exhaustive check over all comparable pairs of an element-aligned array."""
        values = np.asarray(values)
        lo, hi = self.comparable_pairs()
        return bool(np.all(values[lo] <= values[hi] + tol))


class TruncatedCube(PosetAccess):
    """Points of {-1,+1}^n whose coordinate sum lies within +-threshold.

    threshold = sqrt(2 n ln(2/eps)); ``eps=None`` gives the full cube.
    """

    def __init__(self, n: int, eps: Optional[float] = None):
        _check_dim(n)
        if eps is not None and not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        self.n = n
        self.eps = eps
        self.threshold = math.inf if eps is None else math.sqrt(2 * n * math.log(2 / eps))
        ws = [w for w in range(n + 1) if abs(2 * w - n) <= self.threshold]
        self.weight_lo, self.weight_hi = ws[0], ws[-1]
        self.height = self.weight_hi - self.weight_lo
        self.max_degree = self._degree_bound()
        self.n_elements = sum(math.comb(n, w) for w in ws)

    def _degree_bound(self) -> int:
        lo, hi, n = self.weight_lo, self.weight_hi, self.n
        best = 0
        for w in range(lo, hi + 1):
            down = sum(math.comb(w, j) for j in range(lo, w))
            up = sum(math.comb(n - w, j - w) for j in range(w + 1, hi + 1))
            best = max(best, down, up)
        return best

    def in_band(self, x: int) -> bool:
        return self.weight_lo <= int(x).bit_count() <= self.weight_hi

    def contains(self, v) -> bool:
        v = int(v)
        return 0 <= v < (1 << self.n) and self.in_band(v)

    def excluded_fraction(self) -> float:
        return 1.0 - self.n_elements / 2 ** self.n

    def immediate_preds(self, v) -> list[int]:
        self._require(v)
        v = int(v)
        if v.bit_count() - 1 < self.weight_lo:
            return []
        return [v & ~(1 << i) for i in range(self.n) if v >> i & 1]

    def immediate_succs(self, v) -> list[int]:
        self._require(v)
        v = int(v)
        if v.bit_count() + 1 > self.weight_hi:
            return []
        return [v | (1 << i) for i in range(self.n) if not v >> i & 1]

    def all_preds(self, v) -> list[int]:
        self._require(v)
        v = int(v)
        out = []
        s = (v - 1) & v
        while True:
            if s.bit_count() >= self.weight_lo:
                out.append(s)
            if s == 0:
                break
            s = (s - 1) & v
        return sorted(out)

    def all_succs(self, v) -> list[int]:
        self._require(v)
        v = int(v)
        free = ((1 << self.n) - 1) & ~v
        out = []
        s = free
        while s:
            if (v | s).bit_count() <= self.weight_hi:
                out.append(v | s)
            s = (s - 1) & free
        return sorted(out)

    def _precedes(self, u, v) -> bool:
        return u != v and (int(u) & ~int(v)) == 0

    @cached_property
    def _elements(self) -> np.ndarray:
        if self.n > ENUM_CAP:
            raise DimensionError(f"element enumeration capped at n={ENUM_CAP}")
        pts = np.arange(1 << self.n, dtype=np.int64)
        w = popcount(pts)
        return pts[(w >= self.weight_lo) & (w <= self.weight_hi)]

    def elements(self) -> np.ndarray:
        return self._elements

    @cached_property
    def _pairs(self) -> tuple[np.ndarray, np.ndarray]:
        # every pair is a | d above a for a nonzero d disjoint from a
        pts = np.arange(1 << self.n, dtype=np.int64)
        w = popcount(pts)
        inband = (w >= self.weight_lo) & (w <= self.weight_hi)
        lo, hi = [], []
        for d in range(1, 1 << self.n):
            a = pts[((pts & d) == 0) & inband]
            b = a | d
            keep = inband[b]
            lo.append(a[keep])
            hi.append(b[keep])
        lo, hi = np.concatenate(lo), np.concatenate(hi)
        return self.index_of(lo), self.index_of(hi)

    @cached_property
    def _covers(self) -> tuple[np.ndarray, np.ndarray]:
        els = self.elements()
        lo, hi = [], []
        for i in range(self.n):
            a = els[(els >> i & 1) == 0]
            b = a | (1 << i)
            keep = popcount(b) <= self.weight_hi
            lo.append(a[keep])
            hi.append(b[keep])
        lo, hi = np.concatenate(lo), np.concatenate(hi)
        return self.index_of(lo), self.index_of(hi)

    def __repr__(self) -> str:
        return (f"TruncatedCube(n={self.n}, eps={self.eps}, weights=[{self.weight_lo},"
                f"{self.weight_hi}], N={self.n_elements})")


@lru_cache(maxsize=64)
def truncated_cube(n: int, eps: float) -> TruncatedCube:
    return TruncatedCube(n, eps)


@lru_cache(maxsize=32)
def full_cube(n: int) -> TruncatedCube:
    return TruncatedCube(n, None)


class ExplicitDAG(PosetAccess):
    """Poset on vertices 0..N-1 generated by an acyclic edge list."""

    def __init__(self, edges: Iterable[tuple[int, int]], n_vertices: Optional[int] = None):
        edges = [(int(u), int(v)) for u, v in edges]
        top = max([-1] + [max(u, v) for u, v in edges])
        N = top + 1 if n_vertices is None else n_vertices
        if N < top + 1:
            raise ValueError(f"edge endpoint {top} exceeds n_vertices={N}")
        if any(u < 0 or v < 0 for u, v in edges):
            raise ValueError("vertex ids must be nonnegative")
        out = [set() for _ in range(N)]
        indeg = [0] * N
        for u, v in edges:
            if u == v:
                raise CycleError(f"self-loop at {u}")
            if v not in out[u]:
                out[u].add(v)
                indeg[v] += 1
        order = [v for v in range(N) if indeg[v] == 0]
        for u in order:
            for v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    order.append(v)
        if len(order) != N:
            raise CycleError("edge list contains a directed cycle")

        succ = [0] * N
        for u in reversed(order):
            acc = 0
            for v in out[u]:
                acc |= (1 << v) | succ[v]
            succ[u] = acc
        pred = [0] * N
        for v in range(N):
            s = succ[v]
            while s:
                low = s & -s
                pred[low.bit_length() - 1] |= 1 << v
                s ^= low
        cover = [0] * N
        for u in range(N):
            below = 0
            for w in out[u]:
                below |= succ[w]
            cover[u] = succ[u] & ~below
        longest = [0] * N
        for u in reversed(order):
            longest[u] = max([0] + [1 + longest[v] for v in out[u]])

        self.n_elements = N
        self._succ, self._pred, self._cover = succ, pred, cover
        self._cover_pred = [0] * N
        for u in range(N):
            s = cover[u]
            while s:
                low = s & -s
                self._cover_pred[low.bit_length() - 1] |= 1 << u
                s ^= low
        self.height = max([0] + longest)
        self.max_degree = max([0] + [max(succ[v].bit_count(), pred[v].bit_count()) for v in range(N)])
        self._elements = np.arange(N, dtype=np.int64)

    @staticmethod
    def _members(bits: int) -> list[int]:
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def contains(self, v) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= int(v) < self.n_elements

    def immediate_preds(self, v) -> list[int]:
        self._require(v)
        return self._members(self._cover_pred[int(v)])

    def immediate_succs(self, v) -> list[int]:
        self._require(v)
        return self._members(self._cover[int(v)])

    def all_preds(self, v) -> list[int]:
        self._require(v)
        return self._members(self._pred[int(v)])

    def all_succs(self, v) -> list[int]:
        self._require(v)
        return self._members(self._succ[int(v)])

    def _precedes(self, u, v) -> bool:
        return bool(self._succ[int(u)] >> int(v) & 1)

    def elements(self) -> np.ndarray:
        return self._elements

    def index_of(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if v.size and (v.min() < 0 or v.max() >= self.n_elements):
            raise MembershipError("vertex not in poset")
        return v

    def __repr__(self) -> str:
        return f"ExplicitDAG(N={self.n_elements}, delta={self.max_degree}, h={self.height})"


def explicit_dag(edges: Iterable[tuple[int, int]], n_vertices: Optional[int] = None) -> ExplicitDAG:
    return ExplicitDAG(edges, n_vertices)


def load_edge_list(path) -> ExplicitDAG:
    """Read lines ``u v``; a ``# vertices=N`` comment fixes the vertex count."""
    edges, n_vertices = [], None
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "vertices":
                n_vertices = int(val)
            continue
        u, v = line.split()[:2]
        edges.append((int(u), int(v)))
    return ExplicitDAG(edges, n_vertices)


def random_dag(n_vertices: int, edge_prob: float, rng: np.random.Generator,
               window: Optional[int] = None) -> ExplicitDAG:
    """Random DAG on a hidden topological order; edges only within ``window`` positions."""
    perm = rng.permutation(n_vertices)
    edges = []
    for i in range(n_vertices):
        stop = n_vertices if window is None else min(n_vertices, i + 1 + window)
        for j in range(i + 1, stop):
            if rng.random() < edge_prob:
                edges.append((int(perm[i]), int(perm[j])))
    return ExplicitDAG(edges, n_vertices)


def is_monotone_table(table, n: int, tol: float = 0.0, exhaustive: Optional[bool] = None) -> bool:
    """Check f(x) <= f(y) on the full cube.

    The exhaustive mode compares every comparable pair; otherwise only
    covering pairs are compared, which is equivalent by transitivity.
    """
    table = np.asarray(table)
    if len(table) != 1 << n:
        raise DimensionError(f"table of length {len(table)} for n={n}")
    if exhaustive is None:
        exhaustive = n <= 12
    cube = full_cube(n)
    if exhaustive:
        return cube.is_monotone(table, tol)
    lo, hi = cube.cover_pairs()
    return bool(np.all(table[lo] <= table[hi] + tol))
