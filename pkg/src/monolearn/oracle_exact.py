"""Exact ground truth at desk scale: distances to monotonicity, maximum-weight
violation matchings and closest monotone functions.

Distances are averages over the poset: dist_1 = min_g mean |f - g| and
dist_0 = min_g mean 1[f != g], with g ranging over monotone functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Union

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .boolfn import Evaluator
from .poset import PosetAccess, full_cube

L1_CAP = 4096
HAMMING_MATCHING_CAP = 2000
MWM_CAP = 200
EXHAUSTIVE_MWM_CAP = 12
TOL = 1e-9


class SizeCapError(ValueError):
    pass


@dataclass(frozen=True)
class ExactDistResult:
    distance: float
    witness: np.ndarray


def _values(P: PosetAccess, f: Union[Evaluator, np.ndarray]) -> np.ndarray:
    if isinstance(f, Evaluator):
        return f.many(P.elements())
    values = np.asarray(f, dtype=float)
    if values.shape != (P.n_elements,):
        raise ValueError(f"expected {P.n_elements} values, got shape {values.shape}")
    return values


def _isotonic_lp(N: int, lo: np.ndarray, hi: np.ndarray, target: np.ndarray,
                 bounds=None, method: str = "highs") -> np.ndarray:
    """argmin_g sum |target - g| subject to g[lo] <= g[hi]."""
    # variables: g (N), e (N); e >= |target - g|
    eye = sparse.identity(N, format="csr")
    m = len(lo)
    order = sparse.csr_matrix((np.r_[np.ones(m), -np.ones(m)],
                               (np.r_[np.arange(m), np.arange(m)], np.r_[lo, hi])), shape=(m, N))
    A = sparse.vstack([
        sparse.hstack([eye, -eye]),
        sparse.hstack([-eye, -eye]),
        sparse.hstack([order, sparse.csr_matrix((m, N))]),
    ], format="csr")
    b = np.r_[target, -target, np.zeros(m)]
    c = np.r_[np.zeros(N), np.ones(N)]
    lo_b, hi_b = (target.min(), target.max()) if bounds is None else bounds
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(lo_b, hi_b)] * N + [(0, None)] * N, method=method)
    if res.status != 0:
        raise RuntimeError(f"isotonic LP failed: {res.message}")
    return res.x[:N]


def exact_l1_dist(P: PosetAccess, f: Union[Evaluator, np.ndarray]) -> ExactDistResult:
    """Least-absolute-deviation monotone fit by linear programming over covering pairs."""
    if P.n_elements > L1_CAP:
        raise SizeCapError(f"exact_l1_dist is capped at N={L1_CAP}")
    values = _values(P, f)
    if P.n_elements == 0:
        return ExactDistResult(0.0, values)
    lo, hi = P.cover_pairs()
    if P.is_monotone(values):
        return ExactDistResult(0.0, values.copy())
    g = _isotonic_lp(P.n_elements, lo, hi, values, method="highs-ds")
    # a simplex vertex takes values among the targets; snap away solver noise
    snapped = values[np.abs(values[None, :] - g[:, None]).argmin(axis=1)] if P.n_elements <= 2048 else g
    if np.all(snapped[lo] <= snapped[hi]) and abs(np.abs(snapped - values).sum() - np.abs(g - values).sum()) < 1e-7:
        g = snapped
    return ExactDistResult(float(np.mean(np.abs(values - g))), g)


def _check_boolean(values: np.ndarray) -> None:
    if not np.all(np.abs(values) == 1.0):
        raise ValueError("labels must be -1 or +1")


def violation_bipartite(P: PosetAccess, values: np.ndarray) -> nx.Graph:
    """Edges x < y with f(x) = +1 and f(y) = -1; nodes tagged by side."""
    lo, hi = P.comparable_pairs()
    sel = (values[lo] > 0) & (values[hi] < 0)
    G = nx.Graph()
    plus = np.nonzero(values > 0)[0]
    minus = np.nonzero(values < 0)[0]
    G.add_nodes_from(int(i) for i in plus)
    G.add_nodes_from(int(i) for i in minus)
    G.add_edges_from(zip(lo[sel].tolist(), hi[sel].tolist()))
    return G, {int(i) for i in plus}


def exact_hamming_dist(P: PosetAccess, f: Union[Evaluator, np.ndarray],
                       report: dict | None = None) -> ExactDistResult:
    """dist_0 = (maximum matching of the bipartite violation graph) / N.

    The witness raises every vertex above an uncovered +1 vertex of a minimum
    vertex cover to +1 and sets the rest to -1; it differs from f only on the
    cover.
    """
    if P.n_elements > HAMMING_MATCHING_CAP:
        raise SizeCapError(f"exact_hamming_dist is capped at N={HAMMING_MATCHING_CAP}")
    values = _values(P, f)
    _check_boolean(values)
    G, plus = violation_bipartite(P, values)
    matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=plus)
    size = len(matching) // 2
    cover = nx.bipartite.to_vertex_cover(G, matching, top_nodes=plus)
    if len(cover) != size:
        raise AssertionError(f"Konig violated: matching {size}, cover {len(cover)}")
    if report is not None:
        report.update(matching=size, cover=len(cover))
    seeds = np.array([i in plus and i not in cover for i in range(P.n_elements)])
    g = -np.ones(P.n_elements)
    g[seeds] = 1.0
    lo, hi = P.comparable_pairs()
    up = seeds.copy()
    up[hi[seeds[lo]]] = True
    g[up] = 1.0
    changed = int(np.sum(g != values))
    if changed != size:
        raise AssertionError(f"witness changes {changed} labels, matching size {size}")
    return ExactDistResult(size / P.n_elements, g)


def hamming_dist_lp(P: PosetAccess, f: Union[Evaluator, np.ndarray]) -> ExactDistResult:
    """dist_0 via the isotonic LP restricted to [-1, 1]; its vertices are +-1-valued."""
    values = _values(P, f)
    _check_boolean(values)
    lo, hi = P.cover_pairs()
    g = _isotonic_lp(P.n_elements, lo, hi, values, bounds=(-1.0, 1.0), method="highs-ds")
    g = np.where(g >= 0, 1.0, -1.0)
    if not np.all(g[lo] <= g[hi]):
        raise AssertionError("rounded LP witness is not monotone")
    return ExactDistResult(float(np.mean(g != values)), g)


def closest_monotone_boolean(table, n: int) -> tuple[np.ndarray, float]:
    """Closest monotone Boolean function on the full cube and its Hamming distance."""
    table = np.asarray(table, dtype=float)
    if n > 16:
        raise SizeCapError("closest_monotone_boolean is capped at n=16")
    cube = full_cube(n)
    res = exact_hamming_dist(cube, table) if cube.n_elements <= HAMMING_MATCHING_CAP else hamming_dist_lp(cube, table)
    return res.witness, res.distance


def enumerate_monotone_boolean(n: int) -> np.ndarray:
    """All monotone Boolean truth tables on n <= 4 variables, one per row."""
    if n > 4:
        raise SizeCapError("enumeration is capped at n=4")
    lo, hi = full_cube(n).comparable_pairs()
    size = 1 << n
    codes = np.arange(1 << size, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(size)) & 1
    ok = np.all(bits[:, lo] <= bits[:, hi], axis=1)
    return np.where(bits[ok] == 1, 1.0, -1.0)


def _exhaustive_mwm(N: int, weights: dict) -> float:
    adj = [[] for _ in range(N)]
    for (a, b), w in weights.items():
        adj[a].append((b, w))
        adj[b].append((a, w))
    memo: dict[int, float] = {}

    def best(free: int) -> float:
        if free == 0:
            return 0.0
        if free in memo:
            return memo[free]
        i = (free & -free).bit_length() - 1
        rest = free & ~(1 << i)
        val = best(rest)
        for j, w in adj[i]:
            if rest >> j & 1:
                val = max(val, w + best(rest & ~(1 << j)))
        memo[free] = val
        return val

    return best((1 << N) - 1)


def exact_max_weight_violation_matching(P: PosetAccess, f: Union[Evaluator, np.ndarray]) -> float:
    """Total weight of a maximum-weight matching in the violation graph."""
    if P.n_elements > MWM_CAP:
        raise SizeCapError(f"max-weight matching is capped at N={MWM_CAP}")
    values = _values(P, f)
    lo, hi = P.comparable_pairs()
    score = values[lo] - values[hi]
    sel = score > 0
    weights = {(int(a), int(b)): float(w) for a, b, w in zip(lo[sel], hi[sel], score[sel])}
    if not weights:
        return 0.0
    if P.n_elements <= EXHAUSTIVE_MWM_CAP:
        return _exhaustive_mwm(P.n_elements, weights)
    G = nx.Graph()
    G.add_weighted_edges_from((a, b, w) for (a, b), w in weights.items())
    M = nx.max_weight_matching(G)
    return float(sum(weights.get((a, b), weights.get((b, a), 0.0)) for a, b in M))


def min_monotone_error(p_plus, n: int) -> tuple[float, np.ndarray]:
    """min over monotone Boolean g of Pr[y != g(x)] when Pr[y = +1 | x] = p_plus[x].

    Equivalent to maximizing sum_x g(x)(2 p(x) - 1) over monotone g; the LP over
    g in [-1, 1] has integral vertices, and dual simplex returns one.
    """
    p = np.asarray(p_plus, dtype=float)
    cube = full_cube(n)
    lo, hi = cube.cover_pairs()
    mu = 2 * p - 1
    m = len(lo)
    A = sparse.csr_matrix((np.r_[np.ones(m), -np.ones(m)],
                           (np.r_[np.arange(m), np.arange(m)], np.r_[lo, hi])), shape=(m, len(p)))
    res = linprog(-mu, A_ub=A, b_ub=np.zeros(m), bounds=[(-1, 1)] * len(p), method="highs-ds")
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    g = np.where(res.x >= 0, 1.0, -1.0)
    if not np.all(g[lo] <= g[hi]):
        raise AssertionError("rounded LP solution is not monotone")
    if mu @ g < -res.fun - 1e-7:
        raise AssertionError("rounding lost optimality; LP vertex was fractional")
    err = float(np.mean(np.where(g > 0, 1 - p, p)))
    return err, g


def brute_force_l1_dist(P: PosetAccess, values: np.ndarray) -> float:
    """Exhaustive search over monotone functions taking values in the label set (tiny posets)."""
    levels = np.unique(values)
    N = P.n_elements
    if len(levels) ** N > 200_000:
        raise SizeCapError("brute force too large")
    lo, hi = P.comparable_pairs()
    best = np.inf
    for combo in product(levels, repeat=N):
        g = np.array(combo)
        if np.all(g[lo] <= g[hi]):
            best = min(best, float(np.mean(np.abs(values - g))))
    return best
