"""Monotonicity correction by label swaps.

A Boolean labelling is sorted by rounds: each round takes a maximal matching
(hashed greedy) of the violated pairs and swaps the labels across every matched
pair, until nothing is violated.  Swapping a violated pair never moves the
labelling away from any fixed monotone function, which gives the factor-2
distance bound irrespective of the schedule.

k-valued labels are corrected one bit at a time from the most significant
bit, with bit i sorted on the subposet of pairs whose higher bits agree.
Real-valued functions on the cube are discretized to multiples of eps, corrected
on the truncated cube, and extended by the constants +1 above and -1 below
the band.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .boolfn import Evaluator, all_points, popcount
from .lca import Seed, as_seed, edge_ranks, greedy_matching_global
from .poset import PosetAccess, truncated_cube


class ScheduleOverflow(RuntimeError):
    pass


def sort_bits(P: PosetAccess, bits: np.ndarray, seed: Seed, tag: str,
              group: Optional[np.ndarray] = None, max_rounds: Optional[int] = None,
              rounds_out: Optional[list] = None) -> np.ndarray:
    """Permutation ``src`` with bits[src] monotone on pairs sharing a group key.

    Position x of the corrected labelling receives the label originally at
    src[x].  Matched pairs of each round are appended to ``rounds_out``.
    """
    bits = np.asarray(bits)
    N = len(bits)
    lo, hi = P.comparable_pairs()
    if group is not None:
        same = group[lo] == group[hi]
        lo, hi = lo[same], hi[same]
    cap = N * N if max_rounds is None else max_rounds
    src = np.arange(N)
    cur = bits.copy()
    els = P.elements()
    r = 0
    while True:
        viol = (cur[lo] == 1) & (cur[hi] == 0)
        if not viol.any():
            return src
        if r >= cap:
            raise ScheduleOverflow(f"sorting did not finish within {cap} rounds")
        u, v = lo[viol], hi[viol]
        ranks = edge_ranks(seed, f"{tag}/round/{r}", els[u], els[v])
        mate = greedy_matching_global(N, u, v, ranks)
        a = np.nonzero((mate >= 0) & (np.arange(N) < mate))[0]
        b = mate[a]
        if rounds_out is not None:
            rounds_out.append(np.stack([a, b], axis=1))
        src[a], src[b] = src[b], src[a].copy()
        cur[a], cur[b] = cur[b], cur[a].copy()
        r += 1


def _labels(P: PosetAccess, f) -> np.ndarray:
    if isinstance(f, Evaluator):
        return f.many(P.elements())
    return np.asarray(f)


class BooleanCorrector:
    """Sorted Boolean labelling of a poset: corrected(x) = f(source(x))."""

    def __init__(self, P: PosetAccess, f: Union[Evaluator, np.ndarray], seed, tag: str = "sort/1"):
        values = np.asarray(_labels(P, f), dtype=float)
        if not np.all(np.abs(values) == 1):
            raise ValueError("boolean_corrector needs labels in {-1, +1}")
        self.P = P
        self.seed = as_seed(seed)
        self.values = values
        self.rounds: list[np.ndarray] = []
        self.src = sort_bits(P, (values > 0).astype(np.int8), self.seed, tag, rounds_out=self.rounds)

    @cached_property
    def corrected(self) -> np.ndarray:
        return self.values[self.src]

    def source(self, x: int) -> int:
        return int(self.P.elements()[self.src[self.P.index_of(x)]])

    def __call__(self, x: int) -> float:
        return float(self.corrected[self.P.index_of(x)])


def boolean_corrector(P: PosetAccess, f, seed, x: int) -> int:
    return BooleanCorrector(P, f, seed).source(x)


def n_bits(k: int) -> int:
    return max(1, math.ceil(math.log2(k))) if k > 1 else 1


class KCorrector:
    """Bitwise correction of labels in {0, ..., k-1}; ``levels[i]`` is the
    labelling after the i most significant bits have been sorted."""

    def __init__(self, P: PosetAccess, f: Union[Evaluator, np.ndarray], k: int, seed):
        labels = np.asarray(_labels(P, f))
        if not np.all(labels == np.round(labels)):
            raise ValueError("labels must be integers")
        labels = labels.astype(np.int64)
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise ValueError(f"labels must lie in [0, {k})")
        self.P = P
        self.k = k
        self.B = n_bits(k)
        self.seed = as_seed(seed)
        self.levels = [labels]
        self.rounds: list[list[np.ndarray]] = []
        self._lock = threading.Lock()
        cur = labels
        for i in range(1, self.B + 1):
            bit = (cur >> (self.B - i)) & 1
            prefix = cur >> (self.B - i + 1)
            rounds: list[np.ndarray] = []
            src = sort_bits(P, bit.astype(np.int8), self.seed, f"sort/{i}", group=prefix,
                            rounds_out=rounds)
            cur = cur[src]
            self.levels.append(cur)
            self.rounds.append(rounds)

    def query(self, x: int, i: Optional[int] = None) -> int:
        i = self.B if i is None else i
        if not 0 <= i <= self.B:
            raise ValueError(f"bit level must lie in [0, {self.B}]")
        return int(self.levels[i][self.P.index_of(x)])

    @property
    def corrected(self) -> np.ndarray:
        return self.levels[-1]


def k_corrector(x: int, P: PosetAccess, f, i: int, seed, k: int) -> int:
    return KCorrector(P, f, k, seed).query(x, i)


@dataclass
class CorrectedFunction:
    """Monotone correction of a [-1, 1]-valued function on the full cube."""

    n: int
    eps: float
    table: np.ndarray
    band_levels: np.ndarray
    k: int
    info: dict = field(default_factory=dict)

    def evaluator(self) -> Evaluator:
        return Evaluator.from_table(self.table, meta=f"corrected(n={self.n}, eps={self.eps})")


def discretize(values: np.ndarray, eps: float) -> tuple[np.ndarray, int, int]:
    """Integer levels floor(v/eps) + ceil(1/eps) in [0, k)."""
    shift = math.ceil(1 / eps - 1e-12)
    k = 2 * shift + 1
    # the 1e-9 nudge keeps exact multiples of eps on their own level despite rounding
    levels = np.floor(values / eps + 1e-9).astype(np.int64) + shift
    return np.clip(levels, 0, k - 1), shift, k


def hypercube_corrector(f: Union[Evaluator, np.ndarray], n: int, eps: float, seed) -> CorrectedFunction:
    """Monotone g with mean |f - g| <= 2 dist_1(f) + 4 eps."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    cube = truncated_cube(n, eps)
    els = cube.elements()
    values = f.many(els) if isinstance(f, Evaluator) else np.asarray(f, dtype=float)[els]
    if np.any(np.abs(values) > 1 + 1e-12):
        raise ValueError("values must lie in [-1, 1]")
    levels, shift, k = discretize(values, eps)
    kc = KCorrector(cube, levels, k, seed)
    pts = all_points(n)
    w = popcount(pts)
    table = np.where(w > cube.weight_hi, 1.0, -1.0)
    # clamping keeps the band inside [-1, 1] so it stays below the +1 cap above it
    table[els] = np.clip(eps * (kc.corrected - shift), -1.0, 1.0)
    return CorrectedFunction(n, eps, table, kc.corrected, k,
                             {"levels": k, "bits": kc.B, "band": [cube.weight_lo, cube.weight_hi],
                              "rounds": [len(r) for r in kc.rounds],
                              "seed_bytes": kc.seed.bytes_consumed})
