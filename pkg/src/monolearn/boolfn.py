"""Points of {-1,+1}^n, Fourier characters, multilinear polynomials and
query-counted function representations.

A point is stored as an n-bit mask: bit i is set iff coordinate i (0-based)
equals +1.  A monomial index S is stored the same way.  Truth tables are
indexed by the point mask, so entry ``j`` of a table is the value at the point
whose bits are ``j``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Protocol, Union

import numpy as np

MAX_DIM = 30
ENUM_CAP = 24


class DimensionError(ValueError):
    """Raised when objects of different dimensions are combined."""


def _check_dim(n: int) -> None:
    if not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension must lie in [1, {MAX_DIM}], got {n}")


@dataclass(frozen=True)
class Point:
    bits: int
    n: int

    def __post_init__(self):
        _check_dim(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise DimensionError(f"bits {self.bits:#x} do not fit in {self.n} coordinates")

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "Point":
        signs = list(signs)
        bits = 0
        for i, s in enumerate(signs):
            if s not in (-1, 1):
                raise ValueError(f"coordinate {i} is {s}, expected -1 or +1")
            if s == 1:
                bits |= 1 << i
        return cls(bits, len(signs))

    def signs(self) -> tuple[int, ...]:
        return tuple(1 if self.bits >> i & 1 else -1 for i in range(self.n))

    def coordinate_sum(self) -> int:
        return 2 * self.bits.bit_count() - self.n

    def __index__(self) -> int:
        return self.bits


@dataclass(frozen=True)
class SubsetMask:
    mask: int
    n: int

    def __post_init__(self):
        _check_dim(self.n)
        if self.mask < 0 or self.mask >> self.n:
            raise DimensionError(f"mask {self.mask:#x} does not fit in {self.n} coordinates")

    @classmethod
    def of(cls, n: int, *coords: int) -> "SubsetMask":
        """Subset containing the given 0-based coordinates."""
        mask = 0
        for c in coords:
            mask |= 1 << c
        return cls(mask, n)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __index__(self) -> int:
        return self.mask


def _unwrap(obj) -> tuple[int, Optional[int]]:
    if isinstance(obj, Point):
        return obj.bits, obj.n
    if isinstance(obj, SubsetMask):
        return obj.mask, obj.n
    return int(obj), None


def chi(S, x) -> int:
    """Fourier character prod_{i in S} x_i as +1/-1."""
    s, ns = _unwrap(S)
    b, nx = _unwrap(x)
    if ns is not None and nx is not None and ns != nx:
        raise DimensionError(f"subset has dimension {ns}, point has dimension {nx}")
    return -1 if (s & ~b).bit_count() & 1 else 1


def chi_matrix(masks: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Matrix C[j, k] = chi(masks[k], points[j]) as float64."""
    masks = np.asarray(masks, dtype=np.int64)
    points = np.asarray(points, dtype=np.int64)
    odd = np.bitwise_count(masks[None, :] & ~points[:, None]) & 1
    return 1.0 - 2.0 * odd


def popcount(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(values, dtype=np.int64)).astype(np.int64)


def all_points(n: int) -> np.ndarray:
    _check_dim(n)
    if n > ENUM_CAP:
        raise DimensionError(f"full enumeration is capped at n={ENUM_CAP}, got {n}")
    return np.arange(1 << n, dtype=np.int64)


def monomial_masks(n: int, degree: int) -> list[int]:
    """All masks with popcount <= degree, ordered by (popcount, mask)."""
    _check_dim(n)
    degree = max(0, min(degree, n))
    out = []
    for k in range(degree + 1):
        level = [sum(1 << i for i in c) for c in combinations(range(n), k)]
        out.extend(sorted(level))
    return out


def default_degree(n: int, eps: float) -> int:
    """min(n, ceil((4 sqrt(n)/eps) * log2(4/eps)))."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return min(n, math.ceil(4 * math.sqrt(n) / eps * math.log2(4 / eps)))


@dataclass
class MultilinearPoly:
    n: int
    degree: int
    coeffs: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        _check_dim(self.n)
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        clean = {}
        for mask, c in self.coeffs.items():
            mask = int(mask)
            if mask < 0 or mask >> self.n:
                raise DimensionError(f"mask {mask:#x} outside dimension {self.n}")
            if mask.bit_count() > self.degree:
                raise ValueError(f"mask {mask:#x} exceeds degree {self.degree}")
            clean[mask] = float(c)
        self.coeffs = clean

    @classmethod
    def constant(cls, n: int, value: float, degree: int = 0) -> "MultilinearPoly":
        return cls(n, degree, {0: value})

    def __call__(self, x) -> float:
        return eval_poly(self, x)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        if not self.coeffs:
            return np.zeros(len(points))
        masks = np.fromiter(self.coeffs.keys(), dtype=np.int64, count=len(self.coeffs))
        vals = np.fromiter(self.coeffs.values(), dtype=float, count=len(self.coeffs))
        out = np.empty(len(points))
        step = max(1, (1 << 22) // max(1, len(masks)))
        for lo in range(0, len(points), step):
            out[lo:lo + step] = chi_matrix(masks, points[lo:lo + step]) @ vals
        return out

    def table(self) -> np.ndarray:
        return self.evaluate(all_points(self.n))

    def norm2(self) -> float:
        return math.sqrt(sum(c * c for c in self.coeffs.values()))

    def dot(self, other: "MultilinearPoly") -> float:
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        return sum(c * other.coeffs.get(m, 0.0) for m, c in self.coeffs.items())

    def scaled(self, factor: float) -> "MultilinearPoly":
        return MultilinearPoly(self.n, self.degree, {m: c * factor for m, c in self.coeffs.items()})

    def as_evaluator(self) -> "Evaluator":
        return Evaluator(self.__call__, vectorized=self.evaluate, meta=f"poly(n={self.n}, d={self.degree})")


def eval_poly(P: MultilinearPoly, x) -> float:
    b, nx = _unwrap(x)
    if nx is not None and nx != P.n:
        raise DimensionError(f"polynomial has dimension {P.n}, point has dimension {nx}")
    if b < 0 or b >> P.n:
        raise DimensionError(f"point {b:#x} outside dimension {P.n}")
    total = 0.0
    for mask, c in P.coeffs.items():
        total += -c if (mask & ~b).bit_count() & 1 else c
    return total


class Evaluator:
    """Query-counted function representation.

    ``fn`` must be a pure function of its argument.  Wrappers built on top of an
    evaluator forward their queries to it, so the base counter records every
    probe made through any composition.
    """

    def __init__(self, fn: Callable[[int], float], *, vectorized: Optional[Callable] = None,
                 meta: str = ""):
        self._fn = fn
        self._vec = vectorized
        self.meta = meta
        self._probes = 0
        self._lock = threading.Lock()

    def _count(self, k: int) -> None:
        with self._lock:
            self._probes += k

    @property
    def probe_count(self) -> int:
        return self._probes

    def __call__(self, x) -> float:
        self._count(1)
        return float(self._fn(int(x)))

    def many(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        if self._vec is not None:
            self._count(len(points))
            return np.asarray(self._vec(points), dtype=float)
        return np.array([self(int(p)) for p in points], dtype=float)

    def __repr__(self) -> str:
        return f"Evaluator({self.meta or '?'}, probes={self._probes})"

    @classmethod
    def from_table(cls, table, meta: str = "table") -> "Evaluator":
        table = np.asarray(table, dtype=float)
        return cls(lambda x: table[x], vectorized=lambda xs: table[xs], meta=meta)

    @classmethod
    def constant(cls, value: float) -> "Evaluator":
        value = float(value)
        return cls(lambda x: value, vectorized=lambda xs: np.full(len(xs), value),
                   meta=f"const({value})")


def trim(E: Evaluator) -> Evaluator:
    """Clamp the values of E to [-1, 1]."""
    return Evaluator(lambda x: min(1.0, max(-1.0, E(x))),
                     vectorized=lambda xs: np.clip(E.many(xs), -1.0, 1.0),
                     meta=f"trim({E.meta})")


def inner_product_exact(f: Evaluator, g: Evaluator, n: int) -> float:
    pts = all_points(n)
    return float(np.mean(f.many(pts) * g.many(pts)))


# ---------------------------------------------------------------------------
# label sources and samples


class LabelSource(Protocol):
    n: int

    def draw(self, points: np.ndarray, rng: np.random.Generator) -> np.ndarray: ...

    def mean(self, points: np.ndarray) -> np.ndarray: ...


class FunctionLabels:
    """Deterministic labels y = f(x)."""

    def __init__(self, n: int, f: Union[Evaluator, np.ndarray, Callable[[int], float]]):
        _check_dim(n)
        self.n = n
        if isinstance(f, Evaluator):
            self.f = f
        elif callable(f):
            self.f = Evaluator(f, meta="labels")
        else:
            table = np.asarray(f, dtype=float)
            if table.shape != (1 << n,):
                raise DimensionError(f"table of length {len(table)} for n={n}")
            self.f = Evaluator.from_table(table)

    def draw(self, points, rng) -> np.ndarray:
        return self.f.many(points)

    def mean(self, points) -> np.ndarray:
        return self.f.many(points)


class RandomizedLabels:
    """Labels with Pr[y = +1 | x] = p_plus[x], drawn independently per sample."""

    def __init__(self, n: int, p_plus):
        _check_dim(n)
        p_plus = np.asarray(p_plus, dtype=float)
        if p_plus.shape != (1 << n,):
            raise DimensionError(f"probability table of length {len(p_plus)} for n={n}")
        if np.any((p_plus < 0) | (p_plus > 1)):
            raise ValueError("probabilities must lie in [0, 1]")
        self.n = n
        self.p_plus = p_plus

    @classmethod
    def flipped(cls, n: int, base_table, flip_rate: float) -> "RandomizedLabels":
        """Each draw returns base(x) with its sign flipped with probability flip_rate."""
        base = np.asarray(base_table, dtype=float)
        return cls(n, np.where(base > 0, 1.0 - flip_rate, flip_rate))

    def draw(self, points, rng) -> np.ndarray:
        u = rng.random(len(points))
        return np.where(u < self.p_plus[points], 1.0, -1.0)

    def mean(self, points) -> np.ndarray:
        return 2.0 * self.p_plus[points] - 1.0


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if hasattr(seed, "generator"):
        return seed.generator("samples")
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SampleSet:
    """Multiset of labelled points; ``counts`` holds multiplicities."""

    n: int
    points: np.ndarray
    labels: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        _check_dim(self.n)
        if not (len(self.points) == len(self.labels) == len(self.counts)):
            raise ValueError("points, labels and counts must have equal length")
        if len(self.points) and (self.points.min() < 0 or self.points.max() >> self.n):
            raise DimensionError("sample point outside the cube")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple]) -> "SampleSet":
        pts, labs = [], []
        for x, y in pairs:
            pts.append(int(x))
            labs.append(float(y))
        return cls(n, np.array(pts, dtype=np.int64), np.array(labs, dtype=float),
                   np.ones(len(pts), dtype=np.int64))

    def __len__(self) -> int:
        return int(self.counts.sum())

    @property
    def weights(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    def pairs(self) -> Iterator[tuple[Point, float]]:
        for x, y, c in zip(self.points, self.labels, self.counts):
            for _ in range(int(c)):
                yield Point(int(x), self.n), float(y)


def sample_uniform(n: int, count: int, source: LabelSource, seed=None,
                   aggregate: Optional[bool] = None) -> SampleSet:
    """Draw ``count`` i.i.d. uniform points labelled by ``source``.

    With ``aggregate`` the sample is drawn as multinomial counts over the cube,
    which has the same distribution as i.i.d. draws and lets very large samples
    fit in memory.  By default aggregation is used once count exceeds 2^(n+2).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if source.n != n:
        raise DimensionError(f"source has dimension {source.n}, expected {n}")
    rng = as_generator(seed)
    if aggregate is None:
        aggregate = n <= 20 and count > (1 << (n + 2))
    if not aggregate:
        pts = rng.integers(0, 1 << n, size=count, dtype=np.int64)
        return SampleSet(n, pts, source.draw(pts, rng), np.ones(count, dtype=np.int64))
    size = 1 << n
    per_point = rng.multinomial(count, np.full(size, 1.0 / size))
    pts = np.arange(size, dtype=np.int64)
    if isinstance(source, RandomizedLabels):
        plus = rng.binomial(per_point, source.p_plus)
        pts2 = np.concatenate([pts, pts])
        labs = np.concatenate([np.ones(size), -np.ones(size)])
        cnt = np.concatenate([plus, per_point - plus])
    else:
        pts2, labs, cnt = pts, source.mean(pts), per_point
    keep = cnt > 0
    return SampleSet(n, pts2[keep], np.asarray(labs, dtype=float)[keep], cnt[keep].astype(np.int64))


def l1_empirical(f: Evaluator, g: Evaluator, T: SampleSet) -> float:
    if len(T) == 0:
        raise ValueError("empty sample set")
    return float(np.dot(T.weights, np.abs(f.many(T.points) - g.many(T.points))))


def label_l1_error(g: Evaluator, T: SampleSet) -> float:
    """E_{(x,y) ~ T} |y - g(x)|."""
    if len(T) == 0:
        raise ValueError("empty sample set")
    return float(np.dot(T.weights, np.abs(T.labels - g.many(T.points))))


# ---------------------------------------------------------------------------
# file formats


def format_truth_table(n: int, values) -> str:
    values = np.asarray(values, dtype=float)
    if values.shape != (1 << n,):
        raise DimensionError(f"table of length {len(values)} for n={n}")
    if np.all(np.abs(values) == 1.0):
        body = " ".join("+1" if v > 0 else "-1" for v in values)
    else:
        body = " ".join(f"{v:.17g}" for v in values)
    return f"n={n}\n{body}\n"


def parse_truth_table(text: str) -> tuple[int, np.ndarray]:
    lines = text.strip().splitlines()
    if not lines or not lines[0].strip().startswith("n="):
        raise ValueError("truth table must start with a line 'n=<int>'")
    n = int(lines[0].strip()[2:])
    _check_dim(n)
    values = np.array([float(tok) for line in lines[1:] for tok in line.split()])
    if len(values) != 1 << n:
        raise ValueError(f"expected {1 << n} labels, found {len(values)}")
    return n, values


def read_truth_table(path) -> tuple[int, np.ndarray]:
    return parse_truth_table(Path(path).read_text())


def write_truth_table(path, n: int, values) -> None:
    Path(path).write_text(format_truth_table(n, values))


def format_poly(P: MultilinearPoly) -> str:
    lines = [f"# n={P.n} degree={P.degree}"]
    for mask in sorted(P.coeffs, key=lambda m: (m.bit_count(), m)):
        lines.append(f"{mask:x} {P.coeffs[mask]:.17g}")
    return "\n".join(lines) + "\n"


def parse_poly(text: str, n: Optional[int] = None, degree: Optional[int] = None) -> MultilinearPoly:
    coeffs: dict[int, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "n" and n is None:
                    n = int(val)
                elif key == "degree" and degree is None:
                    degree = int(val)
            continue
        mask_hex, coeff = line.split()
        mask = int(mask_hex, 16)
        coeffs[mask] = coeffs.get(mask, 0.0) + float(coeff)
    if n is None:
        n = max([1] + [m.bit_length() for m in coeffs])
    if degree is None:
        degree = max([0] + [m.bit_count() for m in coeffs])
    return MultilinearPoly(n, degree, coeffs)


def read_poly(path, n: Optional[int] = None) -> MultilinearPoly:
    return parse_poly(Path(path).read_text(), n=n)


def write_poly(path, P: MultilinearPoly) -> None:
    Path(path).write_text(format_poly(P))
