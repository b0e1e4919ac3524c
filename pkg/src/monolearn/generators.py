"""Target functions and label sources for experiments.

Specs are strings such as ``majority``, ``threshold``, ``noisy(majority,0.1)``
or ``randomized-labels(dictator,0.1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .boolfn import FunctionLabels, RandomizedLabels, all_points, popcount
from .poset import is_monotone_table

MONOTONE_KINDS = ("dictator", "majority", "random-monotone-dnf", "threshold")
OTHER_KINDS = ("anti-dictator", "random", "constant")
WRAPPERS = ("noisy", "randomized-labels")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int = 0
    base: Optional["GeneratorSpec"] = None
    rate: float = 0.0

    def __post_init__(self):
        if self.kind in WRAPPERS:
            if self.base is None:
                raise ValueError(f"{self.kind} needs a base function")
            if not 0 <= self.rate <= 0.5:
                raise ValueError("flip rate must lie in [0, 1/2]")
        elif self.kind not in MONOTONE_KINDS + OTHER_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind in WRAPPERS:
            return f"{self.kind}({self.base.kind},{self.rate:g})"
        return self.kind


_WRAPPED = re.compile(r"^\s*([a-z-]+)\s*\(\s*([a-z-]+)\s*,\s*([0-9.eE+-]+)\s*\)\s*$")


def parse_spec(text: str, n: int, seed: int = 0) -> GeneratorSpec:
    m = _WRAPPED.match(text)
    if m:
        kind, base, rate = m.groups()
        return GeneratorSpec(kind, n, seed, GeneratorSpec(base, n, seed), float(rate))
    return GeneratorSpec(text.strip(), n, seed)


def _signs(mask: np.ndarray) -> np.ndarray:
    return np.where(mask, 1.0, -1.0)


def dictator(n: int, coord: int = 0) -> np.ndarray:
    return _signs((all_points(n) >> coord) & 1 == 1)


def majority(n: int) -> np.ndarray:
    """+1 iff at least half the coordinates are +1 (ties go to +1)."""
    return _signs(2 * popcount(all_points(n)) >= n)


def threshold_function(n: int, rng: np.random.Generator) -> np.ndarray:
    w = rng.uniform(0.1, 1.0, n)
    pts = all_points(n)
    x = np.where((pts[:, None] >> np.arange(n)) & 1 == 1, 1.0, -1.0)
    s = x @ w
    theta = rng.uniform(-0.5, 0.5) * w.sum()
    return _signs(s >= theta)


def random_monotone_dnf(n: int, rng: np.random.Generator, terms: Optional[int] = None,
                        width: Optional[int] = None) -> np.ndarray:
    terms = terms or max(2, n // 2)
    width = width or max(1, n // 3)
    pts = all_points(n)
    out = np.zeros(len(pts), dtype=bool)
    for _ in range(terms):
        mask = 0
        for c in rng.choice(n, size=min(width, n), replace=False):
            mask |= 1 << int(c)
        out |= (pts & mask) == mask
    return _signs(out)


def flip_labels(table: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.random(len(table)) < rate
    return np.where(flips, -table, table)


def build_table(spec: GeneratorSpec) -> np.ndarray:
    """Truth table of a deterministic spec."""
    rng = np.random.default_rng([spec.seed, spec.n, 0x6E6])
    n = spec.n
    if n > 20:
        raise ValueError("materialized tables are capped at n=20")
    kind = spec.kind
    if kind == "dictator":
        return dictator(n)
    if kind == "anti-dictator":
        return -dictator(n)
    if kind == "majority":
        return majority(n)
    if kind == "threshold":
        return threshold_function(n, rng)
    if kind == "random-monotone-dnf":
        return random_monotone_dnf(n, rng)
    if kind == "random":
        return _signs(rng.random(1 << n) < 0.5)
    if kind == "constant":
        return np.ones(1 << n)
    if kind == "noisy":
        return flip_labels(build_table(spec.base), spec.rate, rng)
    raise ValueError(f"{kind} does not define a single truth table")


@dataclass
class Target:
    spec: GeneratorSpec
    source: Union[FunctionLabels, RandomizedLabels]
    table: Optional[np.ndarray]

    @property
    def n(self) -> int:
        return self.spec.n


def make_target(spec: Union[str, GeneratorSpec], n: Optional[int] = None, seed: int = 0) -> Target:
    if isinstance(spec, str):
        if n is None:
            raise ValueError("n is required with a string spec")
        spec = parse_spec(spec, n, seed)
    if spec.kind == "randomized-labels":
        base = build_table(spec.base)
        return Target(spec, RandomizedLabels.flipped(spec.n, base, spec.rate), None)
    table = build_table(spec)
    if spec.kind in MONOTONE_KINDS and not is_monotone_table(table, spec.n):
        raise AssertionError(f"{spec.kind} generator produced a non-monotone table")
    return Target(spec, FunctionLabels(spec.n, table), table)
