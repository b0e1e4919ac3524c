"""Central-cut ellipsoid method for convex feasibility, and the coefficient
basis that maps multilinear polynomials to dense vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional

import numpy as np

from .boolfn import MultilinearPoly, monomial_masks

DIM_CAP = 4096


@dataclass
class SeparationResult:
    feasible: bool
    separator: Optional[np.ndarray] = None
    info: dict = field(default_factory=dict)

    @classmethod
    def yes(cls, **info) -> "SeparationResult":
        return cls(True, None, info)

    @classmethod
    def no(cls, separator, **info) -> "SeparationResult":
        return cls(False, np.asarray(separator, dtype=float), info)


@dataclass
class EllipsoidState:
    center: np.ndarray
    shape: np.ndarray
    iteration: int = 0


@dataclass
class EllipsoidResult:
    point: Optional[np.ndarray]
    iterations: int
    budget: int
    log_volume: list = field(default_factory=list)
    status: str = "accepted"

    @property
    def failed(self) -> bool:
        return self.point is None


class NumericalError(ArithmeticError):
    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} at iteration {iteration}")
        self.iteration = iteration


def iteration_budget(dim: int, r: float, R: float) -> int:
    """ceil(2 d^2 ln(R/r)) + d^2, raised to the classical 2 d (d+1) ln(R/r) + d^2 when larger."""
    lr = math.log(R / r)
    return max(math.ceil(2 * dim * dim * lr), math.ceil(2 * dim * (dim + 1) * lr)) + dim * dim


def volume_ratio_bound(dim: int) -> float:
    """Guaranteed per-cut shrink factor of the volume, e^(-1/(2(d+1)))."""
    return math.exp(-1 / (2 * (dim + 1)))


def ellipsoid(dim: int, r: float, R: float, oracle: Callable[[np.ndarray], SeparationResult],
              *, max_iter: Optional[int] = None, track_volume: bool = False,
              center: Optional[np.ndarray] = None) -> EllipsoidResult:
    """Find a point the oracle accepts inside the radius-R ball, or report failure.

    A No answer with separator a promises a.x' < a.x_query for every feasible
    x', so the next ellipsoid keeps the half on the negative side of a.
    """
    if not 0 < r < R:
        raise ValueError("need 0 < r < R")
    if dim < 1:
        raise ValueError("dimension must be positive")
    budget = iteration_budget(dim, r, R) if max_iter is None else max_iter
    c0 = np.zeros(dim) if center is None else np.array(center, dtype=float)
    # the shape is kept as A = L L^T so every update stays positive semidefinite
    L = np.eye(dim) * R
    state = EllipsoidState(c0, L @ L.T)
    logdet_L = dim * math.log(R)
    logvol = [logdet_L] if track_volume else []
    d = dim
    shrink = 0.5 if d == 1 else 1 - math.sqrt((d - 1) / (d + 1))
    scale = 0.5 if d == 1 else d / math.sqrt(d * d - 1.0)
    while state.iteration < budget:
        verdict = oracle(state.center.copy())
        if verdict.feasible:
            again = oracle(state.center.copy())
            if not again.feasible:
                raise RuntimeError("oracle accepted and then rejected the same point")
            state.shape = L @ L.T
            return EllipsoidResult(state.center, state.iteration, budget, logvol)
        a = np.asarray(verdict.separator, dtype=float)
        norm = np.linalg.norm(a)
        if not np.isfinite(norm) or norm == 0:
            raise ValueError("separator must be a nonzero finite vector")
        a = a / norm
        u = L.T @ a
        width = float(np.linalg.norm(u))
        if not np.isfinite(width):
            raise NumericalError("shape matrix lost definiteness", state.iteration)
        if width < r:
            # the ellipsoid, which contains the feasible set, is thinner than an r-ball
            state.shape = L @ L.T
            return EllipsoidResult(None, state.iteration, budget, logvol, "collapsed")
        p = u / width
        Lp = L @ p
        if d == 1:
            state.center = state.center - Lp / 2
            L = L / 2
        else:
            state.center = state.center - Lp / (d + 1)
            L = scale * (L - shrink * np.outer(Lp, p))
        sign, logdet = np.linalg.slogdet(L)
        if sign == 0 or not np.isfinite(logdet):
            raise NumericalError("shape matrix is singular", state.iteration)
        state.iteration += 1
        if track_volume:
            logvol.append(float(logdet))
    state.shape = L @ L.T
    return EllipsoidResult(None, state.iteration, budget, logvol, "budget")


class PolyBasis:
    """Fixed ordering of the monomials of degree <= d (by size, then mask)."""

    def __init__(self, n: int, degree: int, cap: int = DIM_CAP):
        size = sum(comb(n, k) for k in range(min(degree, n) + 1))
        if size > cap:
            raise ValueError(f"basis of {size} monomials exceeds the cap of {cap}")
        self.n = n
        self.degree = min(degree, n)
        self.masks = np.array(monomial_masks(n, self.degree), dtype=np.int64)
        self.index = {int(m): i for i, m in enumerate(self.masks)}

    @property
    def dim(self) -> int:
        return len(self.masks)

    def to_vector(self, P: MultilinearPoly) -> np.ndarray:
        if P.n != self.n:
            raise ValueError("dimension mismatch")
        vec = np.zeros(self.dim)
        for m, c in P.coeffs.items():
            if m not in self.index:
                raise ValueError(f"monomial {m:#x} outside the basis")
            vec[self.index[m]] = c
        return vec

    def to_poly(self, vec: np.ndarray) -> MultilinearPoly:
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}")
        return MultilinearPoly(self.n, self.degree,
                               {int(m): float(c) for m, c in zip(self.masks, vec) if c != 0.0})
