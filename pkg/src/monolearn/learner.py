"""Agnostic proper learning of monotone Boolean functions.

The learner searches, for increasing alpha, for a low-degree polynomial that
is close to monotone and alpha-close to the labels, using the ellipsoid
method with a sample-based separation oracle.  The accepted polynomial is
clamped to [-1, 1], corrected to a monotone function and rounded with an
empirically chosen threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .boolfn import (ENUM_CAP, Evaluator, MultilinearPoly, RandomizedLabels, SampleSet, chi_matrix,
                     default_degree, sample_uniform)
from .convex import PolyBasis, SeparationResult, ellipsoid
from .corrector import hypercube_corrector
from .lca import as_seed
from .matching import hypercube_matching
from .oracle_exact import exact_l1_dist
from .poset import full_cube

MATERIALIZE_CAP = 12


def oracle_sample_size(n: int, eps: float) -> int:
    return max(10_000, math.ceil(200 / eps ** 2 * math.log(1 / eps) * n))


def threshold_sample_size(n: int, eps: float) -> int:
    return math.ceil(200 / eps ** 2 * math.log(20 / eps) * math.log(20 * n))


def candidate_count(eps: float, delta: float) -> int:
    return math.ceil(20 / eps * math.log(1 / delta))


def rounding_sample_size(eps: float, delta: float) -> int:
    """Sample size sufficient for threshold selection to be eps/4-accurate."""
    return math.ceil(40 / eps ** 2 * math.log(20 / (eps * delta) * math.log(1 / delta)))


def concentration_sample_size(n: int, d: int, eps: float, delta: float) -> int:
    """Samples for the empirical l1 error to be eps-accurate uniformly over unit-norm degree-d polys."""
    return math.ceil(n ** (5 * d) * 100 / eps ** 2 * math.log(1 / eps) * math.log(1 / delta))


def distance_sample_size(eps: float, delta: float) -> int:
    return math.ceil(8 / eps ** 2 * math.log(2 / delta))


def alpha_grid(eps: float) -> list[float]:
    grid = []
    j = 1
    while j * eps <= 1 - eps + 1e-12:
        grid.append(round(j * eps, 12))
        j += 1
    grid.append(1 + 200 * eps)
    return grid


def _sign(values: np.ndarray) -> np.ndarray:
    return np.where(values >= 0, 1.0, -1.0)


@dataclass
class OracleVerdict:
    feasible: bool
    separator: Optional[MultilinearPoly]
    reason: str
    matching_estimate: float
    l1_estimate: float

    @property
    def verdict(self) -> str:
        return "yes" if self.feasible else "no"


class SeparationOracle:
    """Accepts P when its clamp is nearly monotone on a sample and its
    empirical l1 error is at most alpha + l1_gate*eps; otherwise separates.

    The sample is drawn once per oracle, so the oracle answers as a fixed
    function of P.  The matching direction M(x) is +1 when x is the lower
    end of a matched violated pair and -1 when it is the upper end, so
    E_T[M P_trim] estimates the matching weight over 2^n.
    """

    def __init__(self, n: int, eps: float, alpha: float, source, seed, *,
                 degree: Optional[int] = None, samples: Optional[int] = None,
                 monotone_gate: float = 5.0, l1_gate: float = 50.0,
                 basis: Optional[PolyBasis] = None, matching_mode: Optional[str] = None):
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        self.n = n
        self.eps = eps
        self.alpha = alpha
        self.source = source
        self.seed = as_seed(seed)
        self.degree = default_degree(n, eps) if degree is None else min(degree, n)
        self.basis = basis or PolyBasis(n, self.degree)
        self.monotone_gate = monotone_gate
        self.l1_gate = l1_gate
        self.matching_mode = matching_mode or ("materialized" if n <= MATERIALIZE_CAP else "local")
        self.sample_count = oracle_sample_size(n, eps) if samples is None else samples
        self.T = sample_uniform(n, self.sample_count, source, self.seed.generator(f"oracle-sample/{alpha!r}"))
        self._chi = chi_matrix(self.basis.masks, self.T.points)
        self.calls = 0

    def matching_direction(self, trimmed: Evaluator) -> np.ndarray:
        """M(x) at the sample points."""
        M = hypercube_matching(trimmed, self.n, self.eps / 4, self.seed.child("matching"),
                               mode=self.matching_mode)
        pts = self.T.points
        if self.matching_mode == "materialized":
            mate = M.full_mate[pts]
        else:
            mate = np.array([-1 if (p := M.partner(int(x))) is None else p for x in pts])
        out = np.zeros(len(pts))
        has = mate >= 0
        lower = has & ((pts & ~mate) == 0)
        out[lower] = 1.0
        out[has & ~lower] = -1.0
        return out

    def __call__(self, P: MultilinearPoly) -> OracleVerdict:
        if P.norm2() > 1 + 1e-9:
            raise ValueError("oracle requires ||P||_2 <= 1")
        return self._decide(P)

    def _decide(self, P: MultilinearPoly) -> OracleVerdict:
        self.calls += 1
        vec = self.basis.to_vector(P)
        w = self.T.weights
        p_vals = self._chi @ vec
        trimmed_vals = np.clip(p_vals, -1.0, 1.0)
        trimmed = Evaluator(lambda x: float(np.clip(P(x), -1, 1)),
                            vectorized=lambda xs: np.clip(P.evaluate(xs), -1.0, 1.0),
                            meta="trimmed")
        M = self.matching_direction(trimmed)
        m_est = float(w @ (M * trimmed_vals))
        l1_est = float(w @ np.abs(self.T.labels - p_vals))
        if m_est > self.monotone_gate * self.eps:
            q = self._chi.T @ (w * M)
            return OracleVerdict(False, self.basis.to_poly(q), "matching", m_est, l1_est)
        if l1_est > self.alpha + self.l1_gate * self.eps:
            q = self._chi.T @ (w * np.sign(p_vals - self.T.labels))
            return OracleVerdict(False, self.basis.to_poly(q), "l1", m_est, l1_est)
        return OracleVerdict(True, None, "accept", m_est, l1_est)

    def separate(self, vec: np.ndarray) -> SeparationResult:
        """Adapter for the ellipsoid: points outside the unit ball are cut by the ball itself."""
        norm = float(np.linalg.norm(vec))
        if norm > 1:
            return SeparationResult.no(vec / norm, reason="norm")
        verdict = self._decide(self.basis.to_poly(vec))
        if verdict.feasible:
            return SeparationResult.yes(matching=verdict.matching_estimate, l1=verdict.l1_estimate)
        return SeparationResult.no(self.basis.to_vector(verdict.separator), reason=verdict.reason,
                                   matching=verdict.matching_estimate, l1=verdict.l1_estimate)


def oracle_alpha(P: MultilinearPoly, alpha: float, n: int, eps: float, source, seed,
                 **kwargs) -> OracleVerdict:
    return SeparationOracle(n, eps, alpha, source, seed, degree=P.degree, **kwargs)(P)


def choose_threshold(g: Evaluator, T: SampleSet, candidates) -> float:
    """Candidate t minimizing the empirical disagreement of sign(g - t) with the labels.

    sign(0) is taken as +1.  Ties go to the earliest candidate.
    """
    candidates = np.asarray(candidates, dtype=float)
    if candidates.size == 0:
        raise ValueError("no threshold candidates")
    if len(T) == 0:
        raise ValueError("empty sample set")
    vals = g.many(T.points)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    w = T.weights[order]
    pos = np.where(T.labels[order] > 0, w, 0.0)
    neg = w - pos
    # predicted +1 exactly for vals >= t
    cut = np.searchsorted(vals, candidates, side="left")
    pos_below = np.r_[0.0, np.cumsum(pos)][cut]
    neg_above = neg.sum() - np.r_[0.0, np.cumsum(neg)][cut]
    err = pos_below + neg_above
    return float(candidates[int(np.argmin(err))])


def empirical_sign_error(g: Evaluator, t: float, T: SampleSet) -> float:
    pred = _sign(g.many(T.points) - t)
    return float(T.weights @ (pred != T.labels))


@dataclass
class Hypothesis:
    n: int
    corrected: Evaluator
    threshold: float
    provenance: dict = field(default_factory=dict)

    def predict(self, x) -> int:
        return 1 if self.corrected(x) - self.threshold >= 0 else -1

    def __call__(self, x) -> int:
        return self.predict(x)

    def predict_many(self, xs) -> np.ndarray:
        return _sign(self.corrected.many(xs) - self.threshold)

    def table(self) -> np.ndarray:
        if self.n > ENUM_CAP:
            raise ValueError("table too large")
        return self.predict_many(np.arange(1 << self.n))


class LearnerFailure(RuntimeError):
    def __init__(self, message: str, diagnostics: list):
        super().__init__(message)
        self.diagnostics = diagnostics


def monotone_learner(n: int, eps: float, source, seed, *, degree: Optional[int] = None,
                     samples: Optional[int] = None, threshold_samples: Optional[int] = None,
                     delta: float = 0.05, monotone_gate: float = 5.0, l1_gate: float = 50.0,
                     alphas: Optional[list] = None, max_iter: Optional[int] = None) -> Hypothesis:
    """Learn a monotone hypothesis from uniform labelled samples."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if source.n != n:
        raise ValueError("source dimension does not match n")
    seed = as_seed(seed)
    d = default_degree(n, eps) if degree is None else min(degree, n)
    basis = PolyBasis(n, d)
    r = eps * n ** (-d / 2)
    diagnostics = []
    P_good = None
    for alpha in (alpha_grid(eps) if alphas is None else alphas):
        oracle = SeparationOracle(n, eps, alpha, source, seed, degree=d, samples=samples,
                                  monotone_gate=monotone_gate, l1_gate=l1_gate, basis=basis)
        res = ellipsoid(basis.dim, r, 1.0, oracle.separate, max_iter=max_iter)
        diagnostics.append({"alpha": alpha, "iterations": res.iterations, "budget": res.budget,
                            "oracle_calls": oracle.calls, "accepted": not res.failed})
        if not res.failed:
            P_good = basis.to_poly(res.point)
            break
    if P_good is None:
        raise LearnerFailure("no alpha in the grid produced a feasible polynomial", diagnostics)
    trimmed = np.clip(P_good.table(), -1.0, 1.0)
    corrected = hypercube_corrector(trimmed, n, eps, seed.child("corrector"))
    g = corrected.evaluator()
    t_count = threshold_sample_size(n, eps) if threshold_samples is None else threshold_samples
    T2 = sample_uniform(n, t_count, source, seed.generator("threshold-sample"))
    candidates = seed.generator("threshold-candidates").uniform(-1, 1, candidate_count(eps, delta))
    t_star = choose_threshold(g, T2, candidates)
    return Hypothesis(n, g, t_star, {
        "alpha": diagnostics[-1]["alpha"], "degree": d, "basis_dim": basis.dim,
        "ellipsoid": diagnostics, "poly_norm": P_good.norm2(),
        "corrector": corrected.info, "threshold_samples": t_count,
        "candidates": len(candidates), "seed": seed.hex(), "seed_bytes": seed.bytes_consumed,
    })


@dataclass
class DistanceEstimate:
    estimate: float
    samples: int
    hypothesis: Hypothesis


def estimate_distance(source, n: int, eps: float, seed, *, delta: float = 0.05,
                      **learner_kwargs) -> DistanceEstimate:
    """Empirical disagreement between the learned hypothesis and fresh labels."""
    seed = as_seed(seed)
    h = monotone_learner(n, eps, source, seed, delta=delta, **learner_kwargs)
    m = distance_sample_size(eps, delta)
    T = sample_uniform(n, m, source, seed.generator("distance-sample"))
    est = float(T.weights @ (h.predict_many(T.points) != T.labels))
    return DistanceEstimate(est, m, h)


def trivial_sample_size(n: int, eps: float) -> int:
    return math.ceil(100 * n ** 5 * 2 ** n / eps ** 2)


def conditional_means(T: SampleSet, require_full: bool = True) -> np.ndarray:
    size = 1 << T.n
    total = np.bincount(T.points, weights=T.labels * T.counts, minlength=size)
    seen = np.bincount(T.points, weights=T.counts, minlength=size)
    if require_full and np.any(seen == 0):
        missing = int(np.sum(seen == 0))
        raise ValueError(f"{missing} points never sampled; full coverage is required")
    return np.divide(total, seen, out=np.zeros(size), where=seen > 0)


def trivial_learner(samples: SampleSet, n: int, eps: float, holdout: SampleSet, *,
                    delta: float = 0.05, seed=None) -> Hypothesis:
    """Fit the l1-closest monotone function to the per-point mean labels and round it."""
    if n > 16:
        raise ValueError("trivial learner works on truth tables, n <= 16")
    seed = as_seed(seed if seed is not None else 0)
    h = conditional_means(samples)
    fit = exact_l1_dist(full_cube(n), h)
    q = fit.witness
    g = Evaluator.from_table(q, meta="monotone fit")
    candidates = seed.generator("threshold-candidates").uniform(-1, 1, candidate_count(eps, delta))
    t_star = choose_threshold(g, holdout, candidates)
    return Hypothesis(n, g, t_star, {"fit_l1": fit.distance, "samples": len(samples),
                                     "holdout": len(holdout)})


def trivial_learner_from_source(source, n: int, eps: float, seed, *, sample_count: Optional[int] = None,
                                delta: float = 0.05) -> Hypothesis:
    seed = as_seed(seed)
    m = trivial_sample_size(n, eps) if sample_count is None else sample_count
    T1 = sample_uniform(n, m, source, seed.generator("trivial/T1"))
    T2 = sample_uniform(n, m, source, seed.generator("trivial/T2"))
    return trivial_learner(T1, n, eps, T2, delta=delta, seed=seed)


def hypothesis_error(h: Hypothesis, source) -> float:
    """Exact Pr[h(x) != y] under the uniform marginal."""
    pts = np.arange(1 << h.n)
    pred = h.predict_many(pts)
    if isinstance(source, RandomizedLabels):
        return float(np.mean(np.where(pred > 0, 1 - source.p_plus, source.p_plus)))
    return float(np.mean(pred != source.mean(pts)))
