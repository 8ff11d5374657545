"""Orbit generation and finite-scale dynamics diagnostics.

Density and transitivity here are desk-scale surrogates: a finite
polynomial family stands in for the collection of all convex polynomials
and a finite target/pair sample stands in for a countable ball basis.
Reports therefore carry the family descriptor and sampling parameters, so
every claim is scoped to what was actually searched.  A negative search
result is evidence, never proof.

Per-target and per-pair work is independent; when ``workers > 1`` the
evaluations run on a thread pool and are merged back in canonical index
order, so report payloads do not depend on scheduling.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from .errors import BallCenterOutsideSubspace, TargetOutsideSubspace
from .operators import (ConvexPolynomial, OperatorSpec, PolynomialFamily,
                        eval_poly, family_members)
from .spaces import (MEMBERSHIP_RTOL, BasisIndexSet, TruncVector,
                     distance_to_subspace, membership_tolerance, norm)


class Verdict(enum.Enum):
    DENSE_AT_SCALE = "DenseAtScale"
    NOT_COVERED_AT_SCALE = "NotCoveredAtScale"


@dataclass(frozen=True)
class TargetScore:
    """Best approximation of one target by admissible orbit points."""

    best_distance: float
    witness: Optional[ConvexPolynomial]
    witness_index: Optional[int]


@dataclass(frozen=True)
class DensityReport:
    targets: tuple
    per_target: tuple
    epsilon: float
    verdict: Verdict
    family: PolynomialFamily
    orbit_size: int
    admissible_orbit_size: int

    def best_distances(self) -> tuple:
        return tuple(s.best_distance for s in self.per_target)


@dataclass(frozen=True)
class BallPair:
    """U and V are the subspace balls around these centers."""

    u_center: TruncVector
    v_center: TruncVector
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class PairResult:
    found: bool
    witness: Optional[ConvexPolynomial]
    witness_index: Optional[int]
    invariance_residual: float

    def __post_init__(self):
        if self.found != (self.witness is not None):
            raise ValueError("witness must be present exactly when found")
        if self.invariance_residual < 0:
            raise ValueError("invariance residual must be nonnegative")


@dataclass(frozen=True)
class TransitivityReport:
    pairs: tuple
    per_pair: tuple
    family: PolynomialFamily
    samples_per_ball: int
    seed: int

    def all_found(self) -> bool:
        return all(r.found for r in self.per_pair)


@dataclass(frozen=True)
class InvarianceResult:
    invariant: bool
    max_residual: float
    violating_basis_index: Optional[int]


def _map_ordered(fn, count: int, workers: int):
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, i) for i in range(count)]
        return [f.result() for f in futures]


def orbit_segment(op: OperatorSpec, x: TruncVector,
                  family: PolynomialFamily) -> list:
    """[P(T)x for P in family], in family enumeration order."""
    return [eval_poly(P, op, x) for P in family_members(family)]


def density_score(op: OperatorSpec, x: TruncVector, m: BasisIndexSet,
                  family: PolynomialFamily, targets: Sequence[TruncVector],
                  epsilon: float, *, membership_rtol: float = MEMBERSHIP_RTOL,
                  include_outside: bool = False, workers: int = 1) -> DensityReport:
    """How well do admissible orbit points cover the targets?

    For each target y the score is min over the family of ||P(T)x - y||,
    restricted to orbit points inside the subspace (the orbit is
    intersected with the subspace before density is asked for); points
    outside are excluded unless ``include_outside`` is set.  The verdict
    is DenseAtScale exactly when every best distance is <= epsilon.
    Witnesses break ties toward the first family member within 1e-12 of
    the minimum.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not targets:
        raise ValueError("at least one target is required")
    if len(m) == 0:
        raise ValueError("the zero subspace admits no density diagnostic")
    for t_idx, y in enumerate(targets):
        if distance_to_subspace(y, m) > membership_tolerance(y, membership_rtol):
            raise TargetOutsideSubspace(
                f"target {t_idx} lies outside the subspace span")

    members = family_members(family)
    orbit = [eval_poly(P, op, x) for P in members]
    if include_outside:
        admissible = list(range(len(orbit)))
    else:
        admissible = [
            i for i, w in enumerate(orbit)
            if distance_to_subspace(w, m) <= membership_tolerance(w, membership_rtol)
        ]

    def score_one(t_idx: int) -> TargetScore:
        y = targets[t_idx]
        distances = [norm(orbit[i] - y) for i in admissible]
        if not distances:
            return TargetScore(math.inf, None, None)
        best = min(distances)
        for pos, d in enumerate(distances):
            if d <= best + 1e-12:
                idx = admissible[pos]
                return TargetScore(d, members[idx], idx)
        raise AssertionError("unreachable: minimum must be attained")

    scores = _map_ordered(score_one, len(targets), workers)
    verdict = (Verdict.DENSE_AT_SCALE
               if all(s.best_distance <= epsilon for s in scores)
               else Verdict.NOT_COVERED_AT_SCALE)
    return DensityReport(
        targets=tuple(targets),
        per_target=tuple(scores),
        epsilon=float(epsilon),
        verdict=verdict,
        family=family,
        orbit_size=len(orbit),
        admissible_orbit_size=len(admissible),
    )


def invariance_check(P: ConvexPolynomial, op: OperatorSpec, m: BasisIndexSet,
                     *, membership_rtol: float = MEMBERSHIP_RTOL) -> InvarianceResult:
    """Does P(T) map the subspace into itself, numerically?

    Applies P(T) to each basis vector of the span and measures the
    residual outside the span.  Reports the worst residual and the first
    violating basis index (in sorted order).
    """
    worst = 0.0
    violator = None
    for j in m.indices:
        image = eval_poly(P, op, TruncVector.basis(j, m.dim))
        residual = distance_to_subspace(image, m)
        if residual > worst:
            worst = residual
        if violator is None and residual > membership_tolerance(image, membership_rtol):
            violator = j
    return InvarianceResult(invariant=violator is None, max_residual=worst,
                            violating_basis_index=violator)


def sample_ball(center: TruncVector, m: BasisIndexSet, radius: float,
                count: int, seed: int) -> list:
    """Deterministic low-discrepancy points in the subspace ball.

    The center itself is always the first sample.  Remaining samples are
    scrambled-Halton points in the coordinate cube of the span, clamped
    into the radius.  For complex experiments the sampled coefficients are
    real, a subset of the ball that keeps sampling reproducible.
    """
    samples = [center]
    extra = count - 1
    if extra <= 0 or len(m) == 0:
        return samples
    halton = qmc.Halton(d=len(m), scramble=True, seed=seed)
    cube = 2.0 * halton.random(extra) - 1.0
    idx = list(m.indices)
    for row in cube:
        coords = np.zeros(center.dim)
        coords[idx] = row
        offset = TruncVector(coords.astype(center.coords.dtype), p=center.p)
        scale = norm(offset)
        if scale > 1.0:
            offset = offset * (1.0 / scale)
        samples.append(center + radius * offset)
    return samples


def transitivity_search(op: OperatorSpec, m: BasisIndexSet,
                        pairs: Sequence[BallPair], family: PolynomialFamily,
                        samples_per_ball: int = 8, seed: int = 0, *,
                        membership_rtol: float = MEMBERSHIP_RTOL,
                        workers: int = 1) -> TransitivityReport:
    """Search for polynomials carrying part of each V-ball into each U-ball.

    A pair is "found" when some sampled v in the V-ball has P(T)v inside
    the U-ball and inside the subspace (relatively open sets of the
    subspace contain only subspace points).  The first (family member,
    sample) hit in enumeration order wins, and the witness's invariance
    residual over the whole subspace is recorded alongside.  ``found ==
    False`` means no witness in this family at this sampling resolution:
    evidence of non-transitivity, not proof.
    """
    if len(m) == 0:
        raise ValueError("the zero subspace admits no transitivity search")
    for p_idx, pair in enumerate(pairs):
        for label, center in (("U", pair.u_center), ("V", pair.v_center)):
            if distance_to_subspace(center, m) > membership_tolerance(center, membership_rtol):
                raise BallCenterOutsideSubspace(
                    f"pair {p_idx}: {label} center lies outside the subspace span")

    members = family_members(family)

    def search_one(p_idx: int) -> PairResult:
        pair = pairs[p_idx]
        samples = sample_ball(pair.v_center, m, pair.radius, samples_per_ball,
                              seed + 1000003 * p_idx)
        for f_idx, P in enumerate(members):
            for v in samples:
                image = eval_poly(P, op, v)
                if distance_to_subspace(image, m) > membership_tolerance(image, membership_rtol):
                    continue
                if norm(image - pair.u_center) <= pair.radius:
                    residual = invariance_check(P, op, m,
                                                membership_rtol=membership_rtol).max_residual
                    return PairResult(True, P, f_idx, residual)
        return PairResult(False, None, None, 0.0)

    results = _map_ordered(search_one, len(pairs), workers)
    return TransitivityReport(
        pairs=tuple(pairs),
        per_pair=tuple(results),
        family=family,
        samples_per_ball=samples_per_ball,
        seed=seed,
    )


def default_density_targets(m: BasisIndexSet, count: int = 32, seed: int = 0,
                            radius: float = 1.0, p: float = 2.0,
                            complex_field: bool = False) -> list:
    """Normalized basis members of the span, topped up with seeded ball
    samples around the origin until ``count`` targets exist."""
    targets = [TruncVector.basis(j, m.dim, p=p, complex_field=complex_field)
               for j in m.indices[:count]]
    missing = count - len(targets)
    if missing > 0:
        center = TruncVector.zeros(m.dim, p=p, complex_field=complex_field)
        targets.extend(sample_ball(center, m, radius, missing + 1, seed)[1:])
    return targets
