"""Symbolic operator specs, convex polynomials, and their action on truncations.

Operators are described symbolically (shifts, scalings, direct sums, dense
matrices) so one spec can act at any truncation size.  Backward shifts are
truncation-exact; forward shifts raise TruncationOverflow when nonzero mass
would leave the truncation, unless auto-grow is requested.  Polynomial
evaluation accumulates sum a_i T^i v in ascending degree with a running
power vector, one operator application per degree step, which makes the
result bit-for-bit deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatch, TruncationOverflow
from .spaces import TruncVector

#: Hard cap for auto-grow re-embedding of forward shifts.
GROW_CAP = 4096


# ---------------------------------------------------------------------------
# Operator specifications
# ---------------------------------------------------------------------------


def _coerce_weight(weight):
    if np.isscalar(weight):
        w = complex(weight)
        if w == 0 or not math.isfinite(abs(w)):
            raise ValueError("shift weight must be finite and nonzero")
        return w.real if w.imag == 0 else w
    seq = tuple(complex(x).real if complex(x).imag == 0 else complex(x) for x in weight)
    if not seq:
        raise ValueError("per-index weights must be nonempty")
    if any(x == 0 or not math.isfinite(abs(x)) for x in seq):
        raise ValueError("shift weights must be finite and nonzero")
    return seq


@dataclass(frozen=True)
class BackwardShift:
    """e_n -> weight_n * e_{n-1}; e_0 is annihilated.

    ``weight`` is a constant scalar or a per-index tuple indexed by the
    source coordinate n (entries for n >= 1 are used).
    """

    weight: object = 1.0

    def __post_init__(self):
        object.__setattr__(self, "weight", _coerce_weight(self.weight))


@dataclass(frozen=True)
class ForwardShift:
    """e_n -> weight_n * e_{n+1}; overflow-checked at the truncation edge."""

    weight: object = 1.0

    def __post_init__(self):
        object.__setattr__(self, "weight", _coerce_weight(self.weight))


@dataclass(frozen=True)
class Scale:
    """factor * inner."""

    factor: complex
    inner: "OperatorSpec"

    def __post_init__(self):
        f = complex(self.factor)
        if not math.isfinite(abs(f)):
            raise ValueError("scale factor must be finite")
        object.__setattr__(self, "factor", f.real if f.imag == 0 else f)


@dataclass(frozen=True)
class DirectSum:
    """Blockwise action: left on coordinates [0, split), right on [split, dim)."""

    left: "OperatorSpec"
    right: "OperatorSpec"
    split: int

    def __post_init__(self):
        if self.split <= 0:
            raise ValueError("split must be positive")


@dataclass(frozen=True)
class Dense:
    """Explicit square matrix acting on one fixed truncation size."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"dense operator needs a square matrix, got {mat.shape}")
        if np.iscomplexobj(mat):
            mat = mat.astype(np.complex128)
        else:
            mat = mat.astype(np.float64)
        if not np.all(np.isfinite(mat)):
            raise ValueError("dense matrix entries must be finite")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class Identity:
    """The identity operator at any truncation size."""


OperatorSpec = Union[BackwardShift, ForwardShift, Scale, DirectSum, Dense, Identity]


def _weight_array(weight, count: int, label: str) -> np.ndarray:
    """Weights for source indices 0..count-1."""
    if isinstance(weight, tuple):
        if len(weight) < count:
            raise ValueError(
                f"{label}: per-index weights cover {len(weight)} indices, need {count}")
        return np.asarray(weight[:count])
    return np.full(count, weight)


def apply(op: OperatorSpec, v: TruncVector, *, grow: bool = False,
          grow_cap: int = GROW_CAP) -> TruncVector:
    """Act with ``op`` on ``v``, exactly on the truncation.

    Forward shifts raise TruncationOverflow if the top coordinate is
    nonzero; with ``grow=True`` the vector is re-embedded in a larger
    dimension first (up to ``grow_cap``).  Growth never applies inside
    direct-sum blocks, whose sizes are fixed by the split.
    """
    if isinstance(op, BackwardShift):
        out = np.zeros_like(v.coords)
        if v.dim > 1:
            w = _weight_array(op.weight, v.dim, "backward shift")[1:]
            out[:-1] = w * v.coords[1:]
        return v.with_coords(out)
    if isinstance(op, ForwardShift):
        if v.coords[-1] != 0:
            if not grow:
                raise TruncationOverflow(
                    f"forward shift would push mass past index {v.dim - 1}; "
                    "enlarge the truncation or enable auto-grow")
            if v.dim >= grow_cap:
                raise TruncationOverflow(
                    f"forward shift hit the auto-grow cap {grow_cap}")
            v = v.embedded(min(grow_cap, max(v.dim + 1, 2 * v.dim)))
        out = np.zeros_like(v.coords)
        w = _weight_array(op.weight, v.dim - 1, "forward shift")
        out[1:] = w * v.coords[:-1]
        return v.with_coords(out)
    if isinstance(op, Scale):
        inner = apply(op.inner, v, grow=grow, grow_cap=grow_cap)
        return inner.with_coords(op.factor * inner.coords)
    if isinstance(op, DirectSum):
        if not op.split < v.dim:
            raise DimensionMismatch(
                f"direct-sum split {op.split} does not partition dimension {v.dim}")
        left = apply(op.left, v.with_coords(v.coords[: op.split]))
        right = apply(op.right, v.with_coords(v.coords[op.split:]))
        return v.with_coords(np.concatenate([left.coords, right.coords]))
    if isinstance(op, Dense):
        if op.matrix.shape[0] != v.dim:
            raise DimensionMismatch(
                f"dense operator dim {op.matrix.shape[0]} != vector dim {v.dim}")
        return v.with_coords(op.matrix @ v.coords)
    if isinstance(op, Identity):
        return v
    raise TypeError(f"unknown operator spec {type(op).__name__}")


def to_dense(op: OperatorSpec, dim: int) -> np.ndarray:
    """The truncated matrix of ``op``.

    Built directly from each kind's definition (not by probing ``apply``)
    so it can serve as an independent evaluation oracle.  A forward
    shift's top-row mass is compressed away, matching the truncation.
    """
    if isinstance(op, BackwardShift):
        mat = np.zeros((dim, dim))
        if dim > 1:
            w = _weight_array(op.weight, dim, "backward shift")[1:]
            mat = np.diag(w, k=1)
        return mat
    if isinstance(op, ForwardShift):
        if dim == 1:
            return np.zeros((1, 1))
        w = _weight_array(op.weight, dim - 1, "forward shift")
        return np.diag(w, k=-1)
    if isinstance(op, Scale):
        return op.factor * to_dense(op.inner, dim)
    if isinstance(op, DirectSum):
        if not op.split < dim:
            raise DimensionMismatch(
                f"direct-sum split {op.split} does not partition dimension {dim}")
        left = to_dense(op.left, op.split)
        right = to_dense(op.right, dim - op.split)
        out = np.zeros((dim, dim), dtype=np.result_type(left, right))
        out[: op.split, : op.split] = left
        out[op.split:, op.split:] = right
        return out
    if isinstance(op, Dense):
        if op.matrix.shape[0] != dim:
            raise DimensionMismatch(
                f"dense operator dim {op.matrix.shape[0]} != requested dim {dim}")
        return np.array(op.matrix)
    if isinstance(op, Identity):
        return np.eye(dim)
    raise TypeError(f"unknown operator spec {type(op).__name__}")


# ---------------------------------------------------------------------------
# Operator norms and the necessary-condition screen
# ---------------------------------------------------------------------------


def _window_products(weights: np.ndarray, n: int) -> float:
    """max |product of n consecutive weights|, or 0 if no window fits."""
    if n == 0:
        return 1.0
    if len(weights) < n:
        return 0.0
    mags = np.abs(weights)
    best = 0.0
    for j in range(len(weights) - n + 1):
        best = max(best, float(np.prod(mags[j: j + n])))
    return best


def _power_iteration_norm(mat: np.ndarray, iters: int = 200) -> float:
    """2-norm estimate of a dense matrix by power iteration on M*M."""
    dim = mat.shape[0]
    rng = np.random.default_rng(0)
    v = rng.standard_normal(dim)
    if np.iscomplexobj(mat):
        v = v.astype(np.complex128)
    v /= np.linalg.norm(v)
    sigma = 0.0
    herm = mat.conj().T @ mat
    for _ in range(iters):
        w = herm @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        sigma = nw
    return float(math.sqrt(sigma))


def power_norm_estimate(op: OperatorSpec, n: int, dim: int) -> float:
    """Estimate of ||T^n|| on the truncation.

    Exact for shift-built specs (weight-window products); dense blocks use
    explicit matrix powers.  Always the truncation's value, which lower
    bounds the full operator norm.
    """
    if n == 0:
        return 1.0
    if isinstance(op, BackwardShift):
        w = _weight_array(op.weight, dim, "backward shift")[1:]
        return _window_products(w, n)
    if isinstance(op, ForwardShift):
        w = _weight_array(op.weight, max(dim - 1, 0), "forward shift")
        return _window_products(w[: max(dim - n, 0)], n) if dim > n else 0.0
    if isinstance(op, Scale):
        return abs(op.factor) ** n * power_norm_estimate(op.inner, n, dim)
    if isinstance(op, DirectSum):
        return max(power_norm_estimate(op.left, n, op.split),
                   power_norm_estimate(op.right, n, dim - op.split))
    if isinstance(op, Dense):
        mat = np.linalg.matrix_power(op.matrix, n)
        return _power_iteration_norm(mat)
    if isinstance(op, Identity):
        return 1.0
    raise TypeError(f"unknown operator spec {type(op).__name__}")


def operator_norm_estimate(op: OperatorSpec, dim: int) -> float:
    """||T|| on the truncation: exact for shift-type specs, power iteration
    for dense blocks (p = 2).  A lower bound for the full operator norm."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    return power_norm_estimate(op, 1, dim)


@dataclass(frozen=True)
class ScreenReport:
    """Necessary-condition screen for convex-cyclicity candidates.

    A failed screen rules the operator out; a passed screen proves
    nothing.  ``power_norms[n-1]`` estimates ||T^n||.
    """

    norm_estimate: float
    norm_exceeds_one: bool
    power_norms: tuple
    growth_threshold: float
    growth_attained: bool

    @property
    def passed(self) -> bool:
        return self.norm_exceeds_one and self.growth_attained


def screen_necessary_conditions(op: OperatorSpec, dim: int, horizon: int,
                                growth_threshold: float = 10.0) -> ScreenReport:
    """Check ||T|| > 1 and that ||T^n|| estimates clear a growth threshold
    within the horizon."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    nrm = operator_norm_estimate(op, dim)
    powers = tuple(power_norm_estimate(op, n, dim) for n in range(1, horizon + 1))
    return ScreenReport(
        norm_estimate=nrm,
        norm_exceeds_one=nrm > 1.0 + 1e-12,
        power_norms=powers,
        growth_threshold=growth_threshold,
        growth_attained=max(powers) >= growth_threshold,
    )


# ---------------------------------------------------------------------------
# Convex polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexPolynomial:
    """Coefficients (a_0, ..., a_n) with sum 1, nonnegative by default.

    Trailing zero coefficients are trimmed on construction so the stored
    degree is meaningful.  ``allow_signed=True`` relaxes nonnegativity for
    exploratory runs while keeping the unit-sum constraint.
    """

    coeffs: tuple
    allow_signed: bool = False

    def __post_init__(self):
        cs = tuple(float(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a convex polynomial needs at least one coefficient")
        if any(not math.isfinite(c) for c in cs):
            raise ValueError("coefficients must be finite")
        while len(cs) > 1 and cs[-1] == 0.0:
            cs = cs[:-1]
        if not self.allow_signed and any(c < 0 for c in cs):
            raise ValueError("coefficients must be nonnegative (set allow_signed to relax)")
        total = math.fsum(cs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"coefficients must sum to 1 within 1e-12, got {total!r}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def identity(cls) -> "ConvexPolynomial":
        return cls((1.0,))

    @classmethod
    def monomial(cls, degree: int) -> "ConvexPolynomial":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return cls((0.0,) * degree + (1.0,))

    def growth_bound(self, c: float) -> float:
        """sum |a_i| c^i, the norm amplification bound at operator norm c."""
        return math.fsum(abs(a) * c ** i for i, a in enumerate(self.coeffs))

    def degree_profile(self) -> tuple:
        """Degrees carrying nonzero coefficients."""
        return tuple(i for i, a in enumerate(self.coeffs) if a != 0.0)


def eval_poly(P: ConvexPolynomial, op: OperatorSpec, v: TruncVector, *,
              grow: bool = False, grow_cap: int = GROW_CAP) -> TruncVector:
    """sum a_i T^i v, accumulated in ascending degree with a running power.

    Exactly one operator application per degree step and a fixed summation
    order, so results are deterministic bit for bit.
    """
    acc = v.with_coords(P.coeffs[0] * v.coords)
    power = v
    for a in P.coeffs[1:]:
        power = apply(op, power, grow=grow, grow_cap=grow_cap)
        if power.dim > acc.dim:
            acc = acc.embedded(power.dim)
        acc = acc.with_coords(acc.coords + a * power.coords)
    return acc


def compose_polys(P: ConvexPolynomial, Q: ConvexPolynomial) -> ConvexPolynomial:
    """Coefficient convolution: (P*Q)(T) = P(T) Q(T).

    Convexity is preserved: products of nonnegative coefficients summing
    to one again sum to one.
    """
    coeffs = np.convolve(np.asarray(P.coeffs), np.asarray(Q.coeffs))
    return ConvexPolynomial(tuple(float(c) for c in coeffs),
                            allow_signed=P.allow_signed or Q.allow_signed)


# ---------------------------------------------------------------------------
# Finite search families standing in for "all convex polynomials"
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomials:
    """T^0, T^1, ..., T^max_degree (degree 0 included on purpose)."""

    max_degree: int

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")

    def members(self) -> Tuple[ConvexPolynomial, ...]:
        return tuple(ConvexPolynomial.monomial(d) for d in range(self.max_degree + 1))


@dataclass(frozen=True)
class CesaroMeans:
    """Uniform averages (T^0 + ... + T^k)/(k+1) for k <= max_degree."""

    max_degree: int

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")

    def members(self) -> Tuple[ConvexPolynomial, ...]:
        out = []
        for k in range(self.max_degree + 1):
            out.append(ConvexPolynomial(tuple([1.0 / (k + 1)] * (k + 1))))
        return tuple(out)


def _compositions(total: int, parts: int):
    """All nonnegative integer tuples of length ``parts`` summing to ``total``,
    in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


@dataclass(frozen=True)
class SimplexGrid:
    """All rational convex combinations with denominator ``resolution`` on
    degrees 0..degree, enumerated lexicographically."""

    degree: int
    resolution: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.resolution < 1:
            raise ValueError("resolution must be >= 1")

    def members(self) -> Tuple[ConvexPolynomial, ...]:
        res = self.resolution
        out = []
        for comp in _compositions(res, self.degree + 1):
            out.append(ConvexPolynomial(tuple(c / res for c in comp)))
        return tuple(out)


@dataclass(frozen=True)
class RandomSimplex:
    """Seeded Dirichlet(1,...,1) samples on degrees 0..degree."""

    degree: int
    count: int
    seed: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    def members(self) -> Tuple[ConvexPolynomial, ...]:
        rng = np.random.default_rng(self.seed)
        samples = rng.dirichlet(np.ones(self.degree + 1), size=self.count)
        out = []
        for row in samples:
            row = row / math.fsum(row)
            out.append(ConvexPolynomial(tuple(float(c) for c in row)))
        return tuple(out)


PolynomialFamily = Union[Monomials, CesaroMeans, SimplexGrid, RandomSimplex]


def family_members(family: PolynomialFamily) -> Tuple[ConvexPolynomial, ...]:
    """Deterministic enumeration of a family's members."""
    return family.members()
