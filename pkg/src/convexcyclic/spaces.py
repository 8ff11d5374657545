"""Finite truncations of sequence-space vectors and basis-aligned subspaces.

Vectors live in the first ``dim`` coordinates of an l^p sequence space.
Subspaces are always spans of canonical basis subsets, described
symbolically and materialized to an explicit index set at a chosen
truncation.  All values are immutable after construction and every
operation is a pure function, so everything here is safe to share
between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, DimensionTooSmall

#: Default relative tolerance for membership tests: a vector counts as
#: inside a subspace when its residual is below rtol * max(1, ||v||).
MEMBERSHIP_RTOL = 1e-9


def _coerce_coords(coords) -> np.ndarray:
    arr = np.asarray(coords)
    if arr.ndim != 1:
        raise ValueError(f"coordinates must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("a truncated vector needs at least one coordinate")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128)
    else:
        arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class TruncVector:
    """A vector in the first ``dim`` coordinates of l^p.

    Coordinates are real or complex; the scalar field is whatever the
    array dtype says, chosen once per experiment.  ``p`` is the norm
    exponent, 1 <= p < infinity.
    """

    coords: np.ndarray
    p: float = 2.0

    def __post_init__(self):
        arr = _coerce_coords(self.coords)
        p = float(self.p)
        if not (p >= 1.0 and math.isfinite(p)):
            raise ValueError(f"norm exponent must satisfy 1 <= p < inf, got {self.p}")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return int(self.coords.size)

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.coords))

    @classmethod
    def zeros(cls, dim: int, p: float = 2.0, complex_field: bool = False) -> "TruncVector":
        dtype = np.complex128 if complex_field else np.float64
        return cls(np.zeros(dim, dtype=dtype), p=p)

    @classmethod
    def basis(cls, index: int, dim: int, p: float = 2.0,
              complex_field: bool = False) -> "TruncVector":
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} outside [0, {dim})")
        dtype = np.complex128 if complex_field else np.float64
        arr = np.zeros(dim, dtype=dtype)
        arr[index] = 1.0
        return cls(arr, p=p)

    def with_coords(self, coords) -> "TruncVector":
        return TruncVector(coords, p=self.p)

    def embedded(self, dim: int) -> "TruncVector":
        """Zero-pad up to a larger ambient dimension."""
        if dim < self.dim:
            raise DimensionMismatch(f"cannot embed dim {self.dim} into dim {dim}")
        if dim == self.dim:
            return self
        out = np.zeros(dim, dtype=self.coords.dtype)
        out[: self.dim] = self.coords
        return TruncVector(out, p=self.p)

    def _check_same_space(self, other: "TruncVector"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dims differ: {self.dim} vs {other.dim}")
        if self.p != other.p:
            raise ValueError(f"norm exponents differ: {self.p} vs {other.p}")

    def __add__(self, other: "TruncVector") -> "TruncVector":
        self._check_same_space(other)
        return TruncVector(self.coords + other.coords, p=self.p)

    def __sub__(self, other: "TruncVector") -> "TruncVector":
        self._check_same_space(other)
        return TruncVector(self.coords - other.coords, p=self.p)

    def __mul__(self, scalar) -> "TruncVector":
        return TruncVector(self.coords * scalar, p=self.p)

    __rmul__ = __mul__

    def __neg__(self) -> "TruncVector":
        return TruncVector(-self.coords, p=self.p)

    def allclose(self, other: "TruncVector", atol: float = 0.0, rtol: float = 1e-12) -> bool:
        self._check_same_space(other)
        return bool(np.allclose(self.coords, other.coords, atol=atol, rtol=rtol))

    def __repr__(self):
        nonzero = np.flatnonzero(np.abs(self.coords) > 0)
        if nonzero.size > 6:
            body = f"{nonzero.size} nonzero entries"
        else:
            body = ", ".join(f"[{i}]={self.coords[i]:.6g}" for i in nonzero) or "zero"
        return f"TruncVector(dim={self.dim}, p={self.p}, {body})"


def norm(v: TruncVector) -> float:
    """The l^p norm (sum |c_i|^p)^(1/p) of the truncation."""
    return float(np.linalg.norm(v.coords, ord=v.p))


# ---------------------------------------------------------------------------
# Subspace specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexSet:
    """Span of an explicit set of basis indices."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 0 for i in idx):
            raise ValueError("basis indices must be nonnegative")
        if len(set(idx)) != len(idx):
            raise ValueError("basis indices must be distinct")
        object.__setattr__(self, "indices", tuple(sorted(idx)))


@dataclass(frozen=True)
class IntervalFamily:
    """Span of e_j for j in the union of inclusive intervals [n_k, m_k].

    The interval endpoints must interleave: n_k < m_k < n_{k+1}.
    """

    starts: tuple
    ends: tuple

    def __post_init__(self):
        starts = tuple(int(n) for n in self.starts)
        ends = tuple(int(m) for m in self.ends)
        if len(starts) != len(ends) or not starts:
            raise ValueError("starts and ends must be equal-length and nonempty")
        if starts[0] < 0:
            raise ValueError("interval starts must be nonnegative")
        for k, (n, m) in enumerate(zip(starts, ends)):
            if not n < m:
                raise ValueError(f"interval {k}: need start < end, got [{n}, {m}]")
            if k + 1 < len(starts) and not m < starts[k + 1]:
                raise ValueError(f"interval {k}: end {m} must be below next start {starts[k+1]}")
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "ends", ends)

    def gaps(self) -> tuple:
        """Sizes n_{k+1} - m_k between consecutive intervals."""
        return tuple(self.starts[k + 1] - self.ends[k] for k in range(len(self.starts) - 1))

    def widths(self) -> tuple:
        return tuple(m - n for n, m in zip(self.starts, self.ends))


@dataclass(frozen=True)
class ParityZero:
    """Vectors whose entries at every index of the given parity vanish.

    ``parity="even"`` keeps support on odd indices, and vice versa.
    """

    parity: str

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")


@dataclass(frozen=True)
class RecursiveSpan:
    """Nested span built by repeatedly forward-shifting the previous stage.

    Stage 0 is span{e_0}; stage k+1 adjoins the stage-k set shifted up by
    n_{k+1}.  The offsets must grow fast enough that the shifted copies
    never collide: n_{k+1} > 2 * (n_0 + ... + n_k).
    """

    n_seq: tuple
    depth: int
    shift_weight: float = 0.5

    def __post_init__(self):
        seq = tuple(int(n) for n in self.n_seq)
        if not seq or seq[0] != 0:
            raise ValueError("offset sequence must start with 0")
        running = 0
        for k in range(len(seq) - 1):
            running += seq[k]
            if not seq[k + 1] > 2 * running:
                raise ValueError(
                    f"offset {seq[k+1]} at position {k+1} must exceed twice the "
                    f"running sum {running}"
                )
        if not 0 <= self.depth <= len(seq) - 1:
            raise ValueError(f"depth {self.depth} outside [0, {len(seq) - 1}]")
        w = self.shift_weight
        if w == 0 or not math.isfinite(abs(w)):
            raise ValueError("shift weight must be finite and nonzero")
        object.__setattr__(self, "n_seq", seq)
        object.__setattr__(self, "depth", int(self.depth))

    def stage_indices(self, depth: int) -> tuple:
        """Basis indices of the stage-``depth`` span."""
        indices = {0}
        for k in range(1, depth + 1):
            indices |= {self.n_seq[k] + j for j in indices}
        return tuple(sorted(indices))


@dataclass(frozen=True)
class DirectSumFactor:
    """One block of a two-block direct sum, optionally restricted further.

    ``split`` is the first index of the right block; ``position`` selects
    the left (0) or right (1) block.  ``inner`` is an optional subspace
    spec interpreted inside the chosen block.
    """

    position: int
    split: int
    inner: Optional["SubspaceSpec"] = None

    def __post_init__(self):
        if self.position not in (0, 1):
            raise ValueError("position must be 0 (left block) or 1 (right block)")
        if self.split <= 0:
            raise ValueError("split must be positive")


SubspaceSpec = Union[IndexSet, IntervalFamily, ParityZero, RecursiveSpan, DirectSumFactor]


@dataclass(frozen=True)
class BasisIndexSet:
    """A subspace materialized at a truncation: sorted basis indices."""

    indices: tuple
    dim: int

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError("materialized indices must be distinct")
        if idx and not (0 <= idx[0] and idx[-1] < self.dim):
            raise ValueError(f"indices must lie in [0, {self.dim})")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "dim", int(self.dim))

    def __contains__(self, index: int) -> bool:
        return index in set(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.dim, dtype=bool)
        if self.indices:
            m[list(self.indices)] = True
        return m


def materialize_subspace(spec: SubspaceSpec, dim: int) -> BasisIndexSet:
    """Resolve a symbolic subspace to the basis indices it spans at ``dim``.

    Raises DimensionTooSmall when the spec references an index >= dim.
    """
    if dim <= 0:
        raise ValueError("dimension must be positive")
    if isinstance(spec, IndexSet):
        if spec.indices and spec.indices[-1] >= dim:
            raise DimensionTooSmall(
                f"index {spec.indices[-1]} does not fit in dimension {dim}")
        return BasisIndexSet(spec.indices, dim)
    if isinstance(spec, IntervalFamily):
        if spec.ends[-1] >= dim:
            raise DimensionTooSmall(
                f"interval end {spec.ends[-1]} does not fit in dimension {dim}")
        indices = []
        for n, m in zip(spec.starts, spec.ends):
            indices.extend(range(n, m + 1))
        return BasisIndexSet(tuple(indices), dim)
    if isinstance(spec, ParityZero):
        start = 1 if spec.parity == "even" else 0
        return BasisIndexSet(tuple(range(start, dim, 2)), dim)
    if isinstance(spec, RecursiveSpan):
        indices = spec.stage_indices(spec.depth)
        if indices[-1] >= dim:
            raise DimensionTooSmall(
                f"stage-{spec.depth} index {indices[-1]} does not fit in dimension {dim}")
        return BasisIndexSet(indices, dim)
    if isinstance(spec, DirectSumFactor):
        if spec.split >= dim:
            raise DimensionTooSmall(f"split {spec.split} does not fit in dimension {dim}")
        lo, hi = (0, spec.split) if spec.position == 0 else (spec.split, dim)
        if spec.inner is None:
            return BasisIndexSet(tuple(range(lo, hi)), dim)
        inner = materialize_subspace(spec.inner, hi - lo)
        return BasisIndexSet(tuple(lo + i for i in inner.indices), dim)
    raise TypeError(f"unknown subspace spec {type(spec).__name__}")


def project(v: TruncVector, m: BasisIndexSet) -> TruncVector:
    """Zero every coordinate outside the subspace's index set.

    This is the orthogonal projection for p = 2 and the metric-nearest
    point in the span for every p, because the span is coordinate-aligned.
    Idempotent by construction.
    """
    if v.dim != m.dim:
        raise DimensionMismatch(f"vector dim {v.dim} != subspace dim {m.dim}")
    out = np.where(m.mask(), v.coords, 0.0)
    return TruncVector(out.astype(v.coords.dtype), p=v.p)


def distance_to_subspace(v: TruncVector, m: BasisIndexSet) -> float:
    """Norm of the residual v - project(v): zero iff v lies in the span."""
    if v.dim != m.dim:
        raise DimensionMismatch(f"vector dim {v.dim} != subspace dim {m.dim}")
    off = np.where(m.mask(), 0.0, v.coords)
    return float(np.linalg.norm(off, ord=v.p))


def membership_tolerance(v: TruncVector, rtol: float = MEMBERSHIP_RTOL) -> float:
    """Scale-invariant zero threshold: rtol * max(1, ||v||)."""
    return rtol * max(1.0, norm(v))


def is_member(v: TruncVector, m: BasisIndexSet, rtol: float = MEMBERSHIP_RTOL) -> bool:
    return distance_to_subspace(v, m) <= membership_tolerance(v, rtol)
