"""Experiment config format: strict JSON serialization for every domain object.

One human-readable JSON document describes a full experiment: scalar
field, truncation size, operator, subspace, polynomial family, tolerances
and per-command blocks.  Parsing is strict: unknown fields are errors, so
a typo in a tolerance name cannot silently change a run.  Every object
the CLI emits re-parses to an identical in-memory experiment, and payloads
are deterministic (sorted keys, no timestamps), so identical configs and
seeds produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .criteria import (CriterionInstance, ExplicitRecovery, ShiftRecovery)
from .dynamics import BallPair
from .errors import ConfigError
from .operators import (BackwardShift, CesaroMeans, ConvexPolynomial, Dense,
                        DirectSum, ForwardShift, Identity, Monomials,
                        OperatorSpec, PolynomialFamily, RandomSimplex, Scale,
                        SimplexGrid)
from .spaces import (DirectSumFactor, IndexSet, IntervalFamily, ParityZero,
                     RecursiveSpan, SubspaceSpec, TruncVector)

CONFIG_VERSION = 1


def _check_keys(data: dict, allowed, context: str):
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"{context}: unknown field(s) {sorted(unknown)}")


def _req(data: dict, key: str, context: str):
    if key not in data:
        raise ConfigError(f"{context}: missing field {key!r}")
    return data[key]


# ---------------------------------------------------------------------------
# Scalars and vectors
# ---------------------------------------------------------------------------


def scalar_to_json(x):
    x = complex(x)
    if x.imag == 0:
        return float(x.real)
    return [float(x.real), float(x.imag)]


def scalar_from_json(obj, context: str):
    if isinstance(obj, (int, float)):
        return float(obj)
    if isinstance(obj, list) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ConfigError(f"{context}: expected a number or [re, im] pair")


def vector_to_dict(v: TruncVector) -> dict:
    entries = []
    for i in np.flatnonzero(v.coords):
        c = v.coords[i]
        if np.iscomplexobj(v.coords):
            entries.append([int(i), float(c.real), float(c.imag)])
        else:
            entries.append([int(i), float(c)])
    return {"dim": v.dim, "entries": entries}


def vector_from_dict(data: dict, context: str, p: float = 2.0,
                     complex_field: bool = False) -> TruncVector:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected a vector object")
    _check_keys(data, {"dim", "entries"}, context)
    dim = int(_req(data, "dim", context))
    entries = _req(data, "entries", context)
    coords = np.zeros(dim, dtype=np.complex128 if complex_field else np.float64)
    for entry in entries:
        if len(entry) == 2:
            i, val = entry
            value = float(val)
        elif len(entry) == 3:
            i, re, im = entry
            value = complex(float(re), float(im))
            if not complex_field and im != 0:
                raise ConfigError(f"{context}: complex entry in a real experiment")
        else:
            raise ConfigError(f"{context}: vector entries are [index, value] "
                              "or [index, re, im]")
        i = int(i)
        if not 0 <= i < dim:
            raise ConfigError(f"{context}: entry index {i} outside [0, {dim})")
        coords[i] = value
    return TruncVector(coords, p=p)


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


def _weight_to_json(weight):
    if isinstance(weight, tuple):
        return [scalar_to_json(w) for w in weight]
    return scalar_to_json(weight)


def _weight_from_json(obj, context):
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        return tuple(scalar_from_json(w, context) for w in obj)
    if isinstance(obj, list) and len(obj) == 2 and isinstance(obj[0], (int, float)):
        # Ambiguous two-element list reads as one complex scalar.
        return scalar_from_json(obj, context)
    if isinstance(obj, list):
        return tuple(scalar_from_json(w, context) for w in obj)
    return scalar_from_json(obj, context)


def op_to_dict(op: OperatorSpec) -> dict:
    if isinstance(op, BackwardShift):
        return {"kind": "backward_shift", "weight": _weight_to_json(op.weight)}
    if isinstance(op, ForwardShift):
        return {"kind": "forward_shift", "weight": _weight_to_json(op.weight)}
    if isinstance(op, Scale):
        return {"kind": "scale", "factor": scalar_to_json(op.factor),
                "inner": op_to_dict(op.inner)}
    if isinstance(op, DirectSum):
        return {"kind": "direct_sum", "left": op_to_dict(op.left),
                "right": op_to_dict(op.right), "split": op.split}
    if isinstance(op, Dense):
        if np.iscomplexobj(op.matrix):
            rows = [[[float(c.real), float(c.imag)] for c in row]
                    for row in op.matrix]
        else:
            rows = [[float(c) for c in row] for row in op.matrix]
        return {"kind": "dense", "matrix": rows}
    if isinstance(op, Identity):
        return {"kind": "identity"}
    raise ConfigError(f"cannot serialize operator {type(op).__name__}")


def op_from_dict(data: dict, context: str = "operator") -> OperatorSpec:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected an operator object")
    kind = _req(data, "kind", context)
    if kind == "backward_shift":
        _check_keys(data, {"kind", "weight"}, context)
        return BackwardShift(_weight_from_json(data.get("weight", 1.0), context))
    if kind == "forward_shift":
        _check_keys(data, {"kind", "weight"}, context)
        return ForwardShift(_weight_from_json(data.get("weight", 1.0), context))
    if kind == "scale":
        _check_keys(data, {"kind", "factor", "inner"}, context)
        return Scale(scalar_from_json(_req(data, "factor", context), context),
                     op_from_dict(_req(data, "inner", context), context + ".inner"))
    if kind == "direct_sum":
        _check_keys(data, {"kind", "left", "right", "split"}, context)
        return DirectSum(op_from_dict(_req(data, "left", context), context + ".left"),
                         op_from_dict(_req(data, "right", context), context + ".right"),
                         split=int(_req(data, "split", context)))
    if kind == "dense":
        _check_keys(data, {"kind", "matrix"}, context)
        rows = _req(data, "matrix", context)
        parsed = [[scalar_from_json(c, context) for c in row] for row in rows]
        return Dense(np.asarray(parsed))
    if kind == "identity":
        _check_keys(data, {"kind"}, context)
        return Identity()
    raise ConfigError(f"{context}: unknown operator kind {kind!r}")


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


def subspace_to_dict(spec: SubspaceSpec) -> dict:
    if isinstance(spec, IndexSet):
        return {"kind": "index_set", "indices": list(spec.indices)}
    if isinstance(spec, IntervalFamily):
        return {"kind": "interval_family", "starts": list(spec.starts),
                "ends": list(spec.ends)}
    if isinstance(spec, ParityZero):
        return {"kind": "parity_zero", "parity": spec.parity}
    if isinstance(spec, RecursiveSpan):
        return {"kind": "recursive_span", "offsets": list(spec.n_seq),
                "depth": spec.depth, "shift_weight": spec.shift_weight}
    if isinstance(spec, DirectSumFactor):
        out = {"kind": "direct_sum_factor", "position": spec.position,
               "split": spec.split}
        if spec.inner is not None:
            out["inner"] = subspace_to_dict(spec.inner)
        return out
    raise ConfigError(f"cannot serialize subspace {type(spec).__name__}")


def subspace_from_dict(data: dict, context: str = "subspace") -> SubspaceSpec:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected a subspace object")
    kind = _req(data, "kind", context)
    try:
        if kind == "index_set":
            _check_keys(data, {"kind", "indices"}, context)
            return IndexSet(tuple(int(i) for i in _req(data, "indices", context)))
        if kind == "interval_family":
            _check_keys(data, {"kind", "starts", "ends"}, context)
            return IntervalFamily(tuple(int(i) for i in _req(data, "starts", context)),
                                  tuple(int(i) for i in _req(data, "ends", context)))
        if kind == "parity_zero":
            _check_keys(data, {"kind", "parity"}, context)
            return ParityZero(str(_req(data, "parity", context)))
        if kind == "recursive_span":
            _check_keys(data, {"kind", "offsets", "depth", "shift_weight"}, context)
            return RecursiveSpan(tuple(int(i) for i in _req(data, "offsets", context)),
                                 depth=int(_req(data, "depth", context)),
                                 shift_weight=float(data.get("shift_weight", 0.5)))
        if kind == "direct_sum_factor":
            _check_keys(data, {"kind", "position", "split", "inner"}, context)
            inner = data.get("inner")
            return DirectSumFactor(
                position=int(_req(data, "position", context)),
                split=int(_req(data, "split", context)),
                inner=None if inner is None else subspace_from_dict(inner, context + ".inner"))
    except ValueError as err:
        raise ConfigError(f"{context}: {err}") from err
    raise ConfigError(f"{context}: unknown subspace kind {kind!r}")


# ---------------------------------------------------------------------------
# Polynomial families and explicit sequences
# ---------------------------------------------------------------------------


def family_to_dict(family: PolynomialFamily) -> dict:
    if isinstance(family, Monomials):
        return {"kind": "monomials", "max_degree": family.max_degree}
    if isinstance(family, CesaroMeans):
        return {"kind": "cesaro_means", "max_degree": family.max_degree}
    if isinstance(family, SimplexGrid):
        return {"kind": "simplex_grid", "degree": family.degree,
                "resolution": family.resolution}
    if isinstance(family, RandomSimplex):
        return {"kind": "random_simplex", "degree": family.degree,
                "count": family.count, "seed": family.seed}
    raise ConfigError(f"cannot serialize family {type(family).__name__}")


def family_from_dict(data: dict, context: str = "family") -> PolynomialFamily:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected a family object")
    kind = _req(data, "kind", context)
    try:
        if kind == "monomials":
            _check_keys(data, {"kind", "max_degree"}, context)
            return Monomials(int(_req(data, "max_degree", context)))
        if kind == "cesaro_means":
            _check_keys(data, {"kind", "max_degree"}, context)
            return CesaroMeans(int(_req(data, "max_degree", context)))
        if kind == "simplex_grid":
            _check_keys(data, {"kind", "degree", "resolution"}, context)
            return SimplexGrid(int(_req(data, "degree", context)),
                               int(_req(data, "resolution", context)))
        if kind == "random_simplex":
            _check_keys(data, {"kind", "degree", "count", "seed"}, context)
            return RandomSimplex(int(_req(data, "degree", context)),
                                 int(_req(data, "count", context)),
                                 int(_req(data, "seed", context)))
    except ValueError as err:
        raise ConfigError(f"{context}: {err}") from err
    raise ConfigError(f"{context}: unknown family kind {kind!r}")


def polys_to_dict(polys: Sequence[ConvexPolynomial]) -> dict:
    degrees = []
    for P in polys:
        profile = P.degree_profile()
        if len(profile) == 1 and P.coeffs[profile[0]] == 1.0:
            degrees.append(profile[0])
        else:
            degrees = None
            break
    if degrees is not None:
        return {"kind": "monomials_at", "degrees": degrees}
    return {"kind": "explicit",
            "coefficients": [list(P.coeffs) for P in polys]}


def polys_from_dict(data: dict, context: str = "polys",
                    allow_signed: bool = False) -> Tuple[ConvexPolynomial, ...]:
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected a polynomial-sequence object")
    kind = _req(data, "kind", context)
    try:
        if kind == "monomials_at":
            _check_keys(data, {"kind", "degrees"}, context)
            return tuple(ConvexPolynomial.monomial(int(d))
                         for d in _req(data, "degrees", context))
        if kind == "explicit":
            _check_keys(data, {"kind", "coefficients"}, context)
            return tuple(ConvexPolynomial(tuple(float(c) for c in row),
                                          allow_signed=allow_signed)
                         for row in _req(data, "coefficients", context))
    except ValueError as err:
        raise ConfigError(f"{context}: {err}") from err
    raise ConfigError(f"{context}: unknown polynomial-sequence kind {kind!r}")


def recovery_to_dict(rule) -> Optional[dict]:
    if rule is None:
        return None
    if isinstance(rule, ShiftRecovery):
        return {"kind": "shift", "scale": scalar_to_json(rule.scale)}
    if isinstance(rule, ExplicitRecovery):
        return {"kind": "explicit",
                "vectors": [None if v is None else vector_to_dict(v)
                            for v in rule.vectors]}
    raise ConfigError(f"cannot serialize recovery rule {type(rule).__name__}")


def recovery_from_dict(data, context: str, p: float,
                       complex_field: bool):
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ConfigError(f"{context}: expected a recovery object or null")
    kind = _req(data, "kind", context)
    if kind == "shift":
        _check_keys(data, {"kind", "scale"}, context)
        return ShiftRecovery(scalar_from_json(_req(data, "scale", context), context))
    if kind == "explicit":
        _check_keys(data, {"kind", "vectors"}, context)
        vectors = tuple(
            None if v is None else vector_from_dict(v, context, p, complex_field)
            for v in _req(data, "vectors", context))
        return ExplicitRecovery(vectors)
    raise ConfigError(f"{context}: unknown recovery kind {kind!r}")


# ---------------------------------------------------------------------------
# Experiment configuration
# ---------------------------------------------------------------------------


@dataclass
class Tolerances:
    membership: float = 1e-9
    convergence: float = 1e-6
    epsilon: float = 1e-2


@dataclass
class DensityBlock:
    candidate: Union[TruncVector, str]
    targets: Union[Tuple[TruncVector, ...], str] = "default"
    target_count: int = 32
    target_radius: float = 1.0
    include_outside: bool = False
    workers: int = 1


@dataclass
class CriterionBlock:
    X: Tuple[TruncVector, ...]
    Y: Tuple[TruncVector, ...]
    polys: Tuple[ConvexPolynomial, ...]
    recovery: Optional[object] = None


@dataclass
class TransitivityBlock:
    pairs: Tuple[BallPair, ...]
    samples_per_ball: int = 8


@dataclass
class BuildBlock:
    j_max: int
    c: float = 1.0
    k_step: int = 64


@dataclass
class ExperimentConfig:
    dim: int
    operator: OperatorSpec
    version: int = CONFIG_VERSION
    scalar_field: str = "real"
    p: float = 2.0
    seed: int = 0
    horizon: Optional[int] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    subspace: Optional[SubspaceSpec] = None
    family: Optional[PolynomialFamily] = None
    allow_signed_coefficients: bool = False
    label: Optional[str] = None
    density: Optional[DensityBlock] = None
    criterion: Optional[CriterionBlock] = None
    transitivity: Optional[TransitivityBlock] = None
    build: Optional[BuildBlock] = None

    @property
    def complex_field(self) -> bool:
        return self.scalar_field == "complex"

    def criterion_instance(self) -> CriterionInstance:
        if self.criterion is None:
            raise ConfigError("this run needs a 'criterion' block")
        if self.subspace is None:
            raise ConfigError("this run needs a 'subspace' block")
        return CriterionInstance(
            op=self.operator,
            subspace=self.subspace,
            dim=self.dim,
            X=self.criterion.X,
            Y=self.criterion.Y,
            polys=self.criterion.polys,
            recovery=self.criterion.recovery,
            membership_rtol=self.tolerances.membership,
        )


_TOP_KEYS = {"version", "scalar_field", "dim", "p", "seed", "horizon",
             "tolerances", "operator", "subspace", "family",
             "allow_signed_coefficients", "label", "density", "criterion",
             "transitivity", "build"}


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object at top level")
    _check_keys(data, _TOP_KEYS, "config")
    version = int(data.get("version", CONFIG_VERSION))
    if version != CONFIG_VERSION:
        raise ConfigError(f"config: unsupported version {version}")
    scalar_field = data.get("scalar_field", "real")
    if scalar_field not in ("real", "complex"):
        raise ConfigError("config: scalar_field must be 'real' or 'complex'")
    complex_field = scalar_field == "complex"
    dim = int(_req(data, "dim", "config"))
    if dim < 1:
        raise ConfigError("config: dim must be a positive integer")
    p = float(data.get("p", 2.0))
    seed = int(data.get("seed", 0))
    horizon = data.get("horizon")
    horizon = None if horizon is None else int(horizon)
    tol_data = data.get("tolerances", {})
    _check_keys(tol_data, {"membership", "convergence", "epsilon"},
                "config.tolerances")
    tolerances = Tolerances(
        membership=float(tol_data.get("membership", 1e-9)),
        convergence=float(tol_data.get("convergence", 1e-6)),
        epsilon=float(tol_data.get("epsilon", 1e-2)),
    )
    try:
        operator = op_from_dict(_req(data, "operator", "config"))
    except ValueError as err:
        raise ConfigError(f"config.operator: {err}") from err
    subspace = None
    if data.get("subspace") is not None:
        subspace = subspace_from_dict(data["subspace"])
    family = None
    if data.get("family") is not None:
        family = family_from_dict(data["family"])
    allow_signed = bool(data.get("allow_signed_coefficients", False))

    def _vec(obj, context):
        return vector_from_dict(obj, context, p, complex_field)

    density = None
    if data.get("density") is not None:
        block = data["density"]
        _check_keys(block, {"candidate", "targets", "target_count",
                            "target_radius", "include_outside", "workers"},
                    "config.density")
        cand = _req(block, "candidate", "config.density")
        candidate = cand if cand == "build" else _vec(cand, "config.density.candidate")
        targets_obj = block.get("targets", "default")
        if targets_obj == "default":
            targets = "default"
        else:
            targets = tuple(_vec(t, "config.density.targets") for t in targets_obj)
        density = DensityBlock(
            candidate=candidate,
            targets=targets,
            target_count=int(block.get("target_count", 32)),
            target_radius=float(block.get("target_radius", 1.0)),
            include_outside=bool(block.get("include_outside", False)),
            workers=int(block.get("workers", 1)),
        )
    criterion = None
    if data.get("criterion") is not None:
        block = data["criterion"]
        _check_keys(block, {"X", "Y", "polys", "recovery"}, "config.criterion")
        criterion = CriterionBlock(
            X=tuple(_vec(v, "config.criterion.X") for v in _req(block, "X", "config.criterion")),
            Y=tuple(_vec(v, "config.criterion.Y") for v in _req(block, "Y", "config.criterion")),
            polys=polys_from_dict(_req(block, "polys", "config.criterion"),
                                  "config.criterion.polys", allow_signed),
            recovery=recovery_from_dict(block.get("recovery"),
                                        "config.criterion.recovery", p, complex_field),
        )
    transitivity = None
    if data.get("transitivity") is not None:
        block = data["transitivity"]
        _check_keys(block, {"pairs", "samples_per_ball"}, "config.transitivity")
        pairs = []
        for i, pair in enumerate(_req(block, "pairs", "config.transitivity")):
            _check_keys(pair, {"u_center", "v_center", "radius"},
                        f"config.transitivity.pairs[{i}]")
            pairs.append(BallPair(
                u_center=_vec(_req(pair, "u_center", "pair"), "pair.u_center"),
                v_center=_vec(_req(pair, "v_center", "pair"), "pair.v_center"),
                radius=float(_req(pair, "radius", "pair")),
            ))
        transitivity = TransitivityBlock(
            pairs=tuple(pairs),
            samples_per_ball=int(block.get("samples_per_ball", 8)),
        )
    build = None
    if data.get("build") is not None:
        block = data["build"]
        _check_keys(block, {"j_max", "c", "k_step"}, "config.build")
        build = BuildBlock(
            j_max=int(_req(block, "j_max", "config.build")),
            c=float(block.get("c", 1.0)),
            k_step=int(block.get("k_step", 64)),
        )
    return ExperimentConfig(
        dim=dim, operator=operator, version=version, scalar_field=scalar_field,
        p=p, seed=seed, horizon=horizon, tolerances=tolerances,
        subspace=subspace, family=family,
        allow_signed_coefficients=allow_signed,
        label=data.get("label"),
        density=density, criterion=criterion, transitivity=transitivity,
        build=build,
    )


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out: dict = {
        "version": cfg.version,
        "scalar_field": cfg.scalar_field,
        "dim": cfg.dim,
        "p": cfg.p,
        "seed": cfg.seed,
        "tolerances": {
            "membership": cfg.tolerances.membership,
            "convergence": cfg.tolerances.convergence,
            "epsilon": cfg.tolerances.epsilon,
        },
        "operator": op_to_dict(cfg.operator),
    }
    if cfg.horizon is not None:
        out["horizon"] = cfg.horizon
    if cfg.subspace is not None:
        out["subspace"] = subspace_to_dict(cfg.subspace)
    if cfg.family is not None:
        out["family"] = family_to_dict(cfg.family)
    if cfg.allow_signed_coefficients:
        out["allow_signed_coefficients"] = True
    if cfg.label is not None:
        out["label"] = cfg.label
    if cfg.density is not None:
        block: dict = {"candidate": ("build" if cfg.density.candidate == "build"
                                     else vector_to_dict(cfg.density.candidate))}
        if cfg.density.targets == "default":
            block["targets"] = "default"
            block["target_count"] = cfg.density.target_count
            block["target_radius"] = cfg.density.target_radius
        else:
            block["targets"] = [vector_to_dict(t) for t in cfg.density.targets]
        if cfg.density.include_outside:
            block["include_outside"] = True
        if cfg.density.workers != 1:
            block["workers"] = cfg.density.workers
        out["density"] = block
    if cfg.criterion is not None:
        out["criterion"] = {
            "X": [vector_to_dict(v) for v in cfg.criterion.X],
            "Y": [vector_to_dict(v) for v in cfg.criterion.Y],
            "polys": polys_to_dict(cfg.criterion.polys),
            "recovery": recovery_to_dict(cfg.criterion.recovery),
        }
    if cfg.transitivity is not None:
        out["transitivity"] = {
            "pairs": [{"u_center": vector_to_dict(p_.u_center),
                       "v_center": vector_to_dict(p_.v_center),
                       "radius": p_.radius} for p_ in cfg.transitivity.pairs],
            "samples_per_ball": cfg.transitivity.samples_per_ball,
        }
    if cfg.build is not None:
        out["build"] = {"j_max": cfg.build.j_max, "c": cfg.build.c,
                        "k_step": cfg.build.k_step}
    return out


def dumps_config(cfg: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"


def loads_config(text: str) -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config: invalid JSON ({err})") from err
    return config_from_dict(data)


def load_config(path) -> ExperimentConfig:
    from pathlib import Path
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"config: cannot read {path}: {err}") from err
    return loads_config(text)


# ---------------------------------------------------------------------------
# Gallery entries as configs
# ---------------------------------------------------------------------------


def entry_to_config(entry) -> ExperimentConfig:
    """Runnable config equivalent of a gallery entry."""
    complex_field = any(
        np.iscomplexobj(v.coords)
        for v in (entry.instance.Y if entry.instance is not None else ()))
    criterion = None
    build = None
    density = None
    if entry.instance is not None:
        inst = entry.instance
        criterion = CriterionBlock(X=inst.X, Y=inst.Y, polys=inst.polys,
                                   recovery=inst.recovery)
        if entry.j_max > 0:
            build = BuildBlock(j_max=entry.j_max, c=entry.c)
        if entry.expected.density is not None:
            density = DensityBlock(candidate="build", targets=inst.Y)
    if entry.notes.get("candidate") is not None:
        split = entry.notes["split"]
        density = DensityBlock(
            candidate=entry.notes["candidate"],
            targets=tuple(TruncVector.basis(j, entry.dim)
                          for j in range(min(split, 4))))
    transitivity = None
    if entry.pairs:
        transitivity = TransitivityBlock(pairs=entry.pairs,
                                         samples_per_ball=entry.samples_per_ball)
    return ExperimentConfig(
        dim=entry.dim,
        operator=entry.op,
        scalar_field="complex" if complex_field else "real",
        seed=entry.seed,
        horizon=entry.horizon if entry.horizon > 0 else None,
        tolerances=Tolerances(convergence=entry.tol, epsilon=entry.epsilon),
        subspace=entry.subspace,
        family=entry.family,
        label=entry.name,
        density=density,
        criterion=criterion,
        transitivity=transitivity,
        build=build,
    )
