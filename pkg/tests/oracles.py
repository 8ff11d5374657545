"""Independent dense-matrix oracles and seeded generators shared by tests.

The oracle path never goes through ``eval_poly``'s iterated application:
it materializes the operator matrix, forms the polynomial matrix with
explicit matrix powers and multiplies.
"""

import numpy as np

from convexcyclic import (BackwardShift, ConvexPolynomial, Dense, DirectSum,
                          ForwardShift, Identity, Scale, TruncVector, to_dense)


def dense_poly_matrix(P, op, dim):
    mat = to_dense(op, dim)
    acc = P.coeffs[0] * np.eye(dim, dtype=mat.dtype)
    power = np.eye(dim, dtype=mat.dtype)
    for a in P.coeffs[1:]:
        power = mat @ power
        acc = acc + a * power
    return acc


def dense_eval(P, op, v):
    return dense_poly_matrix(P, op, v.dim) @ v.coords


def random_convex_poly(rng, max_degree=6):
    degree = int(rng.integers(0, max_degree + 1))
    coeffs = rng.dirichlet(np.ones(degree + 1))
    return ConvexPolynomial(tuple(float(c) / float(np.sum(coeffs)) for c in coeffs))


def _random_weight(rng):
    w = float(rng.uniform(0.25, 2.0)) * float(rng.choice([-1.0, 1.0]))
    return w


def random_operator(rng, dim):
    """A random spec together with the forward-shift depth of each block.

    The depths let callers zero enough top coordinates that truncated
    forward shifts never overflow, keeping the matrix oracle faithful.
    """
    kind = rng.choice(["backward", "backward_weights", "forward", "scale",
                       "direct_sum", "dense", "identity"])
    if kind == "backward":
        return BackwardShift(_random_weight(rng)), [(0, dim, False)]
    if kind == "backward_weights":
        weights = tuple(_random_weight(rng) for _ in range(dim))
        return BackwardShift(weights), [(0, dim, False)]
    if kind == "forward":
        return ForwardShift(_random_weight(rng)), [(0, dim, True)]
    if kind == "scale":
        inner, blocks = random_operator(rng, dim)
        return Scale(float(rng.uniform(-2.0, 2.0)), inner), blocks
    if kind == "direct_sum" and dim >= 2:
        split = int(rng.integers(1, dim))
        left, lb = random_operator(rng, split)
        right, rb = random_operator(rng, dim - split)
        blocks = [(lo, hi, fwd) for lo, hi, fwd in lb]
        blocks += [(lo + split, hi + split, fwd) for lo, hi, fwd in rb]
        return DirectSum(left, right, split=split), blocks
    if kind == "dense":
        return Dense(rng.standard_normal((dim, dim))), [(0, dim, False)]
    return Identity(), [(0, dim, False)]


def random_vector(rng, dim, blocks, degree):
    """Random vector whose forward-shift blocks have clear headroom."""
    coords = rng.standard_normal(dim)
    for lo, hi, forward in blocks:
        if forward:
            top = min(degree, hi - lo)
            if top:
                coords[hi - top: hi] = 0.0
    return TruncVector(coords)


def random_triple(rng, dim, max_degree=6):
    op, blocks = random_operator(rng, dim)
    P = random_convex_poly(rng, max_degree)
    v = random_vector(rng, dim, blocks, P.degree)
    return op, P, v
