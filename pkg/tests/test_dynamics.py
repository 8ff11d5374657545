"""Orbits, density scoring, invariance checks and transitivity search."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcyclic import (BackwardShift, BallPair, BasisIndexSet,
                          ConvexPolynomial, Dense, DirectSum, Identity,
                          IndexSet, Monomials, ParityZero, Scale, SimplexGrid,
                          TargetOutsideSubspace, TruncVector, Verdict,
                          build_cyclic_vector, density_score, eval_poly,
                          family_members, invariance_check,
                          materialize_subspace, norm, orbit_segment,
                          sample_ball, transitivity_search)
from convexcyclic.dynamics import BallCenterOutsideSubspace
from convexcyclic.gallery import entry_example_5_4
from oracles import dense_eval

TWO_B = Scale(2.0, BackwardShift())


class TestOrbit:
    def test_identity_family_returns_input(self):
        x = TruncVector(np.array([0.5, 0.25, 0.0]))
        orbit = orbit_segment(TWO_B, x, Monomials(0))
        assert len(orbit) == 1
        assert np.array_equal(orbit[0].coords, x.coords)

    def test_monomials_on_basis(self):
        orbit = orbit_segment(TWO_B, TruncVector.basis(3, 8), Monomials(3))
        expected = [(3, 1.0), (2, 2.0), (1, 4.0), (0, 8.0)]
        for w, (idx, val) in zip(orbit, expected):
            target = np.zeros(8)
            target[idx] = val
            assert np.array_equal(w.coords, target)
            oracle = dense_eval(ConvexPolynomial.monomial(expected.index((idx, val))),
                                TWO_B, TruncVector.basis(3, 8))
            assert np.allclose(w.coords, oracle, rtol=1e-12, atol=0)

    def test_direct_sum_confinement(self):
        op = DirectSum(TWO_B, Identity(), split=4)
        x = TruncVector(np.array([0.1, 0.7, 0.2, 0.4, 0, 0, 0, 0.0]))
        for w in orbit_segment(op, x, SimplexGrid(3, 3)):
            assert np.all(w.coords[4:] == 0)


class TestDensity:
    def test_identity_member_target_hits_exactly(self):
        m = materialize_subspace(ParityZero("even"), 8)
        x = TruncVector.basis(1, 8)
        report = density_score(TWO_B, x, m, Monomials(2), [x], epsilon=1e-6)
        assert report.verdict == Verdict.DENSE_AT_SCALE
        assert report.per_target[0].best_distance == 0.0
        assert report.per_target[0].witness.degree == 0

    def test_identity_operator_cannot_cover(self):
        m = materialize_subspace(IndexSet((1, 3)), 6)
        x = TruncVector.basis(1, 6)
        target = TruncVector.basis(3, 6)
        report = density_score(Identity(), x, m, Monomials(4), [target],
                               epsilon=0.5)
        assert math.isclose(report.per_target[0].best_distance, math.sqrt(2),
                            rel_tol=1e-12)
        assert report.verdict == Verdict.NOT_COVERED_AT_SCALE

    def test_target_outside_subspace_rejected(self):
        m = materialize_subspace(ParityZero("even"), 8)
        with pytest.raises(TargetOutsideSubspace):
            density_score(TWO_B, TruncVector.basis(1, 8), m, Monomials(2),
                          [TruncVector.basis(2, 8)], epsilon=0.5)

    def test_points_outside_subspace_excluded(self):
        # The odd-degree orbit points flip parity and may not serve as
        # witnesses unless explicitly included.
        m = materialize_subspace(ParityZero("even"), 8)
        x = TruncVector.basis(3, 8)
        target = 2.0 * TruncVector.basis(2, 8) + TruncVector.basis(1, 8)
        with pytest.raises(TargetOutsideSubspace):
            density_score(TWO_B, x, m, Monomials(3), [target], epsilon=1e-3)
        inside = density_score(TWO_B, x, m, Monomials(3),
                               [4.0 * TruncVector.basis(1, 8)], epsilon=1e-9)
        assert inside.per_target[0].best_distance == 0.0
        assert inside.per_target[0].witness.degree == 2
        assert inside.admissible_orbit_size < inside.orbit_size

    def test_built_vector_covers_small_sample(self):
        # Builder-made candidate over the even-zero subspace: both targets
        # approximated within 1e-3 using even monomials of order <= 8.
        entry = entry_example_5_4()
        inst = entry.instance
        reduced = type(inst)(op=inst.op, subspace=inst.subspace, dim=inst.dim,
                             X=inst.X[:2], Y=inst.Y[:2], polys=inst.polys,
                             recovery=inst.recovery)
        result = build_cyclic_vector(reduced, j_max=2, c=0.01)
        m = materialize_subspace(inst.subspace, inst.dim)
        report = density_score(inst.op, result.x, m, Monomials(16),
                               list(reduced.Y), epsilon=1e-3)
        assert report.verdict == Verdict.DENSE_AT_SCALE
        assert all(s.witness.degree <= 16 for s in report.per_target)

    def test_witness_replay(self):
        m = materialize_subspace(ParityZero("even"), 12)
        x = TruncVector.basis(5, 12) + 0.5 * TruncVector.basis(7, 12)
        targets = [TruncVector.basis(1, 12), TruncVector.basis(3, 12)]
        report = density_score(TWO_B, x, m, Monomials(8), targets, epsilon=10.0)
        for target, score in zip(targets, report.per_target):
            replay = norm(eval_poly(score.witness, TWO_B, x) - target)
            assert abs(replay - score.best_distance) <= 1e-10


class TestInvariance:
    def test_even_monomial_preserves_parity(self):
        m = materialize_subspace(ParityZero("even"), 16)
        res = invariance_check(ConvexPolynomial.monomial(2), TWO_B, m)
        assert res.invariant
        assert res.max_residual == 0.0

    def test_odd_monomial_flips_parity(self):
        m = materialize_subspace(ParityZero("even"), 16)
        res = invariance_check(ConvexPolynomial.monomial(1), TWO_B, m)
        assert not res.invariant
        assert res.violating_basis_index == 1  # image lands on even index 0

    def test_recursive_span_violation_lands_on_two(self):
        from convexcyclic import RecursiveSpan
        m = materialize_subspace(RecursiveSpan((0, 1, 3, 9), depth=2), 8)
        assert m.indices == (0, 1, 3, 4)
        res = invariance_check(ConvexPolynomial.monomial(2), TWO_B, m)
        assert not res.invariant
        assert res.violating_basis_index == 4
        image = eval_poly(ConvexPolynomial.monomial(2), TWO_B,
                          TruncVector.basis(4, 8))
        assert image.coords[2] != 0.0

    def test_composition_of_invariant_polys(self):
        m = materialize_subspace(ParityZero("even"), 24)
        P = ConvexPolynomial((0.5, 0.0, 0.5))
        Q = ConvexPolynomial((0.25, 0.0, 0.5, 0.0, 0.25))
        from convexcyclic import compose_polys
        assert invariance_check(P, TWO_B, m).invariant
        assert invariance_check(Q, TWO_B, m).invariant
        assert invariance_check(compose_polys(P, Q), TWO_B, m).invariant


class TestTransitivity:
    def test_same_ball_found_by_identity(self):
        m = materialize_subspace(ParityZero("even"), 8)
        x = TruncVector.basis(3, 8)
        pair = BallPair(x, x, 0.25)
        report = transitivity_search(TWO_B, m, [pair], Monomials(2),
                                     samples_per_ball=4, seed=3)
        assert report.per_pair[0].found
        assert report.per_pair[0].witness.degree == 0
        assert report.per_pair[0].invariance_residual >= 0.0

    def test_center_outside_subspace_rejected(self):
        m = materialize_subspace(ParityZero("even"), 8)
        bad = TruncVector.basis(2, 8)
        with pytest.raises(BallCenterOutsideSubspace):
            transitivity_search(TWO_B, m, [BallPair(bad, bad, 0.1)],
                                Monomials(1))

    def test_brute_force_parity_dim_four(self):
        rng = np.random.default_rng(21)
        mat = 0.8 * rng.standard_normal((4, 4))
        op = Dense(mat)
        m = materialize_subspace(IndexSet((0, 1, 2)), 4)
        family = SimplexGrid(2, 3)
        pairs = []
        for _ in range(4):
            u = np.zeros(4)
            v = np.zeros(4)
            u[:3] = rng.standard_normal(3)
            v[:3] = rng.standard_normal(3)
            pairs.append(BallPair(TruncVector(u), TruncVector(v),
                                  float(rng.uniform(0.5, 2.0))))
        report = transitivity_search(op, m, pairs, family,
                                     samples_per_ball=5, seed=13)

        # Brute-force oracle over the same grid and samples, evaluated
        # through dense matrices instead of iterated application.
        from convexcyclic.spaces import membership_tolerance
        for pair, got in zip(pairs, report.per_pair):
            found = False
            idx = pairs.index(pair)
            samples = sample_ball(pair.v_center, m, pair.radius, 5,
                                  13 + 1000003 * idx)
            for P in family_members(family):
                for v in samples:
                    w = dense_eval(P, op, v)
                    off = np.where(m.mask(), 0.0, w)
                    wvec = TruncVector(w)
                    if np.linalg.norm(off) > membership_tolerance(wvec):
                        continue
                    if np.linalg.norm(w - pair.u_center.coords) <= pair.radius:
                        found = True
                        break
                if found:
                    break
            assert found == got.found

    def test_transitivity_positive_implies_density_on_parity_entry(self):
        # Witnesses for every constructed transit pair, plus the criterion
        # builder's candidate covering the same sample at matching epsilon.
        entry = entry_example_5_4()
        m = materialize_subspace(entry.subspace, entry.dim)
        report = transitivity_search(entry.op, m, list(entry.pairs),
                                     entry.family,
                                     samples_per_ball=entry.samples_per_ball,
                                     seed=entry.seed)
        assert report.all_found()
        result = build_cyclic_vector(entry.instance, entry.j_max, entry.c)
        density = density_score(entry.op, result.x, m, entry.family,
                                list(entry.instance.Y), entry.epsilon)
        assert density.verdict == Verdict.DENSE_AT_SCALE


# ---------------------------------------------------------------------------
# Property tests
# ---------------------------------------------------------------------------


@given(st.integers(0, 6), st.integers(1, 4), st.integers(0, 2 ** 30))
@settings(max_examples=100, deadline=None)
def test_density_monotone_in_family(base_degree, extra, seed):
    rng = np.random.default_rng(seed)
    dim = 10
    m = materialize_subspace(IndexSet(tuple(range(6))), dim)
    coords = np.zeros(dim)
    coords[:6] = rng.standard_normal(6)
    x = TruncVector(coords)
    tcoords = np.zeros(dim)
    tcoords[:6] = rng.standard_normal(6)
    targets = [TruncVector(tcoords)]
    small = density_score(TWO_B, x, m, Monomials(base_degree), targets,
                          epsilon=1.0)
    large = density_score(TWO_B, x, m, Monomials(base_degree + extra), targets,
                          epsilon=1.0)
    for a, b in zip(small.per_target, large.per_target):
        assert b.best_distance <= a.best_distance + 1e-15


@given(st.integers(0, 2 ** 30), st.integers(2, 4))
@settings(max_examples=100, deadline=None)
def test_density_worker_determinism(seed, workers):
    rng = np.random.default_rng(seed)
    dim = 8
    m = materialize_subspace(ParityZero("even"), dim)
    coords = np.zeros(dim)
    coords[1::2] = rng.standard_normal(dim // 2)
    x = TruncVector(coords)
    targets = [TruncVector.basis(1, dim), TruncVector.basis(3, dim),
               TruncVector.basis(5, dim)]
    serial = density_score(TWO_B, x, m, Monomials(6), targets, epsilon=0.5)
    threaded = density_score(TWO_B, x, m, Monomials(6), targets, epsilon=0.5,
                             workers=workers)
    assert serial.verdict == threaded.verdict
    for a, b in zip(serial.per_target, threaded.per_target):
        assert a.best_distance == b.best_distance
        assert a.witness_index == b.witness_index
