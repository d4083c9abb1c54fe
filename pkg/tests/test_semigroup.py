import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from oracles import BENCH_Q, two_state_closed_form
from sgineq.lattice import LatticeElement, lattice_norm
from sgineq.reporting import all_passed
from sgineq.semigroup import (
    EvolveOverflowError,
    NegativeOffDiagonalError,
    NotSquareError,
    SemigroupOperator,
    TimeCapError,
    check_positivity_and_normalization,
    check_semigroup_axioms,
    estimate_generator,
    evolve,
    generator_from_json,
    generator_to_json,
    validate_generator,
)

# Frozen from the eigendecomposition of [[-1,1],[1,-1]] at t = 1:
# exp(-2) = 0.1353352832366127.
Z1_DIAG = 0.5676676416183064
Z1_OFF = 0.4323323583816936


def test_oracle_self_consistency():
    z = two_state_closed_form(1.0)
    assert abs(z[0, 0] - Z1_DIAG) <= 1e-16
    assert abs(z[0, 1] - Z1_OFF) <= 1e-16
    assert np.allclose(z.sum(axis=1), 1.0, atol=1e-15)


class TestValidate:
    def test_benchmark_is_conservative(self):
        gen = validate_generator(BENCH_Q)
        assert gen.conservative
        assert gen.dim == 2
        assert gen.sup_norm == 2.0

    def test_negative_off_diagonal_named(self):
        with pytest.raises(NegativeOffDiagonalError) as err:
            validate_generator([[0.0, -0.5], [0.0, 0.0]])
        assert "(0,1)" in str(err.value)

    def test_zero_matrix_valid(self):
        gen = validate_generator(np.zeros((3, 3)))
        assert gen.conservative

    def test_not_square(self):
        with pytest.raises(NotSquareError):
            validate_generator([[0.0, 1.0]])

    def test_conservative_classification_boundary(self):
        q = [[-1.0, 1.0 + 5e-13], [1.0, -1.0]]
        assert validate_generator(q).conservative
        q = [[-1.0, 1.0 + 5e-11], [1.0, -1.0]]
        assert not validate_generator(q).conservative

    def test_json_roundtrip(self):
        gen = validate_generator(BENCH_Q, name="bench")
        data = generator_to_json(gen)
        back = generator_from_json(data)
        assert back.name == "bench"
        assert np.array_equal(back.q, gen.q)


class TestEvolve:
    def test_zero_generator_identity(self):
        gen = validate_generator(np.zeros((4, 4)))
        op = evolve(gen, 3.7)
        assert np.array_equal(op.matrix, np.eye(4))
        assert op.trunc_error == 0.0

    def test_time_zero_identity(self):
        gen = validate_generator(BENCH_Q)
        assert np.array_equal(evolve(gen, 0.0).matrix, np.eye(2))

    @pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0, 10.0])
    def test_against_closed_form(self, t):
        gen = validate_generator(BENCH_Q)
        op = evolve(gen, t)
        assert np.max(np.abs(op.matrix - two_state_closed_form(t))) <= 1e-12

    def test_frozen_value_at_one(self):
        op = evolve(validate_generator(BENCH_Q), 1.0)
        assert abs(op.matrix[0, 0] - Z1_DIAG) <= 1e-13
        assert abs(op.matrix[1, 0] - Z1_OFF) <= 1e-13

    def test_nilpotent_generator_exact_polynomial(self):
        gen = validate_generator([[0.0, 1.0], [0.0, 0.0]])
        for t in (0.5, 1.0, 2.0):
            expect = np.array([[1.0, t], [0.0, 1.0]])
            assert np.max(np.abs(evolve(gen, t).matrix - expect)) <= 1e-14

    def test_stiff_time_still_stochastic(self):
        # rate * t = 800 forces the splitting path
        gen = validate_generator(BENCH_Q)
        op = evolve(gen, 400.0)
        assert np.max(np.abs(op.matrix - 0.5)) <= 1e-12
        assert np.max(np.abs(op.row_sums() - 1.0)) <= 1e-10
        assert op.matrix.min() >= 0.0

    def test_trunc_error_budget(self):
        gen = validate_generator(BENCH_Q)
        for t in (1.0, 400.0):
            op = evolve(gen, t)
            norm = np.max(np.sum(np.abs(op.matrix), axis=1))
            assert op.trunc_error <= 1e-14 * norm

    def test_time_cap(self):
        gen = validate_generator(BENCH_Q)  # norm 2
        with pytest.raises(TimeCapError):
            evolve(gen, 6000.0)

    def test_overflow_detected(self):
        gen = validate_generator([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(EvolveOverflowError):
            evolve(gen, 800.0)

    def test_negative_time_rejected(self):
        gen = validate_generator(BENCH_Q)
        with pytest.raises(ValueError):
            evolve(gen, -0.5)

    def test_scipy_cross_check(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 7))
            rates = rng.uniform(0, 1, size=(n, n))
            np.fill_diagonal(rates, 0.0)
            q = rates.copy()
            np.fill_diagonal(q, -rates.sum(axis=1))
            gen = validate_generator(q)
            for t in (0.3, 2.0):
                ours = evolve(gen, t).matrix
                ref = scipy.linalg.expm(t * q)
                assert np.max(np.abs(ours - ref)) <= 1e-11

    def test_scipy_cross_check_nonconservative(self):
        q = np.array([[0.0, 1.0], [0.5, -0.2]])
        gen = validate_generator(q)
        ours = evolve(gen, 1.5).matrix
        ref = scipy.linalg.expm(1.5 * q)
        assert np.max(np.abs(ours - ref)) <= 1e-11


def _random_conservative(rng, max_norm=10.0):
    n = int(rng.integers(2, 7))
    rates = rng.uniform(0, 1, size=(n, n))
    np.fill_diagonal(rates, 0.0)
    q = rates.copy()
    np.fill_diagonal(q, -rates.sum(axis=1))
    norm = np.max(np.sum(np.abs(q), axis=1))
    if norm > 0:
        q *= rng.uniform(0.2, 1.0) * max_norm / norm
    return validate_generator(q)


def test_structural_nonnegativity(rng):
    for _ in range(50):
        gen = _random_conservative(rng)
        t = float(rng.uniform(0, 5))
        assert evolve(gen, t).matrix.min() >= 0.0


def test_semigroup_law_random(rng):
    worst = 0.0
    for _ in range(200):
        gen = _random_conservative(rng)
        s = float(rng.uniform(0, 5))
        t = float(rng.uniform(0, 5))
        zs, zt, zst = evolve(gen, s), evolve(gen, t), evolve(gen, s + t)
        worst = max(worst, float(np.max(np.abs(zs.matrix @ zt.matrix - zst.matrix))))
    assert worst <= 1e-10


def test_row_stochastic_random(rng):
    for _ in range(50):
        gen = _random_conservative(rng)
        op = evolve(gen, float(rng.uniform(0, 5)))
        assert np.max(np.abs(op.row_sums() - 1.0)) <= 1e-10


def test_order_monotone(rng):
    gen = _random_conservative(rng)
    for _ in range(20):
        f = rng.uniform(-2, 2, size=gen.dim)
        g = f + rng.uniform(0, 1, size=gen.dim)
        z = evolve(gen, 1.3).matrix
        assert np.min(z @ g - z @ f) >= -1e-14


def test_positive_part_contraction_subconservative(rng):
    # row sums <= 0: leak mass from a conservative generator
    for _ in range(20):
        gen0 = _random_conservative(rng, max_norm=4.0)
        q = gen0.q.copy()
        q[np.diag_indices_from(q)] -= rng.uniform(0, 0.5, size=gen0.dim)
        gen = validate_generator(q)
        t = float(rng.uniform(0, 3))
        f = rng.uniform(-2, 2, size=gen.dim)
        zf = evolve(gen, t).matrix @ f
        assert np.max(np.maximum(zf, 0.0)) <= np.max(np.maximum(f, 0.0)) + 1e-12


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, 8), min_size=n, max_size=n), min_size=n, max_size=n
        )
    ),
    st.integers(0, 16),
)
def test_uniformization_properties(raw, tq):
    # integer rate matrices /4 give exactly representable generators
    rates = np.array(raw, dtype=float) / 4.0
    np.fill_diagonal(rates, 0.0)
    q = rates.copy()
    np.fill_diagonal(q, -rates.sum(axis=1))
    gen = validate_generator(q)
    op = evolve(gen, tq / 4.0)
    assert op.matrix.min() >= 0.0
    assert np.max(np.abs(op.row_sums() - 1.0)) <= 1e-10


class TestAxiomChecks:
    def test_benchmark_composition(self):
        gen = validate_generator(BENCH_Q)
        entries = check_semigroup_axioms(gen, 0.3, 0.7, f=LatticeElement([1.0, 0.0]))
        by_name = {e.name: e for e in entries}
        assert by_name["composition"].defect <= 1e-12
        assert all_passed(entries)

    def test_zero_generator_exact(self):
        gen = validate_generator(np.zeros((2, 2)))
        entries = check_semigroup_axioms(gen, 0.4, 1.1, f=LatticeElement([1.0, 0.0]))
        assert all(e.defect == 0.0 for e in entries if e.name != "continuity_sweep_decreasing")
        assert all_passed(entries)

    def test_continuity_sweep_first_order(self):
        gen = validate_generator(BENCH_Q)
        f = LatticeElement([1.0, 0.0])
        entries = check_semigroup_axioms(gen, 0.2, 0.9, f=f)
        sweep = [e for e in entries if e.name == "continuity_sweep_decreasing"]
        assert len(sweep) == 1 and sweep[0].passed
        # defect at h is h * ||Qf|| to first order
        h = 1e-3
        defect = lattice_norm(evolve(gen, h).apply(f) - f)
        first_order = h * lattice_norm(LatticeElement(gen.q @ f.values))
        assert abs(defect - first_order) <= 5e-6

    def test_normalization_and_modulus(self, bench_gen):
        f = LatticeElement([1.0, -1.0])
        entries = check_positivity_and_normalization(bench_gen, 1.0, f)
        by_name = {e.name: e for e in entries}
        assert by_name["normalization"].passed
        assert by_name["modulus_bound"].passed
        assert by_name["positive_part_contraction"].passed
        # closed form: Z|f| = e and |Zf| = exp(-2t) * e
        zf = evolve(bench_gen, 1.0).apply(f)
        assert np.max(np.abs(np.abs(zf.values) - math.exp(-2.0))) <= 1e-12

    def test_normalization_fails_for_positive_row_sum(self):
        gen = validate_generator([[0.5, 0.5], [0.0, 0.0]])
        entries = check_positivity_and_normalization(gen, 1.0, LatticeElement([1.0, 1.0]))
        by_name = {e.name: e for e in entries}
        assert not by_name["normalization"].passed


class TestGeneratorEstimate:
    def test_zero_generator(self):
        gen = validate_generator(np.zeros((2, 2)))
        assert estimate_generator(gen, 1e-3, LatticeElement([1.0, 0.0])) == 0.0

    def test_taylor_bound(self, bench_gen):
        f = LatticeElement([1.0, 0.0])
        assert estimate_generator(bench_gen, 1e-4, f) <= 2e-4

    def test_halving_ratio(self, bench_gen):
        f = LatticeElement([1.0, 0.0])
        d1 = estimate_generator(bench_gen, 1e-3, f)
        d2 = estimate_generator(bench_gen, 5e-4, f)
        assert 1.5 <= d1 / d2 <= 2.5

    def test_bad_step(self, bench_gen):
        with pytest.raises(ValueError):
            estimate_generator(bench_gen, 0.0, LatticeElement([1.0, 0.0]))


class TestOperatorSurface:
    def test_clamp_band(self):
        m = np.array([[1.0, -1e-13], [0.0, 1.0]])
        op = SemigroupOperator(m, t=0.0)
        assert op.matrix[0, 1] == 0.0

    def test_below_band_rejected(self):
        with pytest.raises(ValueError):
            SemigroupOperator(np.array([[1.0, -1e-6], [0.0, 1.0]]), t=0.0)

    def test_is_normalized_per_time(self, bench_gen):
        assert evolve(bench_gen, 2.2).is_normalized()
        leaky = validate_generator([[-1.0, 0.5], [0.0, 0.0]])
        assert not evolve(leaky, 1.0).is_normalized()

    def test_apply_dim_mismatch(self, bench_gen):
        op = evolve(bench_gen, 1.0)
        with pytest.raises(ValueError):
            op.apply(LatticeElement([1.0, 2.0, 3.0]))
