import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from partial_eraser import (
    Axis,
    AxisMismatch,
    Branch,
    DomainError,
    PartialMeasurementOp,
    TrackingMode,
    ZeroSurvival,
    apply_sequence,
    basis_state,
    basis_vector,
    click_probability,
    compose_same_axis,
    components_in,
    no_click_map,
    sample,
)
from partial_eraser.measurement import no_click_sequence_probability
from partial_eraser.polarization import amplitude_distance

from conftest import alphas, alphas_positive, balanced_states, branches, axes, polarization_states

DIAG = basis_state(Axis.Y, Branch.PLUS)
UP = basis_state(Axis.X, Branch.PLUS)
RIGHT = basis_state(Axis.X, Branch.MINUS)


def op(axis, branch, alpha):
    return PartialMeasurementOp(axis, branch, alpha)


def scaling_matrix_oracle(the_op):
    """Independent 2x2 branch-scaling map, built from outer products."""
    b = np.array(basis_vector(the_op.axis, the_op.branch))
    o = np.array(basis_vector(the_op.axis, the_op.branch.other()))
    return math.sqrt(the_op.alpha) * np.outer(b, b.conj()) + np.outer(o, o.conj())


def sequence_oracle(ops, state):
    """Fold the scaling matrices over the state vector and renormalize."""
    vec = np.array([state.amp_up, state.amp_right])
    for the_op in ops:
        vec = scaling_matrix_oracle(the_op) @ vec
    return vec / np.linalg.norm(vec)


def brute_force_cascade_weight(alpha, n_beams=100):
    """Surviving intensity of a measured diagonal photon, summed beam by
    beam over the graded mirror chain (no operator algebra involved)."""
    transmissions = [(n_beams - 1 - i) / (n_beams - i) for i in range(n_beams)]
    remaining = 0.5  # up-branch intensity of the diagonal state
    beams = []
    for t in transmissions:
        beams.append(remaining * (1.0 - t))
        remaining *= t
    n_detectors = round((1.0 - alpha) * n_beams)
    unmeasured_up = sum(beams[n_detectors:])
    return unmeasured_up + 0.5  # right branch is untouched


class TestNoClickMap:
    @pytest.mark.parametrize("alpha", [0.0, 0.1, 0.5, 99 / 100])
    def test_even_state_formula(self, alpha):
        state = no_click_map(op(Axis.X, Branch.PLUS, alpha), DIAG)
        assert state.amp_up == pytest.approx(math.sqrt(alpha / (1 + alpha)), abs=1e-12)
        assert state.amp_right == pytest.approx(math.sqrt(1 / (1 + alpha)), abs=1e-12)

    @given(polarization_states(), axes, branches)
    def test_identity_at_alpha_one(self, state, axis, branch):
        assert no_click_map(op(axis, branch, 1.0), state) is state

    def test_weighted_half_measurement(self):
        state = no_click_map(op(Axis.X, Branch.PLUS, 0.5), DIAG, TrackingMode.WEIGHTED)
        assert state.amp_up == pytest.approx(math.sqrt(0.5 / 1.5), abs=1e-12)
        assert state.amp_right == pytest.approx(math.sqrt(1 / 1.5), abs=1e-12)
        assert state.weight == pytest.approx(0.75, abs=1e-12)
        # oracle: beam-by-beam intensity bookkeeping over the mirror chain
        assert state.weight == pytest.approx(brute_force_cascade_weight(0.5), abs=1e-12)

    @given(st.floats(min_value=0.01, max_value=0.99))
    def test_weighted_weight_matches_beam_sum(self, alpha):
        n_detectors = round((1 - alpha) * 100)
        actual_alpha = (100 - n_detectors) / 100
        state = no_click_map(
            op(Axis.X, Branch.PLUS, actual_alpha), DIAG, TrackingMode.WEIGHTED
        )
        assert state.weight == pytest.approx(
            brute_force_cascade_weight(actual_alpha), abs=1e-12
        )

    def test_opposite_branch_state_untouched(self):
        state = no_click_map(op(Axis.X, Branch.PLUS, 0.3), RIGHT)
        assert state.amp_up == 0.0
        assert state.amp_right == 1.0

    def test_zero_survival(self):
        with pytest.raises(ZeroSurvival):
            no_click_map(op(Axis.X, Branch.PLUS, 0.0), UP)

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            op(Axis.X, Branch.PLUS, 1.2)
        with pytest.raises(DomainError):
            op(Axis.X, Branch.PLUS, -0.2)

    @given(polarization_states(), axes, branches, alphas_positive)
    def test_matches_matrix_oracle(self, state, axis, branch, alpha):
        the_op = op(axis, branch, alpha)
        expected = sequence_oracle([the_op], state)
        result = no_click_map(the_op, state)
        assert abs(result.amp_up - expected[0]) < 1e-12
        assert abs(result.amp_right - expected[1]) < 1e-12


class TestClickProbability:
    def test_single_detector_is_half_percent(self):
        assert click_probability(op(Axis.X, Branch.PLUS, 99 / 100), DIAG) == pytest.approx(
            0.005, abs=1e-15
        )

    def test_empty_branch_never_clicks(self):
        assert click_probability(op(Axis.X, Branch.PLUS, 0.4), RIGHT) == 0.0

    def test_half_measurement_quarter(self):
        assert click_probability(op(Axis.X, Branch.PLUS, 0.5), DIAG) == pytest.approx(
            0.25, abs=1e-15
        )

    def test_quarter_against_beam_level_sampling(self, rng):
        # oracle: photon lands on one of 200 equal beams; 50 carry detectors
        beams = rng.integers(0, 200, size=100_000)
        empirical = np.mean(beams < 50)
        sigma = math.sqrt(0.25 * 0.75 / 100_000)
        assert abs(empirical - 0.25) < 3 * sigma

    @given(polarization_states(), axes, branches, alphas)
    def test_complementarity_with_no_click(self, state, axis, branch, alpha):
        p_click = click_probability(op(axis, branch, alpha), state)
        assert 0.0 <= p_click <= 1.0 + 1e-12
        c_plus, c_minus = components_in(state, axis)
        c = c_plus if branch is Branch.PLUS else c_minus
        survival = alpha * abs(c) ** 2 + (1 - abs(c) ** 2)
        assert p_click + survival == pytest.approx(1.0, abs=1e-12)


class TestSample:
    def test_identity_never_clicks(self, rng):
        for _ in range(200):
            outcome = sample(op(Axis.X, Branch.PLUS, 1.0), DIAG, TrackingMode.NORMALIZED, rng)
            assert not outcome.clicked

    def test_complete_measurement_always_clicks(self, rng):
        for _ in range(200):
            outcome = sample(op(Axis.X, Branch.PLUS, 0.0), UP, TrackingMode.NORMALIZED, rng)
            assert outcome.clicked
            assert outcome.post_state.amp_up == 1.0

    def test_click_fraction_matches_probability(self, rng):
        n = 100_000
        clicks = sum(
            sample(op(Axis.X, Branch.PLUS, 0.5), DIAG, TrackingMode.NORMALIZED, rng).clicked
            for _ in range(n)
        )
        sigma = math.sqrt(0.25 * 0.75 / n)
        assert abs(clicks / n - 0.25) < 3 * sigma

    def test_recorded_probability_matches_analytic(self, rng):
        the_op = op(Axis.X, Branch.PLUS, 0.3)
        p_click = click_probability(the_op, DIAG)
        for _ in range(50):
            outcome = sample(the_op, DIAG, TrackingMode.NORMALIZED, rng)
            expected = p_click if outcome.clicked else 1.0 - p_click
            assert outcome.probability == pytest.approx(expected, abs=1e-12)


class TestComposition:
    def test_same_branch_alphas_multiply(self):
        composed = compose_same_axis(op(Axis.X, Branch.PLUS, 0.9), op(Axis.X, Branch.PLUS, 0.8))
        assert composed.axis is Axis.X
        assert composed.branch is Branch.PLUS
        assert composed.alpha == pytest.approx(0.72, abs=1e-15)

    def test_equal_opposite_is_identity(self):
        composed = compose_same_axis(op(Axis.X, Branch.MINUS, 0.4), op(Axis.X, Branch.PLUS, 0.4))
        assert composed.is_identity

    def test_unequal_opposite_reduces_to_ratio(self):
        composed = compose_same_axis(op(Axis.X, Branch.MINUS, 0.8), op(Axis.X, Branch.PLUS, 0.9))
        assert composed.branch is Branch.MINUS
        assert composed.alpha == pytest.approx(0.8 / 0.9, abs=1e-15)

    def test_axis_mismatch(self):
        with pytest.raises(AxisMismatch):
            compose_same_axis(op(Axis.X, Branch.PLUS, 0.5), op(Axis.Y, Branch.PLUS, 0.5))

    def test_double_complete_measurement_rejected(self):
        with pytest.raises(DomainError):
            compose_same_axis(op(Axis.X, Branch.PLUS, 0.0), op(Axis.X, Branch.MINUS, 0.0))

    @given(balanced_states(), axes, alphas_positive, alphas_positive)
    def test_composed_action_equals_sequential(self, state, axis, a, b):
        op1 = op(axis, Branch.PLUS, a)
        op2 = op(axis, Branch.MINUS, b)
        sequential = apply_sequence([op1, op2], state)
        composed = no_click_map(compose_same_axis(op2, op1), state)
        assert amplitude_distance(sequential, composed) < 1e-12

    @given(balanced_states(), axes, alphas_positive, alphas_positive)
    def test_same_axis_commutative(self, state, axis, a, b):
        op1 = op(axis, Branch.PLUS, a)
        op2 = op(axis, Branch.MINUS, b)
        one_way = apply_sequence([op1, op2], state)
        other_way = apply_sequence([op2, op1], state)
        assert amplitude_distance(one_way, other_way) < 1e-12


REVERSED_COUNTER_STRING = [
    op(Axis.X, Branch.PLUS, 0.9),
    op(Axis.Y, Branch.PLUS, 0.9),
    op(Axis.Z, Branch.PLUS, 0.9),
    op(Axis.Z, Branch.MINUS, 0.9),
    op(Axis.Y, Branch.MINUS, 0.9),
    op(Axis.X, Branch.MINUS, 0.9),
]

SAME_ORDER_COUNTER_STRING = [
    op(Axis.X, Branch.PLUS, 0.9),
    op(Axis.Y, Branch.PLUS, 0.9),
    op(Axis.Z, Branch.PLUS, 0.9),
    op(Axis.X, Branch.MINUS, 0.9),
    op(Axis.Y, Branch.MINUS, 0.9),
    op(Axis.Z, Branch.MINUS, 0.9),
]


class TestSequences:
    def test_empty_sequence_is_identity(self):
        assert apply_sequence([], DIAG) is DIAG

    def test_reverse_order_counter_string_restores_state(self):
        result = apply_sequence(REVERSED_COUNTER_STRING, DIAG)
        assert amplitude_distance(result, DIAG) < 1e-12

    @given(polarization_states())
    def test_reverse_order_counter_string_restores_any_state(self, state):
        result = apply_sequence(REVERSED_COUNTER_STRING, state)
        assert amplitude_distance(result, state) < 1e-12

    def test_same_order_counter_string_fails(self):
        result = apply_sequence(SAME_ORDER_COUNTER_STRING, DIAG)
        # oracle: independent matrix fold confirms the residual rotation
        expected = sequence_oracle(SAME_ORDER_COUNTER_STRING, DIAG)
        assert abs(result.amp_up - expected[0]) < 1e-12
        assert abs(result.amp_right - expected[1]) < 1e-12
        assert amplitude_distance(result, DIAG) > 1e-3

    @given(polarization_states(), st.lists(st.tuples(axes, branches, alphas_positive), max_size=4))
    def test_matches_matrix_oracle(self, state, raw_ops):
        ops = [op(axis, branch, alpha) for axis, branch, alpha in raw_ops]
        expected = sequence_oracle(ops, state)
        result = apply_sequence(ops, state)
        assert abs(result.amp_up - expected[0]) < 1e-11
        assert abs(result.amp_right - expected[1]) < 1e-11


class TestErasureAlgebra:
    @given(balanced_states(), alphas_positive)
    def test_erasure_identity(self, state, alpha):
        erased = apply_sequence(
            [op(Axis.X, Branch.PLUS, alpha), op(Axis.X, Branch.MINUS, alpha)], state
        )
        assert amplitude_distance(erased, state) < 1e-12

    @given(
        balanced_states(),
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=1.0),
    )
    def test_only_the_ratio_matters(self, state, base, ratio, scale):
        pair_one = [op(Axis.X, Branch.PLUS, base * ratio), op(Axis.X, Branch.MINUS, base)]
        pair_two = [
            op(Axis.X, Branch.PLUS, base * ratio * scale),
            op(Axis.X, Branch.MINUS, base * scale),
        ]
        one = apply_sequence(pair_one, state)
        two = apply_sequence(pair_two, state)
        assert amplitude_distance(one, two) < 1e-12

    @given(alphas_positive)
    def test_erasure_cost_in_weighted_mode(self, alpha):
        final = apply_sequence(
            [op(Axis.X, Branch.PLUS, alpha), op(Axis.X, Branch.MINUS, alpha)],
            DIAG,
            TrackingMode.WEIGHTED,
        )
        diag_component = components_in(final, Axis.Y)[0]
        weighted_amp = math.sqrt(final.weight) * abs(diag_component)
        assert weighted_amp == pytest.approx(math.sqrt(alpha), abs=1e-12)
        assert final.weight == pytest.approx(alpha, abs=1e-12)

    @given(balanced_states(), st.lists(st.tuples(axes, branches, alphas_positive), max_size=4))
    def test_weighted_weight_is_survival_probability(self, state, raw_ops):
        ops = [op(axis, branch, alpha) for axis, branch, alpha in raw_ops]
        weighted = apply_sequence(ops, state, TrackingMode.WEIGHTED)
        survival = no_click_sequence_probability(ops, state)
        assert weighted.weight == pytest.approx(state.weight * survival, abs=1e-12)


def walk_event_tree(ops, state):
    """All click/no-click branch probabilities of an op list (local oracle)."""
    probs = []

    def recurse(current, idx, prob):
        if idx == len(ops):
            probs.append(prob)
            return
        p_click = click_probability(ops[idx], current)
        if p_click > 0.0:
            probs.append(prob * p_click)
        if p_click < 1.0:
            recurse(no_click_map(ops[idx], current), idx + 1, prob * (1.0 - p_click))

    recurse(state, 0, 1.0)
    return probs


@settings(max_examples=60)
@given(polarization_states(), st.lists(st.tuples(axes, branches, alphas), min_size=1, max_size=5))
def test_probability_conservation_over_event_tree(state, raw_ops):
    ops = [op(axis, branch, alpha) for axis, branch, alpha in raw_ops]
    assert sum(walk_event_tree(ops, state)) == pytest.approx(1.0, abs=1e-9)
