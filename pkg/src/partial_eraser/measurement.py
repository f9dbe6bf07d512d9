"""Partial polarization measurements: click statistics and no-click maps.

A partial measurement places detectors over a fraction of one branch of
the split wave function.  ``alpha`` is the *unmeasured* intensity fraction
of that branch: alpha = 1 is no measurement at all, alpha = 0 a complete
measurement.  Two things can happen:

* a detector clicks, with probability (1 - alpha) |<branch|psi>|^2; the
  state collapses onto the measured branch;
* no detector clicks.  The silence is itself information, and it reshapes
  the state: the measured branch amplitude is scaled by sqrt(alpha) and
  the state is renormalized.  On an even superposition of the up/right
  branches, measuring the up branch leaves

      sqrt(alpha / (1 + alpha)) |up> + sqrt(1 / (1 + alpha)) |right>.

Tracking modes: NORMALIZED renormalizes after every no-click event (the
conditional state of the survivors); WEIGHTED additionally multiplies the
state weight by the no-click probability, so the weight always equals the
intensity that has survived every detector so far.

Same-axis operators form a tiny algebra: same-branch measurements multiply
their alphas, and an equal measurement on the opposite branch undoes a
partial measurement completely (quantum erasure).  Only the ratio of the
two branches' unmeasured fractions matters for the surviving state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import AxisMismatch, DomainError, ZeroSurvival
from .polarization import (
    Axis,
    Branch,
    PolarizationState,
    basis_state,
    components_in,
    from_components,
)


class TrackingMode(Enum):
    """NORMALIZED renormalizes after each no-click; WEIGHTED carries the
    surviving intensity in the state weight."""

    NORMALIZED = "normalized"
    WEIGHTED = "weighted"


class OutcomeKind(Enum):
    CLICK = "click"
    NO_CLICK = "no_click"


@dataclass(frozen=True)
class PartialMeasurementOp:
    """A partial measurement of one branch of one axis.

    ``alpha`` is the unmeasured intensity fraction of the measured branch,
    in [0, 1].  alpha = 1 acts as the identity, alpha = 0 is a complete
    measurement of that branch.
    """

    axis: Axis
    branch: Branch
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", float(self.alpha))
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha!r}")

    @property
    def is_identity(self) -> bool:
        return self.alpha == 1.0


@dataclass(frozen=True)
class MeasurementOutcome:
    """One realized measurement event.

    ``probability`` is the chance of this outcome given the input state
    (conditional on the photon having survived everything earlier, i.e.
    relative to the state's current weight).  A CLICK collapses the state
    onto the measured branch and discards weight history; a NO_CLICK
    carries the reshaped state.  ``detector`` identifies which detector
    fired when the event came from a beam cascade.
    """

    kind: OutcomeKind
    probability: float
    post_state: object
    detector: int | None = None

    @property
    def clicked(self) -> bool:
        return self.kind is OutcomeKind.CLICK


def click_probability(op: PartialMeasurementOp, state: PolarizationState) -> float:
    """Probability that one of the op's detectors fires on this state."""
    c_plus, c_minus = components_in(state, op.axis)
    c_meas = c_plus if op.branch is Branch.PLUS else c_minus
    return (1.0 - op.alpha) * abs(c_meas) ** 2


def no_click_map(
    op: PartialMeasurementOp,
    state: PolarizationState,
    mode: TrackingMode = TrackingMode.NORMALIZED,
) -> PolarizationState:
    """State update conditioned on none of the detectors firing.

    Scales the measured-branch amplitude by sqrt(alpha) and renormalizes.
    In WEIGHTED mode the weight is multiplied by the no-click probability,
    keeping it equal to the surviving intensity.  A state entirely in the
    opposite branch is untouched.  Raises ZeroSurvival when the no-click
    outcome is impossible (alpha = 0 with everything in the measured
    branch).
    """
    if op.is_identity:
        return state
    c_plus, c_minus = components_in(state, op.axis)
    if op.branch is Branch.PLUS:
        c_meas, c_other = c_plus, c_minus
    else:
        c_meas, c_other = c_minus, c_plus

    survival = op.alpha * abs(c_meas) ** 2 + abs(c_other) ** 2
    if survival <= 0.0:
        raise ZeroSurvival(
            f"no-click impossible: alpha={op.alpha} on a fully measured branch"
        )

    scale = math.sqrt(op.alpha) / math.sqrt(survival)
    c_meas = c_meas * scale
    c_other = c_other / math.sqrt(survival)

    weight = state.weight * survival if mode is TrackingMode.WEIGHTED else state.weight
    if op.branch is Branch.PLUS:
        return from_components(op.axis, c_meas, c_other, weight)
    return from_components(op.axis, c_other, c_meas, weight)


def sample(
    op: PartialMeasurementOp,
    state: PolarizationState,
    mode: TrackingMode,
    rng,
) -> MeasurementOutcome:
    """Draw a click / no-click event from ``rng`` (a numpy Generator).

    The recorded probability is the analytic one for the realized outcome.
    """
    p_click = click_probability(op, state)
    if rng.random() < p_click:
        return MeasurementOutcome(
            OutcomeKind.CLICK, p_click, basis_state(op.axis, op.branch)
        )
    return MeasurementOutcome(
        OutcomeKind.NO_CLICK, 1.0 - p_click, no_click_map(op, state, mode)
    )


def compose_same_axis(
    op1: PartialMeasurementOp, op2: PartialMeasurementOp
) -> PartialMeasurementOp:
    """Reduce two same-axis partial measurements to a single one.

    Same branch: alphas multiply.  Opposite branches: only the ratio of
    the unmeasured fractions survives, so the pair reduces to one
    measurement of the more-measured branch with alpha = ratio <= 1
    (an equal pair reduces to the identity: erasure).  The reduced op's
    no-click map equals the sequential one exactly in NORMALIZED mode; in
    WEIGHTED mode the weights differ by the discarded overall factor.

    Raises AxisMismatch for different axes, where no single partial
    measurement reproduces the pair (use apply_sequence).
    """
    if op1.axis is not op2.axis:
        raise AxisMismatch(f"cannot compose across axes {op1.axis} and {op2.axis}")
    axis = op1.axis
    if op1.branch is op2.branch:
        return PartialMeasurementOp(axis, op1.branch, op1.alpha * op2.alpha)

    a_plus = op1.alpha if op1.branch is Branch.PLUS else op2.alpha
    a_minus = op1.alpha if op1.branch is Branch.MINUS else op2.alpha
    if a_plus == 0.0 and a_minus == 0.0:
        raise DomainError(
            "complete measurements of both branches leave no surviving state"
        )
    if a_plus <= a_minus:
        return PartialMeasurementOp(axis, Branch.PLUS, a_plus / a_minus)
    return PartialMeasurementOp(axis, Branch.MINUS, a_minus / a_plus)


def apply_sequence(
    ops: Iterable[PartialMeasurementOp],
    state: PolarizationState,
    mode: TrackingMode = TrackingMode.NORMALIZED,
) -> PolarizationState:
    """Fold the no-click maps of ``ops`` over ``state``, first op first.

    This is the canonical semantics for mixed-axis strings, where no
    closed-form single operator exists.  An empty sequence is the
    identity.
    """
    for op in ops:
        state = no_click_map(op, state, mode)
    return state


def no_click_sequence_probability(
    ops: Iterable[PartialMeasurementOp], state: PolarizationState
) -> float:
    """Probability that an entire op sequence stays silent on ``state``."""
    prob = 1.0
    for op in ops:
        p_click = click_probability(op, state)
        prob *= 1.0 - p_click
        state = no_click_map(op, state, TrackingMode.NORMALIZED)
    return prob
