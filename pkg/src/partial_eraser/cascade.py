"""Beam-level model of the graded mirror cascade.

Each branch of the split wave function passes a chain of partly silvered
mirrors whose transmissions are graded so that every reflected beam
carries an equal fraction 1/n of the branch intensity: the first mirror
transmits (n-1)/n, the second (n-2)/(n-1), and so on down to a solid
mirror at the end.  Detectors sit on an arbitrary subset of the beams.

Because the beams are equal and in phase, only the *number* of detectors
matters: placing m detectors on a branch realizes exactly the abstract
partial measurement with unmeasured fraction alpha = (n - m)/n, whichever
beams were chosen.  ``placement_invariance_check`` verifies this both
analytically (post-states) and statistically (click rates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .measurement import (
    MeasurementOutcome,
    OutcomeKind,
    PartialMeasurementOp,
    TrackingMode,
    no_click_map,
)
from .polarization import (
    Axis,
    Branch,
    PolarizationState,
    amplitude_distance,
    basis_state,
)


@dataclass(frozen=True)
class Cascade:
    """A chain of graded mirror transmissions splitting one branch into
    ``n_beams`` equal-intensity beams."""

    n_beams: int
    transmissions: tuple[float, ...]


def build_cascade(n_beams: int) -> Cascade:
    """Cascade with transmissions (n-1-i)/(n-i); the last mirror is solid."""
    if n_beams < 1:
        raise DomainError(f"n_beams must be >= 1, got {n_beams!r}")
    transmissions = tuple(
        (n_beams - 1 - i) / (n_beams - i) for i in range(n_beams)
    )
    return Cascade(n_beams, transmissions)


def beam_intensities(cascade: Cascade) -> tuple[float, ...]:
    """Intensity fraction of each reflected beam (all equal to 1/n)."""
    intensities = []
    remaining = 1.0
    for t in cascade.transmissions:
        intensities.append(remaining * (1.0 - t))
        remaining *= t
    return tuple(intensities)


@dataclass(frozen=True)
class DetectorPlacement:
    """Detectors on a chosen subset of one branch's beams."""

    branch: Branch
    beam_indices: frozenset[int]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.beam_indices))
        object.__setattr__(self, "beam_indices", frozenset(ordered))
        # cached for the sampling hot path
        object.__setattr__(self, "_ordered", ordered)
        object.__setattr__(self, "_max_index", ordered[-1] if ordered else -1)
        if ordered and ordered[0] < 0:
            raise DomainError("beam indices must be non-negative")

    @property
    def n_detectors(self) -> int:
        return len(self.beam_indices)


def equivalent_op(placement: DetectorPlacement, cascade: Cascade) -> PartialMeasurementOp:
    """The abstract partial measurement realized by this placement."""
    _check_indices(placement, cascade)
    alpha = (cascade.n_beams - placement.n_detectors) / cascade.n_beams
    return PartialMeasurementOp(Axis.X, placement.branch, alpha)


def _check_indices(placement: DetectorPlacement, cascade: Cascade) -> None:
    if placement._max_index >= cascade.n_beams:
        raise DomainError(
            f"beam indices must lie in [0, {cascade.n_beams}), got "
            f"{sorted(placement.beam_indices)}"
        )


def cascade_measure(
    state: PolarizationState,
    placement: DetectorPlacement,
    cascade: Cascade,
    rng,
    mode: TrackingMode = TrackingMode.NORMALIZED,
) -> MeasurementOutcome:
    """Sample one pass of the photon through the instrumented cascade.

    Click probability is (m/n) |<branch|psi>|^2, spread uniformly over the
    m placed detectors; the click outcome records which one fired.  A
    silent pass applies the equivalent partial measurement's no-click map.
    """
    _check_indices(placement, cascade)
    n = cascade.n_beams
    m = placement.n_detectors
    c_branch = state.amp_up if placement.branch is Branch.PLUS else state.amp_right
    p_click = (m / n) * abs(c_branch) ** 2

    u = rng.random()
    if u < p_click:
        # u is uniform on [0, p_click); reuse it to pick the detector.
        which = min(int(u / p_click * m), m - 1)
        return MeasurementOutcome(
            OutcomeKind.CLICK,
            p_click,
            basis_state(Axis.X, placement.branch),
            detector=placement._ordered[which],
        )
    op = PartialMeasurementOp(Axis.X, placement.branch, (n - m) / n)
    return MeasurementOutcome(
        OutcomeKind.NO_CLICK, 1.0 - p_click, no_click_map(op, state, mode)
    )


def cascade_no_click_state(
    state: PolarizationState,
    placements: list[DetectorPlacement] | tuple[DetectorPlacement, ...],
    cascade: Cascade,
    mode: TrackingMode = TrackingMode.NORMALIZED,
) -> PolarizationState:
    """Conditional state after every placement stayed silent, in order."""
    for placement in placements:
        state = no_click_map(equivalent_op(placement, cascade), state, mode)
    return state


@dataclass(frozen=True)
class PlacementCheck:
    """Comparison of two random same-size placements."""

    size: int
    state_deviation: float
    click_rate_a: float
    click_rate_b: float
    expected_rate: float
    rate_z: float


@dataclass(frozen=True)
class InvarianceReport:
    checks: tuple[PlacementCheck, ...]
    max_state_deviation: float
    max_rate_z: float


def placement_invariance_check(
    state: PolarizationState,
    cascade: Cascade,
    sizes: list[int],
    trials: int,
    rng,
) -> InvarianceReport:
    """Verify that only the detector count matters, not the chosen beams.

    For each size, two random placements on the plus branch are compared:
    their conditional no-click post-states (which agree exactly) and their
    empirical click rates over ``trials`` samples (two-proportion z).
    """
    checks = []
    for size in sizes:
        if not 0 <= size <= cascade.n_beams:
            raise DomainError(f"placement size {size} out of range")
        place_a = DetectorPlacement(
            Branch.PLUS,
            frozenset(rng.choice(cascade.n_beams, size=size, replace=False).tolist()),
        )
        place_b = DetectorPlacement(
            Branch.PLUS,
            frozenset(rng.choice(cascade.n_beams, size=size, replace=False).tolist()),
        )
        if size == cascade.n_beams and abs(state.amp_right) == 0.0:
            deviation = 0.0  # no-click state undefined; rates still compared
        else:
            post_a = cascade_no_click_state(state, [place_a], cascade)
            post_b = cascade_no_click_state(state, [place_b], cascade)
            deviation = amplitude_distance(post_a, post_b)

        clicks_a = sum(
            cascade_measure(state, place_a, cascade, rng).clicked for _ in range(trials)
        )
        clicks_b = sum(
            cascade_measure(state, place_b, cascade, rng).clicked for _ in range(trials)
        )
        rate_a = clicks_a / trials
        rate_b = clicks_b / trials
        expected = (size / cascade.n_beams) * abs(state.amp_up) ** 2
        pooled = (clicks_a + clicks_b) / (2 * trials)
        spread = math.sqrt(max(pooled * (1.0 - pooled) * 2.0 / trials, 1e-300))
        rate_z = (rate_a - rate_b) / spread if size > 0 else 0.0
        checks.append(
            PlacementCheck(size, deviation, rate_a, rate_b, expected, rate_z)
        )
    return InvarianceReport(
        tuple(checks),
        max((c.state_deviation for c in checks), default=0.0),
        max((abs(c.rate_z) for c in checks), default=0.0),
    )
