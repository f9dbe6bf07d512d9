"""Trial-level experiment runner and exhaustive event-tree oracle.

An experiment preparation is either a single photon in a known diagonal
state or an entangled pair.  The measurement plan is an ordered list of
partial measurements (abstract ops, or beam cascades with detector
identities), each of which may click and end the trial.  Trials that
survive every detector get a final same-axis measurement; the reported
agreement rate is the fraction of surviving trials whose final outcome
matches the preparation (single photon) or whose two outcomes match each
other (pair).

Every trial draws from its own random stream derived from
(master_seed, trial_index), so runs are reproducible bit for bit and
trials may be evaluated in any order or in parallel.

``enumerate_event_tree`` walks every click / no-click branch of the same
plan deterministically, which serves as an independent oracle for the
sampled statistics at small scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Union

import numpy as np

from .epr import (
    Photon,
    apply_partial_pair,
    make_epr,
    pair_axis_amplitudes,
    pair_click_probability,
)
from .errors import ConfigError, DomainError, InsufficientStatistics, ZeroSurvival
from .measurement import (
    PartialMeasurementOp,
    TrackingMode,
    click_probability,
    no_click_map,
)
from .polarization import (
    Axis,
    Branch,
    PolarizationState,
    basis_state,
    branch_probability,
)


class PrepKind(Enum):
    SINGLE_PHOTON = "single"
    EPR_PAIR = "epr"


@dataclass(frozen=True)
class Preparation:
    """Initial state: a diagonal-basis single photon or an EPR pair."""

    kind: PrepKind
    branch: Branch = Branch.PLUS

    @staticmethod
    def single(branch: Branch = Branch.PLUS) -> "Preparation":
        return Preparation(PrepKind.SINGLE_PHOTON, branch)

    @staticmethod
    def epr() -> "Preparation":
        return Preparation(PrepKind.EPR_PAIR)


@dataclass(frozen=True)
class MeasureStep:
    """One abstract partial measurement on one photon."""

    photon: Photon
    op: PartialMeasurementOp


@dataclass(frozen=True)
class CascadeStep:
    """A beam-cascade measurement: ``n_detectors`` detectors on one branch
    of an ``n_beams`` cascade (detectors occupy the first beams; the
    placement identity is physically irrelevant)."""

    photon: Photon
    branch: Branch
    n_detectors: int
    n_beams: int = 100

    def __post_init__(self) -> None:
        if self.n_beams < 1:
            raise ConfigError(f"n_beams must be >= 1, got {self.n_beams!r}")
        if not 0 <= self.n_detectors <= self.n_beams:
            raise ConfigError(
                f"n_detectors must lie in [0, {self.n_beams}], got {self.n_detectors!r}"
            )

    @property
    def alpha(self) -> float:
        return (self.n_beams - self.n_detectors) / self.n_beams

    @property
    def op(self) -> PartialMeasurementOp:
        return PartialMeasurementOp(Axis.X, self.branch, self.alpha)


PlanStep = Union[MeasureStep, CascadeStep]


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative experiment description (fully determines a run)."""

    preparation: Preparation
    plan: tuple[PlanStep, ...]
    final_axis: Axis
    trials: int
    master_seed: int
    mode: TrackingMode = TrackingMode.NORMALIZED
    counter_from: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "plan", tuple(self.plan))
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials!r}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if self.preparation.kind is PrepKind.SINGLE_PHOTON:
            for step in self.plan:
                if step.photon is not Photon.A:
                    raise ConfigError(
                        "single-photon experiments cannot measure photon B"
                    )
        if self.counter_from is not None and not 0 <= self.counter_from <= len(self.plan):
            raise ConfigError(
                f"counter_from must index into the plan, got {self.counter_from!r}"
            )


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial: where it clicked, or what the finals showed."""

    index: int
    click_step: int | None
    detector: int | None
    result_a: Branch | None
    result_b: Branch | None
    agreement: bool | None

    @property
    def survived(self) -> bool:
        return self.click_step is None


@dataclass(frozen=True)
class TrialStats:
    """Aggregated counts with the matching analytic prediction.

    ``agreement_rate`` is conditional on survival (no click anywhere);
    ``analytic_prediction`` is the Born agreement probability of the
    deterministically folded no-click state, and ``std_error`` the
    binomial standard error of the empirical rate.
    """

    total: int
    clicked: int
    surviving: int
    agreement_count: int
    agreement_rate: float
    std_error: float
    analytic_prediction: float


def trial_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent random stream for one trial (splittable by index)."""
    return np.random.default_rng([master_seed, trial_index])


def prepared_state(config: ExperimentConfig):
    if config.preparation.kind is PrepKind.SINGLE_PHOTON:
        return basis_state(Axis.Y, config.preparation.branch)
    return make_epr()


@dataclass(frozen=True)
class _CompiledStep:
    p_click: float
    detectors: tuple[int, ...] | None  # set for cascade steps only


@dataclass(frozen=True)
class _CompiledPlan:
    """Per-step click thresholds and final-measurement cumulative masses.

    The surviving-state trajectory is the same in every trial, so all the
    state algebra happens once here; a trial is then one uniform draw per
    step plus one for the final measurement.
    """

    steps: tuple[_CompiledStep, ...]
    final_cumulative: tuple[float, ...] | None
    final_results: tuple[tuple[Branch | None, Branch | None], ...] | None


def _compile_plan(config: ExperimentConfig) -> _CompiledPlan:
    single = config.preparation.kind is PrepKind.SINGLE_PHOTON
    state = prepared_state(config)
    steps: list[_CompiledStep] = []
    truncated = False
    for step in config.plan:
        op = step.op
        if single:
            p_click = click_probability(op, state)
        else:
            p_click = pair_click_probability(state, step.photon, op)
        detectors = (
            tuple(range(step.n_detectors)) if isinstance(step, CascadeStep) else None
        )
        steps.append(_CompiledStep(p_click, detectors))
        if p_click >= 1.0:
            truncated = True  # later steps and the final stage are unreachable
            break
        try:
            if single:
                state = no_click_map(op, state, TrackingMode.NORMALIZED)
            else:
                state = apply_partial_pair(
                    state, step.photon, op, TrackingMode.NORMALIZED
                )
        except ZeroSurvival:
            truncated = True
            break

    if truncated:
        return _CompiledPlan(tuple(steps), None, None)

    if single:
        p_plus = branch_probability(state, config.final_axis, Branch.PLUS)
        cumulative = (p_plus,)
        results = ((Branch.PLUS, None), (Branch.MINUS, None))
    else:
        n = pair_axis_amplitudes(state, config.final_axis)
        acc = 0.0
        thresholds = []
        results = []
        for k, branch_a in enumerate((Branch.PLUS, Branch.MINUS)):
            for l, branch_b in enumerate((Branch.PLUS, Branch.MINUS)):
                acc += abs(n[k][l]) ** 2
                thresholds.append(acc)
                results.append((branch_a, branch_b))
        cumulative = tuple(thresholds[:-1])  # the last bucket catches the rest
        results = tuple(results)
    return _CompiledPlan(tuple(steps), cumulative, tuple(results))


def _run_compiled_trial(
    compiled: _CompiledPlan, config: ExperimentConfig, index: int
) -> TrialRecord:
    rng = trial_stream(config.master_seed, index)
    for step_idx, step in enumerate(compiled.steps):
        u = rng.random()
        if u < step.p_click:
            detector = None
            if step.detectors is not None:
                m = len(step.detectors)
                detector = step.detectors[min(int(u / step.p_click * m), m - 1)]
            return TrialRecord(index, step_idx, detector, None, None, None)
    if compiled.final_cumulative is None:
        raise ZeroSurvival("plan has no surviving path past its last step")
    u = rng.random()
    position = 0
    for threshold in compiled.final_cumulative:
        if u < threshold:
            break
        position += 1
    result_a, result_b = compiled.final_results[position]
    if config.preparation.kind is PrepKind.SINGLE_PHOTON:
        agreement = result_a is config.preparation.branch
        return TrialRecord(index, None, None, result_a, None, agreement)
    return TrialRecord(index, None, None, result_a, result_b, result_a is result_b)


def run_trial(config: ExperimentConfig, index: int) -> TrialRecord:
    """Run one trial on its own (master_seed, index) stream."""
    return _run_compiled_trial(_compile_plan(config), config, index)


def iter_trials(config: ExperimentConfig) -> Iterator[TrialRecord]:
    compiled = _compile_plan(config)
    for index in range(config.trials):
        yield _run_compiled_trial(compiled, config, index)


def surviving_state(config: ExperimentConfig):
    """Deterministic state conditioned on every measurement staying silent."""
    single = config.preparation.kind is PrepKind.SINGLE_PHOTON
    state = prepared_state(config)
    for step in config.plan:
        op = step.op
        if single:
            state = no_click_map(op, state, config.mode)
        else:
            state = apply_partial_pair(state, step.photon, op, config.mode)
    return state


def analytic_agreement(config: ExperimentConfig) -> float:
    """Born agreement probability of the folded no-click state.

    Clipped into [0, 1]: summed squared magnitudes can overshoot by a few
    ulp, and the estimator divides by a possibly zero standard error.
    """
    state = surviving_state(config)
    if config.preparation.kind is PrepKind.SINGLE_PHOTON:
        p = branch_probability(state, config.final_axis, config.preparation.branch)
    else:
        n = pair_axis_amplitudes(state, config.final_axis)
        p = abs(n[0][0]) ** 2 + abs(n[1][1]) ** 2
    return min(1.0, max(0.0, p))


def analytic_survival(config: ExperimentConfig) -> float:
    """Probability that a trial survives the whole plan without a click."""
    single = config.preparation.kind is PrepKind.SINGLE_PHOTON
    state = prepared_state(config)
    prob = 1.0
    for step in config.plan:
        op = step.op
        if single:
            prob *= 1.0 - click_probability(op, state)
            state = no_click_map(op, state, TrackingMode.NORMALIZED)
        else:
            prob *= 1.0 - pair_click_probability(state, step.photon, op)
            state = apply_partial_pair(state, step.photon, op, TrackingMode.NORMALIZED)
    return prob


def aggregate_records(config: ExperimentConfig, records) -> TrialStats:
    """Reduce trial records to TrialStats with exact integer counting."""
    clicked = 0
    surviving = 0
    agreement_count = 0
    for record in records:
        if record.survived:
            surviving += 1
            if record.agreement:
                agreement_count += 1
        else:
            clicked += 1
    if surviving > 0:
        rate = agreement_count / surviving
        std_error = math.sqrt(rate * (1.0 - rate) / surviving)
    else:
        rate = math.nan
        std_error = math.nan
    return TrialStats(
        total=config.trials,
        clicked=clicked,
        surviving=surviving,
        agreement_count=agreement_count,
        agreement_rate=rate,
        std_error=std_error,
        analytic_prediction=analytic_agreement(config),
    )


def run_experiment(config: ExperimentConfig) -> TrialStats:
    """Run every trial on its own stream and aggregate the counts."""
    return aggregate_records(config, iter_trials(config))


def estimate_vs_analytic(stats: TrialStats) -> float:
    """z score of the empirical agreement rate against the prediction."""
    if stats.surviving <= 0:
        raise DomainError("z score undefined with no surviving trials")
    diff = stats.agreement_rate - stats.analytic_prediction
    if stats.std_error == 0.0:
        return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    return diff / stats.std_error


def survived(record: TrialRecord) -> bool:
    return record.survived


def disagreed(record: TrialRecord) -> bool:
    return record.agreement is False


def counter_stage_click(config: ExperimentConfig) -> Callable[[TrialRecord], bool]:
    """Predicate: the trial's click happened at or after ``counter_from``."""

    def _event(record: TrialRecord) -> bool:
        return (
            record.click_step is not None
            and config.counter_from is not None
            and record.click_step >= config.counter_from
        )

    return _event


def conditional_click_stat(
    config: ExperimentConfig,
    condition: Callable[[TrialRecord], bool],
    event: Callable[[TrialRecord], bool] | None = None,
) -> float:
    """Empirical probability of ``event`` among trials satisfying
    ``condition``.

    ``event`` defaults to a click in the counter-measurement stage (the
    plan suffix starting at ``config.counter_from``).  Raises
    InsufficientStatistics when fewer than 100 trials satisfy the
    condition.
    """
    if event is None:
        event = counter_stage_click(config)
    selected_total = 0
    event_count = 0
    for record in iter_trials(config):
        if condition(record):
            selected_total += 1
            if event(record):
                event_count += 1
    if selected_total < 100:
        raise InsufficientStatistics(
            f"only {selected_total} trials satisfy the condition (need >= 100)"
        )
    return event_count / selected_total


@dataclass(frozen=True)
class EventLeaf:
    """One terminal branch of the experiment's event tree."""

    path: tuple[str, ...]
    probability: float
    clicked: bool
    agreement: bool | None


def enumerate_event_tree(config: ExperimentConfig) -> tuple[EventLeaf, ...]:
    """Exhaustively walk every click / no-click branch of the plan.

    Click leaves from cascades are split per detector.  Surviving paths
    terminate in the final-measurement outcomes with their Born
    probabilities.  Leaf probabilities sum to 1.  This enumerator is an
    oracle for the sampler and never feeds the sampling path.
    """
    single = config.preparation.kind is PrepKind.SINGLE_PHOTON
    leaves: list[EventLeaf] = []

    def finalize(state, prob: float, path: tuple[str, ...]) -> None:
        if single:
            for branch in (Branch.PLUS, Branch.MINUS):
                p = branch_probability(state, config.final_axis, branch)
                agreement = branch is config.preparation.branch
                leaves.append(
                    EventLeaf(path + (f"final:{branch.value}",), prob * p, False, agreement)
                )
        else:
            n = pair_axis_amplitudes(state, config.final_axis)
            names = (Branch.PLUS, Branch.MINUS)
            for k in range(2):
                for l in range(2):
                    p = abs(n[k][l]) ** 2
                    label = f"final:{names[k].value},{names[l].value}"
                    leaves.append(
                        EventLeaf(path + (label,), prob * p, False, k == l)
                    )

    def recurse(state, step_idx: int, prob: float, path: tuple[str, ...]) -> None:
        if step_idx == len(config.plan):
            finalize(state, prob, path)
            return
        step = config.plan[step_idx]
        op = step.op
        if single:
            p_click = click_probability(op, state)
        else:
            p_click = pair_click_probability(state, step.photon, op)
        if isinstance(step, CascadeStep):
            p_per = p_click / step.n_detectors if step.n_detectors else 0.0
            for det in range(step.n_detectors):
                leaves.append(
                    EventLeaf(
                        path + (f"click@{step_idx}:det{det}",), prob * p_per, True, None
                    )
                )
        elif p_click > 0.0:
            leaves.append(
                EventLeaf(path + (f"click@{step_idx}",), prob * p_click, True, None)
            )
        p_pass = 1.0 - p_click
        if p_pass > 0.0:
            if single:
                next_state = no_click_map(op, state, TrackingMode.NORMALIZED)
            else:
                next_state = apply_partial_pair(
                    state, step.photon, op, TrackingMode.NORMALIZED
                )
            recurse(next_state, step_idx + 1, prob * p_pass, path + (f"pass@{step_idx}",))

    recurse(prepared_state(config), 0, 1.0, ())
    return tuple(leaves)
