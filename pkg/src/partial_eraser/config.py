"""Line-oriented experiment config files.

The format is flat ``key = value`` text.  Measurement steps are repeated
``op`` / ``cascade`` lines whose file order is the application order, so
the format round-trips ordered plans exactly:

    # comment
    preparation = epr            | single:plus | single:minus
    mode        = normalized     | weighted
    trials      = 100000
    seed        = 42
    final_axis  = y              | x | z
    counter_from = 1             # optional: plan index where erasure starts
    op      = A,x,plus,0.5       # photon, axis, branch, unmeasured fraction
    cascade = B,minus,50         # photon, branch, detectors [, beams (100)]

Branch tokens: ``plus`` / ``minus``, or the axis-specific aliases ``up``,
``right`` (x), ``diag``, ``antidiag`` (y), ``lcirc``, ``rcirc`` (z); an
alias must agree with the declared axis.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .epr import Photon
from .errors import ConfigError
from .measurement import PartialMeasurementOp, TrackingMode
from .montecarlo import (
    CascadeStep,
    ExperimentConfig,
    MeasureStep,
    PlanStep,
    Preparation,
    PrepKind,
)
from .polarization import Axis, Branch

SEED_ENV_VAR = "PARTIAL_ERASER_SEED"

DEFAULT_TRIALS = 100_000

_BRANCH_TOKENS: dict[str, tuple[Axis | None, Branch]] = {
    "plus": (None, Branch.PLUS),
    "minus": (None, Branch.MINUS),
    "up": (Axis.X, Branch.PLUS),
    "right": (Axis.X, Branch.MINUS),
    "diag": (Axis.Y, Branch.PLUS),
    "antidiag": (Axis.Y, Branch.MINUS),
    "lcirc": (Axis.Z, Branch.PLUS),
    "rcirc": (Axis.Z, Branch.MINUS),
}


@dataclass
class ParsedExperiment:
    """Raw file contents; None means the key was absent."""

    preparation: Preparation | None = None
    mode: TrackingMode | None = None
    trials: int | None = None
    seed: int | None = None
    final_axis: Axis | None = None
    counter_from: int | None = None
    plan: list[PlanStep] = field(default_factory=list)


def _fail(lineno: int, message: str) -> ConfigError:
    return ConfigError(f"line {lineno}: {message}")


def _parse_photon(token: str, lineno: int) -> Photon:
    try:
        return Photon[token.strip().upper()]
    except KeyError:
        raise _fail(lineno, f"unknown photon {token!r} (expected A or B)") from None


def _parse_axis(token: str, lineno: int) -> Axis:
    try:
        return Axis(token.strip().lower())
    except ValueError:
        raise _fail(lineno, f"unknown axis {token!r} (expected x, y or z)") from None


def _parse_branch(token: str, lineno: int, axis: Axis | None) -> Branch:
    key = token.strip().lower()
    if key not in _BRANCH_TOKENS:
        raise _fail(lineno, f"unknown branch {token!r}")
    implied_axis, branch = _BRANCH_TOKENS[key]
    if implied_axis is not None and axis is not None and implied_axis is not axis:
        raise _fail(lineno, f"branch {token!r} belongs to axis {implied_axis.value}")
    return branch


def _parse_op_line(value: str, lineno: int) -> MeasureStep:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 4:
        raise _fail(lineno, "op needs photon,axis,branch,alpha")
    photon = _parse_photon(parts[0], lineno)
    axis = _parse_axis(parts[1], lineno)
    branch = _parse_branch(parts[2], lineno, axis)
    try:
        alpha = float(parts[3])
    except ValueError:
        raise _fail(lineno, f"bad alpha {parts[3]!r}") from None
    if not 0.0 <= alpha <= 1.0:
        raise _fail(lineno, f"alpha must lie in [0, 1], got {alpha}")
    return MeasureStep(photon, PartialMeasurementOp(axis, branch, alpha))


def _parse_cascade_line(value: str, lineno: int) -> CascadeStep:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) not in (3, 4):
        raise _fail(lineno, "cascade needs photon,branch,n_detectors[,n_beams]")
    photon = _parse_photon(parts[0], lineno)
    branch = _parse_branch(parts[1], lineno, Axis.X)
    try:
        n_detectors = int(parts[2])
        n_beams = int(parts[3]) if len(parts) == 4 else 100
    except ValueError:
        raise _fail(lineno, "detector and beam counts must be integers") from None
    try:
        return CascadeStep(photon, branch, n_detectors, n_beams)
    except ConfigError as exc:
        raise _fail(lineno, str(exc)) from None


def _parse_preparation(value: str, lineno: int) -> Preparation:
    token = value.strip().lower()
    if token == "epr":
        return Preparation.epr()
    if token.startswith("single"):
        branch = Branch.PLUS
        if ":" in token:
            branch = _parse_branch(token.split(":", 1)[1], lineno, Axis.Y)
        return Preparation.single(branch)
    raise _fail(lineno, f"unknown preparation {value!r}")


def _parse_int(value: str, lineno: int, key: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise _fail(lineno, f"{key} must be an integer, got {value!r}") from None


def parse_experiment_text(text: str) -> ParsedExperiment:
    parsed = ParsedExperiment()
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _fail(lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key in ("op", "cascade"):
            step = (
                _parse_op_line(value, lineno)
                if key == "op"
                else _parse_cascade_line(value, lineno)
            )
            parsed.plan.append(step)
            continue
        if key in seen:
            raise _fail(lineno, f"duplicate key {key!r}")
        seen.add(key)
        if key == "preparation":
            parsed.preparation = _parse_preparation(value, lineno)
        elif key == "mode":
            try:
                parsed.mode = TrackingMode(value.strip().lower())
            except ValueError:
                raise _fail(lineno, f"unknown mode {value!r}") from None
        elif key == "trials":
            parsed.trials = _parse_int(value, lineno, "trials")
        elif key == "seed":
            parsed.seed = _parse_int(value, lineno, "seed")
        elif key == "final_axis":
            parsed.final_axis = _parse_axis(value, lineno)
        elif key == "counter_from":
            parsed.counter_from = _parse_int(value, lineno, "counter_from")
        else:
            raise _fail(lineno, f"unknown key {key!r}")
    return parsed


def parse_experiment_file(path) -> ParsedExperiment:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_experiment_text(handle.read())


def resolve_seed(
    flag_seed: int | None, file_seed: int | None, env: dict | None = None
) -> int:
    """Seed precedence: command flag, then config file, then the
    PARTIAL_ERASER_SEED environment variable, then 0."""
    if flag_seed is not None:
        return flag_seed
    if file_seed is not None:
        return file_seed
    environment = os.environ if env is None else env
    raw = environment.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def resolve_config(
    parsed: ParsedExperiment,
    *,
    seed: int | None = None,
    trials: int | None = None,
    mode: TrackingMode | None = None,
    env: dict | None = None,
) -> ExperimentConfig:
    """Combine file contents with command-line overrides."""
    if parsed.preparation is None:
        raise ConfigError("config must declare a preparation")
    return ExperimentConfig(
        preparation=parsed.preparation,
        plan=tuple(parsed.plan),
        final_axis=parsed.final_axis if parsed.final_axis is not None else Axis.Y,
        trials=trials if trials is not None else (parsed.trials or DEFAULT_TRIALS),
        master_seed=resolve_seed(seed, parsed.seed, env),
        mode=mode if mode is not None else (parsed.mode or TrackingMode.NORMALIZED),
        counter_from=parsed.counter_from,
    )


def format_experiment(config: ExperimentConfig) -> str:
    """Canonical text form; parsing it reproduces ``config`` exactly."""
    if config.preparation.kind is PrepKind.EPR_PAIR:
        prep = "epr"
    else:
        prep = f"single:{config.preparation.branch.value}"
    lines = [
        f"preparation = {prep}",
        f"mode = {config.mode.value}",
        f"trials = {config.trials}",
        f"seed = {config.master_seed}",
        f"final_axis = {config.final_axis.value}",
    ]
    if config.counter_from is not None:
        lines.append(f"counter_from = {config.counter_from}")
    for step in config.plan:
        if isinstance(step, MeasureStep):
            lines.append(
                "op = {},{},{},{!r}".format(
                    step.photon.value,
                    step.op.axis.value,
                    step.op.branch.value,
                    step.op.alpha,
                )
            )
        else:
            lines.append(
                f"cascade = {step.photon.value},{step.branch.value},"
                f"{step.n_detectors},{step.n_beams}"
            )
    return "\n".join(lines) + "\n"
