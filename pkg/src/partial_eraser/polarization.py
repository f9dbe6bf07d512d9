"""Two-level polarization states and the three measurement bases.

A single photon lives in the span of the linear basis states |up> and
|right>.  Three mutually unbiased measurement axes are supported:

    X : {|up>, |right>}                      linear, the canonical basis
    Y : {|diag>, |antidiag>}                 linear at 45 degrees
    Z : {|circ+>, |circ->}                   circular

with conventions

    |diag>     = (|up> + |right>) / sqrt(2)
    |antidiag> = (|right> - |up>) / sqrt(2)
    |circ+>    = (|up> + i |right>) / sqrt(2)
    |circ->    = (|up> - i |right>) / sqrt(2)

The antidiagonal sign is fixed so that a partial measurement of the up
branch rotates a diagonal state toward |right> with a positive antidiagonal
component; the circular convention makes all three axes mutually unbiased.

A state carries a separate intensity ``weight`` so that renormalized and
intensity-tracking descriptions of the same measurement history share one
representation: the amplitude pair always has unit norm, and ``weight``
holds the surviving fraction of the original beam intensity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateState, DomainError

NORM_TOL = 1e-12

_SQRT_HALF = math.sqrt(0.5)


class Axis(Enum):
    """Measurement axis: linear (X), diagonal (Y) or circular (Z)."""

    X = "x"
    Y = "y"
    Z = "z"


class Branch(Enum):
    """One of the two outcomes of an axis: PLUS or MINUS.

    Per axis: X plus=|up> minus=|right>; Y plus=|diag> minus=|antidiag>;
    Z plus=|circ+> minus=|circ->.
    """

    PLUS = "plus"
    MINUS = "minus"

    def other(self) -> "Branch":
        return Branch.MINUS if self is Branch.PLUS else Branch.PLUS


# Basis vectors as (amp_up, amp_right) coordinates.
_BASIS_VECTORS: dict[Axis, dict[Branch, tuple[complex, complex]]] = {
    Axis.X: {
        Branch.PLUS: (1.0 + 0.0j, 0.0 + 0.0j),
        Branch.MINUS: (0.0 + 0.0j, 1.0 + 0.0j),
    },
    Axis.Y: {
        Branch.PLUS: (_SQRT_HALF + 0.0j, _SQRT_HALF + 0.0j),
        Branch.MINUS: (-_SQRT_HALF + 0.0j, _SQRT_HALF + 0.0j),
    },
    Axis.Z: {
        Branch.PLUS: (_SQRT_HALF + 0.0j, _SQRT_HALF * 1.0j),
        Branch.MINUS: (_SQRT_HALF + 0.0j, -_SQRT_HALF * 1.0j),
    },
}


def basis_vector(axis: Axis, branch: Branch) -> tuple[complex, complex]:
    """(amp_up, amp_right) coordinates of one basis state."""
    return _BASIS_VECTORS[axis][branch]


@dataclass(frozen=True)
class PolarizationState:
    """Pure single-photon polarization state with an intensity weight.

    ``amp_up`` and ``amp_right`` are the complex amplitudes on |up> and
    |right>; they must form a unit vector (checked to 1e-12).  ``weight``
    is the surviving beam intensity relative to the source (1.0 for an
    unmeasured photon).
    """

    amp_up: complex
    amp_right: complex
    weight: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "amp_up", complex(self.amp_up))
        object.__setattr__(self, "amp_right", complex(self.amp_right))
        object.__setattr__(self, "weight", float(self.weight))
        norm2 = abs(self.amp_up) ** 2 + abs(self.amp_right) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(
                f"amplitudes must have unit norm, got |psi|^2 = {norm2!r}"
            )
        if not 0.0 <= self.weight <= 1.0 + NORM_TOL:
            raise DomainError(f"weight must lie in [0, 1], got {self.weight!r}")


def basis_state(axis: Axis, branch: Branch, weight: float = 1.0) -> PolarizationState:
    """The pure state pointing along one basis vector."""
    up, right = basis_vector(axis, branch)
    return PolarizationState(up, right, weight)


def from_components(
    axis: Axis, c_plus: complex, c_minus: complex, weight: float = 1.0
) -> PolarizationState:
    """Build a state from its components along ``axis`` (normalizing)."""
    p_up, p_right = basis_vector(axis, Branch.PLUS)
    m_up, m_right = basis_vector(axis, Branch.MINUS)
    up = c_plus * p_up + c_minus * m_up
    right = c_plus * p_right + c_minus * m_right
    norm = math.sqrt(abs(up) ** 2 + abs(right) ** 2)
    if norm < 1e-15:
        raise DegenerateState("cannot normalize a zero vector")
    return PolarizationState(up / norm, right / norm, weight)


def components_in(state: PolarizationState, axis: Axis) -> tuple[complex, complex]:
    """Components (<plus|psi>, <minus|psi>) of the state along ``axis``.

    The squared magnitudes sum to 1, so they are the Born probabilities of
    the two outcomes of a complete measurement along that axis.
    """
    p_up, p_right = basis_vector(axis, Branch.PLUS)
    m_up, m_right = basis_vector(axis, Branch.MINUS)
    c_plus = p_up.conjugate() * state.amp_up + p_right.conjugate() * state.amp_right
    c_minus = m_up.conjugate() * state.amp_up + m_right.conjugate() * state.amp_right
    return c_plus, c_minus


def branch_probability(state: PolarizationState, axis: Axis, branch: Branch) -> float:
    """Born probability of finding the photon in ``branch`` of ``axis``."""
    c_plus, c_minus = components_in(state, axis)
    c = c_plus if branch is Branch.PLUS else c_minus
    return abs(c) ** 2


def polarization_angle(state: PolarizationState) -> float:
    """Polarization-plane angle in degrees, atan(|up| / |right|).

    45 degrees for an even superposition, 0 for pure |right>, 90 for pure
    |up>.  Defined through amplitude magnitudes, so it is meaningful only
    for states whose amplitudes are relatively real (no circular
    component); complex relative phases are deliberately ignored.
    """
    up_mag = abs(state.amp_up)
    right_mag = abs(state.amp_right)
    if up_mag < 1e-15 and right_mag < 1e-15:
        raise DegenerateState("polarization angle undefined for zero amplitudes")
    return math.degrees(math.atan2(up_mag, right_mag))


def uncertainty_spreads(alpha: float) -> tuple[float, float]:
    """Standard deviations (spread_x, spread_y) of the two +-1 polarization
    observables after an up-branch partial measurement leaving unmeasured
    fraction ``alpha``.

        spread_x = 2 sqrt(alpha) / (1 + alpha)
        spread_y = (1 - alpha) / (1 + alpha)

    alpha = 1 (nothing measured) gives full X uncertainty and an intact Y
    polarization; alpha = 0 (complete measurement) the reverse.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    spread_x = 2.0 * math.sqrt(alpha) / (1.0 + alpha)
    spread_y = (1.0 - alpha) / (1.0 + alpha)
    return spread_x, spread_y


def y_correlation_single(alpha: float) -> float:
    """Probability that the diagonal polarization survives an up-branch
    partial measurement of unmeasured fraction ``alpha``:

        C(alpha) = ((1 + sqrt(alpha)) / sqrt(2 + 2 alpha))^2

    Ranges from 1 (alpha = 1, nothing measured) down to 1/2 (alpha = 0,
    complete measurement leaves the diagonal outcome random).
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    return (1.0 + math.sqrt(alpha)) ** 2 / (2.0 + 2.0 * alpha)


def amplitude_distance(a: PolarizationState, b: PolarizationState) -> float:
    """Euclidean distance between the amplitude vectors of two states."""
    return math.sqrt(
        abs(a.amp_up - b.amp_up) ** 2 + abs(a.amp_right - b.amp_right) ** 2
    )


def states_close(
    a: PolarizationState, b: PolarizationState, tol: float = NORM_TOL
) -> bool:
    """Amplitude-wise equality within ``tol`` (weights not compared)."""
    return amplitude_distance(a, b) <= tol
