"""Effect-trend bases and coefficient solving.

A category's standardized proximal effect over the study is a low-order
curve in the decision-point coordinate ``x = ((d-1)*T + t - 1) / T``.
Four shapes are supported: constant, linear, quadratic, and linear-plateau
(linear rise until a turning day, flat afterwards).  Users describe a curve
by summaries (initial value at the category's adding day, average value
over its active period, turning day); this module converts summaries into
coefficient vectors and back.

The availability curve machinery reuses the same shapes, so availability
profiles are realized here as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONSTANT = "constant"
LINEAR = "linear"
QUADRATIC = "quadratic"
LINEAR_PLATEAU = "linear_plateau"

SHAPES = (CONSTANT, LINEAR, QUADRATIC, LINEAR_PLATEAU)

# dimension of the coefficient vector per shape
SHAPE_DIM = {CONSTANT: 1, LINEAR: 2, QUADRATIC: 3, LINEAR_PLATEAU: 2}

_SHAPE_ALIASES = {
    "linear and constant": LINEAR_PLATEAU,
    "linear-plateau": LINEAR_PLATEAU,
    "linear plateau": LINEAR_PLATEAU,
}

# reject constraint systems this ill-conditioned; downstream matrix
# inversions inherit the error otherwise
MAX_CONDITION = 1e12


class TrendError(ValueError):
    """Invalid trend specification or unsolvable constraint system."""


def canonical_shape(name: str) -> str:
    key = name.strip().lower().replace("_", " ").replace("-", " ")
    key = " ".join(key.split())
    for shape in SHAPES:
        if key == shape.replace("_", " "):
            return shape
    if key in _SHAPE_ALIASES:
        return _SHAPE_ALIASES[key]
    raise TrendError(f"unknown trend shape {name!r}; expected one of {SHAPES}")


def time_coordinate(day: int, occasion: int, occ_per_day: int) -> float:
    """Decision-point coordinate: day-unit position of (day, occasion)."""
    return ((day - 1) * occ_per_day + occasion - 1) / occ_per_day


def plateau_coordinate(day: int, occasion: int, occ_per_day: int, turning_day: int) -> float:
    clamped = min(turning_day - 1, day - 1)
    return (clamped * occ_per_day + occasion - 1) / occ_per_day


def basis_vector(
    shape: str,
    day: int,
    occasion: int = 1,
    occ_per_day: int = 1,
    turning_day: int | None = None,
) -> np.ndarray:
    """Basis row for one decision point.

    Polynomial shapes use powers of the decision-point coordinate;
    linear-plateau clamps the day at the turning day so the curve is flat
    beyond it.
    """
    shape = canonical_shape(shape)
    if not 1 <= occasion <= occ_per_day:
        raise TrendError(f"occasion {occasion} outside 1..{occ_per_day}")
    if shape == LINEAR_PLATEAU:
        if turning_day is None:
            raise TrendError("linear_plateau basis needs a turning day")
        return np.array([1.0, plateau_coordinate(day, occasion, occ_per_day, turning_day)])
    x = time_coordinate(day, occasion, occ_per_day)
    if shape == CONSTANT:
        return np.array([1.0])
    if shape == LINEAR:
        return np.array([1.0, x])
    return np.array([1.0, x, x * x])


@dataclass(frozen=True)
class TrendSpec:
    """Summary description of one category's effect curve.

    ``initial`` and ``average`` are on the standardized scale (raw effect
    divided by the root mean residual variance).  ``turning_day`` is the
    calendar day of the plateau start or the quadratic vertex and is
    required for those shapes.
    """

    shape: str
    average: float
    initial: float | None = None
    turning_day: int | None = None
    adding_day: int = 1

    def __post_init__(self):
        object.__setattr__(self, "shape", canonical_shape(self.shape))
        if self.adding_day < 1:
            raise TrendError(f"adding day must be >= 1, got {self.adding_day}")
        if self.shape in (QUADRATIC, LINEAR_PLATEAU):
            if self.turning_day is None:
                raise TrendError(f"{self.shape} trend requires a turning day")
            if self.turning_day < self.adding_day:
                raise TrendError(
                    f"turning day {self.turning_day} precedes adding day {self.adding_day}"
                )
        if self.shape == CONSTANT:
            if self.initial is not None and self.initial != self.average:
                raise TrendError(
                    "constant trend cannot reach average "
                    f"{self.average} from initial {self.initial}: "
                    f"residual {abs(self.initial - self.average):g}"
                )
        elif self.initial is None:
            raise TrendError(f"{self.shape} trend requires an initial value")

    @property
    def dim(self) -> int:
        return SHAPE_DIM[self.shape]


@dataclass(frozen=True)
class TrendCoefficients:
    """Solved coefficient vector for one category."""

    coeffs: np.ndarray
    shape: str
    adding_day: int = 1
    turning_day: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "shape", canonical_shape(self.shape))
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (SHAPE_DIM[self.shape],):
            raise TrendError(
                f"{self.shape} trend takes {SHAPE_DIM[self.shape]} coefficients, "
                f"got {coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return SHAPE_DIM[self.shape]

    def basis(self, day: int, occasion: int = 1, occ_per_day: int = 1) -> np.ndarray:
        return basis_vector(self.shape, day, occasion, occ_per_day, self.turning_day)

    def value_at(self, day: int, occasion: int = 1, occ_per_day: int = 1) -> float:
        return float(self.basis(day, occasion, occ_per_day) @ self.coeffs)


def _active_basis_rows(spec_shape: str, adding_day: int, turning_day: int | None,
                       days: int, occ_per_day: int) -> np.ndarray:
    rows = [
        basis_vector(spec_shape, d, t, occ_per_day, turning_day)
        for d in range(adding_day, days + 1)
        for t in range(1, occ_per_day + 1)
    ]
    return np.array(rows)


def solve_coefficients(spec: TrendSpec, days: int, occ_per_day: int = 1) -> TrendCoefficients:
    """Solve the coefficient vector reproducing the spec's summaries.

    Constraints: curve at the adding day equals ``initial``; the arithmetic
    mean over all active decision points equals ``average``; quadratic adds
    a vanishing derivative at the turning day.
    """
    if days < spec.adding_day:
        raise TrendError(
            f"active period empty: adding day {spec.adding_day} beyond study days {days}"
        )
    if spec.turning_day is not None and spec.turning_day > days:
        raise TrendError(f"turning day {spec.turning_day} beyond study days {days}")
    if spec.shape == CONSTANT:
        return TrendCoefficients(np.array([spec.average]), CONSTANT, spec.adding_day)

    rows = _active_basis_rows(spec.shape, spec.adding_day, spec.turning_day, days, occ_per_day)
    system = [rows[0], rows.mean(axis=0)]
    rhs = [spec.initial, spec.average]
    if spec.shape == QUADRATIC:
        x_turn = time_coordinate(spec.turning_day, 1, occ_per_day)
        system.append(np.array([0.0, 1.0, 2.0 * x_turn]))
        rhs.append(0.0)
    system = np.array(system)
    if np.linalg.cond(system) > MAX_CONDITION:
        raise TrendError(
            f"singular constraint system for {spec.shape} trend "
            f"(adding day {spec.adding_day}, turning day {spec.turning_day})"
        )
    coeffs = np.linalg.solve(system, np.array(rhs, dtype=float))
    return TrendCoefficients(coeffs, spec.shape, spec.adding_day, spec.turning_day)


@dataclass(frozen=True)
class EffectSummary:
    initial: float
    average: float


def summarize_effect(coeffs: TrendCoefficients, days: int, occ_per_day: int = 1) -> EffectSummary:
    """Inverse of :func:`solve_coefficients`: summaries implied by a curve."""
    rows = _active_basis_rows(coeffs.shape, coeffs.adding_day, coeffs.turning_day,
                              days, occ_per_day)
    values = rows @ coeffs.coeffs
    return EffectSummary(initial=float(values[0]), average=float(values.mean()))


def realize_curve(shape: str, mean: float, initial: float | None,
                  turning_day: int | None, days: int) -> np.ndarray:
    """Evaluate a shape over days 1..D from its (initial, mean, turn) summary.

    Used for availability profiles; day-level resolution only.
    """
    spec = TrendSpec(shape=shape, average=mean, initial=initial,
                     turning_day=turning_day, adding_day=1)
    coeffs = solve_coefficients(spec, days, occ_per_day=1)
    return np.array([coeffs.value_at(d) for d in range(1, days + 1)])
