"""Trial design: calendar, category-adding schedule, randomization, availability.

All day and occasion indices are 1-based at the interfaces.  Value types are
immutable after construction and safe to share across threads.  Validation
returns violations as data (``validate_design``); constructors raise only on
structurally meaningless input (wrong shapes, non-numeric).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import trends

ROW_SUM_TOL = 1e-9
MEAN_TOL = 1e-9


class DesignError(ValueError):
    """Structurally invalid design input."""


@dataclass(frozen=True)
class Violation:
    """One invariant breach, with coordinates when they exist."""

    code: str
    message: str
    day: int | None = None
    category: int | None = None

    def __str__(self) -> str:
        where = []
        if self.day is not None:
            where.append(f"day {self.day}")
        if self.category is not None:
            where.append(f"category {self.category}")
        suffix = f" ({', '.join(where)})" if where else ""
        return f"{self.code}: {self.message}{suffix}"


class DesignValidationError(DesignError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class CategorySchedule:
    """How many intervention categories start on which days.

    ``counts[j]`` categories are introduced on ``adding_days[j]``; the first
    batch starts the study (adding day <= 1 is normalized to day 1).
    """

    counts: tuple[int, ...]
    adding_days: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        days = tuple(int(d) for d in self.adding_days)
        if len(counts) != len(days):
            raise DesignError(
                f"counts ({len(counts)}) and adding_days ({len(days)}) differ in length"
            )
        if not counts:
            raise DesignError("schedule needs at least one category batch")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "adding_days", days)

    @property
    def n_categories(self) -> int:
        return sum(self.counts)

    def category_adding_days(self) -> tuple[int, ...]:
        """Adding day per category, categories ordered by batch."""
        out: list[int] = []
        for count, day in zip(self.counts, self.adding_days):
            out.extend([max(day, 1)] * count)
        return tuple(out)

    def adding_day_of(self, category: int) -> int:
        """1-based category index -> its adding day."""
        return self.category_adding_days()[category - 1]

    def n_active(self, day: int) -> int:
        return sum(c for c, d in zip(self.counts, self.adding_days) if max(d, 1) <= day)

    def violations(self, days: int) -> list[Violation]:
        out = []
        for j, c in enumerate(self.counts):
            if c < 1:
                out.append(Violation("schedule_count", f"batch {j} has count {c} < 1"))
        if self.adding_days[0] > 1:
            out.append(Violation(
                "schedule_start", f"first adding day must be <= 1, got {self.adding_days[0]}"))
        for prev, cur in zip(self.adding_days, self.adding_days[1:]):
            if cur <= prev or cur <= 1:
                out.append(Violation(
                    "schedule_order",
                    f"adding days must be strictly increasing after day 1, got {self.adding_days}"))
                break
        if self.adding_days[-1] > days:
            out.append(Violation(
                "schedule_range",
                f"last adding day {self.adding_days[-1]} beyond study days {days}"))
        return out


@dataclass(frozen=True)
class RandomizationPlan:
    """Per-day allocation probabilities, control in column 0."""

    probs: np.ndarray  # D x (M+1)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 2 or probs.shape[1] < 2:
            raise DesignError(f"probability matrix must be D x (M+1), got shape {probs.shape}")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def days(self) -> int:
        return self.probs.shape[0]

    @property
    def n_categories(self) -> int:
        return self.probs.shape[1] - 1

    def control(self, day: int) -> float:
        return float(self.probs[day - 1, 0])

    def category(self, day: int, category: int) -> float:
        return float(self.probs[day - 1, category])

    def category_matrix(self) -> np.ndarray:
        """D x M view of the intervention columns."""
        return self.probs[:, 1:]

    def violations(self, schedule: CategorySchedule, days: int) -> list[Violation]:
        out = []
        if self.days != days:
            out.append(Violation(
                "plan_shape", f"plan has {self.days} rows for a {days}-day study"))
            return out
        if self.n_categories != schedule.n_categories:
            out.append(Violation(
                "plan_shape",
                f"plan has {self.n_categories} intervention columns, "
                f"schedule defines {schedule.n_categories}"))
            return out
        probs = self.probs
        bad = np.argwhere((probs < 0.0) | (probs > 1.0))
        for row, col in bad:
            out.append(Violation(
                "probability_range", f"probability {probs[row, col]:g} outside [0, 1]",
                day=int(row) + 1, category=int(col)))
        row_sums = probs.sum(axis=1)
        for row in np.nonzero(np.abs(row_sums - 1.0) > ROW_SUM_TOL)[0]:
            out.append(Violation(
                "row_sum", f"row sum {row_sums[row]:.12g} != 1", day=int(row) + 1))
        adding = schedule.category_adding_days()
        for m, a_m in enumerate(adding, start=1):
            col = probs[:, m]
            early = np.nonzero(col[: a_m - 1] > 0.0)[0]
            for row in early:
                out.append(Violation(
                    "probability_before_adding",
                    "probability positive before adding day "
                    f"(adding day {a_m})", day=int(row) + 1, category=m))
            # zero probability after the adding day would make the
            # information matrix singular
            late = np.nonzero(col[a_m - 1:] <= 0.0)[0]
            for row in late:
                out.append(Violation(
                    "probability_zero_after_adding",
                    f"probability must be positive from adding day {a_m} on",
                    day=int(row) + a_m, category=m))
        return out


def build_uniform_plan(schedule: CategorySchedule, days: int) -> RandomizationPlan:
    """Equal allocation over control plus whatever categories are active."""
    for v in schedule.violations(days):
        raise DesignValidationError([v])
    n_cat = schedule.n_categories
    probs = np.zeros((days, n_cat + 1))
    adding = schedule.category_adding_days()
    for d in range(1, days + 1):
        active = [m for m, a_m in enumerate(adding, start=1) if a_m <= d]
        share = 1.0 / (1 + len(active))
        probs[d - 1, 0] = share
        for m in active:
            probs[d - 1, m] = share
    return RandomizationPlan(probs)


@dataclass(frozen=True)
class AvailabilityProfile:
    """Expected availability per day.

    ``values[d-1]`` is the probability a participant can be randomized on
    day ``d``.  Shape metadata is kept for serialization; the realized
    vector is authoritative.
    """

    values: np.ndarray
    shape: str = "explicit"
    mean: float | None = None
    initial: float | None = None
    turning_day: int | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).copy()
        if values.ndim != 1 or values.size < 1:
            raise DesignError("availability needs a 1-D vector with at least one day")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.mean is None:
            object.__setattr__(self, "mean", float(values.mean()))

    @classmethod
    def constant(cls, mean: float, days: int) -> "AvailabilityProfile":
        return cls(np.full(days, float(mean)), shape="constant", mean=float(mean),
                   initial=float(mean))

    @classmethod
    def from_shape(cls, shape: str, mean: float, days: int,
                   initial: float | None = None,
                   turning_day: int | None = None) -> "AvailabilityProfile":
        shape = trends.canonical_shape(shape)
        if shape == trends.CONSTANT:
            return cls.constant(mean, days)
        values = trends.realize_curve(shape, mean, initial, turning_day, days)
        return cls(values, shape=shape, mean=float(mean), initial=initial,
                   turning_day=turning_day)

    @property
    def days(self) -> int:
        return self.values.size

    def violations(self, days: int) -> list[Violation]:
        out = []
        if self.days != days:
            out.append(Violation(
                "availability_shape",
                f"availability covers {self.days} days for a {days}-day study"))
            return out
        for d in np.nonzero((self.values <= 0.0) | (self.values > 1.0))[0]:
            out.append(Violation(
                "availability_range",
                f"availability {self.values[d]:g} outside (0, 1]", day=int(d) + 1))
        if self.mean is not None and abs(self.values.mean() - self.mean) > MEAN_TOL:
            out.append(Violation(
                "availability_mean",
                f"realized mean {self.values.mean():.12g} != declared {self.mean:g}"))
        return out


@dataclass(frozen=True)
class BaselineBasis:
    """Shape of the time-trend block shared by all observations.

    Defaults to a linear-plateau basis with turning day 28, the working
    model used throughout the reproduction configurations.
    """

    shape: str = trends.LINEAR_PLATEAU
    turning_day: int | None = 28

    def __post_init__(self):
        shape = trends.canonical_shape(self.shape)
        object.__setattr__(self, "shape", shape)
        if shape in (trends.QUADRATIC, trends.LINEAR_PLATEAU) and self.turning_day is None:
            raise DesignError(f"baseline basis shape {shape} needs a turning day")

    @property
    def dim(self) -> int:
        return trends.SHAPE_DIM[self.shape]

    def row(self, day: int, occasion: int = 1, occ_per_day: int = 1) -> np.ndarray:
        return trends.basis_vector(self.shape, day, occasion, occ_per_day, self.turning_day)


@dataclass(frozen=True)
class DesignSpec:
    """Complete trial design for sizing and simulation."""

    days: int
    occ_per_day: int
    schedule: CategorySchedule
    randomization: RandomizationPlan
    availability: AvailabilityProfile
    baseline: BaselineBasis = field(default_factory=BaselineBasis)

    @property
    def q(self) -> int:
        return self.baseline.dim

    @property
    def n_categories(self) -> int:
        return self.schedule.n_categories

    @property
    def n_points(self) -> int:
        return self.days * self.occ_per_day


def validate_design(spec: DesignSpec) -> list[Violation]:
    """Every invariant breach, with day/category coordinates; empty if valid."""
    out: list[Violation] = []
    if spec.days < 1:
        out.append(Violation("days", f"days must be >= 1, got {spec.days}"))
    if spec.occ_per_day < 1:
        out.append(Violation("occ_per_day", f"occ_per_day must be >= 1, got {spec.occ_per_day}"))
    if spec.q < 1:
        out.append(Violation("q", f"baseline dimension must be >= 1, got {spec.q}"))
    if out:
        return out
    out.extend(spec.schedule.violations(spec.days))
    out.extend(spec.randomization.violations(spec.schedule, spec.days))
    out.extend(spec.availability.violations(spec.days))
    if (spec.baseline.turning_day is not None
            and not 1 <= spec.baseline.turning_day <= spec.days):
        out.append(Violation(
            "baseline_turning_day",
            f"baseline turning day {spec.baseline.turning_day} outside 1..{spec.days}"))
    return out


def require_valid(spec: DesignSpec) -> DesignSpec:
    violations = validate_design(spec)
    if violations:
        raise DesignValidationError(violations)
    return spec
