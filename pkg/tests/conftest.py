import json
from pathlib import Path

import numpy as np
import pytest

from fleximrt.design import (
    AvailabilityProfile,
    BaselineBasis,
    CategorySchedule,
    DesignSpec,
    build_uniform_plan,
)
from fleximrt.trends import TrendSpec, solve_coefficients

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_json(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def sec4_design(tau: float = 1.0, days: int = 180) -> DesignSpec:
    """The simulation-study base design: 3 categories up front, 1 added halfway."""
    half = days // 2 + 1
    schedule = CategorySchedule(counts=(3, 1), adding_days=(1, half))
    return DesignSpec(
        days=days, occ_per_day=1, schedule=schedule,
        randomization=build_uniform_plan(schedule, days),
        availability=AvailabilityProfile.constant(tau, days),
        baseline=BaselineBasis(shape="linear_plateau", turning_day=28))


def sec4_trends(average: float = 0.1, initial: float = 0.01,
                days: int = 180) -> tuple[TrendSpec, ...]:
    half = days // 2 + 1
    first = TrendSpec(shape="linear_plateau", average=average, initial=initial,
                      turning_day=28, adding_day=1)
    added = TrendSpec(shape="linear_plateau", average=average, initial=initial,
                      turning_day=half - 1 + 28, adding_day=half)
    return (first, first, first, added)


def naive_information_matrix(spec: DesignSpec, specs) -> np.ndarray:
    """Independent oracle: literally sum the per-point block matrix day by day."""
    sets = [solve_coefficients(s, spec.days, spec.occ_per_day) for s in specs]
    dims = [c.dim for c in sets]
    sp = sum(dims)
    starts = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    lam = np.zeros((sp, sp))
    for d in range(1, spec.days + 1):
        tau_d = spec.availability.values[d - 1]
        for t in range(1, spec.occ_per_day + 1):
            block = np.zeros((sp, sp))
            for a, ca in enumerate(sets):
                pa = spec.randomization.category(d, a + 1)
                za = ca.basis(d, t, spec.occ_per_day)
                for b, cb in enumerate(sets):
                    pb = spec.randomization.category(d, b + 1)
                    zb = cb.basis(d, t, spec.occ_per_day)
                    w = pa * (1 - pa) if a == b else -pa * pb
                    block[starts[a]:starts[a + 1], starts[b]:starts[b + 1]] += (
                        w * np.outer(za, zb))
            lam += tau_d * block
    return lam


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)
