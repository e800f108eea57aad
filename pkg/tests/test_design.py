import numpy as np
import pytest

from fleximrt.design import (
    AvailabilityProfile,
    BaselineBasis,
    CategorySchedule,
    DesignError,
    DesignSpec,
    RandomizationPlan,
    build_uniform_plan,
    validate_design,
)

from conftest import sec4_design


def test_uniform_plan_switches_at_adding_day():
    schedule = CategorySchedule(counts=(3, 1), adding_days=(1, 91))
    plan = build_uniform_plan(schedule, 180)
    assert np.allclose(plan.probs[:90], [0.25, 0.25, 0.25, 0.25, 0.0])
    assert np.allclose(plan.probs[90:], [0.2, 0.2, 0.2, 0.2, 0.2])


def test_uniform_plan_single_category():
    plan = build_uniform_plan(CategorySchedule(counts=(1,), adding_days=(1,)), 5)
    assert np.allclose(plan.probs, 0.5)


def test_uniform_plan_three_batches():
    schedule = CategorySchedule(counts=(3, 1, 1), adding_days=(1, 46, 91))
    plan = build_uniform_plan(schedule, 135)
    assert np.allclose(plan.probs[45:90, :5], 0.2)
    assert np.allclose(plan.probs[45:90, 5], 0.0)
    assert np.allclose(plan.probs[90:], 1.0 / 6.0)


def test_uniform_plan_validates_clean(rng):
    for _ in range(25):
        days = int(rng.integers(5, 200))
        n_batches = int(rng.integers(1, 4))
        adding = [1]
        while len(adding) < n_batches:
            nxt = int(rng.integers(adding[-1] + 1, days + 1))
            if nxt > adding[-1] and nxt <= days:
                adding.append(nxt)
        counts = tuple(int(rng.integers(1, 4)) for _ in adding)
        schedule = CategorySchedule(counts=counts, adding_days=tuple(adding))
        plan = build_uniform_plan(schedule, days)
        spec = DesignSpec(days=days, occ_per_day=1, schedule=schedule,
                          randomization=plan,
                          availability=AvailabilityProfile.constant(0.8, days),
                          baseline=BaselineBasis(shape="constant", turning_day=None))
        assert validate_design(spec) == []
        assert np.allclose(plan.probs.sum(axis=1), 1.0, atol=1e-12)
        for d in range(1, days + 1):
            positive = int((plan.probs[d - 1, 1:] > 0).sum())
            assert positive == schedule.n_active(d)


def test_validate_flags_probability_before_adding_day():
    spec = sec4_design()
    probs = spec.randomization.probs.copy()
    probs[49, 4] = 0.2   # category 4 is added on day 91
    probs[49, 0] = 0.05  # keep the row summing to 1
    bad = DesignSpec(days=spec.days, occ_per_day=1, schedule=spec.schedule,
                     randomization=RandomizationPlan(probs),
                     availability=spec.availability, baseline=spec.baseline)
    codes = {v.code for v in validate_design(bad)}
    assert "probability_before_adding" in codes
    hit = [v for v in validate_design(bad) if v.code == "probability_before_adding"][0]
    assert hit.day == 50 and hit.category == 4


def test_validate_flags_row_sum():
    spec = sec4_design()
    probs = spec.randomization.probs.copy()
    probs[9, 0] = 0.24  # row sums to 0.99
    bad = DesignSpec(days=spec.days, occ_per_day=1, schedule=spec.schedule,
                     randomization=RandomizationPlan(probs),
                     availability=spec.availability, baseline=spec.baseline)
    assert any(v.code == "row_sum" and v.day == 10 for v in validate_design(bad))


def test_validate_flags_zero_probability_after_adding():
    schedule = CategorySchedule(counts=(2,), adding_days=(1,))
    probs = np.full((10, 3), 1 / 3)
    probs[4] = [2 / 3, 1 / 3, 0.0]
    spec = DesignSpec(days=10, occ_per_day=1, schedule=schedule,
                      randomization=RandomizationPlan(probs),
                      availability=AvailabilityProfile.constant(1.0, 10),
                      baseline=BaselineBasis(shape="constant", turning_day=None))
    assert any(v.code == "probability_zero_after_adding" and v.day == 5
               for v in validate_design(spec))


def test_schedule_rejects_mismatched_lengths():
    with pytest.raises(DesignError):
        CategorySchedule(counts=(3, 1), adding_days=(1,))


def test_schedule_ordering_violation():
    schedule = CategorySchedule(counts=(1, 1), adding_days=(1, 1))
    assert any(v.code == "schedule_order" for v in schedule.violations(30))


def test_category_adding_days():
    schedule = CategorySchedule(counts=(3, 1), adding_days=(1, 91))
    assert schedule.category_adding_days() == (1, 1, 1, 91)
    assert schedule.adding_day_of(4) == 91


def test_availability_constant_mean():
    profile = AvailabilityProfile.constant(0.7, 180)
    assert profile.violations(180) == []
    assert profile.values.mean() == pytest.approx(0.7, abs=1e-12)


def test_availability_linear_shape_mean_matches():
    profile = AvailabilityProfile.from_shape("linear", mean=0.7, days=180, initial=0.5)
    assert profile.violations(180) == []
    assert profile.values.mean() == pytest.approx(0.7, abs=1e-9)
    assert profile.values[0] == pytest.approx(0.5, abs=1e-12)


def test_availability_quadratic_shape():
    profile = AvailabilityProfile.from_shape("quadratic", mean=0.7, days=60,
                                             initial=0.5, turning_day=30)
    assert profile.violations(60) == []
    assert profile.values.mean() == pytest.approx(0.7, abs=1e-9)
    # vertex at the turning day
    assert profile.values[29] == pytest.approx(profile.values.max(), abs=1e-9)


def test_availability_out_of_range_flagged():
    profile = AvailabilityProfile(np.array([0.5, 1.2, 0.7]))
    assert any(v.code == "availability_range" and v.day == 2
               for v in profile.violations(3))


def test_availability_declared_mean_checked():
    profile = AvailabilityProfile(np.array([0.5, 0.5]), mean=0.7)
    assert any(v.code == "availability_mean" for v in profile.violations(2))


def test_baseline_default_matches_simulation_study():
    basis = BaselineBasis()
    assert basis.dim == 2
    assert np.allclose(basis.row(180), [1.0, 27.0])


def test_plan_violation_messages_carry_coordinates():
    spec = sec4_design()
    probs = spec.randomization.probs.copy()
    probs[0, 0] = 1.5
    bad = DesignSpec(days=spec.days, occ_per_day=1, schedule=spec.schedule,
                     randomization=RandomizationPlan(probs),
                     availability=spec.availability, baseline=spec.baseline)
    messages = [str(v) for v in validate_design(bad)]
    assert any("day 1" in m for m in messages)
