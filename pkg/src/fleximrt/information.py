"""Information matrix and formulated power / precision under the three tests.

The per-category effect estimators have asymptotic covariance (on the
standardized scale) equal to the inverse of a block information matrix:
diagonal block (m, m) accumulates tau_d * pi_md (1 - pi_md) Z Z', block
(m, m') accumulates -tau_d * pi_md pi_m'd Z Z', summed over decision
points.  Categories contribute nothing before their adding day because
their allocation probability is zero there.

The test statistic is referred to one of three distributions: a chi-square
(large samples) or one of two Hotelling T-squared variants (small-sample
degrees of freedom N - q - 1 or N).  Power and precision thresholds follow
from noncentral chi-square / F tail probabilities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import distributions as dist
from .design import DesignSpec, require_valid
from .trends import TrendCoefficients

EIGEN_RATIO_FLOOR = 1e-10


class AnalyticError(ValueError):
    pass


class SingularInformationError(AnalyticError):
    """Design cannot identify all effect coefficients."""


class InfeasibleSampleSizeError(AnalyticError):
    """N violates a degrees-of-freedom constraint for the chosen statistic."""


class TestKind(str, enum.Enum):
    CHI_SQUARE = "chi_square"
    HOTELLING_N = "hotelling_n"
    HOTELLING_N_Q_1 = "hotelling_n_q_1"


_TEST_ALIASES = {
    "chi": TestKind.CHI_SQUARE,
    "chi square": TestKind.CHI_SQUARE,
    "chi squared": TestKind.CHI_SQUARE,
    "chi_square": TestKind.CHI_SQUARE,
    "chi-square": TestKind.CHI_SQUARE,
    "hotelling n": TestKind.HOTELLING_N,
    "hotelling_n": TestKind.HOTELLING_N,
    "hotelling n-q-1": TestKind.HOTELLING_N_Q_1,
    "hotelling n q 1": TestKind.HOTELLING_N_Q_1,
    "hotelling_n_q_1": TestKind.HOTELLING_N_Q_1,
}


def parse_test_kind(name: str) -> TestKind:
    key = " ".join(str(name).strip().lower().replace("_", " ").replace("-", " ").split())
    if key in ("hotelling n 1", "hotelling n1"):
        raise AnalyticError(
            "test 'hotelling N-1' is not supported; choose chi, hotelling N, "
            "or hotelling N-q-1")
    alias = {k.replace("_", " ").replace("-", " "): v for k, v in _TEST_ALIASES.items()}
    if key in alias:
        return alias[key]
    raise AnalyticError(f"unknown test statistic {name!r}")


@dataclass(frozen=True)
class TestStatistic:
    """A test kind bound to the model dimensions (sum of p_m, q)."""

    kind: TestKind
    sum_p: int
    q: int

    @property
    def df1(self) -> int:
        return self.sum_p

    def df2(self, n: int) -> int | None:
        if self.kind == TestKind.CHI_SQUARE:
            return None
        if self.kind == TestKind.HOTELLING_N_Q_1:
            return n - self.q - self.sum_p
        return n - self.sum_p + 1

    @property
    def n_min(self) -> int:
        if self.kind == TestKind.CHI_SQUARE:
            return self.sum_p + 1
        if self.kind == TestKind.HOTELLING_N_Q_1:
            return self.q + self.sum_p + 1
        return self.sum_p

    def check_feasible(self, n: int) -> None:
        if n < self.n_min:
            raise InfeasibleSampleSizeError(
                f"N={n} infeasible for {self.kind.value} with sum_p={self.sum_p}, "
                f"q={self.q}; need N >= {self.n_min}")

    def t2_scale(self, n: int) -> float:
        """Multiplier turning the F reference into the T-squared scale."""
        if self.kind == TestKind.CHI_SQUARE:
            return 1.0
        if self.kind == TestKind.HOTELLING_N_Q_1:
            return self.sum_p * (n - self.q - 1) / (n - self.q - self.sum_p)
        return self.sum_p * n / (n - self.sum_p + 1)

    def critical_value(self, n: int, alpha: float) -> float:
        """Rejection threshold for the quadratic-form statistic itself."""
        self.check_feasible(n)
        if self.kind == TestKind.CHI_SQUARE:
            return dist.noncentral_chisq_quantile(1.0 - alpha, self.df1)
        f_crit = dist.noncentral_f_quantile(1.0 - alpha, self.df1, self.df2(n))
        return self.t2_scale(n) * f_crit


@dataclass(frozen=True)
class InformationMatrix:
    """Summed per-day information for the stacked effect coefficients."""

    matrix: np.ndarray
    block_dims: tuple[int, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        sp = sum(self.block_dims)
        if matrix.shape != (sp, sp):
            raise AnalyticError(f"matrix shape {matrix.shape} != ({sp}, {sp})")
        matrix = matrix.copy()
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def sum_p(self) -> int:
        return self.matrix.shape[0]

    def block(self, m: int, m_other: int) -> np.ndarray:
        starts = np.concatenate([[0], np.cumsum(self.block_dims)])
        return self.matrix[starts[m - 1]:starts[m], starts[m_other - 1]:starts[m_other]]

    def covariance_scaled(self) -> np.ndarray:
        """Asymptotic covariance of the standardized estimates, times N.

        Materialized only for reporting; power never inverts the matrix.
        """
        return np.linalg.inv(self.matrix)


def build_information_matrix(spec: DesignSpec,
                             coefficient_sets: list[TrendCoefficients]) -> InformationMatrix:
    """Accumulate the availability-weighted allocation moments over all points."""
    require_valid(spec)
    if len(coefficient_sets) != spec.n_categories:
        raise AnalyticError(
            f"{len(coefficient_sets)} coefficient sets for {spec.n_categories} categories")
    adding = spec.schedule.category_adding_days()
    for m, coeffs in enumerate(coefficient_sets, start=1):
        if coeffs.adding_day != adding[m - 1]:
            raise AnalyticError(
                f"category {m}: coefficients declare adding day {coeffs.adding_day}, "
                f"schedule says {adding[m - 1]}")

    D, T = spec.days, spec.occ_per_day
    tau = np.repeat(spec.availability.values, T)
    pis = np.repeat(spec.randomization.category_matrix(), T, axis=0)

    # basis rows per category over every decision point; rows before the
    # adding day are irrelevant because the matching probability is zero
    z_blocks = []
    for coeffs in coefficient_sets:
        rows = np.array([coeffs.basis(d, t, T)
                         for d in range(1, D + 1) for t in range(1, T + 1)])
        z_blocks.append(rows)

    dims = tuple(c.dim for c in coefficient_sets)
    starts = np.concatenate([[0], np.cumsum(dims)])
    sp = int(starts[-1])
    lam = np.zeros((sp, sp))
    for a in range(len(dims)):
        za = z_blocks[a]
        pa = pis[:, a]
        for b in range(a, len(dims)):
            zb = z_blocks[b]
            pb = pis[:, b]
            weight = tau * (pa * (1.0 - pa) if a == b else -pa * pb)
            block = np.einsum("i,ij,ik->jk", weight, za, zb)
            lam[starts[a]:starts[a + 1], starts[b]:starts[b + 1]] = block
            if b != a:
                lam[starts[b]:starts[b + 1], starts[a]:starts[a + 1]] = block.T
    lam = 0.5 * (lam + lam.T)

    eigenvalues = np.linalg.eigvalsh(lam)
    if eigenvalues[0] <= EIGEN_RATIO_FLOOR * max(eigenvalues[-1], 0.0):
        raise SingularInformationError(
            f"information matrix is singular (eigenvalue range "
            f"[{eigenvalues[0]:.3e}, {eigenvalues[-1]:.3e}]); check that every "
            "category has positive probability over its active period")
    return InformationMatrix(lam, dims)


def noncentrality(info: InformationMatrix, deltas: np.ndarray, n: int) -> float:
    """N times the quadratic form of the stacked standardized effects."""
    deltas = np.asarray(deltas, dtype=float)
    if deltas.shape != (info.sum_p,):
        raise AnalyticError(f"delta vector has shape {deltas.shape}, expected ({info.sum_p},)")
    if n < 1:
        raise AnalyticError(f"N must be >= 1, got {n}")
    value = float(n * deltas @ info.matrix @ deltas)
    return max(value, 0.0)


def formulated_power(stat: TestStatistic, ncp: float, n: int, alpha: float) -> float:
    """Rejection probability at sample size ``n`` under noncentrality ``ncp``."""
    stat.check_feasible(n)
    if stat.kind == TestKind.CHI_SQUARE:
        crit = dist.noncentral_chisq_quantile(1.0 - alpha, stat.df1)
        return dist.noncentral_chisq_sf(crit, stat.df1, ncp)
    df2 = stat.df2(n)
    crit = dist.noncentral_f_quantile(1.0 - alpha, stat.df1, df2)
    return dist.noncentral_f_sf(crit, stat.df1, df2, ncp)


def precision_bound(stat: TestStatistic, n: int, alpha: float) -> float:
    """Upper bound the estimation pivot stays below with probability 1 - alpha."""
    stat.check_feasible(n)
    return stat.critical_value(n, alpha) / n


def formulated_coverage(stat: TestStatistic, n: int, precision_quadform: float) -> float:
    """P(pivot <= n * precision_quadform) under the statistic's null law."""
    stat.check_feasible(n)
    if precision_quadform < 0:
        raise AnalyticError(f"precision quadratic form must be >= 0, got {precision_quadform}")
    value = n * precision_quadform
    if stat.kind == TestKind.CHI_SQUARE:
        return dist.noncentral_chisq_cdf(value, stat.df1)
    return dist.noncentral_f_cdf(value / stat.t2_scale(n), stat.df1, stat.df2(n))
