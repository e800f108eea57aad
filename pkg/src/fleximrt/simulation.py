"""Monte Carlo lab: data generation, least-squares fit, leverage-corrected
sandwich covariance, and per-replicate tests / coverage checks.

Data generation follows the trial protocol: availability is Bernoulli per
decision point, category assignment is multinomial over the day's
randomization row given availability (control otherwise), errors are
multivariate normal under one of four models, and the outcome adds the
baseline trend plus centered-indicator effect terms.

The analysis side always fits the truth's mean structure; the working model
in a scenario only determines the sample size being stress-tested.  This is
what makes mis-specification studies meaningful: an N sized under wrong
assumptions is handed to a correct analysis.

Replicates draw from counter-based Philox streams keyed by (master seed,
replicate index), so results are identical no matter how replicates are
scheduled across workers.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .design import DesignSpec, require_valid
from .information import TestStatistic
from .sizing import SizingMethod, SizingRequest, solve_sample_size
from .trends import TrendSpec, solve_coefficients

MAX_FAILURE_FRACTION = 0.05
SINGULAR_EIGEN_RATIO = 1e-10


class SimulationError(ValueError):
    pass


class ReplicateFailure(RuntimeError):
    """A single replicate could not be analyzed (rank deficiency etc.)."""


class ErrorKind(str, enum.Enum):
    IID_NORMAL = "iid_normal"
    EXCHANGEABLE = "exchangeable"
    AR1 = "ar1"
    HETEROSCEDASTIC_LINEAR = "heteroscedastic_linear"


@dataclass(frozen=True)
class ErrorModel:
    """Residual distribution for the generated outcomes.

    ``sigma`` is the root *mean* residual variance; the heteroscedastic
    model tilts per-day variances around sigma**2 by ``variance_slope`` per
    day while keeping the mean variance exactly sigma**2.  The AR(1) model
    is stationary, so the marginal variance is sigma**2 on every day
    (innovation variance (1 - phi**2) sigma**2).
    """

    kind: ErrorKind = ErrorKind.IID_NORMAL
    sigma: float = 1.0
    rho: float = 0.0
    phi: float = 0.0
    variance_slope: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ErrorKind(self.kind))
        # sigma == 0 is the noiseless oracle mode used by recovery tests
        if self.sigma < 0:
            raise SimulationError(f"sigma must be >= 0, got {self.sigma}")
        if abs(self.rho) >= 1:
            raise SimulationError(f"|rho| must be < 1, got {self.rho}")
        if abs(self.phi) >= 1:
            raise SimulationError(f"|phi| must be < 1, got {self.phi}")

    def day_variances(self, days: int) -> np.ndarray:
        base = np.full(days, self.sigma ** 2)
        if self.kind != ErrorKind.HETEROSCEDASTIC_LINEAR:
            return base
        x = np.arange(days, dtype=float)
        variances = base + self.variance_slope * (x - x.mean())
        if self.sigma > 0 and variances.min() <= 0:
            raise SimulationError(
                f"variance slope {self.variance_slope} drives day variances "
                f"non-positive (min {variances.min():g})")
        return variances

    def covariance(self, days: int, occ_per_day: int = 1) -> np.ndarray:
        """Covariance over all decision points, day structure repeated per occasion."""
        n_points = days * occ_per_day
        if self.sigma == 0:
            return np.zeros((n_points, n_points))
        if self.kind == ErrorKind.AR1:
            idx = np.arange(n_points)
            return self.sigma ** 2 * self.phi ** np.abs(idx[:, None] - idx[None, :])
        if self.kind == ErrorKind.EXCHANGEABLE:
            cov = np.full((n_points, n_points), self.rho * self.sigma ** 2)
            np.fill_diagonal(cov, self.sigma ** 2)
            return cov
        variances = np.repeat(self.day_variances(days), occ_per_day)
        return np.diag(variances)


@dataclass(frozen=True)
class TruthSpec:
    """Data-generating side of a scenario."""

    design: DesignSpec
    trends: tuple[TrendSpec, ...]
    error_model: ErrorModel = field(default_factory=ErrorModel)
    alpha_coeffs: tuple[float, ...] | None = None
    seed: int = 0
    replicates: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "trends", tuple(self.trends))
        if self.alpha_coeffs is None:
            object.__setattr__(self, "alpha_coeffs", (0.0,) * self.design.q)
        else:
            object.__setattr__(self, "alpha_coeffs", tuple(self.alpha_coeffs))
        if len(self.alpha_coeffs) != self.design.q:
            raise SimulationError(
                f"{len(self.alpha_coeffs)} baseline coefficients for q={self.design.q}")
        if self.replicates < 1:
            raise SimulationError(f"replicates must be >= 1, got {self.replicates}")
        if len(self.trends) != self.design.n_categories:
            raise SimulationError(
                f"{len(self.trends)} trends for {self.design.n_categories} categories")


@dataclass(frozen=True)
class ScenarioConfig:
    """Truth plus the (possibly mis-specified) working model used for sizing."""

    truth: TruthSpec
    working: SizingRequest
    n: int | None = None
    scenario_id: str = "scenario"

    def __post_init__(self):
        if (self.truth.design.days != self.working.design.days
                or self.truth.design.occ_per_day != self.working.design.occ_per_day):
            raise SimulationError("truth and working designs must share days and occ_per_day")

    @property
    def mode(self) -> str:
        return "power" if self.working.method == SizingMethod.POWER else "coverage"


@dataclass(frozen=True)
class McResult:
    scenario_id: str
    stat_kind: str
    n: int
    replicates: int
    successes: int
    fraction: float
    se: float
    failures: int
    mode: str

    def csv_row(self) -> str:
        return (f"{self.scenario_id},{self.stat_kind},{self.n},{self.replicates},"
                f"{self.fraction:.6f},{self.se:.6f},{self.failures}")

    @staticmethod
    def csv_header() -> str:
        return "scenario_id,stat,n,replicates,fraction,se,failures"


@dataclass(frozen=True)
class CompiledModel:
    """Per-decision-point arrays shared by generation and fitting."""

    baseline: np.ndarray          # (P, q)
    z_blocks: tuple[np.ndarray, ...]
    pis: np.ndarray               # (P, M) intervention probabilities
    alloc_cum: np.ndarray         # (P, M+1) cumulative over (control, categories)
    tau: np.ndarray               # (P,)
    chol: np.ndarray              # (P, P) lower factor of the error covariance
    theta: np.ndarray             # (q + sum_p,) true coefficients on the raw scale
    q: int
    dims: tuple[int, ...]

    @property
    def n_points(self) -> int:
        return self.baseline.shape[0]

    @property
    def sum_p(self) -> int:
        return sum(self.dims)

    @property
    def ptot(self) -> int:
        return self.q + self.sum_p

    @property
    def beta_true(self) -> np.ndarray:
        return self.theta[self.q:]


def compile_model(truth: TruthSpec) -> CompiledModel:
    design = require_valid(truth.design)
    D, T = design.days, design.occ_per_day
    sets = [solve_coefficients(spec, D, T) for spec in truth.trends]
    baseline = np.array([design.baseline.row(d, t, T)
                         for d in range(1, D + 1) for t in range(1, T + 1)])
    z_blocks = tuple(
        np.array([c.basis(d, t, T) for d in range(1, D + 1) for t in range(1, T + 1)])
        for c in sets)
    pis = np.repeat(design.randomization.category_matrix(), T, axis=0)
    alloc = np.repeat(design.randomization.probs, T, axis=0)
    alloc_cum = np.cumsum(alloc, axis=1)
    alloc_cum[:, -1] = 1.0
    tau = np.repeat(design.availability.values, T)
    cov = truth.error_model.covariance(D, T)
    chol = (np.zeros_like(cov) if truth.error_model.sigma == 0
            else np.linalg.cholesky(cov))
    # noiseless mode: effects are already on the raw outcome scale
    sigma_bar = truth.error_model.sigma if truth.error_model.sigma > 0 else 1.0
    deltas = np.concatenate([c.coeffs for c in sets])
    theta = np.concatenate([np.asarray(truth.alpha_coeffs, dtype=float),
                            deltas * sigma_bar])
    return CompiledModel(baseline=baseline, z_blocks=z_blocks, pis=pis,
                         alloc_cum=alloc_cum, tau=tau, chol=chol, theta=theta,
                         q=design.q, dims=tuple(c.dim for c in sets))


@dataclass(frozen=True)
class Dataset:
    """One generated trial: availability, assigned category codes, outcomes."""

    availability: np.ndarray  # (n, P) 0/1
    categories: np.ndarray    # (n, P) codes 0..M, 0 = control
    outcomes: np.ndarray      # (n, P)
    model: CompiledModel
    design_rows: np.ndarray   # (n, P, ptot), availability not yet applied


def _design_tensor(model: CompiledModel, categories: np.ndarray) -> np.ndarray:
    """(n, P, ptot) design rows: baseline block plus centered-indicator blocks."""
    n = categories.shape[0]
    parts = [np.broadcast_to(model.baseline, (n, *model.baseline.shape))]
    for m, z in enumerate(model.z_blocks, start=1):
        centered = (categories == m).astype(float) - model.pis[:, m - 1]
        parts.append(centered[:, :, None] * z[None, :, :])
    return np.concatenate(parts, axis=2)


def generate_dataset(truth: TruthSpec, n: int, rng: np.random.Generator,
                     model: CompiledModel | None = None) -> Dataset:
    """Draw one trial of ``n`` participants from the truth specification."""
    if model is None:
        model = compile_model(truth)
    P = model.n_points
    availability = (rng.random((n, P)) < model.tau[None, :]).astype(float)
    u = rng.random((n, P))
    categories = (u[:, :, None] >= model.alloc_cum[None, :, :-1]).sum(axis=2)
    categories = np.where(availability > 0, categories, 0)
    noise = rng.standard_normal((n, P)) @ model.chol.T
    x = _design_tensor(model, categories)
    outcomes = np.einsum("npi,i->np", x, model.theta) + noise
    return Dataset(availability=availability, categories=categories,
                   outcomes=outcomes, model=model, design_rows=x)


@dataclass(frozen=True)
class FitResult:
    theta: np.ndarray
    residuals: np.ndarray   # (n, P), zero where unavailable
    gram: np.ndarray        # sum_i X_i X_i', availability applied
    x: np.ndarray           # (n, P, ptot), availability applied


def fit_least_squares(dataset: Dataset) -> FitResult:
    """Least squares over available observations; raises on rank deficiency."""
    x = dataset.design_rows * dataset.availability[:, :, None]
    gram = np.einsum("npi,npj->ij", x, x)
    eigenvalues = np.linalg.eigvalsh(gram)
    if eigenvalues[0] <= SINGULAR_EIGEN_RATIO * max(eigenvalues[-1], 0.0):
        raise ReplicateFailure("rank-deficient design matrix")
    rhs = np.einsum("npi,np->i", x, dataset.outcomes)
    theta = np.linalg.solve(gram, rhs)
    residuals = (dataset.outcomes - np.einsum("npi,i->np", x, theta))
    residuals = residuals * dataset.availability
    return FitResult(theta=theta, residuals=residuals, gram=gram, x=x)


def mancl_derouen_covariance(dataset: Dataset, fit: FitResult) -> tuple[np.ndarray, int]:
    """Leverage-corrected sandwich covariance of the effect block.

    Returns (sum_p x sum_p matrix, number of dropped participants).  The
    per-participant inverse leverage factor (I - H_i)^{-1} is applied
    through the Woodbury identity, so no P x P matrix is ever formed:
    X_i'(I - H_i)^{-1} e_i = v_i + S_i (G - S_i)^{-1} v_i with
    S_i = X_i'X_i and v_i = X_i'e_i.
    """
    n = dataset.outcomes.shape[0]
    q = dataset.model.q
    s = np.einsum("npi,npj->nij", fit.x, fit.x)
    v = np.einsum("npi,np->ni", fit.x, fit.residuals)
    k = fit.gram[None, :, :] - s
    dropped = 0
    try:
        u = np.linalg.solve(k, v[:, :, None])[:, :, 0]
        w = v + np.einsum("nij,nj->ni", s, u)
    except np.linalg.LinAlgError:
        rows = []
        for i in range(n):
            try:
                u_i = np.linalg.solve(k[i], v[i])
            except np.linalg.LinAlgError:
                dropped += 1
                continue
            rows.append(v[i] + s[i] @ u_i)
        if not rows:
            raise ReplicateFailure("all participants dropped: leverage factor singular")
        w = np.array(rows)
    kept = n - dropped
    w_full = w.T @ w / kept
    gram_inv = np.linalg.inv(fit.gram / n)
    q_inv_block = gram_inv[q:, q:]
    sigma_beta = q_inv_block @ w_full[q:, q:] @ q_inv_block
    sigma_beta = 0.5 * (sigma_beta + sigma_beta.T)
    return sigma_beta, dropped


def _replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    stream = np.random.SeedSequence(entropy=seed, spawn_key=(replicate,))
    return np.random.Generator(np.random.Philox(stream))


def run_replicate(scenario: ScenarioConfig, n: int, rng: np.random.Generator,
                  model: CompiledModel | None = None,
                  stat: TestStatistic | None = None) -> bool:
    """One replicate: True means rejected (power mode) or covered (coverage mode)."""
    if model is None:
        model = compile_model(scenario.truth)
    if stat is None:
        stat = TestStatistic(scenario.working.stat_kind, sum_p=model.sum_p, q=model.q)
    dataset = generate_dataset(scenario.truth, n, rng, model=model)
    fit = fit_least_squares(dataset)
    sigma_beta, _ = mancl_derouen_covariance(dataset, fit)
    critical = stat.critical_value(n, scenario.working.alpha)
    beta_hat = fit.theta[model.q:]
    if scenario.mode == "power":
        center = beta_hat
    else:
        center = beta_hat - model.beta_true
    try:
        solved = np.linalg.solve(sigma_beta, center)
    except np.linalg.LinAlgError:
        raise ReplicateFailure("singular covariance estimate")
    statistic = float(n * center @ solved)
    if scenario.mode == "power":
        return statistic > critical
    return statistic <= critical


def _run_block(scenario: ScenarioConfig, n: int, replicates: range) -> tuple[int, int]:
    model = compile_model(scenario.truth)
    stat = TestStatistic(scenario.working.stat_kind, sum_p=model.sum_p, q=model.q)
    successes = failures = 0
    for rep in replicates:
        rng = _replicate_rng(scenario.truth.seed, rep)
        try:
            if run_replicate(scenario, n, rng, model=model, stat=stat):
                successes += 1
        except ReplicateFailure:
            failures += 1
    return successes, failures


def resolve_n(scenario: ScenarioConfig) -> int:
    if scenario.n is not None:
        return scenario.n
    return solve_sample_size(scenario.working).n


def run_study(scenario: ScenarioConfig, jobs: int = 1) -> McResult:
    """Aggregate replicates; deterministic for a fixed seed at any job count."""
    n = resolve_n(scenario)
    total = scenario.truth.replicates
    if jobs <= 1:
        successes, failures = _run_block(scenario, n, range(total))
    else:
        chunks = [range(start, min(start + (total + jobs - 1) // jobs, total))
                  for start in range(0, total, (total + jobs - 1) // jobs)]
        successes = failures = 0
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for s, f in pool.map(_run_block, [scenario] * len(chunks),
                                 [n] * len(chunks), chunks):
                successes += s
                failures += f
    if failures > MAX_FAILURE_FRACTION * total:
        raise SimulationError(
            f"{failures}/{total} replicates failed; study aborted")
    completed = total - failures
    fraction = successes / completed if completed else float("nan")
    se = float(np.sqrt(fraction * (1.0 - fraction) / completed)) if completed else float("nan")
    return McResult(scenario_id=scenario.scenario_id,
                    stat_kind=scenario.working.stat_kind.value,
                    n=n, replicates=total, successes=successes,
                    fraction=fraction, se=se, failures=failures,
                    mode=scenario.mode)
