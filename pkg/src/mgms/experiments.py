"""Monte Carlo and exact-enumeration experiments on density and deviations.

The density diagnostic for a measure P and gauge phi tracks

    d_n = log2 P[x_1^n] - log2 phi(2^-n)

along sampled points: drift to -infinity is the regime where the gauge'd
Hausdorff measure is infinite, drift to +infinity the regime where it
vanishes.  Limit statements cannot be verified at desk scale, so runs
report *trends*: the sign of the Theil-Sen slope of the median series over
the large-n part of the grid, with its confidence band attached as
metadata.  A parameter-admissibility gate (c < tau_hat * delta / 3, with
tau_hat the certified lower bound on the base-2 scale) marks runs outside
the proven regime INCONCLUSIVE before any statistics are computed.

Deviation experiments check explicit Hoeffding-style tail bounds against
empirical frequencies; the zero-count bound is assembled from the exact
chain-length counts of the prefix, so it is rigorous rather than
asymptotic, with the non-constructive constants reported as fits only.

All experiments are deterministic functions of their config: trials and
seeds key counter-based substreams, and reports embed the config plus its
hash so reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from .analytics import (
    Gauge,
    expected_zero_count_prefix,
    gauge_log2,
    partition_entropy,
    s_float,
    tau_bits_lower_bound,
)
from .core import (
    BinaryWord,
    chain_length_counts,
    iter_golden_words,
    log2_count_cylinders,
)
from .measures import (
    BlockAssignment,
    MarkovParams,
    markov_cylinder_logprob,
    logprob_from_bits,
    logprob_prefix_grid,
    sample_bits_batch,
    zero_count_from_bits,
)
from .rng import uniform_grid

__all__ = [
    "Verdict",
    "TrajectoryReport",
    "DeviationReport",
    "TelescopingReport",
    "density_trajectory",
    "lower_bound_trajectory",
    "upper_bound_telescoping",
    "Rademacher",
    "CenteredChainLogMass",
    "hoeffding_check",
    "zero_count_bound",
    "zero_count_deviation_check",
    "covering_sum",
    "box_dimension_estimate",
    "config_hash",
    "deviation_threshold",
    "SCHEMA_VERSION",
    "DEFAULT_N_GRID",
    "DEFAULT_SEEDS",
    "DEFAULT_EPSILON",
]

SCHEMA_VERSION = 1
DEFAULT_N_GRID = tuple(2**j for j in range(4, 21))
DEFAULT_SEEDS = tuple(range(100))
DEFAULT_EPSILON = 0.25
_TRIAL_CHUNK = 4096


def deviation_threshold(n: int, epsilon: float = DEFAULT_EPSILON) -> float:
    """Threshold t with t*n = n^(1-epsilon): the sub-linear deviation event.

    epsilon must lie in (0, 1/2); the default 0.25 makes S_n >= n^(1-eps)
    a Borel-Cantelli-summable event under the Hoeffding bound.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return float(n) ** (-epsilon)


class Verdict:
    INCREASING = "INCREASING"
    DECREASING = "DECREASING"
    INCONCLUSIVE = "INCONCLUSIVE"
    BOUNDED = "BOUNDED"
    UNBOUNDED = "UNBOUNDED"


def config_hash(config: dict) -> str:
    """Stable 12-hex digest of a canonicalized config mapping."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _theil_sen(ns: Sequence[int], ys: Sequence[float]) -> tuple[float, float, float]:
    """Theil-Sen slope of y against log2 n, with 95% confidence band."""
    x = np.log2(np.asarray(ns, dtype=np.float64))
    y = np.asarray(ys, dtype=np.float64)
    slope, _, lo, hi = stats.theilslopes(y, x, alpha=0.95)
    return float(slope), float(lo), float(hi)


@dataclass(frozen=True)
class TrajectoryReport:
    """Per-seed density series on a prefix grid with summary and trend."""

    experiment: str
    n_grid: tuple[int, ...]
    seeds: tuple[int, ...]
    measure: dict
    gauge: dict
    series: tuple[tuple[float, ...], ...]  # one row per seed
    medians: tuple[float, ...]
    q1: tuple[float, ...]
    q3: tuple[float, ...]
    verdict: str
    slope: float
    slope_ci: tuple[float, float]
    verdict_floor: int
    monotone_beyond_floor: bool
    config: dict
    inconclusive_reason: str = ""

    @property
    def hash(self) -> str:
        return config_hash(self.config)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "config": self.config,
            "config_hash": self.hash,
            "measure": self.measure,
            "gauge": self.gauge,
            "n_grid": list(self.n_grid),
            "seeds": list(self.seeds),
            "series": [list(row) for row in self.series],
            "summary": {
                "median": list(self.medians),
                "q1": list(self.q1),
                "q3": list(self.q3),
            },
            "verdict": self.verdict,
            "slope": self.slope,
            "slope_ci": list(self.slope_ci),
            "verdict_floor": self.verdict_floor,
            "monotone_beyond_floor": self.monotone_beyond_floor,
            "inconclusive_reason": self.inconclusive_reason,
        }

    def to_csv_rows(self) -> list[tuple]:
        rows = []
        h, sc = self.hash, len(self.seeds)
        for j, n in enumerate(self.n_grid):
            rows.append((self.experiment, n, "median", self.medians[j], sc, h))
            rows.append((self.experiment, n, "q1", self.q1[j], sc, h))
            rows.append((self.experiment, n, "q3", self.q3[j], sc, h))
        rows.append((self.experiment, max(self.n_grid), "slope", self.slope, sc, h))
        return rows

    def summary_line(self) -> str:
        return (
            f"{self.experiment}: verdict {self.verdict} "
            f"(Theil-Sen slope {self.slope:.4g} per log2 n, "
            f"95% CI [{self.slope_ci[0]:.4g}, {self.slope_ci[1]:.4g}], "
            f"n > {self.verdict_floor}, {len(self.seeds)} seeds)"
        )


def _summaries(series: np.ndarray) -> tuple[tuple, tuple, tuple]:
    med = tuple(float(v) for v in np.median(series, axis=0))
    q1 = tuple(float(v) for v in np.percentile(series, 25, axis=0))
    q3 = tuple(float(v) for v in np.percentile(series, 75, axis=0))
    return med, q1, q3


def _trend_verdict(
    n_grid: Sequence[int], medians: Sequence[float], floor: int
) -> tuple[str, float, tuple[float, float], bool]:
    idx = [j for j, n in enumerate(n_grid) if n > floor]
    if len(idx) < 3:
        idx = list(range(len(n_grid)))
    ns = [n_grid[j] for j in idx]
    ys = [medians[j] for j in idx]
    slope, lo, hi = _theil_sen(ns, ys)
    if slope < 0:
        verdict = Verdict.DECREASING
    elif slope > 0:
        verdict = Verdict.INCREASING
    else:
        verdict = Verdict.INCONCLUSIVE
    diffs = np.diff(ys)
    monotone = bool(np.all(diffs < 0)) if slope < 0 else bool(np.all(diffs > 0))
    return verdict, slope, (lo, hi), monotone


def _check_chain_zero_partition(bits: np.ndarray, n: int) -> None:
    """Structural identity: per-chain zero counts must add up to N0(x_1^n)."""
    x = bits[:, 1 : n + 1]
    m = np.arange(1, n + 1)
    odd = m // (m & -m)
    direct = zero_count_from_bits(bits, n)
    for row in range(x.shape[0]):
        per_chain = np.bincount(odd, weights=(1 - x[row]).astype(np.float64), minlength=n + 1)
        if int(per_chain.sum()) != int(direct[row]):
            raise AssertionError("chain decomposition failed to partition the zero count")


def _check_half_word_identity(
    lp: np.ndarray, bits: np.ndarray, n: int, s: float
) -> None:
    """log2 P_mu[x_1^n] + n s must equal s (N0(x_1^n)/2 - N0(x_1^(n/2))) for even n.

    Tolerance is 1e-8 relative to the n s scale of the two cancelling
    terms (the identity is exact in real arithmetic; the log-mass reaches
    ~ -0.81 n, so absolute float error grows with n).
    """
    n0_full = zero_count_from_bits(bits, n).astype(np.float64)
    n0_half = zero_count_from_bits(bits, n // 2).astype(np.float64)
    lhs = lp + n * s
    rhs = s * (n0_full / 2.0 - n0_half)
    tol = 1e-8 * max(1.0, n * s)
    if not np.all(np.abs(lhs - rhs) <= tol):
        raise AssertionError("half-word zero-count identity violated beyond tolerance")


def density_trajectory(
    measure: BlockAssignment,
    gauge: Gauge,
    n_grid: Sequence[int] = DEFAULT_N_GRID,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    verdict_floor: int = 1024,
) -> TrajectoryReport:
    """Track d_n = log2 P[x_1^n] - log2 gauge(2^-n) across seeds and a grid.

    One point is sampled per seed out to max(n_grid); d_n is evaluated on
    the grid and summarized per n.  Two structural identities are enforced
    on every trajectory: the chain partition of the zero count, and (for
    the unperturbed measure, even n) the half-word zero-count identity.
    """
    n_grid = tuple(sorted(int(n) for n in n_grid))
    if n_grid[0] < 4:
        raise ValueError("grid must start at n >= 4")
    seeds = tuple(int(s) for s in seeds)
    n_max = n_grid[-1]
    gauges = np.array([gauge_log2(gauge, n) for n in n_grid])
    s = s_float()
    rows = np.empty((len(seeds), len(n_grid)), dtype=np.float64)
    for row, seed in enumerate(seeds):
        bits = sample_bits_batch(measure, n_max, seed, np.array([0]))
        lp = logprob_prefix_grid(measure, bits, n_grid)[0]
        if not np.all(np.isfinite(lp)):
            raise AssertionError("sampled point has zero measure; sampler broken")
        _check_chain_zero_partition(bits, n_max)
        if measure.delta == 0 and measure.param_fn is None:
            for j, n in enumerate(n_grid):
                if n % 2 == 0:
                    _check_half_word_identity(lp[j : j + 1], bits, n, s)
        rows[row] = lp - gauges
    med, q1, q3 = _summaries(rows)
    verdict, slope, ci, monotone = _trend_verdict(n_grid, med, verdict_floor)
    config = {
        "experiment": "density",
        "measure": measure.describe(),
        "gauge": gauge.describe(),
        "n_grid": list(n_grid),
        "seeds": list(seeds),
        "verdict_floor": verdict_floor,
    }
    return TrajectoryReport(
        experiment="density",
        n_grid=n_grid,
        seeds=seeds,
        measure=measure.describe(),
        gauge=gauge.describe(),
        series=tuple(tuple(float(v) for v in r) for r in rows),
        medians=med,
        q1=q1,
        q3=q3,
        verdict=verdict,
        slope=slope,
        slope_ci=ci,
        verdict_floor=verdict_floor,
        monotone_beyond_floor=monotone,
        config=config,
    )


def lower_bound_trajectory(
    delta: float,
    c: float,
    n_grid: Sequence[int] = DEFAULT_N_GRID,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    p: Optional[float] = None,
    verdict_floor: int = 4096,
) -> TrajectoryReport:
    """Track S_n = log2 P_delta[x_1^n] + n s + c n/(log2 n)^2.

    In the proven regime (delta > 0, p + delta < 1, c < tau_hat delta / 3
    with the certified tau lower bound) the drift is downward; outside it
    the verdict is INCONCLUSIVE by definition, whatever the data shows.
    The report also flags whether the median is monotonically decreasing
    beyond the verdict floor (default 2^12).
    """
    kwargs = {} if p is None else {"p": float(p)}
    measure = BlockAssignment(delta=float(delta), **kwargs)
    gauge = Gauge.phi(c=float(c)) if c > 0 else Gauge.pure()
    report = density_trajectory(measure, gauge, n_grid, seeds, verdict_floor)
    tau_hat = float(tau_bits_lower_bound())
    reason = ""
    if delta <= 0:
        reason = "delta must be positive for the perturbed-measure drift"
    elif measure.p + delta >= 1:
        reason = "p + delta >= 1 leaves the parameter space"
    elif c <= 0:
        reason = "c must be positive"
    elif c >= tau_hat * delta / 3:
        reason = (
            f"c={c} is not below the certified tau_hat*delta/3 = "
            f"{tau_hat * delta / 3:.6g}; decreasing drift not guaranteed"
        )
    verdict = report.verdict if not reason else Verdict.INCONCLUSIVE
    config = dict(report.config)
    config.update({"experiment": "lower", "delta": delta, "c": c})
    return TrajectoryReport(
        experiment="lower",
        n_grid=report.n_grid,
        seeds=report.seeds,
        measure=report.measure,
        gauge=report.gauge,
        series=report.series,
        medians=report.medians,
        q1=report.q1,
        q3=report.q3,
        verdict=verdict,
        slope=report.slope,
        slope_ci=report.slope_ci,
        verdict_floor=verdict_floor,
        monotone_beyond_floor=report.monotone_beyond_floor,
        config=config,
        inconclusive_reason=reason,
    )


# -- telescoping upper-bound diagnostic ------------------------------------------


@dataclass(frozen=True)
class TelescopingReport:
    """Dyadic-scale increments b_j and their telescoped partial sums."""

    ell_max: int
    seed: int
    g_label: str
    b: tuple[float, ...]                 # b_1..b_ell
    partial_sums: tuple[float, ...]
    closed_forms: tuple[float, ...]
    max_identity_gap: float
    inverse_g_partials: tuple[float, ...]
    divergence_flag: str
    config: dict

    @property
    def hash(self) -> str:
        return config_hash(self.config)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": "telescope",
            "config": self.config,
            "config_hash": self.hash,
            "b": list(self.b),
            "partial_sums": list(self.partial_sums),
            "closed_forms": list(self.closed_forms),
            "max_identity_gap": self.max_identity_gap,
            "inverse_g_partials": list(self.inverse_g_partials),
            "divergence_flag": self.divergence_flag,
        }

    def to_csv_rows(self) -> list[tuple]:
        h = self.hash
        rows = []
        for j, bj in enumerate(self.b, start=1):
            rows.append(("telescope", 2**j, "b_j", bj, 1, h))
            rows.append(("telescope", 2**j, "partial_sum", self.partial_sums[j - 1], 1, h))
        rows.append(("telescope", 2**self.ell_max, "max_identity_gap", self.max_identity_gap, 1, h))
        return rows

    def summary_line(self) -> str:
        return (
            f"telescope: sum 1/g {self.divergence_flag}, "
            f"max telescoping gap {self.max_identity_gap:.3g}, "
            f"partial sum b_1..b_{self.ell_max} = {self.partial_sums[-1]:.4f}"
        )


def upper_bound_telescoping(
    g: Callable[[float], float],
    ell_max: int,
    seed: int,
    g_label: str = "g",
    word: Optional[BinaryWord] = None,
) -> TelescopingReport:
    """Evaluate b_j = [log2 P_mu[x_1^(2^j)] - log2 psi(2^-2^j)] / 2^j dyadically.

    With psi built from g, the half-word identity gives
    b_j = (s/2)(N0(x_1^(2^j))/2^j - N0(x_1^(2^(j-1)))/2^(j-1))
    + 1/((ln 2) g(j)), and partial sums telescope to
    (s/2)(N0(x_1^(2^ell))/2^ell - N0(x_1^1)) + sum_j 1/((ln 2) g(j)),
    which diverges to +infinity exactly when sum 1/g does (the zero-count
    bracket stays bounded).  Both the telescoping identity and the direct
    measure-vs-gauge evaluation of b_j are checked numerically at every
    scale; the divergence of sum 1/g(j) is flagged by the dyadic increment
    ratio (heuristic -- true divergence is not decidable from finitely many
    terms).
    """
    if ell_max < 2:
        raise ValueError(f"need ell_max >= 2, got {ell_max}")
    n_max = 2**ell_max
    measure = BlockAssignment(delta=0.0)
    if word is None:
        bits = sample_bits_batch(measure, n_max, seed, np.array([0]))
    else:
        if len(word) < n_max:
            raise ValueError(f"supplied word shorter than 2^ell_max = {n_max}")
        arr = np.concatenate([[0], word.array[:n_max]]).astype(np.uint8)
        bits = arr[None, :]
    s = s_float()
    ln2 = math.log(2)
    n0 = {j: float(zero_count_from_bits(bits, 2**j)[0]) for j in range(ell_max + 1)}
    n0[0] = float(zero_count_from_bits(bits, 1)[0])

    gauge = Gauge.psi_g(g, label=g_label)
    b = []
    direct_gaps = []
    for j in range(1, ell_max + 1):
        nj = 2**j
        gj = g(float(j))
        if gj <= 0:
            raise ValueError(f"g({j}) must be positive, got {gj}")
        b.append((s / 2.0) * (n0[j] / 2**j - n0[j - 1] / 2 ** (j - 1)) + 1.0 / (ln2 * gj))
        if nj >= 4:  # gauge domain; the j = 1 increment is covered by the closed form
            lp = logprob_from_bits(measure, bits, nj)[0]
            direct_gaps.append(abs(b[-1] - (lp - gauge_log2(gauge, nj)) / nj))
    partials = np.cumsum(b)
    closed = []
    inv_g = []
    acc = 0.0
    for j in range(1, ell_max + 1):
        acc += 1.0 / (ln2 * g(float(j)))
        inv_g.append(acc)
        closed.append((s / 2.0) * (n0[j] / 2**j - n0[0]) + acc)
    gaps = [abs(partials[j] - closed[j]) for j in range(ell_max)]
    gaps += direct_gaps
    max_gap = float(max(gaps))

    half = max(1, ell_max // 2)
    inc_late = sum(1.0 / g(float(j)) for j in range(half + 1, ell_max + 1))
    inc_early = sum(1.0 / g(float(j)) for j in range(max(1, half // 2) + 1, half + 1))
    if inc_early <= 0:
        flag = Verdict.INCONCLUSIVE
    else:
        flag = Verdict.UNBOUNDED if inc_late / inc_early >= 0.7 else Verdict.BOUNDED
    config = {
        "experiment": "telescope",
        "g": g_label,
        "ell_max": ell_max,
        "seed": seed,
    }
    return TelescopingReport(
        ell_max=ell_max,
        seed=seed,
        g_label=g_label,
        b=tuple(float(x) for x in b),
        partial_sums=tuple(float(x) for x in partials),
        closed_forms=tuple(float(x) for x in closed),
        max_identity_gap=max_gap,
        inverse_g_partials=tuple(float(x) for x in inv_g),
        divergence_flag=flag,
        config=config,
    )


# -- deviation checks --------------------------------------------------------------


@dataclass(frozen=True)
class DeviationRow:
    t: float
    n: int
    empirical: float
    bound: float
    stderr: float
    trials: int

    @property
    def ok(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.stderr

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "n": self.n,
            "empirical": self.empirical,
            "bound": self.bound,
            "stderr": self.stderr,
            "trials": self.trials,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class DeviationReport:
    """Empirical tail frequencies against explicit theoretical bounds."""

    experiment: str
    rows: tuple[DeviationRow, ...]
    config: dict
    fit: dict

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def hash(self) -> str:
        return config_hash(self.config)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "config": self.config,
            "config_hash": self.hash,
            "rows": [r.as_dict() for r in self.rows],
            "fit": self.fit,
            "all_ok": self.all_ok,
        }

    def to_csv_rows(self) -> list[tuple]:
        h = self.hash
        rows = []
        for r in self.rows:
            rows.append((self.experiment, r.n, f"empirical(t={r.t:g})", r.empirical, r.trials, h))
            rows.append((self.experiment, r.n, f"bound(t={r.t:g})", r.bound, r.trials, h))
        return rows

    def summary_line(self) -> str:
        state = "OK (no exceedance)" if self.all_ok else "EXCEEDANCE FOUND"
        extra = ""
        if self.fit:
            extra = f", fitted c2={self.fit.get('c2', float('nan')):.3g}, c3={self.fit.get('c3', float('nan')):.3g}"
        return f"{self.experiment}: {len(self.rows)} cells, bounds {state}{extra}"


@dataclass(frozen=True)
class Rademacher:
    """Independent uniform +-1 summands (C = 1)."""

    @property
    def bound_C(self) -> float:
        return 1.0

    def describe(self) -> dict:
        return {"distribution": "rademacher", "C": 1.0}

    def sample_sums(self, seed: int, trials: np.ndarray, n: int) -> np.ndarray:
        out = np.zeros(len(trials), dtype=np.float64)
        for start in range(0, n, 8192):
            cols = np.arange(start, min(n, start + 8192), dtype=np.int64)
            u = uniform_grid(seed, trials, cols, 0)
            out += (np.where(u < 0.5, 1.0, -1.0)).sum(axis=1)
        return out


@dataclass(frozen=True)
class CenteredChainLogMass:
    """Centered log2 cylinder masses of golden Markov words of length k.

    X = log2 mu[u] + H^mu(alpha_k) has zero mean; |X| <= C with C the exact
    maximum over the finitely many admissible cylinders (computed by
    enumeration for k <= 16, crude per-symbol bound beyond).
    """

    k: int
    r: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"need k >= 1, got {self.k}")
        if not 0 < self.r < 1:
            raise ValueError(f"parameter must lie in (0,1), got {self.r}")

    @property
    def entropy(self) -> float:
        return partition_entropy(self.r, self.k)

    @property
    def bound_C(self) -> float:
        H = self.entropy
        if self.k <= 16:
            params = MarkovParams(self.r)
            return max(
                abs(markov_cylinder_logprob(params, u).value + H)
                for u in iter_golden_words(self.k)
            )
        per = max(abs(math.log2(self.r)), abs(math.log2(1 - self.r)))
        return self.k * per + H

    def describe(self) -> dict:
        return {"distribution": "centered_log_mass", "k": self.k, "r": self.r, "C": self.bound_C}

    def sample_sums(self, seed: int, trials: np.ndarray, n: int) -> np.ndarray:
        """Sum of n independent centered log-masses per trial."""
        log_r, log_q = math.log2(self.r), math.log2(1.0 - self.r)
        one_prob = 1.0 - self.r
        out = np.zeros(len(trials), dtype=np.float64)
        for start in range(0, n, 2048):
            cols = np.arange(start, min(n, start + 2048), dtype=np.int64)
            mass = np.zeros((len(trials), len(cols)), dtype=np.float64)
            prev = np.zeros((len(trials), len(cols)), dtype=bool)
            for t in range(self.k):
                u = uniform_grid(seed, trials, cols, t)
                one = (~prev) & (u < one_prob)
                zero_free = (~prev) & ~one
                mass += np.where(one, log_q, np.where(zero_free, log_r, 0.0))
                prev = one
            out += (mass + self.entropy).sum(axis=1)
        return out


def hoeffding_check(
    distribution,
    t: float | Sequence[float],
    n: int | Sequence[int],
    trials: int,
    seed: int,
) -> DeviationReport:
    """Empirical P(S_n >= t n) against the explicit bound exp(-t^2 n / (2 C^2)).

    The stderr column is the binomial standard error at the bound value, so
    "empirical <= bound + 3 stderr" is the acceptance predicate per cell.
    """
    ts = [float(v) for v in (t if isinstance(t, (list, tuple)) else [t])]
    ns = [int(v) for v in (n if isinstance(n, (list, tuple)) else [n])]
    if trials < 1:
        raise ValueError("trials must be positive")
    C = distribution.bound_C
    rows = []
    for n_ in ns:
        exceed = {tv: 0 for tv in ts}
        for start in range(0, trials, _TRIAL_CHUNK):
            idx = np.arange(start, min(trials, start + _TRIAL_CHUNK), dtype=np.uint64)
            sums = distribution.sample_sums(seed, idx, n_)
            for tv in ts:
                exceed[tv] += int(np.count_nonzero(sums >= tv * n_))
        for tv in ts:
            emp = exceed[tv] / trials
            bound = min(1.0, math.exp(-(tv * tv) * n_ / (2.0 * C * C))) if tv > 0 else 1.0
            se = math.sqrt(max(bound * (1 - bound), 1e-300) / trials)
            rows.append(DeviationRow(t=tv, n=n_, empirical=emp, bound=bound, stderr=se, trials=trials))
    config = {
        "experiment": "hoeffding",
        "distribution": distribution.describe(),
        "t": ts,
        "n": ns,
        "trials": trials,
        "seed": seed,
    }
    return DeviationReport(experiment="hoeffding", rows=tuple(rows), config=config, fit={})


def zero_count_bound(t: float, n: int) -> float:
    """Explicit tail bound for P(|N0*(x_1^(2n))| >= t n) from chain Hoeffding.

    Splits the centered count over chain-length classes k of the 2n-prefix
    (A_k chains, summands bounded by k, threshold share t n / (k(k+1))) and
    adds the per-class Hoeffding bounds.  Rigorous for every (t, n).
    """
    if t <= 0:
        return 1.0
    counts = chain_length_counts(2 * n)
    total = 0.0
    for k, A_k in counts.items():
        lam = t * n / (k * (k + 1))
        total += 2.0 * math.exp(-(lam * lam) / (2.0 * k * k * A_k))
    return min(1.0, total)


def zero_count_deviation_check(
    t_grid: Sequence[float] = (0.02, 0.05, 0.1, 0.15, 0.2),
    n_grid: Sequence[int] = (64, 128, 256, 512),
    trials: int = 100_000,
    seed: int = 0,
    p: Optional[float] = None,
) -> DeviationReport:
    """Tail of the centered zero count N0*(x_1^(2n)) under the product measure.

    Empirical frequencies of |N0*| >= t n are compared with the explicit
    chain-Hoeffding bound; on top, log-frequency is regressed on t^2 n to
    fit the exponential-decay shape (c2, c3), reported with a 95% CI for
    the decay rate.
    """
    kwargs = {} if p is None else {"p": float(p)}
    measure = BlockAssignment(delta=0.0, **kwargs)
    ts = [float(v) for v in t_grid]
    ns = [int(v) for v in n_grid]
    rows = []
    fit_x, fit_y = [], []
    for n_ in ns:
        m = 2 * n_
        mean = expected_zero_count_prefix(m, measure.p)
        exceed = {tv: 0 for tv in ts}
        for start in range(0, trials, _TRIAL_CHUNK):
            idx = np.arange(start, min(trials, start + _TRIAL_CHUNK), dtype=np.uint64)
            bits = sample_bits_batch(measure, m, seed, idx)
            dev = zero_count_from_bits(bits, m).astype(np.float64) - mean
            for tv in ts:
                exceed[tv] += int(np.count_nonzero(np.abs(dev) >= tv * n_))
        for tv in ts:
            emp = exceed[tv] / trials
            bound = zero_count_bound(tv, n_)
            se = math.sqrt(max(bound * (1 - bound), 1e-300) / trials)
            rows.append(DeviationRow(t=tv, n=n_, empirical=emp, bound=bound, stderr=se, trials=trials))
            if 0 < emp < 1:
                fit_x.append(tv * tv * n_)
                fit_y.append(math.log(emp))
    fit: dict = {}
    if len(fit_x) >= 3:
        res = stats.linregress(fit_x, fit_y)
        dof = len(fit_x) - 2
        tcrit = float(stats.t.ppf(0.975, dof)) if dof > 0 else float("inf")
        fit = {
            "c2": math.exp(res.intercept),
            "c3": -res.slope,
            "c3_ci": [-res.slope - tcrit * res.stderr, -res.slope + tcrit * res.stderr],
            "r_value": res.rvalue,
            "points": len(fit_x),
        }
    config = {
        "experiment": "ldev2",
        "t_grid": ts,
        "n_grid": ns,
        "trials": trials,
        "seed": seed,
        "p": measure.p,
    }
    return DeviationReport(experiment="ldev2", rows=tuple(rows), config=config, fit=fit)


# -- covering sums ------------------------------------------------------------------


def covering_sum(gauge: Gauge, n: int) -> float:
    """log2 of the level-n uniform covering sum: log2 #cylinders + log2 gauge(2^-n)."""
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    return log2_count_cylinders(n) + gauge_log2(gauge, n)


def box_dimension_estimate(n: int) -> float:
    """log2(#cylinders of length n) / n; converges to the Minkowski dimension."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return log2_count_cylinders(n) / n
