"""The Monte Carlo experiment.

For each group size, ``trials_per_size`` pairs of normal groups are drawn and
t-tested.  The report keeps, per size, how many pairs came out significant
and which significant pair had the largest p-value, i.e. the pair that only
just made it under the threshold.

Samples are never retained.  Each group is a pure function of
``(master_seed, size_index, trial_index, group)``, so the selected pair is
simply regenerated when it is time to draw it.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import DomainError
from .randkit import MASK64, StreamKey, group_samples
from .ttest import TESTS, SampleGroup, is_significant

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_SIZES",
    "DEFAULT_SEED",
    "SimulationConfig",
    "TrialRecord",
    "SizeSummary",
    "RunReport",
    "StudyError",
    "run_trial",
    "run_size",
    "count_significant",
    "select_threshold_pair",
    "regenerate_pair",
    "summarize_size",
    "run_study",
]

DEFAULT_SIZES = (4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144)
DEFAULT_SEED = 0


@dataclass(frozen=True)
class SimulationConfig:
    sizes: tuple = DEFAULT_SIZES
    trials_per_size: int = 1000
    alpha: float = 0.05
    master_seed: int = DEFAULT_SEED
    gen_mean: float = 0.0
    gen_sd: float = 1.0
    test_kind: str = "pooled"

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes:
            raise DomainError("at least one size is required")
        for s in sizes:
            if s < 4 or math.isqrt(s) ** 2 != s:
                raise DomainError(f"sizes must be perfect squares >= 4, got {s}")
        if self.trials_per_size < 1:
            raise DomainError(f"trials_per_size must be >= 1, got {self.trials_per_size}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0 <= self.master_seed <= MASK64:
            raise DomainError(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        if not (math.isfinite(self.gen_mean) and self.gen_sd > 0 and math.isfinite(self.gen_sd)):
            raise DomainError("gen_mean must be finite and gen_sd positive")
        if self.test_kind not in TESTS:
            raise DomainError(f"test_kind must be one of {sorted(TESTS)}, got {self.test_kind!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    p: float
    t: float


@dataclass(frozen=True)
class SizeSummary:
    """One row of the results table."""

    size: int
    width: int
    height: int
    n_trials: int
    n_significant: int
    expected_significant: float
    selected_trial: int | None = None
    selected_p: float | None = None

    @property
    def label(self):
        return f"{self.width}x{self.height}={self.size}"


@dataclass(frozen=True)
class RunReport:
    config: SimulationConfig
    summaries: tuple
    version: str = __version__

    def to_dict(self):
        return asdict(self)


class StudyError(RuntimeError):
    """One or more trials failed; ``failures`` holds (size, trial, exception)."""

    def __init__(self, failures):
        self.failures = failures
        size, trial, exc = failures[0]
        super().__init__(
            f"{len(failures)} trial(s) failed; first at size={size} trial={trial}: {exc}"
        )


def _check_indices(config, size_index, trial_index):
    if not 0 <= size_index < len(config.sizes):
        raise DomainError(f"size_index {size_index} out of range")
    if not 0 <= trial_index < config.trials_per_size:
        raise DomainError(f"trial_index {trial_index} out of range")


def _draw_pair(config, size_index, trial_index, out_a=None, out_b=None):
    n = config.sizes[size_index]
    a = group_samples(config.master_seed, StreamKey(size_index, trial_index, 0), n,
                      config.gen_mean, config.gen_sd, out_a)
    b = group_samples(config.master_seed, StreamKey(size_index, trial_index, 1), n,
                      config.gen_mean, config.gen_sd, out_b)
    return SampleGroup(a), SampleGroup(b)


def _test_pair(config, a, b, trial_index):
    outcome = TESTS[config.test_kind](a, b, config.alpha)
    return TrialRecord(trial_index, outcome.p, outcome.t)


def regenerate_pair(config, size_index, trial_index):
    """The exact two groups that trial ``trial_index`` of size ``size_index`` tested."""
    _check_indices(config, size_index, trial_index)
    return _draw_pair(config, size_index, trial_index)


def run_trial(config, size_index, trial_index):
    _check_indices(config, size_index, trial_index)
    a, b = _draw_pair(config, size_index, trial_index)
    return _test_pair(config, a, b, trial_index)


def _run_chunk(config, size_index, trial_indices):
    # One pair of scratch buffers per chunk; samples are overwritten each trial.
    n = config.sizes[size_index]
    buf_a, buf_b = np.empty(n), np.empty(n)
    records, failures = [], []
    for i in trial_indices:
        try:
            a, b = _draw_pair(config, size_index, i, buf_a, buf_b)
            records.append(_test_pair(config, a, b, i))
        except Exception as exc:  # reported together with size/trial context
            failures.append((n, i, exc))
    return records, failures


def run_size(config, size_index, threads=1):
    """All trial records for one size, ordered by trial index.

    ``threads`` only changes scheduling; every trial draws from its own
    stream, so the records are the same for any value.
    """
    trials = range(config.trials_per_size)
    if threads <= 1:
        chunks = [_run_chunk(config, size_index, trials)]
    else:
        parts = [trials[k::threads] for k in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda part: _run_chunk(config, size_index, part), parts))
    records = [r for recs, _ in chunks for r in recs]
    failures = [f for _, fails in chunks for f in fails]
    if failures:
        raise StudyError(sorted(failures, key=lambda f: f[1]))
    records.sort(key=lambda r: r.trial_index)
    return records


def count_significant(records, alpha):
    return sum(1 for r in records if is_significant(r.p, alpha))


def select_threshold_pair(records, alpha):
    """Trial index of the largest p-value strictly below ``alpha``, or None.

    Ties go to the lowest trial index, so the answer does not depend on the
    order of ``records``.
    """
    best = None
    for r in records:
        if not is_significant(r.p, alpha):
            continue
        if best is None or r.p > best.p or (r.p == best.p and r.trial_index < best.trial_index):
            best = r
    return None if best is None else best.trial_index


def summarize_size(config, size_index, records):
    size = config.sizes[size_index]
    side = math.isqrt(size)
    selected = select_threshold_pair(records, config.alpha)
    selected_p = None
    if selected is not None:
        selected_p = next(r.p for r in records if r.trial_index == selected)
    return SizeSummary(
        size=size,
        width=side,
        height=side,
        n_trials=len(records),
        n_significant=count_significant(records, config.alpha),
        expected_significant=config.alpha * len(records),
        selected_trial=selected,
        selected_p=selected_p,
    )


def run_study(config, threads=1):
    """Run every configured size and collect one summary per size, in order."""
    summaries = []
    failures = []
    for size_index, size in enumerate(config.sizes):
        try:
            records = run_size(config, size_index, threads)
        except StudyError as err:
            failures.extend(err.failures)
            continue
        summary = summarize_size(config, size_index, records)
        log.info("size %s: %d/%d significant, selected trial %s",
                 summary.label, summary.n_significant, summary.n_trials, summary.selected_trial)
        summaries.append(summary)
    if failures:
        raise StudyError(failures)
    return RunReport(config=config, summaries=tuple(summaries))
