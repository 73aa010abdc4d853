"""Monte-Carlo single-shot experiments.

Outcomes are drawn i.i.d. by inverse-CDF sampling from the analytically
computed outcome distribution. Shots are processed in fixed-size chunks and
chunk ``k`` uses the generator ``default_rng([seed, k])``, so counts do not
depend on how chunks are scheduled.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Channel
from .errors import InvalidSpec, MissingResult
from .ppovm import ProcessPOVM, TestStrategy, outcome_probabilities, ppovm_of_strategy

LABELS = ("ch1", "ch2", "inconclusive")
CHUNK = 1 << 16


def _as_ppovm(strategy) -> ProcessPOVM:
    if isinstance(strategy, ProcessPOVM):
        return strategy
    if isinstance(strategy, TestStrategy):
        return ppovm_of_strategy(strategy)
    raise InvalidSpec(f"unsupported strategy type {type(strategy).__name__}")


def _check_labels(labels, n_outcomes):
    if len(labels) != n_outcomes:
        raise InvalidSpec(f"{len(labels)} labels for {n_outcomes} outcomes")
    bad = [lab for lab in labels if lab not in LABELS]
    if bad:
        raise InvalidSpec(f"unknown outcome labels {bad}")


def _sample(probs: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(idx, len(probs) - 1)


def _chunks(shots: int):
    for k, start in enumerate(range(0, shots, CHUNK)):
        yield k, min(CHUNK, shots - start)


def _std_err(p: float, n: int) -> float:
    return float(np.sqrt(p * (1 - p) / n))


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    strategy: object
    true_channel: Channel
    shots: int
    seed: int
    outcome_labels: tuple
    true_label: str = "ch1"

    def __post_init__(self):
        if self.shots < 1:
            raise InvalidSpec("shots must be positive")
        if self.true_label not in ("ch1", "ch2"):
            raise InvalidSpec("true_label must be 'ch1' or 'ch2'")


@dataclass(frozen=True, eq=False)
class EmpiricalResult:
    counts: np.ndarray
    shots: int
    empirical_error_rate: float
    empirical_failure_rate: float
    standard_errors: dict
    predicted: np.ndarray
    wrong_conclusions: int
    extra: dict = field(default_factory=dict)

    def total_variation(self) -> float:
        return 0.5 * float(np.abs(self.counts / self.shots - self.predicted).sum())


def _rates(labels, counts, wrong_mask, shots, predicted):
    labels = np.asarray(labels)
    wrong = int(counts[wrong_mask].sum())
    fail = int(counts[labels == "inconclusive"].sum())
    err_rate, fail_rate = wrong / shots, fail / shots
    return EmpiricalResult(
        counts=counts,
        shots=shots,
        empirical_error_rate=err_rate,
        empirical_failure_rate=fail_rate,
        standard_errors={"error": _std_err(err_rate, shots), "failure": _std_err(fail_rate, shots)},
        predicted=predicted,
        wrong_conclusions=wrong,
    )


def run_shots(spec: ExperimentSpec) -> EmpiricalResult:
    """Repeat the test on a fixed channel; rates are conditional on ``true_label``."""
    ppovm = _as_ppovm(spec.strategy)
    probs = outcome_probabilities(ppovm, spec.true_channel)
    _check_labels(spec.outcome_labels, len(probs))
    counts = np.zeros(len(probs), dtype=np.int64)
    for k, n in _chunks(spec.shots):
        rng = np.random.default_rng([spec.seed, k])
        counts += np.bincount(_sample(probs, n, rng), minlength=len(probs))
    other = "ch2" if spec.true_label == "ch1" else "ch1"
    wrong_mask = np.asarray(spec.outcome_labels) == other
    return _rates(spec.outcome_labels, counts, wrong_mask, spec.shots, probs)


def run_prior_shots(strategy, channels, priors, shots: int, seed: int, outcome_labels) -> EmpiricalResult:
    """Draw the channel from ``priors`` anew for every shot (prior-averaged rates).

    ``counts`` aggregates outcomes over both channels; the per-channel table
    is in ``extra["joint_counts"]`` (rows ch1, ch2).
    """
    if shots < 1:
        raise InvalidSpec("shots must be positive")
    ppovm = _as_ppovm(strategy)
    table = np.array([outcome_probabilities(ppovm, ch) for ch in channels])
    _check_labels(outcome_labels, table.shape[1])
    eta = np.asarray(priors, dtype=float)
    joint = np.zeros_like(table, dtype=np.int64)
    for k, n in _chunks(shots):
        rng = np.random.default_rng([seed, k])
        which = _sample(eta, n, rng)
        for c in range(len(channels)):
            m = int(np.sum(which == c))
            if m:
                joint[c] += np.bincount(_sample(table[c], m, rng), minlength=table.shape[1])
    labels = np.asarray(outcome_labels)
    wrong = int(joint[0, labels == "ch2"].sum() + joint[1, labels == "ch1"].sum())
    fail = int(joint[:, labels == "inconclusive"].sum())
    err_rate, fail_rate = wrong / shots, fail / shots
    return EmpiricalResult(
        counts=joint.sum(axis=0),
        shots=shots,
        empirical_error_rate=err_rate,
        empirical_failure_rate=fail_rate,
        standard_errors={"error": _std_err(err_rate, shots), "failure": _std_err(fail_rate, shots)},
        predicted=eta @ table,
        wrong_conclusions=wrong,
        extra={"joint_counts": joint},
    )


def average_over_priors(priors, results: dict):
    """Prior-weighted error and failure rates from per-channel conditional results."""
    missing = [lab for lab in ("ch1", "ch2") if lab not in results]
    if missing:
        raise MissingResult(f"no result for {missing}")
    eta = dict(zip(("ch1", "ch2"), priors))
    avg_error = sum(eta[k] * results[k].empirical_error_rate for k in ("ch1", "ch2"))
    avg_fail = sum(eta[k] * results[k].empirical_failure_rate for k in ("ch1", "ch2"))
    return float(avg_error), float(avg_fail)
