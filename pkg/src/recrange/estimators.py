"""Point estimators of the exponential scale and their sampling moments.

Classical estimators use the raw data, the last record, or the record range;
the Bayes estimators summarize the inverted-gamma posterior under three
losses. With s = a + n - 1 and A = b + r:

    quadratic loss (scaled by delta^-2)  ->  A / (a + n)
    squared error                        ->  A / (a + n - 2)
    absolute error (posterior median)    ->  2 A / chi2_quantile(0.5, 2 s)

All record-based estimators are linear in the range, so their sampling mean,
variance and MSE under a fixed true scale follow from the Gamma(n - 1, delta)
law of the range in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

from .errors import (
    DegeneratePosteriorError,
    DomainError,
    InsufficientRecordsError,
    UnsupportedEstimatorError,
)
from .model import PosteriorParams, PriorParams, posterior_from
from .records import RecordSummary
from .specfun import chi2_quantile

__all__ = [
    "EstimatorId",
    "Moments",
    "EstimateReport",
    "mle_sample",
    "mle_records",
    "mle_urr",
    "bayes_quadratic",
    "bayes_squared",
    "bayes_absolute",
    "point_estimate",
    "analytic_moments",
]


class EstimatorId(str, Enum):
    """Names accepted everywhere an estimator can be selected."""

    MLE_SAMPLE = "mle_sample"
    MLE_RECORDS = "mle_records"
    MLE_URR = "mle_urr"
    BAYES_QUADRATIC = "bayes_quadratic"
    BAYES_SQUARED = "bayes_squared"
    BAYES_ABSOLUTE = "bayes_absolute"

    def __str__(self) -> str:
        return self.value


class Moments(NamedTuple):
    """Sampling moments of an estimator at a fixed true scale."""

    mean: float
    variance: float
    mse: float


@dataclass(frozen=True)
class EstimateReport:
    """One computed estimate, optionally with its closed-form moments.

    The analytic fields are filled only when a reference scale was supplied
    to evaluate them at; they stay None otherwise.
    """

    estimator_id: EstimatorId
    value: float
    analytic_mean: float | None = None
    analytic_variance: float | None = None
    analytic_mse: float | None = None


def mle_sample(data: Sequence[float]) -> float:
    """Maximum likelihood from the full series: the sample mean."""
    if len(data) == 0:
        raise DomainError("cannot average an empty series")
    total = 0.0
    for j, x in enumerate(data, start=1):
        x = float(x)
        if not (math.isfinite(x) and x > 0.0):
            raise DomainError(f"observation {j} must be positive, got {x!r}")
        total += x
    return total / len(data)


def mle_records(x_last_record: float, n: int) -> float:
    """Maximum likelihood from the record values alone: x_T(n) / n."""
    if not (math.isfinite(x_last_record) and x_last_record > 0.0):
        raise DomainError(
            f"the last record value must be positive, got {x_last_record!r}"
        )
    if n < 1:
        raise DomainError(f"record count must be at least 1, got {n!r}")
    return x_last_record / n


def mle_urr(record_range: float, n: int) -> float:
    """Maximum likelihood from the record range alone: r / (n - 1)."""
    if not (math.isfinite(record_range) and record_range > 0.0):
        raise DomainError(f"record range must be positive, got {record_range!r}")
    if n < 2:
        raise InsufficientRecordsError("range-based MLE needs at least 2 records")
    return record_range / (n - 1)


def bayes_quadratic(post: PosteriorParams) -> float:
    """Bayes rule under scaled quadratic loss: the posterior mode A/(a+n)."""
    return post.A / post.a_plus_n


def bayes_squared(post: PosteriorParams) -> float:
    """Posterior mean A/(a + n - 2); exists only when s > 1."""
    denom = post.a_plus_n - 2.0
    if denom <= 0.0:
        raise DegeneratePosteriorError(
            f"the posterior mean needs a + n > 2, got {post.a_plus_n!r}"
        )
    return post.A / denom


def bayes_absolute(post: PosteriorParams) -> float:
    """Posterior median 2A / q, with q the chi-square median on 2s dof."""
    return 2.0 * post.A / chi2_quantile(0.5, 2.0 * post.s)


def point_estimate(
    estimator: EstimatorId, summary: RecordSummary, prior: PriorParams | None = None
) -> float:
    """Dispatch a record-based estimator by id.

    mle_sample is not available here: it needs the raw series, which a
    record summary no longer carries.
    """
    estimator = EstimatorId(estimator)
    if estimator is EstimatorId.MLE_SAMPLE:
        raise UnsupportedEstimatorError(
            "mle_sample needs the full series, not a record summary"
        )
    if estimator is EstimatorId.MLE_RECORDS:
        return mle_records(summary.values[-1], summary.n)
    if estimator is EstimatorId.MLE_URR:
        return mle_urr(summary.range, summary.n)
    if prior is None:
        raise DomainError(f"{estimator} needs prior parameters")
    post = posterior_from(prior, summary)
    if estimator is EstimatorId.BAYES_QUADRATIC:
        return bayes_quadratic(post)
    if estimator is EstimatorId.BAYES_SQUARED:
        return bayes_squared(post)
    return bayes_absolute(post)


def analytic_moments(
    estimator: EstimatorId, delta_ref: float, n: int, prior: PriorParams | None = None
) -> Moments:
    """Closed-form sampling mean, variance and MSE at a fixed true scale.

    Uses E r = (n-1) delta and Var r = (n-1) delta^2 for the range and the
    n-fold gap decomposition for the last record. No closed form exists for
    mle_sample (the record count over a fixed-length series is random), so
    it is rejected.
    """
    estimator = EstimatorId(estimator)
    if not (math.isfinite(delta_ref) and delta_ref > 0.0):
        raise DomainError(f"reference scale must be positive, got {delta_ref!r}")
    if n < 2:
        raise DomainError(f"moments need n >= 2 records, got {n!r}")

    if estimator is EstimatorId.MLE_SAMPLE:
        raise UnsupportedEstimatorError(
            "mle_sample has no closed-form record-based moments"
        )
    if estimator is EstimatorId.MLE_RECORDS:
        mean, var = delta_ref, delta_ref * delta_ref / n
    elif estimator is EstimatorId.MLE_URR:
        mean, var = delta_ref, delta_ref * delta_ref / (n - 1)
    else:
        if prior is None:
            raise DomainError(f"{estimator} needs prior parameters")
        a, b = prior.a, prior.b
        if estimator is EstimatorId.BAYES_QUADRATIC:
            denom = a + n
        elif estimator is EstimatorId.BAYES_SQUARED:
            denom = a + n - 2.0
            if denom <= 0.0:
                raise DegeneratePosteriorError(
                    f"the posterior mean needs a + n > 2, got {a + n!r}"
                )
        else:
            denom = 0.5 * chi2_quantile(0.5, 2.0 * (a + n - 1.0))
        mean = ((n - 1) * delta_ref + b) / denom
        var = (n - 1) * delta_ref * delta_ref / (denom * denom)

    bias = mean - delta_ref
    return Moments(mean=mean, variance=var, mse=var + bias * bias)
