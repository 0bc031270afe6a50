"""Exponential record-range model with its conjugate inverted-gamma prior.

With n upper records from an Exp(delta) series, the record range
r = x_T(n) - x_T(1) is Gamma(n - 1, delta) distributed. An inverted-gamma
prior with shape a and scale b is conjugate: the posterior of delta given r
is again inverted gamma,

    pi(delta | r) = A^s exp(-A / delta) / (Gamma(s) delta^(s + 1)),

with s = a + n - 1 and A = b + r. Equivalently 2A/delta is chi-square with
2s degrees of freedom, which is what the interval constructions use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegeneratePosteriorError, DomainError, InsufficientRecordsError
from .records import RecordSummary
from .specfun import ln_gamma, reg_lower_gamma

__all__ = [
    "PriorParams",
    "PosteriorParams",
    "posterior_from",
    "range_pdf",
    "posterior_pdf",
    "posterior_log_pdf",
    "posterior_coverage",
    "posterior_mode",
]


@dataclass(frozen=True)
class PriorParams:
    """Inverted-gamma prior on the exponential scale: shape a, scale b.

    b = 0 is accepted as a degenerate limit (the prior mass escapes to 0 but
    every posterior quantity built from n >= 2 records stays proper);
    operations that divide by b reject it individually.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise DomainError(f"prior shape a must be positive, got {self.a!r}")
        if not (math.isfinite(self.b) and self.b >= 0.0):
            raise DomainError(f"prior scale b must be nonnegative, got {self.b!r}")


@dataclass(frozen=True)
class PosteriorParams:
    """Inverted-gamma posterior: shape s = a + n - 1, scale A = b + r.

    a_plus_n is carried explicitly because the density exponent (a + n) and
    the incomplete-gamma shape (a + n - 1) differ by one and are easy to
    conflate; storing both keeps them independently checkable. When omitted
    it defaults to s + 1, which is the only consistent value.
    """

    s: float
    A: float
    a_plus_n: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0.0):
            raise DomainError(f"posterior shape s must be positive, got {self.s!r}")
        if not (math.isfinite(self.A) and self.A > 0.0):
            raise DomainError(f"posterior scale A must be positive, got {self.A!r}")
        if self.a_plus_n is None:
            object.__setattr__(self, "a_plus_n", self.s + 1.0)
        elif not math.isclose(self.a_plus_n, self.s + 1.0, rel_tol=1e-9):
            raise DomainError(
                f"a_plus_n must equal s + 1; got {self.a_plus_n!r} with s={self.s!r}"
            )


def posterior_from(prior: PriorParams, summary: RecordSummary) -> PosteriorParams:
    """Posterior parameters from a prior and at least two records."""
    if summary.n < 2:
        raise InsufficientRecordsError(
            "the posterior needs at least 2 records to form a range"
        )
    n = summary.n
    return PosteriorParams(
        s=prior.a + n - 1.0, A=prior.b + summary.range, a_plus_n=prior.a + n
    )


def range_pdf(r: float, n: int, delta: float) -> float:
    """Sampling density of the record range: Gamma(n - 1, delta) at r.

    In the formula r^(n-2) e^(-r/delta) / ((n-2)! delta^(n-1)); evaluated
    in log space except at r = 0, where only n = 2 has positive density.
    """
    if n < 2:
        raise DomainError(f"the range of n records needs n >= 2, got {n!r}")
    if not (math.isfinite(delta) and delta > 0.0):
        raise DomainError(f"scale delta must be positive, got {delta!r}")
    if math.isnan(r) or r < 0.0:
        raise DomainError(f"range r must be nonnegative, got {r!r}")
    if r == 0.0:
        return 1.0 / delta if n == 2 else 0.0
    k = n - 1.0
    log_pdf = (k - 1.0) * math.log(r) - r / delta - k * math.log(delta) - ln_gamma(k)
    return math.exp(log_pdf)


def posterior_log_pdf(delta: float, post: PosteriorParams) -> float:
    """Log posterior density at delta > 0."""
    if math.isnan(delta) or delta <= 0.0 or math.isinf(delta):
        raise DomainError(f"delta must be positive and finite, got {delta!r}")
    return (
        post.s * math.log(post.A)
        - post.A / delta
        - ln_gamma(post.s)
        - (post.s + 1.0) * math.log(delta)
    )


def posterior_pdf(delta: float, post: PosteriorParams) -> float:
    """Posterior density of the scale at delta > 0; log-space evaluation."""
    return math.exp(posterior_log_pdf(delta, post))


def posterior_coverage(c_lo: float, c_hi: float, post: PosteriorParams) -> float:
    """Posterior probability of the interval [c_lo, c_hi].

    Substituting u = A/delta turns the integral into a difference of
    regularized gamma values: P(s, A/c_lo) - P(s, A/c_hi). c_hi may be +inf.
    """
    if math.isnan(c_lo) or math.isnan(c_hi):
        raise DomainError("interval endpoints must not be nan")
    if c_lo < 0.0 or c_hi < c_lo:
        raise DomainError(
            f"need 0 <= c_lo <= c_hi, got c_lo={c_lo!r}, c_hi={c_hi!r}"
        )
    upper = 0.0 if math.isinf(c_hi) else reg_lower_gamma(post.s, post.A / c_hi)
    lower = 1.0 if c_lo == 0.0 else reg_lower_gamma(post.s, post.A / c_lo)
    cover = lower - upper
    if cover < 0.0:
        cover = 0.0  # rounding near equal endpoints must not go negative
    return cover


def posterior_mode(post: PosteriorParams) -> float:
    """Posterior mode A / (a + n); needs a unimodal density, a + n > 1."""
    if post.a_plus_n <= 1.0:
        raise DegeneratePosteriorError(
            f"no interior mode for a_plus_n={post.a_plus_n!r}"
        )
    return post.A / post.a_plus_n
