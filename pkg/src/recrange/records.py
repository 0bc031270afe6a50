"""Upper-record extraction and record-sequence samplers.

An observation X_j is an upper record when it is at least as large as the
current record holder, so for the record times T(1) = 1 and
T(n+1) = min{j > T(n) : X_j >= X_{T(n)}}; ties refresh the record. Under an
exponential model the gaps between successive record values are again
exponential, which the direct sampler exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExhaustedError, DomainError, InsufficientRecordsError

__all__ = [
    "RecordSummary",
    "extract_upper_records",
    "record_range_sequence",
    "truncate",
    "sample_records_direct",
    "sample_records_stream",
]

# numpy draws are chunked so the stream sampler is not a per-value Python loop
_STREAM_CHUNK = 256


@dataclass(frozen=True)
class RecordSummary:
    """Upper record values with their 1-based occurrence indices.

    times are genuine observation indices for extracted or streamed data.
    Directly sampled record sequences have no underlying series, so their
    times are the placeholders 1..n and times_synthetic is set.
    """

    values: tuple[float, ...]
    times: tuple[int, ...]
    times_synthetic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "times", tuple(int(t) for t in self.times))
        if not self.values:
            raise DomainError("a record summary needs at least one record")
        if len(self.values) != len(self.times):
            raise DomainError(
                f"values and times lengths differ: {len(self.values)} != {len(self.times)}"
            )
        if any(not math.isfinite(v) for v in self.values):
            raise DomainError("record values must be finite")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise DomainError("record values must be nondecreasing")
        if self.times[0] != 1:
            raise DomainError("the first observation is always the first record")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise DomainError("record times must be strictly increasing")

    @property
    def n(self) -> int:
        """Number of records collected."""
        return len(self.values)

    @property
    def range(self) -> float:
        """Spread between the latest and the first record; needs n >= 2."""
        if self.n < 2:
            raise InsufficientRecordsError(
                "the record range needs at least 2 records"
            )
        return self.values[-1] - self.values[0]


def extract_upper_records(data: Sequence[float]) -> RecordSummary:
    """Scan a series once and return its upper records and record times."""
    if len(data) == 0:
        raise DomainError("cannot extract records from an empty series")
    values: list[float] = []
    times: list[int] = []
    current = -math.inf
    for j, x in enumerate(data, start=1):
        x = float(x)
        if not math.isfinite(x):
            raise DomainError(f"observation {j} is not finite: {x!r}")
        if x >= current:
            values.append(x)
            times.append(j)
            current = x
    return RecordSummary(values=tuple(values), times=tuple(times))


def record_range_sequence(summary: RecordSummary) -> tuple[float, ...]:
    """Ranges x_T(k) - x_T(1) for k = 2..n, one per accumulated record."""
    if summary.n < 2:
        raise InsufficientRecordsError(
            "range sequence needs at least 2 records"
        )
    first = summary.values[0]
    return tuple(v - first for v in summary.values[1:])


def truncate(summary: RecordSummary, n: int) -> RecordSummary:
    """Summary restricted to the first n records."""
    if not 1 <= n <= summary.n:
        raise InsufficientRecordsError(
            f"cannot keep {n} records out of {summary.n}"
        )
    return RecordSummary(
        values=summary.values[:n],
        times=summary.times[:n],
        times_synthetic=summary.times_synthetic,
    )


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_records_direct(delta: float, n: int, seed=None) -> RecordSummary:
    """Draw n record values directly as a cumulative sum of Exp(delta) gaps.

    Skips simulating the underlying series entirely, so the record times are
    synthetic placeholders.
    """
    if not (math.isfinite(delta) and delta > 0.0):
        raise DomainError(f"scale delta must be positive, got {delta!r}")
    if n < 2:
        raise DomainError(f"record sampling needs n >= 2, got {n!r}")
    rng = _as_generator(seed)
    gaps = rng.exponential(scale=delta, size=n)
    values = tuple(float(v) for v in np.cumsum(gaps))
    return RecordSummary(
        values=values, times=tuple(range(1, n + 1)), times_synthetic=True
    )


def sample_records_stream(
    delta: float, n: int, seed=None, cap: int = 1_000_000
) -> RecordSummary:
    """Simulate an Exp(delta) series until n upper records appear.

    Values come from inversion, -delta * log(1 - U) with U uniform on [0, 1),
    so a given generator state maps to one fixed series. Waiting times for
    late records have infinite mean, hence the explicit draw cap; hitting it
    raises CapExhaustedError carrying the partial summary.
    """
    if not (math.isfinite(delta) and delta > 0.0):
        raise DomainError(f"scale delta must be positive, got {delta!r}")
    if n < 2:
        raise DomainError(f"record sampling needs n >= 2, got {n!r}")
    if cap < 1:
        raise DomainError(f"the draw cap must be positive, got {cap!r}")
    rng = _as_generator(seed)
    values: list[float] = []
    times: list[int] = []
    current = -math.inf
    drawn = 0
    while drawn < cap:
        chunk = min(_STREAM_CHUNK, cap - drawn)
        xs = -delta * np.log1p(-rng.random(chunk))
        for x in xs:
            drawn += 1
            x = float(x)
            if x >= current:
                values.append(x)
                times.append(drawn)
                current = x
                if len(values) == n:
                    return RecordSummary(values=tuple(values), times=tuple(times))
    partial = (
        RecordSummary(values=tuple(values), times=tuple(times)) if values else None
    )
    raise CapExhaustedError(
        f"found {len(values)} of {n} records in {drawn} draws",
        partial=partial,
        draws=drawn,
    )
