"""Acceptance gate: eleven numbered criteria, one printed line each.

Every test prints exactly one `[criterion NN] PASS/FAIL` line (bypassing
capture so it is visible in normal runs) and then fails the test if any
check inside it failed. Tolerances and runtime budgets are part of the
criteria and are asserted, not just measured.
"""

import json
import math
import time

import numpy as np
import pytest

from recrange import (
    EstimatorId,
    IntervalKind,
    PosteriorParams,
    PriorParams,
    SimConfig,
    chi2_quantile,
    datasets,
    equal_tails,
    extract_upper_records,
    hpd_exact,
    hpd_hpm_closed_form,
    length_of_alpha,
    posterior_coverage,
    posterior_pdf,
    r1_r2_gap,
    record_range_sequence,
    reg_lower_gamma,
    risk_linear,
    run_interval_sim,
    run_point_sim,
    LinearEstimator,
    bayes_risk_linear,
)

# Printed reference columns for the deterministic comparison table
# (first bundled series, prior a=3, b=5, n = 2..6). The record-range MLE
# entry at n=4 follows the estimator definition range/(n-1); the printed
# source repeats a neighboring column there (transcription slip).
PRINTED_TABLE = {
    "mle_records": (2.19098642, 1.88219847, 1.81655216, 1.88274270, 1.58658848),
    "mle_urr": (4.319232, 2.791927, 2.401156, 2.337743, 1.891358),
    "bayes_quadratic": (1.863846, 1.763976, 1.743353, 1.793872, 1.606310),
    "bayes_squared": (3.106411, 2.645964, 2.440694, 2.391829, 2.065256),
}
PRINTED_RECORDS = (
    "0.06274109",
    "4.38197283",
    "5.64659541",
    "7.26620864",
    "9.41371352",
    "9.51953091",
)
PRINTED_RANGES = ("4.319232", "5.583854", "7.203468", "9.350972", "9.456790")


class Criterion:
    """Collects check failures and prints one summary line on exit."""

    def __init__(self, capsys, number: int, title: str):
        self._capsys = capsys
        self.number = number
        self.title = title
        self.problems: list[str] = []
        self.detail = ""

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            self.problems.append(message)

    def note(self, detail: str) -> None:
        self.detail = detail

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None:
            self.problems.append(f"unexpected {exc_type.__name__}: {exc}")
        status = "PASS" if not self.problems else "FAIL"
        tail = f" -- {self.detail}" if self.detail else ""
        with self._capsys.disabled():
            print(f"[criterion {self.number:02d}] {status}: {self.title}{tail}", flush=True)
        if self.problems:
            pytest.fail(f"criterion {self.number}: " + "; ".join(self.problems))


@pytest.fixture
def criterion(capsys):
    def make(number: int, title: str) -> Criterion:
        return Criterion(capsys, number, title)

    return make


def test_criterion_01_table_reproduction(criterion, invoke):
    with criterion(1, "deterministic comparison table via `reproduce --table 1`") as c:
        t0 = time.perf_counter()
        code, out, _ = invoke("reproduce", "--table", "1", "--format", "json")
        elapsed = time.perf_counter() - t0
        c.check(code == 0, f"exit code {code}")
        rows = json.loads(out)["rows"]
        c.check([r["n"] for r in rows] == [2, 3, 4, 5, 6], "row index mismatch")
        worst = 0.0
        for column, wants in PRINTED_TABLE.items():
            for row, want in zip(rows, wants):
                rel = abs(row[column] - want) / abs(want)
                worst = max(worst, rel)
                c.check(rel < 5e-7, f"{column} at n={row['n']}: rel err {rel:.2e}")
        c.check(elapsed < 1.0, f"runtime {elapsed:.2f}s exceeds 1s")
        c.note(f"max rel err {worst:.1e}, {elapsed:.2f}s")


def test_criterion_02_record_extraction_exact_strings(criterion, invoke, sample_a_file):
    with criterion(2, "record/range extraction matches printed strings") as c:
        summary = extract_upper_records(datasets.SAMPLE_A)
        got_records = tuple(f"{v:.8f}" for v in summary.values)
        c.check(got_records == PRINTED_RECORDS, f"records {got_records}")
        got_ranges = tuple(f"{r:.6f}" for r in record_range_sequence(summary))
        c.check(got_ranges == PRINTED_RANGES, f"ranges {got_ranges}")
        # end to end: the CLI table carries the same record strings
        code, out, _ = invoke("extract", str(sample_a_file))
        c.check(code == 0, f"exit code {code}")
        for printed in PRINTED_RECORDS:
            c.check(printed in out, f"CLI output missing {printed}")
        c.note("6 records, 5 ranges, exact at printed precision")


def test_criterion_03_hpm_degenerate_gap(criterion):
    with criterion(3, "closed-form interval at g=0 collapses to the mode") as c:
        rng = np.random.default_rng(1234)
        worst = 0.0
        for _ in range(100):
            s = float(rng.uniform(0.5, 50.0))
            A = float(10.0 ** rng.uniform(-3.0, 3.0))
            post = PosteriorParams(s=s, A=A)
            iv = hpd_hpm_closed_form(post, 0.0)
            mode = A / (s + 1.0)
            dev = max(abs(iv.lower - mode), abs(iv.upper - mode)) / mode
            worst = max(worst, dev)
            c.check(dev <= 1e-12, f"(s={s:.3f}, A={A:.3e}): rel dev {dev:.2e}")
        c.note(f"100 draws, max rel dev {worst:.1e}")


def test_criterion_04_exact_hpd_grid(criterion):
    with criterion(4, "exact HPD residuals and optimality on the 36-point grid") as c:
        t0 = time.perf_counter()
        worst_dens = worst_cov = worst_id = 0.0
        for s in (2.0, 4.0, 8.0):
            for A in (1.0, 9.319232, 50.0):
                post = PosteriorParams(s=s, A=A)
                peak = posterior_pdf(A / (s + 1.0), post)
                for alpha in (0.01, 0.05, 0.1, 0.2):
                    iv = hpd_exact(post, alpha)
                    dens = abs(
                        posterior_pdf(iv.lower, post) - posterior_pdf(iv.upper, post)
                    ) / peak
                    cov = abs(
                        posterior_coverage(iv.lower, iv.upper, post) - (1.0 - alpha)
                    )
                    ident = abs(
                        (iv.lower / iv.upper) ** (s + 1.0)
                        - math.exp(A * (1.0 / iv.upper - 1.0 / iv.lower))
                    ) / (iv.lower / iv.upper) ** (s + 1.0)
                    worst_dens = max(worst_dens, dens)
                    worst_cov = max(worst_cov, cov)
                    worst_id = max(worst_id, ident)
                    tag = f"(s={s}, A={A}, alpha={alpha})"
                    c.check(dens < 1e-9, f"{tag} density residual {dens:.2e}")
                    c.check(cov < 1e-9, f"{tag} coverage residual {cov:.2e}")
                    c.check(ident < 1e-9, f"{tag} endpoint identity {ident:.2e}")
                    c.check(
                        iv.length <= equal_tails(post, alpha).length + 1e-12,
                        f"{tag} longer than equal tails",
                    )
        elapsed = time.perf_counter() - t0
        c.check(elapsed < 5.0, f"runtime {elapsed:.2f}s exceeds 5s")
        c.note(
            f"max residuals: density {worst_dens:.1e}, coverage {worst_cov:.1e}, "
            f"identity {worst_id:.1e}; {elapsed:.2f}s"
        )


def test_criterion_05_length_alpha_law(criterion, post_small):
    with criterion(5, "HPD length decreases in alpha with slope -1/density") as c:
        lengths = [length for _, length in length_of_alpha(post_small, [0.05, 0.10, 0.20])]
        c.check(lengths[0] > lengths[1] > lengths[2], f"not decreasing: {lengths}")
        h = 1e-3
        pair = length_of_alpha(post_small, [0.10 - h, 0.10 + h])
        slope = (pair[1][1] - pair[0][1]) / (2.0 * h)
        want = -1.0 / posterior_pdf(hpd_exact(post_small, 0.10).lower, post_small)
        rel = abs(slope - want) / abs(want)
        c.check(rel < 0.02, f"slope {slope:.6f} vs {want:.6f}: rel dev {rel:.3%}")
        c.note(f"slope rel dev {rel:.2%}")


def test_criterion_06_quantile_round_trip(criterion):
    with criterion(6, "chi-squared quantile round trip on the 4x99 grid") as c:
        worst = 0.0
        for nu in (2.0, 4.0, 8.0, 12.0):
            for i in range(1, 100):
                p = i / 100.0
                back = reg_lower_gamma(0.5 * nu, 0.5 * chi2_quantile(p, nu))
                worst = max(worst, abs(back - p))
                c.check(abs(back - p) < 1e-9, f"(p={p}, nu={nu}): residual {back - p:.2e}")
        median2 = chi2_quantile(0.5, 2.0)
        c.check(
            abs(median2 - 2.0 * math.log(2.0)) < 1e-10,
            f"chi2(0.5, 2) = {median2!r}",
        )
        c.note(f"max round-trip residual {worst:.1e}")


def test_criterion_07_moment_monte_carlo(criterion):
    with criterion(7, "estimator means and MSEs match Monte Carlo at 1e5 reps") as c:
        delta, n, a, b, reps = 2.0, 4, 3.0, 5.0, 100_000
        t0 = time.perf_counter()
        config = SimConfig(
            delta_true=delta, n_records=n, reps=reps, seed=20_240_817,
            prior=PriorParams(a=a, b=b),
            estimators=(
                EstimatorId.MLE_URR,
                EstimatorId.BAYES_QUADRATIC,
                EstimatorId.BAYES_SQUARED,
                EstimatorId.BAYES_ABSOLUTE,
            ),
        )
        result = run_point_sim(config)
        elapsed = time.perf_counter() - t0

        # every estimator here is linear in the range: value = m*r + offset
        q_med = chi2_quantile(0.5, 2.0 * (a + n - 1.0))
        linear = {
            EstimatorId.MLE_URR: (1.0 / (n - 1), 0.0),
            EstimatorId.BAYES_QUADRATIC: (1.0 / (a + n), b / (a + n)),
            EstimatorId.BAYES_SQUARED: (1.0 / (a + n - 2), b / (a + n - 2)),
            EstimatorId.BAYES_ABSOLUTE: (2.0 / q_med, 2.0 * b / q_med),
        }
        # central moments of the Gamma(n-1, delta) range
        shape = n - 1
        mu2 = shape * delta**2
        mu3 = 2.0 * shape * delta**3
        mu4 = 3.0 * shape * (shape + 2.0) * delta**4
        worst_sigma = 0.0
        for row in result.point_rows:
            m, offset = linear[row.estimator_id]
            beta = m * shape * delta + offset - delta  # bias
            se_mean = math.sqrt(m * m * mu2 / reps)
            mean_dev = abs(row.average_estimate - row.analytic_mean)
            c.check(
                mean_dev < 3.0 * se_mean,
                f"{row.estimator_id}: mean off by {mean_dev / se_mean:.2f} SE",
            )
            # SE of the empirical MSE via the fourth moment of m*Z + beta
            second = m * m * mu2 + beta * beta
            fourth = (
                m**4 * mu4 + 4.0 * m**3 * beta * mu3 + 6.0 * m * m * beta * beta * mu2
                + beta**4
            )
            se_mse = math.sqrt((fourth - second * second) / reps)
            mse_dev = abs(row.empirical_mse - row.analytic_mse)
            c.check(
                mse_dev < 3.0 * se_mse,
                f"{row.estimator_id}: MSE off by {mse_dev / se_mse:.2f} SE",
            )
            worst_sigma = max(worst_sigma, mean_dev / se_mean, mse_dev / se_mse)
        c.check(elapsed < 10.0, f"runtime {elapsed:.2f}s exceeds 10s")
        c.note(f"worst deviation {worst_sigma:.2f} SE, {elapsed:.1f}s")


def test_criterion_08_risk_formulas(criterion):
    with criterion(8, "linear-rule risk and Bayes risk match 1e6-draw Monte Carlo") as c:
        est, delta, n, reps = LinearEstimator(m=0.2, d=0.5), 2.0, 4, 1_000_000
        rng = np.random.default_rng(97)
        r = rng.gamma(shape=n - 1, scale=delta, size=reps)
        losses = ((est.m * r + est.d - delta) / delta) ** 2
        se = losses.std(ddof=1) / math.sqrt(reps)
        dev = abs(losses.mean() - risk_linear(est, delta, n))
        c.check(dev < 3.0 * se, f"frequentist risk off by {dev / se:.2f} SE")

        a, b = 3.0, 5.0
        scale_draw = 1.0 / rng.gamma(shape=a, scale=1.0 / b, size=reps)
        r2 = rng.gamma(shape=n - 1, size=reps) * scale_draw
        nested = ((est.m * r2 + est.d - scale_draw) / scale_draw) ** 2
        se_b = nested.std(ddof=1) / math.sqrt(reps)
        dev_b = abs(nested.mean() - bayes_risk_linear(est, n, PriorParams(a, b)))
        c.check(dev_b < 3.0 * se_b, f"Bayes risk off by {dev_b / se_b:.2f} SE")

        exact = risk_linear(LinearEstimator(m=0.0, d=delta), delta, n)
        c.check(exact == 0.0, f"risk(m=0, d=delta) = {exact!r}, want exact 0.0")
        c.note(f"risk dev {dev / se:.2f} SE, Bayes dev {dev_b / se_b:.2f} SE")


def test_criterion_09_admissibility_limit(criterion):
    with criterion(9, "Bayes-risk gap vanishes along the vague-prior path") as c:
        ks = (1, 10, 100, 10**4, 10**6)
        gaps = [r1_r2_gap(float(k), 4, 2.0) for k in ks]
        mags = [abs(g) for g in gaps]
        c.check(
            all(x > y for x, y in zip(mags, mags[1:])),
            f"|gap| not decreasing: {mags}",
        )
        c.check(mags[-1] < 1e-4, f"|gap(1e6)| = {mags[-1]:.2e}")
        scaled = 1e6 * gaps[-1]
        c.check(
            abs(scaled - (-0.015625)) < 1e-6,
            f"k*gap at k=1e6 is {scaled!r}, want -1/64",
        )
        c.note(f"|gap(1e6)| = {mags[-1]:.2e}, k*gap = {scaled:.9f}")


def test_criterion_10_bayesian_coverage(criterion):
    with criterion(10, "equal-tails Bayesian coverage at alpha 0.10 and 0.50") as c:
        t0 = time.perf_counter()
        config = SimConfig(
            delta_true=1.0, n_records=3, reps=100_000, seed=424_242,
            prior=PriorParams(a=3.0, b=4.0),
            alpha_list=(0.10, 0.50),
            interval_kinds=(IntervalKind.EQUAL_TAILS,),
        )
        rows = {row.alpha: row for row in run_interval_sim(config).interval_rows}
        elapsed = time.perf_counter() - t0
        dev10 = abs(rows[0.10].empirical_coverage - 0.90)
        dev50 = abs(rows[0.50].empirical_coverage - 0.50)
        c.check(dev10 <= 0.01, f"coverage at alpha=0.10 off by {dev10:.4f}")
        c.check(dev50 <= 0.015, f"coverage at alpha=0.50 off by {dev50:.4f}")
        c.check(elapsed < 30.0, f"runtime {elapsed:.2f}s exceeds 30s")
        c.note(
            f"coverages {rows[0.10].empirical_coverage:.4f}/"
            f"{rows[0.50].empirical_coverage:.4f}, {elapsed:.1f}s"
        )


def test_criterion_11_simulation_determinism(criterion, invoke, tmp_path):
    with criterion(11, "simulation CSV is byte-identical across runs and workers") as c:
        base = (
            "simulate", "--a", "8", "--b", "2", "--n", "4..5", "--reps", "400",
            "--delta", "2", "--seed", "31337",
        )
        for name, extra in (
            ("one", ()),
            ("two", ()),
            ("par", ("--workers", "2")),
        ):
            code, _, _ = invoke(*base, *extra, "--out", str(tmp_path / name))
            c.check(code == 0, f"run {name} exited {code}")
        first = (tmp_path / "one.csv").read_bytes()
        c.check(
            first == (tmp_path / "two.csv").read_bytes(),
            "repeat run differs",
        )
        c.check(
            first == (tmp_path / "par.csv").read_bytes(),
            "parallel run differs",
        )
        c.check(
            (tmp_path / "one.json").read_bytes() == (tmp_path / "par.json").read_bytes(),
            "parallel JSON differs",
        )
        c.note(f"{len(first)} bytes, serial == repeat == parallel")
