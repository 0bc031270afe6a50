"""Shared fixtures: canonical posteriors, data files, and a CLI runner."""

import pytest

from recrange import PosteriorParams, datasets
from recrange.cli import main


@pytest.fixture
def post_small() -> PosteriorParams:
    # a=3, b=5 prior combined with the first two records of SAMPLE_A
    # (range rounded to the 6 printed decimals)
    return PosteriorParams(s=4.0, A=9.319232)


@pytest.fixture
def sample_a_file(tmp_path):
    path = tmp_path / "sample_a.txt"
    path.write_text("\n".join(repr(v) for v in datasets.SAMPLE_A) + "\n")
    return path


@pytest.fixture
def sample_b_file(tmp_path):
    path = tmp_path / "sample_b.txt"
    path.write_text("\n".join(repr(v) for v in datasets.SAMPLE_B) + "\n")
    return path


@pytest.fixture
def invoke(capsys):
    """Run the CLI in-process, returning (exit_code, stdout, stderr)."""

    def run(*argv: str):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
