from __future__ import annotations

from pathlib import Path

import pytest

from mapsphere.poincare import load_ring, validate_ring

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
DATA = Path(__file__).resolve().parent / "data"
CORPUS_NAMES = ["cp2", "cp3", "s2xs2", "s3xs3", "cp2xcp2"]


def ring(name: str):
    return validate_ring(load_ring(CORPUS / f"{name}.json"))


@pytest.fixture(scope="session")
def corpus():
    return {name: ring(name) for name in CORPUS_NAMES}


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion; printed at the end of the run."""
    def emit(label: str, passed: bool, detail: str = "") -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
