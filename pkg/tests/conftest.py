import cmath

import numpy as np
import pytest
from hypothesis import strategies as st

from swnfock.testfn import StepFunction


def random_step(rng, max_cells=4, bound=0.45, lo=0.0, hi=4.0, real=False):
    """Step function with 1..max_cells disjoint intervals and moduli <= bound."""
    k = int(rng.integers(1, max_cells + 1))
    edges = np.sort(rng.uniform(lo, hi, size=2 * k))
    pieces = []
    for i in range(k):
        a, b = edges[2 * i], edges[2 * i + 1]
        if not a < b:
            continue
        r = bound * rng.random()
        v = r if real else r * cmath.exp(2j * cmath.pi * rng.random())
        pieces.append((float(a), float(b), v))
    return StepFunction.from_intervals(pieces)


@pytest.fixture
def rng():
    return np.random.default_rng(20081101)


def gaussian_045(t):
    return 0.45 * np.exp(-t * t)


@st.composite
def step_functions(draw, max_cells=4, bound=0.45, dyadic=True):
    """Hypothesis strategy: 1-d step functions on [0, 4) with dyadic data."""
    k = draw(st.integers(1, max_cells))
    grid = 64
    cuts = sorted(draw(st.lists(st.integers(0, grid), min_size=2 * k, max_size=2 * k, unique=True)))
    pieces = []
    scale = int(bound * 256)
    for i in range(k):
        re = draw(st.integers(-scale, scale))
        im_room = int((scale**2 - re**2) ** 0.5)
        im = draw(st.integers(-im_room, im_room))
        pieces.append((cuts[2 * i] / 16, cuts[2 * i + 1] / 16, complex(re / 256, im / 256)))
    return StepFunction.from_intervals(pieces)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
