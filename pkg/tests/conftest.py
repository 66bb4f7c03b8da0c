from pathlib import Path

import pytest

from patproj import IntervalVector, load_csv, read_cxt
from patproj.order_core import lattice_from_covers, validate_lattice
from patproj.representation import context_as_pattern_structure

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


def iv(*pairs):
    return IntervalVector(pairs)


@pytest.fixture
def interval_ps():
    return load_csv(DATA / "intervals.csv")


@pytest.fixture
def pairs_ps():
    return context_as_pattern_structure(read_cxt((DATA / "pairs.cxt").read_text()))


@pytest.fixture
def diamond():
    return validate_lattice(
        ["bot", "x", "y", "top"],
        [("x", "y", "bot"), ("x", "top", "x"), ("y", "top", "y"),
         ("bot", "x", "bot"), ("bot", "y", "bot"), ("bot", "top", "bot")],
    )


@pytest.fixture
def split_lattice():
    return lattice_from_covers(
        ["bot", "z", "x", "y", "top"],
        [("bot", "z"), ("z", "x"), ("z", "y"), ("x", "top"), ("y", "top")],
    )


@pytest.fixture
def chain3():
    return lattice_from_covers(["bot", "a", "b"], [("bot", "a"), ("a", "b")])
