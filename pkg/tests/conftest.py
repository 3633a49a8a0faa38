from pathlib import Path

import pytest

from mapda import CodedArray

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

EX1 = [
    ["*", 1, 2, 3],
    [1, "*", 3, 2],
    [2, 3, "*", 1],
    [3, 2, 1, "*"],
]

# golden stages of the worked lifting example (m=2, L=3, base MN(4,2))
GOLDEN_U = [
    ["*", "*", 2, 1],
    ["*", 3, "*", 1],
    ["*", 3, 2, "*"],
    [4, "*", "*", 1],
    [4, "*", 2, "*"],
    [4, 3, "*", "*"],
]
GOLDEN_U0 = [row + row for row in GOLDEN_U]
GOLDEN_P2 = [
    ["*", "*", 2, 1, "*", "*", 6, 5],
    ["*", 3, "*", 9, "*", 7, "*", 13],
    ["*", 11, 10, "*", "*", 15, 14, "*"],
    [4, "*", "*", 17, 8, "*", "*", 21],
    [12, "*", 18, "*", 16, "*", 22, "*"],
    [20, 19, "*", "*", 24, 23, "*", "*"],
]
GOLDEN_P_SUB1 = [
    ["*", "*", 1, 2, "*", "*", 1],
    ["*", 1, "*", 3, "*", 1, "*"],
    [1, "*", "*", 4, 1, "*", "*"],
    ["*", "*", 2, 1, "*", "*", 6],
]
GOLDEN_LATIN5 = [
    [1, 2, 3, 4, 5],
    [2, 3, 4, 5, 1],
    [3, 4, 5, 1, 2],
    [4, 5, 1, 2, 3],
    [5, 1, 2, 3, 4],
]
GOLDEN_LATIN_MAPDA = [
    [1, 2, "*", "*", "*"],
    ["*", 1, 2, "*", "*"],
    ["*", "*", 1, 2, "*"],
    ["*", "*", "*", 1, 2],
    [2, "*", "*", "*", 1],
]
# MN(4,2): GOLDEN_U with every row's integers shifted back one place
DERIVED_Q = [
    ["*", "*", 1, 2],
    ["*", 1, "*", 3],
    ["*", 2, 3, "*"],
    [1, "*", "*", 4],
    [2, "*", 4, "*"],
    [3, 4, "*", "*"],
]


def as_grid(a):
    return [["*" if v == 0 else v for v in row] for row in a.cells.tolist()]


@pytest.fixture
def ex1():
    return CodedArray.from_rows(EX1)


@pytest.fixture
def q42():
    return CodedArray.from_rows(DERIVED_Q)
