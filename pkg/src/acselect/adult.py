"""Binarization preset for the UCI Adult census data (19 binary attributes).

Eight raw attributes are used: age, work class, education (years), marital
status, occupation, race, sex and hours per week; the label is
``income > 50K``.  Numeric attributes are bucketed into one indicator per
interval.  Intervals are right-closed ``(a, b]`` except the first, which is
``[0, b]``.

The cut points for education and hours, and the single indicator used for
work class and occupation, are choices of this preset; they are collected
below so they can be changed in one place.
"""

from __future__ import annotations

import csv
import io
import math
import os
from pathlib import Path

import numpy as np

from .dataset import BinaryDataset, DataFormatError

AGE_BOUNDS = (25, 35, 45, 55)
EDUCATION_BOUNDS = (8, 10, 12)          # years: <=8, 9-10, 11-12, >=13
HOURS_BOUNDS = (20, 35, 40, 50)         # <=20, 21-35, 36-40, 41-50, >50

PRIVATE_WORKCLASS = frozenset({"Private"})
PROFESSIONAL_OCCUPATIONS = frozenset({"Exec-managerial", "Prof-specialty"})

RAW_COLUMNS = (
    "age", "workclass", "fnlwgt", "education", "education-num", "marital-status",
    "occupation", "relationship", "race", "sex", "capital-gain", "capital-loss",
    "hours-per-week", "native-country", "income",
)

REQUIRED = ("age", "workclass", "education-num", "marital-status", "occupation",
            "race", "sex", "hours-per-week", "income")


def _interval_names(prefix: str, bounds) -> list[str]:
    edges = [0, *bounds]
    names = [f"{prefix}[0,{bounds[0]}]"]
    names += [f"{prefix}({a},{b}]" for a, b in zip(edges[1:], edges[2:])]
    names.append(f"{prefix}({bounds[-1]},inf]")
    return names


FEATURE_NAMES = (
    *_interval_names("age", AGE_BOUNDS),
    "workclass=private",
    *_interval_names("education", EDUCATION_BOUNDS),
    "never-married",
    "occupation=professional",
    "race=white",
    "sex=male",
    *_interval_names("hours", HOURS_BOUNDS),
)
assert len(FEATURE_NAMES) == 19


def bucket(value: float, bounds) -> int:
    """Index of the right-closed interval containing ``value``."""
    for i, b in enumerate(bounds):
        if value <= b:
            return i
    return len(bounds)


def _number(raw: str, column: str, line: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise DataFormatError(f"unparseable {column} value {raw!r}", line=line) from None
    if math.isnan(v):
        raise DataFormatError(f"unparseable {column} value {raw!r}", line=line)
    return v


def binarize_record(rec: dict, line: int = 0) -> tuple[list[int], bool]:
    bits: list[int] = []

    def one_hot(index, width):
        bits.extend(int(i == index) for i in range(width))

    one_hot(bucket(_number(rec["age"], "age", line), AGE_BOUNDS), len(AGE_BOUNDS) + 1)
    bits.append(int(rec["workclass"] in PRIVATE_WORKCLASS))
    one_hot(bucket(_number(rec["education-num"], "education-num", line), EDUCATION_BOUNDS),
            len(EDUCATION_BOUNDS) + 1)
    bits.append(int(rec["marital-status"] == "Never-married"))
    bits.append(int(rec["occupation"] in PROFESSIONAL_OCCUPATIONS))
    bits.append(int(rec["race"] == "White"))
    bits.append(int(rec["sex"] == "Male"))
    one_hot(bucket(_number(rec["hours-per-week"], "hours-per-week", line), HOURS_BOUNDS),
            len(HOURS_BOUNDS) + 1)
    income = rec["income"].rstrip(".")
    if income not in (">50K", "<=50K"):
        raise DataFormatError(f"unknown income value {rec['income']!r}", line=line)
    return bits, income == ">50K"


def adult_binarize(records) -> BinaryDataset:
    """Binarize an iterable of ``(line_number, record_dict)`` pairs."""
    matrix, labels = [], []
    for line, rec in records:
        missing = [c for c in REQUIRED if c not in rec]
        if missing:
            raise DataFormatError(f"missing attribute column(s) {missing}", line=line)
        bits, y = binarize_record({k: str(v).strip() for k, v in rec.items()}, line)
        matrix.append(bits)
        labels.append(y)
    if not matrix:
        raise DataFormatError("no records")
    return BinaryDataset.from_matrix(np.array(matrix, dtype=np.uint8), labels, FEATURE_NAMES)


def _records(text: str):
    """Accept either the headerless UCI file or a CSV with a header row."""
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines())
             if ln.strip() and not ln.startswith("|")]
    if not lines:
        return
    first = [c.strip() for c in lines[0][1].split(",")]
    if "age" in first:
        header = [c.replace("_", "-") for c in first]
        body = lines[1:]
    else:
        header = list(RAW_COLUMNS)
        body = lines
    for lineno, ln in body:
        cells = next(csv.reader(io.StringIO(ln), skipinitialspace=True))
        if len(cells) != len(header):
            raise DataFormatError(f"expected {len(header)} cells, got {len(cells)}", line=lineno)
        yield lineno, dict(zip(header, cells))


def loads_adult(text: str) -> BinaryDataset:
    return adult_binarize(_records(text))


def load_adult(path: str | os.PathLike) -> BinaryDataset:
    p = Path(path)
    try:
        return loads_adult(p.read_text())
    except DataFormatError as exc:
        raise DataFormatError(exc.message, path=str(p), line=exc.line) from None
