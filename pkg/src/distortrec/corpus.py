"""Dataset ingestion and the deterministic every-fifth-record split protocol."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

DISTORTION_LABELS = (
    "All-or-nothing_thinking",
    "Emotional_Reasoning",
    "Fortune-telling",
    "Labeling",
    "Magnification",
    "Mental_filter",
    "Mind_Reading",
    "Overgeneralization",
    "Personalization",
    "Should_statements",
)

# canonical lookup key: lowercase with punctuation/whitespace removed
def _label_key(s: str) -> str:
    return re.sub(r"[\W_]+", "", s.lower())


_CANONICAL = {_label_key(lbl): lbl for lbl in DISTORTION_LABELS}
# spellings seen in the public CSVs that the generic key does not already cover
_CANONICAL.update({
    _label_key("Black-and-white or polarized thinking / All or nothing thinking"):
        "All-or-nothing_thinking",
    _label_key("Fortune telling"): "Fortune-telling",
    _label_key("Mental filtering"): "Mental_filter",
    _label_key("Mindreading"): "Mind_Reading",
    _label_key("Should statement"): "Should_statements",
})

_NO_DISTORTION_KEYS = {"", "nodistortion", "none", "nan", "no"}


def canonical_label(raw: str) -> str | None:
    """Map a raw label string to its canonical name, or None for 'no distortion'.

    Raises ValueError for a label that matches neither.
    """
    key = _label_key(raw.strip())
    if key in _NO_DISTORTION_KEYS:
        return None
    if key in _CANONICAL:
        return _CANONICAL[key]
    raise ValueError(f"unknown distortion label: {raw!r}")


@dataclass(frozen=True)
class LabeledText:
    id: int
    text: str
    labels: frozenset[str] = field(default_factory=frozenset)
    distorted_part: str | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("empty text")
        bad = set(self.labels) - set(DISTORTION_LABELS)
        if bad:
            raise ValueError(f"non-canonical labels: {sorted(bad)}")


@dataclass(frozen=True)
class SplitPlan:
    shift: int
    test_indices: tuple[int, ...]
    train_indices: tuple[int, ...]


def read_column_map(path) -> dict[str, str]:
    """Parse a key=value column-map config mapping roles to CSV header names.

    Recognized roles: text, dominant, secondary, distorted_part. The first
    two are required.
    """
    mapping = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    for role in ("text", "dominant"):
        if role not in mapping:
            raise ValueError(f"column map missing required role {role!r}")
    return mapping


def load_dataset(path, column_map: dict[str, str]) -> list[LabeledText]:
    """Load a delimited dataset (CSV or TSV, header row required) into records.

    Label strings are canonicalized; empty / "No Distortion" labels yield an
    empty label set. Unknown labels and missing mapped columns are hard errors.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as f:
        sample = f.read(4096)
        f.seek(0)
        delimiter = "\t" if sample.count("\t") > sample.count(",") else ","
        reader = csv.DictReader(f, delimiter=delimiter)
        headers = reader.fieldnames or []
        for role, col in column_map.items():
            if col and col not in headers:
                raise ValueError(f"{path}: mapped column {col!r} (role {role}) not in header {headers}")
        records = []
        for rownum, row in enumerate(reader):
            text = (row.get(column_map["text"]) or "").strip()
            if not text:
                continue
            labels = set()
            for role in ("dominant", "secondary"):
                col = column_map.get(role)
                if not col:
                    continue
                try:
                    lbl = canonical_label(row.get(col) or "")
                except ValueError as e:
                    raise ValueError(f"{path} row {rownum}: {e}") from None
                if lbl is not None:
                    labels.add(lbl)
            part_col = column_map.get("distorted_part")
            part = (row.get(part_col) or "").strip() if part_col else ""
            records.append(LabeledText(
                id=len(records),
                text=text,
                labels=frozenset(labels),
                distorted_part=part or None,
            ))
    return records


def make_splits(corpus: list[LabeledText], shifts=(0, 1, 2)) -> list[SplitPlan]:
    """Build the three 80/20 splits: test = every fifth record at the shift."""
    n = len(corpus)
    if n < 5:
        raise ValueError(f"corpus too small to split: {n} records")
    plans = []
    for shift in shifts:
        test = tuple(i for i in range(n) if i % 5 == shift)
        train = tuple(i for i in range(n) if i % 5 != shift)
        plans.append(SplitPlan(shift=shift, test_indices=test, train_indices=train))
    return plans
