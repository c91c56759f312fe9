"""The interpretable model: per-distortion weighted N-gram dictionaries.

One TSV file per distortion (``tokens<TAB>weight``), plus a key=value
metadata file. Weights live in (0, 1]; lines without a weight column load
as 1.0 so unweighted baseline dictionaries import unchanged. Models are
treated as immutable values; edits return new models.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

NGram = tuple[str, ...]

_METADATA_FILE = "model.meta"
_MIN_WEIGHT = 1e-6


@dataclass(frozen=True)
class DistortionDictionary:
    distortion: str
    entries: dict[NGram, float]

    def __post_init__(self):
        for g, w in self.entries.items():
            if not g or any(not tok for tok in g):
                raise ValueError(f"bad N-gram {g!r}")
            if not (0.0 < w <= 1.0):
                raise ValueError(f"weight {w} for {g!r} outside (0, 1]")

    def max_order(self) -> int:
        return max((len(g) for g in self.entries), default=0)


def _format_weight(w: float) -> str:
    # 6 decimals when that round-trips exactly, shortest exact repr otherwise
    s = f"{w:.6f}"
    return s if float(s) == w else repr(w)


@dataclass(frozen=True)
class Model:
    dictionaries: tuple[DistortionDictionary, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        labels = [d.distortion for d in self.dictionaries]
        if len(labels) != len(set(labels)):
            raise ValueError("duplicate distortion labels in model")

    @property
    def nm(self) -> int:
        return max((d.max_order() for d in self.dictionaries), default=0)

    @property
    def labels(self) -> list[str]:
        return [d.distortion for d in self.dictionaries]

    def dictionary(self, distortion: str) -> DistortionDictionary:
        for d in self.dictionaries:
            if d.distortion == distortion:
                return d
        raise KeyError(distortion)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (
            {d.distortion: d.entries for d in self.dictionaries}
            == {d.distortion: d.entries for d in other.dictionaries}
        )


def save_model(model: Model, dir_path) -> None:
    """Write one ``<label>.tsv`` per distortion plus a metadata file.

    Lines are sorted by descending weight then lexicographically, weights
    serialized with 6 decimals. Weights below 1e-6 are rejected: they cannot
    influence any detection threshold in use.
    """
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    for d in model.dictionaries:
        lines = []
        for g, w in sorted(d.entries.items(), key=lambda kv: (-kv[1], kv[0])):
            if w < _MIN_WEIGHT:
                raise ValueError(f"weight {w} for {g!r} below {_MIN_WEIGHT}")
            lines.append(f"{' '.join(g)}\t{_format_weight(w)}\n")
        (dir_path / f"{d.distortion}.tsv").write_text("".join(lines), encoding="utf-8", newline="")
    meta_lines = [f"{k}={v}\n" for k, v in sorted(model.metadata.items())]
    meta_lines.append(f"NM={model.nm}\n")
    (dir_path / _METADATA_FILE).write_text("".join(meta_lines), encoding="utf-8", newline="")


def load_model(dir_path) -> Model:
    """Load a model directory written by save_model (or baseline dictionaries).

    A missing weight column defaults to 1.0. Malformed lines and weights
    outside (0, 1] raise with file and line number.
    """
    dir_path = Path(dir_path)
    dict_files = sorted(p for p in dir_path.glob("*.tsv"))
    if not dict_files:
        raise FileNotFoundError(f"no dictionary files (*.tsv) in {dir_path}")
    dictionaries = []
    for p in dict_files:
        entries: dict[NGram, float] = {}
        for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            tokens_part, _, weight_part = line.partition("\t")
            g = tuple(tokens_part.split())
            if not g:
                raise ValueError(f"{p}:{lineno}: empty N-gram")
            if weight_part.strip():
                try:
                    w = float(weight_part)
                except ValueError:
                    raise ValueError(f"{p}:{lineno}: bad weight {weight_part!r}") from None
            else:
                w = 1.0
            if not (0.0 < w <= 1.0):
                raise ValueError(f"{p}:{lineno}: weight {w} outside (0, 1]")
            entries[g] = w
        dictionaries.append(DistortionDictionary(distortion=p.stem, entries=entries))
    metadata = {}
    meta_path = dir_path / _METADATA_FILE
    if meta_path.exists():
        for line in meta_path.read_text(encoding="utf-8").splitlines():
            if "=" in line:
                k, _, v = line.partition("=")
                metadata[k.strip()] = v.strip()
    return Model(dictionaries=tuple(dictionaries), metadata=metadata)


@dataclass(frozen=True)
class ModelDiff:
    # per distortion: entries only in b, only in a, and weight changes a -> b
    added: dict[str, dict[NGram, float]]
    removed: dict[str, dict[NGram, float]]
    reweighted: dict[str, dict[NGram, tuple[float, float]]]

    def is_empty(self) -> bool:
        return not (any(self.added.values()) or any(self.removed.values())
                    or any(self.reweighted.values()))


def diff_models(a: Model, b: Model, tol: float = 1e-9) -> ModelDiff:
    """Symmetric per-distortion difference between two models (a -> b)."""
    if set(a.labels) != set(b.labels):
        raise ValueError(f"label sets differ: {sorted(a.labels)} vs {sorted(b.labels)}")
    added, removed, reweighted = {}, {}, {}
    for label in a.labels:
        ea, eb = a.dictionary(label).entries, b.dictionary(label).entries
        added[label] = {g: w for g, w in eb.items() if g not in ea}
        removed[label] = {g: w for g, w in ea.items() if g not in eb}
        reweighted[label] = {
            g: (ea[g], eb[g]) for g in ea.keys() & eb.keys() if abs(ea[g] - eb[g]) > tol
        }
    return ModelDiff(added=added, removed=removed, reweighted=reweighted)


def edit_entry(model: Model, distortion: str, ngram: NGram, weight: float | None) -> tuple[Model, bool]:
    """Set (weight in (0,1]) or delete (weight None) one dictionary entry.

    Returns (new model, changed). Deleting a missing entry is a no-op with
    changed=False.
    """
    ngram = tuple(ngram)
    labels = model.labels
    if distortion not in labels:
        raise KeyError(f"unknown distortion {distortion!r}")
    if weight is not None and not (0.0 < weight <= 1.0):
        raise ValueError(f"weight {weight} outside (0, 1]")
    new_dicts = []
    changed = False
    for d in model.dictionaries:
        if d.distortion != distortion:
            new_dicts.append(d)
            continue
        entries = dict(d.entries)
        if weight is None:
            if ngram in entries:
                del entries[ngram]
                changed = True
        else:
            changed = entries.get(ngram) != weight
            entries[ngram] = weight
        new_dicts.append(DistortionDictionary(distortion=d.distortion, entries=entries))
    return replace(model, dictionaries=tuple(new_dicts)), changed
