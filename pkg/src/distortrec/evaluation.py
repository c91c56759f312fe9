"""Evaluation protocol: per-distortion F1, 3-split runs, hyper-parameter grid.

Recognition scores do not depend on the detection threshold, so each
trained model is scored once per test text and the cached scores are
thresholded for every DT value.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .convkernel import ConvolutionRecognizer
from .corpus import DISTORTION_LABELS, LabeledText, make_splits
from .learning import LearningConfig, build_model, collect_stats
from .model import Model
from .recognizer import NgramIndex, RecognitionConfig, recognize
from .textprep import TokenizedText, tokenize

DT_VALUES = (10, 20, 30, 40, 50, 60, 70, 80, 90)
IT_VALUES = (0, 10, 20, 30, 40, 50, 60, 70, 80, 90)
NM_VALUES = (1, 2, 3, 4, 5)


@dataclass
class ConfusionCell:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        denom = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / denom if denom else 0.0


@dataclass
class SplitScore:
    confusion: dict[str, ConfusionCell]
    macro_f1: float
    binary_f1: float


@dataclass
class EvalReport:
    nm: int
    sm: str
    it: int
    dt: int
    weighted: bool
    run_f1: list[float]
    mean_f1: float
    min_f1: float
    max_f1: float
    mpe: float
    per_distortion_f1: dict[str, float]
    binary_f1: float


def compute_split_scores(model: Model, test_texts: list[TokenizedText],
                         weighted: bool, ls: bool = True,
                         backend: str = "naive") -> list[dict[str, float]]:
    """DT-independent normalized scores for every test text."""
    cfg = RecognitionConfig(dt=0, ls=ls, weighted=weighted)
    if backend == "kernel":
        engine = ConvolutionRecognizer(model)
        return [engine.recognize(tt, cfg).scores for tt in test_texts]
    index = NgramIndex(model)
    return [recognize(tt, index, cfg).scores for tt in test_texts]


def score_from_cached(scores: list[dict[str, float]], truths: list[frozenset],
                      dt: int, labels=DISTORTION_LABELS) -> SplitScore:
    """One-vs-rest confusion counts and macro F1 at a detection threshold."""
    confusion = {d: ConfusionCell() for d in labels}
    binary = ConfusionCell()
    for text_scores, truth in zip(scores, truths):
        any_pred = False
        for d in labels:
            pred = text_scores.get(d, 0.0) * 100.0 > dt
            any_pred = any_pred or pred
            actual = d in truth
            cell = confusion[d]
            if pred and actual:
                cell.tp += 1
            elif pred:
                cell.fp += 1
            elif actual:
                cell.fn += 1
            else:
                cell.tn += 1
        actual_any = bool(truth)
        if any_pred and actual_any:
            binary.tp += 1
        elif any_pred:
            binary.fp += 1
        elif actual_any:
            binary.fn += 1
        else:
            binary.tn += 1
    macro = sum(confusion[d].f1 for d in labels) / len(labels)
    return SplitScore(confusion=confusion, macro_f1=macro, binary_f1=binary.f1)


def score_split(model: Model, test: list[LabeledText], cfg: RecognitionConfig,
                labels=DISTORTION_LABELS, backend: str = "naive") -> SplitScore:
    """Evaluate one trained model against one test split."""
    tokenized = [tokenize(r.text) for r in test]
    cached = compute_split_scores(model, tokenized, cfg.weighted, cfg.ls, backend)
    return score_from_cached(cached, [r.labels for r in test], cfg.dt, labels)


def mpe_percent(values: list[float]) -> float:
    """Maximum relative deviation of a run value from the mean, in percent."""
    mean = sum(values) / len(values)
    if mean == 0:
        return 0.0
    return max(abs(v - mean) / mean for v in values) * 100.0


def run_protocol(corpus: list[LabeledText], learn_cfg: LearningConfig,
                 rec_cfg: RecognitionConfig, labels=DISTORTION_LABELS,
                 backend: str = "naive") -> EvalReport:
    """Train/evaluate over the three shifted 80/20 splits and aggregate."""
    splits = make_splits(corpus)
    run_f1 = []
    per_d_runs = {d: [] for d in labels}
    binary_runs = []
    for plan in splits:
        train = [corpus[i] for i in plan.train_indices]
        test = [corpus[i] for i in plan.test_indices]
        stats = collect_stats(train, learn_cfg.nm, n_distortions=len(labels))
        model = build_model(stats, learn_cfg, labels=tuple(labels))
        split = score_split(model, test, rec_cfg, labels, backend)
        run_f1.append(split.macro_f1)
        binary_runs.append(split.binary_f1)
        for d in labels:
            per_d_runs[d].append(split.confusion[d].f1)
    mean = sum(run_f1) / len(run_f1)
    return EvalReport(
        nm=learn_cfg.nm, sm=learn_cfg.sm, it=learn_cfg.it, dt=rec_cfg.dt,
        weighted=rec_cfg.weighted, run_f1=run_f1, mean_f1=mean,
        min_f1=min(run_f1), max_f1=max(run_f1), mpe=mpe_percent(run_f1),
        per_distortion_f1={d: sum(v) / len(v) for d, v in per_d_runs.items()},
        binary_f1=sum(binary_runs) / len(binary_runs),
    )


def _grid_chunk(args):
    """All (IT, DT, weighted) cells for one (shift, NM, SM) training group."""
    (train, test_tokenized, truths, nm, sm, it_values, dt_values,
     modes, labels, ls, backend, shift) = args
    stats = collect_stats(train, nm, n_distortions=len(labels))
    rows = []
    for it in it_values:
        model = build_model(stats, LearningConfig(nm=nm, sm=sm, it=it), labels=tuple(labels))
        for weighted in modes:
            cached = compute_split_scores(model, test_tokenized, weighted, ls, backend)
            for dt in dt_values:
                split = score_from_cached(cached, truths, dt, labels)
                rows.append({
                    "shift": shift, "nm": nm, "sm": sm, "it": it, "dt": dt,
                    "weighted": weighted, "macro_f1": split.macro_f1,
                    "binary_f1": split.binary_f1,
                    "per_distortion_f1": {d: split.confusion[d].f1 for d in labels},
                })
    return rows


def grid_search(corpus: list[LabeledText], nm_values=NM_VALUES, sm_values=None,
                it_values=IT_VALUES, dt_values=DT_VALUES, modes=(False, True),
                labels=DISTORTION_LABELS, ls: bool = True, backend: str = "kernel",
                n_jobs: int = 1) -> list[EvalReport]:
    """Sweep the full (NM, SM, IT, DT, weighted) grid over the 3-split protocol.

    Returns one aggregated EvalReport per grid cell, sorted by descending
    mean macro F1.
    """
    from .learning import SELECTION_METRICS
    if sm_values is None:
        sm_values = SELECTION_METRICS
    splits = make_splits(corpus)
    prepared = []
    for plan in splits:
        train = [corpus[i] for i in plan.train_indices]
        test = [corpus[i] for i in plan.test_indices]
        prepared.append((plan.shift, train,
                         [tokenize(r.text) for r in test],
                         [r.labels for r in test]))
    tasks = [
        (train, test_tok, truths, nm, sm, tuple(it_values), tuple(dt_values),
         tuple(modes), tuple(labels), ls, backend, shift)
        for shift, train, test_tok, truths in prepared
        for nm in nm_values
        for sm in sm_values
    ]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            chunks = list(pool.map(_grid_chunk, tasks))
    else:
        chunks = [_grid_chunk(t) for t in tasks]

    by_cell: dict[tuple, list[dict]] = {}
    for rows in chunks:
        for row in rows:
            key = (row["nm"], row["sm"], row["it"], row["dt"], row["weighted"])
            by_cell.setdefault(key, []).append(row)
    reports = []
    for (nm, sm, it, dt, weighted), rows in by_cell.items():
        rows.sort(key=lambda r: r["shift"])
        f1s = [r["macro_f1"] for r in rows]
        mean = sum(f1s) / len(f1s)
        per_d = {
            d: sum(r["per_distortion_f1"][d] for r in rows) / len(rows) for d in labels
        }
        reports.append(EvalReport(
            nm=nm, sm=sm, it=it, dt=dt, weighted=weighted, run_f1=f1s,
            mean_f1=mean, min_f1=min(f1s), max_f1=max(f1s), mpe=mpe_percent(f1s),
            per_distortion_f1=per_d,
            binary_f1=sum(r["binary_f1"] for r in rows) / len(rows),
        ))
    reports.sort(key=lambda r: (-r.mean_f1, r.nm, r.sm, r.it, r.dt, r.weighted))
    return reports


_CSV_FIELDS = ["nm", "sm", "it", "dt", "weighted", "mean_f1", "min_f1", "max_f1",
               "mpe", "binary_f1"]


def emit_report(reports: list[EvalReport], csv_path=None, json_path=None,
                labels=DISTORTION_LABELS) -> None:
    """Write the grid table as CSV and/or a JSON summary with the best cells."""
    if not reports:
        raise ValueError("no evaluation results to emit")
    if csv_path:
        with Path(csv_path).open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            run_cols = [f"run{i}_f1" for i in range(len(reports[0].run_f1))]
            writer.writerow(_CSV_FIELDS + run_cols + [f"f1_{d}" for d in labels])
            for r in reports:
                writer.writerow(
                    [r.nm, r.sm, r.it, r.dt, int(r.weighted),
                     f"{r.mean_f1:.6f}", f"{r.min_f1:.6f}", f"{r.max_f1:.6f}",
                     f"{r.mpe:.4f}", f"{r.binary_f1:.6f}"]
                    + [f"{v:.6f}" for v in r.run_f1]
                    + [f"{r.per_distortion_f1[d]:.6f}" for d in labels]
                )
    if json_path:
        best = {}
        for weighted in (False, True):
            subset = [r for r in reports if r.weighted == weighted]
            if subset:
                best["weighted" if weighted else "unweighted"] = asdict(subset[0])
        payload = {"cells": [asdict(r) for r in reports], "best": best}
        Path(json_path).write_text(json.dumps(payload, indent=2), encoding="utf-8")


def parse_report_csv(csv_path) -> list[dict]:
    """Read back an emit_report CSV (used by tests and tooling)."""
    with Path(csv_path).open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
