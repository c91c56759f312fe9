"""Command-line interface: train, recognize, highlight, evaluate, grid, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import evaluation
from .convkernel import ConvolutionRecognizer
from .corpus import DISTORTION_LABELS, load_dataset, read_column_map
from .learning import SELECTION_METRICS, LearningConfig, build_model, collect_stats
from .model import diff_models, load_model, save_model
from .recognizer import NgramIndex, RecognitionConfig, recognize, result_to_dict
from .textprep import tokenize

_COLORS = ["31", "32", "33", "34", "35", "36", "91", "92", "93", "94"]


def _model_dir(args) -> str:
    d = args.model or os.environ.get("DISTORTREC_MODEL")
    if not d:
        raise SystemExit("no model directory: pass --model or set DISTORTREC_MODEL")
    return d


def _read_texts(args):
    if args.input and args.input != "-":
        with open(args.input, encoding="utf-8") as f:
            lines = f.read().splitlines()
    else:
        lines = sys.stdin.read().splitlines()
    return [line for line in lines if line.strip()]


def _rec_cfg(args) -> RecognitionConfig:
    return RecognitionConfig(dt=args.dt, ls=not getattr(args, "no_ls", False),
                             weighted=not args.unweighted)


def _engine(model, backend):
    return ConvolutionRecognizer(model) if backend == "kernel" else NgramIndex(model)


def _recognize_one(engine, text, cfg):
    tt = tokenize(text)
    if isinstance(engine, ConvolutionRecognizer):
        return tt, engine.recognize(tt, cfg)
    return tt, recognize(tt, engine, cfg)


def cmd_train(args) -> int:
    records = load_dataset(args.dataset, read_column_map(args.column_map))
    cfg = LearningConfig(nm=args.nm, sm=args.sm, it=args.it)
    stats = collect_stats(records, cfg.nm, n_distortions=len(DISTORTION_LABELS))
    model = build_model(stats, cfg, labels=DISTORTION_LABELS)
    save_model(model, args.out)
    total = sum(len(d.entries) for d in model.dictionaries)
    print(f"trained on {len(records)} texts; {total} dictionary entries "
          f"(NM={cfg.nm} SM={cfg.sm} IT={cfg.it}) -> {args.out}")
    return 0


def cmd_stats(args) -> int:
    records = load_dataset(args.dataset, read_column_map(args.column_map))
    stats = collect_stats(records, args.nm, n_distortions=len(DISTORTION_LABELS))
    print(f"texts: {len(records)}")
    print(f"distinct N-grams (1..{args.nm}): {len(stats.G)}")
    for d in DISTORTION_LABELS:
        print(f"{d}\ttexts={stats.D_freq[d]}\tngram_occurrences={stats.G_total[d]}\t"
              f"candidates={len(stats.candidates.get(d, ()))}")
    return 0


def cmd_recognize(args) -> int:
    model = load_model(_model_dir(args))
    cfg = _rec_cfg(args)
    engine = _engine(model, args.backend)
    for text in _read_texts(args):
        _, result = _recognize_one(engine, text, cfg)
        if args.json:
            print(json.dumps(result_to_dict(result), sort_keys=True))
        else:
            detected = sorted(d for d, on in result.decisions.items() if on)
            scores = " ".join(f"{d}={result.scores[d]:.3f}" for d in sorted(result.scores))
            print(f"{','.join(detected) or '-'}\t{scores}")
    return 0


def cmd_highlight(args) -> int:
    model = load_model(_model_dir(args))
    cfg = _rec_cfg(args)
    engine = _engine(model, args.backend)
    color = {d: _COLORS[i % len(_COLORS)] for i, d in enumerate(sorted(model.labels))}
    for text in _read_texts(args):
        _, result = _recognize_one(engine, text, cfg)
        spans = []
        for m in result.matches:
            if result.decisions.get(m.distortion):
                spans.append((m.char_start, m.char_end, m.distortion))
        spans.sort(key=lambda s: (s[0], s[2]))
        out, pos = [], 0
        for start, end, d in spans:
            if start < pos:
                continue  # stacked span already rendered by an earlier label
            out.append(text[pos:start])
            seg = text[start:end]
            if args.html:
                out.append(f'<mark data-distortion="{d}">{seg}</mark>')
            else:
                out.append(f"\x1b[{color[d]}m{seg}\x1b[0m")
            pos = end
        out.append(text[pos:])
        print("".join(out))
        detected = sorted(d for d, on in result.decisions.items() if on)
        if detected and not args.html:
            legend = "  ".join(
                f"\x1b[{color[d]}m{d}\x1b[0m={result.scores[d]:.3f}" for d in detected
            )
            print(f"  {legend}")
    return 0


def cmd_evaluate(args) -> int:
    records = load_dataset(args.dataset, read_column_map(args.column_map))
    report = evaluation.run_protocol(
        records,
        LearningConfig(nm=args.nm, sm=args.sm, it=args.it),
        _rec_cfg(args),
        backend=args.backend,
    )
    print(f"mean macro-F1 {report.mean_f1:.4f} (min {report.min_f1:.4f}, "
          f"max {report.max_f1:.4f}, MPE {report.mpe:.1f}%)")
    for d in DISTORTION_LABELS:
        print(f"  {d}\tF1={report.per_distortion_f1[d]:.4f}")
    if args.out_json:
        evaluation.emit_report([report], json_path=args.out_json)
    return 0


def cmd_grid(args) -> int:
    records = load_dataset(args.dataset, read_column_map(args.column_map))
    reports = evaluation.grid_search(
        records,
        nm_values=args.nm or evaluation.NM_VALUES,
        sm_values=args.sm or SELECTION_METRICS,
        it_values=args.it or evaluation.IT_VALUES,
        dt_values=args.dt or evaluation.DT_VALUES,
        backend=args.backend,
        n_jobs=args.jobs,
    )
    evaluation.emit_report(reports, csv_path=args.out_csv, json_path=args.out_json)
    best = reports[0]
    print(f"{len(reports)} cells; best: NM={best.nm} SM={best.sm} IT={best.it} "
          f"DT={best.dt} weighted={best.weighted} mean_f1={best.mean_f1:.4f}")
    return 0


def cmd_diff(args) -> int:
    a, b = load_model(args.model_a), load_model(args.model_b)
    d = diff_models(a, b)
    for label in sorted(a.labels):
        for g, w in sorted(d.added[label].items()):
            print(f"+ {label}\t{' '.join(g)}\t{w:.6f}")
        for g, w in sorted(d.removed[label].items()):
            print(f"- {label}\t{' '.join(g)}\t{w:.6f}")
        for g, (wa, wb) in sorted(d.reweighted[label].items()):
            print(f"~ {label}\t{' '.join(g)}\t{wa:.6f} -> {wb:.6f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(model_dir=_model_dir(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_model_arg(p):
    p.add_argument("--model", help="model directory (or env DISTORTREC_MODEL)")


def _add_rec_args(p):
    p.add_argument("--dt", type=int, default=50, help="detection threshold percent")
    p.add_argument("--unweighted", action="store_true")
    p.add_argument("--no-ls", dest="no_ls", action="store_true",
                   help="disable logarithmic score scaling")
    p.add_argument("--backend", choices=["naive", "kernel"], default="naive")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distortrec",
                                     description="Interpretable N-gram cognitive-distortion recognition")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn a weighted dictionary model")
    p.add_argument("--dataset", required=True)
    p.add_argument("--column-map", required=True)
    p.add_argument("--nm", type=int, default=2)
    p.add_argument("--sm", choices=SELECTION_METRICS, default="FCR")
    p.add_argument("--it", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("stats", help="print corpus statistics")
    p.add_argument("--dataset", required=True)
    p.add_argument("--column-map", required=True)
    p.add_argument("--nm", type=int, default=2)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("recognize", help="score texts from a file or stdin")
    _add_model_arg(p)
    _add_rec_args(p)
    p.add_argument("--input", default="-", help="input file, one text per line (- = stdin)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("highlight", help="render matched spans")
    _add_model_arg(p)
    _add_rec_args(p)
    p.add_argument("--input", default="-")
    p.add_argument("--html", action="store_true")
    p.set_defaults(func=cmd_highlight)

    p = sub.add_parser("evaluate", help="3-split protocol at one configuration")
    p.add_argument("--dataset", required=True)
    p.add_argument("--column-map", required=True)
    p.add_argument("--nm", type=int, default=2)
    p.add_argument("--sm", choices=SELECTION_METRICS, default="FCR")
    p.add_argument("--it", type=int, default=0)
    _add_rec_args(p)
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grid", help="hyper-parameter grid sweep")
    p.add_argument("--dataset", required=True)
    p.add_argument("--column-map", required=True)
    p.add_argument("--nm", type=int, nargs="*")
    p.add_argument("--sm", nargs="*", choices=SELECTION_METRICS)
    p.add_argument("--it", type=int, nargs="*")
    p.add_argument("--dt", type=int, nargs="*")
    p.add_argument("--backend", choices=["naive", "kernel"], default="kernel")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("diff", help="compare two model directories")
    p.add_argument("model_a")
    p.add_argument("model_b")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("serve", help="run the local audit HTTP API")
    _add_model_arg(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8710)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
