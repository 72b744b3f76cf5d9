"""Command-line entry points for the pipeline.

Subcommands: ingest (feed -> event log), build (event log -> store),
detect (store -> status listing), evaluate (fixtures + store -> reports),
serve (HTTP API), export (store -> CSV). Exit codes: 0 success, 1 data
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .baselines import (
    deprecated_labels,
    load_deprecated,
    load_metric_history,
    load_npms_snapshots,
    load_survey,
    survey_labels,
)
from .centrality import PageRankConfig, run_monthly_pipeline
from .detector import (
    IN_DECLINE,
    INSUFFICIENT_DATA,
    DetectorConfig,
    classify_batch,
    detection_latency,
)
from .evaluation import (
    DegenerateLabels,
    EvalReport,
    build_npms_baseline,
    confusion_metrics,
    early_detection_report,
    roc_auc,
)
from .ingest import events_from_feed, read_event_log, write_event_log
from .months import Month
from .reports import (
    classification_table,
    early_detection_dict,
    early_detection_table,
    eval_report_dict,
    metric_latency_report,
    metric_latency_table,
    write_json,
)
from .store import SeriesStore, StoreError

logger = logging.getLogger(__name__)


def _month_arg(text: str) -> Month:
    try:
        return Month.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _metric_history_arg(text: str) -> tuple:
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected METRIC=PATH")
    metric, _, path = text.partition("=")
    return metric, path


def _add_detector_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=6, help="trend window in months")
    parser.add_argument("--alpha", type=float, default=0.001, help="Wald significance level")
    parser.add_argument("--slope-threshold", type=float, default=0.0, help="decline slope cutoff")


def _detector_config(args: argparse.Namespace) -> DetectorConfig:
    return DetectorConfig(
        window_months=args.window, slope_threshold=args.slope_threshold, alpha=args.alpha
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="declinewatch")
    parser.add_argument("-v", "--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    p_ingest = commands.add_parser("ingest", help="registry feed -> dependency event log")
    p_ingest.add_argument("--feed", required=True, help="file of registry documents, one per line")
    p_ingest.add_argument("--out", required=True, help="event log CSV to write")
    p_ingest.add_argument(
        "--dependency-fields",
        default="dependencies",
        help="comma-separated manifest fields to read dependencies from",
    )
    p_ingest.add_argument("--strict", action="store_true", help="fail on malformed documents")

    p_build = commands.add_parser("build", help="event log -> monthly ranking store")
    p_build.add_argument("--store", required=True, help="store directory")
    p_build.add_argument("--events", help="event log CSV")
    p_build.add_argument("--from", dest="from_month", type=_month_arg, help="first month YYYY-MM")
    p_build.add_argument("--to", dest="to_month", type=_month_arg, help="last month YYYY-MM")
    p_build.add_argument("--damping", type=float, default=0.85)
    p_build.add_argument("--tolerance", type=float, default=1e-9)
    p_build.add_argument("--max-iterations", type=int, default=200)
    p_build.add_argument("--import-csv", help="rebuild the store from a CSV export instead")

    p_detect = commands.add_parser("detect", help="store -> per-package decline statuses")
    p_detect.add_argument("--store", required=True)
    p_detect.add_argument("--as-of", type=_month_arg, required=True)
    p_detect.add_argument("--out", help="write CSV here instead of stdout")
    _add_detector_flags(p_detect)

    p_eval = commands.add_parser("evaluate", help="fixtures + store -> evaluation reports")
    p_eval.add_argument("--store", required=True)
    p_eval.add_argument("--npms-s1", help="npms snapshot CSV at S1")
    p_eval.add_argument("--npms-s2", help="npms snapshot CSV at S2")
    p_eval.add_argument("--npms-s3", help="npms snapshot CSV at S3")
    p_eval.add_argument("--deprecated", help="deprecation corpus CSV")
    p_eval.add_argument("--survey", help="survey summary CSV")
    p_eval.add_argument(
        "--metric-history",
        type=_metric_history_arg,
        action="append",
        default=[],
        metavar="METRIC=PATH",
        help="monthly metric history CSV, repeatable",
    )
    p_eval.add_argument("--as-of", type=_month_arg, help="classification month (default: S2)")
    p_eval.add_argument("--out-dir", help="write report.txt / report.json here")
    _add_detector_flags(p_eval)

    p_serve = commands.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--store", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8184)
    p_serve.add_argument("--events", help="event log to apply before serving")
    _add_detector_flags(p_serve)

    p_export = commands.add_parser("export", help="store -> CSV")
    p_export.add_argument("--store", required=True)
    p_export.add_argument("--out", required=True)

    return parser


def _cmd_ingest(args: argparse.Namespace) -> int:
    fields = tuple(f for f in args.dependency_fields.split(",") if f)
    with open(args.feed, "r", encoding="utf-8") as fh:
        events = events_from_feed(fh, dependency_fields=fields, strict=args.strict)
    write_event_log(events, args.out)
    print(f"wrote {len(events)} events to {args.out}")
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    if args.import_csv:
        store = SeriesStore.import_csv(args.import_csv, args.store)
        print(f"imported {len(store.months)} months, {len(store.names)} packages")
        return 0
    if not args.events or args.from_month is None or args.to_month is None:
        print("build needs --events, --from and --to (or --import-csv)", file=sys.stderr)
        return 2
    events = read_event_log(args.events)
    store = SeriesStore(args.store)
    config = PageRankConfig(
        damping=args.damping, tolerance=args.tolerance, max_iterations=args.max_iterations
    )
    progress = run_monthly_pipeline(events, args.from_month, args.to_month, config, store=store)
    print(
        f"built {len(progress.months_completed)} months"
        f" ({progress.skipped_existing} already present),"
        f" {progress.packages_ranked} package rankings"
    )
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    view = SeriesStore.open(args.store).view()
    config = _detector_config(args)
    windows = view.windows_ending(args.as_of, config.window_months)
    statuses, slopes, p_values = classify_batch(windows, config)
    lines = ["package,status,slope,p_value"]
    for row in sorted(range(len(view.names)), key=lambda i: view.names[i]):
        if statuses[row] == INSUFFICIENT_DATA:
            lines.append(f"{view.names[row]},{statuses[row]},,")
        else:
            lines.append(
                f"{view.names[row]},{statuses[row]},"
                f"{float(slopes[row])!r},{float(p_values[row])!r}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _predictions_at(view, as_of: Month, config: DetectorConfig):
    windows = view.windows_ending(as_of, config.window_months)
    statuses, slopes, _ = classify_batch(windows, config)
    predictions = {}
    scores = {}
    for row, name in enumerate(view.names):
        predictions[name] = str(statuses[row])
        scores[name] = -float(slopes[row]) if statuses[row] != INSUFFICIENT_DATA else float("-inf")
    return predictions, scores


def _cmd_evaluate(args: argparse.Namespace) -> int:
    view = SeriesStore.open(args.store).view()
    config = _detector_config(args)
    sections: List[str] = []
    payload = {}

    labels_by_dataset = {}
    npms_labels = None
    if args.npms_s1 or args.npms_s2 or args.npms_s3:
        if not (args.npms_s1 and args.npms_s2 and args.npms_s3):
            print("evaluate needs all of --npms-s1/--npms-s2/--npms-s3", file=sys.stderr)
            return 2
        snaps = load_npms_snapshots(args.npms_s1, args.npms_s2, args.npms_s3)
        npms_labels = build_npms_baseline(snaps)
        labels_by_dataset["npms"] = npms_labels
        as_of = args.as_of or snaps.s2_month
        predictions, scores = _predictions_at(view, as_of, config)
        missing = [l.package for l in npms_labels if l.package not in predictions]
        for name in missing:
            predictions[name] = INSUFFICIENT_DATA
            scores[name] = float("-inf")
        report = confusion_metrics(npms_labels, predictions)
        try:
            report = EvalReport(
                tp=report.tp, fp=report.fp, fn=report.fn, tn=report.tn,
                precision=report.precision, recall=report.recall, f1=report.f1,
                roc_auc=roc_auc(npms_labels, scores),
                undefined_metrics=report.undefined_metrics,
            )
        except DegenerateLabels:
            logger.warning("single-class labels, skipping ROC-AUC")
        sections.append(classification_table(report))
        payload["classification"] = eval_report_dict(report)

    if args.deprecated:
        labels_by_dataset["deprecated"] = deprecated_labels(load_deprecated(args.deprecated))
    if args.survey:
        labels_by_dataset["survey"] = survey_labels(load_survey(args.survey))

    if labels_by_dataset:
        rows = early_detection_report(labels_by_dataset, view, config)
        sections.append(early_detection_table(rows))
        payload["early_detection"] = early_detection_dict(rows)

    if args.metric_history:
        centrality_latencies = {}
        for labels in labels_by_dataset.values():
            for label in labels:
                if label.label != IN_DECLINE or not view.has_package(label.package):
                    continue
                centrality_latencies[label.package] = detection_latency(
                    view.series(label.package), label.reference_month, config
                )
        metric_latencies = {}
        references = {
            label.package: label.reference_month
            for labels in labels_by_dataset.values()
            for label in labels
        }
        for metric, path in args.metric_history:
            histories = load_metric_history(path, metric)
            metric_latencies[metric] = {
                package: detection_latency(series, references[package], config)
                for package, series in sorted(histories.items())
                if package in references
            }
        rows = metric_latency_report(metric_latencies, centrality_latencies)
        sections.append(metric_latency_table(rows))
        payload["metric_latency"] = [
            {
                "metric": r.metric,
                "compared": r.compared,
                "before_or_with_centrality": r.before_or_with_centrality,
                "after_centrality": r.after_centrality,
                "never_detected": r.never_detected,
            }
            for r in rows
        ]

    if not sections:
        print("evaluate needs at least one fixture (npms, deprecated, survey)", file=sys.stderr)
        return 2

    text = "\n".join(sections)
    sys.stdout.write(text)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "report.txt", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        write_json(out_dir / "report.json", payload)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServiceRuntime, serve

    store = SeriesStore.open(args.store)
    runtime = ServiceRuntime(store, detector_config=_detector_config(args))
    if args.events:
        summary = runtime.run_update_cycle(read_event_log(args.events))
        print(f"applied update: {summary.months_advanced} months advanced")
    serve(runtime.holder, host=args.host, port=args.port)
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    store = SeriesStore.open(args.store)
    rows = store.export_csv(args.out)
    print(f"exported {rows} rows to {args.out}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "build": _cmd_build,
    "detect": _cmd_detect,
    "evaluate": _cmd_evaluate,
    "serve": _cmd_serve,
    "export": _cmd_export,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, KeyError, StoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
