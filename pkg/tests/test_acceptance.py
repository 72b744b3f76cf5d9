"""Acceptance suite: one test per system-level guarantee.

Each test states its tolerance or runtime budget inline and is independent
of the unit suites; oracles here are re-coded from the definitions, not
imported from the implementation under test.
"""

import filecmp
import itertools
import json
import math
import random
import time
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np
import pytest
from scipy import special

from declinewatch.centrality import PageRankConfig, pagerank, rank_scores
from declinewatch.cli import run
from declinewatch.detector import (
    IN_DECLINE,
    NOT_IN_DECLINE,
    DetectorConfig,
    classify,
    detection_latency,
    earliest_detection,
    fit_trend,
)
from declinewatch.evaluation import (
    BaselineLabel,
    confusion_metrics,
    early_detection_report,
    ndcg,
    roc_auc,
    spearman,
)
from declinewatch.graph import (
    EventCursor,
    GraphBuilder,
    advance_to_month,
    rebuild_from_scratch,
)
from declinewatch.ingest import (
    ADD,
    REMOVE,
    DependencyChangeEvent,
    order_and_filter_releases,
    parse_registry_doc,
)
from declinewatch.months import Month, month_range
from declinewatch.semver import Version
from declinewatch.series import CentralitySeries, SeriesPoint
from declinewatch.service import ServiceRuntime
from declinewatch.store import SeriesStore
from declinewatch.synth import planted_store, scale_fixture, synthetic_feed


def test_acceptance_01_confusion_arithmetic():
    """tp=1969 fp=498 fn=290 tn=1700 must give P=0.80 R=0.87 F1=0.83 (+-0.005)."""
    labels, predictions = [], {}
    month = Month(2019, 4)
    for kind, n, truth, predicted in (
        ("tp", 1969, IN_DECLINE, IN_DECLINE),
        ("fp", 498, NOT_IN_DECLINE, IN_DECLINE),
        ("fn", 290, IN_DECLINE, NOT_IN_DECLINE),
        ("tn", 1700, NOT_IN_DECLINE, NOT_IN_DECLINE),
    ):
        for i in range(n):
            labels.append(BaselineLabel(f"{kind}-{i}", truth, month))
            predictions[f"{kind}-{i}"] = predicted
    report = confusion_metrics(labels, predictions)
    assert report.precision == pytest.approx(0.80, abs=0.005)
    assert report.recall == pytest.approx(0.87, abs=0.005)
    assert report.f1 == pytest.approx(0.83, abs=0.005)


def _dense_pagerank(n, edges, damping=0.85, iterations=500):
    """Dense power iteration, written independently of the sparse pipeline."""
    out_degree = [0] * n
    for src, _ in edges:
        out_degree[src] += 1
    transition = np.zeros((n, n))
    for src, dst in edges:
        transition[dst, src] = 1.0 / out_degree[src]
    vector = np.full(n, 1.0 / n)
    for _ in range(iterations):
        dangling = sum(vector[i] for i in range(n) if out_degree[i] == 0)
        vector = (1.0 - damping) / n + damping * (transition @ vector + dangling / n)
    return vector


def test_acceptance_02_pagerank_matches_dense_oracle():
    """100 random graphs (<=50 nodes): sparse vs dense oracle within 1e-8 L1,
    identical induced rankings; whole check under 5 seconds."""
    rng = random.Random(2024)
    started = time.monotonic()
    for _ in range(100):
        n = rng.randrange(2, 51)
        names = [f"n{i:02d}" for i in range(n)]
        edges = set()
        for _ in range(rng.randrange(0, 3 * n)):
            src, dst = rng.randrange(n), rng.randrange(n)
            if src != dst:
                edges.add((src, dst))
        edges = sorted(edges)
        builder = GraphBuilder()
        when = datetime(2020, 1, 15, tzinfo=timezone.utc)
        for name in names:
            builder.intern(name)
        for src, dst in edges:
            builder.apply_event(DependencyChangeEvent(when, names[src], names[dst], ADD))
        result = pagerank(builder.snapshot(Month(2020, 1)))
        oracle = _dense_pagerank(n, edges)
        l1 = sum(abs(result.scores[names[i]] - oracle[i]) for i in range(n))
        assert l1 < 1e-8
        oracle_scores = {names[i]: float(oracle[i]) for i in range(n)}
        assert rank_scores(result.scores) == rank_scores(oracle_scores)
    assert time.monotonic() - started < 5.0


def _random_event_log(rng, n_events, n_months, n_packages):
    start = datetime(2016, 1, 1, tzinfo=timezone.utc)
    horizon = n_months * 30 * 24 * 3600
    raw = []
    for _ in range(n_events):
        src = rng.randrange(n_packages)
        dst = rng.randrange(n_packages)
        if src == dst:
            continue
        raw.append(
            DependencyChangeEvent(
                time=start + timedelta(seconds=rng.randrange(horizon)),
                source=f"pkg-{src}",
                target=f"pkg-{dst}",
                action=rng.choice((ADD, ADD, REMOVE)),
            )
        )
    raw.sort(key=lambda e: e.sort_key)
    return raw


def test_acceptance_03_incremental_equals_from_scratch():
    """200 random event logs (<=10k events, <=24 months): every monthly
    snapshot from the incremental path is edge-identical to a full rebuild;
    whole check under 30 seconds."""
    rng = random.Random(77)
    started = time.monotonic()
    for case in range(200):
        n_events = rng.randrange(2_000, 10_001) if case % 20 == 0 else rng.randrange(20, 600)
        n_months = rng.randrange(1, 25)
        events = _random_event_log(rng, n_events, n_months, n_packages=rng.randrange(4, 60))
        if not events:
            continue
        first = Month.containing(events[0].time)
        last = Month.containing(events[-1].time)
        builder, cursor = GraphBuilder(), EventCursor()
        for month in month_range(first, last):
            incremental = advance_to_month(builder, cursor, events, month)
            scratch = rebuild_from_scratch(events, month)
            assert incremental.edge_pairs_by_name() == scratch.edge_pairs_by_name(), (
                f"case {case}, month {month}"
            )
    assert time.monotonic() - started < 30.0


def _doc(name, releases):
    """releases: list of (version, time, deps dict)."""
    return {
        "_id": name,
        "name": name,
        "versions": {v: {"dependencies": deps} for v, t, deps in releases},
        "time": {v: t for v, t, deps in releases},
    }


def test_acceptance_04_backport_filtering():
    """Timeline keeps only strictly semver-increasing releases; the worked
    case drops a 2.1.0 published after 3.6.0."""
    doc = parse_registry_doc(
        _doc(
            "demo",
            [
                ("3.5.0", "2019-01-10T00:00:00Z", {"a": "^1"}),
                ("3.6.0", "2019-03-01T00:00:00Z", {"a": "^1", "b": "^2"}),
                ("2.1.0", "2019-04-20T00:00:00Z", {}),
            ],
        )
    )
    kept = order_and_filter_releases(doc)
    assert [r.version_str for r in kept] == ["3.5.0", "3.6.0"]

    rng = random.Random(11)
    base_time = datetime(2018, 1, 1, tzinfo=timezone.utc)
    for _ in range(200):
        releases = []
        versions = set()
        for i in range(rng.randrange(1, 20)):
            version = f"{rng.randrange(0, 5)}.{rng.randrange(0, 10)}.{rng.randrange(0, 10)}"
            if version in versions:
                continue
            versions.add(version)
            stamp = base_time + timedelta(hours=i)
            releases.append((version, stamp.isoformat().replace("+00:00", "Z"), {}))
        kept = order_and_filter_releases(parse_registry_doc(_doc("demo", releases)))
        keys = [Version.parse(r.version_str).precedence_key for r in kept]
        assert keys == sorted(keys)
        assert all(a < b for a, b in zip(keys, keys[1:]))


def _oracle_ols(values):
    """Closed-form OLS + Wald p, coded from the textbook formulas with
    numpy reductions (the implementation uses compensated scalar sums)."""
    y = np.asarray(values, dtype=float)
    k = len(y)
    x = np.arange(k, dtype=float)
    sxx = ((x - x.mean()) ** 2).sum()
    slope = ((x - x.mean()) * (y - y.mean())).sum() / sxx
    intercept = y.mean() - slope * x.mean()
    residuals = y - (intercept + slope * x)
    ssr = (residuals**2).sum()
    df = k - 2
    if ssr <= 0.0 or df == 0:
        return slope, 1.0 if slope == 0.0 else 0.0
    stderr = math.sqrt(ssr / df / sxx)
    t = slope / stderr
    p = float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    return slope, p


def test_acceptance_05_detector_against_independent_oracle():
    """1000 random 6-point windows: slope and Wald p within 1e-9 of a
    re-coded closed-form oracle; steadily decreasing windows classify
    in_decline under defaults, constant and increasing windows never do."""
    rng = random.Random(55)
    for _ in range(1000):
        values = [rng.uniform(-2000, 0) for _ in range(6)]
        fit = fit_trend(values)
        slope, p = _oracle_ols(values)
        assert fit.slope == pytest.approx(slope, abs=1e-9)
        assert fit.p_value == pytest.approx(p, abs=1e-9)

    start = Month(2017, 1)
    config = DetectorConfig()  # window 6, slope threshold 0, alpha 0.001

    def status_of(values):
        points = tuple(
            SeriesPoint(month=start + i, score=0.0, rank_neg=int(v))
            for i, v in enumerate(values)
        )
        series = CentralitySeries(package="p", points=points)
        return classify(series, start + 5, config).status

    for _ in range(200):
        # steady decline: around -100/month with jitter well below the trend
        level = rng.randrange(-500, 0)
        decreasing = [level]
        for _ in range(5):
            decreasing.append(decreasing[-1] - rng.randrange(95, 106))
        assert status_of(decreasing) == IN_DECLINE

        increasing = [level]
        for _ in range(5):
            increasing.append(increasing[-1] + rng.randrange(1, 200))
        assert status_of(increasing) == NOT_IN_DECLINE

        assert status_of([level] * 6) == NOT_IN_DECLINE


def test_acceptance_06_roc_auc_pairwise_oracle():
    """ROC-AUC within 1e-12 of the O(n^2) pairwise oracle; a perfect
    separator scores 1.0 and an all-tied scorer 0.5."""
    month = Month(2019, 4)
    rng = random.Random(66)
    for _ in range(200):
        n = rng.randrange(4, 60)
        kinds = [IN_DECLINE, NOT_IN_DECLINE] + [
            rng.choice((IN_DECLINE, NOT_IN_DECLINE)) for _ in range(n - 2)
        ]
        labels = [BaselineLabel(f"p{i}", kind, month) for i, kind in enumerate(kinds)]
        scores = {
            f"p{i}": rng.choice((rng.uniform(-4, 4), float(rng.randrange(-3, 4))))
            for i in range(n)
        }
        pos = [scores[lb.package] for lb in labels if lb.label == IN_DECLINE]
        neg = [scores[lb.package] for lb in labels if lb.label != IN_DECLINE]
        oracle = sum(
            1.0 if p > q else 0.5 if p == q else 0.0
            for p, q in itertools.product(pos, neg)
        ) / (len(pos) * len(neg))
        assert roc_auc(labels, scores) == pytest.approx(oracle, abs=1e-12)

    perfect = [BaselineLabel("hit", IN_DECLINE, month), BaselineLabel("miss", NOT_IN_DECLINE, month)]
    assert roc_auc(perfect, {"hit": 1.0, "miss": 0.0}) == 1.0
    assert roc_auc(perfect, {"hit": 0.5, "miss": 0.5}) == 0.5


def test_acceptance_07_planted_declines_recovered_exactly():
    """Sliding-window analysis on planted declines: months-early recovered
    exactly, and detection latencies carry the right signs."""
    start = Month(2018, 1)
    onsets = {"early-a": 6, "early-b": 9, "late": 20, "healthy": None}
    store = planted_store(onsets, start=start, n_months=30)
    view = store.view()
    window = DetectorConfig().window_months

    # first flaggable month is onset + window - 1; months-early is exact
    reference = start + 28
    for package, onset in onsets.items():
        if onset is None:
            continue
        expected_early = 28 - (onset + window - 1)
        assert earliest_detection(view.series(package), reference) == expected_early

    labels = {
        "planted": [
            BaselineLabel(p, IN_DECLINE, reference) for p in ("early-a", "early-b", "late")
        ]
    }
    (row,) = early_detection_report(labels, view)
    assert row.labeled == 3
    assert row.classified == 3
    expected = sorted(28 - (onset + window - 1) for onset in (6, 9, 20))
    assert row.mean_months == pytest.approx(sum(expected) / 3)
    assert row.median_months == pytest.approx(expected[1])

    # signed latency: negative when flagged before the reference month,
    # positive when flagged after it, None when never flagged
    late_series = view.series("late")
    first_flag = 20 + window - 1  # index 25
    assert detection_latency(late_series, start + 28) == -(28 - first_flag)
    assert detection_latency(late_series, start + 22) == first_flag - 22
    assert detection_latency(late_series, start + first_flag) == 0
    assert detection_latency(view.series("healthy"), start + 28) is None


def test_acceptance_08_spearman_and_ndcg_oracles():
    """Spearman within 1e-9 of a re-coded fractional-rank Pearson (ties
    included); NDCG is 1.0 on identity and matches a hand-worked 3-item case."""

    def oracle_rho(x, y):
        def franks(vals):
            order = np.argsort(np.asarray(vals), kind="stable")
            ranks = np.empty(len(vals))
            i = 0
            sorted_vals = np.asarray(vals)[order]
            while i < len(vals):
                j = i
                while j + 1 < len(vals) and sorted_vals[j + 1] == sorted_vals[i]:
                    j += 1
                ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
                i = j + 1
            return ranks

        rx, ry = franks(x), franks(y)
        return float(np.corrcoef(rx, ry)[0, 1])

    rng = random.Random(88)
    checked = 0
    while checked < 150:
        n = rng.randrange(3, 50)
        x = [rng.choice((rng.uniform(-9, 9), float(rng.randrange(-2, 3)))) for _ in range(n)]
        y = [rng.choice((rng.uniform(-9, 9), float(rng.randrange(-2, 3)))) for _ in range(n)]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert spearman(x, y) == pytest.approx(oracle_rho(x, y), abs=1e-9)
        checked += 1

    assert ndcg(["a", "b", "c", "d"], ["a", "b", "c", "d"]) == 1.0
    # hand-worked: gains 2,1,0; DCG(c,b,a)=1/log2(3)+2/log2(4); IDCG=2+1/log2(3)
    expected = (1 / math.log2(3) + 1.0) / (2.0 + 1 / math.log2(3))
    assert ndcg(["c", "b", "a"], ["a", "b", "c"]) == pytest.approx(expected, abs=1e-12)


@pytest.mark.slow
def test_acceptance_09_scalability_140k_packages_1m_edges():
    """One monthly update cycle (graph delta + PageRank + ranking append +
    decline classification) over 140k packages / 1M edges in under 60 s."""
    fixture = scale_fixture(n_packages=140_000, n_edges=1_000_000)
    runtime = ServiceRuntime(SeriesStore.in_memory())
    runtime.run_update_cycle(fixture.setup_events, through=fixture.setup_through)
    assert runtime.store.months[-1] == fixture.setup_through

    started = time.monotonic()
    summary = runtime.run_update_cycle(fixture.delta_events)
    elapsed = time.monotonic() - started

    assert summary.months_advanced == 1
    assert runtime.store.months[-1] == fixture.measured_month
    state = runtime.holder.current()
    assert len(state.view.names) == fixture.n_packages
    assert len(state.statuses) == fixture.n_packages
    assert elapsed < 60.0, f"monthly cycle took {elapsed:.1f}s"


def _full_pipeline(root: Path, feed_lines, fixtures_dir: Path) -> None:
    feed = root / "feed.ndjson"
    feed.write_text("\n".join(feed_lines) + "\n", encoding="utf-8")
    events = root / "events.csv"
    assert run(["ingest", "--feed", str(feed), "--out", str(events)]) == 0
    store = root / "store"
    assert run(
        ["build", "--store", str(store), "--events", str(events),
         "--from", "2015-01", "--to", "2015-12"]
    ) == 0
    assert run(
        ["detect", "--store", str(store), "--as-of", "2015-12",
         "--out", str(root / "statuses.csv")]
    ) == 0
    assert run(["export", "--store", str(store), "--out", str(root / "export.csv")]) == 0

    eval_csv = root / "planted.csv"
    planted_store(
        {"stable-high-drop": 8, "stable-mid-drop": 20, "stable-high-keep": None},
        n_months=30,
    ).export_csv(eval_csv)
    eval_store = root / "eval-store"
    assert run(["build", "--store", str(eval_store), "--import-csv", str(eval_csv)]) == 0
    assert run(
        ["evaluate", "--store", str(eval_store),
         "--npms-s1", str(fixtures_dir / "npms_s1.csv"),
         "--npms-s2", str(fixtures_dir / "npms_s2.csv"),
         "--npms-s3", str(fixtures_dir / "npms_s3.csv"),
         "--out-dir", str(root / "reports")]
    ) == 0


def test_acceptance_10_end_to_end_determinism(tmp_path, fixtures_dir):
    """Two full pipeline runs over the same feed produce byte-identical
    stores and reports."""
    feed_lines = synthetic_feed(n_packages=25, n_months=12, seed=99)
    for name in ("run-a", "run-b"):
        (tmp_path / name).mkdir()
        _full_pipeline(tmp_path / name, feed_lines, fixtures_dir)

    files_a = sorted(
        p.relative_to(tmp_path / "run-a")
        for p in (tmp_path / "run-a").rglob("*")
        if p.is_file()
    )
    files_b = sorted(
        p.relative_to(tmp_path / "run-b")
        for p in (tmp_path / "run-b").rglob("*")
        if p.is_file()
    )
    assert files_a == files_b
    for rel in files_a:
        assert filecmp.cmp(tmp_path / "run-a" / rel, tmp_path / "run-b" / rel, shallow=False), rel
    report = json.loads((tmp_path / "run-a" / "reports" / "report.json").read_text())
    assert report["classification"]["tp"] == 1
