"""Append-only monthly ranking store with a binary/CSV dual format.

Layout on disk::

    store/
      meta.json        {"format": 1, "months": ["2010-01", ...]}
      names.txt        one package name per line; line number = interned id
      months/<YYYY-MM>.npy   records (id: u4, rank_neg: i4, score: f4), sorted by id

New names are interned per appended month in lexicographic order, which
makes the id table a pure function of the store's contents: re-importing
the CSV export reproduces the binary store byte for byte.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import IO, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from .months import Month
from .series import CentralitySeries, SeriesPoint

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
RECORD_DTYPE = np.dtype([("id", "<u4"), ("rank_neg", "<i4"), ("score", "<f4")])

CSV_HEADER = "package,month,score,rank_neg"


class StoreError(RuntimeError):
    pass


class SeriesStore:
    """One writer, many readers; readers work on immutable StoreView copies."""

    def __init__(self, path: Optional[Union[str, Path]] = None) -> None:
        self.path = Path(path) if path is not None else None
        self.names: List[str] = []
        self._ids: Dict[str, int] = {}
        self.months: List[Month] = []
        self._columns: Dict[Month, np.ndarray] = {}
        if self.path is not None and (self.path / "meta.json").exists():
            self._load()

    @classmethod
    def in_memory(cls) -> "SeriesStore":
        return cls(None)

    @classmethod
    def open(cls, path: Union[str, Path]) -> "SeriesStore":
        store = cls(path)
        if not store.months and not (Path(path) / "meta.json").exists():
            raise StoreError(f"no store at {path}")
        return store

    def _load(self) -> None:
        assert self.path is not None
        with open(self.path / "meta.json", "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta.get("format") != FORMAT_VERSION:
            raise StoreError(f"unsupported store format: {meta.get('format')!r}")
        self.months = [Month.parse(m) for m in meta["months"]]
        names_file = self.path / "names.txt"
        if names_file.exists():
            with open(names_file, "r", encoding="utf-8") as fh:
                self.names = [line.rstrip("\n") for line in fh]
        self._ids = {name: i for i, name in enumerate(self.names)}

    def column(self, month: Month) -> np.ndarray:
        if month not in self._columns:
            if self.path is None:
                raise StoreError(f"no data for month {month}")
            data = np.load(self.path / "months" / f"{month}.npy")
            if data.dtype != RECORD_DTYPE:
                raise StoreError(f"month {month}: unexpected record dtype {data.dtype}")
            self._columns[month] = data
        return self._columns[month]

    def append_month(
        self, month: Month, scores: Mapping[str, float], ranks: Mapping[str, int]
    ) -> None:
        if set(scores) != set(ranks):
            raise ValueError("scores and ranks must cover the same packages")
        if self.months and month <= self.months[-1]:
            raise ValueError(f"month {month} not after last stored month {self.months[-1]}")

        for name in sorted(set(scores) - self._ids.keys()):
            self._ids[name] = len(self.names)
            self.names.append(name)

        records = np.empty(len(scores), dtype=RECORD_DTYPE)
        ordered = sorted(self._ids[name] for name in scores)
        for row, node_id in enumerate(ordered):
            name = self.names[node_id]
            records[row] = (node_id, ranks[name], np.float32(scores[name]))
        self._columns[month] = records
        self.months.append(month)
        if self.path is not None:
            self._persist_month(month, records)

    def _persist_month(self, month: Month, records: np.ndarray) -> None:
        assert self.path is not None
        months_dir = self.path / "months"
        months_dir.mkdir(parents=True, exist_ok=True)
        np.save(months_dir / f"{month}.npy", records)
        with open(self.path / "names.txt", "w", encoding="utf-8", newline="\n") as fh:
            for name in self.names:
                fh.write(name + "\n")
        meta = {"format": FORMAT_VERSION, "months": [str(m) for m in self.months]}
        with open(self.path / "meta.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(meta, fh, sort_keys=True, indent=2)
            fh.write("\n")

    def view(self) -> "StoreView":
        return StoreView(self)

    def export_csv(self, dest: Union[str, Path, IO[str]]) -> int:
        """Write (package, month, score, rank_neg) rows sorted by package, then month."""
        view = self.view()

        def _write(fh: IO[str]) -> int:
            fh.write(CSV_HEADER + "\n")
            count = 0
            for name in sorted(view.names):
                row = view.ids[name]
                for col, month in enumerate(view.months):
                    rank = int(view.ranks[row, col])
                    if rank == 0:
                        continue
                    score = float(view.scores[row, col])
                    fh.write(f"{name},{month},{score!r},{rank}\n")
                    count += 1
            return count

        if isinstance(dest, (str, Path)):
            with open(dest, "w", encoding="utf-8", newline="\n") as fh:
                return _write(fh)
        return _write(dest)

    @classmethod
    def import_csv(
        cls, src: Union[str, Path, IO[str]], path: Optional[Union[str, Path]] = None
    ) -> "SeriesStore":
        """Rebuild a store from its CSV export (lossless round trip)."""

        def _read(fh: IO[str]):
            by_month: Dict[Month, Dict[str, Tuple[float, int]]] = {}
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line == CSV_HEADER:
                    continue
                parts = line.split(",")
                if len(parts) != 4:
                    raise StoreError(f"csv line {lineno}: expected 4 fields")
                name, month_s, score_s, rank_s = parts
                by_month.setdefault(Month.parse(month_s), {})[name] = (
                    float(score_s),
                    int(rank_s),
                )
            return by_month

        if isinstance(src, (str, Path)):
            with open(src, "r", encoding="utf-8") as fh:
                by_month = _read(fh)
        else:
            by_month = _read(src)

        store = cls(path)
        for month in sorted(by_month):
            entries = by_month[month]
            scores = {name: sv[0] for name, sv in entries.items()}
            ranks = {name: sv[1] for name, sv in entries.items()}
            store.append_month(month, scores, ranks)
        return store


class StoreView:
    """Immutable dense view over a store: one row per package, one column per month.

    Absent (package, month) cells hold rank 0 / score NaN; real ranks are
    always negative, so 0 is a safe sentinel.
    """

    def __init__(self, store: SeriesStore) -> None:
        self.months: List[Month] = list(store.months)
        self.names: List[str] = list(store.names)
        self.ids: Dict[str, int] = {name: i for i, name in enumerate(self.names)}
        n, m = len(self.names), len(self.months)
        self.ranks = np.zeros((n, m), dtype=np.int32)
        self.scores = np.full((n, m), np.nan, dtype=np.float32)
        for col, month in enumerate(self.months):
            records = store.column(month)
            self.ranks[records["id"], col] = records["rank_neg"]
            self.scores[records["id"], col] = records["score"]
        self._month_cols = {month: col for col, month in enumerate(self.months)}

    @property
    def last_month(self) -> Optional[Month]:
        return self.months[-1] if self.months else None

    def has_package(self, name: str) -> bool:
        return name in self.ids

    def series(self, name: str) -> CentralitySeries:
        if name not in self.ids:
            raise KeyError(name)
        row = self.ids[name]
        points = []
        for col, month in enumerate(self.months):
            rank = int(self.ranks[row, col])
            if rank != 0:
                points.append(SeriesPoint(month=month, score=float(self.scores[row, col]), rank_neg=rank))
        return CentralitySeries(package=name, points=tuple(points))

    def windows_ending(self, end: Month, length: int) -> np.ndarray:
        """(n_names, length) matrix of rank_neg values over the calendar
        months ending at `end`; missing cells are NaN."""
        out = np.full((len(self.names), length), np.nan, dtype=np.float64)
        for i, offset in enumerate(range(length - 1, -1, -1)):
            col = self._month_cols.get(end - offset)
            if col is None:
                continue
            ranks = self.ranks[:, col].astype(np.float64)
            ranks[ranks == 0] = np.nan
            out[:, i] = ranks
        return out

    def rank_window(self, name: str, end: Month, length: int) -> Optional[np.ndarray]:
        """Negated ranks for the `length` months ending at `end`, or None if
        any month is missing from the package's series."""
        if name not in self.ids:
            return None
        cols = []
        for offset in range(length - 1, -1, -1):
            month = end - offset
            if month not in self._month_cols:
                return None
            cols.append(self._month_cols[month])
        window = self.ranks[self.ids[name], cols]
        if np.any(window == 0):
            return None
        return window.astype(np.float64)
