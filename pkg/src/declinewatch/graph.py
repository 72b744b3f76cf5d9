"""Incrementally maintained ecosystem dependency graph with monthly snapshots.

Nodes are packages (version-insensitive); a directed edge points from the
dependent to the dependency and always reflects the latest non-backport
release of the dependent. Node identifiers are interned to compact
integers in first-seen order; the name table is stable across a run so
snapshots and rankings are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from .ingest import ADD, REMOVE, DependencyChangeEvent
from .months import Month

logger = logging.getLogger(__name__)


class EventsOutOfOrder(ValueError):
    """The event log violates its global (time, source, target, action) sort."""


@dataclass(frozen=True)
class GraphSnapshot:
    """Immutable dependency graph as of the end of one month.

    ``edges`` maps a dependent's id to its dependency ids, ``reverse`` a
    dependency's id to its dependent ids; the two are exact transposes.
    """

    month: Month
    names: Tuple[str, ...]
    edges: Mapping[int, FrozenSet[int]]
    reverse: Mapping[int, FrozenSet[int]]

    @property
    def node_count(self) -> int:
        return len(self.names)

    @property
    def edge_count(self) -> int:
        return sum(len(v) for v in self.edges.values())

    def id_of(self, name: str) -> Optional[int]:
        cache = self.__dict__.get("_id_cache")
        if cache is None:
            cache = {n: i for i, n in enumerate(self.names)}
            object.__setattr__(self, "_id_cache", cache)
        return cache.get(name)

    def iter_nodes(self) -> List[str]:
        """Node names in deterministic (sorted) order."""
        return sorted(self.names)

    def out_degree(self, node_id: int) -> int:
        return len(self.edges.get(node_id, ()))

    def dependent_count(self, node_id: int) -> int:
        return len(self.reverse.get(node_id, ()))

    def edge_pairs(self) -> List[Tuple[int, int]]:
        """Sorted (dependent_id, dependency_id) pairs."""
        pairs = []
        for src, dsts in self.edges.items():
            for dst in dsts:
                pairs.append((src, dst))
        pairs.sort()
        return pairs

    def edge_pairs_by_name(self) -> Set[Tuple[str, str]]:
        return {(self.names[s], self.names[t]) for s, t in self.edge_pairs()}


@dataclass
class EventCursor:
    """Replay position in the global event log."""

    position: int = 0
    current_month: Optional[Month] = None


class GraphBuilder:
    """Single-writer mutable graph; snapshots are immutable copies."""

    def __init__(self) -> None:
        self.names: List[str] = []
        self._ids: Dict[str, int] = {}
        self._fwd: Dict[int, Set[int]] = {}
        self._rev: Dict[int, Set[int]] = {}
        self.ignored_removes = 0

    def intern(self, name: str) -> int:
        node_id = self._ids.get(name)
        if node_id is None:
            node_id = len(self.names)
            self._ids[name] = node_id
            self.names.append(name)
        return node_id

    def apply_event(self, event: DependencyChangeEvent) -> None:
        """Apply one add/remove; both are idempotent on repeats."""
        if event.action == ADD:
            src = self.intern(event.source)
            dst = self.intern(event.target)
            self._fwd.setdefault(src, set()).add(dst)
            self._rev.setdefault(dst, set()).add(src)
        else:
            src = self._ids.get(event.source)
            dst = self._ids.get(event.target)
            if src is None or dst is None or dst not in self._fwd.get(src, ()):
                # Corrupt feeds happen; one bad package must not halt the run.
                self.ignored_removes += 1
                logger.debug("remove of missing edge %s->%s ignored", event.source, event.target)
                return
            self._fwd[src].discard(dst)
            self._rev[dst].discard(src)

    def snapshot(self, month: Month) -> GraphSnapshot:
        edges = {src: frozenset(dsts) for src, dsts in self._fwd.items() if dsts}
        reverse = {dst: frozenset(srcs) for dst, srcs in self._rev.items() if srcs}
        return GraphSnapshot(month=month, names=tuple(self.names), edges=edges, reverse=reverse)


def apply_event(builder: GraphBuilder, event: DependencyChangeEvent) -> None:
    builder.apply_event(event)


def advance_to_month(
    builder: GraphBuilder,
    cursor: EventCursor,
    events: Sequence[DependencyChangeEvent],
    month: Month,
) -> GraphSnapshot:
    """Apply all events before the next month boundary; snapshot the result.

    An event stamped exactly on a month boundary belongs to the later
    month. Raises EventsOutOfOrder if the log is not globally sorted.
    """
    if cursor.current_month is not None and month < cursor.current_month:
        raise ValueError(f"cannot advance backwards: {month} < {cursor.current_month}")
    boundary = month.end_exclusive
    prev_key = events[cursor.position - 1].sort_key if cursor.position > 0 else None
    while cursor.position < len(events):
        event = events[cursor.position]
        key = event.sort_key
        if prev_key is not None and key < prev_key:
            raise EventsOutOfOrder(f"event at position {cursor.position} breaks the log sort")
        if event.time >= boundary:
            break
        builder.apply_event(event)
        prev_key = key
        cursor.position += 1
    cursor.current_month = month
    return builder.snapshot(month)


def rebuild_from_scratch(
    events: Sequence[DependencyChangeEvent], month: Month
) -> GraphSnapshot:
    """Replay the whole log into a fresh graph (testing oracle; the
    incremental path exists because monthly from-scratch builds do not
    scale)."""
    builder = GraphBuilder()
    cursor = EventCursor()
    return advance_to_month(builder, cursor, events, month)


def save_snapshot(snapshot: GraphSnapshot, directory: Path) -> None:
    """Persist a snapshot as a sorted interned-id edge list plus the name table."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names_path = directory / "names.txt"
    with open(names_path, "w", encoding="utf-8", newline="\n") as fh:
        for name in snapshot.names:
            fh.write(name + "\n")
    edges_path = directory / f"edges-{snapshot.month}.csv"
    with open(edges_path, "w", encoding="utf-8", newline="\n") as fh:
        for src, dst in snapshot.edge_pairs():
            fh.write(f"{src},{dst}\n")


def load_snapshot(directory: Path, month: Month) -> GraphSnapshot:
    directory = Path(directory)
    with open(directory / "names.txt", "r", encoding="utf-8") as fh:
        names = tuple(line.rstrip("\n") for line in fh)
    fwd: Dict[int, Set[int]] = {}
    rev: Dict[int, Set[int]] = {}
    with open(directory / f"edges-{month}.csv", "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            src_s, dst_s = line.split(",")
            src, dst = int(src_s), int(dst_s)
            fwd.setdefault(src, set()).add(dst)
            rev.setdefault(dst, set()).add(src)
    return GraphSnapshot(
        month=month,
        names=names,
        edges={k: frozenset(v) for k, v in fwd.items()},
        reverse={k: frozenset(v) for k, v in rev.items()},
    )
