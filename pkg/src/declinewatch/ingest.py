"""Registry feed ingestion: package documents in, dependency-change events out.

The input is the registry's replication feed: one JSON document per
package, carrying a ``versions`` map (version -> manifest with dependency
maps) and a ``time`` map (version -> publication timestamp). The output is
the globally sorted event log that drives the dependency graph: one
``add`` or ``remove`` record per changed dependency edge.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .months import format_rfc3339, parse_rfc3339
from .semver import UnparseableVersion, Version

logger = logging.getLogger(__name__)

DESIGN_DOC_PREFIX = "_design/"

#: Manifest fields that contribute graph edges. Runtime dependencies only
#: by default; dev/peer/optional fields model development-time coupling,
#: not reuse.
DEFAULT_DEPENDENCY_FIELDS: Tuple[str, ...] = ("dependencies",)

ADD = "add"
REMOVE = "remove"


class MalformedDocument(ValueError):
    """The bytes are not a usable package document."""


class NotAPackage(Exception):
    """Design/meta document: skip it, this is not a failure."""


@dataclass(frozen=True)
class VersionEntry:
    release_time: datetime
    dependencies: Mapping[str, str]  # dependency name -> version range


@dataclass(frozen=True)
class PackageDocument:
    name: str
    versions: Mapping[str, VersionEntry]


@dataclass(frozen=True)
class ReleaseRecord:
    package: str
    version: Version
    version_str: str
    release_time: datetime
    dependencies: frozenset


@dataclass(frozen=True, order=True)
class DependencyChangeEvent:
    time: datetime
    source: str
    target: str
    action: str  # ADD or REMOVE

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ValueError(f"self-dependency event: {self.source}")
        if self.action not in (ADD, REMOVE):
            raise ValueError(f"unknown action: {self.action}")

    @property
    def sort_key(self):
        return (self.time, self.source, self.target, self.action)


def _valid_name(name) -> bool:
    if not isinstance(name, str) or not name:
        return False
    # Whitespace is forbidden by the registry; commas would break the
    # delimited event-log format.
    return not any(c.isspace() for c in name) and "," not in name


def parse_registry_doc(
    raw_doc: Union[bytes, str, Mapping],
    dependency_fields: Sequence[str] = DEFAULT_DEPENDENCY_FIELDS,
) -> PackageDocument:
    """Parse one replication-feed document into a PackageDocument.

    Raises NotAPackage for design/meta documents or documents without a
    versions map (skip signals), MalformedDocument for anything that
    cannot be interpreted as a package document at all.
    """
    if isinstance(raw_doc, (bytes, str)):
        try:
            doc = json.loads(raw_doc)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedDocument(f"unparseable document: {exc}") from exc
    else:
        doc = raw_doc
    if not isinstance(doc, dict):
        raise MalformedDocument("document is not an object")

    doc_id = doc.get("_id")
    if isinstance(doc_id, str) and doc_id.startswith(DESIGN_DOC_PREFIX):
        raise NotAPackage(doc_id)

    name = doc.get("name") or doc_id
    versions = doc.get("versions")
    if not isinstance(versions, dict):
        raise NotAPackage(f"{name!r} has no versions map")
    if not _valid_name(name):
        raise MalformedDocument(f"invalid package name: {name!r}")

    times = doc.get("time") or {}
    entries = {}
    for version, manifest in versions.items():
        raw_time = times.get(version)
        if raw_time is None:
            logger.debug("%s@%s: no publication time, dropped", name, version)
            continue
        try:
            release_time = parse_rfc3339(raw_time)
        except (ValueError, TypeError):
            logger.debug("%s@%s: unparseable time %r, dropped", name, version, raw_time)
            continue
        deps = {}
        if isinstance(manifest, dict):
            for fieldname in dependency_fields:
                declared = manifest.get(fieldname)
                if isinstance(declared, dict):
                    for dep, rng in declared.items():
                        if _valid_name(dep):
                            deps[dep] = rng if isinstance(rng, str) else ""
        entries[version] = VersionEntry(release_time=release_time, dependencies=deps)

    return PackageDocument(name=name, versions=entries)


def order_and_filter_releases(doc: PackageDocument) -> List[ReleaseRecord]:
    """Date-order the document's releases and drop backports.

    Releases are sorted by publication time (ties broken by version
    precedence, then the raw version string). A release is kept only if
    its version is strictly greater than the running maximum over the
    releases already kept, so a backport published after a newer line
    never rewinds the dependency timeline. Unparseable versions are
    dropped with a diagnostic.
    """
    parsed = []
    for version_str, entry in doc.versions.items():
        try:
            version = Version.parse(version_str)
        except UnparseableVersion:
            logger.debug("%s@%s: unparseable version, dropped", doc.name, version_str)
            continue
        parsed.append((entry.release_time, version, version_str, entry))

    parsed.sort(key=lambda item: (item[0], item[1].precedence_key, item[2]))

    kept: List[ReleaseRecord] = []
    max_version: Optional[Version] = None
    for release_time, version, version_str, entry in parsed:
        if max_version is not None and not version > max_version:
            logger.debug("%s@%s: backport (<= %s), dropped", doc.name, version_str, max_version)
            continue
        max_version = version
        deps = frozenset(d for d in entry.dependencies if d != doc.name)
        kept.append(
            ReleaseRecord(
                package=doc.name,
                version=version,
                version_str=version_str,
                release_time=release_time,
                dependencies=deps,
            )
        )
    return kept


def extract_dependency_events(releases: Sequence[ReleaseRecord]) -> List[DependencyChangeEvent]:
    """Diff consecutive releases into add/remove dependency events.

    The first release adds every dependency it declares; each later
    release removes dependencies absent from it and adds ones absent from
    its predecessor (version-range-only changes produce nothing). Events
    for releases sharing one timestamp are netted so replaying the stream
    always reproduces the latest release's dependency set.
    """
    events: List[DependencyChangeEvent] = []
    previous: frozenset = frozenset()
    for release in releases:
        current = release.dependencies
        for target in sorted(previous - current):
            events.append(
                DependencyChangeEvent(release.release_time, release.package, target, REMOVE)
            )
        for target in sorted(current - previous):
            events.append(
                DependencyChangeEvent(release.release_time, release.package, target, ADD)
            )
        previous = current

    return _net_same_instant(events)


def _net_same_instant(events: List[DependencyChangeEvent]) -> List[DependencyChangeEvent]:
    # Two releases published at the same instant can toggle one edge both
    # ways; keeping both records would make replay order-dependent.
    seen_pairs = {}
    for idx, event in enumerate(events):
        seen_pairs.setdefault((event.time, event.target), []).append(idx)
    drop = set()
    for indices in seen_pairs.values():
        if len(indices) > 1:
            # Actions on one edge alternate, so first != last means the
            # group cancels out; otherwise the last event wins.
            first, last = events[indices[0]], events[indices[-1]]
            drop.update(indices if first.action != last.action else indices[:-1])
    if not drop:
        return events
    return [e for i, e in enumerate(events) if i not in drop]


def events_for_document(
    raw_doc: Union[bytes, str, Mapping],
    dependency_fields: Sequence[str] = DEFAULT_DEPENDENCY_FIELDS,
) -> List[DependencyChangeEvent]:
    """Full per-package pipeline: parse, order, diff. Empty on skip."""
    try:
        doc = parse_registry_doc(raw_doc, dependency_fields)
    except NotAPackage as skip:
        logger.debug("skipping non-package document: %s", skip)
        return []
    return extract_dependency_events(order_and_filter_releases(doc))


def events_from_feed(
    lines: Iterable[Union[bytes, str]],
    dependency_fields: Sequence[str] = DEFAULT_DEPENDENCY_FIELDS,
    strict: bool = False,
) -> List[DependencyChangeEvent]:
    """Process a newline-delimited feed and return the merged event log.

    Per-package event streams are independent; the merge is deterministic:
    sorted by (time, source, target, action). Malformed lines are logged
    and skipped unless ``strict``.
    """
    events: List[DependencyChangeEvent] = []
    for lineno, line in enumerate(lines, start=1):
        if not line or (isinstance(line, str) and not line.strip()):
            continue
        try:
            events.extend(events_for_document(line, dependency_fields))
        except MalformedDocument as exc:
            if strict:
                raise
            logger.warning("feed line %d: %s", lineno, exc)
    events.sort(key=lambda e: e.sort_key)
    return events


def write_event_log(events: Iterable[DependencyChangeEvent], dest: Union[str, Path, IO[str]]) -> int:
    """Write events as headerless RFC3339 CSV lines: time,source,target,action."""

    def _write(fh: IO[str]) -> int:
        count = 0
        for event in events:
            fh.write(f"{format_rfc3339(event.time)},{event.source},{event.target},{event.action}\n")
            count += 1
        return count

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            return _write(fh)
    return _write(dest)


def read_event_log(src: Union[str, Path, IO[str]]) -> List[DependencyChangeEvent]:
    def _read(fh: IO[str]) -> List[DependencyChangeEvent]:
        out = []
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise MalformedDocument(f"event log line {lineno}: expected 4 fields")
            time_str, source, target, action = parts
            out.append(DependencyChangeEvent(parse_rfc3339(time_str), source, target, action))
        return out

    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as fh:
            return _read(fh)
    return _read(src)
