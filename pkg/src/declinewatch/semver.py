"""Semantic Versioning 2.0.0 parsing and precedence, in lenient mode.

Lenient mode tolerates a leading ``v``/``V`` and missing minor/patch
fields (filled with zero); precedence follows SemVer exactly, with build
metadata ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Optional, Tuple

_SEMVER_RE = re.compile(
    r"""^\s*[vV]?
        (?P<major>\d+)
        (?:\.(?P<minor>\d+))?
        (?:\.(?P<patch>\d+))?
        (?:-(?P<prerelease>[0-9A-Za-z][0-9A-Za-z.\-]*))?
        (?:\+(?P<build>[0-9A-Za-z][0-9A-Za-z.\-]*))?
        \s*$""",
    re.VERBOSE,
)

_NUMERIC_RE = re.compile(r"^\d+$")


class UnparseableVersion(ValueError):
    """The string does not parse as a semantic version, even leniently."""


def _identifier_key(identifier: str) -> Tuple[int, int, str]:
    # Numeric identifiers sort before (and among themselves as) numbers;
    # alphanumeric ones sort after, lexically in ASCII order.
    if _NUMERIC_RE.match(identifier):
        return (0, int(identifier), "")
    return (1, 0, identifier)


@total_ordering
@dataclass(frozen=True, eq=False)
class Version:
    major: int
    minor: int
    patch: int
    prerelease: Tuple[str, ...] = ()
    build: Optional[str] = field(default=None, compare=False)

    @classmethod
    def parse(cls, text: str) -> "Version":
        match = _SEMVER_RE.match(text)
        if not match:
            raise UnparseableVersion(f"not a semantic version: {text!r}")
        prerelease: Tuple[str, ...] = ()
        if match.group("prerelease"):
            parts = match.group("prerelease").split(".")
            if any(not p for p in parts):
                raise UnparseableVersion(f"empty prerelease identifier in {text!r}")
            prerelease = tuple(parts)
        return cls(
            major=int(match.group("major")),
            minor=int(match.group("minor") or 0),
            patch=int(match.group("patch") or 0),
            prerelease=prerelease,
            build=match.group("build"),
        )

    @property
    def precedence_key(self):
        # A version without prerelease ranks above any prerelease of the
        # same numeric triple; prerelease fields compare element-wise and
        # a shorter field list that is a prefix of a longer one sorts first.
        if self.prerelease:
            pre = (0, tuple(_identifier_key(p) for p in self.prerelease))
        else:
            pre = (1,)
        return (self.major, self.minor, self.patch, pre)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self.precedence_key == other.precedence_key

    def __lt__(self, other) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self.precedence_key < other.precedence_key

    def __hash__(self) -> int:
        return hash(self.precedence_key)

    def __str__(self) -> str:
        base = f"{self.major}.{self.minor}.{self.patch}"
        if self.prerelease:
            base += "-" + ".".join(self.prerelease)
        if self.build:
            base += "+" + self.build
        return base


def compare_semver(a: str, b: str) -> int:
    """Compare two version strings; return -1, 0, or 1.

    Raises UnparseableVersion if either side fails lenient parsing.
    """
    va, vb = Version.parse(a), Version.parse(b)
    if va == vb:
        return 0
    return -1 if va < vb else 1
