"""Ground types for approval-based committee voting.

Alternatives are integers ``0..m-1``. A ballot is a non-empty frozenset of
alternatives, a profile is an ordered tuple of ballots, and an :class:`Instance`
bundles a profile with the committee size ``k``. Committees are sorted tuples
of ``k`` distinct alternatives; ``enumerate_committees`` fixes the canonical
(lexicographic) order that every distribution and report in this package
indexes by.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

Alternative = int
Ballot = frozenset
Committee = tuple
Profile = tuple


class InvalidParametersError(ValueError):
    """Raised when an operation is called outside its contract."""


class ProfileParseError(ValueError):
    """Raised on malformed profile text; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ResourceLimitError(RuntimeError):
    """Raised when an exact audit would exceed a documented size policy."""


@dataclass(frozen=True)
class Instance:
    """A voting instance: an approval profile over ``m`` alternatives plus
    the committee size ``k``.

    Invariants enforced at construction: ``m >= 3``, ``1 <= k <= m``,
    ``n >= 1``, and every ballot is a non-empty subset of ``range(m)``.
    """

    ballots: tuple
    m: int
    k: int

    def __post_init__(self):
        if self.m < 3:
            raise InvalidParametersError(f"need m >= 3 alternatives, got m={self.m}")
        if not 1 <= self.k <= self.m:
            raise InvalidParametersError(f"need 1 <= k <= m, got k={self.k}, m={self.m}")
        if not self.ballots:
            raise InvalidParametersError("profile must contain at least one voter")
        canonical = []
        for i, ballot in enumerate(self.ballots):
            b = frozenset(ballot)
            if not b:
                raise InvalidParametersError(f"voter {i} has an empty ballot")
            if not all(isinstance(a, int) and 0 <= a < self.m for a in b):
                raise InvalidParametersError(
                    f"voter {i} approves alternatives outside 0..{self.m - 1}: {sorted(b)}"
                )
            canonical.append(b)
        object.__setattr__(self, "ballots", tuple(canonical))

    @property
    def n(self) -> int:
        return len(self.ballots)

    def replace_ballot(self, voter: int, ballot) -> "Instance":
        """Return a new instance with ``voter``'s ballot swapped out."""
        new = list(self.ballots)
        new[voter] = frozenset(ballot)
        return Instance(tuple(new), self.m, self.k)


def make_instance(ballots: Sequence, m: int, k: int) -> Instance:
    """Convenience constructor accepting any iterable-of-iterables profile."""
    return Instance(tuple(frozenset(b) for b in ballots), m, k)


def enumerate_committees(m: int, k: int) -> list:
    """All C(m, k) size-``k`` committees in lexicographic order of their sorted
    member indices. This order is the canonical global ordering used by
    sampling and reports."""
    if k < 1 or k > m:
        raise InvalidParametersError(f"need 1 <= k <= m, got k={k}, m={m}")
    return list(itertools.combinations(range(m), k))


def nonempty_subsets(m: int) -> Iterator[frozenset]:
    """The 2^m - 1 non-empty ballots over ``range(m)``, in bitmask order."""
    for mask in range(1, 1 << m):
        yield frozenset(a for a in range(m) if mask >> a & 1)


def enumerate_neighbors(inst: Instance) -> Iterator[tuple]:
    """Yield ``(voter, neighbor)`` for every instance obtained by replacing
    exactly one voter's ballot with a different non-empty subset of the
    alternatives. Yields n*(2^m - 2) neighbors, none equal to the input,
    each at profile distance 1; ``k`` is unchanged."""
    for voter in range(inst.n):
        current = inst.ballots[voter]
        for ballot in nonempty_subsets(inst.m):
            if ballot != current:
                yield voter, inst.replace_ballot(voter, ballot)


def profile_distance(p1: Sequence, p2: Sequence) -> int:
    """Number of voter positions on which two equal-length profiles differ."""
    if len(p1) != len(p2):
        raise InvalidParametersError(
            f"profiles have different lengths: {len(p1)} vs {len(p2)}"
        )
    return sum(1 for b1, b2 in zip(p1, p2) if frozenset(b1) != frozenset(b2))


def _check_permutation(sigma: Sequence, m: int) -> None:
    if len(sigma) != m or sorted(sigma) != list(range(m)):
        raise InvalidParametersError(f"sigma is not a permutation of 0..{m - 1}: {sigma}")


def permute(inst: Instance, sigma: Sequence) -> Instance:
    """Apply an alternative permutation elementwise to every ballot.

    ``sigma`` maps alternative ``a`` to ``sigma[a]``; ``n`` and ``k`` are
    unchanged."""
    _check_permutation(sigma, inst.m)
    return Instance(
        tuple(frozenset(sigma[a] for a in ballot) for ballot in inst.ballots),
        inst.m,
        inst.k,
    )


def permute_committee(committee: Sequence, sigma: Sequence) -> tuple:
    """Image of a committee under an alternative permutation, re-sorted."""
    return tuple(sorted(sigma[a] for a in committee))


def parse_instance(text: str) -> Instance:
    """Parse the profile text format.

    Line 1 is ``m=<int> k=<int>``; each further non-blank line lists one
    voter's approved alternative indices separated by spaces. Blank lines and
    ``#`` comments are ignored. Empty ballots are rejected.
    """
    header = None
    ballots = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            try:
                fields = dict(p.split("=", 1) for p in parts)
                m = int(fields["m"])
                k = int(fields["k"])
            except (ValueError, KeyError):
                raise ProfileParseError(
                    f"expected header 'm=<int> k=<int>', got {line!r}", lineno
                ) from None
            header = (m, k)
            continue
        try:
            approved = [int(tok) for tok in line.split()]
        except ValueError:
            raise ProfileParseError(f"non-integer alternative index in {line!r}", lineno) from None
        if not approved:
            raise ProfileParseError("empty ballot", lineno)
        m = header[0]
        bad = [a for a in approved if not 0 <= a < m]
        if bad:
            raise ProfileParseError(f"alternative index out of range 0..{m - 1}: {bad[0]}", lineno)
        ballots.append(frozenset(approved))
    if header is None:
        raise ProfileParseError("missing 'm=<int> k=<int>' header", 1)
    if not ballots:
        raise ProfileParseError("no voter lines", 1)
    try:
        return Instance(tuple(ballots), header[0], header[1])
    except InvalidParametersError as exc:
        raise ProfileParseError(str(exc), 1) from None


def format_instance(inst: Instance) -> str:
    """Inverse of :func:`parse_instance` (canonical text serialization)."""
    lines = [f"m={inst.m} k={inst.k}"]
    for ballot in inst.ballots:
        lines.append(" ".join(str(a) for a in sorted(ballot)))
    return "\n".join(lines) + "\n"
