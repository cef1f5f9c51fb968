"""Parties, generalized parties and entanglement labels.

A party is a positive integer. A generalized party (GP) is a sorted tuple of
distinct parties. An entanglement label (:class:`GPSet`) is an unordered
collection of at least two pairwise disjoint GPs, stored in canonical form:
parties ascending inside each GP, GPs ordered by their smallest party.

Labels have a text form, ``(1)(23)`` when every index is a single digit and
``(1)(2 3)`` otherwise; see :func:`parse_label` and :meth:`GPSet.text`.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_ENUM_PARTIES = 8

GP = tuple[int, ...]


class LabelError(ValueError):
    """Malformed label, GP or party set."""


def make_gp(parties: Iterable[int]) -> GP:
    gp = tuple(sorted(int(p) for p in parties))
    if not gp:
        raise LabelError("a generalized party needs at least one party")
    if gp[0] < 1:
        raise LabelError(f"party indices start at 1, got {gp[0]}")
    if len(set(gp)) != len(gp):
        raise LabelError(f"duplicate party in {gp}")
    return gp


@dataclass(frozen=True)
class GPSet:
    """Canonical entanglement label.

    Construct with any iterable of iterables of party indices; the stored
    ``gps`` are always canonical, so equality and hashing ignore the order
    in which GPs (and parties inside them) were given.
    """

    gps: tuple[GP, ...]

    def __post_init__(self):
        gps = tuple(sorted((make_gp(g) for g in self.gps), key=lambda g: g[0]))
        if len(gps) < 2:
            raise LabelError("a label needs at least two generalized parties")
        seen: set[int] = set()
        for g in gps:
            if seen.intersection(g):
                raise LabelError(f"overlapping generalized parties in {gps}")
            seen.update(g)
        object.__setattr__(self, "gps", gps)

    @classmethod
    def parse(cls, text: str) -> "GPSet":
        return parse_label(text)

    @property
    def parties(self) -> GP:
        return tuple(sorted(itertools.chain.from_iterable(self.gps)))

    @property
    def n_parties(self) -> int:
        return sum(len(g) for g in self.gps)

    def __len__(self) -> int:
        return len(self.gps)

    def __iter__(self) -> Iterator[GP]:
        return iter(self.gps)

    @property
    def is_bi_gp(self) -> bool:
        return len(self.gps) == 2

    @property
    def is_true_npartite(self) -> bool:
        return all(len(g) == 1 for g in self.gps)

    def covers(self, n_parties: int) -> bool:
        return self.parties == tuple(range(1, n_parties + 1))

    def text(self) -> str:
        compact = all(p < 10 for g in self.gps for p in g)
        if compact:
            return "".join("(" + "".join(map(str, g)) + ")" for g in self.gps)
        if not any(len(g) > 1 for g in self.gps):
            # a trailing comma marks "(10,)" as one party rather than parties 1 and 0
            return "".join(f"({g[0]},)" for g in self.gps)
        return "".join("(" + " ".join(map(str, g)) + ")" for g in self.gps)

    def __str__(self) -> str:
        return self.text()


def canonical(label: GPSet | Iterable[Iterable[int]]) -> GPSet:
    if isinstance(label, GPSet):
        return GPSet(label.gps)
    return GPSet(tuple(tuple(g) for g in label))


_GROUP = re.compile(r"\(([^()]*)\)")


def _parse_groups(text: str, prefix: str = "") -> list[str]:
    body = re.sub(r"\s+", " ", text.strip())
    pattern = re.escape(prefix) + r"\s*\(([^()]*)\)" if prefix else _GROUP.pattern
    groups = re.findall(pattern, body)
    leftover = re.sub(pattern, "", body).strip()
    if leftover or not groups:
        raise LabelError(f"cannot parse {text!r}")
    return groups


def _split_group(group: str, spaced: bool) -> GP:
    group = group.strip()
    if spaced:
        tokens = [t for t in re.split(r"[\s,]+", group) if t]
    else:
        tokens = list(group)
    if not tokens or not all(t.isdigit() for t in tokens):
        raise LabelError(f"bad party list {group!r}")
    return make_gp(int(t) for t in tokens)


def parse_gps(groups: Sequence[str]) -> list[GP]:
    """Parse raw group bodies; separators anywhere switch every group to spaced mode."""
    spaced = any(re.search(r"[\s,]", g.strip()) for g in groups)
    return [_split_group(g, spaced) for g in groups]


def parse_label(text: str) -> GPSet:
    """Parse ``(1)(23)`` / ``(1)(2 3)`` into a canonical :class:`GPSet`."""
    return GPSet(tuple(parse_gps(_parse_groups(text))))


def parse_subset(text: str) -> GP:
    """Parse a single party subset such as ``123``, ``(1 2 3)`` or ``1,2,3``."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    return parse_gps([body])[0]


def subset_text(subset: Sequence[int]) -> str:
    if all(p < 10 for p in subset):
        return "".join(map(str, subset))
    return " ".join(map(str, subset))


# --- combinatorics ---------------------------------------------------------

def set_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """Yield every set partition of ``items`` as a list of blocks.

    Uses restricted growth strings, so each partition appears exactly once.
    """
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i: int, top: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for item, b in zip(items, rgs):
                blocks[b].append(item)
            yield [tuple(b) for b in blocks]
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


@lru_cache(maxsize=None)
def stirling2(n: int, m: int) -> int:
    """Stirling number of the second kind by the standard recurrence."""
    if n == m:
        return 1
    if m == 0 or m > n:
        return 0
    return m * stirling2(n - 1, m) + stirling2(n - 1, m - 1)


def _compositions(n: int, m: int) -> Iterator[tuple[int, ...]]:
    # ordered m-tuples of positive integers summing to n
    for cuts in itertools.combinations(range(1, n), m - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def partition_count(n: int, m: int) -> int:
    """Number of ways to split ``n`` parties into ``m`` unlabeled nonempty GPs.

    Evaluated literally as a multinomial sum over block sizes divided by m!.
    """
    total = sum(
        math.factorial(n) // math.prod(math.factorial(k) for k in sizes)
        for sizes in _compositions(n, m)
    )
    q, r = divmod(total, math.factorial(m))
    assert r == 0
    return q


def count_labels(N: int) -> int:
    """Total number of entanglement labels of an N-party system."""
    if N < 2:
        raise LabelError(f"need at least 2 parties, got {N}")
    return sum(
        math.comb(N, n) * sum(partition_count(n, m) for m in range(2, n + 1))
        for n in range(2, N + 1)
    )


def _check_enum_range(N: int) -> None:
    if not 2 <= N <= MAX_ENUM_PARTIES:
        raise LabelError(f"party count must be in [2, {MAX_ENUM_PARTIES}], got {N}")


def enumerate_labels(N: int, n: int | None = None) -> list[GPSet]:
    """All labels over any subset of at least two of the N parties.

    With ``n`` given, only labels whose GPs together hold exactly ``n``
    parties are returned. Ordering: by subset size, then subset, then
    partition in restricted-growth order.
    """
    _check_enum_range(N)
    sizes = range(2, N + 1) if n is None else [n]
    if n is not None and not 2 <= n <= N:
        raise LabelError(f"subset size must be in [2, {N}], got {n}")
    out = []
    for size in sizes:
        for subset in itertools.combinations(range(1, N + 1), size):
            for blocks in set_partitions(subset):
                if len(blocks) >= 2:
                    out.append(GPSet(tuple(blocks)))
    return out


def enumerate_ghz_labels(N: int) -> list[GP]:
    """Every party subset that can hold a GHZ-like state, ordered by size then lexicographically."""
    if N < 2:
        raise LabelError(f"need at least 2 parties, got {N}")
    return [
        s for size in range(2, N + 1) for s in itertools.combinations(range(1, N + 1), size)
    ]


def bipartitions(N: int) -> list[GPSet]:
    """The 2^(N-1) - 1 splits of all N parties into two GPs."""
    out = []
    rest = tuple(range(2, N + 1))
    for r in range(0, N - 1):
        for extra in itertools.combinations(rest, r):
            a = (1,) + extra
            b = tuple(p for p in range(1, N + 1) if p not in a)
            out.append(GPSet((a, b)))
    return out


def bi_gp_labels(N: int) -> list[GPSet]:
    _check_enum_range(N)
    return [lab for lab in enumerate_labels(N) if lab.is_bi_gp]


def true_npartite_labels(N: int, min_size: int = 2) -> list[GPSet]:
    return [
        GPSet(tuple((p,) for p in s))
        for s in enumerate_ghz_labels(N)
        if len(s) >= min_size
    ]


def count_bi_gp_ordered(N: int) -> int:
    """Ordered count of bi-GP entanglements, each unordered pair counted twice."""
    return sum(
        math.factorial(N)
        // (math.factorial(n1) * math.factorial(n2) * math.factorial(N - n1 - n2))
        for n1 in range(1, N)
        for n2 in range(1, N - n1 + 1)
    )


def count_bi_gp(N: int) -> int:
    return count_bi_gp_ordered(N) // 2


def count_bi_gp_all(N: int) -> int:
    return 2 ** (N - 1) - 1


def count_ghz(N: int) -> int:
    return 2**N - N - 1


def count_npartite_rows(N: int) -> dict[str, int]:
    """Counts of inequalities bounding true-n-partite copy ratios for n > 2.

    ``per_party_set`` is the count for one fixed ordering of all N parties
    (one inequality for each n = 3..N); ``instantiated`` is one per subset.
    """
    return {
        "per_party_set": max(N - 2, 0),
        "instantiated": sum(math.comb(N, n) for n in range(3, N + 1)),
    }


class LabelKind(enum.Enum):
    BI_GP = "BiGP"
    BI_GP_ALL_PARTIES = "BiGPAllParties"
    TRUE_NPARTITE = "TrueNPartite"
    OTHER = "Other"


@dataclass(frozen=True)
class LabelClass:
    kind: LabelKind
    n: int | None = None

    def __str__(self) -> str:
        return f"{self.kind.value}({self.n})" if self.n is not None else self.kind.value


def classify_label(label: GPSet, N: int) -> LabelClass:
    """Two-GP labels are bi-GP first; all-singleton labels of 3+ GPs are true n-partite."""
    if max(label.parties) > N:
        raise LabelError(f"label {label} refers to parties beyond N={N}")
    if label.is_bi_gp:
        if label.covers(N):
            return LabelClass(LabelKind.BI_GP_ALL_PARTIES, N)
        return LabelClass(LabelKind.BI_GP)
    if label.is_true_npartite:
        return LabelClass(LabelKind.TRUE_NPARTITE, len(label))
    return LabelClass(LabelKind.OTHER)
