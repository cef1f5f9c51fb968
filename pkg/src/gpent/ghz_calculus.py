"""Closed-form entanglement of tensor combinations of GHZ-like states.

A combination maps party subsets (at least two parties each) to nonnegative
copy counts, or to copy ratios relative to one target state. All arithmetic
is exact (:class:`fractions.Fraction`); values are in GHZ units, so every
contributing GHZ-like state adds exactly one unit per copy.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .measures import EntanglementValue
from .parties import (
    GP,
    GPSet,
    LabelError,
    bi_gp_labels,
    enumerate_ghz_labels,
    make_gp,
    parse_subset,
    subset_text,
    true_npartite_labels,
)
from .states import PureState, make_ghz, tensor_aligned


class CombinationError(ValueError):
    pass


def _ratio(value) -> Fraction:
    if isinstance(value, float):
        # keep binary floats exact rather than guessing a nearby rational
        q = Fraction(value)
    else:
        try:
            q = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise CombinationError(f"bad copy count {value!r}") from exc
    if q < 0:
        raise CombinationError(f"copy counts must be nonnegative, got {value!r}")
    return q


class GhzCombination(Mapping):
    """Immutable mapping ``subset -> copies`` over the GHZ-like states of N parties."""

    def __init__(self, copies: Mapping[Iterable[int], object] | None = None, N: int | None = None):
        data: dict[GP, Fraction] = {}
        for key, val in (copies or {}).items():
            s = parse_subset(key) if isinstance(key, str) else make_gp(key)
            if len(s) < 2:
                raise CombinationError(f"GHZ-like states need at least two parties, got {s}")
            q = _ratio(val)
            data[s] = data.get(s, Fraction(0)) + q
        top = max((max(s) for s in data), default=2)
        if N is None:
            N = max(top, 2)
        if top > N:
            raise CombinationError(f"subset refers to party {top} > N={N}")
        self.N = N
        self._data = {s: data[s] for s in sorted(data, key=lambda s: (len(s), s)) if data[s] != 0}

    def __getitem__(self, key) -> Fraction:
        s = parse_subset(key) if isinstance(key, str) else make_gp(key)
        return self._data.get(s, Fraction(0))

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __add__(self, other: "GhzCombination") -> "GhzCombination":
        merged = dict(self._data)
        for s, q in other.items():
            merged[s] = merged.get(s, Fraction(0)) + q
        return GhzCombination(merged, max(self.N, other.N))

    def __eq__(self, other) -> bool:
        return isinstance(other, GhzCombination) and self._data == other._data

    def __repr__(self) -> str:
        return f"GhzCombination({self.text()!r}, N={self.N})"

    def vector(self) -> list[Fraction]:
        """Copy counts in the standard variable order of :func:`enumerate_ghz_labels`."""
        return [self[s] for s in enumerate_ghz_labels(self.N)]

    def text(self) -> str:
        return ", ".join(f"g({subset_text(s)})={q}" for s, q in self._data.items())

    def to_json(self) -> str:
        return json.dumps({subset_text(s): str(q) for s, q in self._data.items()})


_TERM = re.compile(r"^g\s*\(([^()]*)\)\s*=\s*([^,]+)$")


def parse_combination(text: str, N: int | None = None) -> GhzCombination:
    """Parse ``g(12)=2, g(123)=1/2``; an empty string is the empty combination."""
    copies: dict[GP, Fraction] = {}
    for term in filter(None, (t.strip() for t in re.split(r",(?![^()]*\))", text))):
        m = _TERM.match(term)
        if not m:
            raise CombinationError(f"cannot parse term {term!r}")
        s = parse_subset(m.group(1))
        copies[s] = copies.get(s, Fraction(0)) + _ratio(m.group(2))
    return GhzCombination(copies, N)


def combination_from_json(text: str, N: int | None = None) -> GhzCombination:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise CombinationError("combination JSON must be an object")
    return GhzCombination(data, N)


def contributes(subset: Iterable[int], a: Iterable[int], b: Iterable[int]) -> bool:
    """Whether a GHZ-like state on ``subset`` carries entanglement between GPs ``a`` and ``b``.

    It does exactly when the state lives inside ``a | b`` and touches both.
    """
    s, a, b = set(subset), set(a), set(b)
    if a & b:
        raise LabelError(f"GPs {sorted(a)} and {sorted(b)} overlap")
    return s <= (a | b) and bool(s & a) and bool(s & b)


def bi_gp_value(comb: GhzCombination, a: Iterable[int], b: Iterable[int]) -> Fraction:
    a, b = tuple(a), tuple(b)
    return sum((q for s, q in comb.items() if contributes(s, a, b)), Fraction(0))


def true_npartite_value(comb: GhzCombination, label: GPSet | Iterable[int]) -> Fraction:
    """Copy count of the GHZ-like state shared by exactly the label's parties."""
    if isinstance(label, GPSet):
        if not label.is_true_npartite:
            raise LabelError(f"{label} has a GP with more than one party")
        parties = label.parties
    else:
        parties = make_gp(label)
    if len(parties) < 2:
        raise LabelError("need at least two parties")
    return comb[parties]


def label_value(comb: GhzCombination, label: GPSet) -> Fraction:
    """Closed-form value for bi-GP and true-n-partite labels."""
    if label.is_bi_gp:
        return bi_gp_value(comb, *label.gps)
    if label.is_true_npartite:
        return true_npartite_value(comb, label)
    raise LabelError(f"no closed form for {label}; evaluate it numerically")


def profile_labels(N: int) -> list[GPSet]:
    """Labels needed to build the copy-ratio constraint system for N parties."""
    return bi_gp_labels(N) + true_npartite_labels(N, min_size=3)


def combination_profile(comb: GhzCombination, labels: Iterable[GPSet] | None = None) -> dict[GPSet, EntanglementValue]:
    labels = profile_labels(comb.N) if labels is None else list(labels)
    return {lab: EntanglementValue.exact(label_value(comb, lab)) for lab in labels}


def combination_state(comb: GhzCombination) -> PureState:
    """The aligned tensor product of all copies; only for small integer counts."""
    factors = []
    for s, q in comb.items():
        if q.denominator != 1:
            raise CombinationError("only integer copy counts have a state")
        factors += [make_ghz(s, comb.N)] * q.numerator
    if not factors:
        raise CombinationError("empty combination")
    return tensor_aligned(*factors)
