"""Entanglement values for labels: exact bi-GP entropies and the generalized REE.

Values are reported in GHZ units: the raw relative entropy (nats) divided by
the raw value of the n-GHZ state for the same label shape, so that the
n-GHZ state scores 1.
"""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable

import numpy as np

from .parties import GPSet, LabelError, set_partitions
from .separable import DEFAULT_SEED, Budget, minimize_relative_entropy
from .states import (
    DensityMatrix,
    PureState,
    entanglement_entropy,
    make_ghz,
    partial_trace,
    permute_parties,
    reduced_pure_state,
)

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
PIN_TOL = 1e-2
PRODUCT_TOL = 1e-12


class MixedStateError(ValueError):
    """The reduced state on a label's parties is mixed, so no exact bi-GP value exists."""


class Kind(enum.Enum):
    EXACT = "Exact"
    UPPER_BOUND = "UpperBound"


@dataclass(frozen=True)
class EntanglementValue:
    value: float
    kind: Kind
    raw_nats: float
    normalizer_nats: float
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "kind": self.kind.value,
            "raw_nats": float(self.raw_nats),
            "normalizer_nats": float(self.normalizer_nats),
            "converged": self.converged,
        }

    @classmethod
    def exact(cls, value) -> "EntanglementValue":
        """A closed-form value in GHZ units (e.g. from GHZ calculus)."""
        return cls(value, Kind.EXACT, float(value) * LN2, LN2)


def _local_label(label: GPSet, n_parties: int) -> GPSet:
    """Rewrite ``label`` in terms of positions 1..n of a state over its own parties."""
    if label.n_parties != n_parties:
        raise LabelError(
            f"state has {n_parties} parties but label {label} has {label.n_parties}; "
            "partial-trace to the label's parties first"
        )
    rank = {p: i + 1 for i, p in enumerate(label.parties)}
    return GPSet(tuple(tuple(rank[p] for p in g) for g in label.gps))


def bi_gp_entanglement(psi: PureState, label: GPSet) -> EntanglementValue:
    """Entropy of either GP of a two-GP label, for a pure (reduced) state.

    Labels that do not cover every party of ``psi`` are handled by tracing out
    the rest; this only works when what is left is still pure.
    """
    if not label.is_bi_gp:
        raise LabelError(f"{label} is not a bi-GP label")
    if max(label.parties) > psi.n_parties:
        raise LabelError(f"{label} refers to parties beyond {psi.n_parties}")
    if label.covers(psi.n_parties):
        red, local = psi, label
    else:
        red = reduced_pure_state(psi, label.parties)
        if red is None:
            raise MixedStateError(f"reduced state on {label.parties} is mixed; use gre")
        local = _local_label(label, red.n_parties)
    s = entanglement_entropy(red, local.gps[0])
    return EntanglementValue(s / LN2, Kind.EXACT, s, LN2)


def _is_product(rho: np.ndarray, dims: tuple[int, ...], blocks: list[list[int]]) -> bool:
    """Whether ``rho`` (blocks contiguous, in order) equals the product of its block marginals."""
    state = DensityMatrix(dims, rho)
    prod = np.ones((1, 1), dtype=complex)
    start = 1
    for blk in blocks:
        parties = list(range(start, start + len(blk)))
        prod = np.kron(prod, partial_trace(state, parties).matrix)
        start += len(blk)
    return np.abs(prod - rho).max() <= PRODUCT_TOL


def separable_partitions(label: GPSet, maximal_only: bool = True) -> list[list[tuple[int, ...]]]:
    """Groupings of the label's GPs into blocks, as lists of GP indices.

    States separable across a partition are separable across every coarsening
    of it, so the union of all partition-separable sets is already the union
    over the two-block groupings; ``maximal_only=False`` lists every grouping
    with at least two blocks.
    """
    parts = set_partitions(range(len(label.gps)))
    if maximal_only:
        return [b for b in parts if len(b) == 2]
    return [b for b in parts if len(b) >= 2]


def gre_raw(
    rho: DensityMatrix, label: GPSet, budget: Budget | None = None, maximal_only: bool = True
) -> tuple[float, bool]:
    """Minimum relative entropy (nats) over the union of partition-separable sets.

    Returns ``(raw_nats, converged)``; the value is an upper bound.
    """
    budget = budget or Budget()
    local = _local_label(label, rho.n_parties)
    seq = np.random.SeedSequence(budget.seed)
    best, conv_best = math.inf, True
    for part in separable_partitions(local, maximal_only):
        order = [p for blk in part for q in blk for p in local.gps[q]]
        blocks = [[p for q in blk for p in local.gps[q]] for blk in part]
        perm = permute_parties(rho, order)
        bdims = tuple(math.prod(perm.dims[i] for i in range(s, s + len(b)))
                      for s, b in zip(np.cumsum([0] + [len(b) for b in blocks[:-1]]), blocks))
        if _is_product(perm.matrix, perm.dims, blocks):
            return 0.0, True
        res = minimize_relative_entropy(perm.matrix, bdims, budget, seq.spawn(1)[0])
        if res.raw_nats < best:
            best, conv_best = res.raw_nats, res.converged
    return best, conv_best


def _shape_key(label: GPSet) -> tuple[int, ...]:
    return tuple(sorted(len(g) for g in label.gps))


@lru_cache(maxsize=None)
def _normalizer_cached(shape: tuple[int, ...], budget: Budget) -> float:
    if len(shape) == 2:
        return LN2
    gps, start = [], 1
    for size in shape:
        gps.append(tuple(range(start, start + size)))
        start += size
    n = start - 1
    ghz = make_ghz(range(1, n + 1), n).density()
    raw, _ = gre_raw(ghz, GPSet(tuple(gps)), budget)
    if abs(raw - LN2) <= PIN_TOL:
        return LN2
    log.warning("GHZ normalizer for shape %s is %.6g, not within %.0e of ln 2", shape, raw, PIN_TOL)
    return raw


def normalizer(label: GPSet, budget: Budget | None = None) -> float:
    """Raw GRE (nats) of the n-GHZ state under a label of the same shape.

    Memoized per shape; the seed and worker count are normalized away so the
    value does not depend on which caller computed it first.
    """
    budget = replace(budget or Budget(), seed=DEFAULT_SEED, workers=1)
    return _normalizer_cached(_shape_key(label), budget)


def gre(rho: DensityMatrix | PureState, label: GPSet, budget: Budget | None = None) -> EntanglementValue:
    """Generalized relative entropy of entanglement in GHZ units (an upper bound).

    ``rho`` must live on exactly the label's parties, in ascending order.
    """
    budget = budget or Budget()
    rho = rho.density()
    raw, conv = gre_raw(rho, label, budget)
    norm = normalizer(label, budget)
    return EntanglementValue(raw / norm, Kind.UPPER_BOUND, raw, norm, conv)


def label_value(psi: PureState, label: GPSet, budget: Budget | None = None) -> EntanglementValue:
    """Best available value of one label for a pure state: exact when possible, else GRE."""
    if label.is_bi_gp:
        try:
            return bi_gp_entanglement(psi, label)
        except MixedStateError:
            pass
    return gre(partial_trace(psi, label.parties), label, budget)


def gre_state_profile(
    psi: PureState, labels: Iterable[GPSet], budget: Budget | None = None
) -> dict[GPSet, EntanglementValue]:
    budget = budget or Budget()
    labels = list(labels)
    for lab in labels:
        if max(lab.parties) > psi.n_parties:
            raise LabelError(f"{lab} refers to parties beyond {psi.n_parties}")
    # fill the normalizer cache serially so parallel workers only read it
    for lab in labels:
        normalizer(lab, budget)
    if budget.workers > 1:
        with ThreadPoolExecutor(budget.workers) as pool:
            values = list(pool.map(lambda lab: label_value(psi, lab, budget), labels))
    else:
        values = [label_value(psi, lab, budget) for lab in labels]
    return dict(zip(labels, values))


def profile_to_dict(profile: dict[GPSet, EntanglementValue]) -> dict[str, dict]:
    return {lab.text(): v.to_dict() for lab, v in profile.items()}
