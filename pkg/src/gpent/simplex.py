"""Phase-1 simplex for ``A x (=, <=, >=) b, x >= 0`` with Farkas certificates.

The tableau is generic in its number type: pass floats for a fast solve with
pivot tolerance ``eps``, or :class:`fractions.Fraction` entries (``exact=True``)
for an exact one. Bland's rule makes the pivot sequence deterministic and
guarantees termination.

Each row gets an artificial variable; the phase-1 objective is the sum of the
artificials. At the optimum, ``y = c_B B^-1`` is read off the artificial
columns. When the optimum is positive, ``y`` (mapped back to the original
row orientation) satisfies ``y^T A <= 0``, ``y_i <= 0`` on ``<=`` rows,
``y_i >= 0`` on ``>=`` rows and ``y^T b > 0``, which no ``x >= 0`` can meet.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

EQ, LE, GE = "=", "<=", ">="
RELATIONS = (EQ, LE, GE)


class NumericalStallError(RuntimeError):
    """The pivot loop hit its iteration cap."""


@dataclass(frozen=True)
class FeasiblePoint:
    x: tuple
    phase1_value: float

    feasible = True


@dataclass(frozen=True)
class InfeasibilityWitness:
    y: tuple
    margin: float

    feasible = False


Certificate = FeasiblePoint | InfeasibilityWitness


def phase1(
    A: Sequence[Sequence],
    rel: Sequence[str],
    b: Sequence,
    exact: bool = False,
    eps: float = 1e-9,
    feas_tol: float = 1e-8,
    max_pivots: int = 100_000,
) -> Certificate:
    m = len(A)
    n = len(A[0]) if m else 0
    conv = (lambda v: Fraction(v)) if exact else float
    zero = conv(0)
    tol = zero if exact else eps

    n_slack = sum(r != EQ for r in rel)
    width = n + n_slack + m  # x, slacks, artificials
    T = []
    flips = []
    slack_col = n
    for i in range(m):
        if rel[i] not in RELATIONS:
            raise ValueError(f"unknown relation {rel[i]!r}")
        row = [conv(a) for a in A[i]] + [zero] * (n_slack + m) + [conv(b[i])]
        if rel[i] != EQ:
            row[slack_col] = conv(1 if rel[i] == LE else -1)
            slack_col += 1
        flip = 1
        if row[-1] < 0:
            row = [-v for v in row]
            flip = -1
        row[n + n_slack + i] = conv(1)
        T.append(row)
        flips.append(flip)
    basis = [n + n_slack + i for i in range(m)]
    cost = [zero] * (n + n_slack) + [conv(1)] * m

    def reduced(j):
        return cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))

    for _ in range(max_pivots):
        enter = next((j for j in range(width) if reduced(j) < -tol), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            piv = T[i][enter]
            if piv > tol:
                ratio = T[i][-1] / piv
                if best is None or ratio < best - tol or (abs(ratio - best) <= tol and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # phase-1 objective is bounded below by 0, so this cannot happen
            raise NumericalStallError("unbounded phase-1 direction")
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * c for a, c in zip(T[i], T[leave])]
        basis[leave] = enter
    else:
        raise NumericalStallError(f"no optimum after {max_pivots} pivots")

    value = sum(cost[basis[i]] * T[i][-1] for i in range(m))
    if (exact and value == 0) or (not exact and value <= feas_tol):
        x = [zero] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = T[i][-1] if exact else max(T[i][-1], 0.0)
        return FeasiblePoint(tuple(x), value)
    art0 = n + n_slack
    y = []
    for k in range(m):
        yk = sum(cost[basis[i]] * T[i][art0 + k] for i in range(m))
        y.append(flips[k] * yk)
    return InfeasibilityWitness(tuple(y), value)


@dataclass(frozen=True)
class Verification:
    ok: bool
    margin: Fraction | None
    message: str


def _exact(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def verify_point(A, rel, b, x, tol=Fraction(0)) -> Verification:
    """Exact substitution check; ``tol`` is the allowed row violation."""
    tol = _exact(tol)
    xs = [_exact(v) for v in x]
    if any(v < 0 for v in xs):
        return Verification(False, None, "negative component")
    worst = Fraction(0)
    for row, r, bi in zip(A, rel, b):
        lhs = sum(_exact(a) * v for a, v in zip(row, xs))
        d = lhs - _exact(bi)
        viol = abs(d) if r == EQ else (d if r == LE else -d)
        worst = max(worst, viol)
    ok = worst <= tol
    return Verification(ok, worst, "ok" if ok else f"row violated by {float(worst):.3g}")


def verify_witness_exact(A, rel, b, y) -> Verification:
    ys = [_exact(v) for v in y]
    n = len(A[0]) if A else 0
    for i, r in enumerate(rel):
        if r == LE and ys[i] > 0:
            return Verification(False, None, f"multiplier {i} must be <= 0")
        if r == GE and ys[i] < 0:
            return Verification(False, None, f"multiplier {i} must be >= 0")
    for j in range(n):
        if sum(ys[i] * _exact(A[i][j]) for i in range(len(A))) > 0:
            return Verification(False, None, f"combined coefficient of variable {j} is positive")
    margin = sum(yi * _exact(bi) for yi, bi in zip(ys, b))
    if margin <= 0:
        return Verification(False, margin, "no positive contradiction margin")
    return Verification(True, margin, "ok")


def verify_witness(A, rel, b, y, max_denominator: int = 10**6) -> Verification:
    """Exact check of a Farkas witness.

    Float multipliers are first snapped to nearby small-denominator rationals
    (pivoting leaves them within rounding of such values); if that fails the
    raw binary values are checked exactly.
    """
    if all(isinstance(v, Fraction) for v in y):
        return verify_witness_exact(A, rel, b, y)
    snapped = [Fraction(v).limit_denominator(max_denominator) for v in y]
    res = verify_witness_exact(A, rel, b, snapped)
    if res.ok:
        return res
    return verify_witness_exact(A, rel, b, y)
