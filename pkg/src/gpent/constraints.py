"""Copy-ratio constraints for states generated reversibly from all GHZ-like states.

Variables ``x_z`` are copy ratios of the GHZ-like states ``g(z)``, one per
party subset ``z`` with at least two parties. Rows come in three families:

``bga1``
    one equality per split of all N parties into two GPs: the GHZ-like states
    straddling the split add up to the pure state's entanglement entropy;
``bg1``
    one ``<=`` row per remaining bi-GP label (GPs that leave some party out);
``n``
    ``x_z <= E_(z1)...(zn)`` for every subset z of three or more parties.

The per-bipartition inequalities that follow from ``bga1`` and ``n`` are
checked directly on a profile by :func:`check_gen`.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import __version__
from .ghz_calculus import contributes
from .measures import EntanglementValue, Kind, gre_state_profile, profile_to_dict
from .parties import (
    GP,
    GPSet,
    bi_gp_labels,
    bipartitions,
    enumerate_ghz_labels,
    subset_text,
    true_npartite_labels,
)
from .separable import Budget
from .simplex import (
    EQ,
    GE,
    LE,
    FeasiblePoint,
    InfeasibilityWitness,
    Verification,
    phase1,
    verify_point,
    verify_witness,
)
from .states import PureState, haar_state, state_to_json

GEN_TOL = 1e-8
RESIDUAL_TOL = 1e-8
MAX_SEARCH_PARTIES = 4


class ConstraintError(ValueError):
    """Missing or unsound inputs for a constraint system."""


@dataclass(frozen=True)
class Row:
    coeffs: tuple[int, ...]
    relation: str
    rhs: float | Fraction
    rhs_kind: Kind
    label: GPSet
    origin: str
    tightened: bool = False

    def to_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "relation": self.relation,
            "rhs": _num(self.rhs),
            "rhs_kind": self.rhs_kind.value,
            "label": self.label.text(),
            "origin": self.origin,
            "tightened": self.tightened,
        }


def _num(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return float(v)


def _var_name(z: GP) -> str:
    return "x" + subset_text(z).replace(" ", "_")


@dataclass(frozen=True)
class ConstraintSystem:
    N: int
    variables: tuple[GP, ...]
    rows: tuple[Row, ...]

    @property
    def A(self) -> list[tuple[int, ...]]:
        return [r.coeffs for r in self.rows]

    @property
    def relations(self) -> list[str]:
        return [r.relation for r in self.rows]

    @property
    def b(self) -> list:
        return [r.rhs for r in self.rows]

    def counts(self) -> dict[str, int]:
        out = {"bga1": 0, "bg1": 0, "n": 0}
        for r in self.rows:
            out[r.origin] += 1
        return out

    def is_rational(self) -> bool:
        return all(isinstance(r.rhs, (int, Fraction)) for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "variables": [subset_text(z) for z in self.variables],
            "rows": [r.to_dict() for r in self.rows],
            "counts": self.counts(),
        }

    def lp_text(self) -> str:
        """Plain LP rendering, one named constraint per row, all variables nonnegative."""
        names = [_var_name(z) for z in self.variables]
        lines = ["min 0", "s.t."]
        seen: dict[str, int] = {}
        for r in self.rows:
            terms = [n for n, c in zip(names, r.coeffs) if c == 1]
            lhs = " + ".join(terms) if terms else "0"
            tag = r.origin
            seen[tag] = seen.get(tag, 0) + 1
            rhs = _num(r.rhs)
            if isinstance(rhs, str):
                rhs = repr(float(r.rhs))  # LP readers take decimals, not p/q
            lines.append(f"  {tag}_{seen[tag]}: {lhs} {r.relation} {rhs}  \\ {r.label.text()}")
        lines.append("bounds")
        lines += [f"  {n} >= 0" for n in names]
        lines.append("end")
        return "\n".join(lines) + "\n"


def _lookup(profile: Mapping[GPSet, EntanglementValue], label: GPSet) -> EntanglementValue:
    try:
        return profile[label]
    except KeyError:
        raise ConstraintError(f"profile is missing label {label}") from None


def _rhs(v: EntanglementValue):
    return v.value if isinstance(v.value, Fraction) else float(v.value)


def build_system(
    profile: Mapping[GPSet, EntanglementValue], N: int, tighten: Iterable[GPSet] = ()
) -> ConstraintSystem:
    """Assemble the equality/inequality system over all GHZ-like copy ratios.

    ``tighten`` lists non-covering bi-GP labels whose entanglement is set to
    zero, turning their ``<=`` rows into equalities ``= 0``.
    """
    variables = tuple(enumerate_ghz_labels(N))
    tighten = set(tighten)
    rows = []
    for lab in bi_gp_labels(N):
        a, b = lab.gps
        coeffs = tuple(int(contributes(z, a, b)) for z in variables)
        v = _lookup(profile, lab)
        if lab.covers(N):
            if v.kind is not Kind.EXACT:
                raise ConstraintError(f"equality row {lab} needs an exact value, got {v.kind.value}")
            rows.append(Row(coeffs, EQ, _rhs(v), v.kind, lab, "bga1"))
        elif lab in tighten:
            rows.append(Row(coeffs, EQ, Fraction(0), Kind.EXACT, lab, "bg1", tightened=True))
        else:
            rows.append(Row(coeffs, LE, _rhs(v), v.kind, lab, "bg1"))
    bad = [lab for lab in tighten if not lab.is_bi_gp or lab.covers(N)]
    if bad:
        raise ConstraintError(f"only non-covering bi-GP labels can be tightened: {bad}")
    for lab in true_npartite_labels(N, min_size=3):
        v = _lookup(profile, lab)
        coeffs = tuple(int(z == lab.parties) for z in variables)
        rows.append(Row(coeffs, LE, _rhs(v), v.kind, lab, "n"))
    return ConstraintSystem(N, variables, tuple(rows))


@dataclass(frozen=True)
class FeasibilityResult:
    certificate: FeasiblePoint | InfeasibilityWitness
    verification: Verification | None = None

    @property
    def feasible(self) -> bool:
        return self.certificate.feasible

    def to_dict(self, system: ConstraintSystem) -> dict:
        c = self.certificate
        if isinstance(c, FeasiblePoint):
            out = {
                "status": "feasible",
                "x": {subset_text(z): _num(v) for z, v in zip(system.variables, c.x)},
                "max_residual": float(max_residual(system, c.x)),
            }
        else:
            out = {
                "status": "infeasible",
                "y": [_num(v) for v in c.y],
                "rows": [r.label.text() + " [" + r.origin + "]" for r in system.rows],
                "margin": _num(c.margin),
            }
        if self.verification is not None:
            out["exact_verification"] = {
                "ok": self.verification.ok,
                "message": self.verification.message,
            }
        return out


def max_residual(system: ConstraintSystem, x) -> float:
    worst = 0.0
    for r in system.rows:
        lhs = sum(float(c) * float(v) for c, v in zip(r.coeffs, x))
        d = lhs - float(r.rhs)
        viol = abs(d) if r.relation == EQ else (d if r.relation == LE else -d)
        worst = max(worst, viol)
    return worst


def verify_certificate(system: ConstraintSystem, cert) -> Verification:
    """Independent exact-rational check of either certificate type."""
    if isinstance(cert, FeasiblePoint):
        tol = Fraction(0) if all(isinstance(v, Fraction) for v in cert.x) and system.is_rational() else Fraction(RESIDUAL_TOL)
        return verify_point(system.A, system.relations, system.b, cert.x, tol)
    return verify_witness(system.A, system.relations, system.b, cert.y)


def solve_feasibility(system: ConstraintSystem, exact: bool | None = None, exact_verify: bool = False) -> FeasibilityResult:
    """Phase-1 simplex on the system; exact arithmetic by default for rational systems."""
    if exact is None:
        exact = system.is_rational()
    cert = phase1(system.A, system.relations, system.b, exact=exact)
    ver = verify_certificate(system, cert) if exact_verify else None
    return FeasibilityResult(cert, ver)


# --- per-bipartition inequalities -----------------------------------------

@dataclass(frozen=True)
class GenRow:
    bipartition: GPSet
    lhs: float
    rhs: float
    terms: tuple[GPSet, ...]
    verdict: str

    def to_dict(self) -> dict:
        return {
            "bipartition": self.bipartition.text(),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "terms": [t.text() for t in self.terms],
            "verdict": self.verdict,
        }


def gen_terms(bipartition: GPSet, N: int) -> list[GPSet]:
    """All-singleton labels whose parties straddle the split."""
    a, b = bipartition.gps
    return [lab for lab in true_npartite_labels(N) if contributes(lab.parties, a, b)]


def check_gen(profile: Mapping[GPSet, EntanglementValue], N: int, tol: float = GEN_TOL) -> list[GenRow]:
    """Check ``E_(A)(rest) <= sum of straddling all-singleton entanglements`` for every split.

    The left side must be exact; right-side terms may be upper bounds, which
    can only make a violation harder to show, so a reported violation stands.
    """
    out = []
    for bp in bipartitions(N):
        v = _lookup(profile, bp)
        if v.kind is not Kind.EXACT:
            raise ConstraintError(f"left side {bp} must be exact")
        terms = gen_terms(bp, N)
        rhs = sum(float(_lookup(profile, t).value) for t in terms)
        lhs = float(v.value)
        verdict = "HOLDS" if lhs <= rhs + tol else "VIOLATED"
        out.append(GenRow(bp, lhs, rhs, tuple(terms), verdict))
    return out


# --- search ----------------------------------------------------------------

def required_labels(N: int) -> list[GPSet]:
    return bi_gp_labels(N) + true_npartite_labels(N, min_size=3)


@dataclass
class TrialRecord:
    trial: int
    state: PureState
    profile: dict
    gen: list[GenRow]
    feasibility: FeasibilityResult | None
    system: ConstraintSystem | None
    skipped: bool = False

    @property
    def violations(self) -> list[dict]:
        out = [
            {"kind": "gen", "row": r.bipartition.text(), "lhs": r.lhs, "rhs": r.rhs}
            for r in self.gen if r.verdict == "VIOLATED"
        ]
        if self.feasibility is not None and not self.feasibility.feasible:
            cert = self.feasibility.certificate
            ver = self.feasibility.verification
            # upper-bound rows enter with y <= 0, so exact values could only widen the margin
            if cert.margin > RESIDUAL_TOL and ver is not None and ver.ok:
                out.append({"kind": "infeasible", "margin": _num(cert.margin)})
        return out

    def to_dict(self, budget: Budget, seed: int) -> dict:
        return {
            "tool_version": __version__,
            "seed": seed,
            "budget": budget.to_dict(),
            "trial": self.trial,
            "skipped": self.skipped,
            "state": json.loads(state_to_json(self.state)),
            "profile": profile_to_dict(self.profile),
            "gen": [r.to_dict() for r in self.gen],
            "feasibility": None if self.feasibility is None else self.feasibility.to_dict(self.system),
            "violations": self.violations,
        }


def analyze_state(psi: PureState, budget: Budget, trial: int = 0) -> TrialRecord:
    N = psi.n_parties
    profile = gre_state_profile(psi, required_labels(N), budget)
    if not all(v.converged for v in profile.values()):
        return TrialRecord(trial, psi, profile, [], None, None, skipped=True)
    gen = check_gen(profile, N)
    system = build_system(profile, N)
    feas = solve_feasibility(system, exact_verify=True)
    return TrialRecord(trial, psi, profile, gen, feas, system)


@dataclass
class SearchReport:
    N: int
    seed: int
    budget: Budget
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def skipped(self) -> int:
        return sum(r.skipped for r in self.records)

    @property
    def violations(self) -> list[dict]:
        return [dict(v, trial=r.trial) for r in self.records for v in r.violations]

    def summary(self) -> dict:
        return {
            "tool_version": __version__,
            "seed": self.seed,
            "budget": self.budget.to_dict(),
            "N": self.N,
            "trials": len(self.records),
            "skipped": self.skipped,
            "violations": len(self.violations),
            "result": "violations found" if self.violations else "none found",
        }

    def json_lines(self) -> str:
        lines = [json.dumps(r.to_dict(self.budget, self.seed), sort_keys=True) for r in self.records]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"


def search_counterexamples(
    N: int,
    trials: int,
    seed: int,
    budget: Budget | None = None,
    inject: Iterable[PureState] = (),
) -> SearchReport:
    """Haar-random pure states (plus any injected ones) run through every check.

    Each trial draws its state and its optimizer seed from its own child of
    ``SeedSequence(seed)``, so results do not depend on worker count.
    """
    if N > MAX_SEARCH_PARTIES or N < 2:
        raise ConstraintError(f"search supports 2..{MAX_SEARCH_PARTIES} parties, got {N}")
    if trials < 0:
        raise ConstraintError("trials must be >= 0")
    budget = budget or Budget()
    states = list(inject)
    children = np.random.SeedSequence(seed).spawn(trials + len(states))
    jobs = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        psi = states[i] if i < len(states) else haar_state((2,) * N, rng)
        trial_budget = Budget(**{**budget.to_dict(), "seed": int(child.generate_state(1)[0]), "workers": 1})
        jobs.append((i, psi, trial_budget))
    if budget.workers > 1:
        with ThreadPoolExecutor(budget.workers) as pool:
            records = list(pool.map(lambda j: analyze_state(j[1], j[2], j[0]), jobs))
    else:
        records = [analyze_state(psi, b, i) for i, psi, b in jobs]
    return SearchReport(N, seed, budget, records)
