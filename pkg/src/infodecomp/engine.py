"""Axiom-driven deduction over partial-information atoms.

For a three-source system with a target, every subsystem scope (the seven
nonempty subsets of the sources) carries one atom variable per antichain of
that scope — 33 variables in all. The engine turns measured information
quantities and structural facts about the distribution into linear
constraints over those variables, then tightens exact rational interval
bounds to a fixed point. Outcomes: every variable forced (solved), some
intervals still wide (open), or a constraint that cannot be met
(contradiction, with a replayable certificate).

Constraint kinds:

* ``Nonnegativity`` — every atom is >= 0. Asserted for all atoms, not only
  redundancy atoms: the deduction chains squeeze pair and synergy atoms
  against zero as well, which is exactly the effective assumption the
  squeeze arguments rely on; every certificate that uses it says so.
* ``SelfRedundancy`` — the single atom of a single-source scope equals that
  source's information about the target.
* ``MutualSum`` — within a scope B, the atoms dominated by a subset A sum
  to I(A;T). With ``mutual_sums="singletons"`` only |A| = 1 instances are
  anchored; consistency across scopes then comes from ``CrossScale`` alone,
  which is the hypothesis set under which the two reference systems receive
  identical atom tables.
* ``CrossScale`` — the refinement identities tying an atom of a smaller
  scope to the atoms it splits into one scope up.
* ``IndependentIdentityZero`` — exactly-independent source pair whose join
  is informationally equivalent to the target has zero pair redundancy.
  Fires only on the exact two-sided support condition; firings are recorded.
* ``DeterminismZero`` — if two sources determine both the target and the
  third source, every full-scope atom built without any piece of those two
  sources is zero.
* ``Monotonicity`` — redundancy atoms cannot grow when sources are added;
  generated only for the redundancy-atom chains the deductions use.

Source-permutation symmetry generates no constraints: atoms are indexed by
antichains, which are order-free already (flagged here rather than silently
dropped).

Interval arithmetic is exact (Fractions); measured information values enter
as exact rationals where the distribution's dyadic structure allows, and as
exactly-embedded floats (snapped to integers within tolerance) otherwise.

A ``DeductionState`` is single-owner mutable while propagating; once
propagation finishes it should be treated as read-only. Independent systems
may be deduced in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .dist import DEFAULT_TOLERANCE, GroupLike, JointDistribution
from .errors import ArityUnsupported, StateStillOpen
from .lattice import Antichain, enumerate_full, leq

Scope = tuple[int, ...]

KIND_ORDER = (
    "Nonnegativity",
    "SelfRedundancy",
    "IndependentIdentityZero",
    "DeterminismZero",
    "CrossScale",
    "MutualSum",
    "Monotonicity",
)


@dataclass(frozen=True)
class AtomRef:
    """One partial-information atom: an antichain within a subsystem scope."""

    scope: Scope
    antichain: Antichain

    def __str__(self) -> str:
        scope = "".join(str(i) for i in self.scope)
        return f"pi[{scope}]{self.antichain}"


@dataclass(frozen=True)
class Constraint:
    """Linear constraint sum(coeff * atom) relation rhs."""

    kind: str
    terms: tuple[tuple[AtomRef, Fraction], ...]
    relation: str  # "eq" or "le"
    rhs: Fraction
    provenance: str


@dataclass
class Interval:
    """Exact bound pair; None encodes the corresponding infinity."""

    lo: Fraction | None = None
    hi: Fraction | None = None

    def forced(self) -> bool:
        return self.lo is not None and self.lo == self.hi


@dataclass(frozen=True)
class BoundEvent:
    ref: AtomRef
    side: str  # "lo" or "hi"
    value: Fraction
    constraint_index: int
    used: tuple[tuple[AtomRef, str], ...]


@dataclass(frozen=True)
class Certificate:
    """Why a constraint cannot be satisfied, as a replayable constraint chain."""

    violated_index: int
    side: str  # "min_exceeds_rhs" or "max_below_rhs"
    lhs_bound: Fraction
    rhs: Fraction
    constraint_indices: tuple[int, ...]
    events: tuple[BoundEvent, ...]


@dataclass
class DeductionState:
    source_names: tuple[str, ...]
    target_name: str
    constraints: tuple[Constraint, ...]
    intervals: dict[AtomRef, Interval]
    mutual_info: dict[Scope, Fraction]
    mode: str  # "all" or "singletons"
    firings: tuple[str, ...]  # which structural rules fired, human readable
    status: str = "open"
    certificate: Certificate | None = None
    propagated: bool = field(default=False)
    _trace: dict = field(default_factory=dict, repr=False)

    def refs(self) -> tuple[AtomRef, ...]:
        return tuple(self.intervals)

    def interval(self, scope: Iterable[int], antichain: Antichain) -> Interval:
        return self.intervals[AtomRef(tuple(sorted(scope)), antichain)]

    def forced_value(
        self, scope: Iterable[int], antichain: Antichain
    ) -> Fraction | None:
        iv = self.interval(scope, antichain)
        return iv.lo if iv.forced() else None

    def full_scope_refs(self) -> tuple[AtomRef, ...]:
        full = tuple(sorted({i for ref in self.intervals for i in ref.scope}))
        return tuple(ref for ref in self.intervals if ref.scope == full)

    def full_scope_table(self) -> dict[Antichain, Fraction | None]:
        return {
            ref.antichain: self.intervals[ref].lo
            if self.intervals[ref].forced()
            else None
            for ref in self.full_scope_refs()
        }

    def constraint_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for c in self.constraints:
            counts[c.kind] = counts.get(c.kind, 0) + 1
        return counts


@dataclass(frozen=True)
class WespReport:
    """Comparison of total information against the forced atom lower bound."""

    mutual_information: Fraction
    atom_lower_bound: Fraction
    gap: Fraction
    violated: bool
    certificate: Certificate | None


def _snap(value: float, tol: float) -> Fraction:
    nearest = round(value)
    if abs(value - nearest) <= tol:
        return Fraction(nearest)
    return Fraction(value)


def _relabel_nodes(n: int, scope: Scope) -> tuple[Antichain, ...]:
    mapping = {i + 1: scope[i] for i in range(n)}
    return tuple(node.relabel(mapping) for node in enumerate_full(n).nodes)


def build_constraints(
    d: JointDistribution,
    sources: Sequence[GroupLike],
    target: GroupLike,
    mutual_sums: str = "all",
    tol: float = DEFAULT_TOLERANCE,
) -> DeductionState:
    """Assemble the constraint system for three source groups and a target.

    ``mutual_sums="all"`` anchors the down-set sum of every subset within
    every scope to its measured information; ``"singletons"`` anchors only
    single-source subsets, leaving multi-source sums tied across scopes by
    the cross-scale identities but not pinned to measured values.
    """
    if len(sources) != 3:
        raise ArityUnsupported("the deduction engine supports exactly 3 sources")
    if mutual_sums not in ("all", "singletons"):
        raise ValueError(f"bad mutual_sums mode {mutual_sums!r}")
    groups = [d.resolve(s) for s in sources]
    tgt = d.resolve(target)
    names = tuple(
        "+".join(d.variables[i].name for i in g) for g in groups
    )
    target_name = "+".join(d.variables[i].name for i in tgt)

    scopes: list[Scope] = [
        tuple(s)
        for size in (1, 2, 3)
        for s in combinations((1, 2, 3), size)
    ]
    nodes: dict[Scope, tuple[Antichain, ...]] = {
        s: _relabel_nodes(len(s), s) for s in scopes
    }
    intervals = {
        AtomRef(s, node): Interval() for s in scopes for node in nodes[s]
    }

    def union_indices(scope: Scope) -> tuple[int, ...]:
        return tuple(sorted({i for member in scope for i in groups[member - 1]}))

    mi: dict[Scope, Fraction] = {}
    for s in scopes:
        sel = union_indices(s)
        exact = d.mutual_information_exact(sel, tgt)
        mi[s] = exact if exact is not None else _snap(d.mutual_information(sel, tgt), tol)

    constraints: list[Constraint] = []
    firings: list[str] = []

    def scope_str(s: Scope) -> str:
        return "{" + ",".join(str(i) for i in s) + "}"

    for ref in intervals:
        constraints.append(
            Constraint(
                "Nonnegativity",
                ((ref, Fraction(-1)),),
                "le",
                Fraction(0),
                f"nonnegativity of {ref}",
            )
        )

    for i in (1, 2, 3):
        ref = AtomRef((i,), Antichain.of([(i,)]))
        constraints.append(
            Constraint(
                "SelfRedundancy",
                ((ref, Fraction(1)),),
                "eq",
                mi[(i,)],
                f"self-redundancy: information of source {i} about the target",
            )
        )

    # Exact structural facts about the distribution.
    for i, j in combinations((1, 2, 3), 2):
        union = union_indices((i, j))
        independent = d.is_independent(groups[i - 1], groups[j - 1])
        equivalent = d.is_deterministic(tgt, union) and d.is_deterministic(union, tgt)
        if independent and equivalent:
            ref = AtomRef((i, j), Antichain.of([(i,), (j,)]))
            firings.append(
                f"independent-identity fired for sources {i},{j}: independent pair, "
                "target informationally equivalent to their join"
            )
            constraints.append(
                Constraint(
                    "IndependentIdentityZero",
                    ((ref, Fraction(1)),),
                    "le",
                    Fraction(0),
                    f"independent-identity: sources {i},{j} independent and target "
                    f"equivalent to their join, so their shared atom vanishes",
                )
            )

    full_scope: Scope = (1, 2, 3)
    for i in (1, 2, 3):
        rest = tuple(x for x in (1, 2, 3) if x != i)
        rest_union = union_indices(rest)
        covered = tuple(sorted(set(tgt) | set(groups[i - 1])))
        if d.is_deterministic(covered, rest_union):
            firings.append(
                f"determinism fired for source {i}: sources {rest[0]},{rest[1]} "
                f"determine the target and source {i}"
            )
            rest_set = set(rest)
            for node in nodes[full_scope]:
                if not any(set(e) <= rest_set for e in node.elements):
                    ref = AtomRef(full_scope, node)
                    constraints.append(
                        Constraint(
                            "DeterminismZero",
                            ((ref, Fraction(1)),),
                            "le",
                            Fraction(0),
                            f"determinism: sources {rest[0]},{rest[1]} provide the whole "
                            f"system, atom {node} uses no piece of them",
                        )
                    )

    # Refinement identities across scopes.
    for i, j in combinations((1, 2, 3), 2):
        pair: Scope = (i, j)
        for a, b in ((i, j), (j, i)):
            constraints.append(
                Constraint(
                    "CrossScale",
                    (
                        (AtomRef((a,), Antichain.of([(a,)])), Fraction(1)),
                        (AtomRef(pair, Antichain.of([(i,), (j,)])), Fraction(-1)),
                        (AtomRef(pair, Antichain.of([(a,)])), Fraction(-1)),
                    ),
                    "eq",
                    Fraction(0),
                    f"cross-scale: source {a}'s information splits over scope "
                    f"{scope_str(pair)} into shared and exclusive parts",
                )
            )
        constraints.append(
            Constraint(
                "CrossScale",
                (
                    (AtomRef(pair, Antichain.of([(i,), (j,)])), Fraction(1)),
                    (AtomRef(full_scope, Antichain.of([(1,), (2,), (3,)])), Fraction(-1)),
                    (AtomRef(full_scope, Antichain.of([(i,), (j,)])), Fraction(-1)),
                ),
                "eq",
                Fraction(0),
                f"cross-scale: the shared atom of {scope_str(pair)} splits into the "
                "all-way shared atom and the pair-only atom of the full scope",
            )
        )
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if j == i:
                continue
            k = next(x for x in (1, 2, 3) if x not in (i, j))
            pair = tuple(sorted((i, j)))
            constraints.append(
                Constraint(
                    "CrossScale",
                    (
                        (AtomRef(pair, Antichain.of([(i,)])), Fraction(1)),
                        (AtomRef(full_scope, Antichain.of([(i,), (k,)])), Fraction(-1)),
                        (
                            AtomRef(full_scope, Antichain.of([(i,), tuple(sorted((j, k)))])),
                            Fraction(-1),
                        ),
                        (AtomRef(full_scope, Antichain.of([(i,)])), Fraction(-1)),
                    ),
                    "eq",
                    Fraction(0),
                    f"cross-scale: source {i}'s part exclusive of {j} splits at the "
                    "full scope",
                )
            )

    for scope in scopes:
        if len(scope) == 1:
            continue
        for size in range(1, len(scope) + 1):
            for subset in combinations(scope, size):
                if mutual_sums == "singletons" and len(subset) > 1:
                    continue
                alpha = Antichain.of([subset])
                terms = tuple(
                    (AtomRef(scope, node), Fraction(1))
                    for node in nodes[scope]
                    if leq(node, alpha)
                )
                constraints.append(
                    Constraint(
                        "MutualSum",
                        terms,
                        "eq",
                        mi[subset],
                        f"sum rule: atoms of scope {scope_str(scope)} dominated by "
                        f"{scope_str(subset)} add up to I({scope_str(subset)};T)",
                    )
                )

    for i, j in combinations((1, 2, 3), 2):
        pair = (i, j)
        pair_red = AtomRef(pair, Antichain.of([(i,), (j,)]))
        for single in (i, j):
            constraints.append(
                Constraint(
                    "Monotonicity",
                    (
                        (pair_red, Fraction(1)),
                        (AtomRef((single,), Antichain.of([(single,)])), Fraction(-1)),
                    ),
                    "le",
                    Fraction(0),
                    f"monotonicity: redundancy of {scope_str(pair)} cannot exceed "
                    f"source {single}'s information",
                )
            )
        constraints.append(
            Constraint(
                "Monotonicity",
                (
                    (AtomRef(full_scope, Antichain.of([(1,), (2,), (3,)])), Fraction(1)),
                    (pair_red, Fraction(-1)),
                ),
                "le",
                Fraction(0),
                "monotonicity: all-way redundancy cannot exceed the redundancy of "
                f"{scope_str(pair)}",
            )
        )

    order = {kind: pos for pos, kind in enumerate(KIND_ORDER)}

    def sort_key(item):
        idx, c = item
        if c.kind == "MutualSum":
            # Larger scopes first within equal scope size is irrelevant; what
            # matters is that a scope's widest subset sum is checked first so
            # an infeasible total trips at the full down-set.
            return (order[c.kind], len(c.terms[0][0].scope), -len(c.terms), idx)
        return (order[c.kind], 0, 0, idx)

    ordered = tuple(c for _, c in sorted(enumerate(constraints), key=sort_key))
    return DeductionState(
        source_names=names,
        target_name=target_name,
        constraints=ordered,
        intervals=intervals,
        mutual_info=mi,
        mode=mutual_sums,
        firings=tuple(firings),
    )


def _term_bounds(
    terms: tuple[tuple[AtomRef, Fraction], ...], intervals: dict[AtomRef, Interval]
):
    """Per-term (lo, hi) contributions; None encodes the unbounded side."""
    lows, highs = [], []
    for ref, coeff in terms:
        iv = intervals[ref]
        if coeff > 0:
            lows.append(None if iv.lo is None else coeff * iv.lo)
            highs.append(None if iv.hi is None else coeff * iv.hi)
        else:
            lows.append(None if iv.hi is None else coeff * iv.hi)
            highs.append(None if iv.lo is None else coeff * iv.lo)
    return lows, highs


def _finite_sum(parts: list[Fraction | None]) -> tuple[Fraction, int]:
    total = Fraction(0)
    missing = 0
    for p in parts:
        if p is None:
            missing += 1
        else:
            total += p
    return total, missing


def _used_bounds(terms, which: str) -> tuple[tuple[AtomRef, str], ...]:
    """Which interval sides produced the min (or max) of the constraint LHS."""
    used = []
    for ref, coeff in terms:
        if which == "min":
            used.append((ref, "lo" if coeff > 0 else "hi"))
        else:
            used.append((ref, "hi" if coeff > 0 else "lo"))
    return tuple(used)


def propagate(state: DeductionState, max_passes: int = 200) -> DeductionState:
    """Tighten interval bounds to a fixed point; sets the state's status.

    Each pass checks every constraint for feasibility against the current
    box, then tightens each term through the constraint. Detection happens
    before application, so a contradiction never corrupts the intervals: the
    state freezes with every previously forced value intact.
    """
    intervals = state.intervals
    trace: dict[tuple[AtomRef, str], BoundEvent] = state._trace

    def apply_bound(
        ref: AtomRef, side: str, value: Fraction, cidx: int, used
    ) -> bool:
        iv = intervals[ref]
        current = iv.lo if side == "lo" else iv.hi
        better = current is None or (value > current if side == "lo" else value < current)
        if not better:
            return False
        if side == "lo":
            iv.lo = value
        else:
            iv.hi = value
        trace[(ref, side)] = BoundEvent(ref, side, value, cidx, used)
        return True

    for _ in range(max_passes):
        changed = False
        for cidx, c in enumerate(state.constraints):
            lows, highs = _term_bounds(c.terms, intervals)
            lo_sum, lo_missing = _finite_sum(lows)
            hi_sum, hi_missing = _finite_sum(highs)
            if lo_missing == 0 and lo_sum > c.rhs:
                state.status = "contradiction"
                state.certificate = _build_certificate(
                    state, cidx, "min_exceeds_rhs", lo_sum, _used_bounds(c.terms, "min")
                )
                state.propagated = True
                return state
            if c.relation == "eq" and hi_missing == 0 and hi_sum < c.rhs:
                state.status = "contradiction"
                state.certificate = _build_certificate(
                    state, cidx, "max_below_rhs", hi_sum, _used_bounds(c.terms, "max")
                )
                state.propagated = True
                return state
            for pos, (ref, coeff) in enumerate(c.terms):
                others_lo_missing = lo_missing - (1 if lows[pos] is None else 0)
                if others_lo_missing == 0:
                    others_lo = lo_sum - (lows[pos] or 0)
                    bound = (c.rhs - others_lo) / coeff
                    used = tuple(
                        u
                        for t, u in zip(c.terms, _used_bounds(c.terms, "min"))
                        if t[0] != ref
                    )
                    if apply_bound(
                        ref, "hi" if coeff > 0 else "lo", bound, cidx, used
                    ):
                        changed = True
                        lows, highs = _term_bounds(c.terms, intervals)
                        lo_sum, lo_missing = _finite_sum(lows)
                        hi_sum, hi_missing = _finite_sum(highs)
                if c.relation == "eq":
                    others_hi_missing = hi_missing - (1 if highs[pos] is None else 0)
                    if others_hi_missing == 0:
                        others_hi = hi_sum - (highs[pos] or 0)
                        bound = (c.rhs - others_hi) / coeff
                        used = tuple(
                            u
                            for t, u in zip(c.terms, _used_bounds(c.terms, "max"))
                            if t[0] != ref
                        )
                        if apply_bound(
                            ref, "lo" if coeff > 0 else "hi", bound, cidx, used
                        ):
                            changed = True
                            lows, highs = _term_bounds(c.terms, intervals)
                            lo_sum, lo_missing = _finite_sum(lows)
                            hi_sum, hi_missing = _finite_sum(highs)
        if not changed:
            break
    else:
        raise RuntimeError(f"propagation did not converge in {max_passes} passes")

    state.propagated = True
    state.status = (
        "solved" if all(iv.forced() for iv in intervals.values()) else "open"
    )
    return state


def _build_certificate(
    state: DeductionState,
    violated_index: int,
    side: str,
    lhs_bound: Fraction,
    seed_bounds: tuple[tuple[AtomRef, str], ...],
) -> Certificate:
    """Justification closure of the bounds that make the constraint infeasible."""
    trace = state._trace
    constraint_indices = {violated_index}
    events: list[BoundEvent] = []
    seen: set[tuple[AtomRef, str]] = set()
    queue = list(seed_bounds)
    while queue:
        key = queue.pop(0)
        if key in seen:
            continue
        seen.add(key)
        event = trace.get(key)
        if event is None:
            continue
        events.append(event)
        constraint_indices.add(event.constraint_index)
        queue.extend(event.used)
    return Certificate(
        violated_index=violated_index,
        side=side,
        lhs_bound=lhs_bound,
        rhs=state.constraints[violated_index].rhs,
        constraint_indices=tuple(sorted(constraint_indices)),
        events=tuple(events),
    )


def replay_certificate(state: DeductionState) -> bool:
    """Re-run propagation with only the certificate's constraints; the same
    contradiction must reappear for the certificate to be sound."""
    cert = state.certificate
    if cert is None:
        return False
    subset = tuple(state.constraints[i] for i in cert.constraint_indices)
    fresh = DeductionState(
        source_names=state.source_names,
        target_name=state.target_name,
        constraints=subset,
        intervals={ref: Interval() for ref in state.intervals},
        mutual_info=dict(state.mutual_info),
        mode=state.mode,
        firings=state.firings,
    )
    propagate(fresh)
    return fresh.status == "contradiction"


def assignment_violations(
    state: DeductionState, values: dict[AtomRef, Fraction]
) -> tuple[tuple[Constraint, Fraction], ...]:
    """Constraints a full point assignment fails, with the offending sums."""
    out = []
    for c in state.constraints:
        lhs = sum((coeff * values[ref] for ref, coeff in c.terms), Fraction(0))
        if (c.relation == "eq" and lhs != c.rhs) or (
            c.relation == "le" and lhs > c.rhs
        ):
            out.append((c, lhs))
    return tuple(out)


def wesp_report(state: DeductionState) -> WespReport:
    """Compare I(S;T) with the forced lower bound of the full-scope atom sum."""
    if not state.propagated:
        raise StateStillOpen("run propagate() before requesting a report")
    lower = Fraction(0)
    for ref in state.full_scope_refs():
        lo = state.intervals[ref].lo
        if lo is not None and lo > 0:
            lower += lo
    total_mi = state.mutual_info[(1, 2, 3)]
    gap = lower - total_mi
    violated = gap > 0
    return WespReport(
        mutual_information=total_mi,
        atom_lower_bound=lower,
        gap=gap if violated else Fraction(0),
        violated=violated,
        certificate=state.certificate,
    )
