"""Operational redundancy via the Gács-Körner common partition.

The three-way redundancy of source groups is the entropy of the maximal
variable Q that each source determines (H(Q|S_i) = 0 for every i). Any such
Q induces a partition of the joint support that is a union of value-classes
of every source, so the finest feasible partition — the connected components
of the "agrees on some source value" graph — realizes the maximizer, and
computing it is a single union-find pass instead of a search over alphabets.

Pair redundancy is deliberately plain mutual information, not the two-source
common information.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dist import (
    GroupLike,
    JointDistribution,
    Outcome,
    entropy_of_masses,
    exact_entropy_of_masses,
)
from .errors import EmptySupport


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Lower index wins so block representatives are stable.
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class CommonPartition:
    """Support partition realizing the maximal common variable Q.

    Blocks are ordered by their smallest outcome in canonical support order,
    so repeated runs produce identical output. `value` is H(Q) in bits;
    `value_exact` is its exact rational form when all block masses are
    powers of two.
    """

    blocks: tuple[tuple[Outcome, ...], ...]
    block_probabilities: tuple[Fraction, ...]
    value: float
    value_exact: Fraction | None


def common_partition(
    d: JointDistribution, sources: list[GroupLike]
) -> CommonPartition:
    """Connected components of support outcomes agreeing on some source value."""
    if len(sources) < 2:
        raise ValueError("need at least two source groups")
    if not d.support:
        raise EmptySupport("distribution has empty support")
    resolved = [d.resolve(g) for g in sources]
    outcomes = [outcome for outcome, _ in d.support]
    masses = [p for _, p in d.support]
    uf = _UnionFind(len(outcomes))
    for indices in resolved:
        by_value: dict[Outcome, int] = {}
        for pos, outcome in enumerate(outcomes):
            key = tuple(outcome[i] for i in indices)
            first = by_value.setdefault(key, pos)
            if first != pos:
                uf.union(first, pos)
    members: dict[int, list[int]] = {}
    for pos in range(len(outcomes)):
        members.setdefault(uf.find(pos), []).append(pos)
    ordered_roots = sorted(members, key=lambda root: min(members[root]))
    blocks = tuple(
        tuple(outcomes[pos] for pos in sorted(members[root])) for root in ordered_roots
    )
    probs = tuple(
        sum((masses[pos] for pos in members[root]), Fraction(0))
        for root in ordered_roots
    )
    return CommonPartition(
        blocks=blocks,
        block_probabilities=probs,
        value=entropy_of_masses(sorted(probs)),
        value_exact=exact_entropy_of_masses(list(probs)),
    )


def red3(d: JointDistribution, s1: GroupLike, s2: GroupLike, s3: GroupLike) -> float:
    """Three-way redundancy: H(Q) of the common partition of the sources."""
    return common_partition(d, [s1, s2, s3]).value


def red2(d: JointDistribution, s1: GroupLike, s2: GroupLike) -> float:
    """Pair redundancy: exactly the mutual information of the two groups."""
    return d.mutual_information(s1, s2)
