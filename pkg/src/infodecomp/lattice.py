"""Antichains of source subsets and their decomposition lattices.

An antichain is a nonempty set of nonempty source-index sets, none of which
contains another. Antichains are stored canonically (each element sorted,
elements ordered by size then lexicographically) over 1-based integer source
indices; binding indices to actual variables happens at the system level.

Two lattices are provided: the full lattice of all antichains over n sources
(n capped at 4; node counts 1, 4, 18, 166), and the half lattice over exactly
3 sources consisting of the 10 antichains that contain at least one singleton.
The order is: beta ≼ alpha iff every element of alpha has a subset in beta.
Down-sets are the only traversal the decomposition sum rules need, so the
order is computed on demand and memoized per lattice (safe under concurrent
readers: the cache is a plain dict only ever written with idempotent values).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import NotANode, TooManySources, UnsupportedArity

MAX_SOURCES = 4


@dataclass(frozen=True)
class Antichain:
    """Canonical antichain of nonempty source-index sets."""

    elements: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, elements: Iterable[Iterable[int]]) -> "Antichain":
        """Canonicalize and validate a collection of index sets."""
        sets = {tuple(sorted(set(e))) for e in elements}
        if not sets:
            raise ValueError("antichain must be nonempty")
        if any(not e for e in sets):
            raise ValueError("antichain elements must be nonempty")
        if any(i < 1 for e in sets for i in e):
            raise ValueError("source indices are 1-based")
        for a, b in combinations(sets, 2):
            if set(a) <= set(b) or set(b) <= set(a):
                raise ValueError(f"elements {a} and {b} violate the antichain condition")
        return cls(tuple(sorted(sets, key=lambda e: (len(e), e))))

    def contains_singleton(self) -> bool:
        return any(len(e) == 1 for e in self.elements)

    def relabel(self, mapping: dict[int, int]) -> "Antichain":
        """Rewrite source indices, e.g. to embed a subsystem antichain."""
        return Antichain.of(tuple(mapping[i] for i in e) for e in self.elements)

    def __str__(self) -> str:
        return format_antichain(self)


def leq(beta: Antichain, alpha: Antichain) -> bool:
    """beta ≼ alpha iff for every A in alpha some B in beta satisfies B ⊆ A."""
    alpha_sets = [set(a) for a in alpha.elements]
    beta_sets = [set(b) for b in beta.elements]
    return all(any(b <= a for b in beta_sets) for a in alpha_sets)


def format_antichain(antichain: Antichain) -> str:
    """Render in index notation, e.g. ``{{1}{23}}``."""
    inner = "".join("{" + "".join(str(i) for i in e) + "}" for e in antichain.elements)
    return "{" + inner + "}"


_ANTICHAIN_RE = re.compile(r"^\{(\{\d+\})+\}$")


def parse_antichain(text: str) -> Antichain:
    """Inverse of :func:`format_antichain`; accepts ``{{1}{23}}`` syntax."""
    s = text.strip().replace(" ", "")
    if not _ANTICHAIN_RE.match(s):
        raise ValueError(f"bad antichain syntax: {text!r}")
    elements = [
        tuple(int(ch) for ch in grp) for grp in re.findall(r"\{(\d+)\}", s[1:-1])
    ]
    return Antichain.of(elements)


@dataclass(frozen=True)
class AntichainLattice:
    """All antichains over sources 1..n with the ≼ order precomputable on demand."""

    n: int
    kind: str  # "full" or "half"
    nodes: tuple[Antichain, ...]
    _node_set: frozenset = field(init=False, repr=False, compare=False, hash=False)
    _downsets: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_node_set", frozenset(self.nodes))
        object.__setattr__(self, "_downsets", {})

    def _require_node(self, antichain: Antichain) -> None:
        if antichain not in self._node_set:
            raise NotANode(f"{antichain} is not a node of this {self.kind} lattice")

    def leq(self, beta: Antichain, alpha: Antichain) -> bool:
        self._require_node(beta)
        self._require_node(alpha)
        return leq(beta, alpha)

    def downset(self, alpha: Antichain) -> tuple[Antichain, ...]:
        """All nodes beta with beta ≼ alpha, alpha included."""
        self._require_node(alpha)
        cached = self._downsets.get(alpha)
        if cached is None:
            cached = tuple(b for b in self.nodes if leq(b, alpha))
            self._downsets[alpha] = cached
        return cached

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, antichain: Antichain) -> bool:
        return antichain in self._node_set


def enumerate_full(n: int) -> AntichainLattice:
    """Enumerate every antichain of nonempty subsets of {1..n}."""
    if n < 1:
        raise ValueError("need at least one source")
    if n > MAX_SOURCES:
        raise TooManySources(
            f"{n} sources refused: the antichain count explodes beyond n={MAX_SOURCES}"
        )
    subsets = []
    for size in range(1, n + 1):
        subsets.extend(combinations(range(1, n + 1), size))
    nodes = []
    for r in range(1, len(subsets) + 1):
        for combo in combinations(subsets, r):
            if _is_antichain(combo):
                nodes.append(Antichain.of(combo))
    nodes = sorted(set(nodes), key=lambda a: a.elements)
    return AntichainLattice(n, "full", tuple(nodes))


def enumerate_half(n: int) -> AntichainLattice:
    """The 10 antichains over 3 sources that contain at least one singleton."""
    if n != 3:
        raise UnsupportedArity("the half lattice is defined only for exactly 3 sources")
    full = enumerate_full(3)
    nodes = tuple(a for a in full.nodes if a.contains_singleton())
    return AntichainLattice(3, "half", nodes)


def _is_antichain(subsets) -> bool:
    for a, b in combinations(subsets, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            return False
    return True
