"""Shared fixtures: reference systems and a seeded random dyadic corpus."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest

from infodecomp import JointDistribution, build_system1, build_system2

CORPUS_SEED = 20260809
CORPUS_SIZE = 1000
CORPUS_DENOMINATOR = 64

SOURCES_ABC = (("A",), ("B",), ("C",))


def random_dyadic_system(rng: random.Random, max_alphabet: int = 4) -> JointDistribution:
    """A 3-variable distribution with masses on a 1/64 dyadic grid."""
    sizes = [rng.randint(2, max_alphabet) for _ in range(3)]
    cells = list(product(*(range(k) for k in sizes)))
    chosen = rng.sample(cells, rng.randint(1, min(len(cells), CORPUS_DENOMINATOR)))
    counts = [1] * len(chosen)
    for _ in range(CORPUS_DENOMINATOR - len(chosen)):
        counts[rng.randrange(len(chosen))] += 1
    entries = [
        (cell, Fraction(count, CORPUS_DENOMINATOR))
        for cell, count in zip(chosen, counts)
    ]
    return JointDistribution.from_pmf(
        entries, ["A", "B", "C"], [list(range(k)) for k in sizes]
    )


@pytest.fixture(scope="session")
def corpus() -> list[JointDistribution]:
    rng = random.Random(CORPUS_SEED)
    return [random_dyadic_system(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def system1():
    return build_system1()


@pytest.fixture(scope="session")
def system1_subtargets():
    return build_system1(with_subtargets=True)


@pytest.fixture(scope="session")
def system2():
    return build_system2()


def set_partitions(items: list):
    """All partitions of a list, for brute-force feasibility oracles."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def gk_bruteforce(d: JointDistribution, sources) -> list[Fraction]:
    """Best-entropy feasible common variable by enumerating coarsenings.

    Any Q with H(Q|S_i) = 0 for all i is a function of the first source, so
    partitions of its observed values cover every candidate up to relabeling.
    Returns the sorted block masses of the best feasible partition.
    """
    first = d.resolve(sources[0])
    others = [d.resolve(s) for s in sources[1:]]
    observed = sorted({tuple(o[i] for i in first) for o, _ in d.support})
    best_masses: list[Fraction] | None = None
    best_entropy = -1.0
    from infodecomp.dist import entropy_of_masses

    for partition in set_partitions(observed):
        label = {v: bi for bi, block in enumerate(partition) for v in block}
        feasible = True
        for idx in others:
            seen: dict[tuple, int] = {}
            for outcome, _ in d.support:
                key = tuple(outcome[i] for i in idx)
                lab = label[tuple(outcome[i] for i in first)]
                if seen.setdefault(key, lab) != lab:
                    feasible = False
                    break
            if not feasible:
                break
        if not feasible:
            continue
        masses: dict[int, Fraction] = {}
        for outcome, p in d.support:
            lab = label[tuple(outcome[i] for i in first)]
            masses[lab] = masses.get(lab, Fraction(0)) + p
        h = entropy_of_masses(sorted(masses.values()))
        if h > best_entropy:
            best_entropy = h
            best_masses = sorted(masses.values())
    assert best_masses is not None  # the one-block partition is always feasible
    return best_masses
