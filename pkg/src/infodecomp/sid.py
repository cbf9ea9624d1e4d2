"""Closed-form system information decomposition for three variables.

The ten atoms over the half lattice are pinned by nine linear sum rules once
a single atom — the three-way redundancy — is supplied. The closed form
solves that system identically in the seven joint entropies and the injected
redundancy, so the construction is parametric in the redundancy measure:
the Gács-Körner value from :mod:`infodecomp.redundancy` is the default, but
any alternative can be injected without touching the solver.

Atom values may be negative; they are reported, never clamped. All algebra
runs on exact rationals (floats embed exactly), so the sum-rule checks on
dyadic systems are exact equalities rather than tolerance comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dist import DEFAULT_TOLERANCE, GroupLike, JointDistribution
from .errors import AxiomViolated, NegativeRedundancy, RankDeficient, ResidualTooLarge
from .lattice import Antichain, enumerate_half
from .redundancy import common_partition

Number = Fraction | float


def _exact(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


#: Atom ordering of the unknown vector in the 9x10 summation-rule system.
ATOM_ORDER: tuple[Antichain, ...] = (
    Antichain.of([(1,), (2,), (3,)]),
    Antichain.of([(1,), (2,)]),
    Antichain.of([(1,), (3,)]),
    Antichain.of([(2,), (3,)]),
    Antichain.of([(1,), (2, 3)]),
    Antichain.of([(2,), (1, 3)]),
    Antichain.of([(3,), (1, 2)]),
    Antichain.of([(1,)]),
    Antichain.of([(2,)]),
    Antichain.of([(3,)]),
)

#: Coefficients of the nine sum rules over ATOM_ORDER. Rows 1-3 decompose
#: single-variable entropies, rows 4-6 pair entropies, rows 7-9 the joint
#: entropy with each two-versus-one synergy atom excluded in turn.
SUM_RULE_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 1, 1, 0, 1, 0, 0, 1, 0, 0),
    (1, 1, 0, 1, 0, 1, 0, 0, 1, 0),
    (1, 0, 1, 1, 0, 0, 1, 0, 0, 1),
    (1, 1, 1, 1, 1, 1, 0, 1, 1, 0),
    (1, 1, 1, 1, 1, 0, 1, 1, 0, 1),
    (1, 1, 1, 1, 0, 1, 1, 0, 1, 1),
    (1, 1, 1, 1, 1, 1, 0, 1, 1, 1),
    (1, 1, 1, 1, 1, 0, 1, 1, 1, 1),
    (1, 1, 1, 1, 0, 1, 1, 1, 1, 1),
)

_SYNERGY_ATOMS = ATOM_ORDER[4:7]


@dataclass(frozen=True)
class EntropyVector:
    """The seven joint entropies of a three-variable system, in bits."""

    h1: Number
    h2: Number
    h3: Number
    h12: Number
    h13: Number
    h23: Number
    h123: Number

    @classmethod
    def from_distribution(
        cls, d: JointDistribution, s1: GroupLike, s2: GroupLike, s3: GroupLike
    ) -> "EntropyVector":
        """Measure the seven entropies, exactly where the masses allow it."""
        groups = [d.resolve(s) for s in (s1, s2, s3)]

        def h(*which: int) -> Number:
            sel = tuple(sorted({i for w in which for i in groups[w]}))
            exact = d.entropy_exact(sel)
            return exact if exact is not None else d.entropy(sel)

        return cls(h(0), h(1), h(2), h(0, 1), h(0, 2), h(1, 2), h(0, 1, 2))

    def rhs(self) -> tuple[Fraction, ...]:
        """Right-hand sides of the nine sum rules."""
        vals = [self.h1, self.h2, self.h3, self.h12, self.h13, self.h23]
        vals += [self.h123] * 3
        return tuple(_exact(v) for v in vals)

    def validate(self, tol: float = DEFAULT_TOLERANCE) -> None:
        """Check monotonicity and submodularity over all subset pairs."""
        h = {
            frozenset(): Fraction(0),
            frozenset({1}): _exact(self.h1),
            frozenset({2}): _exact(self.h2),
            frozenset({3}): _exact(self.h3),
            frozenset({1, 2}): _exact(self.h12),
            frozenset({1, 3}): _exact(self.h13),
            frozenset({2, 3}): _exact(self.h23),
            frozenset({1, 2, 3}): _exact(self.h123),
        }
        for a in h:
            for b in h:
                if a <= b and h[a] > h[b] + tol:
                    raise ValueError(f"entropy not monotone: H{set(a)} > H{set(b)}")
                if h[a | b] + h[a & b] > h[a] + h[b] + tol:
                    raise ValueError(
                        f"entropy not submodular on {set(a)}, {set(b)}"
                    )


@dataclass(frozen=True)
class SIAtomTable:
    """The ten decomposition atoms of a three-variable system."""

    atoms: tuple[tuple[Antichain, Fraction], ...]
    red: Fraction

    def value(self, antichain: Antichain) -> Fraction:
        for key, v in self.atoms:
            if key == antichain:
                return v
        raise KeyError(f"{antichain} is not a half-lattice atom")

    def as_dict(self) -> dict[Antichain, Fraction]:
        return dict(self.atoms)

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(v for _, v in self.atoms)

    def total(self) -> Fraction:
        return sum(self.vector(), Fraction(0))

    def synergy_atoms(self) -> tuple[tuple[Antichain, Fraction], ...]:
        return tuple((a, self.value(a)) for a in _SYNERGY_ATOMS)


def si_atoms(
    ev: EntropyVector, red: Number, tol: float = DEFAULT_TOLERANCE
) -> SIAtomTable:
    """Solve all ten atoms from the entropy vector and an injected redundancy.

    The closed form:

        psi({1}{2}{3})  = red
        psi({i}{j})     = H(Si) + H(Sj) - H(Si,Sj) - red
        psi({i}{jk})    = -H(S1) - H(S2) - H(S3) + H(S1,S2) + H(S1,S3)
                          + H(S2,S3) - H(S1,S2,S3) + red      (same for all i)
        psi({i})        = H(S1,S2,S3) - H(Sj,Sk)
    """
    ev.validate(tol)
    r = _exact(red)
    if r < 0:
        raise NegativeRedundancy(f"injected redundancy {red} is negative")
    h1, h2, h3 = _exact(ev.h1), _exact(ev.h2), _exact(ev.h3)
    h12, h13, h23 = _exact(ev.h12), _exact(ev.h13), _exact(ev.h23)
    h123 = _exact(ev.h123)
    synergy = -h1 - h2 - h3 + h12 + h13 + h23 - h123 + r
    values = (
        r,
        h1 + h2 - h12 - r,
        h1 + h3 - h13 - r,
        h2 + h3 - h23 - r,
        synergy,
        synergy,
        synergy,
        h123 - h23,
        h123 - h13,
        h123 - h12,
    )
    return SIAtomTable(tuple(zip(ATOM_ORDER, values)), r)


def decompose(
    d: JointDistribution,
    s1: GroupLike,
    s2: GroupLike,
    s3: GroupLike,
    red: Number | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> SIAtomTable:
    """Measure entropies, default the redundancy to the common-partition value,
    and solve the atom table."""
    ev = EntropyVector.from_distribution(d, s1, s2, s3)
    if red is None:
        part = common_partition(d, [s1, s2, s3])
        red = part.value_exact if part.value_exact is not None else part.value
    return si_atoms(ev, red, tol)


def exact_rank(matrix: Sequence[Sequence[Number]]) -> int:
    """Row rank by Gaussian elimination over exact rationals."""
    rows = [[_exact(x) for x in row] for row in matrix]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        head = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col] / head
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


@dataclass(frozen=True)
class LinearSystemReport:
    residuals: tuple[Fraction, ...]
    rank: int
    max_residual: float


def verify_linear_system(
    ev: EntropyVector, table: SIAtomTable, tol: float = DEFAULT_TOLERANCE
) -> LinearSystemReport:
    """Multiply the sum-rule matrix by the atom vector and compare with the
    entropy right-hand sides; also confirm the matrix has full row rank."""
    rank = exact_rank(SUM_RULE_MATRIX)
    if rank != 9:
        raise RankDeficient(f"sum-rule matrix rank {rank}, expected 9")
    x = table.vector()
    rhs = ev.rhs()
    residuals = tuple(
        sum((c * v for c, v in zip(row, x)), Fraction(0)) - y
        for row, y in zip(SUM_RULE_MATRIX, rhs)
    )
    worst = max(abs(float(r)) for r in residuals)
    if worst > tol:
        raise ResidualTooLarge(f"max sum-rule residual {worst} exceeds {tol}")
    return LinearSystemReport(residuals, rank, worst)


@dataclass(frozen=True)
class SumRuleCheck:
    label: str
    lhs: Fraction
    rhs: Fraction

    @property
    def residual(self) -> Fraction:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class SumRuleReport:
    table: SIAtomTable
    per_variable: tuple[SumRuleCheck, ...]
    per_pair: tuple[SumRuleCheck, ...]
    total: tuple[SumRuleCheck, ...]
    sigma: Fraction

    def all_checks(self) -> tuple[SumRuleCheck, ...]:
        return self.per_variable + self.per_pair + self.total


def check_sum_rules(
    d: JointDistribution,
    s1: GroupLike,
    s2: GroupLike,
    s3: GroupLike,
    red: Number | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> SumRuleReport:
    """Verify every entropy decomposition rule of the half lattice.

    Per-variable: H(Sk) equals the sum over the down-set of {{k}}.
    Per-pair: H(Si,Sk) equals the sum of atoms dominated by {{i}} or {{k}}.
    Total: H(S1,S2,S3) equals the sum of all ten atoms minus each
    two-versus-one synergy atom in turn, for all three exclusion choices.
    Raises :class:`AxiomViolated` naming the first rule whose residual
    exceeds the tolerance.
    """
    ev = EntropyVector.from_distribution(d, s1, s2, s3)
    table = (
        si_atoms(ev, red, tol)
        if red is not None
        else decompose(d, s1, s2, s3, tol=tol)
    )
    half = enumerate_half(3)
    atom_map = table.as_dict()
    singles = [Antichain.of([(k,)]) for k in (1, 2, 3)]
    h = [_exact(v) for v in (ev.h1, ev.h2, ev.h3)]
    per_variable = tuple(
        SumRuleCheck(
            f"H(S{k + 1}) down-set sum",
            sum((atom_map[b] for b in half.downset(singles[k])), Fraction(0)),
            h[k],
        )
        for k in range(3)
    )
    pair_h = {
        (1, 2): _exact(ev.h12),
        (1, 3): _exact(ev.h13),
        (2, 3): _exact(ev.h23),
    }
    per_pair = []
    for i, k in ((1, 2), (1, 3), (2, 3)):
        union = set(half.downset(singles[i - 1])) | set(half.downset(singles[k - 1]))
        per_pair.append(
            SumRuleCheck(
                f"H(S{i},S{k}) dominated-atom sum",
                sum((atom_map[b] for b in union), Fraction(0)),
                pair_h[(i, k)],
            )
        )
    sigma = table.total()
    total = tuple(
        SumRuleCheck(
            f"H(S1,S2,S3) = sigma - psi({atom})",
            sigma - atom_map[atom],
            _exact(ev.h123),
        )
        for atom in _SYNERGY_ATOMS
    )
    report = SumRuleReport(table, per_variable, tuple(per_pair), total, sigma)
    for check in report.all_checks():
        if abs(float(check.residual)) > tol:
            raise AxiomViolated(check.label, float(check.residual))
    return report


@dataclass(frozen=True)
class SynergySumResult:
    synergy_sum: Fraction
    joint_entropy: Fraction
    violates_wesp: bool


def synergy_sum_check(
    d: JointDistribution,
    s1: GroupLike,
    s2: GroupLike,
    s3: GroupLike,
    red: Number | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> SynergySumResult:
    """Sum the three two-versus-one synergy atoms against the joint entropy.

    A sum strictly above the joint entropy is the whole-versus-parts
    violation: the decomposed parts carry more than the whole.
    """
    table = decompose(d, s1, s2, s3, red=red, tol=tol)
    total = sum((v for _, v in table.synergy_atoms()), Fraction(0))
    ev = EntropyVector.from_distribution(d, s1, s2, s3)
    h = _exact(ev.h123)
    return SynergySumResult(total, h, float(total) > float(h) + tol)


@dataclass(frozen=True)
class PairDecomposition:
    """Two-variable decomposition: shared, and per-variable exclusive parts."""

    shared: Number  # I(Si;Sk)
    only_first: Number  # H(Si|Sk)
    only_second: Number  # H(Sk|Si)


def pair_decomposition(
    d: JointDistribution, a: GroupLike, b: GroupLike
) -> PairDecomposition:
    ia, ib = d.resolve(a), d.resolve(b)
    return PairDecomposition(
        shared=d.mutual_information(ia, ib),
        only_first=d.conditional_entropy(ia, ib),
        only_second=d.conditional_entropy(ib, ia),
    )


@dataclass(frozen=True)
class SubsystemComparison:
    pair: tuple[int, int]
    from_full_table: Fraction  # psi({i}{j}{k}) + psi({i}{k})
    from_marginal: float  # shared part of the recomputed pair table

    @property
    def residual(self) -> float:
        return float(self.from_full_table) - self.from_marginal


def subsystem_comparisons(
    d: JointDistribution,
    s1: GroupLike,
    s2: GroupLike,
    s3: GroupLike,
    red: Number | None = None,
) -> tuple[SubsystemComparison, ...]:
    """Compare pair information reconstructed from the full table against
    pair tables recomputed from marginals; reports both sides."""
    table = decompose(d, s1, s2, s3, red=red)
    groups = (s1, s2, s3)
    out = []
    for i, k in ((1, 2), (1, 3), (2, 3)):
        reconstructed = table.red + table.value(Antichain.of([(i,), (k,)]))
        pair = pair_decomposition(d, groups[i - 1], groups[k - 1])
        out.append(SubsystemComparison((i, k), reconstructed, pair.shared))
    return tuple(out)
