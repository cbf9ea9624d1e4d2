"""Exact finite joint distributions and Shannon-measure primitives.

Probabilities are :class:`fractions.Fraction` end to end; entropies are
floats in bits (log base 2) compared with a single global tolerance
(:data:`DEFAULT_TOLERANCE`). Determinism and independence checks are exact
support checks, never tolerance checks. Whenever every marginal mass is a
power-of-two reciprocal, an exact rational entropy is available through
:func:`exact_entropy_of_masses`, which is what makes integer bit counts on
dyadic systems exact rather than approximate.

All types are immutable after construction and safe to share across threads;
all operations are pure functions of their inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    AlphabetViolation,
    CyclicDefinition,
    DuplicateOutcome,
    EmptySupport,
    InvalidProbability,
    SumNotOne,
    SupportTooLarge,
    UnknownBit,
    UnknownVariable,
)

#: Global comparison tolerance for floating entropy values, in bits.
DEFAULT_TOLERANCE = 1e-9

#: Default cap on enumerated support size.
DEFAULT_SUPPORT_CAP = 1 << 20

Value = Union[int, str, tuple]
Outcome = tuple
GroupLike = Union[str, int, Iterable[Union[str, int]]]


@dataclass(frozen=True)
class VariableId:
    """A named variable at a fixed position in the system ordering."""

    name: str
    index: int


def entropy_of_masses(masses: Sequence[Fraction]) -> float:
    """Shannon entropy in bits of a normalized list of positive masses."""
    if not masses:
        raise EmptySupport("no masses to take entropy of")
    first = masses[0]
    if all(p == first for p in masses):
        m = len(masses)
        if m & (m - 1) == 0:
            return float(m.bit_length() - 1)
        return math.log2(m)
    total = 0.0
    # -p*log2(p) accumulated from exact numerator/denominator logs; masses
    # are sorted by the caller when order-independent output matters.
    for p in masses:
        total += float(p) * (math.log2(p.denominator) - math.log2(p.numerator))
    return total


def exact_entropy_of_masses(masses: Sequence[Fraction]) -> Fraction | None:
    """Exact entropy when every mass is 2**-k; None otherwise.

    For such masses -p*log2(p) = p*k is rational, so the sum is exact. This
    covers non-uniform dyadic mixtures such as {1/2, 1/4, 1/4}.
    """
    total = Fraction(0)
    for p in masses:
        den = p.denominator
        if p.numerator != 1 or den & (den - 1) != 0:
            return None
        total += p * (den.bit_length() - 1)
    return total


def _parse_probability(value) -> Fraction:
    if isinstance(value, float):
        raise InvalidProbability(
            f"probability {value!r} is a float; pass a Fraction, int or 'num/den' string"
        )
    try:
        p = Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidProbability(f"cannot parse probability {value!r}") from exc
    if p < 0:
        raise InvalidProbability(f"negative probability {p}")
    return p


@dataclass(frozen=True)
class JointDistribution:
    """Exact pmf over named finite-alphabet variables.

    `support` holds only positive-mass outcomes, sorted canonically by
    per-variable alphabet position; probabilities sum to exactly one.
    """

    variables: tuple[VariableId, ...]
    alphabets: tuple[tuple[Value, ...], ...]
    support: tuple[tuple[Outcome, Fraction], ...]
    _name_to_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _prob: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_name_to_index", {v.name: v.index for v in self.variables}
        )
        object.__setattr__(self, "_prob", dict(self.support))

    # -- construction ---------------------------------------------------

    @classmethod
    def from_pmf(
        cls,
        entries: Iterable[tuple[Sequence[Value], object]],
        variables: Sequence[str],
        alphabets: Sequence[Sequence[Value]],
        max_support: int = DEFAULT_SUPPORT_CAP,
    ) -> "JointDistribution":
        """Build a validated distribution from (outcome, probability) entries.

        Zero-mass outcomes are stripped; duplicates, alphabet violations and
        a total mass different from one are rejected.
        """
        names = list(variables)
        if len(set(names)) != len(names):
            raise AlphabetViolation(f"duplicate variable names in {names}")
        if len(alphabets) != len(names):
            raise AlphabetViolation("one alphabet required per variable")
        var_ids = tuple(VariableId(n, i) for i, n in enumerate(names))
        alpha = tuple(tuple(a) for a in alphabets)
        for vid, a in zip(var_ids, alpha):
            if len(set(a)) != len(a) or not a:
                raise AlphabetViolation(f"alphabet of {vid.name} empty or has repeats")

        pmf: dict[Outcome, Fraction] = {}
        for outcome, prob in entries:
            p = _parse_probability(prob)
            out = tuple(outcome)
            if len(out) != len(var_ids):
                raise AlphabetViolation(
                    f"outcome {out} has arity {len(out)}, expected {len(var_ids)}"
                )
            for vid, a, value in zip(var_ids, alpha, out):
                if value not in a:
                    raise AlphabetViolation(
                        f"value {value!r} of {vid.name} not in its alphabet"
                    )
            if out in pmf:
                raise DuplicateOutcome(f"outcome {out} listed twice")
            pmf[out] = p
        pmf = {out: p for out, p in pmf.items() if p > 0}
        if not pmf:
            raise EmptySupport("pmf has no positive-mass outcome")
        if len(pmf) > max_support:
            raise SupportTooLarge(f"support size {len(pmf)} exceeds cap {max_support}")
        total = sum(pmf.values())
        if total != 1:
            raise SumNotOne(f"probabilities sum to {total}, not 1")

        pos = [{v: i for i, v in enumerate(a)} for a in alpha]
        ordered = sorted(
            pmf.items(), key=lambda item: tuple(pos[i][v] for i, v in enumerate(item[0]))
        )
        return cls(var_ids, alpha, tuple(ordered))

    # -- variable resolution ---------------------------------------------

    def resolve(self, group: GroupLike) -> tuple[int, ...]:
        """Resolve a group selector to sorted, deduplicated variable indices.

        Accepts a single name/index or an iterable of them.
        """
        if isinstance(group, (str, int)):
            group = (group,)
        indices = set()
        for item in group:
            if isinstance(item, VariableId):
                item = item.name
            if isinstance(item, int):
                if not 0 <= item < len(self.variables):
                    raise UnknownVariable(f"variable index {item} out of range")
                indices.add(item)
            elif isinstance(item, str):
                if item not in self._name_to_index:
                    raise UnknownVariable(f"no variable named {item!r}")
                indices.add(self._name_to_index[item])
            else:
                raise UnknownVariable(f"bad variable selector {item!r}")
        if not indices:
            raise UnknownVariable("empty variable group")
        return tuple(sorted(indices))

    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    # -- core operations --------------------------------------------------

    def _project_masses(self, indices: tuple[int, ...]) -> dict[Outcome, Fraction]:
        masses: dict[Outcome, Fraction] = {}
        for outcome, p in self.support:
            key = tuple(outcome[i] for i in indices)
            masses[key] = masses.get(key, Fraction(0)) + p
        return masses

    def marginal(self, group: GroupLike) -> "JointDistribution":
        """Exact marginal onto a nonempty subset of variables."""
        indices = self.resolve(group)
        masses = self._project_masses(indices)
        names = [self.variables[i].name for i in indices]
        alphabets = [self.alphabets[i] for i in indices]
        return JointDistribution.from_pmf(masses.items(), names, alphabets)

    def entropy(self, group: GroupLike) -> float:
        """H(group) in bits; exact integer for equal dyadic masses."""
        masses = self._project_masses(self.resolve(group))
        return entropy_of_masses(sorted(masses.values()))

    def entropy_exact(self, group: GroupLike) -> Fraction | None:
        """Exact rational H(group) when all marginal masses are 2**-k."""
        masses = self._project_masses(self.resolve(group))
        return exact_entropy_of_masses(list(masses.values()))

    def conditional_entropy(self, group: GroupLike, given: GroupLike = ()) -> float:
        """H(group | given) = H(group ∪ given) - H(given)."""
        g = self.resolve(group)
        if _is_empty_selector(given):
            return self.entropy(g)
        cond = self.resolve(given)
        joint = tuple(sorted(set(g) | set(cond)))
        return self.entropy(joint) - self.entropy(cond)

    def mutual_information(self, a: GroupLike, b: GroupLike) -> float:
        """I(a;b) = H(a) + H(b) - H(a ∪ b)."""
        ia, ib = self.resolve(a), self.resolve(b)
        joint = tuple(sorted(set(ia) | set(ib)))
        return self.entropy(ia) + self.entropy(ib) - self.entropy(joint)

    def mutual_information_exact(self, a: GroupLike, b: GroupLike) -> Fraction | None:
        """Exact I(a;b) when all three entropies have exact dyadic form."""
        ia, ib = self.resolve(a), self.resolve(b)
        joint = tuple(sorted(set(ia) | set(ib)))
        ha = self.entropy_exact(ia)
        hb = self.entropy_exact(ib)
        hab = self.entropy_exact(joint)
        if ha is None or hb is None or hab is None:
            return None
        return ha + hb - hab

    def is_deterministic(self, group: GroupLike, given: GroupLike = ()) -> bool:
        """True iff H(group | given) = 0, checked exactly on the support."""
        g = self.resolve(group)
        cond = () if _is_empty_selector(given) else self.resolve(given)
        seen: dict[Outcome, Outcome] = {}
        for outcome, _ in self.support:
            key = tuple(outcome[i] for i in cond)
            val = tuple(outcome[i] for i in g)
            if seen.setdefault(key, val) != val:
                return False
        return True

    def is_independent(self, a: GroupLike, b: GroupLike) -> bool:
        """True iff the joint pmf of a and b factorizes exactly."""
        ia, ib = self.resolve(a), self.resolve(b)
        if set(ia) & set(ib):
            return False
        joint = tuple(sorted(set(ia) | set(ib)))
        pa = self._project_masses(ia)
        pb = self._project_masses(ib)
        pab = self._project_masses(joint)
        # Rebuild each joint key from its a-part and b-part.
        for va, mass_a in pa.items():
            for vb, mass_b in pb.items():
                parts = {}
                parts.update(zip(ia, va))
                parts.update(zip(ib, vb))
                key = tuple(parts[i] for i in joint)
                if pab.get(key, Fraction(0)) != mass_a * mass_b:
                    return False
        return True

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variable_names()),
            "alphabets": [[_encode_value(v) for v in a] for a in self.alphabets],
            "pmf": [
                {
                    "outcome": [_encode_value(v) for v in outcome],
                    "p": f"{p.numerator}/{p.denominator}",
                }
                for outcome, p in self.support
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "JointDistribution":
        try:
            variables = list(data["variables"])
            alphabets = [[_decode_value(v) for v in a] for a in data["alphabets"]]
            entries = [
                ([_decode_value(v) for v in row["outcome"]], row["p"])
                for row in data["pmf"]
            ]
        except (KeyError, TypeError) as exc:
            raise AlphabetViolation(f"malformed distribution document: {exc}") from exc
        return cls.from_pmf(entries, variables, alphabets)

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "JointDistribution":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def __iter__(self) -> Iterator[tuple[Outcome, Fraction]]:
        return iter(self.support)


def _is_empty_selector(group: GroupLike) -> bool:
    if isinstance(group, (str, int)):
        return False
    return not tuple(group)


def _encode_value(v: Value):
    if isinstance(v, tuple):
        return [_encode_value(x) for x in v]
    return v


def _decode_value(v):
    if isinstance(v, list):
        return tuple(_decode_value(x) for x in v)
    return v


# --- circuits ----------------------------------------------------------------


@dataclass(frozen=True)
class CircuitSpec:
    """A system built from independent fair bits and XOR-derived bits.

    `free_bits` are independent Bernoulli(1/2) coins. Each entry of
    `xor_defs` derives a new bit as the XOR of previously defined bits.
    `groupings` assembles system variables out of bits; `target` assembles
    the target variable (named ``T``). Variables grouped from several bits
    take tuple values ordered by bit name; single-bit variables take the
    bare bit value.
    """

    free_bits: tuple[str, ...]
    xor_defs: tuple[tuple[str, tuple[str, ...]], ...]
    groupings: tuple[tuple[str, tuple[str, ...]], ...]
    target: tuple[str, ...]

    TARGET_NAME = "T"

    @classmethod
    def create(
        cls,
        free_bits: Sequence[str],
        xor_defs: Mapping[str, Sequence[str]] | Sequence[tuple[str, Sequence[str]]],
        groupings: Mapping[str, Sequence[str]] | Sequence[tuple[str, Sequence[str]]],
        target: Sequence[str],
    ) -> "CircuitSpec":
        xor_items = xor_defs.items() if isinstance(xor_defs, Mapping) else xor_defs
        group_items = groupings.items() if isinstance(groupings, Mapping) else groupings
        return cls(
            tuple(free_bits),
            tuple((name, tuple(ops)) for name, ops in xor_items),
            tuple((name, tuple(bits)) for name, bits in group_items),
            tuple(target),
        )

    def __post_init__(self):
        defined = list(self.free_bits)
        if len(set(defined)) != len(defined):
            raise AlphabetViolation("duplicate free bit names")
        all_names = set(defined) | {name for name, _ in self.xor_defs}
        for name, operands in self.xor_defs:
            if name in defined:
                raise AlphabetViolation(f"bit {name!r} defined twice")
            for op in operands:
                if op not in all_names:
                    raise UnknownBit(f"operand {op!r} of {name!r} never defined")
                if op not in defined:
                    raise CyclicDefinition(
                        f"bit {name!r} uses {op!r} before it is defined"
                    )
            defined.append(name)
        for var, bits in self.groupings:
            for b in bits:
                if b not in all_names:
                    raise UnknownBit(f"grouped bit {b!r} of {var!r} never defined")
        for b in self.target:
            if b not in all_names:
                raise UnknownBit(f"target bit {b!r} never defined")
        if not self.groupings and not self.target:
            raise AlphabetViolation("circuit defines no variables")
        names = [var for var, _ in self.groupings]
        if len(set(names)) != len(names):
            raise AlphabetViolation("duplicate grouping variable names")
        if self.target and self.TARGET_NAME in names:
            raise AlphabetViolation(
                f"grouping name {self.TARGET_NAME!r} collides with the target variable"
            )

    @classmethod
    def from_dict(cls, data: Mapping) -> "CircuitSpec":
        try:
            return cls.create(
                data["free_bits"],
                list(data.get("xor_defs", {}).items())
                if isinstance(data.get("xor_defs", {}), Mapping)
                else data["xor_defs"],
                data["groupings"],
                data.get("target", ()),
            )
        except (KeyError, TypeError) as exc:
            raise AlphabetViolation(f"malformed circuit document: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "free_bits": list(self.free_bits),
            "xor_defs": {name: list(ops) for name, ops in self.xor_defs},
            "groupings": {name: list(bits) for name, bits in self.groupings},
            "target": list(self.target),
        }

    @classmethod
    def load(cls, path) -> "CircuitSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def from_circuit(
    spec: CircuitSpec, max_support: int = DEFAULT_SUPPORT_CAP
) -> JointDistribution:
    """Expand a circuit into the joint distribution of its variables.

    Enumerates all 2**len(free_bits) assignments with equal mass. Grouped
    variables and the target are materialized as composite-valued columns.
    """
    nfree = len(spec.free_bits)
    if 1 << nfree > max_support:
        raise SupportTooLarge(
            f"{nfree} free bits enumerate {1 << nfree} outcomes, cap is {max_support}"
        )
    columns: list[tuple[str, tuple[str, ...]]] = list(spec.groupings)
    if spec.target:
        columns.append((spec.TARGET_NAME, spec.target))

    def column_value(bits: dict[str, int], grouped: tuple[str, ...]):
        ordered = tuple(bits[b] for b in sorted(grouped))
        return ordered[0] if len(ordered) == 1 else ordered

    mass = Fraction(1, 1 << nfree)
    pmf: dict[Outcome, Fraction] = {}
    for assignment in product((0, 1), repeat=nfree):
        bits = dict(zip(spec.free_bits, assignment))
        for name, operands in spec.xor_defs:
            acc = 0
            for op in operands:
                acc ^= bits[op]
            bits[name] = acc
        outcome = tuple(column_value(bits, grouped) for _, grouped in columns)
        pmf[outcome] = pmf.get(outcome, Fraction(0)) + mass

    names = [name for name, _ in columns]
    alphabets = [
        sorted({outcome[i] for outcome in pmf}) for i in range(len(columns))
    ]
    return JointDistribution.from_pmf(
        pmf.items(), names, alphabets, max_support=max_support
    )
