"""Exact secrecy and uniformity checks via GF(2) linear algebra.

Every bit a protocol touches is an XOR of independent uniform source
bits.  For jointly linear collections the mutual information between the
key bits K and the public transcript bits V is exactly

    I(K; V) = rank(K) + rank(V) - rank(K ∪ V)   bits,

and K is uniform exactly when its forms are linearly independent.  Both
facts are checked here two ways: a rank computation over int bitsets, and
an exhaustive histogram oracle that never looks at ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InstanceTooLarge
from .model import SourceBitBasis

MI_BASIS_LIMIT = 20  # exhaustive oracle enumerates 2**basis_size assignments


@dataclass(frozen=True)
class LinearForm:
    """A GF(2) linear combination of source bits, stored as a label set."""

    labels: frozenset[str]

    @classmethod
    def unit(cls, label: str) -> "LinearForm":
        return cls(frozenset((label,)))

    @classmethod
    def zero(cls) -> "LinearForm":
        return cls(frozenset())

    def __xor__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.labels ^ other.labels)

    def evaluate(self, values: Mapping[str, int]) -> int:
        acc = 0
        for label in self.labels:
            acc ^= values[label]
        return acc

    def __str__(self) -> str:
        if not self.labels:
            return "0"
        return "^".join(sorted(self.labels))


@dataclass(frozen=True)
class SecrecyReport:
    """Ranks of the key forms, transcript forms, and their union."""

    rank_key: int
    rank_transcript: int
    rank_joint: int
    key_count: int

    @property
    def leaked_bits(self) -> int:
        return self.rank_key + self.rank_transcript - self.rank_joint

    @property
    def uniform(self) -> bool:
        return self.rank_key == self.key_count

    def __post_init__(self) -> None:
        leaked = self.rank_key + self.rank_transcript - self.rank_joint
        if not 0 <= leaked <= min(self.rank_key, self.rank_transcript):
            raise ValueError(f"inconsistent ranks in {self!r}")


def gf2_rank(masks: Iterable[int]) -> int:
    """Rank of a set of GF(2) row vectors packed as ints."""
    pivots: dict[int, int] = {}
    rank = 0
    for mask in masks:
        while mask:
            top = mask.bit_length() - 1
            if top not in pivots:
                pivots[top] = mask
                rank += 1
                break
            mask ^= pivots[top]
    return rank


def _masks(forms: Iterable[LinearForm], basis: SourceBitBasis) -> list[int]:
    out = []
    for form in forms:
        mask = 0
        for label in form.labels:
            mask |= 1 << basis.index_of(label)
        out.append(mask)
    return out


def verify_independence(
    key_forms: Iterable[LinearForm],
    transcript_forms: Iterable[LinearForm],
    basis: SourceBitBasis,
) -> SecrecyReport:
    """Exact leakage between key and transcript, in bits.

    leaked_bits == 0 iff the key is statistically independent of the
    public transcript; every label must exist in ``basis``.
    """
    key_forms = list(key_forms)
    transcript_forms = list(transcript_forms)
    key_masks = _masks(key_forms, basis)
    transcript_masks = _masks(transcript_forms, basis)
    return SecrecyReport(
        rank_key=gf2_rank(key_masks),
        rank_transcript=gf2_rank(transcript_masks),
        rank_joint=gf2_rank(key_masks + transcript_masks),
        key_count=len(key_forms),
    )


def verify_uniformity(key_forms: Iterable[LinearForm]) -> bool:
    """True iff the key forms are linearly independent (key exactly uniform)."""
    key_forms = list(key_forms)
    labels = sorted(set().union(*(f.labels for f in key_forms)) if key_forms else set())
    position = {label: t for t, label in enumerate(labels)}
    masks = []
    for form in key_forms:
        mask = 0
        for label in form.labels:
            mask |= 1 << position[label]
        masks.append(mask)
    return gf2_rank(masks) == len(key_forms)


def _exact_log2(ratio: Fraction) -> int:
    num, den = ratio.numerator, ratio.denominator
    if num & (num - 1) or den & (den - 1):
        raise ValueError(f"ratio {ratio} is not a power of two; cannot take an exact log")
    return (num.bit_length() - 1) - (den.bit_length() - 1)


def brute_force_mutual_information(
    key_forms: Iterable[LinearForm],
    transcript_forms: Iterable[LinearForm],
    basis_size: int,
) -> Fraction:
    """I(K; V) by exhaustive enumeration, with exact dyadic probabilities.

    Enumerates every assignment of the labels the forms reference and
    histograms the induced (K, V) values.  Basis bits no form mentions are
    independent of both sides, so skipping them scales every count by the
    same power of two and leaves the mutual information unchanged.

    Returns 0 iff the joint distribution factorizes.  All probability
    ratios of linear-form systems are powers of two, so the value is
    computed log-free as an exact Fraction in bits.
    """
    if basis_size > MI_BASIS_LIMIT:
        raise InstanceTooLarge(
            f"basis of {basis_size} bits exceeds the exhaustive limit of {MI_BASIS_LIMIT}"
        )
    key_forms = list(key_forms)
    transcript_forms = list(transcript_forms)
    labels = sorted(set().union(*(f.labels for f in key_forms + transcript_forms)) or set())
    if len(labels) > basis_size:
        raise ValueError(
            f"forms reference {len(labels)} labels but basis_size is {basis_size}"
        )

    joint: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    key_marginal: dict[tuple[int, ...], int] = {}
    transcript_marginal: dict[tuple[int, ...], int] = {}
    total = 1 << len(labels)
    for assignment in range(total):
        values = {label: (assignment >> t) & 1 for t, label in enumerate(labels)}
        k = tuple(f.evaluate(values) for f in key_forms)
        v = tuple(f.evaluate(values) for f in transcript_forms)
        joint[(k, v)] = joint.get((k, v), 0) + 1
        key_marginal[k] = key_marginal.get(k, 0) + 1
        transcript_marginal[v] = transcript_marginal.get(v, 0) + 1

    if all(
        count * total == key_marginal[k] * transcript_marginal[v]
        for (k, v), count in joint.items()
    ):
        return Fraction(0)

    info = Fraction(0)
    for (k, v), count in joint.items():
        ratio = Fraction(count * total, key_marginal[k] * transcript_marginal[v])
        info += Fraction(count, total) * _exact_log2(ratio)
    return info
