# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
RTW sequences, their hyperspace products and string fingerprints.

The fingerprint of a string ``S`` of length L is the component-wise product

    S* = R_{1,S[1]} ⊗ R_{2,S[2]} ⊗ ... ⊗ R_{L,S[L]}

of the coin sequences selected by position and bit value, truncated to k
components. Two parties holding the same coin compare their fingerprints:
different fingerprints prove different strings, equal fingerprints of
different strings happen with probability ``2**-k``.

Internally a fingerprint is accumulated as packed 64 bit words (see
:py:mod:`nbl.noise_verify.common_coin`): the ±1 product is an XOR of words,
which lets the accumulator stream through arbitrarily long inputs with
``O(k)`` memory.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import BinaryIO, Iterator, Sequence, Union

import numpy as np
from loguru import logger
from nbl.cli_utils.errors import AppError

from .common_coin import (
    CoinSeed,
    CoinSource,
    CoinTable,
    mask_words,
    n_words,
    words_to_signs,
)
from .errors import DomainError, ShapeMismatchError
from .sequences import BitString, RtwSequence, as_signs, pack_signs, unpack_signs

__all__ = [
    "MAX_K",
    "BitSource",
    "BitString",
    "Relation",
    "RtwFingerprint",
    "RtwSequence",
    "check_equal_relations",
    "componentwise_product",
    "compute_k",
    "epsilon_for_k",
    "fingerprint",
    "fingerprint_from_table",
    "fingerprint_k",
    "hash_digest",
    "headline_k",
    "rtw_hyperspace_product",
]

#: Inputs a fingerprint can be computed from. Bytes and binary streams are
#: expanded MSB-first, bit 0 as -1 and bit 1 as +1.
BitSource = Union[BitString, bytes, bytearray, memoryview, BinaryIO]

CHUNK_BYTES = 8192
CHUNK_BITS = 8 * CHUNK_BYTES

#: Largest k an error bound can express: ``1.5 * 2**-k`` stays a normal float64.
MAX_K = 1022


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not (math.isfinite(epsilon) and 0.0 < epsilon < 1.0):
        raise DomainError(f"Epsilon must be in the open interval (0, 1), got {epsilon}.")
    return epsilon


def compute_k(epsilon: float) -> int:
    """
    Return the smallest integer k with ``k > log2(1 / epsilon)``.

    Equivalently the smallest k with ``2**-k < epsilon``. The comparison is
    done on exact powers of two, so exact powers of two for `epsilon` land
    on the strict side (``compute_k(0.25) == 3``).
    """
    epsilon = _check_epsilon(epsilon)
    k = max(1, math.floor(-math.log2(epsilon)) + 1)
    while math.ldexp(1.0, -k) >= epsilon:
        k += 1
    while k > 1 and math.ldexp(1.0, -(k - 1)) < epsilon:
        k -= 1
    return k


def headline_k(epsilon: float) -> int:
    """Return ``log2(1 / epsilon)`` rounded to the nearest integer (``0.5**k ≈ epsilon``)."""
    epsilon = _check_epsilon(epsilon)
    return max(1, round(-math.log2(epsilon)))


def epsilon_for_k(k: int) -> float:
    """Return an epsilon for which :py:func:`compute_k` yields exactly `k`."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}.")
    if k > MAX_K:
        raise DomainError(
            f"k={k} has no representable error bound, fingerprints allow k <= {MAX_K}."
        )
    return 1.5 * math.ldexp(1.0, -k)


@dataclass(frozen=True, eq=False)
class RtwFingerprint:
    """The k components of ``S*`` together with the parameters they were made with."""

    values: np.ndarray
    seed_id: bytes
    epsilon: float
    length: int | None = field(default=None, compare=False)

    def __post_init__(self):
        values = as_signs(self.values, "A fingerprint")
        epsilon = _check_epsilon(self.epsilon)
        if values.size != compute_k(epsilon):
            raise DomainError(
                f"A fingerprint for epsilon={epsilon} needs {compute_k(epsilon)} "
                f"components, got {values.size}."
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "epsilon", epsilon)

    @property
    def k(self) -> int:
        return int(self.values.size)

    def pack(self) -> bytes:
        """Pack MSB-first into ``ceil(k / 8)`` bytes, ``+1`` as bit 1."""
        return pack_signs(self.values)

    @classmethod
    def unpack(
        cls, data: bytes, k: int, seed_id: bytes, epsilon: float
    ) -> "RtwFingerprint":
        if len(data) != (k + 7) // 8:
            raise DomainError(f"{k} components need {(k + 7) // 8} bytes, got {len(data)}.")
        return cls(unpack_signs(data, k), seed_id, epsilon)

    def hex(self) -> str:
        return self.pack().hex()

    def as_sequence(self) -> RtwSequence:
        return RtwSequence(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RtwFingerprint):
            return NotImplemented
        return (
            self.seed_id == other.seed_id
            and self.epsilon == other.epsilon
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.values.tobytes(), self.seed_id, self.epsilon))


class Relation(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"


def componentwise_product(a: RtwSequence, b: RtwSequence) -> RtwSequence:
    if a.k != b.k:
        raise ShapeMismatchError(f"Cannot multiply sequences of length {a.k} and {b.k}.")
    return RtwSequence(a.values * b.values)


def rtw_hyperspace_product(seqs: Sequence[RtwSequence]) -> RtwSequence:
    """Multiply all sequences component-wise, the result is an RTW sequence again."""
    if not seqs:
        raise DomainError("A hyperspace product needs at least one sequence.")
    return reduce(componentwise_product, seqs)


def check_equal_relations(wA: RtwFingerprint, wB: RtwFingerprint) -> Relation:
    """
    Check ``wA[j] - wB[j] = 0`` and ``wA[j] * wB[j] = 1`` for all components.

    Both forms are evaluated; on ±1 vectors they are equivalent.
    """
    if wA.k != wB.k:
        raise ShapeMismatchError(f"Cannot compare fingerprints with k={wA.k} and k={wB.k}.")
    a = wA.values.astype(np.int16)
    b = wB.values.astype(np.int16)
    difference_holds = bool(np.all(a - b == 0))
    product_holds = bool(np.all(a * b == 1))
    if difference_holds != product_holds:
        raise AppError("Difference and product relations disagree on ±1 vectors.")
    return Relation.HOLDS if difference_holds else Relation.VIOLATED


def _flag_chunks(source: BitSource) -> Iterator[np.ndarray]:
    if isinstance(source, BitString):
        flags = source.flags
        for start in range(0, flags.size, CHUNK_BITS):
            yield flags[start : start + CHUNK_BITS]
        return
    if isinstance(source, (bytes, bytearray, memoryview)):
        data = memoryview(source).cast("B")
        for start in range(0, len(data), CHUNK_BYTES):
            chunk = np.frombuffer(data[start : start + CHUNK_BYTES], dtype=np.uint8)
            yield np.unpackbits(chunk)
        return
    while chunk := source.read(CHUNK_BYTES):
        yield np.unpackbits(np.frombuffer(chunk, dtype=np.uint8))


def accumulate_words(source: BitSource, coin: CoinSource, k: int) -> tuple[np.ndarray, int]:
    """
    Stream `source` through the coin and return the packed fingerprint words.

    Returns the masked words and the number of bits consumed.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}.")
    accumulator = np.zeros(n_words(k), dtype=np.uint64)
    length = 0
    for flags in _flag_chunks(source):
        if flags.size == 0:
            continue
        positions = np.arange(length + 1, length + flags.size + 1, dtype=np.uint64)
        accumulator ^= np.bitwise_xor.reduce(coin.rtw_words(positions, flags, k), axis=0)
        length += int(flags.size)
    return mask_words(accumulator, k), length


def fingerprint_k(s: BitSource, coin: CoinSource, k: int) -> RtwFingerprint:
    """Compute the fingerprint of `s` with an explicit number of components."""
    words, length = accumulate_words(s, coin, k)
    logger.debug("Fingerprinted {length} bits with k={k}", length=length, k=k)
    return RtwFingerprint(words_to_signs(words, k), coin.seed_id, epsilon_for_k(k), length)


def fingerprint(s: BitSource, coin: CoinSource, epsilon: float) -> RtwFingerprint:
    """
    Compute ``S*`` for the error bound `epsilon`.

    The empty string yields all ``+1`` (empty product). The input is read in
    chunks, memory use does not depend on its length.
    """
    k = compute_k(epsilon)
    words, length = accumulate_words(s, coin, k)
    logger.debug("Fingerprinted {length} bits with k={k}", length=length, k=k)
    return RtwFingerprint(words_to_signs(words, k), coin.seed_id, epsilon, length)


def fingerprint_from_table(s: BitString, table: CoinTable) -> RtwSequence:
    """Evaluate ``S*`` literally as the hyperspace product of the selected table rows."""
    if len(s) > table.length:
        raise DomainError(f"The coin table only covers {table.length} positions.")
    rows = [
        RtwSequence(table.values[i, 1 if bit > 0 else 0])
        for i, bit in enumerate(s.bits.tolist())
    ]
    if not rows:
        return RtwSequence.ones(table.k)
    return rtw_hyperspace_product(rows)


def hash_digest(s: Union[bytes, bytearray, BinaryIO], seed: CoinSeed, k: int) -> bytes:
    """Return the k-bit keyed digest of a byte stream, packed MSB-first."""
    words, _ = accumulate_words(s, seed, k)
    return pack_signs(words_to_signs(words, k))
