# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""±1 vectors shared by the coin, the RTW logic and the continuum logic."""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError


def as_signs(values: Iterable[int] | np.ndarray, what: str) -> np.ndarray:
    """Return `values` as a read-only ``int8`` array, rejecting anything but ±1."""
    array = np.array(values, dtype=np.int64).reshape(-1)
    if not np.all(np.abs(array) == 1):
        raise DomainError(f"{what} must only contain -1 and +1.")
    array = array.astype(np.int8)
    array.setflags(write=False)
    return array


def pack_signs(values: np.ndarray) -> bytes:
    """Pack ±1 values MSB-first, ``+1`` as bit 1, trailing pad bits zero."""
    return np.packbits(values > 0).tobytes()


def unpack_signs(data: bytes, k: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:k]
    return as_signs(np.where(bits == 1, 1, -1), "Packed components")


@dataclass(frozen=True, eq=False)
class BitString:
    """A string over the alphabet {-1, +1}; ``S[i]`` is ``bits[i - 1]``."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", as_signs(self.bits, "A bit string"))

    @classmethod
    def of(cls, *values: int) -> "BitString":
        return cls(np.array(values, dtype=np.int8))

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitString":
        """Expand bytes MSB-first; bit 0 becomes -1 and bit 1 becomes +1."""
        bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
        return cls(np.where(bits == 1, 1, -1))

    @property
    def flags(self) -> np.ndarray:
        """Branch flags, 1 where the bit is +1."""
        return (self.bits > 0).astype(np.uint8)

    def __len__(self) -> int:
        return int(self.bits.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        return f"BitString({self.bits.tolist()})"


@dataclass(frozen=True, eq=False)
class RtwSequence:
    """A ±1 sequence of length k, components indexed ``j = 1..k``."""

    values: np.ndarray

    def __post_init__(self):
        values = as_signs(self.values, "An RTW sequence")
        if values.size == 0:
            raise DomainError("An RTW sequence needs at least one component.")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, *values: int) -> "RtwSequence":
        return cls(np.array(values, dtype=np.int8))

    @classmethod
    def ones(cls, k: int) -> "RtwSequence":
        return cls(np.ones(k, dtype=np.int8))

    @property
    def k(self) -> int:
        return int(self.values.size)

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)

    def __len__(self) -> int:
        return self.k

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RtwSequence):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"RtwSequence({list(self.to_tuple())})"
