# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Shared randomness for both parties of a verification session.

The two parties never exchange their reference noises. Both hold the
same 32 byte master secret (the *common coin*) and derive every random draw
from it on demand:

* RTW components: a keyed counter-mode mixing function maps the address
  ``(position i, branch b, tick j)`` of a :py:class:`NoiseCell` to one ±1 draw.
  The address enters the function directly, so nothing is materialised and
  memory use does not depend on the string length.
* Gaussian samples: each ``(stream_id, block)`` pair selects a disjoint
  counter range of a :py:class:`numpy.random.Philox` generator keyed by the
  master. Samples are always generated in whole aligned blocks of
  :py:data:`GAUSSIAN_BLOCK` ticks, so every access path yields bit-identical
  floating point values.

Only :py:attr:`CoinSeed.seed_id` (a hash of the master) is ever sent over the
wire.

Bit convention: a packed RTW word stores component ``j`` of a sequence in bit
``(j - 1) % 64`` of word ``(j - 1) // 64``; a set bit means ``-1``. With this
convention the component-wise product of ±1 sequences is the XOR of words.
"""

import hashlib
import secrets
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import numpy as np
from loguru import logger
from nbl.cli_utils.errors import AppConfigurationError, AppFileNotFoundError

from .errors import DomainError
from .sequences import RtwSequence

MASTER_SIZE = 32
SEED_ID_SIZE = 16
WORD_BITS = 64
GAUSSIAN_BLOCK = 4096

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_SHIFT_30 = np.uint64(30)
_SHIFT_27 = np.uint64(27)
_SHIFT_31 = np.uint64(31)
_ONE = np.uint64(1)


def n_words(k: int) -> int:
    """Return the number of 64 bit words needed for `k` components."""
    return (k + WORD_BITS - 1) // WORD_BITS


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _SHIFT_30)) * _MIX_1
    z = (z ^ (z >> _SHIFT_27)) * _MIX_2
    return z ^ (z >> _SHIFT_31)


def cell_words(
    key: Sequence[np.ndarray],
    positions: np.ndarray,
    flags: np.ndarray,
    words: np.ndarray,
) -> np.ndarray:
    """
    Evaluate the keyed RTW function on broadcastable arrays.

    `key` holds the four 64 bit key words (scalars or arrays broadcasting
    against the other arguments), `positions` the 1-based string positions,
    `flags` the branch flags (1 for ``b = +1``, 0 for ``b = -1``) and
    `words` the word indices. All arrays must have dtype ``uint64``.

    The result holds 64 packed components per element.
    """
    k0, k1, k2, k3 = key
    with np.errstate(over="ignore"):
        position_hash = _mix64(k0 ^ _mix64(positions * _GAMMA + k1))
        lane = (words << _ONE) | flags
        return _mix64((position_hash ^ _mix64(lane * _GAMMA + k2)) + k3)


def words_to_signs(words: np.ndarray, k: int) -> np.ndarray:
    """Unpack the first `k` components of packed words into a ±1 ``int8`` array."""
    shifts = np.arange(WORD_BITS, dtype=np.uint64)
    bits = (words.astype(np.uint64)[..., :, None] >> shifts) & _ONE
    bits = bits.reshape(*words.shape[:-1], -1)[..., :k]
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def signs_to_words(signs: np.ndarray) -> np.ndarray:
    """Pack ±1 components (last axis) into 64 bit words, see module docs."""
    k = signs.shape[-1]
    padded = np.zeros((*signs.shape[:-1], n_words(k) * WORD_BITS), dtype=np.uint64)
    padded[..., :k] = signs < 0
    padded = padded.reshape(*signs.shape[:-1], n_words(k), WORD_BITS)
    shifts = np.arange(WORD_BITS, dtype=np.uint64)
    return np.bitwise_or.reduce(padded << shifts, axis=-1)


def mask_words(words: np.ndarray, k: int) -> np.ndarray:
    """Clear all bits above component `k` in the last word."""
    rest = k % WORD_BITS
    if rest:
        words = words.copy()
        words[..., -1] &= np.uint64((1 << rest) - 1)
    return words


class CoinSource(Protocol):
    """Anything both parties can derive RTW sequences from."""

    @property
    def seed_id(self) -> bytes: ...

    def rtw_words(self, positions: np.ndarray, flags: np.ndarray, k: int) -> np.ndarray:
        """Return packed words of shape ``(len(positions), n_words(k))``."""
        ...


def _derive(master: bytes, label: bytes, size: int) -> bytes:
    return hashlib.blake2b(master, digest_size=size, person=label).digest()


@dataclass(frozen=True)
class CoinSeed:
    """The master secret shared by both parties before a session starts."""

    master: bytes = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.master, (bytes, bytearray)) or len(self.master) != MASTER_SIZE:
            raise DomainError(f"A coin seed master must be exactly {MASTER_SIZE} bytes long.")
        object.__setattr__(self, "master", bytes(self.master))

    @classmethod
    def generate(cls) -> "CoinSeed":
        return cls(secrets.token_bytes(MASTER_SIZE))

    @classmethod
    def from_int(cls, value: int) -> "CoinSeed":
        """Create a deterministic seed for harness runs, e.g. from `--seed 42`."""
        if value < 0:
            raise DomainError("Harness seeds must be non-negative integers.")
        encoded = value.to_bytes((value.bit_length() + 8) // 8, "big")
        return cls(_derive(encoded, b"nbl-int-seed", MASTER_SIZE))

    @cached_property
    def seed_id(self) -> bytes:
        return _derive(self.master, b"nbl-seed-id", SEED_ID_SIZE)

    @property
    def seed_id_hex(self) -> str:
        return self.seed_id.hex()

    @cached_property
    def rtw_key(self) -> np.ndarray:
        return np.frombuffer(_derive(self.master, b"nbl-rtw-key", 32), dtype=">u8").astype(
            np.uint64
        )

    @cached_property
    def gaussian_key(self) -> int:
        return int.from_bytes(_derive(self.master, b"nbl-gauss-key", 16), "big")

    def rtw_words(self, positions: np.ndarray, flags: np.ndarray, k: int) -> np.ndarray:
        positions = np.asarray(positions, dtype=np.uint64).reshape(-1, 1)
        flags = np.asarray(flags, dtype=np.uint64).reshape(-1, 1)
        words = np.arange(n_words(k), dtype=np.uint64).reshape(1, -1)
        return cell_words(tuple(self.rtw_key), positions, flags, words)


@dataclass(frozen=True, eq=False)
class CoinTable:
    """
    An explicit coin table: the 2L sequences ``R_{i,b}`` of length k.

    `values` has shape ``(L, 2, k)``; index 0 of the middle axis holds the
    sequence for branch ``-1``, index 1 the one for branch ``+1``.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int8)
        if values.ndim != 3 or values.shape[1] != 2 or 0 in values.shape:
            raise DomainError("A coin table must have the shape (L, 2, k) with L, k >= 1.")
        if not np.all(np.abs(values) == 1):
            raise DomainError("Coin table entries must be -1 or +1.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_index(cls, index: int, length: int, k: int) -> "CoinTable":
        """
        Build the table numbered `index` out of all ``2**(2 * length * k)`` tables.

        Bit ``(2 * (i - 1) + flag) * k + (j - 1)`` of `index` set means
        ``R_{i,b}(j) = -1``.
        """
        total = 2 * length * k
        if not 0 <= index < 2**total:
            raise DomainError(f"Table index {index} is outside [0, 2**{total}).")
        bits = np.array([(index >> t) & 1 for t in range(total)], dtype=np.int8)
        return cls((1 - 2 * bits).reshape(length, 2, k))

    @classmethod
    def from_rows(
        cls, rows: Mapping[tuple[int, int], Sequence[int]], length: int, k: int
    ) -> "CoinTable":
        """Build a table from ``{(i, b): sequence}``; rows not given are all ``+1``."""
        values = np.ones((length, 2, k), dtype=np.int8)
        for (position, branch), sequence in rows.items():
            values[position - 1, 1 if branch > 0 else 0, :] = sequence
        return cls(values)

    @property
    def length(self) -> int:
        return int(self.values.shape[0])

    @property
    def k(self) -> int:
        return int(self.values.shape[2])

    @cached_property
    def seed_id(self) -> bytes:
        return _derive(self.values.tobytes(), b"nbl-coin-table", SEED_ID_SIZE)

    def rtw_words(self, positions: np.ndarray, flags: np.ndarray, k: int) -> np.ndarray:
        if k > self.k:
            raise DomainError(f"The coin table only holds {self.k} components, {k} requested.")
        index = np.asarray(positions, dtype=np.int64).reshape(-1) - 1
        if index.size and (index.min() < 0 or index.max() >= self.length):
            raise DomainError(f"The coin table only covers positions 1..{self.length}.")
        branch = np.asarray(flags, dtype=np.int64).reshape(-1)
        return signs_to_words(self.values[index, branch, :k])


@dataclass(frozen=True)
class NoiseCell:
    """Address of one ±1 draw: string position, bit value and tick."""

    index: int
    branch: int
    tick: int

    def __post_init__(self):
        if self.index < 1 or self.tick < 1:
            raise DomainError("Noise cell position and tick are 1-based.")
        if self.branch not in (-1, 1):
            raise DomainError("Noise cell branch must be -1 or +1.")


def derive_rtw_bit(seed: CoinSource, cell: NoiseCell) -> int:
    """Return the ±1 value of ``R_{i,b}(j)`` for `cell`."""
    words = seed.rtw_words(np.array([cell.index]), np.array([cell.branch > 0]), cell.tick)
    bit = (int(words[0, (cell.tick - 1) // WORD_BITS]) >> ((cell.tick - 1) % WORD_BITS)) & 1
    return -1 if bit else 1


def derive_rtw_sequence(seed: CoinSource, index: int, branch: int, k: int) -> RtwSequence:
    """Return ``R_{i,b}`` as a sequence of its first `k` components."""
    NoiseCell(index, branch, k)
    words = seed.rtw_words(np.array([index]), np.array([branch > 0]), k)
    return RtwSequence(words_to_signs(words[0], k))


@lru_cache(maxsize=128)
def _gaussian_block(gaussian_key: int, stream_id: int, block: int) -> np.ndarray:
    counter = np.array([0, 0, block, stream_id], dtype=np.uint64)
    generator = np.random.Generator(np.random.Philox(key=gaussian_key, counter=counter))
    samples = generator.standard_normal(GAUSSIAN_BLOCK)
    samples.setflags(write=False)
    return samples


def derive_gaussian_stream(
    seed: CoinSeed, stream_id: int, n: int, start: int = 0
) -> np.ndarray:
    """Return `n` standard normal samples of stream `stream_id` from tick `start` on."""
    if stream_id < 0 or start < 0 or n < 0:
        raise DomainError("Stream id, start tick and sample count must be non-negative.")
    if stream_id >= 2**64:
        raise DomainError("Stream ids must fit into 64 bits.")
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    first = start // GAUSSIAN_BLOCK
    last = (start + n - 1) // GAUSSIAN_BLOCK
    blocks = [_gaussian_block(seed.gaussian_key, stream_id, b) for b in range(first, last + 1)]
    offset = start - first * GAUSSIAN_BLOCK
    return np.concatenate(blocks)[offset : offset + n]


def derive_gaussian_sample(seed: CoinSeed, stream_id: int, tick: int) -> float:
    """Return the standard normal sample of stream `stream_id` at `tick` (0-based)."""
    return float(derive_gaussian_stream(seed, stream_id, 1, start=tick)[0])


def load_seed_file(path: Path) -> CoinSeed:
    """Read a seed file holding exactly 32 raw bytes."""
    path = Path(path)
    if not path.is_file():
        raise AppFileNotFoundError(f"Seed file `{path}` doesn't exist!")
    master = path.read_bytes()
    if len(master) != MASTER_SIZE:
        raise AppConfigurationError(
            f"Seed file `{path}` must contain exactly {MASTER_SIZE} bytes, "
            f"but it has {len(master)} bytes."
        )
    seed = CoinSeed(master)
    logger.debug("Loaded seed {seed_id} from {path}", seed_id=seed.seed_id_hex, path=path)
    return seed


def write_seed_file(path: Path, seed: CoinSeed, force: bool = False) -> None:
    path = Path(path)
    if path.exists() and not force:
        raise AppConfigurationError(
            f"File {path} already exists, aborting. "
            "If you want to overwrite the file, pass the --force flag."
        )
    path.write_bytes(seed.master)
    logger.debug("Wrote seed {seed_id} to {path}", seed_id=seed.seed_id_hex, path=path)
