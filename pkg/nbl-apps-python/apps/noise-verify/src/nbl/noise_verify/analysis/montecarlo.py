# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Monte Carlo estimates of false-accept and collision rates.

Two engines are available for :py:func:`mc_error_rate`:

* ``batch`` evaluates the coin function for many trials at once. Each trial
  still gets its own fresh :py:class:`~nbl.noise_verify.common_coin.CoinSeed`;
  only the arithmetic is vectorised.
* ``session`` runs every trial as a complete protocol session (HELLO,
  FINGERPRINT, VERDICT) through the wire codec.

Both produce identical fingerprints for identical seeds and strings.
"""

import math
from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np
from loguru import logger

from ..common_coin import MASTER_SIZE, CoinSeed, cell_words, mask_words, n_words
from ..errors import DomainError
from ..protocol.messages import Decision
from ..protocol.session import InitiatorSession, ResponderSession, exchange_in_memory
from ..rtw_logic import epsilon_for_k
from ..sequences import BitString

MAX_BATCH_CELLS = 1 << 20

RngPolicy = Union[None, int, np.random.Generator]
Engine = Literal["batch", "session"]


@dataclass(frozen=True)
class TrialReport:
    k: int
    L: int
    trials: int
    false_accepts: int
    unequal: bool = True

    @property
    def rate(self) -> float:
        return self.false_accepts / self.trials

    @property
    def expected(self) -> float:
        return math.ldexp(1.0, -self.k)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.expected * (1.0 - self.expected) / self.trials)

    @property
    def misclassified(self) -> int:
        """Wrong verdicts: false accepts for unequal pairs, rejections for equal ones."""
        return self.false_accepts if self.unequal else self.trials - self.false_accepts

    @property
    def passed(self) -> bool:
        if not self.unequal:
            return self.misclassified == 0
        return abs(self.rate - self.expected) <= 3.0 * self.sigma


def make_rng(rng: RngPolicy) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def fresh_keys(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw `count` fresh coin seeds and return their RTW keys, shape ``(count, 4)``."""
    masters = rng.bytes(MASTER_SIZE * count)
    return np.stack(
        [
            CoinSeed(masters[i * MASTER_SIZE : (i + 1) * MASTER_SIZE]).rtw_key
            for i in range(count)
        ]
    )


def batch_fingerprint_words(
    keys: np.ndarray, positions: np.ndarray, flags: np.ndarray, k: int
) -> np.ndarray:
    """
    Return the packed fingerprint words of many (key, string) combinations.

    `keys` has shape ``(T, 4)``, `positions` the 1-based positions ``(P,)``
    and `flags` the branch flags ``(T, P)`` or ``(1, P)``. The result has
    shape ``(T, n_words(k))``.
    """
    trials = keys.shape[0]
    key = tuple(keys[:, i].reshape(trials, 1, 1) for i in range(4))
    cells = cell_words(
        key,
        np.asarray(positions, dtype=np.uint64).reshape(1, -1, 1),
        np.asarray(flags, dtype=np.uint64)[:, :, None],
        np.arange(n_words(k), dtype=np.uint64).reshape(1, 1, -1),
    )
    return mask_words(np.bitwise_xor.reduce(cells, axis=1), k)


def _chunk_size(cells_per_trial: int) -> int:
    return max(1, MAX_BATCH_CELLS // max(1, cells_per_trial))


def draw_pairs(
    rng: np.random.Generator, count: int, length: int, unequal: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Draw `count` flag rows; for `unequal` the second row is redrawn until it differs."""
    a = rng.integers(0, 2, size=(count, length), dtype=np.uint8)
    if not unequal:
        return a, a.copy()
    b = rng.integers(0, 2, size=(count, length), dtype=np.uint8)
    same = np.flatnonzero(np.all(a == b, axis=1))
    while same.size:
        b[same] = rng.integers(0, 2, size=(same.size, length), dtype=np.uint8)
        same = same[np.all(a[same] == b[same], axis=1)]
    return a, b


def _batch_equal_verdicts(
    k: int, length: int, trials: int, unequal: bool, rng: np.random.Generator
) -> int:
    positions = np.arange(1, length + 1, dtype=np.uint64)
    chunk = _chunk_size(length * n_words(k))
    equal_verdicts = 0
    done = 0
    while done < trials:
        count = min(chunk, trials - done)
        keys = fresh_keys(rng, count)
        a, b = draw_pairs(rng, count, length, unequal)
        fa = batch_fingerprint_words(keys, positions, a, k)
        fb = batch_fingerprint_words(keys, positions, b, k)
        equal_verdicts += int(np.count_nonzero(np.all(fa == fb, axis=1)))
        done += count
        logger.debug("{done}/{trials} trials done", done=done, trials=trials)
    return equal_verdicts


def _session_equal_verdicts(
    k: int, length: int, trials: int, unequal: bool, rng: np.random.Generator
) -> int:
    epsilon = epsilon_for_k(k)
    equal_verdicts = 0
    for _ in range(trials):
        seed = CoinSeed(rng.bytes(MASTER_SIZE))
        a, b = draw_pairs(rng, 1, length, unequal)
        _, verdict = exchange_in_memory(
            InitiatorSession(BitString(2 * a[0].astype(np.int8) - 1), seed, epsilon),
            ResponderSession(BitString(2 * b[0].astype(np.int8) - 1), seed, epsilon),
        )
        if verdict.decision is Decision.EQUAL_PRESUMED:
            equal_verdicts += 1
    return equal_verdicts


def _check_positive(**values: int) -> None:
    for name, value in values.items():
        if value < 1:
            raise DomainError(f"{name} must be at least 1, got {value}.")


def mc_error_rate(
    k: int,
    L: int,
    trials: int,
    unequal: bool = True,
    rng: RngPolicy = None,
    engine: Engine = "batch",
) -> TrialReport:
    """
    Run `trials` independent verifications with fresh seeds and count equal verdicts.

    With `unequal` the string pairs are drawn uniformly among unequal pairs,
    otherwise both parties hold the same random string.
    """
    _check_positive(k=k, L=L, trials=trials)
    generator = make_rng(rng)
    if engine == "batch":
        equal_verdicts = _batch_equal_verdicts(k, L, trials, unequal, generator)
    elif engine == "session":
        equal_verdicts = _session_equal_verdicts(k, L, trials, unequal, generator)
    else:
        raise DomainError(f"Unknown engine `{engine}`.")
    report = TrialReport(k, L, trials, equal_verdicts, unequal)
    logger.info(
        "k={k} L={L}: {fa} equal verdicts in {trials} trials (rate {rate:.6g})",
        k=k,
        L=L,
        fa=equal_verdicts,
        trials=trials,
        rate=report.rate,
    )
    return report


def hash_collision_rate(
    k: int,
    pairs: int,
    length: int,
    rng: RngPolicy = None,
    seed: Optional[CoinSeed] = None,
) -> TrialReport:
    """
    Collision rate of the keyed digest over random distinct inputs of `length` bytes.

    All pairs are hashed under one key (`seed`, or a fresh one).
    """
    _check_positive(k=k, pairs=pairs, length=length)
    generator = make_rng(rng)
    key = (seed or CoinSeed(generator.bytes(MASTER_SIZE))).rtw_key
    bits = 8 * length
    positions = np.arange(1, bits + 1, dtype=np.uint64)
    chunk = _chunk_size(bits * n_words(k))
    collisions = 0
    done = 0
    while done < pairs:
        count = min(chunk, pairs - done)
        keys = np.broadcast_to(key, (count, 4))
        a, b = draw_pairs(generator, count, bits, unequal=True)
        fa = batch_fingerprint_words(keys, positions, a, k)
        fb = batch_fingerprint_words(keys, positions, b, k)
        collisions += int(np.count_nonzero(np.all(fa == fb, axis=1)))
        done += count
    return TrialReport(k, bits, pairs, collisions, unequal=True)


def pair_collision_rate(
    a: bytes, b: bytes, k: int, trials: int, rng: RngPolicy = None
) -> TrialReport:
    """
    Collision rate of one fixed pair of inputs over `trials` fresh seeds.

    Positions where both inputs hold the same bit contribute the same factor
    to both fingerprints and cancel, so only differing positions and the
    tail of the longer input are evaluated.
    """
    _check_positive(k=k, trials=trials)
    generator = make_rng(rng)
    flags_a = np.unpackbits(np.frombuffer(a, dtype=np.uint8))
    flags_b = np.unpackbits(np.frombuffer(b, dtype=np.uint8))
    common = min(flags_a.size, flags_b.size)
    index_a = np.concatenate(
        [np.flatnonzero(flags_a[:common] != flags_b[:common]), np.arange(common, flags_a.size)]
    )
    index_b = np.concatenate(
        [np.flatnonzero(flags_a[:common] != flags_b[:common]), np.arange(common, flags_b.size)]
    )
    unequal = bool(index_a.size or index_b.size)
    chunk = _chunk_size(max(index_a.size, index_b.size, 1) * n_words(k))
    collisions = 0
    done = 0
    while done < trials:
        count = min(chunk, trials - done)
        keys = fresh_keys(generator, count)
        fa = batch_fingerprint_words(keys, index_a + 1, flags_a[index_a][None, :], k)
        fb = batch_fingerprint_words(keys, index_b + 1, flags_b[index_b][None, :], k)
        collisions += int(np.count_nonzero(np.all(fa == fb, axis=1)))
        done += count
    return TrialReport(k, max(flags_a.size, flags_b.size), trials, collisions, unequal)
