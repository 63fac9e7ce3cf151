# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Empirical behaviour of the continuum comparators.

All numbers here are measured, none is derived from a closed formula:

* equal strings must give exactly consistent comparators,
* for strings differing in `differing` positions the product ``W_A * W_B`` is
  negative in half of the samples, and ``m`` samples without a negative
  product occur with frequency ``2**-m``,
* detection time (samples until the first negative product) with and
  without identical low-pass filters on both hyperspace vectors,
* correlation time of a product of four filtered noises against a single
  filtered noise,
* the false-accept rate of quantised continuum fingerprints.
"""

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..common_coin import MASTER_SIZE, CoinSeed
from ..continuum_logic import (
    Waveform,
    compare_difference,
    compare_product,
    continuum_fingerprint,
    correlation_time,
    lowpass,
    make_basis,
    noise_bit_pair,
    sample_signs,
    signal_product,
    string_hyperspace_vector,
)
from ..errors import DomainError
from ..sequences import BitString
from .montecarlo import RngPolicy, make_rng

DEFAULT_CUTOFF = 0.01
MAX_BLOCK = 10
BANDWIDTH_FACTORS = 4
BANDWIDTH_TOLERANCE = 0.3


@dataclass(frozen=True)
class RateRow:
    name: str
    observed: float
    expected: float
    trials: int

    @property
    def sigma(self) -> float:
        return math.sqrt(self.expected * (1.0 - self.expected) / self.trials)

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= 3.0 * self.sigma


@dataclass(frozen=True)
class ContinuumReport:
    L: int
    samples: int
    cutoff: float
    string: BitString
    differing: int
    equal_consistent: bool
    unequal_detected: bool
    rows: tuple[RateRow, ...]
    detection_unfiltered: float
    detection_filtered: float
    detection_single_bit: float
    correlation_single: float
    correlation_product: float

    @property
    def bandwidth_ratio(self) -> float:
        return self.correlation_product / self.correlation_single

    @property
    def bandwidth_passed(self) -> bool:
        expected = 1.0 / BANDWIDTH_FACTORS
        return abs(self.bandwidth_ratio - expected) <= BANDWIDTH_TOLERANCE * expected

    @property
    def passed(self) -> bool:
        return (
            self.equal_consistent
            and self.unequal_detected
            and self.bandwidth_passed
            and all(row.passed for row in self.rows)
        )


def mean_detection_time(wA: Waveform, wB: Waveform) -> float:
    """
    Mean number of samples from a start tick to the first negative product.

    The violating sample is counted, so independent fair signs give 2.
    Start ticks after the last violation are ignored.
    """
    negative = np.flatnonzero(sample_signs(wA) * sample_signs(wB) < 0)
    if negative.size == 0:
        return math.inf
    starts = np.arange(negative[-1] + 1)
    waits = negative[np.searchsorted(negative, starts)] - starts + 1
    return float(waits.mean())


def false_accept_rows(product: np.ndarray, max_block: int = MAX_BLOCK) -> list[RateRow]:
    """Frequency of `m` samples in a row without a negative product, `m = 1..max_block`."""
    rows = []
    for m in range(1, max_block + 1):
        blocks = product.size // m
        accepted = np.all(product[: blocks * m].reshape(blocks, m) >= 0.0, axis=1)
        rows.append(
            RateRow(f"accept_after_{m}", float(accepted.mean()), math.ldexp(1.0, -m), blocks)
        )
    return rows


def _flip(s: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    flipped = s.copy()
    flipped[rng.choice(s.size, size=count, replace=False)] *= -1
    return flipped


def _quantized_row(
    a: BitString, b: BitString, k: int, trials: int, rng: np.random.Generator
) -> RateRow:
    equal = 0
    for _ in range(trials):
        seed = CoinSeed(rng.bytes(MASTER_SIZE))
        if continuum_fingerprint(a, seed, k) == continuum_fingerprint(b, seed, k):
            equal += 1
    return RateRow(f"quantized_k{k}", equal / trials, math.ldexp(1.0, -k), trials)


def continuum_report(
    L: int,
    samples: int,
    seed: CoinSeed,
    rng: RngPolicy = None,
    cutoff: float = DEFAULT_CUTOFF,
    quantized_k: int = 4,
    quantized_trials: int = 1000,
    differing: int = 1,
) -> ContinuumReport:
    if L < 1 or samples < 1000:
        raise DomainError("The continuum report needs L >= 1 and at least 1000 samples.")
    if not 1 <= differing <= L:
        raise DomainError(f"Cannot flip {differing} of {L} positions.")
    generator = make_rng(rng)
    bits = 2 * generator.integers(0, 2, size=L, dtype=np.int8) - 1
    a = BitString(bits)
    b = BitString(_flip(bits, differing, generator))

    wA = string_hyperspace_vector(a, seed, samples)
    wA_again = string_hyperspace_vector(BitString(bits.copy()), seed, samples)
    wB = string_hyperspace_vector(b, seed, samples)
    fA, fA_again, fB = (
        lowpass(w.to_signal(normalize=True), cutoff) for w in (wA, wA_again, wB)
    )

    equal_consistent = all(
        compare(x, y).consistent
        for compare in (compare_difference, compare_product)
        for x, y in ((wA, wA_again), (fA, fA_again))
    )
    unequal_detected = not (
        compare_difference(wA, wB).consistent or compare_product(wA, wB).consistent
    )

    product = sample_signs(wA) * sample_signs(wB)
    rows = [RateRow("negative_product", float(np.mean(product < 0.0)), 0.5, samples)]
    rows += false_accept_rows(product)
    rows.append(_quantized_row(a, b, quantized_k, quantized_trials, generator))

    pair = noise_bit_pair(seed, 1, samples)
    filtered_basis = [lowpass(v, cutoff) for v in make_basis(seed, BANDWIDTH_FACTORS, samples)]

    report = ContinuumReport(
        L=L,
        samples=samples,
        cutoff=cutoff,
        string=a,
        differing=differing,
        equal_consistent=equal_consistent,
        unequal_detected=unequal_detected,
        rows=tuple(rows),
        detection_unfiltered=mean_detection_time(wA, wB),
        detection_filtered=mean_detection_time(fA, fB),
        detection_single_bit=mean_detection_time(
            lowpass(pair.high, cutoff), lowpass(pair.low, cutoff)
        ),
        correlation_single=correlation_time(filtered_basis[0]),
        correlation_product=correlation_time(signal_product(filtered_basis)),
    )
    logger.info(
        "Detection after {u:.3g} samples unfiltered, {f:.3g} filtered "
        "({s:.3g} for a single noise bit); bandwidth ratio {r:.3f}",
        u=report.detection_unfiltered,
        f=report.detection_filtered,
        s=report.detection_single_bit,
        r=report.bandwidth_ratio,
    )
    return report


