# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Sampled continuum noises, their hyperspace products and the comparators.

Every position ``i`` of a string owns two independent Gaussian white noises,
``H_i`` (bit +1) on stream ``2 * i`` and ``L_i`` (bit -1) on stream
``2 * i + 1``. The hyperspace vector of a string is the sample-wise product
of the selected noises. It is held as a
:py:class:`HyperspaceVector` of exact signs and log magnitudes: the plain
float64 product of a thousand or more Gaussians leaves the representable
range. Equal strings give bit-identical vectors, so
:py:func:`compare_difference` uses exact equality.

Basis noises made by :py:func:`make_basis` live on a separate stream range
starting at :py:data:`BASIS_STREAM_OFFSET` and never overlap with the
``H_i``/``L_i`` streams.

Low-pass filter
---------------

:py:func:`lowpass` is the one-pole recursive filter

    y[n] = alpha * x[n] + (1 - alpha) * y[n - 1],    y[-1] = 0

with ``alpha = 1 - exp(-2 * pi * cutoff / sample_rate)``.
"""

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger
from scipy import signal as sp_signal

from .common_coin import CoinSeed, derive_gaussian_stream
from .errors import DomainError, ShapeMismatchError
from .sequences import BitString, RtwSequence

BASIS_STREAM_OFFSET = 2**62
COMPOSITE_STREAM = -1


def high_stream(position: int) -> int:
    return 2 * position


def low_stream(position: int) -> int:
    return 2 * position + 1


@dataclass(frozen=True, eq=False)
class ContinuumSignal:
    samples: np.ndarray
    sample_rate: float = 1.0
    stream_id: int = COMPOSITE_STREAM

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64).reshape(-1)
        if samples.size == 0:
            raise DomainError("A continuum signal needs at least one sample.")
        if not np.all(np.isfinite(samples)):
            raise DomainError("Continuum signal samples must be finite.")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise DomainError(f"Sample rate must be positive, got {self.sample_rate}.")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def bit_equal(self, other: "ContinuumSignal") -> bool:
        return self.sample_rate == other.sample_rate and np.array_equal(
            self.samples, other.samples
        )


@dataclass(frozen=True, eq=False)
class HyperspaceVector:
    """
    A sample-wise product kept as ``signs * exp(log_magnitude)``.

    `signs` holds -1, 0 or +1 per sample and `log_magnitude` the natural
    log of the absolute value, ``-inf`` exactly where the sign is 0.
    """

    signs: np.ndarray
    log_magnitude: np.ndarray
    sample_rate: float = 1.0
    stream_id: int = COMPOSITE_STREAM

    def __post_init__(self):
        signs = np.array(self.signs, dtype=np.int8).reshape(-1)
        log_magnitude = np.array(self.log_magnitude, dtype=np.float64).reshape(-1)
        if signs.size == 0:
            raise DomainError("A hyperspace vector needs at least one sample.")
        if signs.size != log_magnitude.size:
            raise ShapeMismatchError(
                f"Got {signs.size} signs but {log_magnitude.size} log magnitudes."
            )
        if not np.all(np.isin(signs, (-1, 0, 1))):
            raise DomainError("Hyperspace vector signs must be -1, 0 or +1.")
        if np.any(np.isnan(log_magnitude)) or np.any(log_magnitude == math.inf):
            raise DomainError("Log magnitudes must be finite or -inf.")
        if not np.array_equal(signs == 0, log_magnitude == -math.inf):
            raise DomainError("A log magnitude is -inf exactly where the sign is 0.")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise DomainError(f"Sample rate must be positive, got {self.sample_rate}.")
        signs.setflags(write=False)
        log_magnitude.setflags(write=False)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "log_magnitude", log_magnitude)

    @classmethod
    def from_signal(cls, sig: ContinuumSignal) -> "HyperspaceVector":
        with np.errstate(divide="ignore"):
            log_magnitude = np.log(np.abs(sig.samples))
        return cls(np.sign(sig.samples), log_magnitude, sig.sample_rate, sig.stream_id)

    def __len__(self) -> int:
        return int(self.signs.size)

    def bit_equal(self, other: "HyperspaceVector") -> bool:
        return (
            self.sample_rate == other.sample_rate
            and np.array_equal(self.signs, other.signs)
            and np.array_equal(self.log_magnitude, other.log_magnitude)
        )

    def to_signal(self, normalize: bool = False) -> ContinuumSignal:
        """
        Return the samples as plain floats.

        Raises :py:class:`DomainError` when a sample does not fit into a
        float64. With `normalize` all samples are divided by the largest
        magnitude; samples too small next to it to be represented become 0.
        """
        log_magnitude = self.log_magnitude
        finite = log_magnitude[self.signs != 0]
        if normalize and finite.size:
            log_magnitude = log_magnitude - finite.max()
        with np.errstate(over="ignore", under="ignore"):
            samples = self.signs * np.exp(log_magnitude)
        if not normalize and np.any((samples == 0.0) != (self.signs == 0)):
            raise DomainError("The samples underflow float64; convert with normalize=True.")
        return ContinuumSignal(samples, self.sample_rate, self.stream_id)


Waveform = Union[ContinuumSignal, HyperspaceVector]


def sample_signs(w: Waveform) -> np.ndarray:
    """Return the exact sign (-1, 0 or +1) of every sample as int8."""
    if isinstance(w, HyperspaceVector):
        return w.signs
    return np.sign(w.samples).astype(np.int8)


@dataclass(frozen=True)
class NoiseBitPair:
    """The two reference noises ``H_i`` and ``L_i`` of string position `position`."""

    high: ContinuumSignal
    low: ContinuumSignal
    position: int

    def __post_init__(self):
        if self.position < 1:
            raise DomainError("Noise bit positions are 1-based.")
        if self.high.stream_id == self.low.stream_id:
            raise DomainError("High and low noise must come from distinct streams.")
        _check_same_shape(self.high, self.low)

    def select(self, bit: int) -> ContinuumSignal:
        return self.high if bit > 0 else self.low


@dataclass(frozen=True)
class ComparisonResult:
    consistent: bool
    violation_index: Optional[int] = None


def _check_same_shape(a: Waveform, b: Waveform) -> None:
    if len(a) != len(b) or a.sample_rate != b.sample_rate:
        raise ShapeMismatchError(
            f"Signals differ in shape: {len(a)} samples at rate {a.sample_rate} "
            f"vs {len(b)} samples at rate {b.sample_rate}."
        )


def _check_count(n: int, what: str) -> None:
    if n < 1:
        raise DomainError(f"{what} must be at least 1, got {n}.")


def noise_signal(
    seed: CoinSeed, stream_id: int, n_samples: int, sample_rate: float = 1.0
) -> ContinuumSignal:
    samples = derive_gaussian_stream(seed, stream_id, n_samples)
    return ContinuumSignal(samples, sample_rate, stream_id)


def make_basis(
    seed: CoinSeed, count: int, n_samples: int, sample_rate: float = 1.0
) -> list[ContinuumSignal]:
    """Return `count` independent zero-mean unit-variance white noises ``V_1..V_count``."""
    _check_count(count, "Basis size")
    _check_count(n_samples, "Sample count")
    return [
        noise_signal(seed, BASIS_STREAM_OFFSET + m, n_samples, sample_rate)
        for m in range(1, count + 1)
    ]


def noise_bit_pair(
    seed: CoinSeed, position: int, n_samples: int, sample_rate: float = 1.0
) -> NoiseBitPair:
    _check_count(n_samples, "Sample count")
    return NoiseBitPair(
        high=noise_signal(seed, high_stream(position), n_samples, sample_rate),
        low=noise_signal(seed, low_stream(position), n_samples, sample_rate),
        position=position,
    )


def signal_product(signals: Sequence[ContinuumSignal]) -> ContinuumSignal:
    """Multiply signals sample-wise, strictly left to right."""
    if not signals:
        raise DomainError("A signal product needs at least one signal.")
    first = signals[0]
    product = first.samples.copy()
    for other in signals[1:]:
        _check_same_shape(first, other)
        product *= other.samples
    stream_id = first.stream_id if len(signals) == 1 else COMPOSITE_STREAM
    return ContinuumSignal(product, first.sample_rate, stream_id)


def string_hyperspace_vector(
    s: BitString, seed: CoinSeed, n_samples: int, sample_rate: float = 1.0
) -> HyperspaceVector:
    """Return ``W(t)``, the product of ``H_i`` (bit +1) or ``L_i`` (bit -1) per position."""
    _check_count(len(s), "String length")
    _check_count(n_samples, "Sample count")
    streams = [
        high_stream(position) if bit > 0 else low_stream(position)
        for position, bit in enumerate(s.bits.tolist(), start=1)
    ]
    signs = np.ones(n_samples, dtype=np.int8)
    log_magnitude = np.zeros(n_samples)
    for stream_id in streams:
        noise = derive_gaussian_stream(seed, stream_id, n_samples)
        signs *= np.sign(noise).astype(np.int8)
        with np.errstate(divide="ignore"):
            log_magnitude += np.log(np.abs(noise))
    stream_tag = streams[0] if len(streams) == 1 else COMPOSITE_STREAM
    return HyperspaceVector(signs, log_magnitude, sample_rate, stream_tag)


def _differs(wA: Waveform, wB: Waveform) -> np.ndarray:
    if isinstance(wA, ContinuumSignal) and isinstance(wB, ContinuumSignal):
        return wA.samples != wB.samples
    a = wA if isinstance(wA, HyperspaceVector) else HyperspaceVector.from_signal(wA)
    b = wB if isinstance(wB, HyperspaceVector) else HyperspaceVector.from_signal(wB)
    return (a.signs != b.signs) | (a.log_magnitude != b.log_magnitude)


def compare_difference(wA: Waveform, wB: Waveform) -> ComparisonResult:
    """Consistent iff ``wA - wB`` is exactly zero everywhere."""
    _check_same_shape(wA, wB)
    violations = np.flatnonzero(_differs(wA, wB))
    if violations.size:
        return ComparisonResult(False, int(violations[0]))
    return ComparisonResult(True)


def compare_product(wA: Waveform, wB: Waveform) -> ComparisonResult:
    """Consistent iff ``wA * wB >= 0`` everywhere, decided on the exact signs."""
    _check_same_shape(wA, wB)
    violations = np.flatnonzero(sample_signs(wA) * sample_signs(wB) < 0)
    if violations.size:
        return ComparisonResult(False, int(violations[0]))
    return ComparisonResult(True)


def lowpass(sig: ContinuumSignal, cutoff: float) -> ContinuumSignal:
    """Apply the one-pole low-pass filter described in the module documentation."""
    if not (0.0 < cutoff < sig.sample_rate / 2):
        raise DomainError(
            f"Cutoff must be in (0, {sig.sample_rate / 2}) for sample rate "
            f"{sig.sample_rate}, got {cutoff}."
        )
    alpha = 1.0 - math.exp(-2.0 * math.pi * cutoff / sig.sample_rate)
    filtered = sp_signal.lfilter([alpha], [1.0, alpha - 1.0], sig.samples)
    return ContinuumSignal(filtered, sig.sample_rate, sig.stream_id)


def autocorrelation(sig: ContinuumSignal) -> np.ndarray:
    """Return the normalised autocorrelation for lags ``0..n-1`` (FFT based)."""
    x = sig.samples - sig.samples.mean()
    n = x.size
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(x, size)
    acf = np.fft.irfft(spectrum * np.conj(spectrum), size)[:n]
    if acf[0] == 0.0:
        raise DomainError("The autocorrelation of a constant signal is undefined.")
    return acf / acf[0]


def correlation_time(sig: ContinuumSignal) -> float:
    """Return the lag where the autocorrelation first drops below ``1/e``, in time units."""
    acf = autocorrelation(sig)
    below = np.flatnonzero(acf < 1.0 / math.e)
    if below.size == 0:
        raise DomainError("The autocorrelation never decays below 1/e; use more samples.")
    m = int(below[0])
    before, after = acf[m - 1], acf[m]
    lag = (m - 1) + (before - 1.0 / math.e) / (before - after)
    return float(lag) / sig.sample_rate


def hyperspace_elements(
    basis: Sequence[ContinuumSignal],
) -> list[tuple[tuple[int, ...], ContinuumSignal]]:
    """Return the products of all non-empty subsets of `basis`, keyed by 1-based indices."""
    if not basis:
        raise DomainError("The basis must contain at least one signal.")
    elements = []
    for size in range(1, len(basis) + 1):
        for subset in itertools.combinations(range(len(basis)), size):
            indices = tuple(i + 1 for i in subset)
            elements.append((indices, signal_product([basis[i] for i in subset])))
    return elements


def quantize_signs(sig: Waveform, k: int) -> RtwSequence:
    """Map the first `k` samples to ±1, zero counts as +1."""
    _check_count(k, "k")
    if k > len(sig):
        raise DomainError(f"Cannot quantize {k} components from {len(sig)} samples.")
    return RtwSequence(np.where(sample_signs(sig)[:k] >= 0, 1, -1))


def continuum_fingerprint(s: BitString, seed: CoinSeed, k: int) -> RtwSequence:
    return quantize_signs(string_hyperspace_vector(s, seed, k), k)


def write_signal_csv(sig: ContinuumSignal, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["tick", "value"])
        for tick, value in enumerate(sig.samples.tolist()):
            writer.writerow([tick, repr(value)])
    logger.debug("Wrote {n} samples to {path}", n=len(sig), path=path)
