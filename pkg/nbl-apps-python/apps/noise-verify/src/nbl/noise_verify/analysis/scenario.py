# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

import math
from dataclasses import dataclass

from loguru import logger

from ..errors import DomainError
from ..rtw_logic import compute_k, headline_k

SECONDS_PER_YEAR = 365.25 * 24 * 3600


@dataclass(frozen=True)
class ScenarioReport:
    """
    Time to verify an `L` bit string over a `channel_rate` bit/s channel.

    `k` follows the strict rule ``2**-k < epsilon``; `headline_k` is the
    nearest integer to ``log2(1 / epsilon)``. Both are reported since the two
    differ by one for epsilon values just below a power of two.
    """

    L: int
    channel_rate: float
    epsilon: float
    k: int
    headline_k: int

    @property
    def protocol_time(self) -> float:
        return self.k / self.channel_rate

    @property
    def headline_protocol_time(self) -> float:
        return self.headline_k / self.channel_rate

    @property
    def headline_error(self) -> float:
        """``0.5 ** headline_k``, the error bound the headline k actually achieves."""
        return math.ldexp(1.0, -self.headline_k)

    @property
    def naive_time(self) -> float:
        return self.L / self.channel_rate

    @property
    def naive_years(self) -> float:
        return self.naive_time / SECONDS_PER_YEAR


def scenario_report(L: int, channel_rate: float, epsilon: float) -> ScenarioReport:
    if L < 1:
        raise DomainError(f"L must be a positive number of bits, got {L}.")
    if not (math.isfinite(channel_rate) and channel_rate > 0):
        raise DomainError(f"Channel rate must be positive, got {channel_rate}.")
    report = ScenarioReport(
        L=int(L),
        channel_rate=float(channel_rate),
        epsilon=epsilon,
        k=compute_k(epsilon),
        headline_k=headline_k(epsilon),
    )
    logger.debug(
        "Protocol {p:.6g}s vs. naive {n:.6g}s", p=report.protocol_time, n=report.naive_time
    )
    return report
