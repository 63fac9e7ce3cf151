# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Time-average estimates of all orthogonality relations.

Each row estimates one time average ``<X * Y>`` over ``m`` samples and
compares it with its Kronecker delta target. A row passes when the
estimate is within ``4 / sqrt(m)`` of the target. Products of Gaussians
spread wider than ±1 products, so each row also carries the band
``4 * s / sqrt(m)`` with ``s`` the sample standard deviation of the product;
:py:attr:`OrthogonalityRow.within_band` checks against it.
"""

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy import stats

from ..common_coin import CoinSeed, derive_rtw_sequence
from ..continuum_logic import hyperspace_elements, make_basis, signal_product
from ..errors import DomainError
from ..rtw_logic import rtw_hyperspace_product

MIN_SAMPLES = 10_000
MIN_UNIFORMITY_PVALUE = 1e-6


@dataclass(frozen=True)
class OrthogonalityRow:
    name: str
    estimate: float
    target: float
    tolerance: float
    samples: int
    spread_band: float = 0.0

    @property
    def passed(self) -> bool:
        return abs(self.estimate - self.target) <= self.tolerance

    @property
    def within_band(self) -> bool:
        return abs(self.estimate - self.target) <= max(self.tolerance, self.spread_band)


@dataclass(frozen=True)
class OrthogonalityReport:
    n: int
    rows: tuple[OrthogonalityRow, ...]
    uniformity_pvalue: float

    @property
    def passed(self) -> bool:
        return (
            all(row.passed for row in self.rows)
            and self.uniformity_pvalue >= MIN_UNIFORMITY_PVALUE
        )


def time_average(name: str, product: np.ndarray, target: float) -> OrthogonalityRow:
    product = np.asarray(product, dtype=np.float64)
    scale = 4.0 / math.sqrt(product.size)
    return OrthogonalityRow(
        name=name,
        estimate=float(product.mean()),
        target=target,
        tolerance=scale,
        samples=int(product.size),
        spread_band=scale * float(product.std()),
    )


def _continuum_rows(seed: CoinSeed, n: int) -> list[OrthogonalityRow]:
    v = {m: sig.samples for m, sig in enumerate(make_basis(seed, 6, n), start=1)}
    h12 = v[1] * v[2]
    h34 = v[3] * v[4]
    h45 = v[4] * v[5]
    h56 = v[5] * v[6]
    quad = h12 * h34
    triple = h12 * v[3]
    rows = [
        time_average("basis_self", v[1] * v[1], 1.0),
        time_average("basis_cross", v[1] * v[2], 0.0),
    ]
    rows += [time_average(f"pair12_vs_basis{m}", h12 * v[m], 0.0) for m in (1, 2, 3)]
    rows += [time_average(f"quad1234_vs_basis{m}", quad * v[m], 0.0) for m in (1, 5)]
    rows.append(time_average("quad1234_vs_pair56", quad * h56, 0.0))
    rows += [time_average(f"triple123_vs_basis{m}", triple * v[m], 0.0) for m in (3, 4)]
    rows.append(time_average("triple123_vs_pair45", triple * h45, 0.0))

    elements = hyperspace_elements(make_basis(seed, 3, n))
    for (a_idx, a), (b_idx, b) in _upper_triangle(elements):
        name = f"gram_{_label(a_idx)}_{_label(b_idx)}"
        product = signal_product([a, b]).samples
        rows.append(time_average(name, product, 1.0 if a_idx == b_idx else 0.0))
    return rows


def _label(indices: tuple[int, ...]) -> str:
    return "v" + "".join(str(i) for i in indices)


def _upper_triangle(items: list) -> list:
    return [(items[i], items[j]) for i in range(len(items)) for j in range(i, len(items))]


def _rtw_rows(seed: CoinSeed, n: int) -> tuple[list[OrthogonalityRow], float]:
    r = {i: derive_rtw_sequence(seed, i, 1, n) for i in range(1, 7)}
    r1 = r[1].values.astype(np.float64)
    r1_low = derive_rtw_sequence(seed, 1, -1, n).values.astype(np.float64)
    product = rtw_hyperspace_product([r[i] for i in range(1, 6)])
    w = product.values.astype(np.float64)
    rows = [
        time_average("rtw_self", r1 * r1, 1.0),
        time_average("rtw_cross", r1 * r[2].values, 0.0),
        time_average("rtw_lagged", r1[:-1] * r1[1:], 0.0),
        time_average("rtw_branches", r1 * r1_low, 0.0),
    ]
    rows += [
        time_average(f"product5_vs_rtw{m}", w * r[m].values, 0.0) for m in range(1, 6)
    ]
    rows.append(time_average("product5_vs_rtw6", w * r[6].values, 0.0))
    rows.append(time_average("product5_self", w * w, 1.0))
    ones = int(np.count_nonzero(r1 > 0))
    pvalue = float(stats.chisquare([ones, n - ones]).pvalue)
    return rows, pvalue


def orthogonality_suite(seed: CoinSeed, n: int) -> OrthogonalityReport:
    """Estimate every orthogonality relation of the basis noises and RTW sequences."""
    if n < MIN_SAMPLES:
        raise DomainError(f"The orthogonality suite needs at least {MIN_SAMPLES} samples.")
    rtw_rows, pvalue = _rtw_rows(seed, n)
    report = OrthogonalityReport(n, tuple(_continuum_rows(seed, n) + rtw_rows), pvalue)
    failed = [row.name for row in report.rows if not row.passed]
    logger.info(
        "{count} time averages over n={n}, {failed} outside tolerance",
        count=len(report.rows),
        n=n,
        failed=len(failed),
    )
    if failed:
        logger.warning("Outside tolerance: {names}", names=", ".join(failed))
    return report
