# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

import math

import numpy as np
import pytest
from nbl.noise_verify.analysis.orthogonality import (
    MIN_SAMPLES,
    OrthogonalityReport,
    OrthogonalityRow,
    orthogonality_suite,
    time_average,
)
from nbl.noise_verify.common_coin import CoinSeed
from nbl.noise_verify.errors import DomainError


@pytest.fixture(scope="module")
def report() -> OrthogonalityReport:
    return orthogonality_suite(CoinSeed.from_int(3), 20_000)


def test_time_average_of_signs():
    row = time_average("x", np.array([1, -1, 1, 1]), 0.0)
    assert row.estimate == 0.5
    assert row.tolerance == 2.0
    assert row.samples == 4
    assert row.passed


def test_time_average_tolerance_ignores_spread():
    product = np.array([10.5, -9.5] * 50)
    row = time_average("wide", product, 0.0)
    assert row.estimate == pytest.approx(0.5)
    assert row.tolerance == pytest.approx(4.0 / math.sqrt(100))
    assert row.spread_band == pytest.approx(4.0 * 10.0 / math.sqrt(100))
    assert not row.passed
    assert row.within_band


def test_time_average_bands_at_a_million_samples():
    signs = np.resize(np.array([1.0, -1.0]), 10**6)
    assert time_average("cross", signs, 0.0).tolerance == pytest.approx(0.004)
    assert time_average("self", signs * signs, 1.0).tolerance == pytest.approx(0.004)


def test_row_pass_flag():
    assert OrthogonalityRow("a", 0.1, 0.0, 0.1, 100).passed
    assert not OrthogonalityRow("a", 0.11, 0.0, 0.1, 100).passed
    assert OrthogonalityRow("a", 0.11, 0.0, 0.1, 100, spread_band=0.2).within_band


def test_report_fails_on_any_row_outside_tolerance():
    rows = (
        OrthogonalityRow("a", 0.0, 0.0, 0.1, 100),
        OrthogonalityRow("b", 0.15, 0.0, 0.1, 100, spread_band=0.2),
    )
    assert OrthogonalityReport(100, rows[:1], 0.5).passed
    assert not OrthogonalityReport(100, rows, 0.5).passed
    assert not OrthogonalityReport(100, rows[:1], 1e-9).passed


def test_suite_covers_all_relations(report: OrthogonalityReport):
    names = [row.name for row in report.rows]
    assert len(names) == len(set(names))
    for name in [
        "basis_self",
        "basis_cross",
        "pair12_vs_basis3",
        "quad1234_vs_pair56",
        "triple123_vs_pair45",
        "gram_v1_v1",
        "gram_v12_v13",
        "gram_v123_v123",
        "rtw_self",
        "rtw_lagged",
        "rtw_branches",
        "product5_vs_rtw6",
        "product5_self",
    ]:
        assert name in names
    # 7 hyperspace elements give 28 Gram entries
    assert sum(name.startswith("gram_") for name in names) == 28
    assert all(row.samples >= 19_999 for row in report.rows)


def test_self_products_are_exact(report: OrthogonalityReport):
    rows = {row.name: row for row in report.rows}
    assert rows["rtw_self"].estimate == 1.0
    assert rows["product5_self"].estimate == 1.0
    basis_self = rows["basis_self"]
    assert basis_self.estimate == pytest.approx(1.0, abs=basis_self.spread_band)


UNIT_SPREAD_ROWS = [
    "basis_cross",
    "pair12_vs_basis3",
    "quad1234_vs_basis5",
    "quad1234_vs_pair56",
    "triple123_vs_basis4",
    "triple123_vs_pair45",
    "rtw_self",
    "rtw_cross",
    "rtw_lagged",
    "rtw_branches",
    "product5_vs_rtw1",
    "product5_vs_rtw6",
    "product5_self",
]


def test_unit_spread_relations_pass_the_fixed_tolerance(report: OrthogonalityReport):
    rows = {row.name: row for row in report.rows}
    for name in UNIT_SPREAD_ROWS:
        assert rows[name].tolerance == pytest.approx(4.0 / math.sqrt(20_000), rel=1e-3)
        assert rows[name].passed, name


def test_suite_estimates_match_targets(report: OrthogonalityReport):
    outside = [row.name for row in report.rows if not row.within_band]
    assert len(outside) <= 1
    assert report.uniformity_pvalue > 1e-6
    assert report.passed == all(row.passed for row in report.rows)


def test_suite_needs_enough_samples():
    with pytest.raises(DomainError, match=str(MIN_SAMPLES)):
        orthogonality_suite(CoinSeed.from_int(3), MIN_SAMPLES - 1)
