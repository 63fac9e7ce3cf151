# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

import itertools
from fractions import Fraction

import numpy as np
import pytest
from nbl.noise_verify.analysis import oracle
from nbl.noise_verify.analysis.oracle import (
    all_strings,
    exhaustive_gf2,
    exhaustive_oracle,
    gf2_baseline,
    gf2_table_from_index,
    oracle_report,
)
from nbl.noise_verify.common_coin import CoinTable
from nbl.noise_verify.errors import DomainError, OracleSizeError, ShapeMismatchError
from nbl.noise_verify.rtw_logic import BitString, fingerprint_from_table


@pytest.mark.parametrize("L, k", [(1, 1), (1, 2), (2, 2), (3, 2), (1, 3)])
def test_oracle_is_exact(L, k):
    result = exhaustive_oracle(L, k)
    assert result.tables == 2 ** (2 * L * k)
    assert len(result.probabilities) == 2**L * (2**L - 1)
    assert result.false_rejections == 0
    assert set(result.probabilities.values()) == {Fraction(1, 2**k)}
    assert result.exact


def test_single_bit_oracle():
    result = exhaustive_oracle(1, 1)
    assert result.probabilities == {
        ((-1,), (1,)): Fraction(1, 2),
        ((1,), (-1,)): Fraction(1, 2),
    }


def test_oracle_agrees_with_coin_tables():
    L, k = 2, 2
    s, t = BitString.of(1, -1), BitString.of(-1, -1)
    equal = sum(
        fingerprint_from_table(s, table) == fingerprint_from_table(t, table)
        for table in (CoinTable.from_index(i, L, k) for i in range(2 ** (2 * L * k)))
    )
    assert equal == 64
    assert exhaustive_oracle(L, k).probabilities[((1, -1), (-1, -1))] == Fraction(64, 256)


@pytest.mark.parametrize("L, k", [(1, 1), (2, 2), (3, 2), (2, 3)])
def test_gf2_baseline_is_equivalent(L, k):
    report = oracle_report(L, k)
    assert report.gf2.tables == 2 ** (L * k)
    assert report.gf2.exact
    assert report.baseline_equivalent
    assert report.passed
    assert (report.L, report.k) == (L, k)


@pytest.mark.parametrize("L, k", [(4, 1), (9, 1), (1, 4), (4, 3)])
def test_oracle_size_bound(L, k):
    with pytest.raises(OracleSizeError):
        exhaustive_oracle(L, k)
    with pytest.raises(OracleSizeError):
        exhaustive_gf2(L, k)
    s = BitString(np.ones(L, dtype=np.int8))
    with pytest.raises(OracleSizeError):
        gf2_baseline(s, s, k, np.zeros((k, L), dtype=np.int64))


def test_oracle_rejects_empty_sizes():
    with pytest.raises(DomainError):
        exhaustive_oracle(0, 1)


def test_all_strings():
    assert all_strings(2) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_gf2_table_from_index():
    table = gf2_table_from_index(0b10_0110, L=3, k=2)
    np.testing.assert_array_equal(table, [[0, 1, 1], [0, 0, 1]])


def test_gf2_baseline():
    s = BitString.of(1, -1, 1)
    t = BitString.of(1, 1, 1)
    # x = (0, 1, 0) and y = (0, 0, 0)
    assert gf2_baseline(s, t, 1, np.array([[1, 0, 1]]))
    assert not gf2_baseline(s, t, 1, np.array([[0, 1, 0]]))
    assert not gf2_baseline(s, t, 2, np.array([[1, 0, 1], [1, 1, 0]]))
    assert gf2_baseline(s, s, 2, np.array([[1, 1, 1], [0, 1, 0]]))


def test_gf2_baseline_rejects_mismatched_shapes():
    s = BitString.of(1, -1)
    with pytest.raises(ShapeMismatchError):
        gf2_baseline(s, BitString.of(1), 1, np.array([[1, 0]]))
    with pytest.raises(ShapeMismatchError):
        gf2_baseline(s, s, 2, np.array([[1, 0]]))


@pytest.mark.parametrize("L, k", [(1, 2), (2, 2), (3, 2)])
def test_each_component_agrees_on_half_the_tables(L, k):
    tables = [CoinTable.from_index(i, L, k) for i in range(2 ** (2 * L * k))]
    components = {
        s: np.array([fingerprint_from_table(BitString.of(*s), t).values for t in tables])
        for s in all_strings(L)
    }
    for s, t in itertools.permutations(components, 2):
        agreeing = np.count_nonzero(components[s] == components[t], axis=0)
        assert agreeing.tolist() == [len(tables) // 2] * k


def test_false_rejections_run_the_fingerprint_twice(mocker):
    runs = mocker.spy(oracle, "fingerprint_k")
    result = exhaustive_oracle(2, 1)
    assert runs.call_count == 2 * 2**4 * 2**2
    assert result.false_rejections == 0


def test_false_rejections_are_counted(mocker):
    mocker.patch.object(oracle, "fingerprint_k", side_effect=lambda s, table, k: object())
    result = exhaustive_oracle(1, 1)
    assert result.false_rejections == 2**2 * 2**1
    assert not result.exact
