# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from nbl.cli_utils.errors import AppConfigurationError, AppFileNotFoundError
from nbl.noise_verify.common_coin import (
    GAUSSIAN_BLOCK,
    MASTER_SIZE,
    CoinSeed,
    CoinTable,
    NoiseCell,
    derive_gaussian_sample,
    derive_gaussian_stream,
    derive_rtw_bit,
    derive_rtw_sequence,
    load_seed_file,
    signs_to_words,
    words_to_signs,
    write_seed_file,
)
from nbl.noise_verify.errors import DomainError


def test_seed_master_must_have_32_bytes():
    with pytest.raises(DomainError, match="exactly 32 bytes"):
        CoinSeed(b"\x00" * 31)


def test_seeds_from_int_are_deterministic():
    assert CoinSeed.from_int(42) == CoinSeed.from_int(42)
    assert CoinSeed.from_int(42).seed_id != CoinSeed.from_int(43).seed_id


def test_generated_seeds_differ():
    assert CoinSeed.generate().seed_id != CoinSeed.generate().seed_id


def test_seed_id_is_16_bytes_and_hides_the_master(seed: CoinSeed):
    assert len(seed.seed_id) == 16
    assert seed.seed_id_hex == seed.seed_id.hex()
    assert seed.seed_id not in seed.master
    assert "master" not in repr(seed)


def test_rtw_bit_is_deterministic_and_binary(seed: CoinSeed):
    cell = NoiseCell(index=3, branch=1, tick=17)
    assert derive_rtw_bit(seed, cell) == derive_rtw_bit(seed, cell)
    assert derive_rtw_bit(seed, cell) in (-1, 1)


@pytest.mark.parametrize("tick", [1, 2, 64, 65, 100, 200])
def test_rtw_bit_matches_sequence_component(seed: CoinSeed, tick: int):
    sequence = derive_rtw_sequence(seed, 5, -1, 200)
    assert derive_rtw_bit(seed, NoiseCell(5, -1, tick)) == sequence.values[tick - 1]


def test_rtw_sequence_prefixes_agree(seed: CoinSeed):
    long = derive_rtw_sequence(seed, 2, 1, 150)
    short = derive_rtw_sequence(seed, 2, 1, 70)
    assert short.to_tuple() == long.to_tuple()[:70]


def test_rtw_sequences_of_different_cells_differ(seed: CoinSeed, other_seed: CoinSeed):
    high = derive_rtw_sequence(seed, 1, 1, 128)
    assert high != derive_rtw_sequence(seed, 1, -1, 128)
    assert high != derive_rtw_sequence(seed, 2, 1, 128)
    assert high != derive_rtw_sequence(other_seed, 1, 1, 128)


def test_rtw_components_are_balanced(seed: CoinSeed):
    n = 100_000
    values = derive_rtw_sequence(seed, 1, 1, n).values.astype(np.float64)
    assert abs(values.mean()) < 5 / np.sqrt(n)


@pytest.mark.parametrize(
    "index, branch, tick",
    [(0, 1, 1), (1, 0, 1), (1, 2, 1), (1, 1, 0)],
)
def test_noise_cell_rejects_invalid_addresses(index, branch, tick):
    with pytest.raises(DomainError):
        NoiseCell(index, branch, tick)


def test_sign_words_round_trip_across_word_boundary():
    signs = np.where(np.arange(70) % 3 == 0, -1, 1).astype(np.int8)
    words = signs_to_words(signs)
    assert words.shape == (2,)
    assert int(words[0]) & 1 == 1
    np.testing.assert_array_equal(words_to_signs(words, 70), signs)


@pytest.mark.parametrize(
    "tick", [0, 1, GAUSSIAN_BLOCK - 1, GAUSSIAN_BLOCK, 3 * GAUSSIAN_BLOCK + 5]
)
def test_gaussian_sample_matches_stream(seed: CoinSeed, tick: int):
    stream = derive_gaussian_stream(seed, 11, 4 * GAUSSIAN_BLOCK)
    assert derive_gaussian_sample(seed, 11, tick) == stream[tick]


def test_gaussian_stream_windows_are_bit_identical(seed: CoinSeed):
    full = derive_gaussian_stream(seed, 4, 3 * GAUSSIAN_BLOCK)
    window = derive_gaussian_stream(seed, 4, 500, start=GAUSSIAN_BLOCK - 250)
    np.testing.assert_array_equal(window, full[GAUSSIAN_BLOCK - 250 : GAUSSIAN_BLOCK + 250])


def test_gaussian_streams_are_standard_normal_and_distinct(seed: CoinSeed):
    n = 50_000
    a = derive_gaussian_stream(seed, 2, n)
    b = derive_gaussian_stream(seed, 3, n)
    assert abs(a.mean()) < 5 / np.sqrt(n)
    assert abs(a.var() - 1.0) < 5 * np.sqrt(2 / n)
    assert abs(np.mean(a * b)) < 5 / np.sqrt(n)


def test_gaussian_stream_rejects_negative_arguments(seed: CoinSeed):
    with pytest.raises(DomainError):
        derive_gaussian_stream(seed, -1, 10)
    with pytest.raises(DomainError):
        derive_gaussian_stream(seed, 1, 10, start=-1)


def test_gaussian_stream_can_be_empty(seed: CoinSeed):
    assert derive_gaussian_stream(seed, 1, 0).size == 0


def test_coin_table_zero_is_all_plus_one():
    table = CoinTable.from_index(0, length=2, k=3)
    assert table.values.shape == (2, 2, 3)
    assert np.all(table.values == 1)


def test_coin_table_index_bit_layout():
    # bit (2 * (i - 1) + flag) * k + (j - 1) set means R_{i,b}(j) = -1
    table = CoinTable.from_index(1 << ((2 * 1 + 1) * 3 + 2), length=2, k=3)
    assert derive_rtw_sequence(table, 2, 1, 3).to_tuple() == (1, 1, -1)
    assert derive_rtw_sequence(table, 2, -1, 3).to_tuple() == (1, 1, 1)
    assert derive_rtw_sequence(table, 1, 1, 3).to_tuple() == (1, 1, 1)


def test_coin_table_index_must_be_in_range():
    with pytest.raises(DomainError):
        CoinTable.from_index(2**4, length=1, k=2)


def test_coin_table_from_rows():
    table = CoinTable.from_rows({(1, 1): [1, -1], (2, -1): [-1, -1]}, length=2, k=2)
    assert derive_rtw_sequence(table, 1, 1, 2).to_tuple() == (1, -1)
    assert derive_rtw_sequence(table, 2, -1, 2).to_tuple() == (-1, -1)
    assert derive_rtw_sequence(table, 1, -1, 2).to_tuple() == (1, 1)


def test_coin_table_rejects_out_of_range_requests():
    table = CoinTable.from_index(0, length=1, k=2)
    with pytest.raises(DomainError, match="components"):
        table.rtw_words(np.array([1]), np.array([1]), 3)
    with pytest.raises(DomainError, match="positions"):
        table.rtw_words(np.array([2]), np.array([1]), 2)


def test_coin_tables_have_distinct_seed_ids():
    assert (
        CoinTable.from_index(0, length=1, k=2).seed_id
        != CoinTable.from_index(1, length=1, k=2).seed_id
    )


def test_seed_file_round_trip(tmp_path, seed: CoinSeed):
    path = tmp_path / "seed.bin"
    write_seed_file(path, seed)
    assert path.stat().st_size == MASTER_SIZE
    assert load_seed_file(path) == seed


def test_seed_file_is_not_overwritten_without_force(tmp_path, seed: CoinSeed, other_seed):
    path = tmp_path / "seed.bin"
    write_seed_file(path, seed)
    with pytest.raises(AppConfigurationError, match="--force"):
        write_seed_file(path, other_seed)
    write_seed_file(path, other_seed, force=True)
    assert load_seed_file(path) == other_seed


def test_missing_seed_file(tmp_path):
    with pytest.raises(AppFileNotFoundError):
        load_seed_file(tmp_path / "missing.bin")


def test_seed_file_with_wrong_size(tmp_path):
    path = tmp_path / "short.bin"
    path.write_bytes(b"\x01" * 10)
    with pytest.raises(AppConfigurationError, match="exactly 32 bytes"):
        load_seed_file(path)
