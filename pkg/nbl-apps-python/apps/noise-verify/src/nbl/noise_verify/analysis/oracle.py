# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

"""
Exact false-accept probabilities for small instances.

:py:func:`exhaustive_oracle` enumerates every coin table of a given size.
Table number ``t`` holds ``R_{i,b}(j) = -1`` iff bit
``(2 * (i - 1) + flag) * k + (j - 1)`` of ``t`` is set, the layout of
:py:meth:`~nbl.noise_verify.common_coin.CoinTable.from_index`. With -1 as
bit 1 the fingerprint of a string is the XOR of its selected k-bit slices,
so all tables are evaluated at once on an integer array. Equal strings are
checked through :py:func:`~nbl.noise_verify.rtw_logic.fingerprint_k` on
every table instead, the path real sessions take.

:py:func:`exhaustive_gf2` does the same for the GF(2) inner product
baseline: ``k`` random vectors ``r_j`` over ``{0, 1}^L``, where bit
``(j - 1) * L + (i - 1)`` of the table number is ``r_j[i]``.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np
from loguru import logger

from ..common_coin import CoinTable
from ..errors import DomainError, OracleSizeError, ShapeMismatchError
from ..rtw_logic import fingerprint_k
from ..sequences import BitString

MAX_LENGTH = 3
MAX_COMPONENTS = 3

Signs = tuple[int, ...]


@dataclass(frozen=True)
class OracleResult:
    L: int
    k: int
    tables: int
    probabilities: dict[tuple[Signs, Signs], Fraction]
    false_rejections: int

    @property
    def expected(self) -> Fraction:
        return Fraction(1, 2**self.k)

    @property
    def exact(self) -> bool:
        return self.false_rejections == 0 and all(
            p == self.expected for p in self.probabilities.values()
        )


def _check_size(L: int, k: int) -> None:
    if L < 1 or k < 1:
        raise DomainError(f"L and k must be at least 1, got L={L}, k={k}.")
    if L > MAX_LENGTH or k > MAX_COMPONENTS:
        raise OracleSizeError(
            f"Exhaustive enumeration needs L <= {MAX_LENGTH} and k <= {MAX_COMPONENTS}, "
            f"got L={L}, k={k}."
        )


def all_strings(L: int) -> list[Signs]:
    return list(itertools.product((-1, 1), repeat=L))


def _unequal_pairs(strings: list[Signs]) -> Iterator[tuple[Signs, Signs]]:
    return ((s, t) for s, t in itertools.product(strings, repeat=2) if s != t)


def _rtw_codes(s: Signs, tables: np.ndarray, k: int) -> np.ndarray:
    mask = (1 << k) - 1
    code = np.zeros_like(tables)
    for i, bit in enumerate(s):
        code ^= (tables >> ((2 * i + (1 if bit > 0 else 0)) * k)) & mask
    return code


def _false_rejections(strings: list[Signs], L: int, k: int) -> int:
    """Count tables on which two fingerprint runs over the same string disagree."""
    inputs = [BitString(s) for s in strings]
    rejected = 0
    for index in range(1 << (2 * L * k)):
        table = CoinTable.from_index(index, L, k)
        rejected += sum(
            fingerprint_k(s, table, k) != fingerprint_k(BitString(s.bits.copy()), table, k)
            for s in inputs
        )
    return rejected


def exhaustive_oracle(L: int, k: int) -> OracleResult:
    """Return the exact false-accept probability of every ordered unequal pair."""
    _check_size(L, k)
    tables = np.arange(1 << (2 * L * k), dtype=np.uint32)
    strings = all_strings(L)
    codes = {s: _rtw_codes(s, tables, k) for s in strings}
    probabilities = {
        (s, t): Fraction(int(np.count_nonzero(codes[s] == codes[t])), tables.size)
        for s, t in _unequal_pairs(strings)
    }
    false_rejections = _false_rejections(strings, L, k)
    logger.debug("Enumerated {n} coin tables for L={L}, k={k}", n=tables.size, L=L, k=k)
    return OracleResult(L, k, int(tables.size), probabilities, false_rejections)


def _parity_vectors(s: Signs) -> np.ndarray:
    return (1 - np.array(s, dtype=np.int64)) // 2


def gf2_table_from_index(index: int, L: int, k: int) -> np.ndarray:
    """Return the ``(k, L)`` 0/1 matrix of random vectors numbered `index`."""
    return np.array([(index >> t) & 1 for t in range(k * L)], dtype=np.int64).reshape(k, L)


def gf2_baseline(s: BitString, s_prime: BitString, k: int, table: np.ndarray) -> bool:
    """
    Compare two strings with k GF(2) inner products.

    Maps ``x = (1 - s) / 2`` and returns whether all k parity checks
    ``<r_j, x> mod 2`` agree.
    """
    if len(s) != len(s_prime):
        raise ShapeMismatchError(
            f"The GF(2) baseline needs equal lengths, got {len(s)} and {len(s_prime)}."
        )
    _check_size(len(s), k)
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (k, len(s)):
        raise ShapeMismatchError(f"Expected a ({k}, {len(s)}) table, got {table.shape}.")
    x = _parity_vectors(tuple(s.bits.tolist()))
    y = _parity_vectors(tuple(s_prime.bits.tolist()))
    return bool(np.all((table @ x) % 2 == (table @ y) % 2))


def _gf2_disagreements(s: Signs, t: Signs, tables: np.ndarray, L: int, k: int) -> np.ndarray:
    differing = [i for i in range(L) if s[i] != t[i]]
    disagree = np.zeros(tables.size, dtype=bool)
    for j in range(k):
        parity = np.zeros_like(tables)
        for i in differing:
            parity ^= (tables >> (j * L + i)) & 1
        disagree |= parity.astype(bool)
    return disagree


def exhaustive_gf2(L: int, k: int) -> OracleResult:
    """Exact false-accept probabilities of the GF(2) baseline over all vector tables."""
    _check_size(L, k)
    tables = np.arange(1 << (L * k), dtype=np.uint32)
    strings = all_strings(L)
    probabilities = {
        (s, t): Fraction(
            int(np.count_nonzero(~_gf2_disagreements(s, t, tables, L, k))), tables.size
        )
        for s, t in _unequal_pairs(strings)
    }
    false_rejections = sum(
        int(np.count_nonzero(_gf2_disagreements(s, s, tables, L, k))) for s in strings
    )
    return OracleResult(L, k, int(tables.size), probabilities, false_rejections)


@dataclass(frozen=True)
class OracleReport:
    rtw: OracleResult
    gf2: OracleResult

    @property
    def L(self) -> int:
        return self.rtw.L

    @property
    def k(self) -> int:
        return self.rtw.k

    @property
    def baseline_equivalent(self) -> bool:
        return self.rtw.probabilities == self.gf2.probabilities

    @property
    def passed(self) -> bool:
        return self.rtw.exact and self.gf2.exact and self.baseline_equivalent


def oracle_report(L: int, k: int) -> OracleReport:
    report = OracleReport(exhaustive_oracle(L, k), exhaustive_gf2(L, k))
    logger.info(
        "L={L}, k={k}: {n} unequal pairs, expected {p}, all exact: {ok}",
        L=L,
        k=k,
        p=report.rtw.expected,
        n=len(report.rtw.probabilities),
        ok=report.rtw.exact,
    )
    return report
