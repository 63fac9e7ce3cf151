# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

from pathlib import Path

import pytest
from _pytest.logging import LogCaptureFixture
from loguru import logger
from nbl.noise_verify.common_coin import CoinSeed, write_seed_file

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def caplog(caplog: LogCaptureFixture):
    handler_id = logger.add(
        caplog.handler,
        format="{message}",
        level=0,
        filter=lambda record: record["level"].no >= caplog.handler.level,
        enqueue=False,  # Set to 'True' if your test is spawning child processes.
    )
    yield caplog
    logger.remove(handler_id)


@pytest.fixture
def seed() -> CoinSeed:
    return CoinSeed.from_int(7)


@pytest.fixture
def other_seed() -> CoinSeed:
    return CoinSeed.from_int(8)


@pytest.fixture
def seed_file(tmp_path: Path, seed: CoinSeed) -> Path:
    path = tmp_path / "shared.seed"
    write_seed_file(path, seed)
    return path


@pytest.fixture
def frame():
    def read(name: str) -> bytes:
        return bytes.fromhex((FIXTURES / "frames" / f"{name}.hex").read_text())

    return read
