# SPDX-FileCopyrightText: 2024 grow platform GmbH
#
# SPDX-License-Identifier: MIT

import math
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from loguru import logger
from nbl.cli_utils.errors import AppConfigurationError, AppFileNotFoundError
from pydantic import BaseSettings, root_validator, validator

from .common_coin import MASTER_SIZE, CoinSeed, load_seed_file
from .rtw_logic import epsilon_for_k


class CliConfig(BaseSettings):
    """
    Options shared by the subcommands.

    Every field falls back to an environment variable with the prefix
    ``NOISE_VERIFY_``, e.g. ``NOISE_VERIFY_SEED_FILE``. Command line values win.
    """

    seed_file: Optional[Path] = None
    epsilon: Optional[float] = None
    k: Optional[int] = None
    format: Literal["csv", "text"] = "text"

    class Config:
        env_prefix = "NOISE_VERIFY_"

    @validator("seed_file")
    def validate_seed_file(cls, v: Optional[Path]):
        if v is None:
            return None
        if not v.is_file():
            raise AppFileNotFoundError(f"Seed file `{v}` doesn't exist!")
        size = v.stat().st_size
        if size != MASTER_SIZE:
            raise AppConfigurationError(
                f"Seed file `{v}` must contain exactly {MASTER_SIZE} bytes, "
                f"but it has {size} bytes."
            )
        return v

    @validator("epsilon")
    def validate_epsilon(cls, v: Optional[float]):
        if v is not None and not (math.isfinite(v) and 0.0 < v < 1.0):
            raise ValueError(f"epsilon must be in (0, 1), got {v}")
        return v

    @validator("k")
    def validate_k(cls, v: Optional[int]):
        if v is not None and v < 1:
            raise ValueError(f"k must be at least 1, got {v}")
        return v

    @root_validator(skip_on_failure=True)
    def validate_parameter_choice(cls, values: Dict[str, Any]):
        if values.get("epsilon") is not None and values.get("k") is not None:
            raise AppConfigurationError(
                "Pass either --epsilon or --k, not both. "
                "Check NOISE_VERIFY_EPSILON and NOISE_VERIFY_K as well."
            )
        return values

    @classmethod
    def from_options(cls, **options: Any) -> "CliConfig":
        """Build the configuration from click options; unset options use the environment."""
        return cls(**{name: value for name, value in options.items() if value is not None})

    def required_epsilon(self) -> float:
        """Return ε, derived from k when only k is configured."""
        epsilon = self.optional_epsilon()
        if epsilon is None:
            raise AppConfigurationError("An error bound is required, pass --epsilon or --k.")
        return epsilon

    def optional_epsilon(self) -> Optional[float]:
        if self.k is not None:
            return epsilon_for_k(self.k)
        return self.epsilon

    def load_seed(self) -> CoinSeed:
        if self.seed_file is None:
            raise AppConfigurationError(
                "No seed file given, pass --seed-file or set NOISE_VERIFY_SEED_FILE."
            )
        return load_seed_file(self.seed_file)

    def harness_seed(self, seed: Optional[int]) -> CoinSeed:
        """
        Return the coin seed of an analysis run.

        A seed file wins over `seed`; without either a fresh seed is drawn.
        """
        if self.seed_file is not None:
            return load_seed_file(self.seed_file)
        if seed is not None:
            return CoinSeed.from_int(seed)
        coin = CoinSeed.generate()
        logger.info("Using fresh seed {seed_id}", seed_id=coin.seed_id_hex)
        return coin
