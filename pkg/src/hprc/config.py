"""Run configuration."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields

from .errors import DomainError

SEED_ENV = "HPRC_RNG_SEED"
VERIFY_LEVELS = ("none", "sampled", "exhaustive")


@dataclass
class RunConfig:
    eps: float = 0.1
    rng_seed: int = 0
    max_rounds: int = 48
    c_const: float = 0.05  # regret constant in the step size and round count
    r_const: float = 0.01  # projection-gap threshold in the balanced rounding branch
    jl_delta: float = 0.5
    jl_c: float = 8.0  # JL dimension is ceil(jl_c * ln n / jl_delta^2)
    cut_fn: str | None = None  # overrides every hyperedge's kind when set
    verify_level: str = "none"

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise DomainError("eps must lie in (0, 1)")
        if not (0.1 <= self.jl_delta < 1.0):
            raise DomainError("jl_delta must lie in [0.1, 1)")
        if self.max_rounds < 1:
            raise DomainError("max_rounds must be positive")
        if self.c_const <= 0 or self.r_const <= 0 or self.jl_c <= 0:
            raise DomainError("constants must be positive")
        if self.verify_level not in VERIFY_LEVELS:
            raise DomainError(f"verify_level must be one of {VERIFY_LEVELS}")
        if not (0 <= int(self.rng_seed) < 2 ** 64):
            raise DomainError("rng_seed must be a 64-bit unsigned integer")
        self.rng_seed = int(self.rng_seed)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def with_env(self) -> "RunConfig":
        """Copy with the seed taken from HPRC_RNG_SEED when set."""
        raw = os.environ.get(SEED_ENV)
        if raw is None or raw == "":
            return self
        try:
            seed = int(raw, 0)
        except ValueError as exc:
            raise DomainError(f"{SEED_ENV} must be an integer") from exc
        data = asdict(self)
        data["rng_seed"] = seed
        return RunConfig(**data)

    def to_dict(self) -> dict:
        return asdict(self)
