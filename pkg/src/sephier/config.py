from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Caps:
    """Size limits. Hitting one raises CapExceeded (CLI exit code 2)."""

    monoid: int = 4096
    downset: int = 1 << 20
    tt_entries: int = 20000
    iterations: int = 10**6
    idempotent_search: int = 1 << 16
    expressions: int = 20000
    check_length: int = 8

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 1:
                raise ValueError(f"cap {name} must be >= 1")

    def to_json(self) -> dict:
        return asdict(self)
