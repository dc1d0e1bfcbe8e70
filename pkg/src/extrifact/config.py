"""Run settings shared by the CLI and the scripts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import exactlin as el
from .errors import InputError

MODES = ("exact", "cap")
FORMATS = ("json", "markdown")


@dataclass(frozen=True)
class SearchConfig:
    """How T*F decompositions are searched and how many workers enumerate."""

    mode: str = "exact"
    cap_extra: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}")
        if self.cap_extra < 0:
            raise InputError("cap_extra must be non-negative")
        if self.jobs < 1:
            raise InputError("jobs must be positive")


@dataclass(frozen=True)
class RunConfig:
    field_char: int = 2
    fmt: str = "json"
    timing: bool = False
    search: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self):
        if not el._is_prime(self.field_char):
            raise InputError(f"field characteristic must be prime, got {self.field_char}")
        if self.fmt not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}")

    @classmethod
    def resolve(cls, field_char: Optional[int] = None, **kw) -> "RunConfig":
        """Explicit field_char, else $EXTRIFACT_FIELD_CHAR, else 2."""
        p = field_char if field_char is not None else el.characteristic_from_env(2)
        return cls(field_char=p, **kw)
