from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional


@dataclass(frozen=True)
class Residual:
    """Largest absolute discrepancy found by an exact identity check."""

    value: Fraction
    witness: Optional[Any] = None

    @classmethod
    def zero(cls) -> "Residual":
        return cls(Fraction(0))

    @property
    def exact(self) -> bool:
        return self.value == 0

    def worse(self, value: Fraction, witness: Any) -> "Residual":
        value = abs(Fraction(value))
        return Residual(value, witness) if value > self.value else self
