"""The spectral parameter lambda of ``lambda^2 u - Laplace(u) = f``."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import InputError, RegimeError


class Regime(str, enum.Enum):
    ZERO = "zero"
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class Frequency:
    """Spectral parameter with its regime.

    ``omega`` is the right-half-plane margin: complex values must satisfy
    ``Re(lambda) >= omega``.  Real values may be negative; the equation only
    sees ``lambda**2`` so computations use ``principal`` (the root with
    positive real part).
    """

    value: complex
    omega: float = 0.0

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise InputError(f"non-finite frequency {self.value!r}")
        object.__setattr__(self, "value", v)
        if v.imag != 0.0:
            if v.real <= 0.0:
                raise RegimeError(f"complex lambda needs Re(lambda) > 0, got {v}")
            if v.real < self.omega:
                raise RegimeError(f"Re(lambda) = {v.real} below margin omega = {self.omega}")

    @classmethod
    def polar(cls, modulus: float, angle: float, omega: float = 0.0) -> "Frequency":
        return cls(cmath.rect(modulus, angle), omega)

    @property
    def regime(self) -> Regime:
        if self.value == 0:
            return Regime.ZERO
        if self.value.imag == 0.0:
            return Regime.REAL
        return Regime.COMPLEX

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def principal(self) -> complex:
        v = self.value
        return -v if v.real < 0 else v

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def squared(self) -> complex:
        return self.value * self.value

    def __float__(self):
        if self.value.imag != 0.0:
            raise TypeError("complex frequency has no float value")
        return self.value.real

    def __repr__(self):
        v = self.value
        if v.imag == 0.0:
            return f"Frequency({v.real:g})"
        return f"Frequency({v.real:g}{v.imag:+g}j)"


def as_frequency(lam) -> Frequency:
    return lam if isinstance(lam, Frequency) else Frequency(lam)
