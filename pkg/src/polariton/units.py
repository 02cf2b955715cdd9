"""Unit handling.

All computation runs in scaled units with c = hbar = eps0 = V0 = 1 and
frequencies measured in units of a reference frequency.  SI values are
converted only at the I/O boundary.
"""

from dataclasses import dataclass

from scipy import constants

# scaled units
C = 1.0
HBAR = 1.0
EPS0 = 1.0
MU0 = 1.0 / (EPS0 * C**2)
V0 = 1.0

SCALED = "scaled"
SI = "SI"


@dataclass(frozen=True)
class Units:
    """Unit system tag plus the reference frequency (rad/s) used for SI."""

    system: str = SCALED
    reference_frequency: float = 1.0

    def __post_init__(self):
        if self.system not in (SCALED, SI):
            raise ValueError(f"unknown unit system {self.system!r}")
        if not self.reference_frequency > 0:
            raise ValueError("reference_frequency must be positive")

    @property
    def is_si(self) -> bool:
        return self.system == SI

    def _f(self) -> float:
        return self.reference_frequency if self.is_si else 1.0

    # -- to scaled --------------------------------------------------------
    def frequency_in(self, omega):
        return omega / self._f()

    def coupling_in(self, g):
        return g / self._f() ** 2

    def wavenumber_in(self, k):
        return k * constants.c / self._f() if self.is_si else k

    # -- from scaled ------------------------------------------------------
    def frequency_out(self, omega):
        return omega * self._f()

    def wavenumber_out(self, k):
        return k * self._f() / constants.c if self.is_si else k

    def velocity_out(self, v):
        return v * constants.c if self.is_si else v

    def amplitude_out(self, value, kind: str):
        """Convert a scaled mode amplitude to SI, taking V0 = 1 m^3."""
        if not self.is_si:
            return value
        eps0, hbar, c = constants.epsilon_0, constants.hbar, constants.c
        d_unit = (eps0 * hbar * self.reference_frequency) ** 0.5
        if kind in ("displacement", "polarization"):
            return value * d_unit
        if kind == "electric":
            return value * d_unit / eps0
        if kind == "vector_potential":
            return value * d_unit / eps0 / self.reference_frequency
        if kind == "magnetic":
            return value * d_unit * c
        raise ValueError(f"unknown field kind {kind!r}")

    def label(self) -> str:
        if self.is_si:
            return f"SI (reference_frequency={self.reference_frequency:.10g} rad/s)"
        return "scaled (c=hbar=eps0=V0=1)"
