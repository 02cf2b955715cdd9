"""Lossless multi-resonance dielectric media.

The macroscopic permittivity is a sum of real Lorentz poles with an
optional effective-mass shift of each resonance,

    eps(omega, k) = 1 + sum_j g_j / (omega_j^2 + beta_j c^2 k^2 - omega^2),

so a medium with M resonances carries M + 1 transverse polariton branches.
A discrete molecular medium is described by :class:`MicroscopicMedium`
and mapped onto the same pole-residue form through the Clausius-Mossotti
local-field relation by :func:`cm_to_lorentz`.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Tuple

import numpy as np

from ._roots import solve_increasing
from .errors import DegenerateMedium, MediumError, PoleHit
from .units import C, EPS0, Units

POLE_RTOL = 1e-12


@dataclass(frozen=True)
class Resonance:
    """One transverse resonance of the macroscopic medium.

    Parameters
    ----------
    omega : float
        Resonance frequency omega_j.
    g : float
        Pole residue of the permittivity (units of frequency squared).
    beta : float
        Dimensionless effective-mass coefficient; the resonance moves to
        ``omega_j^2 + beta_j c^2 k^2``.
    """

    omega: float
    g: float
    beta: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise MediumError(f"resonance frequency must be positive, got {self.omega}")
        if not (np.isfinite(self.g) and self.g > 0):
            raise MediumError(f"coupling strength must be positive, got {self.g}")
        if not (np.isfinite(self.beta) and self.beta >= 0):
            raise MediumError(f"beta must be non-negative, got {self.beta}")


@dataclass(frozen=True)
class Medium:
    """Ordered set of resonances; the empty medium is vacuum."""

    resonances: Tuple[Resonance, ...] = ()
    units: Units = field(default_factory=Units)

    def __post_init__(self):
        res = tuple(self.resonances)
        object.__setattr__(self, "resonances", res)
        for a, b in zip(res, res[1:]):
            if not a.omega < b.omega:
                raise MediumError("resonances must be strictly ascending in omega")

    @classmethod
    def from_arrays(cls, omegas, gs, betas=None, units=None) -> "Medium":
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        gs = np.atleast_1d(np.asarray(gs, dtype=float))
        betas = np.zeros_like(omegas) if betas is None else np.atleast_1d(np.asarray(betas, dtype=float))
        if not (omegas.shape == gs.shape == betas.shape):
            raise MediumError("omega, g and beta arrays must have equal length")
        res = tuple(Resonance(float(w), float(g), float(b)) for w, g, b in zip(omegas, gs, betas))
        return cls(res, units if units is not None else Units())

    @property
    def M(self) -> int:
        return len(self.resonances)

    @property
    def n_branches(self) -> int:
        return self.M + 1

    @cached_property
    def omegas(self) -> np.ndarray:
        return np.array([r.omega for r in self.resonances], dtype=float)

    @cached_property
    def gs(self) -> np.ndarray:
        return np.array([r.g for r in self.resonances], dtype=float)

    @cached_property
    def betas(self) -> np.ndarray:
        return np.array([r.beta for r in self.resonances], dtype=float)

    @property
    def spatially_dispersive(self) -> bool:
        return bool(np.any(self.betas > 0))

    def shifted_poles(self, k: float) -> np.ndarray:
        """Squared resonance frequencies at wavenumber ``k`` (unsorted)."""
        return self.omegas**2 + self.betas * C**2 * k**2


def permittivity(medium: Medium, omega, k=0.0):
    """Relative permittivity eps(omega, k).

    Works elementwise on arrays.  Raises :class:`PoleHit` when omega^2 lies
    within a relative 1e-12 of a (shifted) pole.
    """
    omega = np.asarray(omega, dtype=float)
    k = np.asarray(k, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be non-negative")
    x = omega**2
    poles = medium.omegas**2 + medium.betas * C**2 * k[..., None] ** 2
    denom = poles - x[..., None]
    if np.any(np.abs(denom) < POLE_RTOL * poles):
        raise PoleHit(f"omega^2 = {x} sits on a permittivity pole")
    eps = 1.0 + np.sum(medium.gs / denom, axis=-1)
    return float(eps) if eps.ndim == 0 else eps


@dataclass(frozen=True)
class MolecularResonance:
    """Molecular transition with polarizability residue ``alpha``."""

    omega: float
    alpha: float

    def __post_init__(self):
        if not (np.isfinite(self.omega) and self.omega > 0):
            raise MediumError(f"transition frequency must be positive, got {self.omega}")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise MediumError(f"polarizability residue must be positive, got {self.alpha}")


@dataclass(frozen=True)
class MicroscopicMedium:
    """Discrete medium of identical molecules at number density ``rho``."""

    rho: float
    resonances: Tuple[MolecularResonance, ...]
    units: Units = field(default_factory=Units)

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise MediumError(f"number density must be positive, got {self.rho}")
        res = tuple(self.resonances)
        object.__setattr__(self, "resonances", res)
        for a, b in zip(res, res[1:]):
            if not a.omega < b.omega:
                raise MediumError("molecular resonances must be strictly ascending in omega")

    @classmethod
    def from_arrays(cls, rho: float, omegas: Sequence[float], alphas: Sequence[float], units=None):
        res = tuple(MolecularResonance(float(w), float(a)) for w, a in zip(omegas, alphas))
        return cls(float(rho), res, units if units is not None else Units())

    @property
    def omegas(self) -> np.ndarray:
        return np.array([r.omega for r in self.resonances], dtype=float)

    @property
    def strengths(self) -> np.ndarray:
        """Macroscopic oscillator strengths s_j = rho alpha_j / eps0."""
        return self.rho * np.array([r.alpha for r in self.resonances], dtype=float) / EPS0


def susceptibility_sum(micro: MicroscopicMedium, omega):
    """Bare sum chi(omega) = sum_j s_j / (omega_j^2 - omega^2)."""
    x = np.asarray(omega, dtype=float) ** 2
    chi = np.sum(micro.strengths / (micro.omegas**2 - x[..., None]), axis=-1)
    return float(chi) if chi.ndim == 0 else chi


def clausius_mossotti_permittivity(micro: MicroscopicMedium, omega):
    """Solve (eps - 1)/(eps + 2) = chi/3 for eps."""
    chi = np.asarray(susceptibility_sum(micro, omega))
    eps = (1.0 + 2.0 * chi / 3.0) / (1.0 - chi / 3.0)
    return float(eps) if eps.ndim == 0 else eps


def bare_lorentz(micro: MicroscopicMedium) -> Medium:
    """Map without local-field correction: eps = 1 + chi."""
    return Medium.from_arrays(micro.omegas, micro.strengths, units=micro.units)


def cm_to_lorentz(micro: MicroscopicMedium) -> Medium:
    """Rewrite the Clausius-Mossotti permittivity in pole-residue form.

    The effective poles are the roots of chi(x) = 3 in x = omega^2, one in
    each interval (omega_{j-1}^2, omega_j^2) with omega_0 = 0; the residue
    at a root is 9 / chi'(x).  For a single transition the shift has the
    closed form ``omega_1^2 - s/3`` with residue ``s``.
    """
    w2 = micro.omegas**2
    s = micro.strengths
    M = len(w2)
    if M == 0:
        return Medium((), micro.units)
    if np.sum(s / w2) >= 3.0:
        raise DegenerateMedium(
            "local-field map is unstable: sum_j s_j/omega_j^2 >= 3 (polarization catastrophe)"
        )
    if M == 1:
        x_eff = np.array([w2[0] - s[0] / 3.0])
        g_eff = s.copy()
    else:
        def excess(x, idx):
            d = w2 - x[:, None]
            return np.sum(s / d, axis=1) - 3.0, np.sum(s / d**2, axis=1)

        lo = np.concatenate(([0.0], w2[:-1]))
        flo = np.full(M, -np.inf)
        flo[0] = np.sum(s / w2) - 3.0
        x_eff = solve_increasing(excess, lo, w2, flo=flo, fhi=np.full(M, np.inf))
        g_eff = 9.0 / np.sum(s / (w2 - x_eff[:, None]) ** 2, axis=1)
    if np.any(np.diff(x_eff) <= POLE_RTOL * x_eff[1:]):
        raise DegenerateMedium("effective poles collide")
    return Medium.from_arrays(np.sqrt(x_eff), g_eff, units=micro.units)
