"""Mode-expansion coefficients of the quantized transverse fields.

For a polariton mode (k, m, lambda) the macroscopic displacement field has
the c-number amplitude

    d = sqrt(eps0 hbar k v_g / (2 V0)) * n,

multiplying i e^(lambda) [exp(i(k.r - omega t)) P - h.c.].  The other
fields follow mode by mode: e = d / (eps0 eps_r), p = d - eps0 e,
a = e / omega and h = k e / (omega mu0).  Only magnitudes are computed;
the factor i and the plane-wave phase are carried as a tag.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .dispersion import BranchPoint, solve_branches
from .medium import Medium
from .units import C, EPS0, HBAR, MU0, V0

DISPLACEMENT = "displacement"
ELECTRIC = "electric"
POLARIZATION = "polarization"
VECTOR_POTENTIAL = "vector_potential"
MAGNETIC = "magnetic"
FIELD_KINDS = (DISPLACEMENT, ELECTRIC, POLARIZATION, VECTOR_POTENTIAL, MAGNETIC)

PHASE_CONVENTION = "i e_lambda(k) [exp(i(k.r - omega t)) P - h.c.]"
SUM_RULE_RTOL = 1e-10

COMMUTATOR_PAIRS = ((DISPLACEMENT, VECTOR_POTENTIAL), (ELECTRIC, VECTOR_POTENTIAL))


@dataclass(frozen=True)
class ModeAmplitude:
    kind: str
    k: float
    m: int
    lam: int
    magnitude: float
    local: bool = False
    phase_convention: str = PHASE_CONVENTION


def displacement_magnitude(k, v_g, n):
    """sqrt(eps0 hbar k v_g / (2 V0)) n; elementwise on arrays."""
    return np.sqrt(EPS0 * HBAR * k * v_g / (2.0 * V0)) * n


def mode_amplitude(point: BranchPoint, kind: str, lam: int = 1) -> ModeAmplitude:
    """Amplitude of one field kind for the mode ``point``.

    The result does not depend on the polarization index or on the
    direction of k.
    """
    if lam not in (1, 2):
        raise ValueError("polarization index must be 1 or 2")
    d = float(displacement_magnitude(point.k, point.v_g, point.n))
    e = d / (EPS0 * point.eps_r)
    if kind == DISPLACEMENT:
        value = d
    elif kind == ELECTRIC:
        value = e
    elif kind == POLARIZATION:
        value = d * (1.0 - 1.0 / point.eps_r)
    elif kind == VECTOR_POTENTIAL:
        value = e / point.omega
    elif kind == MAGNETIC:
        value = point.k * e / (point.omega * MU0)
    else:
        raise ValueError(f"unknown field kind {kind!r}; expected one of {FIELD_KINDS}")
    return ModeAmplitude(kind, point.k, point.m, lam, value)


def local_field_factor(eps_r):
    """Ratio of local to macroscopic displacement, (eps_r + 2) / (3 eps_r)."""
    return (eps_r + 2.0) / (3.0 * eps_r)


def local_field_amplitude(point: BranchPoint, macroscopic: ModeAmplitude) -> ModeAmplitude:
    """Displacement amplitude acting on a molecule of the medium.

    Only defined for the displacement field.
    """
    if macroscopic.kind != DISPLACEMENT:
        raise ValueError("local-field correction is only defined for the displacement field")
    if macroscopic.local:
        raise ValueError("amplitude is already a local-field amplitude")
    return ModeAmplitude(
        DISPLACEMENT,
        macroscopic.k,
        macroscopic.m,
        macroscopic.lam,
        macroscopic.magnitude * local_field_factor(point.eps_r),
        local=True,
    )


@dataclass(frozen=True)
class SumRuleReport:
    k: float
    s1: float
    s2: float
    residual1: float
    residual2: float
    verified: bool  # False when beta_j > 0: the identities are not claimed there

    @property
    def passed(self) -> bool:
        return max(self.residual1, self.residual2) < SUM_RULE_RTOL * C


def sum_rules(medium: Medium, k: float) -> SumRuleReport:
    """Evaluate sum_m v_g n and sum_m v_g / n over all branches at ``k``.

    Both equal c for a medium without spatial dispersion.
    """
    pts = solve_branches(medium, k)
    s1 = math.fsum([p.v_g * p.n for p in pts])
    s2 = math.fsum([p.v_g / p.n for p in pts])
    return SumRuleReport(k, s1, s2, abs(s1 - C), abs(s2 - C), not medium.spatially_dispersive)


def commutator_coefficient(medium: Medium, k: float, pair: Tuple[str, str] = COMMUTATOR_PAIRS[0]) -> float:
    """Equal-time commutator weight sum_m amp_A(m) amp_B(m), divided by
    the same product in vacuum.

    Canonical commutators require 1 for both supported pairs.
    """
    pair = tuple(pair)
    if pair not in COMMUTATOR_PAIRS:
        raise ValueError(f"unsupported pair {pair}; expected one of {COMMUTATOR_PAIRS}")
    a, b = pair
    pts = solve_branches(medium, k)
    total = math.fsum(
        [mode_amplitude(p, a).magnitude * mode_amplitude(p, b).magnitude for p in pts]
    )
    return total / _vacuum_product(k, a, b)


def _vacuum_product(k: float, a: str, b: str) -> float:
    photon = BranchPoint(k=k, m=1, omega=C * k, n=1.0, v_g=C, eps_r=1.0)
    return mode_amplitude(photon, a).magnitude * mode_amplitude(photon, b).magnitude


def amplitude_table(medium: Medium, k: float, kinds=FIELD_KINDS, local: bool = False) -> List[ModeAmplitude]:
    """Amplitudes for every branch at ``k``, sorted by branch then kind.

    With ``local`` set, displacement entries are replaced by their
    local-field values.
    """
    rows = []
    for p in solve_branches(medium, k):
        for kind in kinds:
            amp = mode_amplitude(p, kind)
            if local and kind == DISPLACEMENT:
                amp = local_field_amplitude(p, amp)
            rows.append(amp)
    return rows

