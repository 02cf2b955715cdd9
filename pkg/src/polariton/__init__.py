"""Polariton branches, quantized field amplitudes and their invariants for
lossless multi-resonance dielectrics."""

__version__ = "0.1.0"

from .applications import KGrid, EmissionResult, closed_form_ratio, emission_rate_ratio
from .dispersion import (
    BranchPoint,
    KRoot,
    KRootSet,
    StopBand,
    branch_point,
    find_k_roots,
    group_velocity,
    longitudinal_frequencies,
    solve_branches,
    stop_bands,
)
from .errors import *  # noqa: F401,F403
from .fields import (
    ModeAmplitude,
    SumRuleReport,
    amplitude_table,
    commutator_coefficient,
    local_field_amplitude,
    mode_amplitude,
    sum_rules,
)
from .medium import (
    Medium,
    MicroscopicMedium,
    MolecularResonance,
    Resonance,
    bare_lorentz,
    clausius_mossotti_permittivity,
    cm_to_lorentz,
    permittivity,
)
from .mediumfile import load_medium, parse_medium
from .units import Units
