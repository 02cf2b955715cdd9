"""Medium description files.

TOML with optional top-level settings and one ``[[resonance]]`` table per
resonance::

    units = "scaled"              # or "SI"
    reference_frequency = 1.0     # rad/s; required for SI

    [[resonance]]
    omega = 1.0
    g = 0.5
    beta = 0.0                    # optional

A microscopic medium sets ``rho`` at top level and gives ``omega`` and
``alpha`` in each table; it is mapped to the macroscopic form through the
Clausius-Mossotti relation unless ``local_field = false``, in which case
the bare Lorentz form with g_j = rho alpha_j / eps0 is used.

SI files give frequencies in rad/s, couplings in rad^2/s^2, ``rho`` in
1/m^3 and ``alpha`` in F m^2 / s^2 (polarizability times omega_j^2);
values are converted to scaled units on load.  Unknown keys are rejected.
"""

import sys
from pathlib import Path
from typing import Union

from scipy import constants

from .errors import MediumError, MediumParseError
from .medium import Medium, MicroscopicMedium, Resonance, bare_lorentz, cm_to_lorentz
from .units import SCALED, SI, Units

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TOP_KEYS = {"units", "reference_frequency", "rho", "local_field", "resonance"}
LORENTZ_KEYS = {"omega", "g", "beta"}
MICRO_KEYS = {"omega", "alpha"}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MediumParseError(f"{where} expects a number, got {value!r}")
    return float(value)


def _units(doc) -> Units:
    system = doc.get("units", SCALED)
    if not isinstance(system, str) or system.lower() not in ("scaled", "si"):
        raise MediumParseError(f"units must be 'scaled' or 'SI', got {system!r}")
    system = SI if system.lower() == "si" else SCALED
    if system == SI and "reference_frequency" not in doc:
        raise MediumParseError("SI media need a reference_frequency")
    ref = _number(doc.get("reference_frequency", 1.0), "reference_frequency")
    try:
        return Units(system, ref)
    except ValueError as exc:
        raise MediumParseError(str(exc)) from None


def parse_medium(text: str) -> Medium:
    """Parse a medium description into a scaled-unit :class:`Medium`."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise MediumParseError(f"not valid TOML: {exc}") from None
    unknown = set(doc) - TOP_KEYS
    if unknown:
        raise MediumParseError(f"unknown top-level key(s) {sorted(unknown)}")
    units = _units(doc)

    blocks = doc.get("resonance", [])
    if not isinstance(blocks, list) or not all(isinstance(b, dict) for b in blocks):
        raise MediumParseError("resonances must be given as [[resonance]] tables")
    microscopic = "rho" in doc
    if "local_field" in doc:
        if not microscopic:
            raise MediumParseError("local_field only applies to microscopic media (set rho)")
        if not isinstance(doc["local_field"], bool):
            raise MediumParseError("local_field must be true or false")
    required = MICRO_KEYS if microscopic else {"omega", "g"}
    permitted = MICRO_KEYS if microscopic else LORENTZ_KEYS
    values = []
    for i, block in enumerate(blocks, 1):
        unknown = set(block) - LORENTZ_KEYS - MICRO_KEYS
        if unknown:
            raise MediumParseError(f"resonance {i}: unknown key(s) {sorted(unknown)}")
        extra = set(block) - permitted
        if extra:
            kind = "microscopic" if microscopic else "macroscopic"
            raise MediumParseError(f"resonance {i}: keys {sorted(extra)} not allowed in a {kind} medium")
        missing = required - set(block)
        if missing:
            raise MediumParseError(f"resonance {i}: missing {sorted(missing)}")
        values.append({key: _number(v, f"resonance {i}: {key}") for key, v in block.items()})

    try:
        if microscopic:
            rho = _number(doc["rho"], "rho")
            # s_j = rho alpha_j / eps0 must come out in scaled frequency^2
            alpha_scale = 1.0 / (constants.epsilon_0 * units.reference_frequency**2) if units.is_si else 1.0
            micro = MicroscopicMedium.from_arrays(
                rho,
                [units.frequency_in(b["omega"]) for b in values],
                [b["alpha"] * alpha_scale for b in values],
                units=units,
            )
            return cm_to_lorentz(micro) if doc.get("local_field", True) else bare_lorentz(micro)
        res = tuple(
            Resonance(units.frequency_in(b["omega"]), units.coupling_in(b["g"]), b.get("beta", 0.0))
            for b in values
        )
        return Medium(res, units)
    except MediumError as exc:
        if isinstance(exc, MediumParseError):
            raise
        raise MediumParseError(f"invalid medium: {exc}") from exc


def load_medium(path: Union[str, Path]) -> Medium:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MediumParseError(f"cannot read {path}: {exc}") from exc
    return parse_medium(text)
