"""Spontaneous emission of a molecule embedded in the medium.

The emitter couples to the local displacement field, so the golden-rule
rate sums |d_local(k, m)|^2 over modes resonant with the transition.  In
a lossless medium the delta function is replaced by a Lorentzian of width
eta, the sum over the branch carrying omega_e is carried out on a uniform
k-grid, and the result is divided by the identical computation in vacuum.
As eta -> 0 the ratio tends to n ((n^2 + 2) / 3)^2, which is returned
alongside for comparison.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dispersion import _group_velocity, branch_frequencies_squared, branch_of_frequency, branch_window, find_k_roots
from .errors import GridTooCoarse, InStopBand
from .fields import displacement_magnitude, local_field_factor
from .medium import Medium, permittivity
from .units import C

EDGE_MARGIN = 1e-9


@dataclass(frozen=True)
class KGrid:
    """Sampling of the resonant window.

    ``window`` is the half-width of the frequency window in units of eta;
    ``points`` fixes the number of k samples (chosen automatically when
    None) and must put at least ``min_per_linewidth`` samples inside the
    full width at half maximum.
    """

    points: Optional[int] = None
    window: float = 200.0
    min_per_linewidth: int = 50

    def __post_init__(self):
        if self.points is not None and self.points < 2:
            raise ValueError("a k-grid needs at least two points")
        if not self.window > 1:
            raise ValueError("window must exceed one linewidth")


@dataclass(frozen=True)
class EmissionResult:
    omega_e: float
    rate_ratio_modesum: float
    rate_ratio_closed: float
    branch: int
    eta: float
    points: int

    @property
    def relative_difference(self) -> float:
        return abs(self.rate_ratio_modesum - self.rate_ratio_closed) / self.rate_ratio_closed


def lorentzian(detuning, eta):
    return (eta / np.pi) / (detuning**2 + eta**2)


def closed_form_ratio(medium: Medium, omega_e: float) -> float:
    """n ((n^2 + 2) / 3)^2 at the emitter frequency."""
    eps = permittivity(medium, omega_e)
    if eps <= 0:
        raise InStopBand(f"omega_e = {omega_e} lies in a stop band")
    n = np.sqrt(eps)
    return float(n * ((eps + 2.0) / 3.0) ** 2)


def _wavenumber(medium: Medium, omega: float) -> float:
    roots = find_k_roots(medium, omega)
    if len(roots) != 1:
        raise InStopBand(f"omega = {omega} has {len(roots)} propagating wavenumbers")
    return roots.roots[0].k


def golden_rule_sum(medium: Medium, omega_e: float, eta: float, w_lo: float, w_hi: float, grid: KGrid):
    """Broadened mode sum over the branch carrying ``omega_e``, restricted
    to branch frequencies in [w_lo, w_hi].

    Returns (sum, number of k samples).
    """
    m = branch_of_frequency(medium, omega_e)
    k_lo, k_hi = _wavenumber(medium, w_lo), _wavenumber(medium, w_hi)
    k_e = _wavenumber(medium, omega_e)
    x_e = branch_frequencies_squared(medium, [k_e], [m])[0, 0]
    w_e = np.sqrt(x_e)
    v_e = float(_group_velocity(medium, k_e, w_e, (C * k_e / w_e) ** 2))
    fwhm_k = 2.0 * eta / v_e
    needed = int(np.ceil(grid.min_per_linewidth * (k_hi - k_lo) / fwhm_k)) + 1
    npts = needed if grid.points is None else grid.points
    if npts < needed:
        raise GridTooCoarse(
            f"{npts} k-points give fewer than {grid.min_per_linewidth} per linewidth; need {needed}"
        )

    k = np.linspace(k_lo, k_hi, npts)
    omega = np.sqrt(branch_frequencies_squared(medium, k, [m])[:, 0])
    n = C * k / omega
    v_g = _group_velocity(medium, k, omega, n**2)
    d_local = displacement_magnitude(k, v_g, n) * local_field_factor(n**2)
    integrand = k**2 * d_local**2 * lorentzian(omega - omega_e, eta)
    return float(np.trapezoid(integrand, k)), npts


def emission_rate_ratio(medium: Medium, omega_e: float, eta: float, k_grid: KGrid = KGrid()) -> EmissionResult:
    """Emission rate in the medium relative to vacuum, by mode sum and in
    closed form.

    The frequency window omega_e +- window * eta (narrowed to half the
    distance to the nearest band edge) is shared with the vacuum
    reference, so the truncated Lorentzian tails cancel in the ratio.
    Agreement with the closed form requires eta small against both
    omega_e and that distance.
    """
    if medium.spatially_dispersive:
        raise ValueError("emission rates require beta_j = 0")
    if not eta > 0:
        raise ValueError("eta must be positive")
    if not omega_e > 0:
        raise ValueError("omega_e must be positive")
    m = branch_of_frequency(medium, omega_e)
    b_lo, b_hi = branch_window(medium, m)
    # the mode density diverges at a resonance: keep the window symmetric
    # and no wider than half the distance to the nearest band edge
    edge_distance = min(omega_e - b_lo, b_hi - omega_e)
    if edge_distance <= EDGE_MARGIN * omega_e:
        raise InStopBand(f"omega_e = {omega_e} is too close to a band edge")
    half = min(k_grid.window * eta, 0.5 * edge_distance)
    w_lo, w_hi = omega_e - half, omega_e + half

    medium_sum, npts = golden_rule_sum(medium, omega_e, eta, w_lo, w_hi, k_grid)
    vac_grid = KGrid(None, k_grid.window, k_grid.min_per_linewidth)
    vacuum_sum, _ = golden_rule_sum(Medium((), medium.units), omega_e, eta, w_lo, w_hi, vac_grid)
    return EmissionResult(
        omega_e=float(omega_e),
        rate_ratio_modesum=medium_sum / vacuum_sum,
        rate_ratio_closed=closed_form_ratio(medium, omega_e),
        branch=m,
        eta=float(eta),
        points=npts,
    )
