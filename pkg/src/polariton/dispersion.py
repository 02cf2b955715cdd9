"""Polariton branches of a lossless multi-resonance medium.

At fixed k the transverse dispersion relation c^2 k^2 = omega^2 eps(omega, k)
is solved in x = omega^2.  Multiplying through by prod_j (P_j - x), with
P_j = omega_j^2 + beta_j c^2 k^2, gives a polynomial of degree M + 1 whose
roots interlace the P_j.  The solver works with the equivalent
pole-sum form

    f(x) = x + sum_j g_j x / (P_j - x) - c^2 k^2,

which is strictly increasing between consecutive poles, so each interval
(0, P_1), (P_1, P_2), ..., (P_M, inf) holds exactly one root and the branch
label is the interval index.  The inverse problem at fixed omega is treated
the same way in y = k^2.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._roots import solve_increasing
from .errors import BracketFailure, DegeneratePoint, InStopBand
from .medium import POLE_RTOL, Medium, permittivity
from .units import C

PHOTON_LIKE = "photon_like"
EXCITON_LIKE = "exciton_like"
CLASSIFY_RTOL = 0.1
BAND_EDGE_RTOL = 1e-10


@dataclass(frozen=True)
class BranchPoint:
    """A solution (k, m) of the dispersion relation; m counts from 1."""

    k: float
    m: int
    omega: float
    n: float
    v_g: float
    eps_r: float


@dataclass(frozen=True)
class StopBand:
    """Forbidden interval between a transverse resonance and its
    longitudinal frequency."""

    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, omega) -> bool:
        return self.lo < omega < self.hi


@dataclass(frozen=True)
class KRoot:
    k: float
    classification: str
    branch: int


@dataclass(frozen=True)
class KRootSet:
    omega: float
    roots: Tuple[KRoot, ...]

    @property
    def ks(self) -> List[float]:
        return [r.k for r in self.roots]

    def __len__(self) -> int:
        return len(self.roots)


def _sorted_poles(medium: Medium, k: np.ndarray):
    """Shifted poles per k, sorted ascending, with the residues permuted
    to match.  Shapes (N, M)."""
    P = medium.omegas**2 + medium.betas * C**2 * k[:, None] ** 2
    g = np.broadcast_to(medium.gs, P.shape)
    if medium.spatially_dispersive:
        order = np.argsort(P, axis=1)
        P = np.take_along_axis(P, order, axis=1)
        g = np.take_along_axis(g, order, axis=1)
        if np.any(np.diff(P, axis=1) <= POLE_RTOL * P[:, 1:]):
            raise BracketFailure("shifted resonances coincide at this wavenumber")
    return P, g


def branch_frequencies_squared(medium: Medium, k, branches: Optional[Sequence[int]] = None) -> np.ndarray:
    """Squared branch frequencies for an array of wavenumbers.

    Parameters
    ----------
    medium : Medium
    k : array_like
        Positive wavenumbers, shape (N,).
    branches : sequence of int, optional
        1-based branch labels to solve for; all M + 1 by default.

    Returns
    -------
    ndarray
        Shape (N, len(branches)).
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(~((k > 0) & np.isfinite(k))):
        raise ValueError("wavenumbers must be positive and finite")
    M = medium.M
    branches = np.arange(1, M + 2) if branches is None else np.asarray(branches, dtype=int)
    if np.any((branches < 1) | (branches > M + 1)):
        raise ValueError(f"branch labels must lie in 1..{M + 1}")
    P, g = _sorted_poles(medium, k)
    K = C**2 * k**2
    N, B = k.size, branches.size

    edges = np.concatenate([np.zeros((N, 1)), P, np.empty((N, 1))], axis=1)
    # beyond the top pole eps < 1 and eps(x) >= 1 - 2G/x once x >= 2 P_M,
    # so f > 0 at 2 (P_M + G + K)
    top = P[:, -1] if M else np.zeros(N)
    edges[:, -1] = 2.0 * (top + g.sum(axis=1) + K)
    lo = edges[:, branches - 1]
    hi = edges[:, branches]
    flo = np.where(branches == 1, -K[:, None], -np.inf)
    fhi = np.full((N, B), np.inf)
    top_col = branches == M + 1
    if top_col.any():
        xt = edges[:, -1]
        ft = xt + np.sum(g * xt[:, None] / (P - xt[:, None]), axis=1) - K
        fhi[:, top_col] = ft[:, None]

    row = np.repeat(np.arange(N), B)
    # multiplying by the distance to each pole endpoint leaves signs and
    # roots unchanged but removes the singularities Newton would see
    pole_lo = np.broadcast_to(branches > 1, (N, B)).ravel()
    pole_hi = np.broadcast_to(branches <= M, (N, B)).ravel()
    lo_flat, hi_flat = lo.ravel(), hi.ravel()

    def f(x, idx):
        r = row[idx]
        Pr = P[r]
        d = Pr - x[:, None]
        gr = g[r]
        val = x + np.sum(gr * x[:, None] / d, axis=1) - K[r]
        der = 1.0 + np.sum(gr * Pr / d**2, axis=1)
        wl = np.where(pole_lo[idx], x - lo_flat[idx], 1.0)
        wh = np.where(pole_hi[idx], hi_flat[idx] - x, 1.0)
        dw = np.where(pole_lo[idx], 1.0, 0.0) * wh - np.where(pole_hi[idx], 1.0, 0.0) * wl
        return val * wl * wh, der * wl * wh + val * dw

    x = solve_increasing(f, lo, hi, flo, fhi)
    return x.reshape(N, B)


def _group_velocity(medium: Medium, k, omega, eps_r):
    """Implicit derivative -F_k/F_omega of F = c^2 k^2 - omega^2 eps."""
    k = np.asarray(k, dtype=float)
    omega = np.asarray(omega, dtype=float)
    x = omega**2
    d = medium.omegas**2 + medium.betas * C**2 * k[..., None] ** 2 - x[..., None]
    g = medium.gs
    dF_dk = 2.0 * C**2 * k * (1.0 + x * np.sum(g * medium.betas / d**2, axis=-1))
    dF_domega = -2.0 * omega * (eps_r + x * np.sum(g / d**2, axis=-1))
    if np.any(np.abs(dF_domega) <= 1e-300) or np.any(~np.isfinite(dF_domega)):
        raise DegeneratePoint("dF/domega vanishes: band edge")
    return -dF_dk / dF_domega


def solve_branches(medium: Medium, k: float) -> List[BranchPoint]:
    """All M + 1 branch points at wavenumber ``k``, ascending in frequency."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    x = branch_frequencies_squared(medium, [k])[0]
    return _points(medium, k, x, np.arange(1, medium.M + 2))


def _points(medium, k, x, labels):
    omega = np.sqrt(x)
    n = C * k / omega
    eps_r = n**2
    v_g = _group_velocity(medium, np.full_like(omega, k), omega, eps_r)
    return [
        BranchPoint(float(k), int(m), float(w), float(ni), float(v), float(e))
        for m, w, ni, v, e in zip(labels, omega, n, v_g, eps_r)
    ]


def branch_point(medium: Medium, k: float, m: int) -> BranchPoint:
    """A single branch point (k, m)."""
    x = branch_frequencies_squared(medium, [k], branches=[m])[0]
    return _points(medium, k, x, [m])[0]


def group_velocity(medium: Medium, point: BranchPoint) -> float:
    """Group velocity d omega/dk of a branch point, including the
    effective-mass terms of a spatially dispersive medium."""
    return float(_group_velocity(medium, point.k, point.omega, point.n**2))


def longitudinal_frequencies(medium: Medium) -> np.ndarray:
    """Zeros of eps(omega, k=0), one above each resonance."""
    M = medium.M
    if M == 0:
        return np.empty(0)
    P = medium.omegas**2
    g = medium.gs
    hi = np.append(P[1:], P[-1] + 2.0 * g.sum())

    def f(x, idx):
        d = P - x[:, None]
        return 1.0 + np.sum(g / d, axis=1), np.sum(g / d**2, axis=1)

    fhi = np.full(M, np.inf)
    fhi[-1] = f(hi[-1:], None)[0][0]
    return np.sqrt(solve_increasing(f, P, hi, np.full(M, -np.inf), fhi))


def stop_bands(medium: Medium) -> List[StopBand]:
    """Forbidden frequency intervals (omega_j, omega_L,j) of a medium
    without spatial dispersion."""
    if medium.spatially_dispersive:
        raise ValueError("stop bands require beta_j = 0 for all resonances")
    wl = longitudinal_frequencies(medium)
    return [StopBand(float(lo), float(hi)) for lo, hi in zip(medium.omegas, wl)]


def k_polynomial_terms(medium: Medium, omega: float):
    """Pieces of c^2 y = omega^2 eps(omega, sqrt(y)) written in y = k^2:
    returns (x, g, a, b) with pole denominators a_j + b_j y."""
    x = float(omega) ** 2
    a = medium.omegas**2 - x
    b = medium.betas * C**2
    return x, medium.gs, a, b


def find_k_roots(medium: Medium, omega: float) -> KRootSet:
    """Every propagating wavenumber at frequency ``omega``.

    G(y) = c^2 y - omega^2 eps(omega, sqrt(y)) increases between its poles
    y_j = (omega^2 - omega_j^2) / (beta_j c^2), so each interval between
    consecutive positive poles holds one root, the interval above the last
    pole holds one, and (0, y_1) holds one exactly when eps(omega, 0) > 0.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    eps0 = permittivity(medium, omega, 0.0)  # raises PoleHit at a bare resonance
    wl = longitudinal_frequencies(medium)
    if np.any(np.abs(omega - wl) <= BAND_EDGE_RTOL * wl):
        raise DegeneratePoint(f"omega = {omega} sits on a longitudinal band edge")

    x, g, a, b = k_polynomial_terms(medium, omega)

    def G(y, idx):
        d = a + b * y[:, None]
        return C**2 * y - x * (1.0 + np.sum(g / d, axis=1)), C**2 + x * np.sum(g * b / d**2, axis=1)

    dispersive = b > 0
    poles = np.unique(-a[dispersive & (a < 0)] / b[dispersive & (a < 0)])
    lo, hi, flo, fhi = [], [], [], []
    if eps0 > 0:
        lo.append(0.0)
        flo.append(-x * eps0)
        if poles.size:
            hi.append(poles[0])
            fhi.append(np.inf)
    for p, q in zip(poles[:-1], poles[1:]):
        lo.append(p)
        hi.append(q)
        flo.append(-np.inf)
        fhi.append(np.inf)
    if poles.size:
        lo.append(poles[-1])
        flo.append(-np.inf)
    if len(lo) > len(hi):
        # open top interval: double until G turns positive
        y_top = max(lo[-1], x / C**2, 1.0)
        while True:
            y_top *= 2.0
            val = G(np.array([y_top]), None)[0][0]
            if val > 0:
                break
            if not np.isfinite(y_top):
                raise BracketFailure("no upper bound for the top k-root")
        hi.append(y_top)
        fhi.append(val)

    y = solve_increasing(G, lo, hi, flo, fhi)
    ks = np.sqrt(y)
    n_nodisp = np.sqrt(eps0) if eps0 > 0 else None
    roots = []
    for kk in ks:
        n = C * kk / omega
        if n_nodisp is not None and abs(n - n_nodisp) < CLASSIFY_RTOL * n_nodisp:
            kind = PHOTON_LIKE
        else:
            kind = EXCITON_LIKE
        branch = 1 + int(np.sum(medium.shifted_poles(kk) < x))
        roots.append(KRoot(float(kk), kind, branch))
    roots.sort(key=lambda r: r.k)
    return KRootSet(float(omega), tuple(roots))


def branch_window(medium: Medium, m: int) -> Tuple[float, float]:
    """Frequency range (omega_L,m-1, omega_m) swept by branch m when beta = 0."""
    if medium.spatially_dispersive:
        raise ValueError("branch windows require beta_j = 0")
    if not 1 <= m <= medium.M + 1:
        raise ValueError(f"branch label must lie in 1..{medium.M + 1}")
    wl = longitudinal_frequencies(medium)
    lo = 0.0 if m == 1 else float(wl[m - 2])
    hi = float(medium.omegas[m - 1]) if m <= medium.M else np.inf
    return lo, hi


def branch_of_frequency(medium: Medium, omega: float) -> int:
    """Label of the branch carrying frequency ``omega`` (beta = 0).

    Raises :class:`InStopBand` inside a forbidden interval.
    """
    for band in stop_bands(medium):
        if band.lo <= omega <= band.hi:
            raise InStopBand(f"omega = {omega} lies in the stop band ({band.lo}, {band.hi})")
    return 1 + int(np.sum(medium.omegas < omega))

