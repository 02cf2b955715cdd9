"""Brute-force cross-checks for the bracketed solvers.

The dispersion relation is cleared of denominators into an explicit
polynomial whose roots come from a dense eigen-decomposition of a
companion matrix.  This shares nothing with the bracketing path except the
medium parameters, so agreement between the two is evidence rather than a
tautology.

Two companion forms are provided.  The Frobenius matrix of the monomial
coefficients is the textbook one, but clustered resonances make monomial
coefficients ill-conditioned (relative root errors ~1e-8 already at
M = 8).  Expanding the same polynomial in the Lagrange basis at the poles
gives a symmetric arrowhead matrix

    A = [[c^2 k^2 + sum g, sqrt(g_j P_j)], [sqrt(g_j P_j), diag(P_j)]],

with A = B^T B for B = [[c k, 0], [sqrt(g_j), diag(sqrt(P_j))]], so the
branch frequencies are the singular values of B.
"""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ComplexRoots
from .medium import Medium
from .units import C

IMAG_RTOL = 1e-8


@dataclass(frozen=True)
class PolynomialForm:
    """Monic polynomial, coefficients in descending powers.

    ``variable`` is ``"x"`` (omega^2 at fixed k) or ``"y"`` (k^2 at fixed
    omega).
    """

    coefficients: Tuple[float, ...]
    variable: str = "x"

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite and non-empty")
        if c[0] != 1.0:
            raise ValueError("polynomial must be monic")

    @classmethod
    def from_ascending(cls, coef, variable="x") -> "PolynomialForm":
        coef = np.trim_zeros(np.asarray(coef, dtype=float), "b")
        if coef.size == 0:
            raise ValueError("zero polynomial")
        desc = coef[::-1] / coef[-1]
        desc[0] = 1.0
        return cls(tuple(float(v) for v in desc), variable)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polyval(self.coefficients, z)


def _product(factors):
    out = np.array([1.0])
    for f in factors:
        out = P.polymul(out, f)
    return out


def dispersion_polynomial(medium: Medium, k: float) -> PolynomialForm:
    """x prod(P_j - x) + sum_j g_j x prod_{l != j}(P_l - x) - c^2 k^2 prod(P_j - x)."""
    poles = medium.shifted_poles(k)
    lin = [np.array([p, -1.0]) for p in poles]
    Q = _product(lin)
    xpoly = np.array([0.0, 1.0])
    p = P.polymul(xpoly, Q) - C**2 * k**2 * np.pad(Q, (0, 1))
    for j, g in enumerate(medium.gs):
        Qj = _product(lin[:j] + lin[j + 1:])
        p = P.polyadd(p, g * P.polymul(xpoly, Qj))
    return PolynomialForm.from_ascending(p, "x")


def k_polynomial(medium: Medium, omega: float) -> PolynomialForm:
    """c^2 y prod D_j - omega^2 prod D_j - omega^2 sum_j g_j prod_{l != j} D_l,
    with D_j = omega_j^2 - omega^2 + beta_j c^2 y.

    The degree is one plus the number of spatially dispersive resonances.
    """
    x = float(omega) ** 2
    lin = [np.array([w * w - x, b * C**2]) for w, b in zip(medium.omegas, medium.betas)]
    R = _product(lin)
    p = P.polymul(np.array([-x, C**2]), R)
    for j, g in enumerate(medium.gs):
        Rj = _product(lin[:j] + lin[j + 1:])
        p = P.polysub(p, x * g * Rj)
    return PolynomialForm.from_ascending(p, "y")


def companion_matrix(poly: PolynomialForm) -> np.ndarray:
    c = np.asarray(poly.coefficients, dtype=float)
    n = poly.degree
    A = np.zeros((n, n))
    A[0, :] = -c[1:]
    A[1:, :-1] = np.eye(n - 1)
    return A


def companion_eigenvalues(poly: PolynomialForm, discard_complex: bool = False) -> np.ndarray:
    """Real roots of ``poly`` from the eigenvalues of its companion matrix.

    Eigenvalues whose imaginary part exceeds 1e-8 (relative to
    ``max(1, |lambda|)``) raise :class:`ComplexRoots`, unless
    ``discard_complex`` is set, in which case they are dropped.
    """
    if poly.degree == 0:
        return np.empty(0)
    lam = np.linalg.eigvals(companion_matrix(poly))
    is_real = np.abs(lam.imag) <= IMAG_RTOL * np.maximum(1.0, np.abs(lam))
    if not is_real.all() and not discard_complex:
        raise ComplexRoots(f"complex roots {lam[~is_real]}")
    return np.sort(lam[is_real].real)


def arrowhead_factor(medium: Medium, k: float) -> np.ndarray:
    """Square factor B with B^T B equal to the arrowhead companion."""
    poles = medium.shifted_poles(k)
    B = np.diag(np.concatenate(([C * k], np.sqrt(poles))))
    B[1:, 0] = np.sqrt(medium.gs)
    return B


def arrowhead_companion(medium: Medium, k: float) -> np.ndarray:
    """Symmetric matrix whose characteristic polynomial is the cleared
    dispersion polynomial."""
    B = arrowhead_factor(medium, k)
    return B.T @ B


def arrowhead_eigenvalues(medium: Medium, k: float) -> np.ndarray:
    """Squared branch frequencies from the singular values of the
    arrowhead factor, ascending."""
    s = np.linalg.svd(arrowhead_factor(medium, k), compute_uv=False)
    return np.sort(s) ** 2


def finite_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Central difference (f(x + h) - f(x - h)) / 2h."""
    if not h > 0:
        raise ValueError("step must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)
