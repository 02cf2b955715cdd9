"""Vectorized safeguarded Newton iteration for bracketed monotone roots.

Every root problem in the package reduces to an increasing function on an
open interval with a known sign change, one interval per root.  All
intervals are iterated together so a whole branch fan (or a whole k-grid)
costs one numpy pass per iteration.
"""

import numpy as np

from .errors import BracketFailure, NonConvergence

RTOL = 1e-14
MAXITER = 200


def solve_increasing(func, lo, hi, flo=None, fhi=None, rtol=RTOL, maxiter=MAXITER):
    """Find the root of an increasing function inside each bracket.

    Parameters
    ----------
    func : callable
        ``func(x, idx) -> (f, dfdx)``, evaluated elementwise; ``idx`` holds
        the flat bracket indices that ``x`` belongs to, so per-bracket
        parameters can be gathered.
    lo, hi : array_like
        Bracket endpoints, ``lo < hi``; flattened.
    flo, fhi : array_like, optional
        Function values at the endpoints.  Use ``-inf``/``+inf`` for an
        endpoint that is a pole.  When omitted they are evaluated.
    rtol : float
        Stop once the Newton correction is below ``rtol * |x|``.

    Returns
    -------
    ndarray
        Flat array of roots, one per bracket.
    """
    lo = np.array(lo, dtype=float, copy=True).ravel()
    hi = np.array(hi, dtype=float, copy=True).ravel()
    if lo.shape != hi.shape:
        raise ValueError("bracket arrays differ in shape")
    if lo.size == 0:
        return lo
    everything = np.arange(lo.size)
    if flo is None:
        flo = func(lo, everything)[0]
    if fhi is None:
        fhi = func(hi, everything)[0]
    flo = np.broadcast_to(np.asarray(flo, dtype=float).ravel(), lo.shape)
    fhi = np.broadcast_to(np.asarray(fhi, dtype=float).ravel(), lo.shape)
    if not (np.all(lo < hi) and np.all(flo < 0) and np.all(fhi > 0)):
        bad = np.flatnonzero(~((lo < hi) & (flo < 0) & (fhi > 0)))
        raise BracketFailure(f"no sign change in bracket(s) {bad.tolist()}")

    x = 0.5 * (lo + hi)
    active = np.ones(lo.shape, dtype=bool)
    for _ in range(maxiter):
        idx = np.flatnonzero(active)
        xa = x[idx]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            f, df = func(xa, idx)
            f = np.asarray(f, dtype=float)
            df = np.asarray(df, dtype=float)
            la, ha = lo[idx], hi[idx]
            la = np.where(f < 0, xa, la)
            ha = np.where(f > 0, xa, ha)
            lo[idx], hi[idx] = la, ha

            step = f / df
            xn = xa - step
            newton_ok = np.isfinite(xn) & (xn > la) & (xn < ha)
        bisect = 0.5 * (la + ha)
        tol = rtol * np.abs(xa)
        converged = (f == 0) | (np.abs(step) <= tol) | ((ha - la) <= tol)
        x[idx] = np.where(newton_ok, xn, np.where(converged, xa, bisect))
        done = converged
        active[idx[done]] = False
        if not active.any():
            return x
    raise NonConvergence(f"{int(active.sum())} root(s) unconverged after {maxiter} iterations")

