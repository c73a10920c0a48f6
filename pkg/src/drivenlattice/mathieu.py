"""Mathieu characteristic values and cosine-lattice band structure.

Characteristic values a_nu(q) of y'' + (a - 2q cos 2x) y = 0 are computed for
real order nu >= 0, fractional orders included, by diagonalising the operator
in the Fourier basis {exp(i(nu + 2m)x)}.  The matrix is tridiagonal with
diagonal (nu + 2m)^2 and off-diagonal q; the physical branch is the eigenpair
whose eigenvector is dominated by the m = 0 component (overlap tracking, not
eigenvalue ordering, which reshuffles under q for fractional orders).

Integer orders are degenerate in the exponential basis and are handled in the
standard parity-split cosine/sine bases, giving the classical a_n and b_n
curves.

Band structure of the potential 2 q0 cos 2z (recoil units, lattice wavenumber
k_L = 1) follows from the Bloch condition: band n at quasimomentum kappa in
[0, 1] has energy a_nu(q0) with nu the reduced-zone folding of kappa.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "MathieuConvergenceError",
    "MathieuQuery",
    "BandPoint",
    "char_value",
    "char_even",
    "char_odd",
    "char_value_small_q",
    "char_value_large_q",
    "band_energy",
    "band_edges",
    "band_edge_gap",
    "mean_band_separation",
    "well_eigenfunctions",
]

DEFAULT_TRUNCATION = 64
MAX_TRUNCATION = 1024
CONVERGENCE_RTOL = 1e-12


class MathieuConvergenceError(RuntimeError):
    """Raised when doubling the Fourier truncation does not converge."""


@dataclass(frozen=True)
class MathieuQuery:
    order_nu: float
    q: float
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("Mathieu parameter q must be >= 0")
        if self.truncation < 8:
            raise ValueError("truncation must be >= 8")


@dataclass(frozen=True)
class BandPoint:
    band_index: int
    quasimomentum: float
    energy: float


_cache_lock = threading.Lock()
_char_cache: dict[tuple, float] = {}


def _fractional_char(nu: float, q: float, trunc: int,
                     bracket: tuple[float, float] | None = None) -> float:
    m = np.arange(-trunc, trunc + 1)
    diag = (nu + 2.0 * m) ** 2
    if q == 0.0:
        return float(nu**2)
    off = np.full(2 * trunc, q)
    if bracket is not None:
        # the branch of order nu in (n, n+1) is the unique eigenvalue inside
        # the band (a_n, b_{n+1}); eigenvalue ordering and m = 0 weight both
        # become ambiguous near the band edges
        vals = eigh_tridiagonal(diag, off, eigvals_only=True)
        lo, hi = bracket
        inside = vals[(vals > lo) & (vals < hi)]
        if len(inside) == 1:
            return float(inside[0])
    vals, vecs = eigh_tridiagonal(diag, off)
    centre = trunc  # row of the m = 0 component
    branch = int(np.argmax(np.abs(vecs[centre, :])))
    return float(vals[branch])


def _integer_char(n: int, q: float, trunc: int, parity: str) -> float:
    """a_n (parity='even') or b_n (parity='odd') via the parity-split bases."""
    size = trunc
    if parity == "even":
        if n % 2 == 0:
            # basis {1/sqrt(2), cos 2x, cos 4x, ...}
            diag = (2.0 * np.arange(size)) ** 2
            off = np.full(size - 1, q)
            off[0] = np.sqrt(2.0) * q
            idx = n // 2
        else:
            diag = (2.0 * np.arange(size) + 1.0) ** 2
            diag[0] += q
            off = np.full(size - 1, q)
            idx = (n - 1) // 2
    else:
        if n < 1:
            raise ValueError("b_n requires n >= 1")
        if n % 2 == 1:
            diag = (2.0 * np.arange(size) + 1.0) ** 2
            diag[0] -= q
            off = np.full(size - 1, q)
            idx = (n - 1) // 2
        else:
            diag = (2.0 * np.arange(1, size + 1)) ** 2
            off = np.full(size - 1, q)
            idx = n // 2 - 1
    vals = eigh_tridiagonal(diag, off, eigvals_only=True)
    # within one parity class the curves never cross: sorted index is exact
    return float(vals[idx])


def _converged(compute, trunc0: int) -> float:
    trunc = trunc0
    prev = compute(trunc)
    while trunc < MAX_TRUNCATION:
        trunc = min(2 * trunc, MAX_TRUNCATION)
        cur = compute(trunc)
        if abs(cur - prev) <= CONVERGENCE_RTOL * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise MathieuConvergenceError(
        f"characteristic value not converged at truncation {MAX_TRUNCATION}"
    )


def char_value(nu: float, q: float, truncation: int = DEFAULT_TRUNCATION) -> float:
    """Characteristic value a_nu(q) for real order nu (a_n branch at integers).

    a_nu = a_{-nu}; negative orders are mapped to their non-negative
    representative.  Results are converged to 1e-12 relative under truncation
    doubling, else MathieuConvergenceError is raised.
    """
    nu = abs(float(nu))
    q = float(q)
    MathieuQuery(nu, q, truncation)
    key = (round(nu, 14), round(q, 14), truncation)
    with _cache_lock:
        if key in _char_cache:
            return _char_cache[key]
    n_int = int(round(nu))
    if abs(nu - n_int) < 1e-9:
        val = _converged(lambda t: _integer_char(n_int, q, t, "even"), truncation)
    else:
        n_lo = int(math.floor(nu))
        lo = (_converged(lambda t: _integer_char(n_lo, q, t, "even"), truncation)
              if q > 0 else None)
        hi = (_converged(lambda t: _integer_char(n_lo + 1, q, t, "odd"), truncation)
              if q > 0 else None)
        bracket = None if lo is None else (lo, hi)
        val = _converged(lambda t: _fractional_char(nu, q, t, bracket), truncation)
    with _cache_lock:
        _char_cache[key] = val
    return val


def char_even(n: int, q: float, truncation: int = DEFAULT_TRUNCATION) -> float:
    """a_n(q) for integer n >= 0 (even Mathieu functions ce_n)."""
    return _converged(lambda t: _integer_char(int(n), float(q), t, "even"), truncation)


def char_odd(n: int, q: float, truncation: int = DEFAULT_TRUNCATION) -> float:
    """b_n(q) for integer n >= 1 (odd Mathieu functions se_n)."""
    return _converged(lambda t: _integer_char(int(n), float(q), t, "odd"), truncation)


def char_value_small_q(nu: float, q: float) -> float:
    """Shallow expansion a_nu ~ nu^2 + q^2 / (2 (nu^2 - 1)).

    Valid away from the resonant order nu = 1 where the denominator vanishes.
    """
    nu = abs(float(nu))
    if abs(nu - 1.0) < 0.1:
        raise ValueError("small-q expansion is singular near nu = 1")
    if q == 0.0:
        return nu**2
    return nu**2 + q**2 / (2.0 * (nu**2 - 1.0))


def char_value_large_q(s: int, q: float) -> float:
    """Deep-well expansion a ~ -2q + 2 s sqrt(q) - (s^2 + 1)/8, s = 2 nbar + 1 odd."""
    if s < 1 or s % 2 == 0:
        raise ValueError("deep-well branch label s must be an odd positive integer")
    if q < 5.0:
        raise ValueError("deep-well expansion requires q >= 5")
    return -2.0 * q + 2.0 * s * np.sqrt(q) - (s**2 + 1.0) / 8.0


def _fold_order(n: int, kappa: float) -> float:
    # reduced-zone mapping: even bands run nu = n + kappa, odd bands nu = n + 1 - kappa
    if n % 2 == 0:
        return n + kappa
    return n + 1.0 - kappa


def band_energy(n: int, kappa: float, q0: float, truncation: int = DEFAULT_TRUNCATION) -> float:
    """Energy of band n at quasimomentum kappa (units of k_L) for 2 q0 cos 2z, in E_r.

    Integer folded orders sit at band edges where the fractional branch is
    two-sided; the correct edge (a_m from above, b_m from below) is selected
    explicitly.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("kappa must lie in [0, 1]")
    if n < 0:
        raise ValueError("band index must be >= 0")
    nu = _fold_order(n, kappa)
    m = int(round(nu))
    if abs(nu - m) < 1e-12:
        # kappa = 0 or 1: nu = m approached from above gives a_m, from below b_m
        from_above = (n % 2 == 0 and kappa == 0.0) or (n % 2 == 1 and kappa == 1.0)
        if m == 0:
            return char_even(0, q0, truncation)
        return char_even(m, q0, truncation) if from_above else char_odd(m, q0, truncation)
    return char_value(nu, q0, truncation)


def band_edges(n: int, q0: float) -> tuple[float, float]:
    """(bottom, top) energies of band n in E_r."""
    e0 = band_energy(n, 0.0, q0)
    e1 = band_energy(n, 1.0, q0)
    return (min(e0, e1), max(e0, e1))


def band_edge_gap(q0: float) -> float:
    """Gap between the two lowest bands at the zone edge: a_1(q0) - b_1(q0)."""
    return char_even(1, q0) - char_odd(1, q0)


def mean_band_separation(q0: float, order: int = 64) -> float:
    """kappa-average over [0, 1] of E_1(kappa) - E_0(kappa), fixed Gauss quadrature."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    kap = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    sep = np.array([band_energy(1, k, q0) - band_energy(0, k, q0) for k in kap])
    return float(np.sum(w * sep))


def _parity_vector(n: int, q: float, trunc: int, parity: str) -> np.ndarray:
    size = trunc
    if parity == "even":
        if n % 2 == 0:
            diag = (2.0 * np.arange(size)) ** 2
            off = np.full(size - 1, q)
            off[0] = np.sqrt(2.0) * q
            idx = n // 2
        else:
            diag = (2.0 * np.arange(size) + 1.0) ** 2
            diag[0] += q
            off = np.full(size - 1, q)
            idx = (n - 1) // 2
    else:
        if n % 2 == 1:
            diag = (2.0 * np.arange(size) + 1.0) ** 2
            diag[0] -= q
            off = np.full(size - 1, q)
            idx = (n - 1) // 2
        else:
            diag = (2.0 * np.arange(1, size + 1)) ** 2
            off = np.full(size - 1, q)
            idx = n // 2 - 1
    _, vecs = eigh_tridiagonal(diag, off)
    return vecs[:, idx]


def well_eigenfunctions(levels: int, q: float, x: np.ndarray,
                        truncation: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """Localised single-well eigenfunctions of the Mathieu operator on a grid.

    Level n is the symmetric/antisymmetric combination of the doublet
    (ce_n, se_{n+1}) that localises in the well at x = pi/2 (minimum of
    2q cos 2x).  Functions are normalised to unit L2 norm on the grid.
    Used for numeric dipole matrix elements between well levels.
    """
    if q <= 0:
        raise ValueError("well eigenfunctions require q > 0")
    dx = x[1] - x[0]
    out = np.empty((levels, len(x)))
    for n in range(levels):
        ce_coef = _parity_vector(n, q, truncation, "even")
        se_coef = _parity_vector(n + 1, q, truncation, "odd")
        if n % 2 == 0:
            # ce_n has harmonics cos 2jx, se_{n+1} has sin (2j+1)x
            harm = 2.0 * np.arange(truncation)
            ce = ce_coef[0] / np.sqrt(2.0) + np.sum(
                ce_coef[1:, None] * np.cos(np.outer(harm[1:], x)), axis=0)
            se_h = 2.0 * np.arange(truncation) + 1.0
            se = np.sum(se_coef[:, None] * np.sin(np.outer(se_h, x)), axis=0)
        else:
            # ce_n has harmonics cos (2j+1)x, se_{n+1} has sin (2j+2)x
            harm = 2.0 * np.arange(truncation) + 1.0
            ce = np.sum(ce_coef[:, None] * np.cos(np.outer(harm, x)), axis=0)
            se_h = 2.0 * np.arange(1, truncation + 1)
            se = np.sum(se_coef[:, None] * np.sin(np.outer(se_h, x)), axis=0)
        ce /= np.sqrt(np.sum(ce**2) * dx)
        se /= np.sqrt(np.sum(se**2) * dx)
        # pick the doublet combination that localises in the well at pi/2
        well = np.abs(x - np.pi / 2) <= np.pi / 2
        plus = (ce + se) / np.sqrt(2.0)
        minus = (ce - se) / np.sqrt(2.0)
        w = plus if np.sum(plus[well] ** 2) >= np.sum(minus[well] ** 2) else minus
        w = w / np.sqrt(np.sum(w**2) * dx)
        out[n] = w
    return out
