"""Bound-state energies, level densities, and eigenfunction profiles.

The closed-form spectrum of the scalar-coupled model is

    E_n^2 = 2 a2 a3 + (a2/Q) * (2n + 1 + sqrt(1 + 4 Q^2 a3^2)),   Q = 1/(hbar c),

independent of both the rest energy and the offset a1 (their contributions
cancel between eps1 and A3^2/4).  Both signs of the square root are physical
branches.  Eigenfunctions are assembled in the scaled coordinate y as

    psi(y) = y^p * exp((A3*y - y^2)/2) * u(y)

with u the regular biconfluent-Heun series whose parameters come from
matching the reduced equation onto the canonical form: c1 = 2p - 1,
c2 = -A3, c3 = eps1(E) + A3^2/4 + 1, c4 = -2*A1.  At E = E_n this gives
c3 - c1 - 2 = 2n, the necessary polynomial-termination condition.

The closed-form energies satisfy only that necessary condition; the series
coefficient a_{n+1} stays nonzero (a c4 constraint would also be needed), so
the untruncated series mixes in the exponentially growing companion solution
and the product psi regrows at large y.  Bound-state profiles therefore
sample the degree-n truncation of the series, which is what carries the
decaying tail; ``wavefunction`` falls back to the adaptive full series only
when the degree condition itself fails (off-eigenvalue Heun parameters).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import heun
from .errors import DomainError, InternalError, TruncationFailure
from .params import PhysicalParams

# psi must drop below this fraction of its peak for a grid to count as
# covering the full decay (and for normalized samples to claim it).
DECAY_FRACTION = 1e-8


class Branch(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class SpectrumPoint:
    n: int
    branch: Branch
    energy: float


@dataclass(frozen=True, eq=False)
class WavefunctionSample:
    """Eigenfunction profile sampled on a y-grid.

    ``normalized`` is set only when normalization was requested and the grid
    reaches far enough into the tail (|psi| below DECAY_FRACTION of the peak
    at the last point) for the quadrature to be trustworthy.
    """

    n: int
    grid: np.ndarray
    values: np.ndarray
    normalized: bool


def _check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise DomainError(f"quantum number must be a non-negative integer, got {n!r}")
    return int(n)


def _shift(params: PhysicalParams) -> float:
    # m c^2 + a1, the effective mass offset entering A1 and A3.
    return params.mass + params.a1


def energy(n: int, params: PhysicalParams, branch: Branch = Branch.POSITIVE) -> SpectrumPoint:
    """Closed-form eigenvalue for level ``n`` on the chosen branch."""
    n = _check_n(n)
    Q = params.Q
    root = math.sqrt(1.0 + 4.0 * (Q * params.a3) ** 2)
    e_sq = 2.0 * params.a2 * params.a3 + (params.a2 / Q) * (2.0 * n + 1.0 + root)
    if e_sq < 0.0:
        # a2 > 0, a3 >= 0 make every term non-negative.
        raise InternalError(f"negative squared energy {e_sq!r} for n={n}")
    value = math.sqrt(e_sq)
    if branch is Branch.NEGATIVE:
        value = -value
    return SpectrumPoint(n=n, branch=branch, energy=value)


def quantization_residual(energy_value: float, n: int, params: PhysicalParams) -> float:
    """How far an energy is from satisfying the termination condition.

    Returns eps1(E) + A3^2/4 - 2p - 2n, which vanishes exactly at the
    closed-form eigenvalues.  Useful as an independent check of the spectrum:
    it is built from the wave-equation coefficients, not from the solved-for
    energy formula.
    """
    n = _check_n(n)
    if not math.isfinite(energy_value):
        raise DomainError(f"energy must be finite, got {energy_value!r}")
    Q = params.Q
    shift = _shift(params)
    eps1 = (Q / params.a2) * (
        energy_value**2 - shift**2 - 2.0 * params.a2 * params.a3
    )
    a3_quarter_sq = (Q / params.a2) * shift**2  # A3^2/4
    p = 0.5 + 0.5 * math.sqrt(1.0 + 4.0 * (Q * params.a3) ** 2)
    return eps1 + a3_quarter_sq - 2.0 * p - 2.0 * n


def level_density_paper(energy_value: float, params: PhysicalParams) -> float:
    """Level density in its published form, rho(E) = (Q/a2) * sqrt(E).

    Kept verbatim for figure comparison even though differentiating the
    spectrum gives dn/dE = Q*E/a2 instead; see level_density_consistent.
    """
    if not (energy_value > 0.0):
        raise DomainError(f"energy must be positive, got {energy_value!r}")
    return (params.Q / params.a2) * math.sqrt(energy_value)


def level_density_consistent(energy_value: float, params: PhysicalParams) -> float:
    """Level density dn/dE = Q*E/a2 implied by the closed-form spectrum.

    Valid above the band bottom; no domain checks are applied since the
    expression itself is everywhere finite.
    """
    return (params.Q / params.a2) * energy_value


def heun_parameters(n: int, params: PhysicalParams) -> heun.HeunParams:
    """Heun parameters of the level-n eigenfunction via coefficient matching."""
    n = _check_n(n)
    e_n = energy(n, params).energy
    Q = params.Q
    shift = _shift(params)
    sq = math.sqrt(Q / params.a2)
    A3 = -2.0 * sq * shift
    A1 = -2.0 * Q * params.a3 * shift * sq
    A2 = -((Q * params.a3) ** 2)
    p = 0.5 + 0.5 * math.sqrt(1.0 - 4.0 * A2)
    eps1 = (Q / params.a2) * (e_n**2 - shift**2 - 2.0 * params.a2 * params.a3)
    return heun.HeunParams(
        c1=2.0 * p - 1.0,
        c2=-A3,
        c3=eps1 + 0.25 * A3**2 + 1.0,
        c4=-2.0 * A1,
    )


def wavefunction(
    n: int,
    params: PhysicalParams,
    grid: np.ndarray,
    normalize: bool = False,
    tol: float = 1e-12,
) -> WavefunctionSample:
    """Sample the level-n eigenfunction on a non-negative, increasing y-grid.

    The Heun factor is the degree-n truncation of the series (see module
    docstring); normalization uses trapezoid quadrature of psi^2 over the
    doubled symmetric domain (the profile is even in y), i.e. 2 * trapz(psi^2).
    """
    n = _check_n(n)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("grid must be a 1-d array with at least two points")
    if not np.all(np.isfinite(grid)):
        raise DomainError("grid must be finite")
    if grid[0] < 0.0 or np.any(np.diff(grid) <= 0.0):
        raise DomainError("grid must be non-negative and strictly increasing")

    hp = heun_parameters(n, params)
    Q = params.Q
    shift = _shift(params)
    A3 = -2.0 * math.sqrt(Q / params.a2) * shift
    p = 0.5 + 0.5 * math.sqrt(1.0 + 4.0 * (Q * params.a3) ** 2)

    if heun.polynomial_degree(hp) == n:
        u = heun.evaluate_series(heun.truncated_polynomial(hp, n), grid)
    else:
        u = heun.evaluate_on_grid(hp, grid, tol)
    with np.errstate(divide="ignore"):
        # y^p with p >= 1 vanishes at y = 0; compute via exp(p*log y) off zero.
        prefactor = np.where(
            grid > 0.0,
            np.exp(p * np.log(np.where(grid > 0.0, grid, 1.0)) + 0.5 * (A3 * grid - grid**2)),
            0.0,
        )
    values = prefactor * u

    peak = float(np.max(np.abs(values)))
    decayed = peak > 0.0 and abs(values[-1]) < DECAY_FRACTION * peak
    if normalize:
        norm_sq = 2.0 * np.trapezoid(values**2, grid)
        if norm_sq <= 0.0:
            raise InternalError("profile has vanishing norm on the given grid")
        values = values / math.sqrt(norm_sq)
    values.setflags(write=False)
    return WavefunctionSample(
        n=n, grid=grid, values=values, normalized=bool(normalize and decayed)
    )


def auto_grid(
    n: int,
    params: PhysicalParams,
    points: int = 2001,
    tol: float = 1e-12,
) -> np.ndarray:
    """Pick a y-grid [0, y_max] that covers the decaying part of level n.

    y_max is chosen just past the last probe point where |psi| is still at
    least DECAY_FRACTION of the peak, so the profile on the returned grid
    rises, oscillates through its n nodes, and decays below the normalization
    threshold.  Node zeros inside the oscillatory region do not fool the scan
    because it keys on the *last* above-threshold point, not the first dip.
    """
    n = _check_n(n)
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points!r}")

    # Outer classical turning point of y^2 - A3*y = eps1 as a starting guess.
    Q = params.Q
    shift = _shift(params)
    A3 = -2.0 * math.sqrt(Q / params.a2) * shift
    e_n = energy(n, params).energy
    eps1 = (Q / params.a2) * (e_n**2 - shift**2 - 2.0 * params.a2 * params.a3)
    disc = A3 * A3 + 4.0 * eps1
    y_turn = 0.5 * (A3 + math.sqrt(disc)) if disc > 0.0 else 0.0
    end = max(2.0, 1.5 * y_turn + 2.0)

    y_max = None
    for _ in range(12):
        probe = np.linspace(0.0, end, 4001)
        try:
            sample = wavefunction(n, params, probe, normalize=False, tol=tol)
        except TruncationFailure:
            # Adaptive-fallback profiles can overflow far out; pull back.
            end *= 0.5
            continue
        mag = np.abs(sample.values)
        above = np.nonzero(mag >= DECAY_FRACTION * float(np.max(mag)))[0]
        last = int(above[-1])
        if last < mag.size - 1:
            y_max = probe[last + 1]
            break
        end *= 1.6
    if y_max is None:
        y_max = end
    return np.linspace(0.0, float(y_max), points)
