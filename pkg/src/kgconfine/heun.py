"""Frobenius-series solver for the biconfluent Heun equation.

The equation solved here, with parameters c1..c4 and K = [c4 + c2(1+c1)]/2, is

    xi u'' + (1 + c1 - c2*xi - 2*xi^2) u' + [(c3 - c1 - 2)*xi - K] u = 0.

The solution regular at the origin is normalized to u(0) = 1 and expanded as
u(xi) = sum_k a_k xi^k.  Inserting the series and collecting xi^k gives the
three-term recurrence

    (k+1)(k+1+c1) a_{k+1} = (c2*k + K) a_k + (2k + c1 - c3) a_{k-1},

with a_{-1} = 0 and a_0 = 1; the k = 0 row reduces to (1+c1) a_1 = K a_0.
The recurrence degenerates when 1 + c1 hits a non-positive integer, which is
rejected up front as SingularParameter.

When c3 - c1 - 2 = 2n for a non-negative integer n, the a_{n-1} coupling in
the a_{n+2} row vanishes, so the series *can* terminate as a degree-n
polynomial; actual termination additionally needs a_{n+1} = 0, which pins c4.
``polynomial_degree`` reports the first (necessary) condition only, while
``SeriesSolution.terminated_polynomially`` reports what the computed
coefficients actually did.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularParameter, TruncationFailure

# Hard cap on adaptively generated terms.
N_MAX = 10_000
# The adaptive rule stops after this many consecutive sub-threshold terms.
_CONSECUTIVE = 3
# |c3 - c1 - 2 - 2n| below this counts as meeting the termination condition.
DEGREE_TOL = 1e-9
# Margin keeping 1 + c1 away from 0, -1, -2, ...
_SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class HeunParams:
    """Parameter quadruple of the biconfluent Heun equation."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        shifted = 1.0 + self.c1
        if shifted <= 0.5:
            nearest = round(shifted)
            if nearest <= 0 and abs(shifted - nearest) < _SINGULAR_TOL:
                raise SingularParameter(
                    f"1 + c1 = {shifted!r} is a non-positive integer; "
                    "series denominators vanish"
                )

    @property
    def K(self) -> float:
        """Constant term [c4 + c2*(1 + c1)]/2 of the equation."""
        return 0.5 * (self.c4 + self.c2 * (1.0 + self.c1))


@dataclass(frozen=True, eq=False)
class SeriesSolution:
    """Truncated power-series solution u(xi) = sum_k coeffs[k] * xi^k."""

    coeffs: np.ndarray
    truncation_index: int
    tol: float
    terminated_polynomially: bool

    @property
    def degree(self) -> int:
        """Index of the last non-zero stored coefficient."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else 0


class Evaluation(NamedTuple):
    """Series value with the magnitude of the first neglected term."""

    value: float
    error_estimate: float
    n_terms: int


def _coefficients(hp: HeunParams, n_terms: int, a0: float = 1.0) -> np.ndarray:
    """First ``n_terms + 1`` series coefficients a_0..a_{n_terms}."""
    a = np.zeros(n_terms + 1)
    a[0] = a0
    if n_terms == 0:
        return a
    K = hp.K
    a[1] = K * a0 / (1.0 + hp.c1)
    for k in range(1, n_terms):
        a[k + 1] = ((hp.c2 * k + K) * a[k] + (2.0 * k + hp.c1 - hp.c3) * a[k - 1]) / (
            (k + 1.0) * (k + 1.0 + hp.c1)
        )
    return a


def _detect_termination(coeffs: np.ndarray) -> bool:
    # Exact zeros only: two consecutive zero coefficients force all later ones
    # to zero through the recurrence, so a zero tail of length >= 2 is proof.
    if coeffs.size < 3:
        return False
    nz = np.nonzero(coeffs)[0]
    last = int(nz[-1]) if nz.size else 0
    return coeffs.size - 1 - last >= 2


def series_coefficients(hp: HeunParams, n_terms: int) -> SeriesSolution:
    """Generate a fixed number of series coefficients.

    Polynomial termination is reported from the computed coefficients: it is
    claimed only when at least two trailing coefficients are exactly zero, and
    zeros regenerate themselves through the recurrence.
    """
    if n_terms < 2:
        raise DomainError(f"n_terms must be >= 2, got {n_terms!r}")
    coeffs = _coefficients(hp, n_terms)
    coeffs.setflags(write=False)
    return SeriesSolution(
        coeffs=coeffs,
        truncation_index=n_terms,
        tol=0.0,
        terminated_polynomially=_detect_termination(coeffs),
    )


def truncated_polynomial(hp: HeunParams, degree: int) -> SeriesSolution:
    """Degree-capped truncation a_0..a_degree of the regular solution.

    When c3 - c1 - 2 = 2n the xi-coefficient of the equation supports a
    degree-n polynomial, but the computed a_{n+1} is generically nonzero (no
    condition on c4 is imposed here), so the full series regrows at large xi.
    The degree-n cut keeps the decaying, bound-state part; callers needing
    the honest full series use the adaptive path instead.
    """
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree!r}")
    probe = _coefficients(hp, degree + 2)
    coeffs = probe[: degree + 1].copy()
    coeffs.setflags(write=False)
    return SeriesSolution(
        coeffs=coeffs,
        truncation_index=degree,
        tol=0.0,
        terminated_polynomially=bool(np.all(probe[degree + 1 :] == 0.0)),
    )


def evaluate_series(sol: SeriesSolution, ys):
    """Horner-evaluate a stored series at scalar or array ``ys``."""
    return _polyval(sol.coeffs, ys)


def _adaptive_core(hp: HeunParams, y: float, tol: float) -> tuple[list[float], float, float]:
    """Shared adaptive loop: (coefficients, partial sum, first neglected term).

    The stopping test tracks the terms t_k = a_k y^k through the recurrence
    itself (multiply the a_{k+1} row by y^{k+1}), which stays in floating
    range even when the bare power y^k would overflow.
    """
    if tol <= 0.0 or not math.isfinite(tol):
        raise DomainError(f"tol must be positive and finite, got {tol!r}")
    if not math.isfinite(y):
        raise DomainError(f"y must be finite, got {y!r}")
    K = hp.K
    a1 = K / (1.0 + hp.c1)
    if y == 0.0:
        return [1.0, a1], 1.0, 0.0

    coeffs = [1.0, a1]
    t_prev, t_cur = 1.0, a1 * y
    partial = t_prev + t_cur
    quiet = 0
    k = 1
    while k < N_MAX:
        denom = (k + 1.0) * (k + 1.0 + hp.c1)
        a_next = ((hp.c2 * k + K) * coeffs[k] + (2.0 * k + hp.c1 - hp.c3) * coeffs[k - 1]) / denom
        t_next = ((hp.c2 * k + K) * y * t_cur + (2.0 * k + hp.c1 - hp.c3) * y * y * t_prev) / denom
        coeffs.append(a_next)
        partial += t_next
        if not math.isfinite(partial):
            raise TruncationFailure(
                f"series overflowed at term {k + 1} for y={y!r}", partial, k + 1
            )
        if abs(t_next) < tol * max(abs(partial), 1e-300):
            quiet += 1
            if quiet >= _CONSECUTIVE:
                n = len(coeffs) - 1
                denom = (n + 1.0) * (n + 1.0 + hp.c1)
                neglected = (
                    (hp.c2 * n + K) * y * t_next
                    + (2.0 * n + hp.c1 - hp.c3) * y * y * t_cur
                ) / denom
                return coeffs, partial, abs(neglected)
        else:
            quiet = 0
        t_prev, t_cur = t_cur, t_next
        k += 1
    raise TruncationFailure(
        f"series did not settle within {N_MAX} terms for y={y!r}", partial, N_MAX
    )


def adaptive_series(hp: HeunParams, y: float, tol: float) -> SeriesSolution:
    """Coefficients truncated by the adaptive rule at the point ``y``.

    Terms are generated until |a_k y^k| < tol * |partial sum| holds for three
    consecutive k (the partial sums of an entire function settle fast once
    the factorial decay of the coefficients takes over).  Failure to settle
    within N_MAX terms raises TruncationFailure.
    """
    coeffs, _, _ = _adaptive_core(hp, y, tol)
    arr = np.array(coeffs)
    arr.setflags(write=False)
    return SeriesSolution(arr, len(coeffs) - 1, tol, _detect_termination(arr))


def evaluate(hp: HeunParams, y: float, tol: float = 1e-12) -> Evaluation:
    """Evaluate the regular solution at ``y``.

    Returns the truncated-series value, the magnitude of the first neglected
    term as an error estimate, and the number of terms summed.  u(0) = 1
    exactly by normalization.
    """
    if y == 0.0:
        if tol <= 0.0 or not math.isfinite(tol):
            raise DomainError(f"tol must be positive and finite, got {tol!r}")
        return Evaluation(1.0, 0.0, 1)
    coeffs, partial, neglected = _adaptive_core(hp, y, tol)
    return Evaluation(partial, neglected, len(coeffs))


def evaluate_on_grid(hp: HeunParams, ys: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Evaluate the regular solution on a grid of points.

    One coefficient set, truncated adaptively at the largest |y|, serves the
    whole grid: term magnitudes are monotone in |y|, so the cut is valid at
    every smaller point.
    """
    ys = np.asarray(ys, dtype=float)
    if ys.size == 0:
        return np.empty(0)
    y_ref = float(np.max(np.abs(ys)))
    if y_ref == 0.0:
        return np.ones_like(ys)
    sol = adaptive_series(hp, y_ref, tol)
    return _polyval(sol.coeffs, ys)


def _polyval(coeffs: np.ndarray, y):
    # Horner evaluation, scalar or vectorized.
    result = np.zeros_like(np.asarray(y, dtype=float))
    for a in coeffs[::-1]:
        result = result * y + a
    if np.ndim(y) == 0:
        return float(result)
    return result


def ode_residual(hp: HeunParams, sol: SeriesSolution, y: float) -> float:
    """Absolute residual of the equation at ``y`` for a truncated series.

    At y = 0 the equation collapses to its limiting row
    (1 + c1) u'(0) - K u(0) = 0, which is what gets evaluated there.
    """
    if not math.isfinite(y):
        raise DomainError(f"y must be finite, got {y!r}")
    c = sol.coeffs
    if c.size < 2:
        raise DomainError("series must hold at least two coefficients")
    K = hp.K
    if y == 0.0:
        return abs((1.0 + hp.c1) * c[1] - K * c[0])
    k = np.arange(c.size)
    d1 = c[1:] * k[1:]          # coefficients of u'
    d2 = d1[1:] * k[1:-1]       # coefficients of u'' shifted by one power
    u = _polyval(c, y)
    up = _polyval(d1, y) if d1.size else 0.0
    upp = _polyval(d2, y) if d2.size else 0.0
    return abs(
        y * upp
        + (1.0 + hp.c1 - hp.c2 * y - 2.0 * y * y) * up
        + ((hp.c3 - hp.c1 - 2.0) * y - K) * u
    )


def polynomial_degree(hp: HeunParams) -> int | None:
    """Degree n satisfying c3 - c1 - 2 = 2n, if one exists.

    Returns the non-negative integer n for which |c3 - c1 - 2 - 2n| <= 1e-9,
    else None.  This is the necessary condition for polynomial truncation;
    whether the series actually terminates also depends on c4.
    """
    half = 0.5 * (hp.c3 - hp.c1 - 2.0)
    n = round(half)
    if n < 0:
        return None
    if abs(half - n) <= 0.5 * DEGREE_TOL:
        return int(n)
    return None
