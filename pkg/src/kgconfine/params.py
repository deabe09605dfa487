"""Potential parameters and their dimensionless reduction.

The model is a one-dimensional Klein-Gordon particle with a scalar potential

    V_S(x) = a1 + a2*|x| + a3/|x|

added to the mass term and no vector coupling.  All module math works with
the inverse length Q = 1/(hbar*c) and the scaled coordinate y = sqrt(Q*a2)*|x|.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateReduction, DomainError


class UnitMode(enum.Enum):
    NATURAL = "natural"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class Units:
    """Reporting convention for dimensional quantities.

    In natural mode hbar*c = 1 is required; energies are reported in units of
    eps = sqrt(a2*a3) and specific heat in units of k_B.  Explicit mode keeps
    energies in the same units as the input parameters (heat capacity is still
    per k_B, since no Boltzmann constant value is taken as input).
    """

    mode: UnitMode = UnitMode.NATURAL

    def validate(self, params: "PhysicalParams") -> None:
        if self.mode is UnitMode.NATURAL and params.hbar_c != 1.0:
            raise DomainError(
                f"natural units require hbar_c = 1, got {params.hbar_c!r}"
            )


@dataclass(frozen=True)
class PhysicalParams:
    """Potential coefficients plus rest energy, all in one energy unit.

    ``mass`` is the rest energy m*c^2.  a2 must be positive (the linear term
    provides confinement) and a3 must be non-negative; a1 is an unconstrained
    energy offset.
    """

    a1: float
    a2: float
    a3: float
    mass: float
    hbar_c: float = 1.0

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "mass", "hbar_c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.a2 <= 0.0:
            raise DomainError(f"a2 must be positive, got {self.a2!r}")
        if self.hbar_c <= 0.0:
            raise DomainError(f"hbar_c must be positive, got {self.hbar_c!r}")
        if self.a3 < 0.0:
            # eps = sqrt(a2*a3) must be real; the bound-state analysis assumes
            # a repulsive 1/|x| core.
            raise DomainError(f"a3 must be non-negative, got {self.a3!r}")
        if self.mass < 0.0:
            raise DomainError(f"mass must be non-negative, got {self.mass!r}")

    @property
    def Q(self) -> float:
        """Inverse length scale 1/(hbar*c)."""
        return 1.0 / self.hbar_c


@dataclass(frozen=True)
class DimensionlessParams:
    """Derived quantities that drive the series and thermodynamic formulas.

    q       = a3/(hbar*c), the single coupling the spectrum depends on
    eps     = sqrt(a2*a3), the natural energy unit
    sigma1  = 2/q
    sigma2  = 2 + (1 + sqrt(1 + 4 q^2))/q, so E_n = eps*sqrt(sigma1*n + sigma2)
    A1..A3  = coefficients of the scaled wave equation
              psi'' + (eps1 + A1/y + A2/y^2 + A3*y - y^2) psi = 0
    p       = 1/2 + sqrt(1 - 4*A2)/2, the power in the y -> 0 behavior y^p
    """

    q: float
    eps: float
    sigma1: float
    sigma2: float
    A1: float
    A2: float
    A3: float
    p: float

    def eps1_of(self, energy: float) -> float:
        """Energy-dependent constant term of the scaled wave equation.

        eps1(E) = (Q/a2)*(E^2 - (m c^2 + a1)^2 - 2 a2 a3), rewritten in the
        stored dimensionless fields via Q/a2 = q/eps^2 and
        (m c^2 + a1)^2 = A3^2 eps^2 / (4 q).
        """
        return self.q * (energy / self.eps) ** 2 - 0.25 * self.A3**2 - 2.0 * self.q


def to_dimensionless(params: PhysicalParams) -> DimensionlessParams:
    """Reduce physical parameters to the dimensionless set.

    Raises DegenerateReduction for a3 = 0: q vanishes there and sigma1 = 2/q
    is undefined, even though the spectrum itself stays finite.
    """
    if params.a3 == 0.0:
        raise DegenerateReduction(
            "a3 = 0 has no dimensionless reduction (q = 0 makes sigma1 = 2/q blow up)"
        )
    Q = params.Q
    q = Q * params.a3
    eps = math.sqrt(params.a2 * params.a3)
    root = math.sqrt(1.0 + 4.0 * q * q)
    sigma1 = 2.0 / q
    sigma2 = 2.0 + (1.0 + root) / q
    shift = params.mass + params.a1  # m c^2 + a1
    sq = math.sqrt(Q / params.a2)
    A3 = -2.0 * sq * shift
    A1 = -2.0 * Q * params.a3 * shift * sq  # equals q * A3
    A2 = -(q * q)
    p = 0.5 + 0.5 * math.sqrt(1.0 - 4.0 * A2)
    return DimensionlessParams(
        q=q, eps=eps, sigma1=sigma1, sigma2=sigma2, A1=A1, A2=A2, A3=A3, p=p
    )


def scaled_coordinate(x: float, params: PhysicalParams) -> float:
    """Map a physical coordinate to y = sqrt(Q*a2)*|x|."""
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    return math.sqrt(params.Q * params.a2) * abs(x)
