"""Per-segment characteristic parameters and the closed-form solution basis.

Each thickness segment of the arch obeys, for a trial dimensionless
frequency, the constant-coefficient equation

    X'''' + (2 + A*eta) X'' + (1 - A) X = 0

whose quartic characteristic polynomial factors into a hyperbolic/trig pair.
Depending on the sign of the hyperbolic root square the basis is
cosh/sinh + cos/sin, cos/sin + cos/sin, or the double-root pair {1, phi}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# |mu_sq| <= tol * max(1, A) classifies the double-root regime.
DEGENERATE_TOL = 1e-10

# Below this value of m*phi^2 the kernels switch to their power series.
_SERIES_THRESHOLD = 1e-4


class Regime(Enum):
    HYPER_TRIG = "hyper_trig"
    BI_TRIG = "bi_trig"
    DEGENERATE_ZERO = "degenerate_zero"


@dataclass(frozen=True)
class SegmentParams:
    """Frequency-dependent quantities of one segment.

    ``freq_sq`` is the segment's dimensionless frequency-squared coefficient
    (global omega squared over thickness ratio squared), ``disc_root`` half
    the square root of the characteristic discriminant.  ``mu_sq`` carries
    the sign of the hyperbolic branch: positive in the HYPER_TRIG regime,
    negative in BI_TRIG where the branch turns oscillatory.
    """

    omega: float
    thickness_ratio: float
    eta: float
    freq_sq: float
    disc_root: float
    mu_sq: float
    nu_sq: float
    regime: Regime


@dataclass(frozen=True)
class BasisEval:
    """Values and first three angle-derivatives of the four basis functions."""

    phi: float
    values: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray


def frequency_params(omega: float, thickness_ratio: float, eta: float) -> SegmentParams:
    """Characteristic parameters of a segment at trial frequency ``omega``."""
    if omega < 0:
        raise ValueError("omega must be non-negative")
    if thickness_ratio <= 0:
        raise ValueError("thickness ratio must be positive")
    if eta < 0:
        raise ValueError("nonlocal parameter must be non-negative")
    a = (omega / thickness_ratio) ** 2
    b = 0.5 * math.sqrt(a * a * eta * eta + 4.0 * a * (1.0 + eta))
    mu_sq = -1.0 - 0.5 * eta * a + b
    nu_sq = 1.0 + 0.5 * eta * a + b
    if abs(mu_sq) <= DEGENERATE_TOL * max(1.0, a):
        regime = Regime.DEGENERATE_ZERO
    elif mu_sq > 0:
        regime = Regime.HYPER_TRIG
    else:
        regime = Regime.BI_TRIG
    return SegmentParams(omega=omega, thickness_ratio=thickness_ratio, eta=eta,
                         freq_sq=a, disc_root=b, mu_sq=mu_sq, nu_sq=nu_sq,
                         regime=regime)


def _cs(m: float, phi: float) -> tuple[float, float]:
    """Kernels C, S with C'' = m C, S'' = m S, C(0)=1, S(0)=0, S'(0)=1.

    For m > 0 these are cosh/sinh(sqrt(m) phi) (sinh scaled by 1/sqrt(m)),
    for m < 0 cos/sin, analytically continued through m = 0 where they
    degenerate to {1, phi}.  Entire in m, so determinant evaluations stay
    smooth across regime boundaries.
    """
    z = m * phi * phi
    if abs(z) < _SERIES_THRESHOLD:
        c = 1.0 + z * (0.5 + z * (1.0 / 24.0 + z / 720.0))
        s = phi * (1.0 + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z / 5040.0)))
        return c, s
    r = math.sqrt(abs(m))
    x = r * phi
    if m > 0:
        return math.cosh(x), math.sinh(x) / r
    return math.cos(x), math.sin(x) / r


def second_pair_multipliers(params: SegmentParams) -> tuple[float, float]:
    """Column scalings taking the smooth kernels to the textbook basis."""
    if params.regime is Regime.DEGENERATE_ZERO:
        first = 1.0
    else:
        first = math.sqrt(abs(params.mu_sq))
    return first, math.sqrt(params.nu_sq)


def basis_matrix(params: SegmentParams, phi: float, scaled: bool = True) -> np.ndarray:
    """4x4 matrix of the basis functions (columns) and orders 0..3 (rows).

    ``scaled=True`` returns the smooth-kernel variant (second function of
    each pair divided by its root), which stays non-degenerate through the
    regime boundaries; ``scaled=False`` returns the textbook basis.
    """
    m1 = params.mu_sq
    m2 = -params.nu_sq
    c1, s1 = _cs(m1, phi)
    c2, s2 = _cs(m2, phi)
    out = np.array([
        [c1, s1, c2, s2],
        [m1 * s1, c1, m2 * s2, c2],
        [m1 * c1, m1 * s1, m2 * c2, m2 * s2],
        [m1 * m1 * s1, m1 * c1, m2 * m2 * s2, m2 * c2],
    ])
    if not scaled:
        k1, k2 = second_pair_multipliers(params)
        out[:, 1] *= k1
        out[:, 3] *= k2
    return out


def basis_eval(params: SegmentParams, phi: float,
               max_derivative_order: int = 3) -> BasisEval:
    """Textbook basis functions and derivatives at local angle ``phi``.

    The local angle is measured from the segment's left edge, which bounds
    the hyperbolic growth of the first pair.
    """
    if not 0 <= max_derivative_order <= 3:
        raise ValueError("max_derivative_order must be between 0 and 3")
    mat = basis_matrix(params, phi, scaled=False)
    return BasisEval(phi=phi, values=mat[0], d1=mat[1], d2=mat[2], d3=mat[3])


def ode_residual(params: SegmentParams, phi: float) -> np.ndarray:
    """Residual of each basis function in the segment equation at ``phi``.

    The fourth derivative follows analytically from the kernel identities,
    so the residual measures how well ``mu_sq`` and ``nu_sq`` solve the
    characteristic quartic.
    """
    mat = basis_matrix(params, phi, scaled=False)
    m1, m2 = params.mu_sq, -params.nu_sq
    k1, k2 = second_pair_multipliers(params)
    c1, s1 = _cs(m1, phi)
    c2, s2 = _cs(m2, phi)
    d4 = np.array([m1 * m1 * c1, k1 * m1 * m1 * s1, m2 * m2 * c2, k2 * m2 * m2 * s2])
    coeff2 = 2.0 + params.freq_sq * params.eta
    coeff0 = 1.0 - params.freq_sq
    return d4 + coeff2 * mat[2] + coeff0 * mat[0]
