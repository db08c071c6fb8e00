"""Crack shape functions, local compliance integrals and spring flexibility.

A crack of depth ratio ``s = c/h`` at a cross-section is represented by a
massless rotational spring.  Its flexibility derives from the compliance
integrals of the stress-intensity shape functions ``F1`` and ``F2`` (or the
tangent-form alternative), integrated over the dimensionless depth ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy import integrate

# Ascending polynomial coefficients of the two bending/tension shape functions.
F1_COEFFS = (1.12, -0.23, 10.55, -21.72, 30.39)
F2_COEFFS = (1.12, -1.4, 7.33, -13.08, 14.08)

# s -> 0 limit of the tangent-form shape function: sqrt(2/(pi s) * pi s/2) -> 1
# times (0.923 + 0.199).
TADA_LIMIT_AT_ZERO = 1.122

# Rescales the printed compliance integrals to the classical rotational-spring
# form 72*pi/(E*b*h^2): ratio of prefactors (72*pi/(E*b*h^2)) / (2/(E*b)).
DIMAROGONAS_SCALE = 36.0 * math.pi

QUAD_ABS_TOL = 1e-12
FIXED_RULE_NODES = 64


class ShapeFunction(Enum):
    """Selector for the shape-function pair used in the compliance integrals."""

    POLY31_32 = "poly31_32"
    TADA33 = "tada33"


class ComplianceModel(Enum):
    """Scaling convention for the compliance entries."""

    PAPER = "paper"
    DIMAROGONAS = "dimarogonas"


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class LocalCompliance:
    """Local added flexibilities of a cracked section.

    ``c11`` couples rotation to bending moment, ``c22`` extension to axial
    force and ``c12 = c21`` the cross terms.  Units follow the inputs of
    :func:`compliance`; with lengths expressed in units of the crack
    reference thickness the derived spring flexibility is dimensionless.
    """

    c11: float
    c12: float
    c22: float
    kappa: float = 0.0


def _check_depth(s: float, upper_inclusive: bool) -> None:
    hi_ok = s <= 1.0 if upper_inclusive else s < 1.0
    if not (0.0 <= s and hi_ok and math.isfinite(s)):
        bound = "1" if upper_inclusive else "1 (through-crack forbidden)"
        raise ValueError(f"depth ratio must be in [0, {bound}), got {s!r}")


def shape_f1(s: float) -> float:
    """Bending/tension shape function, cubic-quartic fit (positive on [0, 1])."""
    _check_depth(s, upper_inclusive=True)
    return float(np.polynomial.polynomial.polyval(s, F1_COEFFS))


def shape_f2(s: float) -> float:
    """Companion shape function to :func:`shape_f1` (positive on [0, 1])."""
    _check_depth(s, upper_inclusive=True)
    return float(np.polynomial.polynomial.polyval(s, F2_COEFFS))


def shape_tada(s: float) -> float:
    """Tangent-form shape function; diverges as ``s -> 1``.

    The removable singularity at ``s = 0`` is replaced by its limit value.
    """
    if not (0.0 <= s < 1.0 and math.isfinite(s)):
        raise ValueError(f"tangent-form shape function needs 0 <= s < 1, got {s!r}")
    if s == 0.0:
        return TADA_LIMIT_AT_ZERO
    half = 0.5 * math.pi * s
    root = math.sqrt(2.0 / (math.pi * s) * math.tan(half))
    return root * (0.923 + 0.199 * (1.0 - math.sin(half)) ** 4) / math.cos(half)


def _shape_pair(selector: ShapeFunction):
    if selector is ShapeFunction.POLY31_32:
        return shape_f1, shape_f2
    return shape_tada, shape_tada


def crack_integral(s: float, selector: ShapeFunction, which: str) -> float:
    """Adaptive quadrature of ``int_0^s xi*Fa(xi)*Fb(xi) dxi``.

    ``which`` picks the pair: ``"11"``, ``"12"`` or ``"22"``.
    """
    fa, fb = _shape_pair(selector)
    if which == "12":
        pass
    elif which == "11":
        fb = fa
    elif which == "22":
        fa = fb
    else:
        raise ValueError(f"unknown integral selector {which!r}")
    if s == 0.0:
        return 0.0
    value, abserr, info, *tail = integrate.quad(
        lambda xi: xi * fa(xi) * fb(xi), 0.0, s,
        epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200, full_output=1,
    )
    if tail:
        raise QuadratureError(
            f"compliance integral {which} did not converge on [0, {s}]", abserr)
    return float(value)


def crack_integral_fixed(s: float, selector: ShapeFunction, which: str,
                         nodes: int = FIXED_RULE_NODES) -> float:
    """Same integral via a fixed-order Gauss-Legendre rule (cross-check path)."""
    fa, fb = _shape_pair(selector)
    if which == "11":
        fb = fa
    elif which == "22":
        fa = fb
    if s == 0.0:
        return 0.0
    x, w = np.polynomial.legendre.leggauss(nodes)
    xi = 0.5 * s * (x + 1.0)
    vals = np.array([t * fa(t) * fb(t) for t in xi])
    return float(0.5 * s * np.dot(w, vals))


def compliance(s: float, youngs_modulus: float, width: float, thickness: float,
               selector: ShapeFunction = ShapeFunction.POLY31_32,
               model: ComplianceModel = ComplianceModel.PAPER) -> LocalCompliance:
    """Compliance entries of a crack of depth ratio ``s`` in a ``b x h`` section.

    Parameters
    ----------
    s : depth ratio c/h, 0 <= s < 1.
    youngs_modulus, width, thickness : section data; any consistent units.
    selector : shape-function pair used in the integrands.
    model : PAPER keeps the integrals as printed, DIMAROGONAS rescales them
        by ``36*pi/h**2`` to the classical rotational-spring convention.
    """
    _check_depth(s, upper_inclusive=False)
    if youngs_modulus <= 0 or width <= 0 or thickness <= 0:
        raise ValueError("youngs_modulus, width and thickness must be positive")
    e, b, h = youngs_modulus, width, thickness
    c11 = 2.0 / (e * b) * crack_integral(s, selector, "11")
    c12 = 2.0 / (e * b * h) * crack_integral(s, selector, "12")
    c22 = 2.0 / (e * b) * crack_integral(s, selector, "22")
    if model is ComplianceModel.DIMAROGONAS:
        scale = DIMAROGONAS_SCALE / h**2
        c11, c12, c22 = scale * c11, scale * c12, scale * c22
    return LocalCompliance(c11=c11, c12=c12, c22=c22)


def spring_flexibility(comp: LocalCompliance, youngs_modulus: float,
                       moment_of_inertia: float, radius: float,
                       eta: float = 0.0) -> float:
    """Rotational spring flexibility of a cracked section.

    Returns ``kappa = (c11 - c12/R) * E * I / R``, the coefficient of the
    slope-jump condition ``[X'] = -kappa * (X'' + (1 + A*eta)*X) / (1 + eta)``
    at the cracked interface.  With all lengths expressed in units of the
    crack reference thickness the result is dimensionless.
    """
    if radius <= 0 or moment_of_inertia <= 0 or youngs_modulus <= 0:
        raise ValueError("youngs_modulus, moment_of_inertia and radius must be positive")
    if eta < 0:
        raise ValueError("nonlocal parameter must be non-negative")
    return (comp.c11 - comp.c12 / radius) * youngs_modulus * moment_of_inertia / radius


def crack_flexibility(s: float, reference_slenderness: float,
                      selector: ShapeFunction = ShapeFunction.POLY31_32,
                      model: ComplianceModel = ComplianceModel.PAPER,
                      eta: float = 0.0,
                      thickness_side_ratio: float = 1.0) -> tuple[float, LocalCompliance]:
    """Flexibility of one crack, evaluated in reference-thickness units.

    ``reference_slenderness`` is ``h_ref / R`` where ``h_ref`` is the thinner
    neighbouring thickness.  ``thickness_side_ratio`` is the thickness of the
    segment whose bending stiffness enters the spring, divided by ``h_ref``
    (1 under the thinner-neighbour rule).  The unit system makes ``kappa``
    scale-invariant: it depends only on ``s``, ``h_ref/R`` and the model.
    """
    if reference_slenderness <= 0:
        raise ValueError("reference slenderness h_ref/R must be positive")
    comp = compliance(s, 1.0, 1.0, 1.0, selector=selector, model=model)
    inertia = thickness_side_ratio**3 / 12.0
    radius = 1.0 / reference_slenderness
    kappa = spring_flexibility(comp, 1.0, inertia, radius, eta)
    return kappa, replace(comp, kappa=kappa)
