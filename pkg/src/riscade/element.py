"""Single-element response of a reflective phase-shifting surface.

The element is a flat a-by-b patch in the panel's local z=0 plane whose preset
reflection state is a unit-modulus coefficient R. Under oblique incidence the
element does not realize R; the effective coefficient is

    r_eff = ((1 + R) cos(zen_in) - (1 - R)) / ((1 + R) cos(zen_in) + (1 - R)),

which is again unit-modulus for |R| = 1 and reduces to R at normal incidence
and to R itself for R = +/-1 at any incidence.

All four polarization gains share the prefactor

    C = -1j * a * b * sqrt(mu * eps) / (2 * wavelength)
        * sinc(U) * sinc(V),
    U = pi * a / wavelength * sin(zen_out) * cos(az_out),
    V = pi * b / wavelength * sin(zen_out) * sin(az_out),

and have the affine form C * (P * r_eff + Q). For vertical (v) incidence the
P/Q factors are, written with ci = cos(zen_in), si = sin(zen_in),
co = cos(zen_out), so = sin(zen_out), and the azimuth sines/cosines spelled
out per angle:

    P_vv =  ci*si*co*so - ci*cos(az_in)*co*sin(az_out)
            - sin(az_in)*sin(az_out) + sin(az_in)*cos(az_out)
    Q_vv = -ci*si*co*so + ci*cos(az_in)*co*sin(az_out)
            - sin(az_in)*sin(az_out) + sin(az_in)*cos(az_out)
    P_vh =  ci*sin(az_in)*sin(az_out) + ci*cos(az_in)*cos(az_out)
            - cos(az_in)*co*sin(az_out) - sin(az_in)*co*sin(az_out)
    Q_vh = -(ci*sin(az_in)*sin(az_out) + ci*cos(az_in)*cos(az_out)
             + cos(az_in)*co*sin(az_out) + sin(az_in)*co*sin(az_out))

Note the brackets split as J * (r_eff - 1) + M * (r_eff + 1): the (r_eff - 1)
part is the electric surface-current contribution and the (r_eff + 1) part the
magnetic one. For horizontal (h) incidence no closed form accompanies the
v-case in the source model; the expressions below come from the same
equivalent-current construction with the incident field rotated to the
horizontal polarization, which exchanges the roles of the electric and
magnetic surface currents:

    P_hv = -(1 + ci*co) * sin(az_out - az_in)
    Q_hv =  (ci*co - 1) * sin(az_out - az_in)
    P_hh = -(ci + co) * cos(az_out - az_in)
    Q_hh =  (ci - co) * cos(az_out - az_in)

Both pairs vanish for the cross-polar component at normal specular reflection
and keep every value finite at the sinc singular points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.constants import epsilon_0, mu_0

UNIT_MODULUS_TOL = 1e-9
_SINC_EPS = 1e-8

# The zenith-product term ci*si*co*so in P_vv/Q_vv is suspected of being a
# typo in the source model (it kills the co-polar response at broadside).
# False swaps in the azimuth-based reading ci*sin(az_in)*co*sin(az_out).
# Keep True unless a corrected form is ever confirmed.
VV_FIRST_TERM_USES_ZENITHS = True


class PhaseModel(str, Enum):
    """Whether oblique incidence distorts the preset phase state."""

    NON_IDEAL = "nonideal"
    IDEAL = "ideal"


@dataclass(frozen=True)
class ReflectionCoefficient:
    """Unit-modulus complex reflection state of one element."""

    value: complex

    def __post_init__(self) -> None:
        v = complex(self.value)
        if abs(abs(v) - 1.0) > UNIT_MODULUS_TOL:
            raise ValueError(f"reflection coefficient must be unit-modulus, got |{v}|")
        object.__setattr__(self, "value", v)

    @classmethod
    def from_phase(cls, phase: float) -> "ReflectionCoefficient":
        return cls(cmath.exp(1j * phase))


@dataclass(frozen=True)
class ElementGeometry:
    """Element dimensions a x b (meters), wavelength, and material constants."""

    a: float
    b: float
    wavelength: float
    mu: float = mu_0
    eps: float = epsilon_0

    def __post_init__(self) -> None:
        if self.a <= 0.0 or self.b <= 0.0 or self.wavelength <= 0.0:
            raise ValueError("a, b, and wavelength must be positive")
        if self.mu <= 0.0 or self.eps <= 0.0:
            raise ValueError("mu and eps must be positive")


@dataclass(frozen=True)
class ElementPatternValue:
    """The 2x2 polarization-coupled element gains (in x out = {v,h} x {v,h})."""

    f_vv: complex
    f_vh: complex
    f_hv: complex
    f_hh: complex

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.f_vv, self.f_vh], [self.f_hv, self.f_hh]])


def _as_complex(preset: ReflectionCoefficient | complex) -> complex:
    if isinstance(preset, ReflectionCoefficient):
        return preset.value
    v = complex(preset)
    if abs(abs(v) - 1.0) > UNIT_MODULUS_TOL:
        raise ValueError(f"preset must be unit-modulus, got |{abs(v)!r}|")
    return v


def sinc(x):
    """sin(x)/x with the limit value 1 below |x| = 1e-8. Scalar or array."""
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < _SINC_EPS
    safe = np.where(small, 1.0, arr)
    out = np.where(small, 1.0, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def effective_reflection(
    preset: ReflectionCoefficient | complex, zenith_in: float
) -> complex:
    """Effective reflection coefficient of an element under oblique incidence.

    Requires front-side incidence (zenith_in in [0, pi/2)); the model is
    undefined at grazing.
    """
    if not 0.0 <= zenith_in < math.pi / 2.0:
        raise ValueError(f"zenith_in must lie in [0, pi/2), got {zenith_in}")
    r = _as_complex(preset)
    c = math.cos(zenith_in)
    return ((1.0 + r) * c - (1.0 - r)) / ((1.0 + r) * c + (1.0 - r))


def effective_reflection_grid(values: np.ndarray, zenith_in) -> np.ndarray:
    """Vectorized :func:`effective_reflection` over an array of preset states.

    ``zenith_in`` may be a scalar or an array broadcastable against ``values``.
    Inputs are trusted (validated where the mask/angles are built).
    """
    r = np.asarray(values)
    c = np.cos(np.asarray(zenith_in, dtype=float))
    return ((1.0 + r) * c - (1.0 - r)) / ((1.0 + r) * c + (1.0 - r))


class PatternCoefficients(NamedTuple):
    """P/Q bracket factors: f_* = prefactor * (P_* * r_eff + Q_*)."""

    p_vv: np.ndarray
    q_vv: np.ndarray
    p_vh: np.ndarray
    q_vh: np.ndarray
    p_hv: np.ndarray
    q_hv: np.ndarray
    p_hh: np.ndarray
    q_hh: np.ndarray


def pattern_coefficients(zen_in, az_in, zen_out, az_out) -> PatternCoefficients:
    """Bracket factors of the four element gains; broadcasts over arrays."""
    ci, si = np.cos(zen_in), np.sin(zen_in)
    co, so = np.cos(zen_out), np.sin(zen_out)
    cpi, spi = np.cos(az_in), np.sin(az_in)
    cpo, spo = np.cos(az_out), np.sin(az_out)

    if VV_FIRST_TERM_USES_ZENITHS:
        lead = ci * si * co * so
    else:
        lead = ci * spi * co * spo
    p_vv = lead - ci * cpi * co * spo - spi * spo + spi * cpo
    q_vv = -lead + ci * cpi * co * spo - spi * spo + spi * cpo

    t3 = ci * spi * spo + ci * cpi * cpo - cpi * co * spo - spi * co * spo
    t4 = ci * spi * spo + ci * cpi * cpo + cpi * co * spo + spi * co * spo
    p_vh = t3
    q_vh = -t4

    sdelta = np.sin(az_out - az_in)
    cdelta = np.cos(az_out - az_in)
    p_hv = -(1.0 + ci * co) * sdelta
    q_hv = (ci * co - 1.0) * sdelta
    p_hh = -(ci + co) * cdelta
    q_hh = (ci - co) * cdelta
    return PatternCoefficients(p_vv, q_vv, p_vh, q_vh, p_hv, q_hv, p_hh, q_hh)


def element_prefactor(geom: ElementGeometry, zen_out, az_out):
    """Common complex prefactor C * sinc(U) * sinc(V); broadcasts over arrays."""
    so = np.sin(zen_out)
    u = math.pi * geom.a / geom.wavelength * so * np.cos(az_out)
    v = math.pi * geom.b / geom.wavelength * so * np.sin(az_out)
    scale = -1j * geom.a * geom.b * math.sqrt(geom.mu * geom.eps) / (2.0 * geom.wavelength)
    return scale * sinc(u) * sinc(v)


def _check_front_side(zen: float, name: str) -> None:
    if not 0.0 <= zen < math.pi / 2.0:
        raise ValueError(f"{name} zenith must lie in [0, pi/2), got {zen}")


def _resolve_state(preset, zen_in: float, model: PhaseModel) -> complex:
    r = _as_complex(preset)
    if model is PhaseModel.NON_IDEAL:
        return effective_reflection(r, zen_in)
    return r


def element_pattern_v(geom, incidence, outgoing, preset, model=PhaseModel.NON_IDEAL):
    """(f_vv, f_vh) for a vertically polarized incident ray.

    ``incidence`` and ``outgoing`` are local-frame SphericalAngles with
    zeniths in [0, pi/2) (front side).
    """
    _check_front_side(incidence.zenith, "incidence")
    _check_front_side(outgoing.zenith, "outgoing")
    r_eff = _resolve_state(preset, incidence.zenith, model)
    c = pattern_coefficients(incidence.zenith, incidence.azimuth, outgoing.zenith, outgoing.azimuth)
    pre = element_prefactor(geom, outgoing.zenith, outgoing.azimuth)
    return complex(pre * (c.p_vv * r_eff + c.q_vv)), complex(pre * (c.p_vh * r_eff + c.q_vh))


def element_pattern_h(geom, incidence, outgoing, preset, model=PhaseModel.NON_IDEAL):
    """(f_hv, f_hh) for a horizontally polarized incident ray."""
    _check_front_side(incidence.zenith, "incidence")
    _check_front_side(outgoing.zenith, "outgoing")
    r_eff = _resolve_state(preset, incidence.zenith, model)
    c = pattern_coefficients(incidence.zenith, incidence.azimuth, outgoing.zenith, outgoing.azimuth)
    pre = element_prefactor(geom, outgoing.zenith, outgoing.azimuth)
    return complex(pre * (c.p_hv * r_eff + c.q_hv)), complex(pre * (c.p_hh * r_eff + c.q_hh))


def element_pattern_matrix(
    geom, incidence, outgoing, preset, model=PhaseModel.NON_IDEAL
) -> ElementPatternValue:
    """All four polarization gains of one element for one in/out angle pair."""
    f_vv, f_vh = element_pattern_v(geom, incidence, outgoing, preset, model)
    f_hv, f_hh = element_pattern_h(geom, incidence, outgoing, preset, model)
    return ElementPatternValue(f_vv, f_vh, f_hv, f_hh)
