"""Panel-level phase masks and full-panel pattern synthesis.

The panel gain for each polarization pair is the element-gain sum

    F_* = sum_{x,y} f_*(in, out; R_{x,y})
          * exp(1j*k * r_in . d_{x,y}) * exp(1j*k * r_out . d_{x,y}),

with k = 2*pi/wavelength, d_{x,y} the element positions (local frame, grid
centroid at the origin), and each element's gain evaluated with its own preset
state through the effective-reflection map (non-ideal model) or directly
(ideal model). Because the element gains are affine in the reflection state,
the double sum reduces to two shared reductions

    S0 = sum phase_{x,y},      S1 = sum state_{x,y} * phase_{x,y},

from which every F_* follows as prefactor * (P_* * S1 + Q_* * S0). Reductions
run through np.einsum with optimize=False, so results are bit-reproducible and
independent of BLAS threading.

Operating strategies for the mask:

* optimal: R_{x,y} = exp(-1j*k*(r_in + r_out) . d_{x,y}), which aligns every
  per-element phasor for the steering pair.
* 1-bit: the optimal mask snapped to {1, -1} by the sign of the real part
  (ties at Re = 0 map to 1).
* specular: the all-ones mask (mirror behavior).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .element import (
    ElementGeometry,
    PhaseModel,
    UNIT_MODULUS_TOL,
    effective_reflection_grid,
    element_prefactor,
    pattern_coefficients,
)
from .geometry import Direction3, Pose, SphericalAngle, element_grid

POLARIZATION_PAIRS = ("vv", "vh", "hv", "hh")
_MAX_CUT_STEP = math.radians(1.0) + 1e-12
CUT_FLOOR_DB = -300.0


@dataclass(frozen=True)
class PanelConfig:
    """Panel geometry: element counts, spacing, element geometry, and pose."""

    count_x: int
    count_y: int
    spacing: float
    geom: ElementGeometry
    pose: Pose = Pose()

    def __post_init__(self) -> None:
        if self.count_x < 1 or self.count_y < 1:
            raise ValueError("element counts must be >= 1")
        if self.spacing <= 0.0:
            raise ValueError("spacing must be positive")
        if self.spacing < max(self.geom.a, self.geom.b):
            raise ValueError("spacing smaller than the element size (elements overlap)")

    def positions(self) -> np.ndarray:
        """Element centers, shape (count_x, count_y, 3), local frame."""
        return element_grid(self.count_x, self.count_y, self.spacing)


@dataclass(frozen=True, eq=False)
class PhaseMask:
    """Per-element reflection states, shape (count_x, count_y), all unit-modulus."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=complex)
        if arr.ndim != 2:
            raise ValueError("mask must be a 2-D grid")
        if np.max(np.abs(np.abs(arr) - 1.0)) > UNIT_MODULUS_TOL:
            raise ValueError("every mask entry must be unit-modulus")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]


@dataclass(frozen=True)
class PanelPatternValue:
    """Panel gains for the four polarization pairs at one in/out angle pair."""

    f_vv: complex
    f_vh: complex
    f_hv: complex
    f_hh: complex

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.f_vv, self.f_vh], [self.f_hv, self.f_hh]])


class PatternGrids(NamedTuple):
    """Panel gains on an (incidence x outgoing) angle grid."""

    f_vv: np.ndarray
    f_vh: np.ndarray
    f_hv: np.ndarray
    f_hh: np.ndarray


def _check_mask(cfg: PanelConfig, mask: PhaseMask) -> None:
    if mask.shape != (cfg.count_x, cfg.count_y):
        raise ValueError(
            f"mask shape {mask.shape} does not match panel {cfg.count_x} x {cfg.count_y}"
        )


def _inplane_phase(cfg: PanelConfig, ux, uy) -> np.ndarray:
    """exp(1j*k*(r . d_xy)) for in-plane direction components (ux, uy).

    Returns shape (n, count_x*count_y) for n directions.
    """
    pos = cfg.positions().reshape(-1, 3)
    k = 2.0 * math.pi / cfg.geom.wavelength
    ux = np.atleast_1d(np.asarray(ux, dtype=float))
    uy = np.atleast_1d(np.asarray(uy, dtype=float))
    return np.exp(1j * k * (np.outer(ux, pos[:, 0]) + np.outer(uy, pos[:, 1])))


def strategy_optimal(cfg: PanelConfig, dir_in: Direction3, dir_out: Direction3) -> PhaseMask:
    """Continuous mask that phase-aligns the panel for the (dir_in, dir_out) pair.

    Directions are local-frame unit vectors pointing away from the panel
    (toward the source and toward the steering target).
    """
    pos = cfg.positions()
    k = 2.0 * math.pi / cfg.geom.wavelength
    proj = (dir_in.x + dir_out.x) * pos[:, :, 0] + (dir_in.y + dir_out.y) * pos[:, :, 1]
    return PhaseMask(np.exp(-1j * k * proj))


def strategy_1bit(continuous: PhaseMask) -> PhaseMask:
    """Two-state mask: 1 where Re > 0, -1 where Re < 0, ties at Re = 0 to 1."""
    vals = np.where(continuous.values.real < 0.0, -1.0 + 0.0j, 1.0 + 0.0j)
    return PhaseMask(vals)


def strategy_specular(cfg: PanelConfig) -> PhaseMask:
    """All-ones mask; the panel reflects like a mirror."""
    return PhaseMask(np.ones((cfg.count_x, cfg.count_y), dtype=complex))


def quantize_nbit(continuous: PhaseMask, n_bits: int) -> PhaseMask:
    """Snap each entry to the nearest of the 2**n states exp(-1j*2*pi*k/2**n).

    Nearest by phase distance; exact midpoints follow round-half-to-even of
    the state index.
    """
    if n_bits < 1:
        raise ValueError("n_bits must be >= 1")
    n_states = 2**n_bits
    step = 2.0 * math.pi / n_states
    # State k sits at phase -2*pi*k/2**n; work with the negated angle.
    neg_phase = np.mod(-np.angle(continuous.values), 2.0 * math.pi)
    idx = np.mod(np.round(neg_phase / step), n_states)
    vals = np.exp(-1j * step * idx)
    # Snap the cardinal states to exact values (exp leaves ~1e-16 dust that
    # would break exact agreement with the two-state strategy).
    re = np.where(np.abs(vals.real) < 1e-12, 0.0, vals.real)
    im = np.where(np.abs(vals.imag) < 1e-12, 0.0, vals.imag)
    return PhaseMask(re + 1j * im)


def panel_pattern_grid(
    cfg: PanelConfig,
    mask: PhaseMask,
    zen_in,
    az_in,
    zen_out,
    az_out,
    model: PhaseModel = PhaseModel.NON_IDEAL,
) -> PatternGrids:
    """Panel gains for every combination of incidence and outgoing angles.

    Angle arrays are local-frame; output arrays have shape
    (len(zen_in), len(zen_out)). Incidence zeniths must be front-side.
    """
    _check_mask(cfg, mask)
    zen_in = np.atleast_1d(np.asarray(zen_in, dtype=float))
    az_in = np.atleast_1d(np.asarray(az_in, dtype=float))
    zen_out = np.atleast_1d(np.asarray(zen_out, dtype=float))
    az_out = np.atleast_1d(np.asarray(az_out, dtype=float))
    if np.any(zen_in < 0.0) or np.any(zen_in >= math.pi / 2.0):
        raise ValueError("incidence zeniths must lie in [0, pi/2)")

    flat = mask.values.reshape(-1)
    phase_in = _inplane_phase(cfg, np.sin(zen_in) * np.cos(az_in), np.sin(zen_in) * np.sin(az_in))
    phase_out = _inplane_phase(cfg, np.sin(zen_out) * np.cos(az_out), np.sin(zen_out) * np.sin(az_out))

    if model is PhaseModel.NON_IDEAL:
        states = effective_reflection_grid(flat[None, :], zen_in[:, None])
    else:
        states = np.broadcast_to(flat[None, :], (zen_in.size, flat.size))

    s0 = np.einsum("ae,be->ab", phase_in, phase_out, optimize=False)
    s1 = np.einsum("ae,be->ab", phase_in * states, phase_out, optimize=False)

    coeff = pattern_coefficients(
        zen_in[:, None], az_in[:, None], zen_out[None, :], az_out[None, :]
    )
    pre = element_prefactor(cfg.geom, zen_out, az_out)[None, :]
    return PatternGrids(
        pre * (coeff.p_vv * s1 + coeff.q_vv * s0),
        pre * (coeff.p_vh * s1 + coeff.q_vh * s0),
        pre * (coeff.p_hv * s1 + coeff.q_hv * s0),
        pre * (coeff.p_hh * s1 + coeff.q_hh * s0),
    )


def panel_pattern(
    cfg: PanelConfig,
    mask: PhaseMask,
    incidence: SphericalAngle,
    outgoing: SphericalAngle,
    model: PhaseModel = PhaseModel.NON_IDEAL,
) -> PanelPatternValue:
    """Panel gains for a single local-frame (incidence, outgoing) angle pair."""
    grids = panel_pattern_grid(
        cfg, mask, incidence.zenith, incidence.azimuth, outgoing.zenith, outgoing.azimuth, model
    )
    return PanelPatternValue(
        complex(grids.f_vv[0, 0]),
        complex(grids.f_vh[0, 0]),
        complex(grids.f_hv[0, 0]),
        complex(grids.f_hh[0, 0]),
    )


def pattern_cut(
    cfg: PanelConfig,
    mask: PhaseMask,
    incidence: SphericalAngle,
    sweep: np.ndarray,
    fixed: float,
    sweep_axis: str = "zenith",
    model: PhaseModel = PhaseModel.NON_IDEAL,
    normalize: bool = True,
) -> dict[str, np.ndarray]:
    """One-dimensional gain cut over the outgoing direction.

    ``sweep`` holds the swept angle values (radians, step <= 1 degree) and
    ``fixed`` the other outgoing coordinate. Returns dB gains per polarization
    pair, relative to the cut maximum across all pairs when ``normalize``,
    floored at CUT_FLOOR_DB.
    """
    sweep = np.asarray(sweep, dtype=float)
    if sweep.size == 0:
        raise ValueError("empty cut")
    if sweep.size > 1 and np.max(np.abs(np.diff(sweep))) > _MAX_CUT_STEP:
        raise ValueError("cut step must not exceed 1 degree")
    if sweep_axis == "zenith":
        zen_out, az_out = sweep, np.full_like(sweep, fixed)
    elif sweep_axis == "azimuth":
        zen_out, az_out = np.full_like(sweep, fixed), sweep
    else:
        raise ValueError("sweep_axis must be 'zenith' or 'azimuth'")

    grids = panel_pattern_grid(
        cfg, mask, incidence.zenith, incidence.azimuth, zen_out, az_out, model
    )
    mags = {pol: np.abs(getattr(grids, f"f_{pol}"))[0] for pol in POLARIZATION_PAIRS}
    ref = max(float(np.max(m)) for m in mags.values()) if normalize else 1.0
    if ref == 0.0:
        ref = 1.0
    out: dict[str, np.ndarray] = {}
    with np.errstate(divide="ignore"):
        for pol, m in mags.items():
            out[pol] = np.maximum(20.0 * np.log10(m / ref), CUT_FLOOR_DB)
    return out
