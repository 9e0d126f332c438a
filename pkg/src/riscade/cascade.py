"""Assembly of the two-hop cascade impulse response through the panel.

For every ray pair (i from the first hop, j from the second) and antenna pair
(p, q) the tap amplitude is

    amp = sqrt(P_i * P_j)
          * F_rx,p(arrival_j) . X_j . F_panel(in_i, out_j) . X_i . F_tx,q(departure_i)
          * exp(1j*k*(r_arrival_j . d_p + r_departure_i . d_q))

at delay tau_i + tau_j, where X are the 2x2 cross-polarization matrices of the
rays and F_panel the panel gain matrix with incidence taken from the first
hop's arrival at the panel and exit from the second hop's departure, both
expressed in the panel's local frame. Rays that reach the panel from its back
side (local zenith >= pi/2) contribute zero panel response.

Tap lists follow (ray_i, ray_j) lexicographic order with the LOS ray, when
present, first on each hop. Path loss is kept out of the amplitudes; the
compound dB value rides along for the link budget.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .element import PhaseModel
from .gbsm import Ray, SubChannel, cascade_path_loss
from .geometry import Position3, SphericalAngle, direction_from_angles
from .panel import PanelConfig, PhaseMask, panel_pattern_grid

_FRONT_COS_MIN = 1e-9


@dataclass(frozen=True)
class PolarizationMatrix:
    """2x2 complex coupling between vertical and horizontal components."""

    vv: complex
    vh: complex
    hv: complex
    hh: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.vv, self.vh], [self.hv, self.hh]])


@dataclass(frozen=True)
class AntennaElement:
    """One antenna: position and a (v, h) field pattern over direction."""

    position: Position3 = Position3(0.0, 0.0, 0.0)
    pattern: Callable[[SphericalAngle], tuple[complex, complex]] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.pattern is None:
            object.__setattr__(self, "pattern", lambda angle: (1.0 + 0.0j, 0.0 + 0.0j))


def isotropic_v_element(position: Position3 = Position3(0.0, 0.0, 0.0)) -> AntennaElement:
    """Isotropic, purely vertically polarized element (the default antenna)."""
    return AntennaElement(position=position)


@dataclass(frozen=True)
class CirTap:
    """One impulse-response tap for an antenna pair."""

    delay: float
    amp: complex

    def __post_init__(self) -> None:
        if self.delay < 0.0:
            raise ValueError("tap delay must be >= 0")


@dataclass(frozen=True)
class CascadeChannel:
    """Taps per (p, q) antenna pair, compound path loss, and run metadata."""

    taps: dict[tuple[int, int], tuple[CirTap, ...]]
    path_loss_db: float
    meta: dict = field(default_factory=dict)


def xpr_matrix(ray: Ray) -> PolarizationMatrix:
    """Cross-polarization matrix of one ray.

    Off-diagonal moduli are sqrt(1/xpr); an infinite xpr (the LOS ray) gives a
    diagonal matrix with the ray's co-polar phases.
    """
    pvv, pvh, phv, phh = ray.phases
    if math.isinf(ray.xpr):
        return PolarizationMatrix(cmath.exp(1j * pvv), 0.0, 0.0, cmath.exp(1j * phh))
    leak = math.sqrt(1.0 / ray.xpr)
    return PolarizationMatrix(
        cmath.exp(1j * pvv),
        leak * cmath.exp(1j * pvh),
        leak * cmath.exp(1j * phv),
        cmath.exp(1j * phh),
    )


def _local_in_plane(pose, angles: Sequence[SphericalAngle]):
    """Local-frame zeniths/azimuths plus a front-side mask for global angles."""
    rot_t = pose.rotation().T
    dirs = np.array([direction_from_angles(a).as_array() for a in angles])
    local = dirs @ rot_t.T
    z = np.clip(local[:, 2], -1.0, 1.0)
    zen = np.arccos(z)
    az = np.mod(np.arctan2(local[:, 1], local[:, 0]), 2.0 * math.pi)
    front = local[:, 2] > _FRONT_COS_MIN
    return zen, az, front


def compose_cir(
    sub1: SubChannel,
    sub2: SubChannel,
    panel: PanelConfig,
    mask: PhaseMask,
    model: PhaseModel = PhaseModel.NON_IDEAL,
    tx: Optional[Sequence[AntennaElement]] = None,
    rx: Optional[Sequence[AntennaElement]] = None,
) -> CascadeChannel:
    """Cascade impulse response from two sub-channels through the panel.

    ``sub1`` must end at the panel (its arrivals are the panel incidence) and
    ``sub2`` start there (its departures are the panel exits).
    """
    rays1 = sub1.all_rays()
    rays2 = sub2.all_rays()
    if not rays1 or not rays2:
        raise ValueError("both sub-channels must contain at least one ray")
    tx = list(tx) if tx is not None else [isotropic_v_element()]
    rx = list(rx) if rx is not None else [isotropic_v_element()]

    zen_in, az_in, front_in = _local_in_plane(panel.pose, [r.arrival for r in rays1])
    zen_out, az_out, front_out = _local_in_plane(panel.pose, [r.departure for r in rays2])

    n1, n2 = len(rays1), len(rays2)
    f = {pol: np.zeros((n1, n2), dtype=complex) for pol in ("vv", "vh", "hv", "hh")}
    if np.any(front_in) and np.any(front_out):
        idx1 = np.flatnonzero(front_in)
        idx2 = np.flatnonzero(front_out)
        grids = panel_pattern_grid(
            panel, mask, zen_in[idx1], az_in[idx1], zen_out[idx2], az_out[idx2], model
        )
        for pol in f:
            f[pol][np.ix_(idx1, idx2)] = getattr(grids, f"f_{pol}")

    # chi * antenna products: right 2-vector per first-hop ray, left per second.
    x1 = np.array([xpr_matrix(r).as_array() for r in rays1])
    x2 = np.array([xpr_matrix(r).as_array() for r in rays2])
    amp_scale = np.sqrt(
        np.outer([r.power for r in rays1], [r.power for r in rays2])
    ).astype(complex)
    delays = np.add.outer([r.delay for r in rays1], [r.delay for r in rays2])

    k = 2.0 * math.pi / panel.geom.wavelength
    dir_tx = np.array([direction_from_angles(r.departure).as_array() for r in rays1])
    dir_rx = np.array([direction_from_angles(r.arrival).as_array() for r in rays2])

    taps: dict[tuple[int, int], tuple[CirTap, ...]] = {}
    for p, rx_el in enumerate(rx):
        g_rx = np.array([rx_el.pattern(r.arrival) for r in rays2], dtype=complex)
        left = np.einsum("ja,jab->jb", g_rx, x2, optimize=False)
        w = np.exp(1j * k * (dir_rx @ rx_el.position.as_array()))
        for q, tx_el in enumerate(tx):
            g_tx = np.array([tx_el.pattern(r.departure) for r in rays1], dtype=complex)
            right = np.einsum("iab,ib->ia", x1, g_tx, optimize=False)
            u = np.exp(1j * k * (dir_tx @ tx_el.position.as_array()))
            # Out-pol a receives f_{b->a} from in-pol b: the v output collects
            # f_vv and f_hv, the h output f_vh and f_hh.
            sandwich = (
                left[None, :, 0] * (f["vv"] * right[:, None, 0] + f["hv"] * right[:, None, 1])
                + left[None, :, 1] * (f["vh"] * right[:, None, 0] + f["hh"] * right[:, None, 1])
            )
            amp = amp_scale * sandwich * u[:, None] * w[None, :]
            taps[(p, q)] = tuple(
                CirTap(float(delays[i, j]), complex(amp[i, j]))
                for i in range(n1)
                for j in range(n2)
            )

    return CascadeChannel(
        taps=taps,
        path_loss_db=cascade_path_loss(sub1.path_loss_db, sub2.path_loss_db),
        meta={
            "model": model.value,
            "panel_shape": (panel.count_x, panel.count_y),
            "n_rays": (n1, n2),
        },
    )


def transfer_function(ch: CascadeChannel, freq_hz: float, p: int = 0, q: int = 0) -> complex:
    """Narrowband response sum(amp * exp(-1j*2*pi*f*delay)) for one pair."""
    if (p, q) not in ch.taps:
        raise KeyError(f"no taps for antenna pair ({p}, {q})")
    total = 0.0 + 0.0j
    for tap in ch.taps[(p, q)]:
        total += tap.amp * cmath.exp(-1j * 2.0 * math.pi * freq_hz * tap.delay)
    return total
