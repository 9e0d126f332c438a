"""The three numerical studies and the SNR link budget.

All three studies share the link budget

    SNR_dB = P_tx(dBm) + 20*log10|H| - PL_cascade(dB) - N0(dBm),

where H is the narrowband transfer function at the carrier. Absolute element
gains carry the raw sqrt(mu0*eps0) normalization, so SNR values are only
meaningful relative to each other (model vs model, strategy vs strategy,
size vs size); every assertion here is about orderings and gaps.

Defaults mirror the reference setup: a 32x32 panel of 0.0156 m square
elements on a 0.0247 m pitch at 6 GHz, 43 dBm transmit power, -117 dBm noise.
For the size sweep the element dimensions scale with wavelength (length
0.312*lambda, pitch 0.494*lambda, the same ratios as the 6 GHz setup) and
the panel sits at (-15, 15, 6) facing +x, between a transmitter at (0, 0, 10)
and a receiver at (-10, 30, 2), both on its front side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .cascade import compose_cir, transfer_function
from .element import ElementGeometry, PhaseModel
from .gbsm import (
    LargeScaleParams,
    ScenarioConfig,
    deterministic_los_subchannel,
    generate_subchannel,
    los_geometry,
)
from .geometry import (
    Direction3,
    Pose,
    Position3,
    SphericalAngle,
    direction_from_angles,
    normalize,
    to_local,
)
from .panel import (
    PanelConfig,
    PhaseMask,
    panel_pattern_grid,
    strategy_1bit,
    strategy_optimal,
    strategy_specular,
)

ELEMENT_LENGTH_FRACTION = 0.312  # a/lambda of the 6 GHz reference element
ELEMENT_PITCH_FRACTION = 0.494   # d/lambda of the reference pitch

DEFAULT_TX = Position3(0.0, 0.0, 10.0)
DEFAULT_RX = Position3(-10.0, 30.0, 2.0)
DEFAULT_RIS = Position3(-15.0, 15.0, 6.0)
# Wall-mounted panel turned 25 degrees off +x: keeps both ends on the front
# side and puts the transmitter at ~70 degrees local zenith, where the
# non-ideal phase distortion is pronounced.
DEFAULT_POSE = Pose(
    DEFAULT_RIS, bearing=math.radians(25.0), downtilt=math.pi / 2.0, slant=0.0
)

STRATEGIES = ("optimal", "1bit", "specular")


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power, noise floor, and compound path loss, all dB-domain."""

    tx_power_dbm: float = 43.0
    noise_dbm: float = -117.0
    cascade_pl_db: float = 0.0

    def __post_init__(self) -> None:
        for name in ("tx_power_dbm", "noise_dbm", "cascade_pl_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass
class SweepResult:
    """Tabular sweep output: column names, row tuples, and reproducibility meta."""

    columns: tuple[str, ...]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def snr(budget: LinkBudget, h: complex) -> float:
    """Received SNR in dB; -inf when the channel is exactly zero."""
    mag = abs(h)
    if mag == 0.0:
        return float("-inf")
    return budget.tx_power_dbm + 20.0 * math.log10(mag) - budget.cascade_pl_db - budget.noise_dbm


def make_mask(cfg: PanelConfig, strategy: str, dir_in: Direction3, dir_out: Direction3) -> PhaseMask:
    """Mask for one of the named operating strategies (local-frame directions)."""
    if strategy == "optimal":
        return strategy_optimal(cfg, dir_in, dir_out)
    if strategy == "1bit":
        return strategy_1bit(strategy_optimal(cfg, dir_in, dir_out))
    if strategy == "specular":
        return strategy_specular(cfg)
    raise ValueError(f"unknown strategy {strategy!r}")


def signed_cut_angles(step_deg: float, max_deg: float = 89.0):
    """Signed zenith grid for a cut through both half-planes of an azimuth."""
    n = int(round(max_deg / step_deg))
    return np.arange(-n, n + 1) * step_deg


def _cut_gains(
    cfg: PanelConfig,
    mask: PhaseMask,
    incidence: SphericalAngle,
    signed_deg: np.ndarray,
    azimuth: float,
    model: PhaseModel,
) -> dict[str, np.ndarray]:
    """Raw |F| per polarization over a signed-zenith cut at a fixed azimuth.

    Positive angles sweep the given azimuth half-plane, negative ones the
    opposite half-plane.
    """
    zen = np.radians(np.abs(signed_deg))
    az = np.where(signed_deg >= 0.0, azimuth, azimuth + math.pi)
    grids = panel_pattern_grid(cfg, mask, incidence.zenith, incidence.azimuth, zen, az, model)
    return {pol: np.abs(getattr(grids, f"f_{pol}"))[0] for pol in ("vv", "vh", "hv", "hh")}


def run_pattern_experiment(
    panel: PanelConfig,
    theta_in_deg: float = 60.0,
    phi_in_deg: float = 0.0,
    target_theta_deg: float = 45.0,
    step_deg: float = 1.0,
) -> SweepResult:
    """Panel gain cuts under non-ideal vs ideal phase modulation.

    A single ray hits the panel at the given incidence; the mask steers
    continuously to the target zenith in the specular half-plane
    (azimuth_in + 180 degrees). The cut sweeps the signed zenith in that
    plane. Gains are normalized to one global maximum across models and
    polarizations so model/polarization gaps survive in the output.
    """
    incidence = SphericalAngle(math.radians(theta_in_deg), math.radians(phi_in_deg))
    target_az = incidence.azimuth + math.pi
    target = SphericalAngle(math.radians(target_theta_deg), target_az)
    mask = strategy_optimal(
        panel, direction_from_angles(incidence), direction_from_angles(target)
    )
    signed = signed_cut_angles(step_deg)

    cuts = {
        model: _cut_gains(panel, mask, incidence, signed, target_az, model)
        for model in (PhaseModel.NON_IDEAL, PhaseModel.IDEAL)
    }
    ref = max(float(np.max(m)) for gains in cuts.values() for m in gains.values())
    if ref == 0.0:
        ref = 1.0

    rows: list[tuple] = []
    for model, gains in cuts.items():
        for pol, mags in gains.items():
            with np.errstate(divide="ignore"):
                db = np.maximum(20.0 * np.log10(mags / ref), -300.0)
            rows.extend(
                ("optimal", model.value, pol[0], pol[1], float(theta), float(g))
                for theta, g in zip(signed, db)
            )
    return SweepResult(
        columns=("strategy", "model", "pol_in", "pol_out", "theta_out_deg", "gain_db"),
        rows=rows,
        meta={
            "theta_in_deg": theta_in_deg,
            "phi_in_deg": phi_in_deg,
            "target_theta_deg": target_theta_deg,
        },
    )


def wavelength_scaled_panel(freq_hz: float, side: int, pose: Pose) -> PanelConfig:
    """Square panel whose element size and pitch track the wavelength."""
    lam = SPEED_OF_LIGHT / freq_hz
    geom = ElementGeometry(
        ELEMENT_LENGTH_FRACTION * lam, ELEMENT_LENGTH_FRACTION * lam, lam
    )
    return PanelConfig(side, side, ELEMENT_PITCH_FRACTION * lam, geom, pose)


def _los_dirs_local(pose: Pose, tx: Position3, rx: Position3):
    """Local-frame unit vectors from the panel toward the Tx and the Rx."""
    origin = pose.origin.as_array()
    d_in = to_local(pose, normalize(tx.as_array() - origin))
    d_out = to_local(pose, normalize(rx.as_array() - origin))
    if d_in.z <= 0.0 or d_out.z <= 0.0:
        raise ValueError("both link ends must lie on the panel's front side")
    return d_in, d_out


def run_config_sweep(
    tx: Position3 = DEFAULT_TX,
    rx: Position3 = DEFAULT_RX,
    pose: Pose = DEFAULT_POSE,
    freqs_ghz: Sequence[float] = (3.0, 6.0),
    sides: Sequence[int] = (1, 2, 4, 8, 16, 32, 64),
    strategies: Sequence[str] = STRATEGIES,
    model: PhaseModel = PhaseModel.NON_IDEAL,
    budget: LinkBudget = LinkBudget(),
) -> SweepResult:
    """Received SNR vs panel size, per frequency and operating strategy.

    Both hops are deterministic line-of-sight rays; the steering strategies
    target the two LOS directions. Fully deterministic.
    """
    rows: list[tuple] = []
    for f_ghz in freqs_ghz:
        freq = f_ghz * 1e9
        d_tx = float(np.linalg.norm(tx.as_array() - pose.origin.as_array()))
        d_rx = float(np.linalg.norm(rx.as_array() - pose.origin.as_array()))
        cfg1 = ScenarioConfig(carrier_hz=freq, link_state="los", h_bs=tx.z, h_ut=pose.origin.z)
        cfg2 = ScenarioConfig(carrier_hz=freq, link_state="los", h_bs=pose.origin.z, h_ut=rx.z)
        sub1 = deterministic_los_subchannel(cfg1, tx, pose.origin)
        sub2 = deterministic_los_subchannel(cfg2, pose.origin, rx)
        for side in sides:
            panel = wavelength_scaled_panel(freq, int(side), pose)
            d_in, d_out = _los_dirs_local(pose, tx, rx)
            for strategy in strategies:
                mask = make_mask(panel, strategy, d_in, d_out)
                channel = compose_cir(sub1, sub2, panel, mask, model)
                h = transfer_function(channel, freq)
                b = replace(budget, cascade_pl_db=channel.path_loss_db)
                rows.append((float(f_ghz), int(side), strategy, snr(b, h)))
    return SweepResult(
        columns=("freq_ghz", "n_side", "strategy", "snr_db"),
        rows=rows,
        meta={"model": model.value, "tx": (tx.x, tx.y, tx.z), "rx": (rx.x, rx.y, rx.z)},
    )


# Scene for the angle-spread study: a horizontal (upward-facing) panel, so a
# global azimuth spread moves arrivals along the local azimuth ring without
# perturbing the incidence zenith; the transmitter sits at ~60 degrees local
# zenith and the receiver off the incidence plane.
ASA_RIS = Position3(0.0, 0.0, 2.0)
ASA_POSE = Pose(ASA_RIS)
ASA_TX = Position3(17.3, 0.0, 12.0)
ASA_RX = Position3(-7.5, 7.5, 12.6)


def run_asa_sweep(
    tx: Position3 = ASA_TX,
    rx: Position3 = ASA_RX,
    pose: Pose = ASA_POSE,
    panel: PanelConfig | None = None,
    asa_deg: Sequence[float] = (1.0, 5.0, 10.0),
    n_seeds: int = 100,
    master_seed: int = 0,
    carrier_hz: float = 6e9,
    lsp: LargeScaleParams = LargeScaleParams(),
    budget: LinkBudget = LinkBudget(),
) -> SweepResult:
    """Mean SNR vs incidence-side azimuth spread, per phase model.

    The Tx-panel hop is stochastic (no LOS ray) with the swept arrival
    spread; the panel-Rx hop is a single deterministic LOS ray, isolating the
    incidence-side spread. The mask steers continuously between the two
    geometric LOS directions. Each seed index derives its own generator from
    (master_seed, seed_index) and is reused across spreads and models, so
    points are paired and concurrency-safe.
    """
    if panel is None:
        lam = SPEED_OF_LIGHT / carrier_hz
        panel = PanelConfig(
            32, 32, 0.0247, ElementGeometry(0.0156, 0.0156, lam), pose
        )
    d_in, d_out = _los_dirs_local(pose, tx, rx)
    mask = strategy_optimal(panel, d_in, d_out)

    cfg2 = ScenarioConfig(carrier_hz=carrier_hz, link_state="los", h_bs=pose.origin.z, h_ut=rx.z)
    sub2 = deterministic_los_subchannel(cfg2, pose.origin, rx)

    rows: list[tuple] = []
    for spread in asa_deg:
        cfg1 = ScenarioConfig(
            carrier_hz=carrier_hz,
            link_state="nlos",
            lsp=replace(lsp, asa_deg=float(spread)),
            h_bs=tx.z,
            h_ut=pose.origin.z,
        )
        for seed_idx in range(n_seeds):
            rng = np.random.default_rng(np.random.SeedSequence((master_seed, seed_idx)))
            sub1 = generate_subchannel(cfg1, tx, pose.origin, rng)
            for model in (PhaseModel.NON_IDEAL, PhaseModel.IDEAL):
                channel = compose_cir(sub1, sub2, panel, mask, model)
                h = transfer_function(channel, carrier_hz)
                b = replace(budget, cascade_pl_db=channel.path_loss_db)
                rows.append((float(spread), model.value, int(seed_idx), snr(b, h)))
    return SweepResult(
        columns=("asa_deg", "model", "seed", "snr_db"),
        rows=rows,
        meta={"master_seed": master_seed, "n_seeds": n_seeds},
    )


def mean_snr(result: SweepResult, **filters) -> float:
    """Mean snr_db over rows matching the given column=value filters."""
    idx = {name: result.columns.index(name) for name in filters}
    snr_idx = result.columns.index("snr_db")
    vals = [
        row[snr_idx]
        for row in result.rows
        if all(row[idx[name]] == value for name, value in filters.items())
    ]
    if not vals:
        raise ValueError(f"no rows match {filters}")
    return float(np.mean(vals))
