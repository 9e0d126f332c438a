"""Stochastic sub-channel generation for the Tx-panel and panel-Rx links.

Multipath is drawn cluster-by-cluster: cluster delays follow an exponential
profile scaled by the delay spread, cluster powers decay with delay and carry
a 3 dB lognormal per-cluster shadow term, and each cluster splits its power
equally over its rays. Ray angles combine stochastic cluster centers (wrapped
Gaussian azimuths, Laplacian zeniths) with a deterministic equal-power offset
table scaled so the configured spreads are reproduced; half of the angular
variance sits in the cluster centers and half in the ray offsets. Cross-
polarization ratios are lognormal per ray and the four polarization phases
are uniform on [0, 2*pi).

Reproducibility contract: all draws come from one numpy Generator in the
fixed order
    1. cluster delay uniforms,
    2. per-cluster power shadowing normals,
    3. arrival azimuth normals, arrival zenith Laplacians,
       departure azimuth normals, departure zenith Laplacians,
    4. per-ray XPR normals,
    5. per-ray polarization phase uniforms,
so a (config, positions, seed) triple pins every output bit.

Path loss implements the UMi street-canyon LOS/NLOS curves:

    LOS  d <= d_bp: 32.4 + 21*log10(d3d) + 20*log10(f_GHz)
         d >  d_bp: 32.4 + 40*log10(d3d) + 20*log10(f_GHz)
                    - 9.5*log10(d_bp**2 + (h_bs - h_ut)**2)
    NLOS: max(LOS, 22.4 + 35.3*log10(d3d) + 21.3*log10(f_GHz)
                    - 0.3*(h_ut - 1.5))

with the breakpoint d_bp = 4*(h_bs - 1)*(h_ut - 1)*f/c evaluated against the
3-D distance (only that distance is exposed here). Values are medians; the
shadow-fading parameter is carried in LargeScaleParams but never applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.stats import norm as _norm_dist

from .geometry import Position3, SphericalAngle, angles_from_direction, normalize

TWO_PI = 2.0 * math.pi

# Fraction of the angular variance carried by the per-ray offsets; the rest
# sits in the stochastic cluster centers. 0.1 mirrors the urban-street
# proportion of intra-cluster to total azimuth spread.
RAY_VARIANCE_SHARE = 0.1

# Delay-profile scaling and per-cluster shadowing (dB) per link state.
DELAY_SCALING = {"los": 3.0, "nlos": 2.1}
CLUSTER_SHADOW_STD_DB = 3.0

# Fixed 20-ray equal-power offset table (unit rms), +/- interleaved.
_OFFSETS_20_BASE = (
    0.0447, 0.1413, 0.2492, 0.3715, 0.5129,
    0.6797, 0.8844, 1.1481, 1.5195, 2.1551,
)
RAY_OFFSETS_20 = np.array(
    [s * v for v in _OFFSETS_20_BASE for s in (1.0, -1.0)]
)


@dataclass(frozen=True)
class LargeScaleParams:
    """Statistical descriptors of one sub-channel."""

    ds: float = 100e-9          # delay spread, seconds
    asa_deg: float = 20.0       # azimuth spread of arrival
    asd_deg: float = 20.0       # azimuth spread of departure
    zsa_deg: float = 5.0        # zenith spread of arrival
    zsd_deg: float = 5.0        # zenith spread of departure
    sf_db: float = 0.0          # shadow fading (carried, not applied)
    k_db: float = 9.0           # Rician factor for LOS links
    xpr_mean_db: float = 8.0
    xpr_std_db: float = 3.0

    def __post_init__(self) -> None:
        if self.ds <= 0.0:
            raise ValueError("delay spread must be positive")
        for name in ("asa_deg", "asd_deg", "zsa_deg", "zsd_deg"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.xpr_std_db < 0.0:
            raise ValueError("xpr_std_db must be >= 0")
        for name in ("sf_db", "k_db", "xpr_mean_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class ScenarioConfig:
    """Scenario, link state, cluster structure, and large-scale parameters."""

    carrier_hz: float
    link_state: str = "los"
    scenario: str = "umi"
    n_clusters: int = 5
    rays_per_cluster: int = 20
    lsp: LargeScaleParams = field(default_factory=LargeScaleParams)
    h_bs: float = 10.0
    h_ut: float = 1.5
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.carrier_hz <= 0.0:
            raise ValueError("carrier must be positive")
        if self.link_state not in ("los", "nlos"):
            raise ValueError(f"link_state must be 'los' or 'nlos', got {self.link_state!r}")
        if self.scenario != "umi":
            raise ValueError(f"unsupported scenario {self.scenario!r} (only 'umi')")
        if self.n_clusters < 1 or self.rays_per_cluster < 1:
            raise ValueError("cluster and ray counts must be >= 1")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz


@dataclass(frozen=True)
class Ray:
    """One multipath component of a sub-channel."""

    departure: SphericalAngle
    arrival: SphericalAngle
    power: float
    delay: float
    xpr: float
    phases: tuple[float, float, float, float]  # (vv, vh, hv, hh)
    cluster: int = 1

    def __post_init__(self) -> None:
        if self.power < 0.0:
            raise ValueError("ray power must be >= 0")
        if self.delay < 0.0:
            raise ValueError("ray delay must be >= 0")
        if not self.xpr > 0.0:
            raise ValueError("xpr must be positive")


@dataclass(frozen=True)
class SubChannel:
    """Rays of one link, plus link state, path loss, and the LOS component."""

    rays: tuple[Ray, ...]
    link_state: str
    path_loss_db: float
    los_ray: Optional[Ray] = None

    def all_rays(self) -> tuple[Ray, ...]:
        """LOS ray first (when present), then the stochastic rays."""
        if self.los_ray is not None:
            return (self.los_ray,) + self.rays
        return self.rays

    def total_power(self) -> float:
        return sum(r.power for r in self.all_rays())


def path_loss(cfg: ScenarioConfig, distance3d: float) -> float:
    """Median UMi street-canyon path loss in dB at a 3-D distance (>= 1 m)."""
    if distance3d < 1.0:
        raise ValueError("distance3d must be >= 1 m")
    f_ghz = cfg.carrier_hz / 1e9
    d_bp = 4.0 * (cfg.h_bs - 1.0) * (cfg.h_ut - 1.0) * cfg.carrier_hz / SPEED_OF_LIGHT
    if d_bp > 0.0 and distance3d > d_bp:
        pl_los = (
            32.4
            + 40.0 * math.log10(distance3d)
            + 20.0 * math.log10(f_ghz)
            - 9.5 * math.log10(d_bp**2 + (cfg.h_bs - cfg.h_ut) ** 2)
        )
    else:
        pl_los = 32.4 + 21.0 * math.log10(distance3d) + 20.0 * math.log10(f_ghz)
    if cfg.link_state == "los":
        return pl_los
    pl_nlos = (
        22.4
        + 35.3 * math.log10(distance3d)
        + 21.3 * math.log10(f_ghz)
        - 0.3 * (cfg.h_ut - 1.5)
    )
    return max(pl_los, pl_nlos)


def cascade_path_loss(pl1_db: float, pl2_db: float) -> float:
    """Compound loss of the two-hop link: exact dB sum (linear product)."""
    if not (math.isfinite(pl1_db) and math.isfinite(pl2_db)):
        raise ValueError("path losses must be finite")
    return pl1_db + pl2_db


def _ray_offsets(m: int, kind: str) -> np.ndarray:
    """Unit-rms equal-power offset table for m rays.

    The fixed 20-ray table when m == 20; otherwise equal-probability quantiles
    of the target distribution (Gaussian for azimuth, Laplacian for zenith),
    normalized to unit rms.
    """
    if m == 20:
        return RAY_OFFSETS_20
    if m == 1:
        return np.zeros(1)
    p = (np.arange(1, m + 1) - 0.5) / m
    if kind == "azimuth":
        q = _norm_dist.ppf(p)
    else:
        centered = p - 0.5
        q = -np.sign(centered) * np.log(1.0 - 2.0 * np.abs(centered)) / math.sqrt(2.0)
    rms = math.sqrt(float(np.mean(q**2)))
    return q / rms


def sample_angles(
    mean: SphericalAngle,
    azimuth_spread_deg: float,
    zenith_spread_deg: float,
    n_clusters: int,
    rays_per_cluster: int,
    rng: np.random.Generator,
) -> list[SphericalAngle]:
    """Ray angles around a mean direction, grouped by cluster.

    Azimuths are wrapped-Gaussian with circular std equal to the configured
    spread; zeniths are Laplacian with matching std, clipped to [0, pi].
    Draw order: azimuth cluster centers, then zenith cluster centers.
    """
    if azimuth_spread_deg <= 0.0 or zenith_spread_deg <= 0.0:
        raise ValueError("angle spreads must be positive")
    sigma_az = math.radians(azimuth_spread_deg)
    sigma_zen = math.radians(zenith_spread_deg)
    ray_share = math.sqrt(RAY_VARIANCE_SHARE)
    cluster_share = math.sqrt(1.0 - RAY_VARIANCE_SHARE)

    az_centers = rng.normal(0.0, cluster_share * sigma_az, n_clusters)
    # Laplace scale b yields std b*sqrt(2).
    zen_centers = rng.laplace(
        0.0, cluster_share * sigma_zen / math.sqrt(2.0), n_clusters
    )

    az_off = ray_share * sigma_az * _ray_offsets(rays_per_cluster, "azimuth")
    zen_off = ray_share * sigma_zen * _ray_offsets(rays_per_cluster, "zenith")

    out: list[SphericalAngle] = []
    for n in range(n_clusters):
        az = (mean.azimuth + az_centers[n] + az_off) % TWO_PI
        zen = np.clip(mean.zenith + zen_centers[n] + zen_off, 0.0, math.pi)
        out.extend(SphericalAngle(float(z), float(a)) for z, a in zip(zen, az))
    return out


def sample_powers_delays(
    n: int,
    m: int,
    ds: float,
    rng: np.random.Generator,
    delay_scaling: float = 3.0,
    shadow_std_db: float = CLUSTER_SHADOW_STD_DB,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-ray (powers, delays), cluster-grouped in blocks of m.

    Cluster delays are exponential with scale delay_scaling * ds, sorted and
    shifted so the first arrival sits at zero; cluster powers decay as
    exp(-delay*(r-1)/(r*ds)) with lognormal shadowing, are normalized to sum
    to one, and split equally over the m rays of each cluster.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if ds <= 0.0:
        raise ValueError("delay spread must be positive")
    u = rng.random(n)
    delays = -delay_scaling * ds * np.log(u)
    delays = np.sort(delays) - np.min(delays)
    shadow = rng.normal(0.0, shadow_std_db, n)
    powers = np.exp(-delays * (delay_scaling - 1.0) / (delay_scaling * ds))
    powers = powers * 10.0 ** (-shadow / 10.0)
    powers = powers / np.sum(powers)
    ray_powers = np.repeat(powers / m, m)
    ray_delays = np.repeat(delays, m)
    return ray_powers, ray_delays


def sample_xpr(
    mean_db: float, std_db: float, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Lognormal cross-polarization ratios (linear, > 0)."""
    if std_db < 0.0:
        raise ValueError("std_db must be >= 0")
    return 10.0 ** (rng.normal(mean_db, std_db, count) / 10.0)


def los_geometry(start: Position3, end: Position3):
    """(distance, departure angles at start, arrival angles at end).

    Arrival angles point from the end back toward the start, matching the
    convention that a ray's direction vector points toward its source.
    """
    diff = end.as_array() - start.as_array()
    dist = float(np.linalg.norm(diff))
    if dist < 1e-9:
        raise ValueError("start and end positions must be distinct")
    departure = angles_from_direction(normalize(diff))
    arrival = angles_from_direction(normalize(-diff))
    return dist, departure, arrival


def _los_ray(cfg: ScenarioConfig, dist: float, departure, arrival, power: float) -> Ray:
    # Single geometric phase on both co-polar entries; the h branch carries
    # the extra pi of the mirror convention. Cross terms vanish (xpr -> inf).
    phase = (-TWO_PI * dist / cfg.wavelength) % TWO_PI
    return Ray(
        departure=departure,
        arrival=arrival,
        power=power,
        delay=0.0,
        xpr=math.inf,
        phases=(phase, 0.0, 0.0, (phase + math.pi) % TWO_PI),
        cluster=0,
    )


def deterministic_los_subchannel(
    cfg: ScenarioConfig, start: Position3, end: Position3
) -> SubChannel:
    """Pure line-of-sight link: one deterministic unit-power ray, no RNG."""
    if cfg.link_state != "los":
        raise ValueError("deterministic LOS sub-channel requires link_state 'los'")
    dist, departure, arrival = los_geometry(start, end)
    return SubChannel(
        rays=(),
        link_state="los",
        path_loss_db=path_loss(cfg, dist),
        los_ray=_los_ray(cfg, dist, departure, arrival, 1.0),
    )


def generate_subchannel(
    cfg: ScenarioConfig,
    start: Position3,
    end: Position3,
    rng: Optional[np.random.Generator] = None,
) -> SubChannel:
    """Draw one sub-channel realization between two positions.

    LOS links add a deterministic ray with power K/(K+1) at the geometric
    angles and scale the stochastic rays by 1/(K+1). Powers over all rays sum
    to one in every realization.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    dist, departure, arrival = los_geometry(start, end)
    n, m = cfg.n_clusters, cfg.rays_per_cluster
    lsp = cfg.lsp

    powers, delays = sample_powers_delays(
        n, m, lsp.ds, rng, delay_scaling=DELAY_SCALING[cfg.link_state]
    )
    arrivals = sample_angles(arrival, lsp.asa_deg, lsp.zsa_deg, n, m, rng)
    departures = sample_angles(departure, lsp.asd_deg, lsp.zsd_deg, n, m, rng)
    xprs = sample_xpr(lsp.xpr_mean_db, lsp.xpr_std_db, n * m, rng)
    phases = rng.uniform(0.0, TWO_PI, (n * m, 4))

    los_ray = None
    scale = 1.0
    if cfg.link_state == "los":
        k_lin = 10.0 ** (lsp.k_db / 10.0)
        scale = 1.0 / (k_lin + 1.0)
        los_ray = _los_ray(cfg, dist, departure, arrival, k_lin / (k_lin + 1.0))

    rays = tuple(
        Ray(
            departure=departures[i],
            arrival=arrivals[i],
            power=float(powers[i] * scale),
            delay=float(delays[i]),
            xpr=float(xprs[i]),
            phases=tuple(float(p) for p in phases[i]),
            cluster=1 + i // m,
        )
        for i in range(n * m)
    )
    return SubChannel(
        rays=rays,
        link_state=cfg.link_state,
        path_loss_db=path_loss(cfg, dist),
        los_ray=los_ray,
    )
