"""Command-line front end: config parsing, experiment dispatch, CSV output.

Config files are flat ``section.key = value`` lines with ``#`` comments.
Values are integers, floats (scientific notation allowed), bare words, or
comma-separated lists of those. Unknown keys and invariant violations are
rejected with the offending line number. An empty file yields the reference
defaults (32x32 panel of 0.0156 m elements on a 0.0247 m pitch, 6 GHz,
43 dBm transmit power, -117 dBm noise).

Outputs are written atomically (temp file + rename) into the run directory:
one CSV per experiment plus ``manifest.txt`` echoing the resolved
configuration, subcommand, and seed. A ``.lock`` file serializes runs per
output directory.

CSV schemas (headers are the stable contract):

    pattern       pattern_cut.csv   strategy,model,pol_in,pol_out,theta_out_deg,gain_db
    snr-sweep     snr_sweep.csv     freq_ghz,n_side,strategy,snr_db
    asa-sweep     asa_sweep.csv     asa_deg,model,seed,snr_db
    dump-channel  channel_taps.csv  p,q,tap_index,delay_s,amp_re,amp_im
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .cascade import compose_cir
from .element import ElementGeometry, PhaseModel
from .experiments import (
    LinkBudget,
    SweepResult,
    make_mask,
    run_asa_sweep,
    run_config_sweep,
    run_pattern_experiment,
    _los_dirs_local,
)
from .gbsm import LargeScaleParams, ScenarioConfig, generate_subchannel
from .geometry import Pose, Position3
from .panel import PanelConfig

EXPERIMENTS = ("pattern", "snr-sweep", "asa-sweep", "dump-channel")

CSV_NAMES = {
    "pattern": "pattern_cut.csv",
    "snr-sweep": "snr_sweep.csv",
    "asa-sweep": "asa_sweep.csv",
    "dump-channel": "channel_taps.csv",
}


class ConfigError(Exception):
    """Raised for malformed or invalid configuration input."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration (one attribute per config key)."""

    ris_size_x: int = 32
    ris_size_y: int = 32
    ris_element_a: float = 0.0156
    ris_element_b: float = 0.0156
    ris_spacing: float = 0.0247
    ris_pos: tuple[float, ...] = (-15.0, 15.0, 6.0)
    ris_bearing_deg: float = 25.0
    ris_downtilt_deg: float = 90.0
    ris_slant_deg: float = 0.0
    carrier_freq_hz: float = 6e9
    budget_tx_power_dbm: float = 43.0
    budget_noise_dbm: float = -117.0
    sites_tx: tuple[float, ...] = (0.0, 0.0, 10.0)
    sites_rx: tuple[float, ...] = (-10.0, 30.0, 2.0)
    scenario_tag: str = "umi"
    scenario_link1: str = "los"
    scenario_link2: str = "los"
    scenario_clusters: int = 5
    scenario_rays_per_cluster: int = 20
    scenario_delay_spread_s: float = 100e-9
    scenario_asa_deg: float = 20.0
    scenario_asd_deg: float = 20.0
    scenario_zsa_deg: float = 5.0
    scenario_zsd_deg: float = 5.0
    scenario_sf_db: float = 0.0
    scenario_k_db: float = 9.0
    scenario_xpr_mean_db: float = 8.0
    scenario_xpr_std_db: float = 3.0
    pattern_theta_in_deg: float = 60.0
    pattern_phi_in_deg: float = 0.0
    pattern_target_theta_deg: float = 45.0
    pattern_step_deg: float = 1.0
    snr_sweep_freqs_ghz: tuple[float, ...] = (3.0, 6.0)
    snr_sweep_sides: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64)
    snr_sweep_strategies: tuple[str, ...] = ("optimal", "1bit", "specular")
    snr_sweep_model: str = "nonideal"
    asa_sweep_asa_deg: tuple[float, ...] = (1.0, 5.0, 10.0)
    asa_sweep_seeds: int = 100
    asa_sweep_tx: tuple[float, ...] = (17.3, 0.0, 12.0)
    asa_sweep_rx: tuple[float, ...] = (-7.5, 7.5, 12.6)
    asa_sweep_ris_pos: tuple[float, ...] = (0.0, 0.0, 2.0)
    asa_sweep_bearing_deg: float = 0.0
    asa_sweep_downtilt_deg: float = 0.0
    asa_sweep_slant_deg: float = 0.0
    channel_strategy: str = "optimal"
    channel_model: str = "nonideal"
    run_experiment: str = "pattern"
    run_seed: int = 0
    run_out_dir: str = "out"


def _parse_int(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {text!r}")
    return value


def _parse_word(text: str) -> str:
    if not text or any(ch.isspace() for ch in text):
        raise ConfigError(f"expected a bare word, got {text!r}")
    return text


def _list_of(parser: Callable):
    def parse(text: str):
        items = [t.strip() for t in text.split(",")]
        if any(not t for t in items):
            raise ConfigError(f"malformed list {text!r}")
        return tuple(parser(t) for t in items)

    return parse


def _positive(value, key: str):
    if not value > 0:
        raise ConfigError(f"{key} must be positive, got {value}")


def _non_negative(value, key: str):
    if value < 0:
        raise ConfigError(f"{key} must be >= 0, got {value}")


def _one_of(options: Sequence[str]):
    def check(value, key: str):
        if value not in options:
            raise ConfigError(f"{key} must be one of {', '.join(options)}; got {value!r}")

    return check


def _triple(value, key: str):
    if len(value) != 3:
        raise ConfigError(f"{key} must have exactly 3 components")


def _all_positive(value, key: str):
    if any(not v > 0 for v in value):
        raise ConfigError(f"every entry of {key} must be positive")


def _non_empty(value, key: str):
    if len(value) == 0:
        raise ConfigError(f"{key} must not be empty")


def _no_check(value, key: str):
    return None


_STRATEGY_NAMES = ("optimal", "1bit", "specular")
_MODEL_NAMES = ("nonideal", "ideal")

# key -> (attribute, parser, validator); registry order fixes serialization.
KEY_REGISTRY: dict[str, tuple[str, Callable, Callable]] = {
    "ris.size_x": ("ris_size_x", _parse_int, _positive),
    "ris.size_y": ("ris_size_y", _parse_int, _positive),
    "ris.element_a": ("ris_element_a", _parse_float, _positive),
    "ris.element_b": ("ris_element_b", _parse_float, _positive),
    "ris.spacing": ("ris_spacing", _parse_float, _positive),
    "ris.pos": ("ris_pos", _list_of(_parse_float), _triple),
    "ris.bearing_deg": ("ris_bearing_deg", _parse_float, _no_check),
    "ris.downtilt_deg": ("ris_downtilt_deg", _parse_float, _no_check),
    "ris.slant_deg": ("ris_slant_deg", _parse_float, _no_check),
    "carrier.freq_hz": ("carrier_freq_hz", _parse_float, _positive),
    "budget.tx_power_dbm": ("budget_tx_power_dbm", _parse_float, _no_check),
    "budget.noise_dbm": ("budget_noise_dbm", _parse_float, _no_check),
    "sites.tx": ("sites_tx", _list_of(_parse_float), _triple),
    "sites.rx": ("sites_rx", _list_of(_parse_float), _triple),
    "scenario.tag": ("scenario_tag", _parse_word, _one_of(("umi",))),
    "scenario.link1": ("scenario_link1", _parse_word, _one_of(("los", "nlos"))),
    "scenario.link2": ("scenario_link2", _parse_word, _one_of(("los", "nlos"))),
    "scenario.clusters": ("scenario_clusters", _parse_int, _positive),
    "scenario.rays_per_cluster": ("scenario_rays_per_cluster", _parse_int, _positive),
    "scenario.delay_spread_s": ("scenario_delay_spread_s", _parse_float, _positive),
    "scenario.asa_deg": ("scenario_asa_deg", _parse_float, _positive),
    "scenario.asd_deg": ("scenario_asd_deg", _parse_float, _positive),
    "scenario.zsa_deg": ("scenario_zsa_deg", _parse_float, _positive),
    "scenario.zsd_deg": ("scenario_zsd_deg", _parse_float, _positive),
    "scenario.sf_db": ("scenario_sf_db", _parse_float, _no_check),
    "scenario.k_db": ("scenario_k_db", _parse_float, _no_check),
    "scenario.xpr_mean_db": ("scenario_xpr_mean_db", _parse_float, _no_check),
    "scenario.xpr_std_db": ("scenario_xpr_std_db", _parse_float, _non_negative),
    "pattern.theta_in_deg": ("pattern_theta_in_deg", _parse_float, _no_check),
    "pattern.phi_in_deg": ("pattern_phi_in_deg", _parse_float, _no_check),
    "pattern.target_theta_deg": ("pattern_target_theta_deg", _parse_float, _no_check),
    "pattern.step_deg": ("pattern_step_deg", _parse_float, _positive),
    "snr_sweep.freqs_ghz": ("snr_sweep_freqs_ghz", _list_of(_parse_float), _all_positive),
    "snr_sweep.sides": ("snr_sweep_sides", _list_of(_parse_int), _all_positive),
    "snr_sweep.strategies": ("snr_sweep_strategies", _list_of(_parse_word), _non_empty),
    "snr_sweep.model": ("snr_sweep_model", _parse_word, _one_of(_MODEL_NAMES)),
    "asa_sweep.asa_deg": ("asa_sweep_asa_deg", _list_of(_parse_float), _all_positive),
    "asa_sweep.seeds": ("asa_sweep_seeds", _parse_int, _positive),
    "asa_sweep.tx": ("asa_sweep_tx", _list_of(_parse_float), _triple),
    "asa_sweep.rx": ("asa_sweep_rx", _list_of(_parse_float), _triple),
    "asa_sweep.ris_pos": ("asa_sweep_ris_pos", _list_of(_parse_float), _triple),
    "asa_sweep.bearing_deg": ("asa_sweep_bearing_deg", _parse_float, _no_check),
    "asa_sweep.downtilt_deg": ("asa_sweep_downtilt_deg", _parse_float, _no_check),
    "asa_sweep.slant_deg": ("asa_sweep_slant_deg", _parse_float, _no_check),
    "channel.strategy": ("channel_strategy", _parse_word, _one_of(_STRATEGY_NAMES)),
    "channel.model": ("channel_model", _parse_word, _one_of(_MODEL_NAMES)),
    "run.experiment": ("run_experiment", _parse_word, _one_of(EXPERIMENTS)),
    "run.seed": ("run_seed", _parse_int, _non_negative),
    "run.out_dir": ("run_out_dir", _parse_word, _no_check),
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text; omitted keys take the defaults."""
    overrides: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_REGISTRY:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        attr, parser, validator = KEY_REGISTRY[key]
        if attr in overrides:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            parsed = parser(value)
            validator(parsed, key)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {key}: {exc}") from None
        overrides[attr] = parsed
    cfg = RunConfig(**overrides)
    _cross_validate(cfg)
    return cfg


def _cross_validate(cfg: RunConfig) -> None:
    if cfg.ris_spacing < max(cfg.ris_element_a, cfg.ris_element_b):
        raise ConfigError("ris.spacing must be >= the element dimensions")
    for strategy in cfg.snr_sweep_strategies:
        if strategy not in _STRATEGY_NAMES:
            raise ConfigError(
                f"snr_sweep.strategies entries must be one of {', '.join(_STRATEGY_NAMES)}"
            )


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse_config(serialize_config(c)) == c."""
    lines = [
        f"{key} = {_format_value(getattr(cfg, attr))}"
        for key, (attr, _, _) in KEY_REGISTRY.items()
    ]
    return "\n".join(lines) + "\n"


def _atomic_write(path: Path, content: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[tuple]) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def _panel_from_config(cfg: RunConfig) -> PanelConfig:
    lam = SPEED_OF_LIGHT / cfg.carrier_freq_hz
    pose = Pose(
        Position3(*cfg.ris_pos),
        bearing=math.radians(cfg.ris_bearing_deg),
        downtilt=math.radians(cfg.ris_downtilt_deg),
        slant=math.radians(cfg.ris_slant_deg),
    )
    geom = ElementGeometry(cfg.ris_element_a, cfg.ris_element_b, lam)
    return PanelConfig(cfg.ris_size_x, cfg.ris_size_y, cfg.ris_spacing, geom, pose)


def _lsp_from_config(cfg: RunConfig) -> LargeScaleParams:
    return LargeScaleParams(
        ds=cfg.scenario_delay_spread_s,
        asa_deg=cfg.scenario_asa_deg,
        asd_deg=cfg.scenario_asd_deg,
        zsa_deg=cfg.scenario_zsa_deg,
        zsd_deg=cfg.scenario_zsd_deg,
        sf_db=cfg.scenario_sf_db,
        k_db=cfg.scenario_k_db,
        xpr_mean_db=cfg.scenario_xpr_mean_db,
        xpr_std_db=cfg.scenario_xpr_std_db,
    )


def _budget_from_config(cfg: RunConfig) -> LinkBudget:
    return LinkBudget(cfg.budget_tx_power_dbm, cfg.budget_noise_dbm)


def _run_dump_channel(cfg: RunConfig) -> SweepResult:
    panel = _panel_from_config(cfg)
    tx = Position3(*cfg.sites_tx)
    rx = Position3(*cfg.sites_rx)
    lsp = _lsp_from_config(cfg)
    base = dict(
        carrier_hz=cfg.carrier_freq_hz,
        n_clusters=cfg.scenario_clusters,
        rays_per_cluster=cfg.scenario_rays_per_cluster,
        lsp=lsp,
    )
    cfg1 = ScenarioConfig(link_state=cfg.scenario_link1, h_bs=tx.z, h_ut=panel.pose.origin.z, **base)
    cfg2 = ScenarioConfig(link_state=cfg.scenario_link2, h_bs=panel.pose.origin.z, h_ut=rx.z, **base)
    rng1 = np.random.default_rng(np.random.SeedSequence((cfg.run_seed, 0)))
    rng2 = np.random.default_rng(np.random.SeedSequence((cfg.run_seed, 1)))
    sub1 = generate_subchannel(cfg1, tx, panel.pose.origin, rng1)
    sub2 = generate_subchannel(cfg2, panel.pose.origin, rx, rng2)
    d_in, d_out = _los_dirs_local(panel.pose, tx, rx)
    mask = make_mask(panel, cfg.channel_strategy, d_in, d_out)
    channel = compose_cir(sub1, sub2, panel, mask, PhaseModel(cfg.channel_model))
    rows = [
        (p, q, i, tap.delay, tap.amp.real, tap.amp.imag)
        for (p, q) in sorted(channel.taps)
        for i, tap in enumerate(channel.taps[(p, q)])
    ]
    return SweepResult(
        columns=("p", "q", "tap_index", "delay_s", "amp_re", "amp_im"),
        rows=rows,
        meta={"path_loss_db": channel.path_loss_db},
    )


def _dispatch(cfg: RunConfig, full_scale: bool) -> SweepResult:
    experiment = cfg.run_experiment
    if experiment == "pattern":
        return run_pattern_experiment(
            _panel_from_config(cfg),
            theta_in_deg=cfg.pattern_theta_in_deg,
            phi_in_deg=cfg.pattern_phi_in_deg,
            target_theta_deg=cfg.pattern_target_theta_deg,
            step_deg=cfg.pattern_step_deg,
        )
    if experiment == "snr-sweep":
        sides = cfg.snr_sweep_sides
        if full_scale and 100 not in sides:
            sides = sides + (100,)
        panel = _panel_from_config(cfg)
        return run_config_sweep(
            tx=Position3(*cfg.sites_tx),
            rx=Position3(*cfg.sites_rx),
            pose=panel.pose,
            freqs_ghz=cfg.snr_sweep_freqs_ghz,
            sides=sides,
            strategies=cfg.snr_sweep_strategies,
            model=PhaseModel(cfg.snr_sweep_model),
            budget=_budget_from_config(cfg),
        )
    if experiment == "asa-sweep":
        pose = Pose(
            Position3(*cfg.asa_sweep_ris_pos),
            bearing=math.radians(cfg.asa_sweep_bearing_deg),
            downtilt=math.radians(cfg.asa_sweep_downtilt_deg),
            slant=math.radians(cfg.asa_sweep_slant_deg),
        )
        lam = SPEED_OF_LIGHT / cfg.carrier_freq_hz
        panel = PanelConfig(
            cfg.ris_size_x,
            cfg.ris_size_y,
            cfg.ris_spacing,
            ElementGeometry(cfg.ris_element_a, cfg.ris_element_b, lam),
            pose,
        )
        return run_asa_sweep(
            tx=Position3(*cfg.asa_sweep_tx),
            rx=Position3(*cfg.asa_sweep_rx),
            pose=pose,
            panel=panel,
            asa_deg=cfg.asa_sweep_asa_deg,
            n_seeds=cfg.asa_sweep_seeds,
            master_seed=cfg.run_seed,
            carrier_hz=cfg.carrier_freq_hz,
            lsp=_lsp_from_config(cfg),
            budget=_budget_from_config(cfg),
        )
    if experiment == "dump-channel":
        return _run_dump_channel(cfg)
    raise ConfigError(f"unknown experiment {experiment!r}")


def _write_outputs(cfg: RunConfig, result: SweepResult, out_dir: Path) -> None:
    write_csv(out_dir / CSV_NAMES[cfg.run_experiment], result.columns, result.rows)
    manifest = (
        f"experiment = {cfg.run_experiment}\n"
        f"seed = {cfg.run_seed}\n"
        "# resolved configuration\n" + serialize_config(cfg)
    )
    _atomic_write(out_dir / "manifest.txt", manifest)


def _parse_args(argv: Sequence[str] | None):
    parser = argparse.ArgumentParser(
        prog="riscade",
        description="Cascade channel simulator for reflective panels; writes CSV results.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=Path, default=None, help="config file path")
        p.add_argument("--seed", type=int, default=None, help="master seed (overrides run.seed)")
        p.add_argument("--out", type=Path, default=None, help="output directory (overrides run.out_dir)")
        p.add_argument(
            "--full-scale",
            action="store_true",
            help="extend the size sweep to a 100x100 panel",
        )
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
    except OSError as exc:
        print(f"riscade: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text)
        overrides: dict[str, object] = {"run_experiment": args.command}
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be >= 0")
            overrides["run_seed"] = args.seed
        if args.out is not None:
            overrides["run_out_dir"] = str(args.out)
        cfg = replace(cfg, **overrides)
    except ConfigError as exc:
        print(f"riscade: config error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(cfg.run_out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"riscade: cannot create output directory: {exc}", file=sys.stderr)
        return 1

    lock_path = out_dir / ".lock"
    try:
        lock_fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        print(
            f"riscade: {lock_path} exists; another run is active (or remove a stale lock)",
            file=sys.stderr,
        )
        return 1
    try:
        result = _dispatch(cfg, args.full_scale)
        _write_outputs(cfg, result, out_dir)
    except ConfigError as exc:
        print(f"riscade: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"riscade: i/o error: {exc}", file=sys.stderr)
        return 1
    finally:
        os.close(lock_fd)
        lock_path.unlink(missing_ok=True)
    return 0


def console_main() -> None:
    raise SystemExit(main())
