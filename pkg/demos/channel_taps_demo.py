"""Assemble one cascade impulse response and inspect its taps.

Generates stochastic sub-channels for both hops, composes them through an
optimally steered 16x16 panel, and prints the strongest taps plus the
narrowband transfer function at the carrier.
"""

import math

import numpy as np

from riscade import (
    ElementGeometry,
    PanelConfig,
    Pose,
    Position3,
    ScenarioConfig,
    compose_cir,
    generate_subchannel,
    strategy_optimal,
    to_local,
    transfer_function,
)
from riscade.geometry import normalize

carrier = 6e9
tx = Position3(0.0, 0.0, 10.0)
ris = Position3(-15.0, 15.0, 6.0)
rx = Position3(-10.0, 30.0, 2.0)
pose = Pose(ris, bearing=math.radians(25.0), downtilt=math.pi / 2.0)

cfg1 = ScenarioConfig(carrier_hz=carrier, link_state="los", h_bs=tx.z, h_ut=ris.z)
cfg2 = ScenarioConfig(carrier_hz=carrier, link_state="nlos", h_bs=ris.z, h_ut=rx.z)
rng = np.random.default_rng(2024)
sub1 = generate_subchannel(cfg1, tx, ris, rng)
sub2 = generate_subchannel(cfg2, ris, rx, rng)
print(f"hop 1: {len(sub1.all_rays())} rays ({sub1.link_state}), PL {sub1.path_loss_db:.1f} dB")
print(f"hop 2: {len(sub2.all_rays())} rays ({sub2.link_state}), PL {sub2.path_loss_db:.1f} dB")

panel = PanelConfig(16, 16, 0.0247, ElementGeometry(0.0156, 0.0156, 0.05), pose)
d_in = to_local(pose, normalize(tx.as_array() - ris.as_array()))
d_out = to_local(pose, normalize(rx.as_array() - ris.as_array()))
mask = strategy_optimal(panel, d_in, d_out)

channel = compose_cir(sub1, sub2, panel, mask)
taps = channel.taps[(0, 0)]
print(f"cascade: {len(taps)} taps, compound PL {channel.path_loss_db:.1f} dB")

strongest = sorted(taps, key=lambda t: -abs(t.amp))[:8]
print("\nstrongest taps (delay ns, |amp|):")
for tap in strongest:
    print(f"  {tap.delay * 1e9:>8.2f}   {abs(tap.amp):.3e}")

h = transfer_function(channel, carrier)
print(f"\nnarrowband response at the carrier: |H| = {abs(h):.3e}, arg = {np.angle(h):+.3f} rad")
