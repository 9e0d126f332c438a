"""Panel gain cut: ideal vs non-ideal phase modulation, all polarizations.

Reproduces the radiation-pattern study on the reference 32x32 panel with a
60-degree incidence steered to 45 degrees in the opposite half-plane, then
prints the model gap at the target and saves a figure next to this script.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from riscade import ElementGeometry, PanelConfig
from riscade.experiments import run_pattern_experiment

panel = PanelConfig(32, 32, 0.0247, ElementGeometry(0.0156, 0.0156, 0.05))
result = run_pattern_experiment(panel, theta_in_deg=60.0, target_theta_deg=45.0)

curves = {}
for strategy, model, pol_in, pol_out, theta, gain in result.rows:
    curves.setdefault((model, pol_in + pol_out), []).append((theta, gain))

gap = dict(curves["nonideal", "vv"])[45.0] - dict(curves["ideal", "vv"])[45.0]
print(f"gain at the 45-degree target, non-ideal minus ideal: {gap:+.2f} dB")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4), sharey=True)
for model, style in (("ideal", "--"), ("nonideal", "-")):
    theta, gain = zip(*sorted(curves[model, "vv"]))
    ax1.plot(theta, gain, style, label=model)
ax1.set_title("v-v gain, ideal vs non-ideal")
ax1.set_xlabel("exit zenith (deg, signed)")
ax1.set_ylabel("relative gain (dB)")
ax1.set_ylim(-60, 2)
ax1.legend()

for pol in ("vv", "vh", "hv", "hh"):
    theta, gain = zip(*sorted(curves["nonideal", pol]))
    ax2.plot(theta, gain, label=pol)
ax2.set_title("non-ideal model by polarization pair")
ax2.set_xlabel("exit zenith (deg, signed)")
ax2.set_ylim(-60, 2)
ax2.legend()

out = Path(__file__).with_name("pattern_cut_demo.png")
fig.tight_layout()
fig.savefig(out, dpi=120)
print(f"figure saved to {out}")
