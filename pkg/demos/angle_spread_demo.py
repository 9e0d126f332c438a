"""Angle-spread study: how incidence-side azimuth spread degrades the link.

Monte-Carlo sweep over the arrival spread of the stochastic Tx-panel hop,
comparing the ideal-phase and non-ideal element models seed by seed.
"""

import numpy as np

from riscade.experiments import run_asa_sweep

result = run_asa_sweep(asa_deg=(1.0, 5.0, 10.0), n_seeds=40, master_seed=1)


def column(asa, model):
    return np.array([r[3] for r in result.rows if r[0] == asa and r[1] == model])


print("ASA    mean SNR (nonideal)   mean SNR (ideal)   mean dB gap")
for asa in (1.0, 5.0, 10.0):
    non = column(asa, "nonideal")
    ideal = column(asa, "ideal")
    print(
        f"{asa:>4}   {non.mean():>18.2f}   {ideal.mean():>16.2f}   {np.mean(ideal - non):>11.3f}"
    )
print()
print("Larger spread moves multipath off the steered main lobe: the mean SNR")
print("falls, and the ideal-phase model keeps overestimating the link.")
