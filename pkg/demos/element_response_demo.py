"""How oblique incidence distorts an element's preset phase state.

Sweeps the preset phase at a few incidence angles and prints the realized
phase error; also shows the fixed points at +1 and -1.
"""

import cmath
import math

import numpy as np

from riscade import effective_reflection

print("phase error (realized - preset) in degrees")
print("preset phase:  " + "".join(f"{p:>8.0f}" for p in range(0, 360, 45)))
for zenith_deg in (0, 30, 45, 60, 75):
    zen = math.radians(zenith_deg)
    row = []
    for preset_deg in range(0, 360, 45):
        preset = cmath.exp(-1j * math.radians(preset_deg))
        realized = effective_reflection(preset, zen)
        err = math.degrees(np.angle(realized / preset))
        row.append(f"{err:>8.1f}")
    print(f"incidence {zenith_deg:>3}: " + "".join(row))

print()
print("fixed points: states +1 and -1 are immune to incidence")
for zenith_deg in (20, 50, 80):
    zen = math.radians(zenith_deg)
    print(
        f"  zenith {zenith_deg}: R(+1) -> {effective_reflection(1.0 + 0.0j, zen):+.6f}, "
        f"R(-1) -> {effective_reflection(-1.0 + 0.0j, zen):+.6f}"
    )
