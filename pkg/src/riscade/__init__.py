"""riscade: cascade channel simulation through reflective phase-shifting panels.

A geometry-based stochastic channel simulator for two-hop links relayed by a
reconfigurable reflecting panel, with an angle- and polarization-dependent
non-ideal element response.
"""

from .cascade import (
    AntennaElement,
    CascadeChannel,
    CirTap,
    PolarizationMatrix,
    compose_cir,
    isotropic_v_element,
    transfer_function,
    xpr_matrix,
)
from .element import (
    ElementGeometry,
    ElementPatternValue,
    PhaseModel,
    ReflectionCoefficient,
    effective_reflection,
    element_pattern_h,
    element_pattern_matrix,
    element_pattern_v,
    sinc,
)
from .gbsm import (
    LargeScaleParams,
    Ray,
    ScenarioConfig,
    SubChannel,
    cascade_path_loss,
    deterministic_los_subchannel,
    generate_subchannel,
    path_loss,
    sample_angles,
    sample_powers_delays,
    sample_xpr,
)
from .geometry import (
    Direction3,
    Pose,
    Position3,
    SphericalAngle,
    angles_from_direction,
    angles_to_local,
    direction_from_angles,
    element_grid,
    element_position,
    to_global,
    to_local,
)
from .experiments import (
    LinkBudget,
    SweepResult,
    run_asa_sweep,
    run_config_sweep,
    run_pattern_experiment,
    snr,
)
from .panel import (
    PanelConfig,
    PanelPatternValue,
    PhaseMask,
    panel_pattern,
    panel_pattern_grid,
    pattern_cut,
    quantize_nbit,
    strategy_1bit,
    strategy_optimal,
    strategy_specular,
)

__version__ = "0.1.0"
