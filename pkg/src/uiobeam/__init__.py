"""Delay-tolerant unknown-input observer design and prediction-driven
zero-forcing mmWave beamforming for a UAV network.

The library is organized around the pipeline: simulate the network truth
(:mod:`uiobeam.dynamics`), design observer gains via semidefinite
feasibility (:mod:`uiobeam.design`), run the observer online
(:mod:`uiobeam.observer`), and drive the beamformer from the predicted
angular positions (:mod:`uiobeam.beamforming`). :mod:`uiobeam.simulate` and
:mod:`uiobeam.cli` reproduce the reference experiments.
"""

__version__ = "0.1.0"

from .beamforming import (
    AngleProvider,
    ArrayConfig,
    BeamformerMatrix,
    ChannelRealization,
    LinkReport,
    angular_position,
    apply_channel,
    beam_pattern,
    beamformer,
    link_report,
    signed_angular_position,
    steering_vector,
)
from .design import (
    LmiProblem,
    LmiSolution,
    ObserverGains,
    assemble_lmi_blocks,
    critical_dt,
    design,
    design_alpha_sweep,
    feasible,
    gain_point_feasible,
    mu_feasible,
)
from .dynamics import (
    Measurement,
    MeasurementModel,
    NetworkState,
    UavScenario,
    UnknownInput,
    initial_state,
    measure,
    nominal_velocity,
    perturbation,
    simulate_truth,
    step_truth,
)
from .errors import (
    BracketError,
    ConditioningError,
    ConfigError,
    DegenerateGeometryError,
    InfeasibleError,
    ShapeError,
    SingularMatrixError,
    UiobeamError,
    UnsupportedStructureError,
)
from .linalg import (
    DefinitenessReport,
    check_definiteness,
    eig_sym_bounds,
    pinv_full_col_rank,
    solve_hermitian,
)
from .observer import (
    BoundMonitor,
    InputEstimator,
    ObserverState,
    PerformanceOutput,
    estimate_input,
    monitor_bounds,
    performance_output,
    predict,
    track,
)
from .config import RunConfig, config_hash, parse_config
