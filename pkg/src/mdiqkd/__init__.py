"""Vacuum+weak decoy-state analysis for measurement-device-independent QKD."""
from .channel import (
    BASES, ChannelParams, GainPoint, GainTable, IntensityTriple,
    bessel_i0, build_gain_table, gains, gains_x, gains_z,
)
from .oracle import (
    YieldMatrix, exact_y11_e11, gain_from_yields, infinite_decoy_baseline,
    poisson_weight, random_yield_matrix,
)
from .bounds import (
    BoundResult, InconsistentBoundError, NoSinglePhotonSignal,
    abc_alpha, e11_upper, estimate_bounds, g123, g4, y11_lower,
)
from .finite_key import (
    BoundedGainPoint, FluctuationConfig, e11_upper_fluct, fluctuate, y11_lower_fluct,
)
from .keyrate import (
    INFINITE, VACUUM_WEAK, KeyRatePoint, ScanGrid, binary_entropy, evaluate_point,
    key_rate, optimize_intensities, scan_transmission,
)

__version__ = "0.1.0"
