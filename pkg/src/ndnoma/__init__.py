"""Noise-domain NOMA link-level simulator and theoretical BEP engine."""

from .benchmarks import (
    ComparisonPoint,
    PdNomaParams,
    exact_noisemod_cond_bep,
    nd_noma_vs_pd_noma_point,
    noisemod_cond_bep,
    oma_noisemod_ber,
    pd_noma_downlink_ber,
)
from .channel import FadingModel, draw_channel
from .core_stats import (
    QuadFormMoments,
    SecondOrderStats,
    draw_real_gaussian,
    equal_error_threshold,
    exact_variance_test_bep,
    gx2_sf,
    q_function,
    quadform_moments,
    sample_mean,
    sample_variance,
    stream,
    threshold_bep,
)
from .downlink import (
    DownlinkParams,
    cond_bep_u1_downlink,
    cond_bep_u2_downlink,
    derive_downlink_params,
    derive_downlink_params_from_noise,
    detect_u1_downlink,
    detect_u2_downlink,
    exact_cond_bep_u2_downlink,
    rx_user,
    tx_bs,
)
from .harness import SweepConfig, SweepResult, run_sweep, write_csv
from .theory import BepEstimate, unconditional_bep
from .uplink import (
    UplinkObservation,
    UplinkParams,
    combine_uplink,
    cond_bep_u1_uplink,
    cond_bep_u2_uplink,
    derive_uplink_params,
    detect_u1_uplink,
    detect_u2_uplink,
    exact_cond_bep_u2_uplink,
    tx_u1,
    tx_u2,
)

__version__ = "0.1.0"
