"""Momentum-space structure of noncollinear degenerate photon pairs.

Subpackages map onto the pipeline: `crystal` (dispersion and phase
matching), `wavefunction` (the 4-D pair amplitude), `distributions`
(y-reduced curves, widths, entanglement ratio), `ringscan` (the
detection-plane scan simulator) and `cli` (the command-line front end).
"""

from .crystal import (
    CrystalDispersion,
    CutConfig,
    PhaseMatchResult,
    CrystalFileError,
    WavelengthRangeError,
    NoCollinearRootError,
    load_crystal,
    index_ordinary,
    index_extraordinary,
    pump_index,
    phase_match,
    collinear_cut_angle,
    opening_angle_fit,
)
from .wavefunction import (
    SpdcParams,
    MomentumPoint4,
    sinc,
    pump_envelope,
    mismatch_arg,
    psi,
    density4,
)
from .curves import Curve, read_curve
from .distributions import (
    QuadratureError,
    EntanglementReport,
    f_exact,
    f_approx,
    width_minus,
    width_single,
    width_coincidence,
    entanglement_ratio,
    classify_regime,
    entanglement_report,
    reduced_bipartite,
    default_kappa_grid,
    coincidence_kappa_grid,
    single_particle_curve,
    coincidence_curve,
    plane_restricted_curve,
    f_approx_moment_ratio,
    measured_coincidence_width,
)
from .ringscan import (
    NoRingError,
    RingGeometry,
    PairBatch,
    ScanResult,
    ring_from_params,
    chord_length,
    sample_pairs,
    scan_single,
    scan_coincidence,
)

__version__ = "0.1.0"
