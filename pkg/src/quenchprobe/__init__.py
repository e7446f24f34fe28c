"""Quench-probe entanglement dynamics in inhomogeneous free-fermion chains.

A Kitaev chain Q is quenched at t = 0 while tunnel-coupled through a
separation layer X to a static probe P; the covariance-matrix formalism
tracks the probe's entanglement entropy and the Q-P mutual information
exactly, and a dense Fock-space oracle validates every result at small N.
"""

from .model import (
    SetupConfig,
    Region,
    QuadraticHamiltonian,
    SpectrumResult,
    build_hamiltonian,
    single_particle_spectrum,
    mzm_splitting,
)
from .covariance import (
    CovarianceMatrix,
    Propagator,
    canonical_form,
    ground_state,
    thermal_state,
    make_propagator,
    evolve,
    reduce,
)
from .entanglement import (
    ModeSpectrum,
    mode_spectrum,
    von_neumann,
    renyi,
    mutual_information,
    to_log2,
    LN2,
)
from .experiments import (
    EntanglementSeries,
    TimeSeriesRecord,
    SweepGrid,
    SweepTable,
    FitResult,
    PlateauResult,
    run_time_series,
    run_sweep,
    extract_plateau,
    detect_onset,
    smooth,
    fit_power_law,
    fit_log_law,
)
from .presets import PresetPlan, SeriesRun, preset, PRESET_NAMES
from .manifest import RunManifest, parse_config, render
from .csvio import write_series_csv, write_sweep_csv, read_csv
from .errors import (
    ValidationError,
    NumericalConsistencyError,
    DegenerateGroundStateError,
    OracleSizeError,
)

__version__ = "0.1.0"
