"""Discrete Wigner phase-space patterns of continuous-time quantum walks on
ordered circulant rings and disordered networks."""

__version__ = "0.1.0"

from .netgen import (
    DisorderSpec,
    Graph,
    Hamiltonian,
    InvalidSpecError,
    NetworkSpec,
    RingSpec,
    assemble_hamiltonian,
    build_ring,
    exponential_disorder,
    laplacian,
    network_hamiltonian,
    ws_rewire,
)
from .spectral import (
    BlochSpectrum,
    SpectralData,
    SpectralError,
    bloch_spectrum,
    degeneracy_classes,
    eigendecompose,
)
from .wigner import (
    RealityError,
    WignerField,
    closed_form_limit_m1,
    limiting_wigner_circulant,
    limiting_wigner_general,
    wigner_circulant,
    wigner_general,
)
from .analysis import (
    AsymmetryMap,
    EnsembleResult,
    MarginalReport,
    asymmetry,
    ensemble_average,
    marginals,
    transition_probability,
)
