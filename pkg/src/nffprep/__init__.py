"""Chebyshev-filter ground- and excited-state preparation, simulated with dense linear algebra."""

from .bench import FitResult, SweepConfig, optimality_gap_table, sweep_degree, sweep_queries
from .blockenc import BlockEncoding, lcu_encode, query_cost, shifted_grover_terms, validate
from .chebyshev import ChebyshevSeries, DegreeEstimate, expand, lemma1_degree, truncation_bound
from .errors import (
    BandNotIsolated,
    DecompositionFailure,
    DegenerateGroundState,
    DimensionMismatch,
    DimensionTooLarge,
    DomainError,
    EmptyTermList,
    FilterConstructionError,
    NFFError,
    NonFiniteSample,
    NonHermitian,
    NonUnitaryTerm,
    SpectrumOutOfRange,
    ZeroOverlap,
)
from .filters import FilterSpec, make_bandpass_filter, make_step_filter, odd_part
from .hamiltonians import (
    QUINTIC,
    SpectralProblem,
    classify_y,
    defect_lattice,
    grover_hamiltonian,
    quintic_family_problem,
    quintic_map_problem,
    shift_and_scale,
)
from .prep import PrepReport, prepare_excited_state, prepare_ground_state, verify_effective_gap
from .spectral import HermitianOperator, apply_poly_clenshaw, apply_poly_exact, decompose

__version__ = "0.1.0"
