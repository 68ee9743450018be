"""Controllability analysis for finite-level bilinear quantum control systems."""

__version__ = "0.1.0"

from .errors import NumericError, ValidationError
from .linalg import (
    commutator,
    expm_skew,
    hermitian_eigensystem,
    hs_inner,
    traceless_part,
)
from .models import (
    ControlSystem,
    OscillatorSpec,
    build_oscillator,
    paper_four_level,
    paper_three_level,
)
from .closure import (
    ClosureOptions,
    LieAlgebraBasis,
    algebra_dimension,
    generate_dynamical_algebra,
    project_residual,
)
from .classify import (
    AlgebraClass,
    ControllabilityVerdict,
    InvariantForm,
    classify_algebra,
    controllability_verdict,
    find_invariant_form,
    verify_real_structure,
)
from .dynamics import (
    ControlPulse,
    PropagationResult,
    evolve_density,
    expectation,
    propagate,
)
from .reachability import (
    ReachabilityVerdict,
    SearchOptions,
    StateDecomposition,
    decompose_state,
    density_matrix,
    form_constraint_check,
    kinematically_admissible,
    orbit_search,
    reachable_verdict,
)
from .optimizer import (
    OptimizationReport,
    OptimizerOptions,
    kinematical_bound,
    maximize_expectation,
    orbit_bound,
)
