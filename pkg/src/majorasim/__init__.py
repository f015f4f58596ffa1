"""Braiding simulator for Majorana zero modes in Kitaev wire networks.

Gaussian covariance-matrix dynamics of the four-step braiding protocol on
arrays of Kitaev wires, a dense Fock-space oracle for exact small-system
cross-validation, braid-group verification, and a Majorana-encoded two-qubit
Deutsch-Jozsa run.
"""

from .backend import USING_NUMBA, backend_name
from .builder import (
    ErrorModel,
    LocalOp,
    WireParams,
    build_local_op,
    build_network,
    build_wire,
    check_step_continuity,
    step_hamiltonian,
    step_terms,
)
from .core import (
    EVEN,
    ODD,
    CovarianceState,
    MajoranaMode,
    NetworkGeometry,
    QuadraticHamiltonian,
    correlation,
    energy,
)
from .evolution import (
    Trajectory,
    apply_braid_move,
    apply_exact_braid,
    correlation_matrix,
    evolve,
    exact_word_state,
    ground_state,
    total_parity,
    wire_parity,
)
from .pfaffian import pfaffian
from .schedule import (
    BraidMove,
    Ramp,
    Schedule,
    Segment,
    braid_schedule,
    compile_word,
    parse_braid_word,
    predicted_correlation_matrix,
    transport_of_word,
    word_operator_order,
    word_time_order,
)
from .spectral import (
    SpectrumReport,
    ZeroModeError,
    analytic_zero_mode,
    instantaneous_gap,
    kernel_overlap,
    mode_overlap,
    spectrum,
    wire_edge_modes,
    zero_modes,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
