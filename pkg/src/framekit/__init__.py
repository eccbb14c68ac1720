"""framekit: tightness, erasure robustness and surgery of finite frames."""
from .errors import ContractError, DimensionError, FrameKitError, NotAFrameError, ResourceLimitError
from .numerics import (
    Tolerance,
    hermitian_eigenvalues,
    null_space_basis,
    orthogonal_complement_basis,
    project,
    rank,
    spans,
)
from .frame import (
    CONDITIONS,
    DiagramSystem,
    Frame,
    TightnessReport,
    analysis_operator,
    as_frame,
    check_tight,
    diagram_system,
    diagram_vector,
    diagram_vectors,
    frame_operator,
    gramian,
    is_frame,
    is_unit_norm,
    synthesis_operator,
    tightness_report,
)
from .robustness import (
    RobustnessReport,
    null_space_supports,
    projection_preserves_rob,
    redundancy,
    redundancy_bounds,
    rob_bounds,
    rob_bruteforce,
    rob_max_nonspanning,
    rob_supports,
    robust_to,
    robust_to_one,
    robustness_report,
    robustness_witness,
    spanning_subset_count,
    strip_zeros,
)
from .surgery import (
    SubframeResult,
    SurgeryWitness,
    is_tight_subframe,
    pq_surgery_feasible_unrestricted,
    pq_surgery_necessary,
    subframe_complement_check,
    surgery_propagation_check,
    tight_subframes,
    unit_norm_subframe_rowsum_check,
    unit_norm_surgery_search,
)
from .lengths import (
    length_surgery_feasible,
    mq_bound_check,
    replace_one_interval,
    tight_frame_set_check,
)

__version__ = "0.1.0"
