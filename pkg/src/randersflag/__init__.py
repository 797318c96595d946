"""Flag curvature of invariant Randers metrics on reductive homogeneous spaces."""

from .lie_core import (
    DegenerateFlagError,
    HypothesisViolation,
    InputError,
    LieAlgebraSpec,
    ReductiveSpace,
    UnsupportedConfiguration,
    bracket,
    check_drift_admissible,
    check_naturally_reductive,
    is_abelian,
    nilpotency_class,
    project,
    validate_algebra,
)
from .randers import (
    Flag,
    RandersSpec,
    curvature_report,
    flag_curvature_assembled,
    flag_curvature_denghou,
    flag_curvature_thm42,
    fundamental_tensor,
    fundamental_tensor_fd,
    randers_norm,
)
from .riemann import (
    ORACLE_CONSISTENT,
    PAPER_LITERAL,
    alpha,
    curvature_nat_reductive,
    curvature_oracle,
    curvature_second_kind,
    levi_civita_table,
    sectional_oracle,
)

__version__ = "0.1.0"
