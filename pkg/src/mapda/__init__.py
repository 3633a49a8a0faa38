"""Multiple-antenna placement delivery arrays: construction, validation,
delivery planning and zero-forcing simulation."""

__version__ = "0.1.0"

from .array import (
    STAR,
    ArrayError,
    AuditError,
    CodedArray,
    MapdaParams,
    PdaParams,
    StarAudit,
    SubarrayView,
    format_array,
    parse_array,
    read_array,
    star_audit,
    subarray_of,
    sum_dof,
    validate_mapda,
    validate_pda,
    write_array,
)
from .compare import ComparisonRow, compare_subpacketization
from .constructions import (
    LiftAudit,
    LiftParams,
    LiftTrace,
    audit_lift,
    check_lift,
    latin_mapda,
    latin_square,
    lift_regular_pda,
    mn_mapda,
    mn_pda,
    right_shift_row,
    shift_feasible,
)
from .kernels import BACKEND
from .miso import make_channel, simulate, solve_precoder
from .scheme import place, plan_delivery, verify_plan
