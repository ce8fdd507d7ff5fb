"""Degrees-of-freedom regions and interference alignment for networks with
general message demands."""

from .demand import (DemandSpec, Grouping, ReceiverMeta, compute_grouping, load_spec,
                     parse_spec, receiver_meta)
from .errors import (DofError, EnumerationLimitError, OutOfRegionError, PreconditionError,
                     SingularChannelError, SpecError, TauCapError)
from .plan import (build_constraints, build_group_constraints, build_multi_constraints,
                   build_multi_plan, build_plan, dof_fraction, integerize, make_plan,
                   verify_plan_symbolic)
from .region import (contains, enumerate_vertices, expand_region, ic_timeshare_weights,
                     max_sum_dof, symmetric_total)
from .verify import run_verification

__version__ = "0.1.0"
