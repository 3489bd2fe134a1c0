"""Filter convergence on finite topological spaces.

Finite spaces and filters, F-limits, F-compactness and sequencewise
P-compactness, finite products, and exhaustive checks of the product
preservation theorems over catalogues of small spaces.
"""

from .convergence import (
    IndexedSequence,
    OmegaSequence,
    SetSequence,
    Verdict,
    every_sequence_converges,
    is_F_compact,
    is_P_compact,
    is_P_pseudocompact,
    is_sequentially_compact,
    limit_set,
    omega_limit_set,
    set_limit_set,
)
from .errors import (
    ImproperFilterError,
    InputError,
    InternalError,
    LabError,
    PreconditionError,
    ResourceLimitError,
)
from .filters import (
    EventuallyPeriodicSet,
    FilterFamily,
    FiniteFilter,
    OmegaFilter,
    enumerate_filters,
    enumerate_ultrafilters,
    filter_from_base,
    is_mn_regular,
    is_ultrafilter,
    non_ultra_partition,
    omega_member,
    principal,
)
from .products import (
    DiagonalWitness,
    ProductSpace,
    chain_function,
    diagonal_counterexample,
    non_ultra_witness_sequence,
    product,
    projection_law_check,
    split_to_discrete,
)
from .spaces import (
    FiniteSpace,
    SpaceCatalogue,
    closure,
    discrete,
    enumerate_topologies,
    iit_space,
    indiscrete,
    is_continuous,
    is_m_ultraconnected,
    is_ultraconnected,
    mask,
    members,
    minimal_open_nbhd,
    sierpinski,
)
from .theorems import (
    comfort_leq,
    comfort_report,
    cor22_check,
    cor23_check,
    cor54_check,
    covering_compact,
    thm21_check,
)

__version__ = "0.1.0"
