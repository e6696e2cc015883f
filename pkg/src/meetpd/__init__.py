"""Meet matrices, Mobius inversion, and positive semidefiniteness tests
for functions on meet semilattices and for multivariate arithmetic
functions on the positive integers."""

from .arith import (
    ArithmeticFunction,
    builtin,
    dirichlet_convolution,
    dirichlet_convolve_d,
    gcd_d,
    mobius_arith,
    mu_star_mu,
    pd_check_factored,
    pd_check_grid,
    ramanujan_C,
    table_to_csv,
    to_lattice_function,
)
from .errors import (
    ArityMismatchError,
    AmbientNotEnumerableError,
    ComponentNotCertifiedError,
    CycleError,
    DimensionMismatchError,
    DuplicateElementError,
    EvaluationError,
    MeetPDError,
    NegativeScalarError,
    NoLeastElementError,
    NotASemilatticeError,
    NotDiagonalFormError,
    NotLowerClosedError,
    NotMeetClosedError,
    NumericalFailureError,
    PosetMismatchError,
    UnknownBuiltinError,
)
from .exact import Inertia, char_poly, quadratic_form, symmetric_elimination
from .incidence import (
    IncidenceFunction,
    ambient_mobius,
    convolve,
    delta,
    from_point_function,
    mobius,
    mobius_invert,
    mobius_of_subset,
    mobius_product,
    mobius_subset_via_ambient,
    zeta,
)
from .meetmatrix import (
    Decomposition,
    LatticeFunction,
    MeetMatrix,
    OrderMap,
    RankCollapseResult,
    constant_function,
    decomposition_to_json,
    identity_function,
    kron_decompose,
    kron_decompose_d,
    lattice_function,
    ldl_lower_closed,
    matrix_to_csv,
    matrix_to_json,
    meet_composed_function,
    meet_matrix,
    rank_collapse,
    reconstruct,
    summatory_function,
    table_function,
)
from .pdcheck import (
    NEGATIVE,
    POSITIVE,
    CoveringReport,
    ElementWitness,
    MonotonicityReport,
    OracleReport,
    PDVerdict,
    VectorWitness,
    add,
    check_covering_equivalence,
    check_monotonicity,
    factorable_pd,
    inverted_table,
    pd_criterion,
    pointwise_mul,
    psd_oracle,
    scale,
    separable_product,
)
from .posets import (
    DivisorLattice,
    ElementSubset,
    MeetSemilattice,
    MinLattice,
    Poset,
    ProductLattice,
    build_poset,
    divisor_lattice,
    is_lower_closed,
    is_meet_closed,
    linear_extension,
    load_hasse,
    lower_closure,
    meet_closure,
    min_lattice,
    product_lattice,
    product_subset,
    subset,
)

__version__ = "0.1.0"
