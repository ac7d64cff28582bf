"""Koszulity: decides whether a finitely presented graded quiver algebra is
Koszul, d-Koszul, or piecewise-Koszul, by computing minimal graded projective
resolutions, bigraded Ext tables, Yoneda products, and the degree bookkeeping
around them."""

from .errors import InputError, KoszulityError, Refusal
from .ext import (
    ArityReport,
    Classification,
    DeltaFunction,
    ExtAlgebra,
    ExtClass,
    ExtTable,
    ModuleClassification,
    ainfty_feasible_arities,
    classify,
    classify_module,
    delta,
    ek_subalgebra,
    ext_algebra,
    ext_generation_degrees,
    ext_table,
    module_generation_check,
    radical_sequence_check,
    reduced_2l_check,
    yoneda_product,
    yoneda_surjectivity_check,
)
from .groebner import (
    GradedAlgebra,
    GroebnerAlgebra,
    GroebnerBasis,
    MonomialOrder,
    buchberger_truncated,
    graded_algebra_data,
    normal_form,
)
from .linalg import BACKEND, FieldElement, Matrix, kernel_basis, rref, solve
from .modules import (
    FreeModule,
    ModuleMap,
    ModulePresentation,
    TableAlgebra,
    degree_slice,
    ingest_structure_constants,
    map_slice,
)
from .presentation import (
    DEFAULT_CHAR,
    AlgebraElement,
    Path,
    Quiver,
    QuiverPresentation,
    compose,
    validate,
)
from .resolution import (
    BettiTable,
    Resolution,
    betti_table,
    free_module_presentation,
    minimal_resolution,
    radical_submodule,
    simple_resolution,
    syzygy,
    top_quotient,
    trivial_module_presentation,
)

__version__ = "0.1.0"
