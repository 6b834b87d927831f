"""Exact constructions around dominated families of norms.

Weighted supremum norms on finitely supported rational vectors, separable
domination of integer tables, norm extension along flags of subspaces inside
an open ball cover, and the ordinal injections behind non-domination on
omega_1. Everything is exact rational arithmetic.
"""

from .domination import (
    DomCert,
    FuncTable,
    SchemaDomCert,
    SepDomCert,
    WeightSchema,
    check_domcert,
    check_schema_cert,
    check_sepdom,
    dominate_family,
    dominate_schema,
    equivalence_constant,
    equivalence_oracle,
    max_to_product,
    product_to_max,
    schema_norms,
    solve_sepdom_table,
)
from .errors import MalformedInputError, NormdomError, PreconditionError
from .norms import (
    Diagonal,
    Extension,
    MaxOf,
    NormExpr,
    Scale,
    SupFamily,
    WeightFunction,
    ball_box,
    check_norm_axioms,
    eval_norm,
)
from .ordinals import CnfOrdinal, big_F, demo_countable_domination, f_alpha, ord_cmp
from .topology import (
    BallCover,
    BallSpec,
    absorption_domination,
    build_opening_norm,
    counterexample_balls,
    disjointness_certificate,
    extend_norm_flag,
    extend_norm_step,
    slice_membership,
)
from .vectorspace import FinVector, Flag, IndexSet, combine, restrict, support

__version__ = "0.1.0"
