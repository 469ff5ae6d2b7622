"""Exact computer algebra for the graded semi-classical Weyl algebra.

Polynomials in x_1..x_d, p_1..p_d and hbar over the Gaussian rationals,
graded by (polynomial degree) + 2*(hbar power) and truncated at a fixed
maximum grade. Provides the Moyal star product, Poisson and scaled
brackets, linear symplectic pullbacks, inner automorphisms, and the exact
factorization of any grading-preserving automorphism into a symplectic
linear part and an inner part.
"""

from .elements import Context, Monomial, WeylElement, MIN_TRUNC, monomials_of_grade
from .errors import (
    AutomorphismError,
    ClosednessError,
    ContextError,
    ExponentOverflowError,
    ExprError,
    ExprSyntaxError,
    FactorizationError,
    HbarScaleError,
    InnerGeneratorError,
    InternalError,
    InvalidImageError,
    KernelPreconditionError,
    LinearPartNotInvertibleError,
    LinearPartNotSymplecticError,
    MatrixError,
    NotConformalError,
    NotSymplecticError,
    RecordError,
    ResidualMismatchError,
    SingularMatrixError,
    UnknownVariableError,
    WeylError,
)
from .scalars import GaussianRational, rational, scalar_to_string
from .star import commutator, moyal, poisson, scaled_bracket
from .symplectic import (
    SympMatrix,
    conformal_factor,
    is_symplectic,
    pullback,
    pullback_automorphism,
    random_symplectic,
    symplectic_form,
)
from .automorphism import (
    AutomorphismData,
    DerivationData,
    MorphismReport,
    apply,
    compose,
    derivation_apply,
    exp_derivation,
    identity_automorphism,
    inner_automorphism,
    is_real,
    linear_part,
    log_automorphism,
    verify_morphism,
)
from .factorization import (
    FactorizationResult,
    GeneratorResidual,
    ResidualReport,
    closedness_check,
    dual_gradient,
    factor,
    kernel_check,
    poincare_integrate,
    verify_factorization,
)
from .exprio import (
    automorphism_from_record,
    automorphism_record,
    dumps_record,
    element_from_record,
    element_record,
    factorization_from_record,
    factorization_record,
    format_element,
    load_record,
    matrix_from_record,
    matrix_record,
    parse_element,
    parse_scalar,
    save_record,
)
from .sampling import (
    random_element,
    random_inner_generator,
    random_instance,
    random_kernel_derivation,
)

__version__ = "0.1.0"

__all__ = [
    "AutomorphismData",
    "AutomorphismError",
    "ClosednessError",
    "Context",
    "ContextError",
    "DerivationData",
    "ExponentOverflowError",
    "ExprError",
    "ExprSyntaxError",
    "FactorizationError",
    "FactorizationResult",
    "GaussianRational",
    "GeneratorResidual",
    "HbarScaleError",
    "InnerGeneratorError",
    "InternalError",
    "InvalidImageError",
    "KernelPreconditionError",
    "LinearPartNotInvertibleError",
    "LinearPartNotSymplecticError",
    "MIN_TRUNC",
    "MatrixError",
    "Monomial",
    "MorphismReport",
    "NotConformalError",
    "NotSymplecticError",
    "RecordError",
    "ResidualMismatchError",
    "ResidualReport",
    "SingularMatrixError",
    "SympMatrix",
    "UnknownVariableError",
    "WeylElement",
    "WeylError",
    "apply",
    "automorphism_from_record",
    "automorphism_record",
    "closedness_check",
    "commutator",
    "compose",
    "conformal_factor",
    "derivation_apply",
    "dual_gradient",
    "dumps_record",
    "element_from_record",
    "element_record",
    "exp_derivation",
    "factor",
    "factorization_from_record",
    "factorization_record",
    "format_element",
    "identity_automorphism",
    "inner_automorphism",
    "is_real",
    "is_symplectic",
    "kernel_check",
    "linear_part",
    "load_record",
    "log_automorphism",
    "matrix_from_record",
    "matrix_record",
    "monomials_of_grade",
    "moyal",
    "parse_element",
    "parse_scalar",
    "poincare_integrate",
    "poisson",
    "pullback",
    "pullback_automorphism",
    "random_element",
    "random_inner_generator",
    "random_instance",
    "random_kernel_derivation",
    "random_symplectic",
    "rational",
    "save_record",
    "scalar_to_string",
    "scaled_bracket",
    "symplectic_form",
    "verify_factorization",
    "verify_morphism",
]
