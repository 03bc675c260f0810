"""Linear classifiers with feature lifts and Tikhonov parameter selection."""

from ._accel import backend_name
from .boundary import boundary_rows, linear_boundary, quadratic_boundary, write_boundary_csv
from .datagen import (
    Dataset,
    NoiseSpec,
    bump_field,
    gen_boolean,
    gen_circle_two_class,
    gen_gaussian_two_class,
    gen_linear_two_class,
    load_csv,
    load_iris,
    segment_field,
    write_csv,
)
from .errors import (
    BracketInvalid,
    ClassRegError,
    DegenerateIterate,
    DegenerateLine,
    NegativeFeature,
    NotPositiveDefinite,
    OutOfRange,
    RankDeficient,
)
from .features import BasisSpec, DesignMatrix, linear2d_design, polynomial_design, quadratic_lift
from .linalg import cho_solve, cholesky, gram, is_positive_definite, solve_spd
from .lsq import (
    FitDiagnostics,
    LinearModel,
    classify,
    fit_ls,
    fit_ridge,
    loss_and_gradient,
    predict,
    pseudo_inverse_fit,
)
from .online import (
    QuadraticBoundary,
    TrainConfig,
    TrainReport,
    boundary_roots,
    gradient_train,
    perceptron_train,
    perceptron_update,
    winnow_train,
    winnow_update,
)
from .regsel import (
    RegSelection,
    ValuePoint,
    apriori_gamma,
    apriori_select,
    balancing_fixed_point,
    gamma_schedule,
    morozov_select,
    value_function,
)

__version__ = "0.1.0"

__all__ = [
    "apriori_gamma",
    "apriori_select",
    "backend_name",
    "balancing_fixed_point",
    "BasisSpec",
    "boundary_roots",
    "boundary_rows",
    "BracketInvalid",
    "bump_field",
    "cho_solve",
    "cholesky",
    "classify",
    "ClassRegError",
    "Dataset",
    "DegenerateIterate",
    "DegenerateLine",
    "DesignMatrix",
    "fit_ls",
    "fit_ridge",
    "FitDiagnostics",
    "gamma_schedule",
    "gen_boolean",
    "gen_circle_two_class",
    "gen_gaussian_two_class",
    "gen_linear_two_class",
    "gradient_train",
    "gram",
    "is_positive_definite",
    "linear2d_design",
    "linear_boundary",
    "LinearModel",
    "load_csv",
    "load_iris",
    "loss_and_gradient",
    "morozov_select",
    "NegativeFeature",
    "NoiseSpec",
    "NotPositiveDefinite",
    "OutOfRange",
    "perceptron_train",
    "perceptron_update",
    "polynomial_design",
    "predict",
    "pseudo_inverse_fit",
    "quadratic_boundary",
    "quadratic_lift",
    "QuadraticBoundary",
    "RankDeficient",
    "RegSelection",
    "segment_field",
    "solve_spd",
    "TrainConfig",
    "TrainReport",
    "value_function",
    "ValuePoint",
    "winnow_train",
    "winnow_update",
    "write_boundary_csv",
    "write_csv",
]
