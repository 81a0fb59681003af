"""Exact Jack polynomial tables, rational Dunkl operator calculus,
certified Jack-hypergeometric series, and numerical verification of
Dunkl-Laplace transform identities."""

from .acceptance import CRITERIA, CheckResult, run_suite, suite_passed
from .combinatorics import (
    Params,
    compositions_of_weight,
    compositions_up_to,
    dominance_leq,
    generalized_pochhammer_num,
    is_partition,
    partitions_of_weight,
    sort_desc,
    spectral_vector,
    weight,
)
from .dunkl_ops import (
    apply_poly_of_dunkl,
    cherednik_op,
    dunkl_deriv,
    dunkl_pairing,
    raising_op,
)
from .errors import (
    CacheError,
    CellError,
    ConvergenceError,
    DomainError,
    EvalError,
    JackDunklError,
    ParamError,
    PoleError,
)
from .exactpoly import LaurentPoly
from .hyperseries import (
    SeriesValue,
    eval_nonsym_series,
    eval_sym_series,
    gamma_n,
    kernel_series,
    sym_kernel_series,
    tail_bound,
)
from .jack import (
    JackTable,
    cache_dir,
    cached_table,
    cnorm,
    dprime,
    eval_one,
    gram_schmidt_sym,
    load_table,
    save_table,
    verify_section_identity,
)
from .laplace import (
    QuadratureSpec,
    VerificationReport,
    default_spec,
    dunkl_laplace,
    post_widder,
    verify_euler,
    verify_hyp_laplace,
    verify_kadell,
    verify_kernel_product,
    verify_macdonald_cherednik,
    verify_master,
)

__all__ = [
    "CRITERIA",
    "CacheError",
    "CellError",
    "CheckResult",
    "ConvergenceError",
    "DomainError",
    "EvalError",
    "JackDunklError",
    "JackTable",
    "LaurentPoly",
    "ParamError",
    "Params",
    "PoleError",
    "QuadratureSpec",
    "SeriesValue",
    "VerificationReport",
    "apply_poly_of_dunkl",
    "cache_dir",
    "cached_table",
    "cherednik_op",
    "cnorm",
    "compositions_of_weight",
    "compositions_up_to",
    "default_spec",
    "dominance_leq",
    "dprime",
    "dunkl_deriv",
    "dunkl_laplace",
    "dunkl_pairing",
    "eval_nonsym_series",
    "eval_one",
    "eval_sym_series",
    "gamma_n",
    "generalized_pochhammer_num",
    "gram_schmidt_sym",
    "is_partition",
    "kernel_series",
    "load_table",
    "partitions_of_weight",
    "post_widder",
    "raising_op",
    "run_suite",
    "save_table",
    "sort_desc",
    "spectral_vector",
    "suite_passed",
    "sym_kernel_series",
    "tail_bound",
    "verify_euler",
    "verify_hyp_laplace",
    "verify_kadell",
    "verify_kernel_product",
    "verify_macdonald_cherednik",
    "verify_master",
    "verify_section_identity",
    "weight",
]

__version__ = "0.1.0"
