"""hashcount: approximate CNF model counting with (epsilon, delta) guarantees.

The count is obtained by randomly partitioning the model space with parity
hash constraints, enumerating one random cell with a SAT solver, scaling by
the cell count, and taking the median over independent trials.  An
exhaustive exact counter and a batch harness are included for validating
the guarantees on small formulas.
"""

from .backend import (
    BoundedQuery,
    EnumerationResult,
    ExternalDimacsSolver,
    ExternalSolverError,
    bounded_sat,
)
from .cnf import (
    CnfFormula,
    DimacsError,
    Model,
    evaluate,
    parse_dimacs,
    parse_dimacs_file,
    serialize_dimacs,
)
from .engine import (
    ApproxParams,
    CoreResult,
    RunReport,
    approx_mc,
    approx_mc_core,
    compute_iter_count_formula,
    compute_iter_count_optimized,
    compute_threshold,
    count_interval,
    eta,
    find_median,
    within_tolerance,
)
from .exact import (
    OracleRangeError,
    cell_counts,
    count_with_xor,
    exact_count,
    exact_count_vectorized,
)
from .harness import BenchmarkRecord, aggregate, run_batch, write_csv
from .rng import RandomSource
from .solver import Solver, solve_once
from .xorhash import (
    CellTarget,
    XorHash,
    XorRow,
    apply_hash,
    dump_hash,
    encode_constraint,
    sample_alpha,
    sample_hash,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxParams",
    "BenchmarkRecord",
    "BoundedQuery",
    "CellTarget",
    "CnfFormula",
    "CoreResult",
    "DimacsError",
    "EnumerationResult",
    "ExternalDimacsSolver",
    "ExternalSolverError",
    "Model",
    "OracleRangeError",
    "RandomSource",
    "RunReport",
    "Solver",
    "XorHash",
    "XorRow",
    "aggregate",
    "apply_hash",
    "approx_mc",
    "approx_mc_core",
    "bounded_sat",
    "cell_counts",
    "compute_iter_count_formula",
    "compute_iter_count_optimized",
    "compute_threshold",
    "count_interval",
    "count_with_xor",
    "dump_hash",
    "encode_constraint",
    "eta",
    "evaluate",
    "exact_count",
    "exact_count_vectorized",
    "find_median",
    "parse_dimacs",
    "parse_dimacs_file",
    "run_batch",
    "sample_alpha",
    "sample_hash",
    "serialize_dimacs",
    "solve_once",
    "within_tolerance",
    "write_csv",
]
