"""Set-theoretic solutions of the Yang-Baxter equation and the skew braces behind them."""

from .brace import Brace, brace_iso, mpl_brace, validate_brace
from .bridge import bachiller_solution, restrict_to_cycle_base, solution_of_brace
from .classify import count_formula, count_size_mpl_le, enumerate_classes, oracle_bruteforce_classes
from .errors import YBError
from .solution import Solution, isomorphic_solutions, mpl, mpl_prime, validate_solution
from .truncated import TypeSignature, brace_of_matrix, matrices_for_type, matrix_orbits

__version__ = "0.1.0"

__all__ = [
    "Brace",
    "Solution",
    "TypeSignature",
    "YBError",
    "bachiller_solution",
    "brace_iso",
    "brace_of_matrix",
    "count_formula",
    "count_size_mpl_le",
    "enumerate_classes",
    "isomorphic_solutions",
    "matrices_for_type",
    "matrix_orbits",
    "mpl",
    "mpl_brace",
    "mpl_prime",
    "oracle_bruteforce_classes",
    "restrict_to_cycle_base",
    "solution_of_brace",
    "validate_brace",
    "validate_solution",
]
