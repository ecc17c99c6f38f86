"""Polynomial-size approximate kernels for K_{a,b}-free Max k-Weight SAT."""

from .cnf import (
    BudgetExceeded,
    Clause,
    Formula,
    ParseError,
    brute_force_opt,
    degree,
    delete_variables,
    formula_from_lists,
    negative_vars,
    parse_formula,
    positive_vars,
    read_formula,
    serialize_formula,
    val,
    write_formula,
)
from .graphs import (
    Bigraph,
    Sunflower,
    find_low_degree_left,
    find_sunflower,
    formula_is_kab_free,
    incidence_graph,
    is_kab_free,
    is_sunflower,
)
from .kernel import (
    EpsilonOutOfRange,
    KernelTrace,
    PipelineParams,
    drop_heavy_negative_clauses,
    fptas_solve,
    lift_from_set_instance,
    lift_solution,
    nndeg,
    run_kernel,
    solve_with_kernel,
    step1_reduce_negative,
    step2_reduce_positive,
    step3_reduce_clauses,
    to_set_instance,
)
from .generate import GenSpec, generate_formula
from .oracle import OracleKind, approx_solve

__version__ = "0.1.0"

__all__ = [
    "approx_solve",
    "Bigraph",
    "brute_force_opt",
    "BudgetExceeded",
    "Clause",
    "degree",
    "delete_variables",
    "drop_heavy_negative_clauses",
    "EpsilonOutOfRange",
    "find_low_degree_left",
    "find_sunflower",
    "Formula",
    "formula_from_lists",
    "formula_is_kab_free",
    "fptas_solve",
    "generate_formula",
    "GenSpec",
    "incidence_graph",
    "is_kab_free",
    "is_sunflower",
    "KernelTrace",
    "lift_from_set_instance",
    "lift_solution",
    "negative_vars",
    "nndeg",
    "OracleKind",
    "parse_formula",
    "ParseError",
    "PipelineParams",
    "positive_vars",
    "read_formula",
    "run_kernel",
    "serialize_formula",
    "solve_with_kernel",
    "step1_reduce_negative",
    "step2_reduce_positive",
    "step3_reduce_clauses",
    "Sunflower",
    "to_set_instance",
    "val",
    "write_formula",
]
