"""gdst: a desk-scale workbench for a two-sorted staged set-theoretic language."""

__version__ = "0.1.0"

from .errors import (BudgetError, DialectError, EnvError, GdstError,
                     NotInflationaryError, ParseError, StageOrderError)
from .evaluator import (BOT, TOP, U_PRIME, UNDEF, Environment, Truth3,
                        eval_formula, eval_meta, eval_ord, eval_selfmeta,
                        eval_set)
from .hf import EMPTY, HFSet, stage_elements, stage_size
from .syntax import desugar, parse, render

__all__ = [
    "BOT", "TOP", "UNDEF", "U_PRIME", "EMPTY",
    "Environment", "HFSet", "Truth3",
    "BudgetError", "DialectError", "EnvError", "GdstError",
    "NotInflationaryError", "ParseError", "StageOrderError",
    "desugar", "eval_formula", "eval_meta", "eval_ord", "eval_selfmeta",
    "eval_set", "parse", "render", "stage_elements", "stage_size",
]
