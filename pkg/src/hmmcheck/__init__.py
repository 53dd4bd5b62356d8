"""Model checking of probabilistic temporal properties on hidden Markov models."""
from .checker import SatResult, model_check
from .formula import render_formula
from .model import Dtmc, FinitePath, Hmm, SatMode, cylinder_probability, validate_dtmc, validate_hmm
from .oracle import oracle_check_state_formula, oracle_probability
from .parser import load_model, parse_model_file, parse_path_formula, parse_state_formula

__all__ = [
    "Dtmc",
    "FinitePath",
    "Hmm",
    "SatMode",
    "SatResult",
    "cylinder_probability",
    "load_model",
    "model_check",
    "oracle_check_state_formula",
    "oracle_probability",
    "parse_model_file",
    "parse_path_formula",
    "parse_state_formula",
    "render_formula",
    "validate_dtmc",
    "validate_hmm",
]

__version__ = "0.1.0"
