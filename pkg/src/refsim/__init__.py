"""Refinement, simulation and origin modal logics over finite Kripke models."""
from .errors import CapExceeded, ModelError, RefsimError
from .kripke import KripkeModel, PointedModel, mfi_model
from .relations import related
from .semantics import bounded_quantifier_search, check, check_base
from .syntax import parse, to_text

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "ModelError", "RefsimError", "KripkeModel", "PointedModel", "mfi_model",
    "related", "bounded_quantifier_search", "check", "check_base", "parse", "to_text",
]
