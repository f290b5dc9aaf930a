"""Verification backends: finite models, Kripke frames, set algebras, HF sets."""

from .engine import Engine, EvaluationTooLarge, MissingRelation, PartialAssignment
from .models import (Model, SizeTooLarge, enumerate_models, eval_formula, satisfies,
                     valid_in_model)
from .kripke import KripkeFrame, eval_modal, to_frame
from .setalg import SetAlgebra3, UnboundTermVariable, set_algebra_eval
from .hf import RankTooLarge, TriState, hf_oracle

eval = eval_formula  # noqa: A001  (public name used by callers)

__all__ = [
    "Engine", "EvaluationTooLarge", "MissingRelation", "PartialAssignment",
    "Model", "SizeTooLarge", "enumerate_models", "eval", "eval_formula", "satisfies",
    "valid_in_model", "KripkeFrame", "eval_modal", "to_frame", "SetAlgebra3",
    "UnboundTermVariable", "set_algebra_eval", "RankTooLarge", "TriState", "hf_oracle",
]
