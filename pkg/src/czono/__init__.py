"""Zonotopes with interval-constrained noise symbols, and a small static
analyzer built on them."""

from .affine import (AffineForm, CapExceeded, ConstrainedAffineSet, gamma_form, gamma_set,
                     leq_set_exact, leq_set_sufficient)
from .analyzer import AnalysisResult, AnalyzerConfig, analyze, analyze_source
from .guards import MinimizeAbsSumProblem, minimize_abs_sum
from .join import join_forms, join_sets
from .noise import Interval, NoiseBox, contract
from .parser import ParseError, parse
from .soundness import check_soundness
from .transfer import mul_forms

__all__ = [
    "AffineForm", "AnalysisResult", "AnalyzerConfig", "CapExceeded", "ConstrainedAffineSet",
    "Interval", "MinimizeAbsSumProblem", "NoiseBox", "ParseError", "analyze", "analyze_source",
    "check_soundness", "contract", "gamma_form", "gamma_set", "join_forms", "join_sets",
    "leq_set_exact", "leq_set_sufficient", "minimize_abs_sum", "mul_forms", "parse",
]
