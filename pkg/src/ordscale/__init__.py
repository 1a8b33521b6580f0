"""Improved estimation of ordered exponential scale parameters from doubly type-II censored samples."""

from .estimators import ConfigError, EstimatorId, EstimatorOptions, Target, evaluate
from .loss import ENTROPY, QUADRATIC, SYMMETRIC, Loss, baee_constant, custom_loss, get_loss, stein_constant
from .model import (IID, CensoringScheme, DoublyTypeII, PopulationParams, ProgressiveTypeII, Records,
                    SchemeError, SufficientStats, TypeII, scheme_to_stats, simulate_stats, sufficient_stats)
from .numeric import BracketError, NumericalError, Tolerance
from .sigma1 import Sigma1Inputs, StrawdermanParams
from .sigma2 import Sigma2Inputs

__version__ = "0.1.0"

__all__ = [
    "BracketError", "CensoringScheme", "ConfigError", "DoublyTypeII", "ENTROPY", "EstimatorId",
    "EstimatorOptions", "IID", "Loss", "NumericalError", "PopulationParams", "ProgressiveTypeII",
    "QUADRATIC", "Records", "SYMMETRIC", "SchemeError", "Sigma1Inputs", "Sigma2Inputs",
    "StrawdermanParams", "SufficientStats", "Target", "Tolerance", "TypeII", "baee_constant",
    "custom_loss", "evaluate", "get_loss", "scheme_to_stats", "simulate_stats", "stein_constant",
    "sufficient_stats",
]
