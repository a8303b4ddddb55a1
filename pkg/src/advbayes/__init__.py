"""Enumerate and certify optimal robust classifiers on the line."""

from .density import (
    BreakpointDerivative,
    DistributionPair,
    Gaussian,
    OutsideSupport,
    PiecewisePoly,
)
from .intervals import Interval, IntervalSet
from .risk import RiskBreakdown, adversarial_risk, bayes_classifier, standard_risk
from .solver import SolveReport, are_equivalent, solve

__all__ = [
    "BreakpointDerivative",
    "DistributionPair",
    "Gaussian",
    "Interval",
    "IntervalSet",
    "OutsideSupport",
    "PiecewisePoly",
    "RiskBreakdown",
    "SolveReport",
    "adversarial_risk",
    "are_equivalent",
    "bayes_classifier",
    "solve",
    "standard_risk",
]

__version__ = "0.1.0"
