"""
Modelos Pydantic do motor
"""

from .arith_models import EulerProductValue, FactoredInteger
from .gap_models import (
    GapConfig,
    IIndex,
    KIndex,
    LambdaReport,
    SearchState,
    SeriesEvaluation,
    TailCertificate,
)
from .lemma_models import ComparisonRow
from .report_models import GapCertificate, VerificationReport, VerificationRow

__all__ = [
    "EulerProductValue",
    "FactoredInteger",
    "GapConfig",
    "IIndex",
    "KIndex",
    "LambdaReport",
    "SearchState",
    "SeriesEvaluation",
    "TailCertificate",
    "ComparisonRow",
    "GapCertificate",
    "VerificationReport",
    "VerificationRow",
]
