"""Models package."""

from .enums import CheckStatus, Command, OutputFormat, Side, SingularPoint
from .schemas import (
    CertificationReport,
    ConifoldConfig,
    FlopCheckReport,
    FlopCorrespondence,
    GlobalRingData,
    IsomorphismReport,
    RuanVerifyConfig,
    RunReport,
    SampleConfig,
    ToleranceGap,
)

__all__ = [
    "CheckStatus",
    "Command",
    "OutputFormat",
    "Side",
    "SingularPoint",
    "CertificationReport",
    "ConifoldConfig",
    "FlopCheckReport",
    "FlopCorrespondence",
    "GlobalRingData",
    "IsomorphismReport",
    "RuanVerifyConfig",
    "RunReport",
    "SampleConfig",
    "ToleranceGap",
]
