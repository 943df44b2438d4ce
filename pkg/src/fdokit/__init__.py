"""Registry, validation, operations and graph toolkit for FAIR Digital Objects."""

from fdokit.errors import FdoError
from fdokit.model import InformationRecord, ValidationOutcome, Violation
from fdokit.pid import Pid
from fdokit.registry import PidRegistry
from fdokit.typesys import (
    KernelInformationProfile,
    Role,
    TypedAttributeDefinition,
    TypeRegistry,
    ValueType,
    validate_value,
)

__version__ = "0.1.0"

__all__ = [
    "FdoError",
    "InformationRecord",
    "KernelInformationProfile",
    "Pid",
    "PidRegistry",
    "Role",
    "TypeRegistry",
    "TypedAttributeDefinition",
    "ValidationOutcome",
    "ValueType",
    "Violation",
    "validate_value",
]
