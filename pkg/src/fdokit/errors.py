"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` which the HTTP
service and the CLI surface verbatim.
"""

from __future__ import annotations


class FdoError(Exception):
    code = "FdoError"

    def __init__(self, detail: str = "") -> None:
        super().__init__(detail)
        self.detail = detail


class InvalidPidSyntax(FdoError):
    code = "InvalidPidSyntax"


class DuplicatePidConflict(FdoError):
    code = "DuplicatePidConflict"


class UnknownAttributePid(FdoError):
    code = "UnknownAttributePid"


class UnknownValueType(FdoError):
    code = "UnknownValueType"


class MalformedSnapshot(FdoError):
    code = "MalformedSnapshot"


class MalformedRecordDocument(FdoError):
    code = "MalformedRecordDocument"


class NotFound(FdoError):
    code = "NotFound"


class RemoteUnavailable(FdoError):
    code = "RemoteUnavailable"


class ImmutableEntry(FdoError):
    code = "ImmutableEntry"


class UnknownProfile(FdoError):
    code = "UnknownProfile"


class AlreadyRegistered(FdoError):
    code = "AlreadyRegistered"


class ValidationFailed(FdoError):
    code = "ValidationFailed"

    def __init__(self, outcome) -> None:
        super().__init__("; ".join(str(v) for v in outcome.violations))
        self.outcome = outcome


class DuplicateOperationName(FdoError):
    code = "DuplicateOperationName"


class InvalidCriterion(FdoError):
    code = "InvalidCriterion"


class UnknownOperation(FdoError):
    code = "UnknownOperation"


class NotApplicable(FdoError):
    code = "NotApplicable"


class MissingAccessKey(FdoError):
    code = "MissingAccessKey"


class FetchFailed(FdoError):
    code = "FetchFailed"


class UnknownNode(FdoError):
    code = "UnknownNode"


class InvalidParameter(FdoError):
    code = "InvalidParameter"
