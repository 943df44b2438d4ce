"""Information records, validation outcomes and the record exchange format.

Exchange document::

    {"pid": "<prefix/suffix>", "record": {"<attribute-pid>": "<value>" | ["<value>", ...]}}

All values are strings. Repeatable attributes serialize as arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from fdokit.errors import MalformedRecordDocument
from fdokit.pid import is_pid

DOCUMENT_FIELDS = frozenset({"pid", "record"})


@dataclass(frozen=True)
class InformationRecord:
    """A multiset of ``(attribute_pid, value)`` pairs, optionally registered under a PID.

    Pairs are kept sorted by key; the relative order of values under one key
    is preserved, so "first listed location" stays meaningful.
    """

    pairs: tuple[tuple[str, str], ...] = ()
    pid: Optional[str] = None

    def __post_init__(self) -> None:
        pairs = tuple((str(k), v) for k, v in self.pairs)
        object.__setattr__(self, "pairs", tuple(sorted(pairs, key=lambda kv: kv[0])))

    @classmethod
    def from_mapping(
        cls, values: Mapping[str, Union[str, Sequence[str]]], pid: Optional[str] = None
    ) -> "InformationRecord":
        pairs = []
        for key, value in values.items():
            if isinstance(value, str):
                pairs.append((key, value))
            else:
                pairs.extend((key, v) for v in value)
        return cls(tuple(pairs), pid)

    def keys(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.pairs)

    def values(self, key: str) -> list[str]:
        return [v for k, v in self.pairs if k == key]

    def first(self, key: str) -> Optional[str]:
        for k, v in self.pairs:
            if k == key:
                return v
        return None

    def to_mapping(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for k, v in self.pairs:
            out.setdefault(k, []).append(v)
        return out

    def with_pid(self, pid: Optional[str]) -> "InformationRecord":
        return InformationRecord(self.pairs, pid)

    def with_pairs(self, *pairs: tuple[str, str]) -> "InformationRecord":
        return InformationRecord(self.pairs + tuple(pairs), self.pid)

    def without(self, key: str) -> "InformationRecord":
        return InformationRecord(tuple(kv for kv in self.pairs if kv[0] != key), self.pid)

    def __len__(self) -> int:
        return len(self.pairs)


class ViolationCode(str, Enum):
    MISSING_MANDATORY = "MissingMandatory"
    UNKNOWN_ATTRIBUTE = "UnknownAttribute"
    TYPE_MISMATCH = "TypeMismatch"
    EMPTY_VALUE = "EmptyValue"
    REPEAT_VIOLATION = "RepeatViolation"
    MULTIPLE_PROFILES = "MultipleProfiles"
    NO_PROFILE = "NoProfile"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    attribute_pid: Optional[str] = None
    detail: str = ""
    role: Optional[str] = None

    def __str__(self) -> str:
        tail = self.role or self.attribute_pid or self.detail
        return f"{self.code.value}:{tail}" if tail else self.code.value

    def to_document(self) -> dict:
        doc = {"code": self.code.value, "attribute_pid": self.attribute_pid, "detail": self.detail}
        if self.role:
            doc["role"] = self.role
        return doc


@dataclass(frozen=True)
class ValidationOutcome:
    valid: bool
    violations: tuple[Violation, ...] = ()

    @classmethod
    def of(cls, violations: Iterable[Violation]) -> "ValidationOutcome":
        violations = tuple(dict.fromkeys(violations))
        return cls(not violations, violations)

    @property
    def codes(self) -> set[ViolationCode]:
        return {v.code for v in self.violations}

    @property
    def missing_roles(self) -> set[str]:
        return {v.role for v in self.violations if v.code is ViolationCode.MISSING_MANDATORY and v.role}

    def to_document(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_document() for v in self.violations]}


# -- exchange format ----------------------------------------------------------


def _load(document: Any) -> Any:
    if isinstance(document, (str, bytes)):
        try:
            return json.loads(document)
        except ValueError as exc:
            raise MalformedRecordDocument(f"not JSON: {exc}") from None
    return document


def parse_record(document: Any, *, lenient: bool = False, require_pid: bool = False) -> InformationRecord:
    """Parse an exchange document (mapping or JSON text) into a record.

    Strict mode rejects unknown top-level fields; ``lenient`` ignores them
    (use :func:`document_extras` to read them).
    """
    document = _load(document)
    if not isinstance(document, dict):
        raise MalformedRecordDocument("document must be an object")
    unknown = set(document) - DOCUMENT_FIELDS
    if unknown and not lenient:
        raise MalformedRecordDocument(f"unknown top-level fields: {sorted(unknown)}")
    pid = document.get("pid")
    if pid is not None and not (isinstance(pid, str) and is_pid(pid)):
        raise MalformedRecordDocument(f"pid {pid!r} is not a handle identifier")
    if require_pid and pid is None:
        raise MalformedRecordDocument("document has no pid")
    body = document.get("record")
    if not isinstance(body, dict):
        raise MalformedRecordDocument("'record' must be an object")
    pairs = []
    for key, value in body.items():
        if not isinstance(key, str) or not key:
            raise MalformedRecordDocument("record keys must be non-empty strings")
        if isinstance(value, str):
            pairs.append((key, value))
        elif isinstance(value, list) and value and all(isinstance(v, str) for v in value):
            pairs.extend((key, v) for v in value)
        else:
            raise MalformedRecordDocument(f"value of {key!r} must be a string or non-empty array of strings")
    return InformationRecord(tuple(pairs), pid)


def document_extras(document: Any) -> dict:
    """Top-level fields of an exchange document outside the strict format."""
    document = _load(document)
    if not isinstance(document, dict):
        raise MalformedRecordDocument("document must be an object")
    return {k: v for k, v in document.items() if k not in DOCUMENT_FIELDS}


def serialize_record(
    record: InformationRecord, repeatable: Optional[Callable[[str], bool]] = None
) -> dict:
    """Render a record as an exchange document.

    ``repeatable`` tells which keys serialize as arrays even with one value;
    keys with several values are always arrays.
    """
    body: dict[str, Union[str, list[str]]] = {}
    for key, values in record.to_mapping().items():
        if len(values) == 1 and not (repeatable and repeatable(key)):
            body[key] = values[0]
        else:
            body[key] = list(values)
    doc: dict[str, Any] = {}
    if record.pid is not None:
        doc["pid"] = record.pid
    doc["record"] = body
    return doc


def dumps(document: Any) -> str:
    """Canonical JSON text used for files and byte-level comparisons."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
