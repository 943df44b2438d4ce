"""Operations associated with FDOs through their typed attributes.

An operation is associated with a record when its criterion matches the
record's key-value pairs. Operations targeting the bit sequence are only
applicable when the record also carries a resource-location pair.
"""

from __future__ import annotations

import base64
import hashlib
import json
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Mapping, Optional
from urllib.parse import unquote, urlparse
from urllib.request import url2pathname

import httpx

from fdokit.errors import (
    DuplicateOperationName,
    FetchFailed,
    InvalidCriterion,
    InvalidParameter,
    MissingAccessKey,
    NotApplicable,
    UnknownOperation,
)
from fdokit.model import InformationRecord
from fdokit.registry import PidRegistry
from fdokit.resources import FIXTURES, SPDX_TABLE
from fdokit.typesys import REFERENCE_TYPES, KernelInformationProfile, Role, TypeRegistry


class MatchKind(str, Enum):
    EXACT = "exact"
    PREFIX = "prefix"


class Target(str, Enum):
    METADATA = "metadata"
    BIT_SEQUENCE = "bit_sequence"


@dataclass(frozen=True)
class ValuePredicate:
    attribute_pid: str
    match: MatchKind
    expected: str

    def test(self, record: InformationRecord) -> bool:
        for value in record.values(self.attribute_pid):
            if self.match is MatchKind.EXACT and value == self.expected:
                return True
            if self.match is MatchKind.PREFIX and value.startswith(self.expected):
                return True
        return False


@dataclass(frozen=True)
class AssociationCriterion:
    """Key presence plus exact/prefix value matches.

    ``required_keys`` must all be present; if ``any_keys`` is non-empty at
    least one of them must be present; every predicate must hold.
    """

    required_keys: frozenset[str] = frozenset()
    predicates: tuple[ValuePredicate, ...] = ()
    any_keys: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "required_keys", frozenset(self.required_keys))
        object.__setattr__(self, "any_keys", frozenset(self.any_keys))
        object.__setattr__(self, "predicates", tuple(self.predicates))

    def attribute_pids(self) -> frozenset[str]:
        return self.required_keys | self.any_keys | {p.attribute_pid for p in self.predicates}

    def is_empty(self) -> bool:
        return not (self.required_keys or self.any_keys or self.predicates)

    def matches(self, record: InformationRecord) -> bool:
        keys = record.keys()
        if not self.required_keys <= keys:
            return False
        if self.any_keys and not self.any_keys & keys:
            return False
        return all(p.test(record) for p in self.predicates)


Executor = Callable[["OperationEngine", InformationRecord, Mapping[str, Any]], tuple[str, dict]]


@dataclass(frozen=True)
class OperationDescriptor:
    name: str
    criterion: AssociationCriterion
    target: Target
    executor: Optional[Executor] = field(default=None, compare=False, repr=False)
    description: str = field(default="", compare=False)

    def to_document(self) -> dict:
        c = self.criterion
        return {
            "name": self.name,
            "target": self.target.value,
            "description": self.description,
            "criterion": {
                "required_keys": sorted(c.required_keys),
                "any_keys": sorted(c.any_keys),
                "predicates": [
                    {"attribute_pid": p.attribute_pid, "match": p.match.value, "expected": p.expected}
                    for p in c.predicates
                ],
            },
        }


@dataclass(frozen=True)
class BitSequence:
    data: bytes
    source_location: str
    retrieved_at: datetime

    def __len__(self) -> int:
        return len(self.data)


@dataclass(frozen=True)
class OperationResult:
    operation: str
    record_pid: Optional[str]
    status: str
    payload: dict

    def to_document(self) -> dict:
        return {
            "operation": self.operation,
            "record_pid": self.record_pid,
            "status": self.status,
            "payload": _jsonable(self.payload),
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, bytes):
        return base64.b64encode(value).decode("ascii")
    if isinstance(value, datetime):
        return value.isoformat()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


# -- bit sequence access ----------------------------------------------------------


class ResourceFetcher:
    """Reads bit sequences from ``file:`` and ``http(s):`` locations.

    Relative ``file:`` paths (``file:payloads/x.bin``) resolve against ``root``.
    """

    def __init__(self, root: Optional[str | Path] = FIXTURES, client: Optional[httpx.Client] = None) -> None:
        self.root = Path(root) if root is not None else None
        self._client = client

    def _path(self, location: str) -> Path:
        parsed = urlparse(location)
        if parsed.netloc not in ("", "localhost"):
            raise FetchFailed(f"remote file hosts are not supported: {location}")
        if location.startswith("file://") or parsed.path.startswith("/"):
            return Path(url2pathname(parsed.path))
        if self.root is None:
            raise FetchFailed(f"relative location without resource root: {location}")
        return self.root / unquote(parsed.path)

    def fetch(self, location: str) -> bytes:
        scheme = location.partition(":")[0].lower()
        if scheme == "file":
            try:
                return self._path(location).read_bytes()
            except OSError as exc:
                raise FetchFailed(f"{location}: {exc.strerror or exc}") from None
        if scheme in ("http", "https"):
            response = self._request("GET", location)
            return response.content
        raise FetchFailed(f"unsupported location scheme: {location}")

    def content_type(self, location: str) -> Optional[str]:
        """Media type announced for ``location`` (HTTP only)."""
        if location.partition(":")[0].lower() not in ("http", "https"):
            return None
        response = self._request("HEAD", location)
        return response.headers.get("content-type", "").split(";")[0].strip().lower() or None

    def _request(self, method: str, location: str) -> httpx.Response:
        client = self._client or httpx.Client(timeout=30.0, follow_redirects=True)
        try:
            response = client.request(method, location)
        except httpx.HTTPError as exc:
            raise FetchFailed(f"{location}: {exc}") from None
        finally:
            if self._client is None:
                client.close()
        if response.status_code >= 400:
            raise FetchFailed(f"{location}: HTTP {response.status_code}")
        return response


# -- engine -------------------------------------------------------------------------


class OperationEngine:
    """Registry of operations plus association, access and execution."""

    def __init__(
        self,
        types: TypeRegistry,
        registry: PidRegistry,
        fetcher: Optional[ResourceFetcher] = None,
    ) -> None:
        self.types = types
        self.registry = registry
        self.fetcher = fetcher or ResourceFetcher()
        self._operations: dict[str, OperationDescriptor] = {}
        self._lock = threading.Lock()

    def register_operation(self, descriptor: OperationDescriptor) -> str:
        criterion = descriptor.criterion
        if criterion.is_empty():
            raise InvalidCriterion(f"{descriptor.name}: criterion has neither keys nor predicates")
        unknown = sorted(p for p in criterion.attribute_pids() if self.types.get_attribute(p) is None)
        if unknown:
            raise InvalidCriterion(f"{descriptor.name}: unregistered attributes {unknown}")
        with self._lock:
            if descriptor.name in self._operations:
                raise DuplicateOperationName(descriptor.name)
            self._operations[descriptor.name] = descriptor
        return descriptor.name

    def descriptor(self, name: str) -> OperationDescriptor:
        try:
            return self._operations[name]
        except KeyError:
            raise UnknownOperation(name) from None

    def descriptors(self) -> list[OperationDescriptor]:
        return sorted(self._operations.values(), key=lambda d: d.name)

    def associate(self, record: InformationRecord) -> list[OperationDescriptor]:
        """Operations whose criterion matches ``record``, sorted by name."""
        return [d for d in self.descriptors() if d.criterion.matches(record)]

    def access_key(self, record: InformationRecord) -> Optional[str]:
        return self.types.role_key(record, Role.LOCATION)

    def access_bit_sequence(self, record: InformationRecord) -> BitSequence:
        key = self.access_key(record)
        if key is None:
            raise MissingAccessKey(f"{record.pid or 'record'}: digital resource location is missing")
        location = record.first(key)
        data = self.fetcher.fetch(location)
        return BitSequence(data, location, datetime.now(timezone.utc))

    def applicable(self, descriptor: OperationDescriptor | str, record: InformationRecord) -> bool:
        if isinstance(descriptor, str):
            descriptor = self.descriptor(descriptor)
        if not descriptor.criterion.matches(record):
            return False
        return descriptor.target is Target.METADATA or self.access_key(record) is not None

    def execute(
        self, name: str, record: InformationRecord, params: Optional[Mapping[str, Any]] = None
    ) -> OperationResult:
        descriptor = self.descriptor(name)
        if not descriptor.criterion.matches(record):
            raise NotApplicable(f"{name} is not associated with {record.pid or 'record'}")
        if descriptor.target is Target.BIT_SEQUENCE and self.access_key(record) is None:
            raise MissingAccessKey(f"{name} needs a digital resource location on {record.pid or 'record'}")
        if descriptor.executor is None:
            raise NotApplicable(f"{name} has no executor bound")
        status, payload = descriptor.executor(self, record, params or {})
        return OperationResult(name, record.pid, status, payload)


# -- built-in operations ------------------------------------------------------------


def _license_key(url: str) -> str:
    key = url.strip().lower()
    key = re.sub(r"^https?://", "", key)
    key = re.sub(r"^www\.", "", key)
    key = key.rstrip("/")
    key = re.sub(r"/(legalcode|deed\.[a-z-]+)$", "", key)
    return re.sub(r"\.html?$", "", key)


def load_license_table(path: Path = SPDX_TABLE) -> dict[str, str]:
    return {_license_key(url): spdx for url, spdx in json.loads(path.read_text()).items()}


_LICENSES = load_license_table()


def _evaluate_license(engine: OperationEngine, record: InformationRecord, params) -> tuple[str, dict]:
    key = engine.types.role_key(record, Role.LICENSE)
    url = record.first(key) if key else None
    spdx = _LICENSES.get(_license_key(url)) if url else None
    return "ok", {"license": url, "spdx_id": spdx, "recognized": spdx is not None}


def _validate_checksum(engine: OperationEngine, record: InformationRecord, params) -> tuple[str, dict]:
    key = engine.types.role_key(record, Role.CHECKSUM)
    expected = record.first(key) if key else ""
    algorithm, _, digest = expected.partition(":")
    if algorithm not in hashlib.algorithms_available or not digest:
        return "error", {"detail": f"unsupported checksum {expected!r}"}
    bits = engine.access_bit_sequence(record)
    actual = hashlib.new(algorithm, bits.data).hexdigest()
    status = "match" if actual == digest.lower() else "mismatch"
    return status, {
        "algorithm": algorithm,
        "expected": digest.lower(),
        "actual": actual,
        "location": bits.source_location,
        "length": len(bits),
    }


def related_fdos(engine: OperationEngine, record: InformationRecord) -> list[tuple[str, str]]:
    profile_keys = engine.types.profile_reference_keys()
    related = []
    for key, value in record.pairs:
        if key in profile_keys or engine.types.value_type_of(key) not in REFERENCE_TYPES:
            continue
        if value != record.pid and engine.registry.is_resolvable(value):
            related.append((key, value))
    return related


def _get_related_fdo(engine: OperationEngine, record: InformationRecord, params) -> tuple[str, dict]:
    related = related_fdos(engine, record)
    return "ok", {"related": [{"attribute_pid": k, "pid": v} for k, v in related]}


def _get_digital_resource(engine: OperationEngine, record: InformationRecord, params) -> tuple[str, dict]:
    bits = engine.access_bit_sequence(record)
    return "ok", {
        "location": bits.source_location,
        "retrieved_at": bits.retrieved_at,
        "length": len(bits),
        "content": bits.data,
    }


# STAC-specific demonstration filters. They read the bbox / datetime layout of
# STAC Collections and Items only.


def _stac_document(engine: OperationEngine, record: InformationRecord) -> dict:
    bits = engine.access_bit_sequence(record)
    try:
        return json.loads(bits.data)
    except ValueError:
        raise FetchFailed(f"{bits.source_location} is not JSON") from None


def _floats(value: Any, n: int) -> list[float]:
    if isinstance(value, str):
        value = value.split(",")
    try:
        out = [float(v) for v in value]
    except (TypeError, ValueError):
        raise InvalidParameter(f"expected {n} comma-separated numbers, got {value!r}") from None
    if len(out) != n:
        raise InvalidParameter(f"expected {n} numbers, got {len(out)}")
    return out


def _stac_bboxes(doc: dict) -> list[list[float]]:
    if "extent" in doc:
        return [list(b[:4]) if len(b) == 4 else [b[0], b[1], b[3], b[4]] for b in doc["extent"]["spatial"]["bbox"]]
    if doc.get("bbox"):
        b = doc["bbox"]
        return [list(b[:4]) if len(b) == 4 else [b[0], b[1], b[3], b[4]]]
    return [bb for f in doc.get("features", []) for bb in _stac_bboxes(f)]


def _geographic_filter(engine: OperationEngine, record: InformationRecord, params) -> tuple[str, dict]:
    doc = _stac_document(engine, record)
    boxes = _stac_bboxes(doc)
    if not boxes:
        return "error", {"detail": "no spatial extent found"}
    query = _floats(params["bbox"], 4) if params.get("bbox") is not None else None
    match = query is None or any(
        b[0] <= query[2] and query[0] <= b[2] and b[1] <= query[3] and query[1] <= b[3] for b in boxes
    )
    return "ok", {"bbox": boxes, "query": query, "match": match}


def _parse_time(text: Optional[str]) -> Optional[datetime]:
    if text is None:
        return None
    stamp = datetime.fromisoformat(re.sub(r"[Zz]$", "+00:00", text))
    return stamp if stamp.tzinfo else stamp.replace(tzinfo=timezone.utc)


def _stac_intervals(doc: dict) -> list[tuple[Optional[datetime], Optional[datetime]]]:
    if "extent" in doc:
        return [(_parse_time(a), _parse_time(b)) for a, b in doc["extent"]["temporal"]["interval"]]
    props = doc.get("properties")
    if props is not None:
        if props.get("datetime"):
            t = _parse_time(props["datetime"])
            return [(t, t)]
        return [(_parse_time(props.get("start_datetime")), _parse_time(props.get("end_datetime")))]
    return [iv for f in doc.get("features", []) for iv in _stac_intervals(f)]


def _timestamp_filter(engine: OperationEngine, record: InformationRecord, params) -> tuple[str, dict]:
    doc = _stac_document(engine, record)
    intervals = _stac_intervals(doc)
    if not intervals:
        return "error", {"detail": "no temporal extent found"}
    try:
        start, end = _parse_time(params.get("start")), _parse_time(params.get("end"))
    except (TypeError, ValueError):
        raise InvalidParameter("start and end must be RFC 3339 timestamps") from None
    match = any(
        (end is None or lo is None or lo <= end) and (start is None or hi is None or start <= hi)
        for lo, hi in intervals
    )
    return "ok", {
        "intervals": [[lo.isoformat() if lo else None, hi.isoformat() if hi else None] for lo, hi in intervals],
        "query": [params.get("start"), params.get("end")],
        "match": match,
    }


BUILTIN_NAMES = (
    "evaluate_license",
    "validate_checksum",
    "get_related_fdo",
    "get_digital_resource",
    "geographic_filter",
    "timestamp_filter",
)
STAC_SCHEMA_PREFIX = "https://schemas.stacspec.org"


def builtin_descriptors(profile: KernelInformationProfile) -> list[OperationDescriptor]:
    """The generic operations plus the STAC filters, keyed to ``profile``'s attribute PIDs."""
    by_name = {a.human_name: a.attribute_pid for a in profile.attributes}
    roles = profile.roles
    stac = AssociationCriterion(
        required_keys={roles[Role.LOCATION]},
        predicates=(
            ValuePredicate(by_name["hasSchema"], MatchKind.PREFIX, STAC_SCHEMA_PREFIX),
            ValuePredicate(roles[Role.RESOURCE_TYPE], MatchKind.EXACT, "application/json"),
        ),
    )
    return [
        OperationDescriptor(
            "evaluate_license",
            AssociationCriterion(required_keys={roles[Role.LICENSE]}),
            Target.METADATA,
            _evaluate_license,
            "report the license URL and whether it is a known SPDX license",
        ),
        OperationDescriptor(
            "validate_checksum",
            AssociationCriterion(required_keys={roles[Role.CHECKSUM]}),
            Target.BIT_SEQUENCE,
            _validate_checksum,
            "fetch the bit sequence and compare its digest with the checksum attribute",
        ),
        OperationDescriptor(
            "get_related_fdo",
            AssociationCriterion(any_keys={by_name["hasMetadata"], by_name["isMetadataFor"]}),
            Target.METADATA,
            _get_related_fdo,
            "list referenced PIDs that resolve to FDOs",
        ),
        OperationDescriptor(
            "get_digital_resource",
            AssociationCriterion(required_keys={roles[Role.LOCATION]}),
            Target.BIT_SEQUENCE,
            _get_digital_resource,
            "retrieve the bit sequence",
        ),
        OperationDescriptor("geographic_filter", stac, Target.BIT_SEQUENCE, _geographic_filter, "STAC bbox filter"),
        OperationDescriptor("timestamp_filter", stac, Target.BIT_SEQUENCE, _timestamp_filter, "STAC time filter"),
    ]


def register_builtins(engine: OperationEngine, profile: KernelInformationProfile) -> list[str]:
    return [engine.register_operation(d) for d in builtin_descriptors(profile)]
