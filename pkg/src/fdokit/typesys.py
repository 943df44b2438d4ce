"""Typed attributes, value types and Kernel Information Profiles.

The :class:`TypeRegistry` acts as a local Data Type Registry. Attribute and
profile definitions are immutable once registered; registering identical
content again is a no-op, registering different content under a known PID
raises :class:`~fdokit.errors.DuplicatePidConflict`.
"""

from __future__ import annotations

import calendar
import json
import re
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Mapping, Optional

from fdokit.errors import (
    DuplicatePidConflict,
    InvalidPidSyntax,
    MalformedSnapshot,
    UnknownAttributePid,
    UnknownProfile,
    UnknownValueType,
)
from fdokit.model import InformationRecord, ValidationOutcome, Violation, ViolationCode
from fdokit.pid import is_pid


class ValueType(str, Enum):
    HANDLE = "handle-identifier-ascii"
    URL = "url"
    DATE_TIME = "date-time-rfc3339"
    MEDIA_TYPE = "media-type-iana"
    CHECKSUM = "checksum-string"
    VERSION = "version-number"
    LANGUAGE = "language-code-iso639-1"
    STRING = "string"

    @classmethod
    def parse(cls, name: str) -> "ValueType":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise UnknownValueType(f"unknown value type {name!r}") from None


REFERENCE_TYPES = frozenset({ValueType.HANDLE, ValueType.URL})


class Role(str, Enum):
    """The six mandatory kernel information roles."""

    PROFILE_REFERENCE = "profile_reference"
    LICENSE = "license"
    CHECKSUM = "checksum"
    LOCATION = "digital_resource_location"
    CREATION_DATE = "creation_date"
    RESOURCE_TYPE = "digital_resource_type"


# used to bind roles when a snapshot carries no explicit role map
ROLE_NAMES = {
    "kernelinformationprofile": Role.PROFILE_REFERENCE,
    "license": Role.LICENSE,
    "checksum": Role.CHECKSUM,
    "digitalresourcelocation": Role.LOCATION,
    "datecreated": Role.CREATION_DATE,
    "digitalresourcetype": Role.RESOURCE_TYPE,
}


# -- value validation -------------------------------------------------------

_URI_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*")
_URI_BODY = re.compile(r"(?:[A-Za-z0-9\-._~:/?#\[\]@!$&'()*+,;=]|%[0-9A-Fa-f]{2})+")
_AUTHORITY_SCHEMES = {"http", "https", "ftp", "ftps", "ws", "wss"}

_DATE_TIME = re.compile(
    r"(\d{4})-(\d{2})-(\d{2})[Tt](\d{2}):(\d{2}):(\d{2})(?:\.\d+)?"
    r"(?:[Zz]|[+-](\d{2}):(\d{2}))",
    re.ASCII,
)

_RESTRICTED_NAME = r"[A-Za-z0-9][A-Za-z0-9!#$&\-^_.+]{0,126}"
_TOKEN = r"[!#$%&'*+\-.^_`|~0-9A-Za-z]+"
_QUOTED = r'"(?:[^"\\\x00-\x1f\x7f]|\\[\x20-\x7e])*"'
_MEDIA_TYPE = re.compile(
    rf"{_RESTRICTED_NAME}/{_RESTRICTED_NAME}"
    rf"(?:[ \t]*;[ \t]*{_TOKEN}=(?:{_TOKEN}|{_QUOTED}))*"
)

DIGEST_HEX_LENGTHS = {"md5": 32, "sha1": 40, "sha256": 64, "sha512": 128}
_CHECKSUM = re.compile(r"(md5|sha1|sha256|sha512):([0-9A-Fa-f]+)")
_VERSION = re.compile(r"\d+(?:\.\d+){0,3}", re.ASCII)
_LANGUAGE = re.compile(r"[a-z]{2}")


def _is_url(value: str) -> bool:
    scheme, sep, rest = value.partition(":")
    if not sep or not _URI_SCHEME.fullmatch(scheme) or not rest:
        return False
    if not _URI_BODY.fullmatch(rest):
        return False
    if scheme.lower() in _AUTHORITY_SCHEMES:
        if not rest.startswith("//"):
            return False
        authority = re.split(r"[/?#]", rest[2:], maxsplit=1)[0]
        host = authority.rpartition("@")[2]
        if not host or host.startswith(":"):
            return False
    return True


def _is_date_time(value: str) -> bool:
    m = _DATE_TIME.fullmatch(value)
    if not m:
        return False
    year, month, day, hour, minute, second = (int(g) for g in m.groups()[:6])
    if not 1 <= month <= 12:
        return False
    if not 1 <= day <= calendar.monthrange(year, month)[1]:
        return False
    if hour > 23 or minute > 59 or second > 60:
        return False
    off_h, off_m = m.group(7), m.group(8)
    if off_h is not None and (int(off_h) > 23 or int(off_m) > 59):
        return False
    return True


def _is_checksum(value: str) -> bool:
    m = _CHECKSUM.fullmatch(value)
    return bool(m) and len(m.group(2)) == DIGEST_HEX_LENGTHS[m.group(1)]


_VALIDATORS: Dict[ValueType, Callable[[str], bool]] = {
    ValueType.HANDLE: is_pid,
    ValueType.URL: _is_url,
    ValueType.DATE_TIME: _is_date_time,
    ValueType.MEDIA_TYPE: lambda v: bool(_MEDIA_TYPE.fullmatch(v)),
    ValueType.CHECKSUM: _is_checksum,
    ValueType.VERSION: lambda v: bool(_VERSION.fullmatch(v)),
    ValueType.LANGUAGE: lambda v: bool(_LANGUAGE.fullmatch(v)),
    ValueType.STRING: lambda v: True,
}


def validate_value(value_type: ValueType | str, value: str) -> bool:
    """Check ``value`` against the syntactic rule of ``value_type``.

    Total and deterministic; the empty string and non-strings are never valid.
    """
    if not isinstance(value, str) or value == "":
        return False
    return _VALIDATORS[ValueType.parse(value_type)](value)


# -- definitions ------------------------------------------------------------


@dataclass(frozen=True)
class TypedAttributeDefinition:
    attribute_pid: str
    human_name: str
    value_type: ValueType
    obligatory: bool = False
    repeatable: bool = False

    def __post_init__(self) -> None:
        if not is_pid(self.attribute_pid):
            raise InvalidPidSyntax(f"attribute PID {self.attribute_pid!r} is not a handle")
        if not self.human_name:
            raise ValueError("human_name must be non-empty")
        object.__setattr__(self, "value_type", ValueType.parse(self.value_type))

    @property
    def is_reference(self) -> bool:
        return self.value_type in REFERENCE_TYPES


@dataclass(frozen=True)
class KernelInformationProfile:
    profile_pid: str
    name: str
    attributes: tuple[TypedAttributeDefinition, ...]
    roles: Optional[Mapping[Role, str]] = None  # inferred from attribute names when omitted

    def __post_init__(self) -> None:
        if not is_pid(self.profile_pid):
            raise InvalidPidSyntax(f"profile PID {self.profile_pid!r} is not a handle")
        object.__setattr__(self, "attributes", tuple(self.attributes))
        pids = [a.attribute_pid for a in self.attributes]
        if len(set(pids)) != len(pids):
            raise ValueError(f"profile {self.profile_pid} repeats an attribute PID")
        raw = infer_roles(self.attributes) if self.roles is None else self.roles
        roles = {Role(r): p for r, p in dict(raw).items()}
        if len(set(roles.values())) != len(roles):
            raise ValueError(f"profile {self.profile_pid}: one attribute bound to several roles")
        object.__setattr__(self, "roles", roles)

    def __hash__(self) -> int:
        return hash((self.profile_pid, self.name, self.attributes, tuple(sorted(self.roles.items()))))

    def attribute(self, pid: str) -> Optional[TypedAttributeDefinition]:
        for a in self.attributes:
            if a.attribute_pid == pid:
                return a
        return None

    def attribute_pids(self) -> frozenset[str]:
        return frozenset(a.attribute_pid for a in self.attributes)

    def role_of(self, attribute_pid: str) -> Optional[Role]:
        for role, pid in self.roles.items():
            if pid == attribute_pid:
                return role
        return None


def infer_roles(attributes: Iterable[TypedAttributeDefinition]) -> dict[Role, str]:
    """Bind mandatory roles by the attributes' display names."""
    roles: dict[Role, str] = {}
    for a in attributes:
        role = ROLE_NAMES.get(a.human_name.lower())
        if role is not None and role not in roles:
            roles[role] = a.attribute_pid
    return roles


# -- snapshots --------------------------------------------------------------


def parse_profile_snapshot(document: Any) -> KernelInformationProfile:
    """Build a profile from a snapshot document without registering it."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except ValueError as exc:
            raise MalformedSnapshot(f"not JSON: {exc}") from None
    if not isinstance(document, dict):
        raise MalformedSnapshot("snapshot must be an object")
    for key in ("profile_pid", "name", "attributes"):
        if key not in document:
            raise MalformedSnapshot(f"missing field {key!r}")
    entries = document["attributes"]
    if not isinstance(entries, list) or not entries:
        raise MalformedSnapshot("attribute list must be a non-empty array")
    attributes = []
    try:
        for entry in entries:
            attributes.append(
                TypedAttributeDefinition(
                    attribute_pid=entry["pid"],
                    human_name=entry["name"],
                    value_type=entry["valueType"],
                    obligatory=bool(entry.get("obligatory", False)),
                    repeatable=bool(entry.get("repeatable", False)),
                )
            )
    except (KeyError, TypeError, ValueError, InvalidPidSyntax, UnknownValueType) as exc:
        raise MalformedSnapshot(f"bad attribute entry: {exc}") from None
    if len({a.attribute_pid for a in attributes}) != len(attributes):
        raise MalformedSnapshot("duplicate attribute PIDs")
    raw_roles = document.get("roles")
    try:
        roles = {Role(k): v for k, v in raw_roles.items()} if raw_roles else infer_roles(attributes)
        return KernelInformationProfile(
            profile_pid=document["profile_pid"],
            name=document["name"],
            attributes=tuple(attributes),
            roles=roles,
        )
    except (ValueError, AttributeError, InvalidPidSyntax) as exc:
        raise MalformedSnapshot(str(exc)) from None


def export_profile_snapshot(profile: KernelInformationProfile) -> dict:
    return {
        "profile_pid": profile.profile_pid,
        "name": profile.name,
        "attributes": [
            {
                "pid": a.attribute_pid,
                "name": a.human_name,
                "valueType": a.value_type.value,
                "obligatory": a.obligatory,
                "repeatable": a.repeatable,
            }
            for a in profile.attributes
        ],
        "roles": {role.value: pid for role, pid in profile.roles.items()},
    }


# -- registry ---------------------------------------------------------------


class TypeRegistry:
    """Thread-safe store of attribute and profile definitions."""

    def __init__(self) -> None:
        self._attributes: dict[str, TypedAttributeDefinition] = {}
        self._profiles: dict[str, KernelInformationProfile] = {}
        self._lock = threading.Lock()

    def register_attribute(self, defn: TypedAttributeDefinition) -> str:
        with self._lock:
            self._check_attribute(defn)
            self._attributes[defn.attribute_pid] = defn
        return defn.attribute_pid

    def _check_attribute(self, defn: TypedAttributeDefinition) -> None:
        known = self._attributes.get(defn.attribute_pid)
        if known is not None and known != defn:
            raise DuplicatePidConflict(f"attribute {defn.attribute_pid} already registered differently")
        if defn.attribute_pid in self._profiles:
            raise DuplicatePidConflict(f"{defn.attribute_pid} is registered as a profile")

    def register_profile(self, profile: KernelInformationProfile) -> str:
        """Register ``profile`` and all of its member attributes atomically."""
        with self._lock:
            known = self._profiles.get(profile.profile_pid)
            if known is not None and known != profile:
                raise DuplicatePidConflict(f"profile {profile.profile_pid} already registered differently")
            if profile.profile_pid in self._attributes:
                raise DuplicatePidConflict(f"{profile.profile_pid} is registered as an attribute")
            for defn in profile.attributes:
                self._check_attribute(defn)
            for defn in profile.attributes:
                self._attributes[defn.attribute_pid] = defn
            self._profiles[profile.profile_pid] = profile
        return profile.profile_pid

    def import_profile_snapshot(self, document: Any) -> KernelInformationProfile:
        profile = parse_profile_snapshot(document)
        self.register_profile(profile)
        return profile

    def load_profile_file(self, path: str | Path) -> KernelInformationProfile:
        return self.import_profile_snapshot(Path(path).read_text(encoding="utf-8"))

    def get_attribute(self, pid: str) -> Optional[TypedAttributeDefinition]:
        return self._attributes.get(pid)

    def attribute(self, pid: str) -> TypedAttributeDefinition:
        try:
            return self._attributes[pid]
        except KeyError:
            raise UnknownAttributePid(pid) from None

    def get_profile(self, pid: str) -> Optional[KernelInformationProfile]:
        return self._profiles.get(pid)

    def profile(self, pid: str) -> KernelInformationProfile:
        try:
            return self._profiles[pid]
        except KeyError:
            raise UnknownProfile(pid) from None

    def profiles(self) -> list[KernelInformationProfile]:
        return sorted(self._profiles.values(), key=lambda p: p.profile_pid)

    def attributes(self) -> list[TypedAttributeDefinition]:
        return sorted(self._attributes.values(), key=lambda a: a.attribute_pid)

    def validate_profile(
        self,
        profile: KernelInformationProfile,
        roles: Optional[Mapping[Role, str]] = None,
    ) -> ValidationOutcome:
        """Check that ``profile`` covers every mandatory role with an obligatory attribute."""
        roles = profile.roles if roles is None else {Role(r): p for r, p in roles.items()}
        if len(set(roles.values())) != len(roles):
            raise ValueError("role map is not injective")
        for defn in profile.attributes:
            if defn.attribute_pid not in self._attributes:
                raise UnknownAttributePid(defn.attribute_pid)
        violations = []
        for role in Role:
            pid = roles.get(role)
            defn = profile.attribute(pid) if pid else None
            if defn is None:
                detail = "role not bound" if pid is None else "bound attribute not in profile"
                violations.append(Violation(ViolationCode.MISSING_MANDATORY, pid, detail, role.value))
            elif not defn.obligatory:
                violations.append(
                    Violation(ViolationCode.MISSING_MANDATORY, pid, "bound attribute is optional", role.value)
                )
            elif role is Role.PROFILE_REFERENCE and defn.repeatable:
                violations.append(
                    Violation(ViolationCode.REPEAT_VIOLATION, pid, "profile reference must not repeat", role.value)
                )
        return ValidationOutcome.of(violations)

    # record helpers

    def profile_reference_keys(self) -> frozenset[str]:
        """Attribute PIDs that act as profile reference in any known profile."""
        return frozenset(
            p.roles[Role.PROFILE_REFERENCE] for p in self._profiles.values() if Role.PROFILE_REFERENCE in p.roles
        )

    def profile_references(self, record: InformationRecord) -> list[tuple[str, str]]:
        keys = self.profile_reference_keys()
        return [(k, v) for k, v in record.pairs if k in keys]

    def profile_of(self, record: InformationRecord) -> Optional[KernelInformationProfile]:
        """The single profile a record references, or None if absent/ambiguous/unknown."""
        values = {v for _, v in self.profile_references(record)}
        if len(values) != 1:
            return None
        return self._profiles.get(values.pop())

    def role_key(self, record: InformationRecord, role: Role) -> Optional[str]:
        """Attribute PID fulfilling ``role`` for this record, if it carries one."""
        profile = self.profile_of(record)
        if profile is not None:
            pid = profile.roles.get(role)
            return pid if pid is not None and pid in record.keys() else None
        keys = record.keys()
        for p in self.profiles():
            pid = p.roles.get(role)
            if pid is not None and pid in keys:
                return pid
        return None

    def value_type_of(self, attribute_pid: str) -> Optional[ValueType]:
        defn = self._attributes.get(attribute_pid)
        return defn.value_type if defn else None

    def is_repeatable(self, attribute_pid: str) -> bool:
        defn = self._attributes.get(attribute_pid)
        return bool(defn and defn.repeatable)
