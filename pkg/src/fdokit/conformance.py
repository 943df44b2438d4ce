"""Five-row conformance rubric for Handle record snapshots.

Rows, in order: profile instantiation, typed attributes, mandatory set,
bit-sequence access, PID triples. Verdicts are ``yes``, ``partial`` or ``no``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Optional, Sequence

from fdokit.errors import FdoError
from fdokit.model import InformationRecord, document_extras, parse_record
from fdokit.operations import ResourceFetcher
from fdokit.registry import PidRegistry
from fdokit.typesys import REFERENCE_TYPES, KernelInformationProfile, Role, TypeRegistry, validate_value

# keys accepted as profile reference / location when a record does not use PIDs
PROFILE_REFERENCE_NAMES = frozenset({"kernelinformationprofile", "kip"})
LOCATION_NAMES = frozenset({"url", "digitalresourcelocation", "location", "loc"})


class Check(str, Enum):
    KIP_INSTANTIATION = "kip_instantiation"
    TYPED_ATTRIBUTES = "typed_attributes"
    MANDATORY_SET = "mandatory_set"
    BIT_SEQUENCE_ACCESS = "bit_sequence_access"
    PID_TRIPLES = "pid_triples"


class Verdict(str, Enum):
    YES = "yes"
    PARTIAL = "partial"
    NO = "no"


@dataclass(frozen=True)
class ConformanceRow:
    check: Check
    verdict: Verdict
    explanation: str = ""


@dataclass(frozen=True)
class ConformanceReport:
    record_pid: Optional[str]
    rows: tuple[ConformanceRow, ...]

    def __post_init__(self) -> None:
        if [r.check for r in self.rows] != list(Check):
            raise ValueError("a report has exactly the five checks in fixed order")

    @property
    def overall(self) -> bool:
        return all(r.verdict is Verdict.YES for r in self.rows)

    def verdicts(self) -> dict[str, str]:
        return {r.check.value: r.verdict.value for r in self.rows}

    def to_document(self) -> dict:
        return {
            "record_pid": self.record_pid,
            "rows": [
                {"check": r.check.value, "verdict": r.verdict.value, "explanation": r.explanation} for r in self.rows
            ],
            "overall": self.overall,
        }


class ConformanceChecker:
    """Evaluates records against the rubric.

    ``registry`` supplies the resolvable context: profile PIDs resolve through
    ``types``, FDO PIDs through ``registry`` (and its remote fallback when
    online). Landing pages are taken from snapshot annotations; with
    ``probe=True`` HTTP locations are additionally probed and ``text/html``
    responses count as landing pages.
    """

    def __init__(
        self,
        types: TypeRegistry,
        registry: PidRegistry,
        fetcher: Optional[ResourceFetcher] = None,
        probe: bool = False,
    ) -> None:
        self.types = types
        self.registry = registry
        self.fetcher = fetcher or ResourceFetcher()
        self.probe = probe

    def check_document(self, document: Any) -> ConformanceReport:
        """Lenient parse of an exchange document, then :meth:`check`."""
        record = parse_record(document, lenient=True)
        annotations = document_extras(document).get("annotations") or {}
        return self.check(record, annotations)

    def check(self, record: InformationRecord, annotations: Optional[dict] = None) -> ConformanceReport:
        if annotations is None and record.pid is not None:
            entry = self.registry.get(record.pid)
            annotations = entry.annotations if entry is not None else {}
        annotations = annotations or {}
        profile, kip_row = self._kip_row(record)
        rows = (
            kip_row,
            self._typed_row(record),
            self._mandatory_row(record, profile),
            self._access_row(record, profile, annotations),
            self._triples_row(record),
        )
        return ConformanceReport(record.pid, rows)

    # -- rows -----------------------------------------------------------------

    def _profile_pairs(self, record: InformationRecord) -> list[tuple[str, str]]:
        keys = self.types.profile_reference_keys()
        return [(k, v) for k, v in record.pairs if k in keys or k.lower() in PROFILE_REFERENCE_NAMES]

    def _kip_row(self, record: InformationRecord) -> tuple[Optional[KernelInformationProfile], ConformanceRow]:
        pairs = self._profile_pairs(record)
        check = Check.KIP_INSTANTIATION
        if not pairs:
            return None, ConformanceRow(check, Verdict.NO, "no profile reference")
        values = sorted({v for _, v in pairs})
        if len(values) > 1:
            return None, ConformanceRow(check, Verdict.NO, f"references {len(values)} profiles: {', '.join(values)}")
        profile = self.types.get_profile(values[0])
        if profile is None:
            return None, ConformanceRow(check, Verdict.PARTIAL, f"profile {values[0]} does not resolve")
        return profile, ConformanceRow(check, Verdict.YES, f"instantiates {profile.name} ({profile.profile_pid})")

    def _typed_row(self, record: InformationRecord) -> ConformanceRow:
        keys = sorted(record.keys())
        untyped = [k for k in keys if self.types.get_attribute(k) is None]
        check = Check.TYPED_ATTRIBUTES
        if not keys or len(untyped) == len(keys):
            return ConformanceRow(check, Verdict.NO, "no attribute is identified by a typed attribute PID")
        if untyped:
            return ConformanceRow(check, Verdict.PARTIAL, "untyped keys: " + ", ".join(untyped))
        return ConformanceRow(check, Verdict.YES, f"all {len(keys)} keys are typed attribute PIDs")

    def _mandatory_row(self, record: InformationRecord, profile: Optional[KernelInformationProfile]) -> ConformanceRow:
        keys = record.keys()
        missing = []
        for role in Role:
            if profile is not None:
                pid = profile.roles.get(role)
                present = pid is not None and pid in keys
            else:
                present = self.types.role_key(record, role) is not None
            if not present:
                missing.append(role.value)
        if missing:
            return ConformanceRow(Check.MANDATORY_SET, Verdict.NO, "missing roles: " + ", ".join(missing))
        return ConformanceRow(Check.MANDATORY_SET, Verdict.YES, "all six mandatory roles present")

    def _location(self, record: InformationRecord, profile: Optional[KernelInformationProfile]) -> Optional[str]:
        if profile is not None:
            pid = profile.roles.get(Role.LOCATION)
            if pid is not None and pid in record.keys():
                return pid
        key = self.types.role_key(record, Role.LOCATION)
        if key is not None:
            return key
        for k in sorted(record.keys()):
            if k.lower() in LOCATION_NAMES:
                return k
        return None

    def _access_row(
        self, record: InformationRecord, profile: Optional[KernelInformationProfile], annotations: dict
    ) -> ConformanceRow:
        check = Check.BIT_SEQUENCE_ACCESS
        key = self._location(record, profile)
        if key is None:
            return ConformanceRow(check, Verdict.NO, "digital resource location is missing")
        location = record.first(key)
        if location in set(annotations.get("landing_pages", ())) or self._probe_landing_page(location):
            return ConformanceRow(check, Verdict.NO, "provides a landing page as digital resource location")
        defn = self.types.get_attribute(key)
        if defn is None:
            return ConformanceRow(check, Verdict.NO, f"location key {key!r} is not a typed attribute")
        if not validate_value(defn.value_type, location):
            return ConformanceRow(check, Verdict.NO, f"location {location!r} is not a valid {defn.value_type.value}")
        return ConformanceRow(check, Verdict.YES, f"bit sequence at {location}")

    def _probe_landing_page(self, location: str) -> bool:
        if not self.probe:
            return False
        try:
            return self.fetcher.content_type(location) == "text/html"
        except FdoError:
            return False

    def _reference_pairs(self, record: InformationRecord) -> list[tuple[str, str]]:
        profile_keys = self.types.profile_reference_keys()
        return [
            (k, v)
            for k, v in record.pairs
            if k not in profile_keys and self.types.value_type_of(k) in REFERENCE_TYPES
        ]

    def _triples_row(self, record: InformationRecord) -> ConformanceRow:
        check = Check.PID_TRIPLES
        refs = self._reference_pairs(record)
        outgoing = sorted(
            v for k, v in refs if v != record.pid and self._is_fdo(v)
        )
        incoming = sorted(self._incoming(record.pid)) if record.pid else []
        if outgoing or incoming:
            parts = []
            if outgoing:
                parts.append("references FDOs " + ", ".join(outgoing))
            if incoming:
                parts.append("referenced by FDOs " + ", ".join(incoming))
            return ConformanceRow(check, Verdict.YES, "; ".join(parts))
        if refs:
            return ConformanceRow(check, Verdict.PARTIAL, "relates to other entities via URLs but not to other FDOs")
        return ConformanceRow(check, Verdict.NO, "no typed referencing attributes")

    def _is_fdo(self, pid: str) -> bool:
        return self.types.get_profile(pid) is None and self.registry.is_resolvable(pid)

    def _incoming(self, pid: str) -> set[str]:
        sources = set()
        for entry in self.registry.entries():
            if entry.pid == pid:
                continue
            if any(v == pid for _, v in self._reference_pairs(entry.record)):
                sources.add(entry.pid)
        return sources


def render_report(reports: ConformanceReport | Sequence[ConformanceReport], fmt: str = "table") -> str:
    """Render one or several reports as an aligned table or as JSON."""
    if isinstance(reports, ConformanceReport):
        reports = [reports]
    if fmt == "document":
        docs = [r.to_document() for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    blocks = []
    width = max(len(c.value) for c in Check)
    for report in reports:
        lines = [f"{report.record_pid or '<unregistered>'}  overall: {'yes' if report.overall else 'no'}"]
        for row in report.rows:
            lines.append(f"  {row.check.value:<{width}}  {row.verdict.value:<7}  {row.explanation}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def check_all(checker: ConformanceChecker, documents: Iterable[Any]) -> list[ConformanceReport]:
    return [checker.check_document(d) for d in documents]
