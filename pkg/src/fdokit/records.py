"""Creating, validating and registering information records."""

from __future__ import annotations

from collections import Counter
from typing import Any, Mapping, Optional, Sequence, Union

from fdokit.errors import AlreadyRegistered, ValidationFailed
from fdokit.model import (
    InformationRecord,
    ValidationOutcome,
    Violation,
    ViolationCode,
    parse_record,
    serialize_record,
)
from fdokit.registry import PidRegistry
from fdokit.typesys import REFERENCE_TYPES, KernelInformationProfile, Role, TypeRegistry, validate_value

Values = Mapping[str, Union[str, Sequence[str]]]


class RecordEngine:
    """Instantiates profiles into records and registers them under fresh PIDs."""

    def __init__(self, types: TypeRegistry, registry: PidRegistry) -> None:
        self.types = types
        self.registry = registry

    def instantiate_profile(self, profile_pid: str, values: Values) -> InformationRecord:
        """Build an unregistered record instantiating ``profile_pid``.

        The profile-reference pair is added automatically. Raises
        :class:`ValidationFailed` if any mandatory value is missing or any
        value is invalid; nothing is stored either way.
        """
        profile = self.types.profile(profile_pid)
        profile_check = self.types.validate_profile(profile)
        if not profile_check.valid:
            raise ValidationFailed(profile_check)
        ref_key = profile.roles[Role.PROFILE_REFERENCE]
        record = InformationRecord.from_mapping(values)
        if profile_pid not in record.values(ref_key):
            record = record.with_pairs((ref_key, profile_pid))
        outcome = self.validate_record(record, against=profile_pid)
        if not outcome.valid:
            raise ValidationFailed(outcome)
        return record

    def validate_record(self, record: InformationRecord, against: Optional[str] = None) -> ValidationOutcome:
        """Validate ``record`` against its own profile reference, or ``against`` if given.

        Raises :class:`~fdokit.errors.UnknownProfile` when the profile to
        validate against cannot be resolved.
        """
        violations: list[Violation] = []
        if against is not None:
            profile = self.types.profile(against)
            ref_key = profile.roles.get(Role.PROFILE_REFERENCE)
            referenced = set(record.values(ref_key)) if ref_key else set()
            if len(referenced) > 1:
                violations.append(
                    Violation(ViolationCode.MULTIPLE_PROFILES, ref_key, ", ".join(sorted(referenced)))
                )
        else:
            referenced = {v for _, v in self.types.profile_references(record)}
            if not referenced:
                violations.append(Violation(ViolationCode.NO_PROFILE, None, "record references no profile"))
                profile = None
            elif len(referenced) > 1:
                keys = sorted({k for k, _ in self.types.profile_references(record)})
                violations.append(
                    Violation(ViolationCode.MULTIPLE_PROFILES, keys[0], ", ".join(sorted(referenced)))
                )
                profile = None
            else:
                profile = self.types.profile(next(iter(referenced)))

        if profile is None:
            violations.extend(self._pair_violations(record, None))
        else:
            violations.extend(self._pair_violations(record, profile))
            violations.extend(self._repeat_violations(record, profile))
            violations.extend(self._mandatory_violations(record, profile))
        return ValidationOutcome.of(violations)

    def _pair_violations(self, record: InformationRecord, profile: Optional[KernelInformationProfile]):
        for key, value in record.pairs:
            defn = profile.attribute(key) if profile else self.types.get_attribute(key)
            if defn is None:
                if self.types.get_attribute(key) is None:
                    detail = "key is not a registered attribute PID"
                else:
                    detail = f"attribute is not part of profile {profile.profile_pid}"
                yield Violation(ViolationCode.UNKNOWN_ATTRIBUTE, key, detail)
            elif value == "":
                yield Violation(ViolationCode.EMPTY_VALUE, key, "empty value")
            elif not validate_value(defn.value_type, value):
                yield Violation(ViolationCode.TYPE_MISMATCH, key, f"{value!r} is not a valid {defn.value_type.value}")

    def _repeat_violations(self, record: InformationRecord, profile: KernelInformationProfile):
        ref_key = profile.roles.get(Role.PROFILE_REFERENCE)
        for key, n in sorted(Counter(k for k, _ in record.pairs).items()):
            defn = profile.attribute(key)
            if defn is None or defn.repeatable or n < 2:
                continue
            if key == ref_key and len(set(record.values(key))) > 1:
                continue  # reported as MultipleProfiles
            yield Violation(ViolationCode.REPEAT_VIOLATION, key, f"{defn.human_name} is not repeatable ({n} values)")

    def _mandatory_violations(self, record: InformationRecord, profile: KernelInformationProfile):
        keys = record.keys()
        for role in Role:
            pid = profile.roles.get(role)
            if pid is None:
                yield Violation(ViolationCode.MISSING_MANDATORY, None, "profile binds no attribute", role.value)
            elif pid not in keys:
                yield Violation(ViolationCode.MISSING_MANDATORY, pid, "mandatory attribute missing", role.value)
        bound = set(profile.roles.values())
        for defn in profile.attributes:
            if defn.obligatory and defn.attribute_pid not in bound and defn.attribute_pid not in keys:
                yield Violation(
                    ViolationCode.MISSING_MANDATORY, defn.attribute_pid, f"obligatory {defn.human_name} missing"
                )

    def register_record(self, record: InformationRecord) -> str:
        """Validate ``record`` and store it under a freshly minted PID."""
        if record.pid is not None:
            raise AlreadyRegistered(record.pid)
        outcome = self.validate_record(record)
        if not outcome.valid:
            raise ValidationFailed(outcome)
        return self.registry.mint_and_store(record).pid

    def referencing_pairs(self, record: InformationRecord) -> list[tuple[str, str]]:
        """Pairs whose attribute is handle- or URL-typed."""
        return [(k, v) for k, v in record.pairs if self.types.value_type_of(k) in REFERENCE_TYPES]

    def serialize(self, record: InformationRecord) -> dict:
        return serialize_record(record, self.types.is_repeatable)

    def parse(self, document: Any, **kwargs: Any) -> InformationRecord:
        return parse_record(document, **kwargs)
