import hashlib
import json
from pathlib import Path

import httpx
import pytest

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
from fdokit.operations import (
    AssociationCriterion,
    MatchKind,
    OperationDescriptor,
    OperationEngine,
    ResourceFetcher,
    Target,
    ValuePredicate,
    register_builtins,
)
from fdokit.resources import FIXTURES, HELMHOLTZ_KIP
from reference import ENERGY, HAS_METADATA, KIP_ATTRS

GOLDEN = json.loads((Path(__file__).parent / "golden" / "associations.json").read_text())
LOCATION = KIP_ATTRS["digitalResourceLocation"]


@pytest.fixture(scope="module")
def engine(types, fixture_registry):
    engine = OperationEngine(types, fixture_registry, ResourceFetcher(FIXTURES))
    register_builtins(engine, types.profile(HELMHOLTZ_KIP))
    return engine


def record(engine, letter):
    return engine.registry.resolve(ENERGY[letter]).record


@pytest.mark.parametrize("letter", sorted(GOLDEN))
def test_association_matches_golden_file(engine, letter):
    assert [d.name for d in engine.associate(record(engine, letter))] == GOLDEN[letter]


@pytest.mark.parametrize("letter", sorted(GOLDEN))
def test_bit_sequence_operations_need_a_location(engine, letter):
    stripped = record(engine, letter).without(LOCATION)
    for d in engine.descriptors():
        if d.target is Target.BIT_SEQUENCE:
            assert not engine.applicable(d, stripped)
    with pytest.raises(MissingAccessKey):
        engine.access_bit_sequence(stripped)


def test_operations_listing_for_a_drone_image_set(engine):
    assert len(engine.associate(record(engine, "G"))) == 4


def test_checksum_match_and_mismatch(engine, tmp_path):
    a = record(engine, "A")
    assert engine.execute("validate_checksum", a).status == "match"
    payload = (FIXTURES / a.first(LOCATION).split(":", 1)[1]).read_bytes()
    (tmp_path / "payloads").mkdir()
    (tmp_path / "payloads" / Path(a.first(LOCATION)).name).write_bytes(payload[:-1] + b"\x00")
    other = OperationEngine(engine.types, engine.registry, ResourceFetcher(tmp_path))
    register_builtins(other, engine.types.profile(HELMHOLTZ_KIP))
    result = other.execute("validate_checksum", a)
    assert result.status == "mismatch"
    assert result.payload["actual"] == hashlib.sha256(payload[:-1] + b"\x00").hexdigest()


def test_evaluate_license(engine):
    result = engine.execute("evaluate_license", record(engine, "A"))
    assert result.payload["spdx_id"] == "CC-BY-4.0"
    assert result.payload["recognized"] is True
    odd = record(engine, "A").without(KIP_ATTRS["license"]).with_pairs((KIP_ATTRS["license"], "https://example.org/mine"))
    assert engine.execute("evaluate_license", odd).payload["recognized"] is False


def test_get_related_fdo(engine):
    result = engine.execute("get_related_fdo", record(engine, "A"))
    assert result.payload["related"] == [{"attribute_pid": HAS_METADATA, "pid": ENERGY["B"]}]


def test_get_digital_resource(engine):
    result = engine.execute("get_digital_resource", record(engine, "B"))
    assert result.payload["content"] == (FIXTURES / "payloads" / "annotation-file-1.json").read_bytes()
    doc = result.to_document()
    json.dumps(doc)
    assert isinstance(doc["payload"]["content"], str)


def test_geographic_filter(engine):
    j = record(engine, "J")
    assert engine.execute("geographic_filter", j, {"bbox": "8.40,49.01,8.42,49.03"}).payload["match"] is True
    assert engine.execute("geographic_filter", j, {"bbox": [0, 0, 1, 1]}).payload["match"] is False
    with pytest.raises(InvalidParameter):
        engine.execute("geographic_filter", j, {"bbox": "a,b"})


def test_timestamp_filter(engine):
    q = record(engine, "Q")
    hit = engine.execute("timestamp_filter", q, {"start": "2022-03-16T00:00:00Z", "end": "2022-03-17T00:00:00Z"})
    assert hit.payload["match"] is True
    miss = engine.execute("timestamp_filter", q, {"start": "2023-01-01T00:00:00Z"})
    assert miss.payload["match"] is False
    with pytest.raises(InvalidParameter):
        engine.execute("timestamp_filter", q, {"start": "soon"})


def test_stac_filter_not_applicable_to_images(engine):
    with pytest.raises(NotApplicable):
        engine.execute("geographic_filter", record(engine, "A"))


def test_unknown_operation(engine):
    with pytest.raises(UnknownOperation):
        engine.execute("nope", record(engine, "A"))


def test_register_custom_operation(types, fixture_registry):
    engine = OperationEngine(types, fixture_registry)
    crit = AssociationCriterion(predicates=(ValuePredicate(KIP_ATTRS["digitalResourceType"], MatchKind.PREFIX, "image/"),))
    engine.register_operation(OperationDescriptor("image_only", crit, Target.METADATA, lambda e, r, p: ("ok", {})))
    names = {letter: [d.name for d in engine.associate(fixture_registry.resolve(pid).record)] for letter, pid in ENERGY.items()}
    assert {k for k, v in names.items() if v} == set("ADEFGH")
    with pytest.raises(DuplicateOperationName):
        engine.register_operation(OperationDescriptor("image_only", crit, Target.METADATA))


@pytest.mark.parametrize(
    "criterion",
    [
        AssociationCriterion(),
        AssociationCriterion(required_keys={"21.T1/not-registered"}),
        AssociationCriterion(predicates=(ValuePredicate("21.T1/not-registered", MatchKind.EXACT, "x"),)),
    ],
)
def test_invalid_criteria(types, fixture_registry, criterion):
    engine = OperationEngine(types, fixture_registry)
    with pytest.raises(InvalidCriterion):
        engine.register_operation(OperationDescriptor("bad", criterion, Target.METADATA))


def test_value_predicates():
    key = KIP_ATTRS["digitalResourceType"]
    rec = InformationRecord(((key, "image/jpeg"), (key, "text/plain")))
    assert ValuePredicate(key, MatchKind.EXACT, "text/plain").test(rec)
    assert ValuePredicate(key, MatchKind.PREFIX, "image").test(rec)
    assert not ValuePredicate(key, MatchKind.EXACT, "image").test(rec)


# -- fetcher ----------------------------------------------------------------------


def test_fetcher_reads_absolute_and_relative_files(tmp_path):
    (tmp_path / "x.bin").write_bytes(b"abc")
    assert ResourceFetcher(tmp_path).fetch("file:x.bin") == b"abc"
    assert ResourceFetcher(None).fetch((tmp_path / "x.bin").as_uri()) == b"abc"
    with pytest.raises(FetchFailed):
        ResourceFetcher(tmp_path).fetch("file:missing.bin")
    with pytest.raises(FetchFailed):
        ResourceFetcher(tmp_path).fetch("ftp://example.org/x")


def test_fetcher_over_http():
    def handler(request):
        if request.url.path == "/landing":
            return httpx.Response(200, headers={"content-type": "text/html; charset=utf-8"}, content=b"<html/>")
        if request.url.path == "/gone":
            return httpx.Response(404)
        return httpx.Response(200, headers={"content-type": "application/octet-stream"}, content=b"\x01\x02")

    fetcher = ResourceFetcher(client=httpx.Client(transport=httpx.MockTransport(handler)))
    assert fetcher.fetch("https://data.test/blob") == b"\x01\x02"
    assert fetcher.content_type("https://data.test/landing") == "text/html"
    with pytest.raises(FetchFailed):
        fetcher.fetch("https://data.test/gone")


def test_execute_without_location_is_missing_access_key(engine):
    stripped = record(engine, "A").without(LOCATION)
    with pytest.raises(MissingAccessKey):
        engine.execute("validate_checksum", stripped)
    assert engine.execute("evaluate_license", stripped).status == "ok"


def test_association_is_monotone(engine):
    base = record(engine, "B")
    before = {d.name for d in engine.associate(base)}
    grown = base.with_pairs((HAS_METADATA, ENERGY["A"]))
    assert before <= {d.name for d in engine.associate(grown)}
