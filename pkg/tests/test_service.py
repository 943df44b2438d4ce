import json
import warnings

import httpx
import pytest

from fdokit.model import InformationRecord
from fdokit.registry import EntrySource
from fdokit.resources import ENERGY as ENERGY_DIR, EXTERNAL
from fdokit.service import STATUS, create_app
from fdokit.toolkit import Toolkit
from reference import COMPARISON, DARIAH, ENERGY, KIP_ATTRS, TRIPLES

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

NO_LOCATION = "21.11152/no-location"
MISSING_PAYLOAD = "21.11152/missing-payload"


def energy_document(letter):
    return json.loads((ENERGY_DIR / (ENERGY[letter].split("/")[1] + ".json")).read_text())


def new_record_body():
    doc = energy_document("A")
    del doc["pid"]
    return doc


@pytest.fixture
def client(tmp_path):
    def refuse(request):
        raise httpx.ConnectError("refused", request=request)

    toolkit = Toolkit.create(
        storage_dir=tmp_path / "records",
        online=True,
        client=httpx.Client(transport=httpx.MockTransport(refuse)),
    )
    a = toolkit.registry.resolve(ENERGY["A"]).record
    loc = KIP_ATTRS["digitalResourceLocation"]
    toolkit.registry.add(InformationRecord(a.without(loc).pairs, NO_LOCATION), EntrySource.FIXTURE)
    toolkit.registry.add(
        InformationRecord(a.without(loc).with_pairs((loc, "file:payloads/gone.bin")).pairs, MISSING_PAYLOAD),
        EntrySource.FIXTURE,
    )
    return TestClient(create_app(toolkit))


def assert_api_error(response, status, code):
    assert response.status_code == status, response.text
    body = response.json()
    assert set(body) == {"status", "code", "detail"}
    assert body["status"] == status and body["code"] == code


def test_healthz(client):
    body = client.get("/healthz").json()
    assert body["status"] == "ok"
    assert sorted(body["fixtures"].values()) == [3, 18]


def test_create_then_resolve(client):
    created = client.post("/records", json=new_record_body())
    assert created.status_code == 201
    pid = created.json()["pid"]
    fetched = client.get(f"/records/{pid}")
    assert fetched.status_code == 200
    assert fetched.json()["pid"] == pid
    assert fetched.json()["record"] == new_record_body()["record"]


def test_creation_is_not_idempotent(client):
    first = client.post("/records", json=new_record_body()).json()["pid"]
    second = client.post("/records", json=new_record_body()).json()["pid"]
    assert first != second


def test_resolution_is_idempotent(client):
    assert client.get(f"/records/{ENERGY['A']}").json() == client.get(f"/records/{ENERGY['A']}").json()


def test_create_invalid_record_is_422(client):
    body = new_record_body()
    del body["record"][KIP_ATTRS["license"]]
    response = client.post("/records", json=body)
    assert_api_error(response, 422, "ValidationFailed")
    assert response.json()["detail"]["violations"][0]["role"] == "license"


def test_create_with_pid_is_409(client):
    assert_api_error(client.post("/records", json=energy_document("A")), 409, "AlreadyRegistered")


@pytest.mark.parametrize("body", [b"{not json", b"", b"[]", b'{"record": {}, "extra": 1}'])
def test_malformed_bodies_are_400(client, body):
    assert_api_error(client.post("/records", content=body), 400, "MalformedRecordDocument")


def test_unknown_profile_is_422(client):
    body = {"record": {KIP_ATTRS["kernelInformationProfile"]: "21.T11148/unknown"}}
    assert_api_error(client.post("/records/validate", json=body), 422, "UnknownProfile")
    assert_api_error(client.post("/records/validate?against=21.T1/none", json=body), 422, "UnknownProfile")


def test_validate_endpoint(client):
    assert client.post("/records/validate", json=energy_document("B")).json() == {"valid": True, "violations": []}
    body = new_record_body()
    del body["record"][KIP_ATTRS["checksum"]]
    outcome = client.post("/records/validate", json=body).json()
    assert outcome["valid"] is False


def test_unknown_record_offline_is_404(tmp_path):
    client = TestClient(create_app(Toolkit.create(storage_dir=tmp_path)))
    assert_api_error(client.get("/records/21.1/unknown"), 404, "NotFound")


def test_unreachable_proxy_is_502(client):
    assert_api_error(client.get("/records/21.1/unknown"), 502, "RemoteUnavailable")


def test_invalid_pid_is_400(client):
    assert_api_error(client.get("/records/21.1 x/unknown"), 400, "InvalidPidSyntax")


def test_operations_listing(client):
    ops = client.get(f"/records/{ENERGY['G']}/operations").json()
    assert [o["name"] for o in ops] == ["evaluate_license", "get_digital_resource", "get_related_fdo", "validate_checksum"]
    assert all(o["applicable"] for o in ops)


def test_operation_execution(client):
    result = client.post(f"/records/{ENERGY['A']}/operations/validate_checksum")
    assert result.status_code == 200 and result.json()["status"] == "match"
    related = client.post(f"/records/{ENERGY['P']}/operations/get_related_fdo").json()
    assert [r["pid"] for r in related["payload"]["related"]] == [ENERGY["J"]]
    hit = client.post(f"/records/{ENERGY['J']}/operations/geographic_filter", json={"bbox": [8.4, 49.0, 8.5, 49.1]})
    assert hit.json()["payload"]["match"] is True


def test_operation_errors(client):
    assert_api_error(client.post(f"/records/{ENERGY['A']}/operations/nope"), 404, "UnknownOperation")
    assert_api_error(client.post(f"/records/{ENERGY['A']}/operations/geographic_filter"), 409, "NotApplicable")
    assert_api_error(client.post(f"/records/{NO_LOCATION}/operations/validate_checksum"), 409, "MissingAccessKey")
    assert_api_error(client.post(f"/records/{MISSING_PAYLOAD}/operations/validate_checksum"), 502, "FetchFailed")
    assert_api_error(
        client.post(f"/records/{ENERGY['J']}/operations/geographic_filter", json={"bbox": "x"}), 400, "InvalidParameter"
    )
    assert_api_error(client.post(f"/records/{ENERGY['J']}/operations/geographic_filter", json=[1]), 400, "MalformedRecordDocument")


def test_graph_endpoints(client):
    graph = client.get("/graph").json()
    assert TRIPLES <= {tuple(t) for t in graph["triples"]}
    text = client.get("/graph", params={"format": "triples"}).text
    assert len(text.splitlines()) == len(graph["triples"])
    assert client.get("/graph", params={"format": "dot"}).text.startswith("digraph")
    assert_api_error(client.get("/graph", params={"format": "xml"}), 400, "BadRequest")


def test_graph_path(client):
    body = client.get("/graph/path", params={"from": ENERGY["R"], "to": ENERGY["L"]}).json()
    assert body["reachable"] is True and len(body["path"]) == 2
    assert client.get("/graph/path", params={"from": ENERGY["L"], "to": ENERGY["R"]}).json() == {
        "reachable": False,
        "path": None,
    }
    assert_api_error(client.get("/graph/path", params={"from": ENERGY["L"], "to": "21.1/x"}), 404, "UnknownNode")
    assert_api_error(client.get("/graph/path", params={"from": ENERGY["L"]}), 400, "BadRequest")


def test_conformance_endpoint(client):
    docs = {json.loads(p.read_text())["pid"]: json.loads(p.read_text()) for p in EXTERNAL.glob("*.json")}
    dariah = client.post("/conformance", json=docs[DARIAH]).json()
    assert [r["verdict"] for r in dariah["rows"]] == ["no"] * 5
    batch = client.post("/conformance", json=list(docs.values())).json()
    assert {d["record_pid"]: {r["check"]: r["verdict"] for r in d["rows"]} for d in batch} == COMPARISON
    by_pid = client.post("/conformance", json={"pids": [ENERGY["A"]]}).json()
    assert by_pid[0]["overall"] is True
    assert_api_error(client.post("/conformance", content=b"nope"), 400, "MalformedRecordDocument")
    assert_api_error(client.post("/conformance", json={"pids": ["21.1/unknown-x"]}), 502, "RemoteUnavailable")


def test_percent_encoded_suffix_with_slash(tmp_path):
    toolkit = Toolkit.create(storage_dir=tmp_path)
    a = toolkit.registry.resolve(ENERGY["A"]).record
    toolkit.registry.add(InformationRecord(a.pairs, "21.1/dir/name"), EntrySource.FIXTURE)
    client = TestClient(create_app(toolkit))
    assert client.get("/records/21.1/dir%2Fname").json()["pid"] == "21.1/dir/name"


def test_every_error_class_has_a_status():
    assert {c.code for c in STATUS} >= {
        "ValidationFailed", "NotFound", "MissingAccessKey", "RemoteUnavailable", "MalformedRecordDocument"
    }
