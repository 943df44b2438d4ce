"""Regenerate the bundled fixture set under src/fdokit/fixtures/.

Deterministic: payload bytes come from seeded generators, so re-running
produces byte-identical files. Checksums in the records are computed here
with hashlib from the bytes written to disk.
"""

from __future__ import annotations

import hashlib
import json
import random
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "src" / "fdokit" / "fixtures"

HELMHOLTZ_KIP = "21.T11148/b9b76f887845e32d29f7"


def stand_in(name: str) -> str:
    # attribute PIDs that are not reproduced in the source material
    return "21.T11148/" + hashlib.sha1(name.encode()).hexdigest()[:20]


# name, pid, obligatory, repeatable, value type, role
HELMHOLTZ_ATTRIBUTES = [
    ("kernelInformationProfile", "21.T11148/076759916209e5d62bd5", True, False, "handle-identifier-ascii", "profile_reference"),
    ("digitalResourceLocation", "21.T11148/b8457812905b83046284", True, True, "url", "digital_resource_location"),
    ("dateCreated", "21.T11148/aafd5fb4c7222e2d950a", True, False, "date-time-rfc3339", "creation_date"),
    ("dateModified", "21.T11148/397d831aa3a9d18eb52c", False, False, "date-time-rfc3339", None),
    ("license", "21.T11148/2f314c8fe5fb6a0063a8", True, False, "url", "license"),
    ("digitalResourceType", "21.T11148/1c699a5d1b4ad3ba4956", True, False, "media-type-iana", "digital_resource_type"),
    ("checksum", "21.T11148/92e200311a56800b3e47", True, False, "checksum-string", "checksum"),
    ("version", "21.T11148/c692273deb2772da307f", False, False, "version-number", None),
    ("hasMetadata", "21.T11148/d0773859091aeb451528", False, True, "handle-identifier-ascii", None),
    ("isMetadataFor", "21.T11148/4fe7cde52629b61e3b82", False, True, "handle-identifier-ascii", None),
    ("hasSchema", stand_in("hasSchema"), False, False, "url", None),
    ("topic", stand_in("topic"), False, True, "url", None),
    ("contact", stand_in("contact"), False, True, "url", None),
    ("identifier", stand_in("identifier"), False, True, "string", None),
    ("DataCite-Language", stand_in("DataCite-Language"), False, True, "language-code-iso639-1", None),
]
A = {name: pid for name, pid, *_ in HELMHOLTZ_ATTRIBUTES}


def profile_doc(pid, name, attributes):
    return {
        "profile_pid": pid,
        "name": name,
        "attributes": [
            {"pid": p, "name": n, "valueType": t, "obligatory": o, "repeatable": r}
            for n, p, o, r, t, _ in attributes
        ],
        "roles": {role: p for n, p, o, r, t, role in attributes if role},
    }


# -- energy research use case --------------------------------------------------

NODES = {
    "A": ("e670f510-7e00-4d3a-9b90-3bac7a7c069e", "drone image set 1"),
    "B": ("6ea60288-d895-414e-80c0-26c9fdd662b2", "annotation file 1"),
    "C": ("58d43ddc-5e29-4980-8675-ae579b50a1e2", "annotation file 2"),
    "D": ("6858a0b5-cc60-40e9-afef-8c2dd8b35e8e", "drone image set 2"),
    "E": ("3ab9f444-05f6-445e-a691-62fae4021bea", "drone image set 3"),
    "F": ("365fd8cf-8e86-41b8-9d0e-b816fdd01d29", "drone image set 4"),
    "G": ("041a6111-644a-4617-afb3-3c421a88e8e3", "drone image set 5"),
    "H": ("f48bf4e7-3879-4216-8f64-45a060b8f658", "drone image set 6"),
    "I": ("7b58b3b5-75eb-4417-ac4d-abe025e159f6", "frictionless data standard file"),
    "J": ("ba370aa3-6422-428c-9ff7-c2ef429df603", "STAC collection file"),
    "K": ("09cb76fc-b8cb-4116-a22a-68c5bdfa77b0", "STAC feature file 1"),
    "L": ("24a55398-b96b-43dd-b0fb-cd8ce302c7ce", "STAC feature file 2"),
    "M": ("721234ac-4b5a-4d02-9944-82a08ef2db35", "STAC feature file 3"),
    "N": ("ebaeb5bc-0514-47c9-bcd2-98f0253843d8", "STAC feature file 4"),
    "O": ("9854677c-77c5-4a0b-916b-57dd9ec20198", "STAC feature file 5"),
    "P": ("cfd0fc0e-f5ea-464e-a57f-28e882924860", "STAC feature file 6"),
    "Q": ("976fcf28-f924-4a21-b53d-5d054ad8198d", "STAC camera file 1"),
    "R": ("37833c54-1d36-42e4-858d-831447122863", "STAC camera file 2"),
}
TRIPLES = [
    ("A", "hasMetadata", "B"), ("C", "isMetadataFor", "H"), ("D", "hasMetadata", "K"),
    ("E", "hasMetadata", "M"), ("F", "hasMetadata", "I"), ("G", "hasMetadata", "O"),
    ("J", "isMetadataFor", "L"), ("N", "isMetadataFor", "F"), ("P", "hasMetadata", "J"),
    ("Q", "hasMetadata", "J"), ("R", "hasMetadata", "J"),
]

STAC_COLLECTION_SCHEMA = "https://schemas.stacspec.org/v1.0.0/collection-spec/json-schema/collection.json"
STAC_ITEM_SCHEMA = "https://schemas.stacspec.org/v1.0.0/item-spec/json-schema/item.json"
FRICTIONLESS_SCHEMA = "https://specs.frictionlessdata.io/schemas/data-package.json"
LICENSE = "https://creativecommons.org/licenses/by/4.0/"


def pid(node: str) -> str:
    return f"21.11152/{NODES[node][0]}"


def stac_item(node: str, idx: int) -> dict:
    west = 8.38 + 0.006 * idx
    south = 49.00 + 0.004 * idx
    return {
        "type": "Feature",
        "stac_version": "1.0.0",
        "id": f"thermal-rooftops-{node.lower()}",
        "bbox": [round(west, 4), round(south, 4), round(west + 0.005, 4), round(south + 0.003, 4)],
        "geometry": None,
        "properties": {"datetime": f"2022-03-{10 + idx:02d}T11:30:00Z"},
        "links": [],
        "assets": {},
    }


def payload_for(node: str, label: str) -> tuple[str, bytes, str]:
    """Return (filename, bytes, media type)."""
    stem = label.replace(" ", "-").lower()
    if label.startswith("drone image set"):
        size = 1 << 20 if node == "A" else 8192
        data = random.Random(f"drone-{node}").randbytes(size)
        return f"{stem}.bin", data, "image/jpeg"
    if label.startswith("annotation"):
        doc = {"info": {"description": label}, "images": [], "annotations": [], "categories": [{"id": 1, "name": "thermal bridge"}]}
    elif label.startswith("frictionless"):
        doc = {"name": "thermal-bridges-rooftops", "resources": [{"name": "annotations", "path": "annotations.json"}]}
    elif label == "STAC collection file":
        doc = {
            "type": "Collection",
            "stac_version": "1.0.0",
            "id": "thermal-bridges-rooftops",
            "description": "Drone thermal imagery of building rooftops",
            "license": "CC-BY-4.0",
            "extent": {
                "spatial": {"bbox": [[8.38, 49.0, 8.43, 49.04]]},
                "temporal": {"interval": [["2022-03-01T00:00:00Z", "2022-03-31T23:59:59Z"]]},
            },
            "links": [],
        }
    else:
        doc = stac_item(node, "KLMNOPQR".index(node))
    data = (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()
    return f"{stem}.json", data, "application/json"


def energy_records(out: Path, payload_dir: Path) -> None:
    for i, (node, (suffix, label)) in enumerate(sorted(NODES.items())):
        filename, data, media = payload_for(node, label)
        (payload_dir / filename).write_bytes(data)
        record: dict[str, object] = {
            A["kernelInformationProfile"]: HELMHOLTZ_KIP,
            A["digitalResourceLocation"]: [f"file:payloads/{filename}"],
            A["dateCreated"]: f"2022-08-25T{9 + i // 6:02d}:{(i * 7) % 60:02d}:00+02:00",
            A["license"]: LICENSE,
            A["digitalResourceType"]: media,
            A["checksum"]: "sha256:" + hashlib.sha256(data).hexdigest(),
            A["identifier"]: ["10.5281/zenodo.7022736"],
        }
        if label.startswith("STAC"):
            record[A["hasSchema"]] = STAC_COLLECTION_SCHEMA if node == "J" else STAC_ITEM_SCHEMA
        if label.startswith("frictionless"):
            record[A["hasSchema"]] = FRICTIONLESS_SCHEMA
        if media == "application/json":
            record[A["DataCite-Language"]] = ["en"]
        if label.startswith("drone"):
            record[A["topic"]] = ["https://www.wikidata.org/wiki/Q1152213"]
            record[A["version"]] = "1.0.0"
        for sub, pred, obj in TRIPLES:
            if sub == node:
                record.setdefault(A[pred], []).append(pid(obj))
        doc = {"pid": pid(node), "record": record}
        (out / f"{suffix}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# -- external snapshots ------------------------------------------------------------

PIDINST_ATTRIBUTES = [
    ("LandingPage", stand_in("pidinst/LandingPage"), True, False, "url", "digital_resource_location"),
    ("Name", stand_in("pidinst/Name"), True, False, "string", None),
    ("Owner", stand_in("pidinst/Owner"), True, True, "url", None),
    ("Manufacturer", stand_in("pidinst/Manufacturer"), True, True, "url", None),
    ("Model", stand_in("pidinst/Model"), False, False, "string", None),
    ("Description", stand_in("pidinst/Description"), False, False, "string", None),
    ("InstrumentType", stand_in("pidinst/InstrumentType"), False, True, "url", None),
    ("Date", stand_in("pidinst/Date"), False, True, "date-time-rfc3339", "creation_date"),
]
PIDINST_KIP = stand_in("pidinst/profile")

DISSCO_ATTRIBUTES = [
    ("digitalObjectType", stand_in("dissco/digitalObjectType"), True, False, "handle-identifier-ascii", "profile_reference"),
    ("specimenHost", stand_in("dissco/specimenHost"), True, False, "url", None),
    ("issueDate", stand_in("dissco/issueDate"), True, False, "date-time-rfc3339", "creation_date"),
    ("referentName", stand_in("dissco/referentName"), False, False, "string", None),
]
DISSCO_KIP = stand_in("dissco/profile")


def external_snapshots(out: Path) -> None:
    P = {n: p for n, p, *_ in PIDINST_ATTRIBUTES}
    pidinst = {
        "pid": "21.T11998/0000-001A-3905-1",
        "record": {
            "KernelInformationProfile": PIDINST_KIP,
            P["LandingPage"]: "https://linkedsystems.uk/system/instance/TOB1_SN0000/",
            P["Name"]: "Triaxus towed undulating vehicle",
            P["Owner"]: ["https://ror.org/05n5yq652"],
            P["Manufacturer"]: ["https://www.macartney.com/"],
            P["Model"]: "Triaxus",
            P["Description"]: "Towed undulating instrument platform",
            P["InstrumentType"]: ["http://vocab.nerc.ac.uk/collection/L22/current/TOOL1458/"],
            P["Date"]: ["2008-01-01T00:00:00Z"],
        },
        "annotations": {
            "context": "PIDINST",
            "landing_pages": ["https://linkedsystems.uk/system/instance/TOB1_SN0000/"],
            "note": "reconstructed offline snapshot; KIP reference carried under a human-readable key",
        },
    }
    dariah = {
        "pid": "21.11113/0000-000B-CA4C-D",
        "record": {
            "URL": "https://repository.de.dariah.eu/1.0/dhcrud/21.11113/0000-000B-CA4C-D",
            "CREATOR": "DARIAH-DE repository user",
            "PUBDATE": "2019-03-14T09:21:42.315",
            "FILESIZE": "7329",
            "CHECKSUM": "md5:4a55c2b4ebcafa04e7b54e4b8a0a0a5c",
            "METADATA": "https://repository.de.dariah.eu/1.0/dhcrud/21.11113/0000-000B-CA4C-D/metadata",
            "RESPONSIBLE": "DARIAH-DE",
        },
        "annotations": {
            "context": "DARIAH",
            "note": "reconstructed offline snapshot; legacy repository record without KIP",
        },
    }
    D = {n: p for n, p, *_ in DISSCO_ATTRIBUTES}
    dissco = {
        "pid": "10.3535/G0G-G7D-N5J",
        "record": {
            D["digitalObjectType"]: DISSCO_KIP,
            D["specimenHost"]: "https://ror.org/0349vqz63",
            "pidIssuer": "https://ror.org/04wxnsj81",
            "issueDate": "2023-04-18T10:44:24.121Z",
            "referentName": "Dermestes lardarius",
            "primarySpecimenObjectId": "https://data.nhm.ac.uk/object/31a84c94",
            "specimenHostName": "Natural History Museum",
            "topicDiscipline": "Zoology",
            "livingOrPreserved": "Preserved",
            "pidStatus": "TEST",
        },
        "annotations": {
            "context": "DiSSCo",
            "note": "reconstructed offline snapshot; most attributes keyed by name, no resource location",
        },
    }
    for doc in (pidinst, dariah, dissco):
        suffix = doc["pid"].split("/", 1)[1]
        (out / f"{suffix}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main() -> None:
    if ROOT.exists():
        shutil.rmtree(ROOT)
    for sub in ("profiles", "energy", "external", "payloads"):
        (ROOT / sub).mkdir(parents=True)
    (ROOT / "profiles" / "helmholtz-kip.json").write_text(
        json.dumps(profile_doc(HELMHOLTZ_KIP, "Helmholtz KIP", HELMHOLTZ_ATTRIBUTES), indent=2) + "\n"
    )
    (ROOT / "profiles" / "pidinst-kip.json").write_text(
        json.dumps(profile_doc(PIDINST_KIP, "PIDINST instrument profile", PIDINST_ATTRIBUTES), indent=2) + "\n"
    )
    (ROOT / "profiles" / "dissco-kip.json").write_text(
        json.dumps(profile_doc(DISSCO_KIP, "DiSSCo digital specimen profile", DISSCO_ATTRIBUTES), indent=2) + "\n"
    )
    energy_records(ROOT / "energy", ROOT / "payloads")
    external_snapshots(ROOT / "external")


if __name__ == "__main__":
    main()
