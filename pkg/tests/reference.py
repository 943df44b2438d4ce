"""Reference values the suite checks against.

PIDs, triples and verdicts are transcribed by hand from the published
energy-research example and the comparison of external Handle records. They
are deliberately not computed from the package.
"""

HAS_METADATA = "21.T11148/d0773859091aeb451528"
IS_METADATA_FOR = "21.T11148/4fe7cde52629b61e3b82"
HELMHOLTZ_KIP = "21.T11148/b9b76f887845e32d29f7"

ENERGY = {
    "A": "21.11152/e670f510-7e00-4d3a-9b90-3bac7a7c069e",
    "B": "21.11152/6ea60288-d895-414e-80c0-26c9fdd662b2",
    "C": "21.11152/58d43ddc-5e29-4980-8675-ae579b50a1e2",
    "D": "21.11152/6858a0b5-cc60-40e9-afef-8c2dd8b35e8e",
    "E": "21.11152/3ab9f444-05f6-445e-a691-62fae4021bea",
    "F": "21.11152/365fd8cf-8e86-41b8-9d0e-b816fdd01d29",
    "G": "21.11152/041a6111-644a-4617-afb3-3c421a88e8e3",
    "H": "21.11152/f48bf4e7-3879-4216-8f64-45a060b8f658",
    "I": "21.11152/7b58b3b5-75eb-4417-ac4d-abe025e159f6",
    "J": "21.11152/ba370aa3-6422-428c-9ff7-c2ef429df603",
    "K": "21.11152/09cb76fc-b8cb-4116-a22a-68c5bdfa77b0",
    "L": "21.11152/24a55398-b96b-43dd-b0fb-cd8ce302c7ce",
    "M": "21.11152/721234ac-4b5a-4d02-9944-82a08ef2db35",
    "N": "21.11152/ebaeb5bc-0514-47c9-bcd2-98f0253843d8",
    "O": "21.11152/9854677c-77c5-4a0b-916b-57dd9ec20198",
    "P": "21.11152/cfd0fc0e-f5ea-464e-a57f-28e882924860",
    "Q": "21.11152/976fcf28-f924-4a21-b53d-5d054ad8198d",
    "R": "21.11152/37833c54-1d36-42e4-858d-831447122863",
}

PREDICATES = {"a": HAS_METADATA, "b": IS_METADATA_FOR}

TRIPLES_BY_LETTER = [
    ("A", "a", "B"), ("C", "b", "H"), ("D", "a", "K"), ("E", "a", "M"), ("F", "a", "I"),
    ("G", "a", "O"), ("J", "b", "L"), ("N", "b", "F"), ("P", "a", "J"), ("Q", "a", "J"),
    ("R", "a", "J"),
]

TRIPLES = {(ENERGY[s], PREDICATES[p], ENERGY[o]) for s, p, o in TRIPLES_BY_LETTER}

PIDINST = "21.T11998/0000-001A-3905-1"
DARIAH = "21.11113/0000-000B-CA4C-D"
DISSCO = "10.3535/G0G-G7D-N5J"

CHECKS = ["kip_instantiation", "typed_attributes", "mandatory_set", "bit_sequence_access", "pid_triples"]

COMPARISON = {
    PIDINST: dict(zip(CHECKS, ["yes", "partial", "no", "no", "partial"])),
    DARIAH: dict(zip(CHECKS, ["no", "no", "no", "no", "no"])),
    DISSCO: dict(zip(CHECKS, ["yes", "partial", "no", "no", "partial"])),
}

# Helmholtz KIP attribute PIDs as published in the public data type registry
KIP_ATTRS = {
    "kernelInformationProfile": "21.T11148/076759916209e5d62bd5",
    "digitalResourceLocation": "21.T11148/b8457812905b83046284",
    "dateCreated": "21.T11148/aafd5fb4c7222e2d950a",
    "dateModified": "21.T11148/397d831aa3a9d18eb52c",
    "license": "21.T11148/2f314c8fe5fb6a0063a8",
    "digitalResourceType": "21.T11148/1c699a5d1b4ad3ba4956",
    "checksum": "21.T11148/92e200311a56800b3e47",
    "version": "21.T11148/c692273deb2772da307f",
    "hasMetadata": HAS_METADATA,
    "isMetadataFor": IS_METADATA_FOR,
}

# name: (obligatory, repeatable, value type)
KIP_TABLE = {
    "kernelInformationProfile": (True, False, "handle-identifier-ascii"),
    "digitalResourceLocation": (True, True, "url"),
    "dateCreated": (True, False, "date-time-rfc3339"),
    "dateModified": (False, False, "date-time-rfc3339"),
    "license": (True, False, "url"),
    "digitalResourceType": (True, False, "media-type-iana"),
    "checksum": (True, False, "checksum-string"),
    "version": (False, False, "version-number"),
    "hasMetadata": (False, True, "handle-identifier-ascii"),
    "isMetadataFor": (False, True, "handle-identifier-ascii"),
    "hasSchema": (False, False, "url"),
    "topic": (False, True, "url"),
    "contact": (False, True, "url"),
    "identifier": (False, True, "string"),
    "DataCite-Language": (False, True, "language-code-iso639-1"),
}
