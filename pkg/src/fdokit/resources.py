"""Locations of bundled data and loaders for the default environment."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from fdokit.registry import PidRegistry
from fdokit.typesys import TypeRegistry

PACKAGE_DIR = Path(__file__).resolve().parent
FIXTURES = PACKAGE_DIR / "fixtures"
PROFILES = FIXTURES / "profiles"
ENERGY = FIXTURES / "energy"
EXTERNAL = FIXTURES / "external"
PAYLOADS = FIXTURES / "payloads"
SPDX_TABLE = PACKAGE_DIR / "data" / "spdx_licenses.json"

HELMHOLTZ_KIP = "21.T11148/b9b76f887845e32d29f7"
HAS_METADATA = "21.T11148/d0773859091aeb451528"
IS_METADATA_FOR = "21.T11148/4fe7cde52629b61e3b82"


def bundled_types(extra_profiles: Iterable[Path] = ()) -> TypeRegistry:
    """A type registry holding every bundled profile snapshot."""
    types = TypeRegistry()
    for path in sorted(PROFILES.glob("*.json")):
        types.load_profile_file(path)
    for path in extra_profiles:
        types.load_profile_file(path)
    return types


def bundled_registry(sets: Iterable[Path] = (ENERGY, EXTERNAL), **kwargs) -> PidRegistry:
    registry = PidRegistry(**kwargs)
    for path in sets:
        registry.load_fixture_set(path)
    return registry
