"""Wires the registries and engines together for the CLI and the HTTP service."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import httpx

from fdokit.conformance import ConformanceChecker
from fdokit.graph import FdoGraph, build_graph
from fdokit.operations import OperationEngine, ResourceFetcher, register_builtins
from fdokit.records import RecordEngine
from fdokit.registry import DEFAULT_PREFIX, DEFAULT_PROXY, PidRegistry
from fdokit.resources import ENERGY, EXTERNAL, FIXTURES, HELMHOLTZ_KIP, bundled_types

logger = logging.getLogger(__name__)


@dataclass
class Toolkit:
    types: object
    registry: PidRegistry
    records: RecordEngine
    operations: OperationEngine
    conformance: ConformanceChecker
    fixture_counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        fixtures: Iterable[str | Path] = (ENERGY, EXTERNAL),
        storage_dir: Optional[str | Path] = None,
        prefix: str = DEFAULT_PREFIX,
        online: bool = False,
        resource_root: Optional[str | Path] = FIXTURES,
        profile_dir: Optional[str | Path] = None,
        proxy_base: str = DEFAULT_PROXY,
        client: Optional[httpx.Client] = None,
    ) -> "Toolkit":
        extra = sorted(Path(profile_dir).glob("*.json")) if profile_dir and Path(profile_dir).is_dir() else []
        types = bundled_types(extra)
        registry = PidRegistry(
            prefix=prefix,
            storage_dir=storage_dir,
            online=online,
            proxy_base=proxy_base,
            client=client,
            repeatable=types.is_repeatable,
        )
        counts = {}
        for path in fixtures:
            counts[str(path)] = registry.load_fixture_set(path)
        fetcher = ResourceFetcher(resource_root, client=client)
        operations = OperationEngine(types, registry, fetcher)
        register_builtins(operations, types.profile(HELMHOLTZ_KIP))
        return cls(
            types=types,
            registry=registry,
            records=RecordEngine(types, registry),
            operations=operations,
            conformance=ConformanceChecker(types, registry, fetcher, probe=online),
            fixture_counts=counts,
        )

    def graph(self) -> FdoGraph:
        return build_graph(self.registry.records(), self.types)
