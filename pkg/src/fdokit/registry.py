"""PID minting, storage and resolution.

Offline-first: entries come from local registrations and from fixture
snapshots on disk. With ``online=True`` unknown PIDs fall back to a Handle
proxy (``GET <proxy>/api/handles/<pid>``).
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional
from urllib.parse import quote

import httpx

from fdokit.errors import (
    FdoError,
    ImmutableEntry,
    MalformedRecordDocument,
    NotFound,
    RemoteUnavailable,
)
from fdokit.model import InformationRecord, document_extras, dumps, parse_record, serialize_record
from fdokit.pid import PREFIX_RE, PidLike, canonical

logger = logging.getLogger(__name__)

DEFAULT_PREFIX = "21.11152.test"
DEFAULT_PROXY = "https://hdl.handle.net"


class EntrySource(str, Enum):
    LOCAL = "local"
    FIXTURE = "fixture"
    REMOTE = "remote"


@dataclass(frozen=True)
class RegistryEntry:
    pid: str
    record: InformationRecord
    created_at: datetime
    source: EntrySource
    annotations: dict = field(default_factory=dict, compare=False, hash=False)


class PidRegistry:
    """Thread-safe PID store.

    Args:
        prefix: handle prefix used for minted PIDs.
        storage_dir: if given, locally registered records are persisted there
            (one JSON exchange document per record) and reloaded on startup.
        online: allow resolution through the Handle proxy.
        proxy_base: base URL of the Handle proxy.
        client: optional ``httpx.Client`` (tests inject a mock transport).
        repeatable: key predicate used when serializing records to disk.
    """

    def __init__(
        self,
        prefix: str = DEFAULT_PREFIX,
        storage_dir: Optional[str | Path] = None,
        online: bool = False,
        proxy_base: str = DEFAULT_PROXY,
        client: Optional[httpx.Client] = None,
        repeatable: Optional[Callable[[str], bool]] = None,
    ) -> None:
        if not PREFIX_RE.fullmatch(prefix):
            raise ValueError(f"invalid handle prefix {prefix!r}")
        self.prefix = prefix
        self.online = online
        self.proxy_base = proxy_base.rstrip("/")
        self.storage_dir = Path(storage_dir) if storage_dir else None
        self._client = client
        self._repeatable = repeatable
        self._entries: dict[str, RegistryEntry] = {}
        self._issued: set[str] = set()
        self._lock = threading.RLock()
        self._remote_cache: dict[str, dict] = {}
        self.remote_requests = 0
        self.cache_hits = 0
        if self.storage_dir is not None:
            self._load_storage()

    # -- minting and storing ----------------------------------------------------

    def mint_pid(self) -> str:
        with self._lock:
            while True:
                pid = f"{self.prefix}/{uuid.uuid4()}"
                if pid not in self._issued and pid not in self._entries:
                    self._issued.add(pid)
                    return pid

    def mint_and_store(self, record: InformationRecord) -> RegistryEntry:
        """Assign a fresh PID to ``record`` and store it in one step."""
        with self._lock:
            pid = self.mint_pid()
            entry = RegistryEntry(pid, record.with_pid(pid), datetime.now(timezone.utc), EntrySource.LOCAL)
            self._entries[pid] = entry
            if self.storage_dir is not None:
                self._persist(entry)
        return entry

    def add(
        self,
        record: InformationRecord,
        source: EntrySource = EntrySource.FIXTURE,
        annotations: Optional[dict] = None,
    ) -> RegistryEntry:
        """Insert a record that already carries its PID (fixtures, remote copies)."""
        if record.pid is None:
            raise MalformedRecordDocument("record has no pid")
        entry = RegistryEntry(record.pid, record, datetime.now(timezone.utc), source, dict(annotations or {}))
        with self._lock:
            self._insert(entry)
        return entry

    def _insert(self, entry: RegistryEntry) -> None:
        known = self._entries.get(entry.pid)
        if known is not None:
            if known.record == entry.record and known.source == entry.source:
                return
            raise ImmutableEntry(f"{entry.pid} is already registered ({known.source.value})")
        self._entries[entry.pid] = entry

    def _persist(self, entry: RegistryEntry) -> None:
        self.storage_dir.mkdir(parents=True, exist_ok=True)
        path = self.storage_dir / f"{quote(entry.pid, safe='')}.json"
        path.write_text(dumps(serialize_record(entry.record, self._repeatable)), encoding="utf-8")

    def _load_storage(self) -> None:
        if not self.storage_dir.is_dir():
            return
        for path in sorted(self.storage_dir.glob("*.json")):
            record = _read_record_file(path)
            self._entries[record.pid] = RegistryEntry(
                record.pid,
                record,
                datetime.fromtimestamp(path.stat().st_mtime, timezone.utc),
                EntrySource.LOCAL,
            )

    # -- fixtures -------------------------------------------------------------

    def load_fixture_set(self, path: str | Path) -> int:
        """Load every ``*.json`` record document in ``path``; all or nothing."""
        path = Path(path)
        if not path.is_dir():
            raise FileNotFoundError(path)
        loaded = []
        for file in sorted(path.glob("*.json")):
            text = file.read_text(encoding="utf-8")
            record = _read_record_file(file, text)
            loaded.append((file, record, document_extras(text).get("annotations", {})))
        seen: dict[str, Path] = {}
        for file, record, _ in loaded:
            if record.pid in seen:
                raise ImmutableEntry(f"{record.pid} appears in both {seen[record.pid].name} and {file.name}")
            seen[record.pid] = file
        with self._lock:
            for file, record, _ in loaded:
                known = self._entries.get(record.pid)
                if known is not None and (known.record != record or known.source is not EntrySource.FIXTURE):
                    raise ImmutableEntry(f"{record.pid} ({file.name}) conflicts with a registered entry")
            for _, record, notes in loaded:
                self._insert(RegistryEntry(record.pid, record, datetime.now(timezone.utc), EntrySource.FIXTURE, notes))
        logger.debug("loaded %d fixture records from %s", len(loaded), path)
        return len(loaded)

    # -- resolution -----------------------------------------------------------

    def get(self, pid: PidLike) -> Optional[RegistryEntry]:
        return self._entries.get(str(pid))

    def resolve(self, pid: PidLike) -> RegistryEntry:
        key = canonical(pid)
        entry = self._entries.get(key)
        if entry is not None:
            return entry
        if not self.online:
            raise NotFound(key)
        record = parse_record(self.fetch_remote(key), lenient=True)
        if record.pid is None:
            record = record.with_pid(key)
        entry = RegistryEntry(key, record, datetime.now(timezone.utc), EntrySource.REMOTE)
        with self._lock:
            return self._entries.setdefault(key, entry)

    def is_resolvable(self, pid: str) -> bool:
        try:
            self.resolve(pid)
        except FdoError:
            return False
        return True

    def entries(self, sources: Optional[Iterable[EntrySource]] = None) -> list[RegistryEntry]:
        wanted = set(sources) if sources is not None else None
        with self._lock:
            entries = list(self._entries.values())
        return sorted(
            (e for e in entries if wanted is None or e.source in wanted),
            key=lambda e: e.pid,
        )

    def records(self, sources: Optional[Iterable[EntrySource]] = None) -> list[InformationRecord]:
        return [e.record for e in self.entries(sources)]

    def __contains__(self, pid: object) -> bool:
        return str(pid) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    # -- remote -------------------------------------------------------------------

    def fetch_remote(self, pid: PidLike) -> dict:
        """Fetch a Handle record from the proxy, normalized to the exchange format."""
        key = canonical(pid)
        if not self.online:
            raise RemoteUnavailable("online mode is disabled")
        cached = self._remote_cache.get(key)
        if cached is not None:
            self.cache_hits += 1
            return cached
        self.remote_requests += 1
        client = self._client or httpx.Client(timeout=10.0, follow_redirects=True)
        try:
            response = client.get(f"{self.proxy_base}/api/handles/{key}")
        except httpx.HTTPError as exc:
            raise RemoteUnavailable(f"{self.proxy_base}: {exc}") from None
        finally:
            if self._client is None:
                client.close()
        if response.status_code == 404:
            raise NotFound(key)
        if response.status_code != 200:
            raise RemoteUnavailable(f"proxy answered {response.status_code}")
        try:
            body = response.json()
        except ValueError:
            raise RemoteUnavailable("proxy answered with non-JSON body") from None
        if body.get("responseCode") == 100:
            raise NotFound(key)
        document = normalize_handle_record(key, body)
        self._remote_cache[key] = document
        return document


def normalize_handle_record(pid: str, body: dict) -> dict:
    """Map Handle REST ``values`` of string format to record keys."""
    record: dict[str, list[str]] = {}
    for item in sorted(body.get("values", []), key=lambda v: v.get("index", 0)):
        kind = item.get("type", "")
        data = item.get("data", {})
        if not kind or kind.startswith("HS_") or data.get("format") != "string":
            continue
        record.setdefault(kind, []).append(str(data.get("value", "")))
    return {
        "pid": body.get("handle", pid),
        "record": {k: v[0] if len(v) == 1 else v for k, v in record.items() if all(v)},
    }


def _read_record_file(path: Path, text: Optional[str] = None) -> InformationRecord:
    if text is None:
        text = path.read_text(encoding="utf-8")
    try:
        return parse_record(text, lenient=True, require_pid=True)
    except MalformedRecordDocument as exc:
        raise MalformedRecordDocument(f"{path.name}: {exc.detail}") from None
