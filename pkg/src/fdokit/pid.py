"""Handle-style persistent identifiers (``prefix/suffix``)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from fdokit.errors import InvalidPidSyntax

PREFIX_RE = re.compile(r"[A-Za-z0-9]+(?:\.[A-Za-z0-9]+)*")
# printable ASCII without space
SUFFIX_RE = re.compile(r"[\x21-\x7e]+")


@dataclass(frozen=True, order=True)
class Pid:
    prefix: str
    suffix: str

    def __post_init__(self) -> None:
        if not PREFIX_RE.fullmatch(self.prefix) or not SUFFIX_RE.fullmatch(self.suffix):
            raise InvalidPidSyntax(f"not a handle identifier: {self.prefix!r}/{self.suffix!r}")

    @classmethod
    def parse(cls, text: str) -> "Pid":
        if not isinstance(text, str) or "/" not in text:
            raise InvalidPidSyntax(f"not a handle identifier: {text!r}")
        prefix, _, suffix = text.partition("/")
        return cls(prefix, suffix)

    def __str__(self) -> str:
        return f"{self.prefix}/{self.suffix}"


PidLike = Union[str, Pid]


def is_pid(text: str) -> bool:
    """Return True if ``text`` follows the ``prefix/suffix`` handle grammar."""
    if not isinstance(text, str):
        return False
    prefix, sep, suffix = text.partition("/")
    return bool(sep) and bool(PREFIX_RE.fullmatch(prefix)) and bool(SUFFIX_RE.fullmatch(suffix))


def canonical(pid: PidLike) -> str:
    """Validate ``pid`` and return its canonical text form."""
    if isinstance(pid, Pid):
        return str(pid)
    return str(Pid.parse(pid))
