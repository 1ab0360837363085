"""DNS record lookups behind a pluggable resolver.

Resolvers answer with a :class:`DnsRecordSet` or ``None`` when records are
unknown (timeout / not in fixture). Unknown records deliberately fire no
missing-record indicators downstream.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from typing import Protocol

SPF_STATES = ("none", "pass_policy", "softfail")


@dataclass(frozen=True)
class DnsRecordSet:
    has_mx: bool
    spf: str  # one of SPF_STATES
    has_dmarc: bool

    def __post_init__(self):
        if self.spf not in SPF_STATES:
            raise ValueError(f"spf must be one of {SPF_STATES}, got {self.spf!r}")


class ResolutionTimeout(Exception):
    """Lookup did not complete; treated as records unknown."""


class DnsResolver(Protocol):
    def resolve(self, domain: str) -> DnsRecordSet | None: ...


class FixtureResolver:
    """Resolver backed by a snapshot: JSONL {domain, has_mx, spf, has_dmarc}.

    Domains absent from the snapshot resolve to unknown (``None``).
    """

    def __init__(self, records: dict[str, DnsRecordSet]):
        self._records = dict(records)

    @classmethod
    def from_jsonl(cls, path) -> "FixtureResolver":
        records = {}
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                records[obj["domain"].lower()] = DnsRecordSet(
                    has_mx=bool(obj["has_mx"]),
                    spf=obj["spf"],
                    has_dmarc=bool(obj["has_dmarc"]),
                )
        return cls(records)

    def resolve(self, domain: str) -> DnsRecordSet | None:
        return self._records.get(domain.lower())


class CachingResolver:
    """TTL cache around another resolver.

    Safe for concurrent readers; writes are serialized. In-flight lookups
    are bounded so a burst of new domains cannot flood the inner resolver.
    """

    def __init__(self, inner: DnsResolver, ttl_seconds: float = 300.0,
                 max_in_flight: int = 8, clock=time.monotonic):
        self._inner = inner
        self._ttl = ttl_seconds
        self._clock = clock
        self._lock = threading.Lock()
        self._gate = threading.Semaphore(max_in_flight)
        self._cache: dict[str, tuple[float, DnsRecordSet | None]] = {}

    def resolve(self, domain: str) -> DnsRecordSet | None:
        key = domain.lower()
        now = self._clock()
        with self._lock:
            hit = self._cache.get(key)
            if hit is not None and now - hit[0] < self._ttl:
                return hit[1]
        with self._gate:
            try:
                result = self._inner.resolve(key)
            except ResolutionTimeout:
                result = None
        with self._lock:
            self._cache[key] = (self._clock(), result)
        return result


def resolve_dns(domain: str, resolver: DnsResolver) -> DnsRecordSet | None:
    """Resolve ``domain``; timeouts degrade to unknown (``None``)."""
    if not domain:
        raise ValueError("domain must be nonempty")
    try:
        return resolver.resolve(domain)
    except ResolutionTimeout:
        return None
