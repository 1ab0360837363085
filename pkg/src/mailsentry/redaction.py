"""Sensitive-field masking applied before any content leaves the trust boundary.

Masks are bit-exact and idempotent: running :func:`redact` on its own output
changes nothing, and :func:`scan_exposure` finds zero hits on redacted text.
Both functions share one detection engine so their counts always agree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

PII_TYPES = ("email", "phone", "ssn", "cc", "dob")

# Local part may not start right after another local-part character or a mask
# asterisk; this is what keeps masked forms ("a****e@x.com") from re-matching.
EMAIL_RE = re.compile(
    r"(?<![A-Za-z0-9._%+*-])([A-Za-z0-9._%+-]+)@([A-Za-z0-9.-]+\.[A-Za-z]{2,})"
)
SSN_RE = re.compile(r"(?<!\d)(\d{3})-(\d{2})-(\d{4})(?!\d)")
CC_RE = re.compile(r"(?<![\d*])\d{4}[\s-]?\d{4}[\s-]?\d{4}[\s-]?\d{1,4}(?!\d)")
PHONE_RE = re.compile(r"(?<!\d)\d{3}[-.\s]?\d{3}[-.\s]?(\d{4})(?!\d)")
# Date forms counted as DOB only near a birth-context cue.
_DATE = (
    r"(?:\d{1,2}/\d{1,2}/\d{4}"
    r"|\d{4}-\d{2}-\d{2}"
    r"|(?:January|February|March|April|May|June|July|August|September|October|"
    r"November|December)\s+\d{1,2},\s+\d{4})"
)
DOB_RE = re.compile(
    r"(?:birth|dob|born)(?P<gap>[^\n]{0,20}?)(?P<date>" + _DATE + r")",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class RedactionReport:
    redacted_text: str
    counts: dict[str, int]
    any_redacted: bool


def _luhn_ok(digits: str) -> bool:
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = int(ch)
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def _mask_email(match: re.Match) -> str:
    local, domain = match.group(1), match.group(2)
    return f"{local[0]}****{local[-1]}@{domain}"


def _apply(text: str, luhn_check: bool) -> tuple[str, dict[str, int]]:
    counts = dict.fromkeys(PII_TYPES, 0)

    def sub_email(m):
        counts["email"] += 1
        return _mask_email(m)

    text = EMAIL_RE.sub(sub_email, text)

    def sub_cc(m):
        digits = re.sub(r"\D", "", m.group(0))
        if len(digits) < 13 or (luhn_check and not _luhn_ok(digits)):
            return m.group(0)
        counts["cc"] += 1
        return "****-****"

    text = CC_RE.sub(sub_cc, text)

    def sub_ssn(m):
        counts["ssn"] += 1
        return f"***-**-{m.group(3)}"

    text = SSN_RE.sub(sub_ssn, text)

    def sub_phone(m):
        counts["phone"] += 1
        return f"***-***-{m.group(1)}"

    text = PHONE_RE.sub(sub_phone, text)

    def sub_dob(m):
        counts["dob"] += 1
        return m.group(0)[: m.start("date") - m.start()] + "[DOB]"

    text = DOB_RE.sub(sub_dob, text)

    return text, counts


def redact(text: str, *, luhn_check: bool = True) -> RedactionReport:
    """Mask every enabled sensitive pattern in ``text``."""
    redacted, counts = _apply(text, luhn_check)
    return RedactionReport(
        redacted_text=redacted,
        counts=counts,
        any_redacted=sum(counts.values()) > 0,
    )


@dataclass(frozen=True)
class ExposureReport:
    exposure: bool
    counts: dict[str, int]


def scan_exposure(text: str, *, luhn_check: bool = True) -> ExposureReport:
    """Detection-only variant of :func:`redact`; same patterns, same counts."""
    _, counts = _apply(text, luhn_check)
    return ExposureReport(exposure=sum(counts.values()) > 0, counts=counts)


def corpus_pii_stats(texts) -> dict:
    """Per-corpus PII statistics: total counts per type plus exposure rate."""
    totals = dict.fromkeys(PII_TYPES, 0)
    exposed = 0
    n = 0
    for text in texts:
        report = scan_exposure(text)
        n += 1
        if report.exposure:
            exposed += 1
        for key, value in report.counts.items():
            totals[key] += value
    return {
        "messages": n,
        "counts": totals,
        "exposure_rate": exposed / n if n else 0.0,
        "mean_items_per_message": sum(totals.values()) / n if n else 0.0,
    }
