"""Email ingestion: .eml / .mbox / JSONL parsing into a normalized message model.

The parser is deliberately forgiving: corpora from the wild contain broken
charsets, bogus transfer encodings, and malformed URLs, and ingestion must
never fail on those. Anything unparsable is skipped or passed through raw
with a warning flag.
"""

from __future__ import annotations

import email
import email.policy
import html
import html.parser
import json
import re
from dataclasses import dataclass, field
from email.utils import parseaddr
from importlib import resources
from urllib.parse import urlsplit

from .errors import EmptyArchive, MalformedMessage

URL_RE = re.compile(r"https?://[^\s<>\"')\]}]+", re.IGNORECASE)
IPV4_RE = re.compile(r"^\d{1,3}(\.\d{1,3}){3}$")
PERCENT_ESCAPE_RE = re.compile(r"%[0-9A-Fa-f]{2}")
# Trailing punctuation that is almost always prose, not part of the URL.
_URL_TRAIL = ".,;:!?"


@dataclass(frozen=True)
class UrlRef:
    """A URL found in a message body or header."""

    raw: str
    scheme: str
    host: str
    is_ip_literal: bool
    query_param_count: int
    percent_escape_count: int


@dataclass(frozen=True)
class EmailMessage:
    """Normalized message exposing exactly the fields the rules need."""

    id: str
    headers: tuple[tuple[str, str], ...]
    from_address: str
    from_domain: str
    reply_to: str | None
    subject: str
    body_text: str
    urls: tuple[UrlRef, ...]
    source_label: str | None = None
    ground_truth: str | None = None  # "phishing" | "benign" | None
    decode_warning: bool = False


# ---------------------------------------------------------------------------
# Registrable-domain extraction (bundled public-suffix snapshot)
# ---------------------------------------------------------------------------

_SUFFIXES: frozenset[str] | None = None


def _suffixes() -> frozenset[str]:
    global _SUFFIXES
    if _SUFFIXES is None:
        text = (
            resources.files("mailsentry")
            .joinpath("assets/public_suffix.txt")
            .read_text(encoding="utf-8")
        )
        _SUFFIXES = frozenset(
            line.strip().lower()
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        )
    return _SUFFIXES


def registrable_domain(host: str) -> str:
    """Collapse a host to its registrable domain (label + public suffix).

    IP literals and hosts without a known suffix are returned unchanged.
    """
    host = host.lower().rstrip(".")
    if not host or IPV4_RE.match(host):
        return host
    labels = host.split(".")
    suffixes = _suffixes()
    # Longest matching suffix wins; the registrable domain is one label more.
    for i in range(1, len(labels)):
        candidate = ".".join(labels[i:])
        if candidate in suffixes:
            return ".".join(labels[i - 1 :])
    return host


# ---------------------------------------------------------------------------
# URL extraction
# ---------------------------------------------------------------------------


def _make_urlref(raw: str) -> UrlRef | None:
    raw = raw.rstrip(_URL_TRAIL)
    try:
        parts = urlsplit(raw)
    except ValueError:
        return None
    host = (parts.hostname or "").lower()
    if not host:
        return None
    query_params = [p for p in parts.query.split("&") if p] if parts.query else []
    return UrlRef(
        raw=raw,
        scheme=parts.scheme.lower(),
        host=host,
        is_ip_literal=bool(IPV4_RE.match(host)),
        query_param_count=len(query_params),
        percent_escape_count=len(PERCENT_ESCAPE_RE.findall(raw)),
    )


def extract_urls(body: str) -> list[UrlRef]:
    """Capture every http(s) span in ``body``; unparsable candidates skipped."""
    refs = []
    for match in URL_RE.finditer(body):
        ref = _make_urlref(match.group(0))
        if ref is not None:
            refs.append(ref)
    return refs


# ---------------------------------------------------------------------------
# HTML to text
# ---------------------------------------------------------------------------


class _TextExtractor(html.parser.HTMLParser):
    """Strip tags, keep visible text, and retain anchor href targets."""

    _SKIP = {"script", "style", "head"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        self.hrefs: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1
        if tag == "a":
            for name, value in attrs:
                if name == "href" and value:
                    self.hrefs.append(value)

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data):
        if not self._skip_depth:
            self.chunks.append(data)


def html_to_text(markup: str) -> str:
    """Visible text of an HTML body, with href targets appended as URLs."""
    extractor = _TextExtractor()
    try:
        extractor.feed(markup)
    except Exception:
        return re.sub(r"<[^>]+>", " ", markup)
    text = " ".join(" ".join(extractor.chunks).split())
    extra = [h for h in extractor.hrefs if h.lower().startswith(("http://", "https://"))]
    if extra:
        text = text + "\n" + "\n".join(extra)
    return text


# ---------------------------------------------------------------------------
# Message parsing
# ---------------------------------------------------------------------------


def _decode_part(part) -> tuple[str, bool]:
    """Decode one MIME part to text. Returns (text, warning_flag)."""
    warning = False
    try:
        payload = part.get_payload(decode=True)
    except Exception:
        payload = None
    if payload is None:
        raw = part.get_payload()
        if isinstance(raw, str):
            return raw, True
        return "", True
    charset = part.get_content_charset() or "utf-8"
    try:
        text = payload.decode(charset, errors="strict")
    except (LookupError, UnicodeDecodeError):
        text = payload.decode("latin-1", errors="replace")
        warning = True
    return text, warning


def _body_text(msg) -> tuple[str, bool]:
    texts: list[str] = []
    warning = False
    parts = msg.walk() if msg.is_multipart() else [msg]
    plain_seen = False
    html_chunks: list[str] = []
    for part in parts:
        if part.is_multipart():
            continue
        ctype = part.get_content_type()
        if ctype == "text/plain":
            text, warn = _decode_part(part)
            texts.append(text)
            warning = warning or warn
            plain_seen = True
        elif ctype == "text/html":
            text, warn = _decode_part(part)
            html_chunks.append(text)
            warning = warning or warn
    if not plain_seen and html_chunks:
        texts = [html_to_text(chunk) for chunk in html_chunks]
    elif not plain_seen and not texts:
        # Non-text single part or nothing decodable: pass through raw.
        text, warn = _decode_part(msg)
        texts.append(text)
        warning = True
    return "\n".join(texts), warning


def _from_fields(raw_from: str) -> tuple[str, str]:
    _, address = parseaddr(raw_from or "")
    if not address or "@" not in address:
        return (raw_from or "").strip(), ""
    return address, address.rsplit("@", 1)[1].lower()


def parse_eml(raw_bytes: bytes, *, msg_id: str | None = None,
              source_label: str | None = None,
              ground_truth: str | None = None) -> EmailMessage:
    """Parse one RFC-822-style message into an :class:`EmailMessage`.

    Raises :class:`MalformedMessage` when there is no header block at all.
    Unknown transfer encodings or charsets never fail the parse; the body is
    passed through raw with ``decode_warning`` set.
    """
    if isinstance(raw_bytes, str):
        raw_bytes = raw_bytes.encode("utf-8", errors="replace")
    msg = email.message_from_bytes(raw_bytes, policy=email.policy.compat32)
    headers = tuple((name, str(value)) for name, value in msg.items())
    if not headers:
        raise MalformedMessage("no header block found")

    from_address, from_domain = _from_fields(msg.get("From", ""))
    reply_to_raw = msg.get("Reply-To")
    reply_to = None
    if reply_to_raw:
        _, reply_to = parseaddr(reply_to_raw)
        reply_to = reply_to or reply_to_raw.strip()

    body, warning = _body_text(msg)
    urls = extract_urls(body)
    # Header values can also carry URLs (e.g. List-Unsubscribe).
    seen = {u.raw for u in urls}
    for _, value in headers:
        for ref in extract_urls(value):
            if ref.raw not in seen:
                urls.append(ref)
                seen.add(ref.raw)

    return EmailMessage(
        id=msg_id or msg.get("Message-ID", "").strip() or "msg-%08x" % (hash(raw_bytes) & 0xFFFFFFFF),
        headers=headers,
        from_address=from_address,
        from_domain=from_domain,
        reply_to=reply_to,
        subject=str(msg.get("Subject", "")).strip(),
        body_text=body,
        urls=tuple(urls),
        source_label=source_label,
        ground_truth=ground_truth,
        decode_warning=warning,
    )


@dataclass
class ParseFailure:
    index: int
    error: str


def parse_mbox(raw_bytes: bytes, *, source_label: str | None = None
               ) -> tuple[list[EmailMessage], list[ParseFailure]]:
    """Split a ``From ``-delimited archive and parse each message.

    Per-message failures are recorded, not fatal. Raises
    :class:`EmptyArchive` when no message boundary is found.
    """
    if isinstance(raw_bytes, str):
        raw_bytes = raw_bytes.encode("utf-8", errors="replace")
    chunks: list[bytes] = []
    current: list[bytes] = []
    for line in raw_bytes.splitlines(keepends=True):
        if line.startswith(b"From "):
            if current:
                chunks.append(b"".join(current))
            current = []
        else:
            current.append(line)
    if current:
        chunks.append(b"".join(current))
    chunks = [c for c in chunks if c.strip()]
    if not chunks:
        raise EmptyArchive("no messages found in archive")

    messages: list[EmailMessage] = []
    failures: list[ParseFailure] = []
    for i, chunk in enumerate(chunks):
        try:
            messages.append(
                parse_eml(chunk, msg_id=f"mbox-{i}", source_label=source_label)
            )
        except MalformedMessage as exc:
            failures.append(ParseFailure(index=i, error=str(exc)))
    return messages, failures


# ---------------------------------------------------------------------------
# JSONL corpus format: {id, from, subject, body, label, source}
# ---------------------------------------------------------------------------


def message_from_record(record: dict) -> EmailMessage:
    """Build an :class:`EmailMessage` from one JSONL corpus object."""
    from_address, from_domain = _from_fields(record.get("from", ""))
    subject = record.get("subject", "")
    body = record.get("body", "")
    headers = (("From", record.get("from", "")), ("Subject", subject))
    return EmailMessage(
        id=str(record["id"]),
        headers=headers,
        from_address=from_address,
        from_domain=from_domain,
        reply_to=None,
        subject=subject,
        body_text=body,
        urls=tuple(extract_urls(body)),
        source_label=record.get("source"),
        ground_truth=record.get("label"),
    )


def load_jsonl_corpus(path) -> list[EmailMessage]:
    """Load a JSONL corpus file (one object per line, UTF-8)."""
    messages = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                messages.append(message_from_record(json.loads(line)))
    return messages
