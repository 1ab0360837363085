"""Phase 1 deterministic analysis: weighted rules over a parsed message.

Every rule is a pure predicate over (message, DNS records, config). The
score is the sum of weights over fired, enabled rules, and the verdict is
a pure function of the score and the two tier thresholds.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace

from .dns import DnsRecordSet
from .errors import UnknownRuleId
from .message import EmailMessage, registrable_domain

VERDICT_BENIGN = "benign"
VERDICT_REVIEW = "needs_review"
VERDICT_PHISHING = "phishing"

DEFAULT_WEIGHTS = {
    "missing_mx": 3,
    "no_spf": 2,
    "no_dmarc": 2,
    "spf_softfail": 1,
    "freemail_domain": 1,
    "domain_mismatch": 2,
    "url_shortener": 2,
    "ip_literal_link": 2,
    "url_obfuscation": 2,
    "urgency_keywords": 1,
    "credential_request": 2,
    "generic_greeting": 1,
    # Extra rules, disabled by default (definitions are non-normative).
    "lookalike_domain": 2,
    "freemail_brand_claim": 2,
    "strict_dmarc_no_align": 3,
}

DEFAULT_ENABLED = frozenset(
    r for r in DEFAULT_WEIGHTS
    if r not in ("lookalike_domain", "freemail_brand_claim", "strict_dmarc_no_align")
)

DEFAULT_URGENCY = (
    "urgent",
    "immediate action",
    "verify your account",
    "password expires",
    "suspend",
    "pay now",
    "update your information",
)
DEFAULT_CREDENTIAL_PATTERNS = (
    r"\bpassword\b",
    r"\bssn\b",
    r"\bsocial\s+security\b",
    r"\bcredit\s+card\b",
    r"\blog\s+in\b",
    r"\bcredentials\b",
)
DEFAULT_GREETINGS = ("dear customer", "dear user", "valued member")
DEFAULT_FREEMAIL = (
    "gmail.com", "yahoo.com", "outlook.com", "hotmail.com", "aol.com", "proton.me",
)
DEFAULT_SHORTENERS = (
    "bit.ly", "tinyurl.com", "t.co", "goo.gl", "ow.ly", "buff.ly",
)


@dataclass(frozen=True)
class RuleConfig:
    weights: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    benign_upper: int = 2
    phishing_lower: int = 5
    enabled_rules: frozenset[str] = DEFAULT_ENABLED
    urgency_lexicon: tuple[str, ...] = DEFAULT_URGENCY
    credential_patterns: tuple[str, ...] = DEFAULT_CREDENTIAL_PATTERNS
    greeting_patterns: tuple[str, ...] = DEFAULT_GREETINGS
    freemail_domains: tuple[str, ...] = DEFAULT_FREEMAIL
    shortener_domains: tuple[str, ...] = DEFAULT_SHORTENERS
    brand_domains: tuple[str, ...] = ()
    max_query_params: int = 8

    def __post_init__(self):
        if self.benign_upper >= self.phishing_lower:
            raise ValueError("benign_upper must be < phishing_lower")
        bad = {r: w for r, w in self.weights.items() if w not in (1, 2, 3)}
        if bad:
            raise ValueError(f"weights must be in {{1,2,3}}: {bad}")
        unknown = set(self.enabled_rules) - set(self.weights)
        if unknown:
            raise UnknownRuleId(f"enabled rules without weights: {sorted(unknown)}")

    def with_disabled(self, disabled: set[str]) -> "RuleConfig":
        unknown = set(disabled) - set(self.weights)
        if unknown:
            raise UnknownRuleId(f"unknown rule ids: {sorted(unknown)}")
        return replace(self, enabled_rules=frozenset(self.enabled_rules - set(disabled)))

    @classmethod
    def from_dict(cls, data: dict) -> "RuleConfig":
        kwargs = {}
        for key in ("benign_upper", "phishing_lower", "max_query_params"):
            if key in data:
                kwargs[key] = int(data[key])
        if "weights" in data:
            weights = dict(DEFAULT_WEIGHTS)
            weights.update({k: int(v) for k, v in data["weights"].items()})
            kwargs["weights"] = weights
        if "enabled_rules" in data:
            kwargs["enabled_rules"] = frozenset(data["enabled_rules"])
        for key in ("urgency_lexicon", "credential_patterns", "greeting_patterns",
                    "freemail_domains", "shortener_domains", "brand_domains"):
            if key in data:
                kwargs[key] = tuple(data[key])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path) -> "RuleConfig":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


@dataclass(frozen=True)
class IndicatorSet:
    flags: dict[str, bool]
    evidence: dict[str, str]

    def fired(self) -> list[str]:
        return sorted(r for r, on in self.flags.items() if on)


@dataclass(frozen=True)
class Phase1Result:
    indicators: IndicatorSet
    score: int
    verdict: str


def verdict_for_score(score: int, cfg: RuleConfig) -> str:
    if score < cfg.benign_upper:
        return VERDICT_BENIGN
    if score < cfg.phishing_lower:
        return VERDICT_REVIEW
    return VERDICT_PHISHING


def _edit_distance(a: str, b: str, cap: int = 3) -> int:
    if abs(len(a) - len(b)) > cap:
        return cap
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return min(prev[-1], cap)


def _evaluate_rules(msg: EmailMessage, dns: DnsRecordSet | None,
                    cfg: RuleConfig) -> dict[str, tuple[bool, str]]:
    content = f"{msg.subject}\n{msg.body_text}".lower()
    sender_reg = registrable_domain(msg.from_domain) if msg.from_domain else ""
    url_regs = [registrable_domain(u.host) for u in msg.urls if not u.is_ip_literal]

    out: dict[str, tuple[bool, str]] = {}

    # DNS / authentication: unknown records fire nothing (conservative).
    out["missing_mx"] = (
        dns is not None and not dns.has_mx,
        f"no MX records for {msg.from_domain}",
    )
    out["no_spf"] = (
        dns is not None and dns.spf == "none",
        f"no SPF record for {msg.from_domain}",
    )
    out["no_dmarc"] = (
        dns is not None and not dns.has_dmarc,
        f"no DMARC policy for {msg.from_domain}",
    )
    out["spf_softfail"] = (
        dns is not None and dns.spf == "softfail",
        f"SPF softfail (~all) for {msg.from_domain}",
    )

    out["freemail_domain"] = (
        msg.from_domain in cfg.freemail_domains,
        f"sender uses freemail domain {msg.from_domain}",
    )

    mismatched = sorted({r for r in url_regs if sender_reg and r != sender_reg})
    out["domain_mismatch"] = (
        bool(mismatched),
        f"link domains {mismatched} differ from sender {sender_reg}",
    )

    shorteners = sorted({u.host for u in msg.urls if u.host in cfg.shortener_domains})
    out["url_shortener"] = (bool(shorteners), f"shortener link(s): {shorteners}")

    ip_urls = [u.raw for u in msg.urls if u.is_ip_literal]
    out["ip_literal_link"] = (bool(ip_urls), f"IP-literal link(s): {ip_urls[:3]}")

    obfuscated = [
        u.raw for u in msg.urls
        if u.percent_escape_count > 0 or u.query_param_count > cfg.max_query_params
    ]
    out["url_obfuscation"] = (
        bool(obfuscated),
        f"obfuscated link(s) (hex escapes or >{cfg.max_query_params} params): {obfuscated[:3]}",
    )

    urgency_hits = [p for p in cfg.urgency_lexicon if p in content]
    out["urgency_keywords"] = (bool(urgency_hits), f"urgency phrases: {urgency_hits}")

    cred_hits = [p for p in cfg.credential_patterns if re.search(p, content)]
    out["credential_request"] = (
        bool(cred_hits),
        f"credential-request patterns: {cred_hits}",
    )

    greeting_hits = [p for p in cfg.greeting_patterns if p in content]
    out["generic_greeting"] = (bool(greeting_hits), f"generic greeting: {greeting_hits}")

    # Extra rules (disabled by default).
    lookalikes = []
    if sender_reg and cfg.brand_domains:
        for brand in cfg.brand_domains:
            dist = _edit_distance(sender_reg, brand.lower())
            if 0 < dist <= 2:
                lookalikes.append(brand)
    out["lookalike_domain"] = (
        bool(lookalikes),
        f"sender {sender_reg} within edit distance 2 of brand(s): {lookalikes}",
    )

    brand_claims = []
    if msg.from_domain in cfg.freemail_domains:
        for brand in cfg.brand_domains:
            name = brand.lower().split(".")[0]
            if name and name in content:
                brand_claims.append(name)
    out["freemail_brand_claim"] = (
        bool(brand_claims),
        f"freemail sender claiming brand(s): {brand_claims}",
    )

    out["strict_dmarc_no_align"] = (
        dns is not None and dns.has_dmarc and bool(mismatched),
        f"DMARC present but link domains {mismatched} unaligned with sender",
    )

    return out


def run_rules(msg: EmailMessage, dns: DnsRecordSet | None,
              cfg: RuleConfig | None = None) -> Phase1Result:
    """Evaluate all enabled rules and map the weighted score to a verdict."""
    cfg = cfg or RuleConfig()
    raw = _evaluate_rules(msg, dns, cfg)
    flags: dict[str, bool] = {}
    evidence: dict[str, str] = {}
    score = 0
    for rule in sorted(cfg.weights):
        if rule not in cfg.enabled_rules:
            continue
        fired, why = raw.get(rule, (False, ""))
        flags[rule] = fired
        if fired:
            evidence[rule] = why
            score += cfg.weights[rule]
    return Phase1Result(
        indicators=IndicatorSet(flags=flags, evidence=evidence),
        score=score,
        verdict=verdict_for_score(score, cfg),
    )


@dataclass
class AblationReport:
    """Metrics with a rule set disabled, plus per-rule trigger statistics."""

    disabled: tuple[str, ...]
    metrics: "object"  # evaluation.metrics.MetricsReport
    per_rule: dict[str, dict[str, float | None]]


def rule_ablation(dataset, cfg: RuleConfig | None = None,
                  disabled: set[str] | None = None,
                  positive_mapping: str = "strict") -> AblationReport:
    """Leave-rules-out ablation over a labeled (message, dns) dataset.

    ``dataset`` is a list of (EmailMessage, DnsRecordSet | None) pairs with
    ground_truth set on every message.
    """
    from .evaluation.metrics import compute_metrics

    cfg = cfg or RuleConfig()
    ablated = cfg.with_disabled(disabled or set())

    preds = []
    fired_by_rule: dict[str, list[str]] = {r: [] for r in cfg.weights}
    phishing_total = 0
    for msg, dns in dataset:
        result = run_rules(msg, dns, ablated)
        preds.append((result.verdict, msg.ground_truth))
        if msg.ground_truth == "phishing":
            phishing_total += 1
        full = run_rules(msg, dns, cfg)
        for rule, on in full.indicators.flags.items():
            if on:
                fired_by_rule[rule].append(msg.ground_truth or "")

    per_rule: dict[str, dict[str, float | None]] = {}
    for rule, truths in fired_by_rule.items():
        phish_hits = sum(1 for t in truths if t == "phishing")
        per_rule[rule] = {
            "phishing_coverage": (phish_hits / phishing_total) if phishing_total else 0.0,
            "rule_precision": (phish_hits / len(truths)) if truths else None,
        }

    metrics = compute_metrics(preds, mapping=positive_mapping)
    return AblationReport(
        disabled=tuple(sorted(disabled or set())), metrics=metrics, per_rule=per_rule
    )
