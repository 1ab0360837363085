"""Tagged, evidence-grounded explanation bullets plus a groundedness checker.

The offline generator is a template engine over pipeline evidence and only
ever cites things that actually fired, so its output is SUPPORTED (or
UNKNOWN for the no-evidence bullet) by construction. An optional external
text provider can replace it; provider output is validated and falls back
to offline on any violation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

from .decision import FinalDecision
from .errors import EmptySample, ProviderUnavailable
from .ontology import ReasoningChain
from .retrieval.index import NeighborSet
from .rules import Phase1Result

TAGS = ("AUTH", "URL", "URGENCY", "CONTENT", "SIMILARITY", "ONTOLOGY")
MAX_BULLETS = 5
MAX_WORDS = 40

AUTH_RULES = frozenset(
    {"missing_mx", "no_spf", "no_dmarc", "spf_softfail", "strict_dmarc_no_align"}
)
URL_RULES = frozenset(
    {"domain_mismatch", "url_shortener", "ip_literal_link", "url_obfuscation",
     "lookalike_domain"}
)
URGENCY_RULES = frozenset({"urgency_keywords"})
CONTENT_RULES = frozenset(
    {"credential_request", "generic_greeting", "freemail_domain",
     "freemail_brand_claim"}
)

_SIM_IN_TEXT = re.compile(r"(-?\d+\.\d+)")


@dataclass(frozen=True)
class ExplanationBullet:
    tag: str
    text: str
    cited_evidence: dict | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")
        if not self.text or len(self.text.split()) > MAX_WORDS:
            raise ValueError("bullet text must be nonempty and at most 40 words")


@dataclass(frozen=True)
class GroundednessVerdict:
    status: str  # SUPPORTED | UNSUPPORTED | UNKNOWN
    reason: str


class TextGenProvider(Protocol):
    def generate(self, system_prompt: str, user_prompt: str) -> list[str]: ...


def prompt_templates() -> tuple[str, str]:
    base = resources.files("mailsentry").joinpath("assets/prompts")
    return (
        base.joinpath("system.txt").read_text(encoding="utf-8"),
        base.joinpath("user.txt").read_text(encoding="utf-8"),
    )


def build_prompt(redacted_subject: str, redacted_body: str,
                 phase1: Phase1Result, chain: ReasoningChain,
                 neighbors: NeighborSet) -> tuple[str, str]:
    """Assemble the provider prompt; only redacted content crosses here."""
    system, user = prompt_templates()
    attacks = sorted({step.attack for step in chain.steps})
    top3 = [
        f"(sim={h.similarity:.3f}) {h.snippet}" for h in neighbors.hits[:3]
    ]
    return system, user.format(
        subject=redacted_subject,
        body=redacted_body,
        indicators=", ".join(phase1.indicators.fired()) or "none",
        attacks=", ".join(attacks) or "none",
        neighbors="\n".join(top3) or "none",
    )


def _rule_class_bullet(tag: str, rules: list[str], phase1: Phase1Result
                       ) -> ExplanationBullet:
    lead = rules[0]
    why = phase1.indicators.evidence.get(lead, lead)
    others = f" (+{len(rules) - 1} related)" if len(rules) > 1 else ""
    words = why.split()
    if len(words) > MAX_WORDS - 4:
        why = " ".join(words[: MAX_WORDS - 4]) + "..."
    return ExplanationBullet(
        tag=tag,
        text=f"{why}{others}",
        cited_evidence={"kind": "rule", "rule_id": lead},
    )


def generate_offline(phase1: Phase1Result, chain: ReasoningChain,
                     neighbors: NeighborSet, decision: FinalDecision
                     ) -> list[ExplanationBullet]:
    """One bullet per evidence class present, capped at 5 by strength."""
    fired = set(phase1.indicators.fired())
    candidates: list[tuple[float, ExplanationBullet]] = []

    for tag, rule_set in (
        ("AUTH", AUTH_RULES), ("URL", URL_RULES),
        ("URGENCY", URGENCY_RULES), ("CONTENT", CONTENT_RULES),
    ):
        hits = sorted(fired & rule_set)
        if hits:
            candidates.append((float(len(hits)), _rule_class_bullet(tag, hits, phase1)))

    if neighbors.hits:
        top = neighbors.hits[0]
        sim = round(top.similarity, 3)
        candidates.append((
            4.0 * max(top.similarity, 0.0),
            ExplanationBullet(
                tag="SIMILARITY",
                text=(
                    f"Top similarity {sim:.3f} to known phishing example "
                    f"{top.id}; blended retrieval score {decision.rag_score:.3f}."
                ),
                cited_evidence={"kind": "neighbor", "id": top.id, "similarity": sim},
            ),
        ))

    if chain.steps:
        top_attack = chain.steps[0].attack
        props = sorted({s.property for s in chain.steps if s.attack == top_attack})
        shown = ", ".join(props[:4])
        candidates.append((
            3.0,
            ExplanationBullet(
                tag="ONTOLOGY",
                text=f"Formally classified as {top_attack} from properties: {shown}.",
                cited_evidence={"kind": "attack", "attack": top_attack,
                                "properties": props},
            ),
        ))

    if not candidates:
        return [
            ExplanationBullet(
                tag="CONTENT",
                text="No phishing evidence identified: no rules fired and no similar known attacks retrieved.",
                cited_evidence=None,
            )
        ]
    candidates.sort(key=lambda t: (-t[0], t[1].tag))
    return [bullet for _, bullet in candidates[:MAX_BULLETS]]


def _parse_provider_line(line: str) -> ExplanationBullet | None:
    match = re.match(r"\s*\[([A-Z]+)\]\s*(.+)$", line.strip())
    if not match or match.group(1) not in TAGS:
        return None
    text = match.group(2).strip()
    if not text or len(text.split()) > MAX_WORDS:
        return None
    return ExplanationBullet(tag=match.group(1), text=text, cited_evidence=None)


def generate_explanations(phase1: Phase1Result, chain: ReasoningChain,
                          neighbors: NeighborSet, decision: FinalDecision,
                          provider: TextGenProvider | None = None,
                          redacted_subject: str = "",
                          redacted_body: str = "") -> list[ExplanationBullet]:
    """Offline template bullets, or validated provider bullets when given.

    Provider failures or validation violations always fall back to the
    offline generator; this never raises.
    """
    if provider is None:
        return generate_offline(phase1, chain, neighbors, decision)
    try:
        system, user = build_prompt(redacted_subject, redacted_body,
                                    phase1, chain, neighbors)
        lines = provider.generate(system, user)
        bullets = []
        for line in lines:
            parsed = _parse_provider_line(line)
            if parsed is None:
                return generate_offline(phase1, chain, neighbors, decision)
            bullets.append(parsed)
        if not bullets:
            return generate_offline(phase1, chain, neighbors, decision)
        return bullets[:MAX_BULLETS]
    except ProviderUnavailable:
        return generate_offline(phase1, chain, neighbors, decision)


def check_groundedness(bullets: list[ExplanationBullet], phase1: Phase1Result,
                       chain: ReasoningChain, neighbors: NeighborSet
                       ) -> list[GroundednessVerdict]:
    """Verify each bullet's citation against pipeline evidence."""
    fired = set(phase1.indicators.fired())
    chain_attacks = {step.attack for step in chain.steps}
    chain_props = {step.property for step in chain.steps}
    verdicts = []
    for bullet in bullets:
        cited = bullet.cited_evidence or {}
        if bullet.tag == "SIMILARITY":
            sim = cited.get("similarity")
            if sim is None:
                match = _SIM_IN_TEXT.search(bullet.text)
                sim = float(match.group(1)) if match else None
            if sim is None:
                verdicts.append(GroundednessVerdict("UNKNOWN", "no numeric similarity cited"))
            elif any(abs(h.similarity - sim) <= 0.005 for h in neighbors.hits):
                verdicts.append(GroundednessVerdict("SUPPORTED", f"similarity {sim} matches a neighbor"))
            else:
                verdicts.append(GroundednessVerdict("UNSUPPORTED", f"similarity {sim} matches no neighbor"))
        elif bullet.tag == "ONTOLOGY":
            attack = cited.get("attack")
            props = set(cited.get("properties", ()))
            if attack is None:
                verdicts.append(GroundednessVerdict("UNKNOWN", "no attack type cited"))
            elif attack in chain_attacks and props <= chain_props:
                verdicts.append(GroundednessVerdict("SUPPORTED", f"{attack} present in reasoning chain"))
            else:
                verdicts.append(GroundednessVerdict("UNSUPPORTED", f"{attack} not in reasoning chain"))
        else:  # AUTH / URL / URGENCY / CONTENT
            rule = cited.get("rule_id")
            if rule is None:
                verdicts.append(GroundednessVerdict("UNKNOWN", "no checkable citation"))
            elif rule in fired:
                verdicts.append(GroundednessVerdict("SUPPORTED", f"rule {rule} fired"))
            else:
                verdicts.append(GroundednessVerdict("UNSUPPORTED", f"rule {rule} did not fire"))
    return verdicts


def groundedness_ab_report(sample: list[dict], with_ontology: bool = True,
                           provider: TextGenProvider | None = None) -> dict:
    """Per-tag support-rate table over a pipeline-run sample.

    Each sample entry holds phase1, chain, neighbors, decision (and
    optionally redacted subject/body for provider mode). ``with_ontology``
    toggles whether ontology context reaches the generator at all.
    """
    if not sample:
        raise EmptySample("groundedness report needs at least one email")
    empty_chain = ReasoningChain(steps=(), rendered="no attack type inferred")
    table = {tag: {"total": 0, "supported": 0} for tag in TAGS}
    for entry in sample:
        chain = entry["chain"] if with_ontology else empty_chain
        bullets = generate_explanations(
            entry["phase1"], chain, entry["neighbors"], entry["decision"],
            provider=provider,
            redacted_subject=entry.get("redacted_subject", ""),
            redacted_body=entry.get("redacted_body", ""),
        )
        verdicts = check_groundedness(bullets, entry["phase1"], chain,
                                      entry["neighbors"])
        for bullet, verdict in zip(bullets, verdicts):
            table[bullet.tag]["total"] += 1
            if verdict.status == "SUPPORTED":
                table[bullet.tag]["supported"] += 1
    return {
        tag: {
            "total": row["total"],
            "supported": row["supported"],
            "rate": (row["supported"] / row["total"]) if row["total"] else None,
        }
        for tag, row in table.items()
    }
