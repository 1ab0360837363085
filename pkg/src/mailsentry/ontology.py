"""Attack-type classification over fired indicators.

Indicators are renamed to properties, then each attack type's universal and
existential property sets are checked. Confidence is the exact rational
(m_all + m_any) / den with den = |universal| + 1 when the existential set is
nonempty. All threshold comparisons are done by cross-multiplication, never
in floating point.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyDataset, InconsistentInput
from .rules import IndicatorSet

log = logging.getLogger(__name__)

DEFAULT_PROPERTY_MAP = {
    "missing_mx": "hasMissingMX",
    "no_spf": "hasNoSPF",
    "no_dmarc": "hasNoDMARC",
    "spf_softfail": "hasSPFSoftfail",
    "freemail_domain": "hasFreemailSender",
    "domain_mismatch": "hasDomainMismatch",
    "url_shortener": "hasURLShortener",
    "ip_literal_link": "hasIPLiteralURL",
    "url_obfuscation": "hasURLObfuscation",
    "urgency_keywords": "hasUrgencyLanguage",
    "credential_request": "hasCredentialRequest",
    "generic_greeting": "hasGenericGreeting",
    "lookalike_domain": "hasLookalikeDomain",
    "freemail_brand_claim": "hasFreemailBrandClaim",
    "strict_dmarc_no_align": "hasStrictDMARCNoAlign",
}


@dataclass(frozen=True)
class AttackAxioms:
    name: str
    universal: frozenset[str]
    existential: frozenset[str]

    def __post_init__(self):
        if not self.universal and not self.existential:
            raise ValueError(f"attack type {self.name!r} has no axioms")


@dataclass(frozen=True)
class OntologyConfig:
    property_map: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_PROPERTY_MAP)
    )
    attack_types: tuple[AttackAxioms, ...] = ()
    theta: Fraction = Fraction(3, 10)

    def __post_init__(self):
        if not (0 < self.theta <= 1):
            raise ValueError("theta must be in (0, 1]")
        known = set(self.property_map.values())
        for attack in self.attack_types:
            missing = (attack.universal | attack.existential) - known
            if missing:
                raise ValueError(
                    f"attack {attack.name!r} references unmapped properties: {sorted(missing)}"
                )

    @classmethod
    def from_dict(cls, data: dict) -> "OntologyConfig":
        attacks = tuple(
            AttackAxioms(
                name=a["name"],
                universal=frozenset(a.get("universal", ())),
                existential=frozenset(a.get("existential", ())),
            )
            for a in data.get("attack_types", ())
        )
        theta = data.get("theta", 0.3)
        if isinstance(theta, str):
            theta = Fraction(theta)
        else:
            theta = Fraction(theta).limit_denominator(1000)
        return cls(
            property_map=dict(data.get("property_map", DEFAULT_PROPERTY_MAP)),
            attack_types=attacks,
            theta=theta,
        )

    @classmethod
    def from_json(cls, path) -> "OntologyConfig":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


def default_config() -> OntologyConfig:
    from importlib import resources

    text = (
        resources.files("mailsentry")
        .joinpath("assets/ontology.json")
        .read_text(encoding="utf-8")
    )
    return OntologyConfig.from_dict(json.loads(text))


@dataclass(frozen=True)
class AttackMatch:
    attack: str
    confidence: Fraction  # in [theta, 1]
    satisfied_properties: frozenset[str]


@dataclass(frozen=True)
class ChainStep:
    property: str
    source_rule: str
    axiom: str  # "universal" | "existential"
    attack: str


@dataclass(frozen=True)
class ReasoningChain:
    steps: tuple[ChainStep, ...]
    rendered: str


def map_properties(indicators: IndicatorSet, cfg: OntologyConfig) -> frozenset[str]:
    """Rename fired indicators to ontology properties; unmapped ones skipped."""
    props = set()
    for rule, on in indicators.flags.items():
        if not on:
            continue
        prop = cfg.property_map.get(rule)
        if prop is None:
            log.warning("indicator %s fired but has no property mapping", rule)
            continue
        props.add(prop)
    return frozenset(props)


def classify_attacks(properties: frozenset[str],
                     cfg: OntologyConfig) -> list[AttackMatch]:
    """Multi-label attack matches sorted by descending confidence, then name."""
    matches = []
    for attack in cfg.attack_types:
        m_all = len(attack.universal & properties)
        m_any = 1 if attack.existential & properties else 0
        den = len(attack.universal) + (1 if attack.existential else 0)
        # c >= theta via cross-multiplication; no floats.
        passes_theta = (m_all + m_any) * cfg.theta.denominator >= cfg.theta.numerator * den
        if passes_theta and (not attack.existential or m_any == 1):
            satisfied = (attack.universal & properties) | (attack.existential & properties)
            matches.append(
                AttackMatch(
                    attack=attack.name,
                    confidence=Fraction(m_all + m_any, den),
                    satisfied_properties=frozenset(satisfied),
                )
            )
    matches.sort(key=lambda m: (-m.confidence, m.attack))
    return matches


def _rule_for_property(prop: str, cfg: OntologyConfig) -> str:
    for rule, mapped in cfg.property_map.items():
        if mapped == prop:
            return rule
    return "?"


def generate_chain(properties: frozenset[str], matches: list[AttackMatch],
                   cfg: OntologyConfig) -> ReasoningChain:
    """One step per (matched attack, satisfied property), deterministic order."""
    axioms_by_name = {a.name: a for a in cfg.attack_types}
    steps = []
    lines = []
    for match in matches:
        bad = match.satisfied_properties - properties
        if bad:
            raise InconsistentInput(
                f"match {match.attack} cites unfired properties {sorted(bad)}"
            )
        axioms = axioms_by_name[match.attack]
        for prop in sorted(match.satisfied_properties):
            kind = "universal" if prop in axioms.universal else "existential"
            steps.append(
                ChainStep(
                    property=prop,
                    source_rule=_rule_for_property(prop, cfg),
                    axiom=kind,
                    attack=match.attack,
                )
            )
            lines.append(
                f"{prop} |= {kind}-axiom-of({match.attack}) "
                f"=> {match.attack} (c={match.confidence})"
            )
    rendered = "\n".join(lines) if lines else "no attack type inferred"
    return ReasoningChain(steps=tuple(steps), rendered=rendered)


def classify(indicators: IndicatorSet, cfg: OntologyConfig | None = None
             ) -> tuple[list[AttackMatch], ReasoningChain]:
    """Full pass: map properties, classify, build the reasoning chain."""
    cfg = cfg or default_config()
    props = map_properties(indicators, cfg)
    matches = classify_attacks(props, cfg)
    return matches, generate_chain(props, matches, cfg)


def coverage_report(results: list[tuple[str | None, list[AttackMatch]]]) -> dict:
    """Activation statistics over a classified dataset.

    ``results`` holds (ground_truth, matches) per email.
    """
    if not results:
        raise EmptyDataset("coverage report needs at least one classified email")

    def stats(rows):
        activated = [m for _, m in rows if m]
        out = {
            "count": len(rows),
            "activated": len(activated),
            "coverage": len(activated) / len(rows) if rows else 0.0,
            "mean_labels": (
                sum(len(m) for m in activated) / len(activated) if activated else 0.0
            ),
            "mean_confidence": (
                sum(float(x.confidence) for m in activated for x in m)
                / sum(len(m) for m in activated)
                if activated else 0.0
            ),
        }
        return out

    overall = stats(results)
    phishing = stats([r for r in results if r[0] == "phishing"])
    benign = stats([r for r in results if r[0] == "benign"])

    # Fraction of benign activations whose mean confidence exceeds the
    # phishing activation mean.
    phish_mean = phishing["mean_confidence"]
    benign_activations = [m for truth, m in results if truth == "benign" and m]
    above = sum(
        1 for m in benign_activations
        if (sum(float(x.confidence) for x in m) / len(m)) > phish_mean
    )
    per_label_conf: dict[str, list[float]] = {}
    for _, matches in results:
        for match in matches:
            per_label_conf.setdefault(match.attack, []).append(float(match.confidence))

    return {
        "overall": overall,
        "phishing": phishing,
        "benign": benign,
        "benign_above_phishing_mean": (
            above / len(benign_activations) if benign_activations else 0.0
        ),
        "per_attack": {
            name: {
                "activations": len(vals),
                "prevalence": len(vals) / len(results),
                "mean_confidence": sum(vals) / len(vals),
            }
            for name, vals in sorted(per_label_conf.items())
        },
    }
