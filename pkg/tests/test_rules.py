import pytest
from hypothesis import given
from hypothesis import strategies as st

from mailsentry.dns import DnsRecordSet
from mailsentry.errors import UnknownRuleId
from mailsentry.message import message_from_record
from mailsentry.rules import (DEFAULT_ENABLED, DEFAULT_WEIGHTS, RuleConfig,
                              rule_ablation, run_rules, verdict_for_score)

CFG = RuleConfig()


def _msg(body="hello", sender="a@example.com", subject="note"):
    return message_from_record(
        {"id": "t", "from": sender, "subject": subject, "body": body}
    )


LEGIT_DNS = DnsRecordSet(has_mx=True, spf="pass_policy", has_dmarc=True)


class TestFixtureOracle:
    """Scores and verdicts recomputed independently from the expected fired
    sets, never from the engine's own score."""

    def test_all_sixty_messages(self, corpus, resolver, expected_rules):
        assert len(corpus) == 60
        for msg in corpus:
            dns = resolver.resolve(msg.from_domain) if msg.from_domain else None
            result = run_rules(msg, dns, CFG)
            fired = expected_rules[msg.id]["fired"]
            assert result.indicators.fired() == fired, msg.id
            score = sum(DEFAULT_WEIGHTS[r] for r in fired if r in DEFAULT_ENABLED)
            assert result.score == score, msg.id
            if score < 2:
                assert result.verdict == "benign"
            elif score < 5:
                assert result.verdict == "needs_review"
            else:
                assert result.verdict == "phishing"

    def test_naive_example_scores_eight(self, corpus, resolver):
        msg = next(m for m in corpus if m.id == "phish-naive-01")
        result = run_rules(msg, resolver.resolve(msg.from_domain), CFG)
        assert result.score == 8
        assert result.verdict == "phishing"


class TestVerdictTiers:
    @given(st.integers(min_value=0, max_value=100))
    def test_partition_is_total_and_exclusive(self, score):
        verdict = verdict_for_score(score, CFG)
        if score < 2:
            assert verdict == "benign"
        elif score < 5:
            assert verdict == "needs_review"
        else:
            assert verdict == "phishing"

    def test_boundaries(self):
        assert verdict_for_score(1, CFG) == "benign"
        assert verdict_for_score(2, CFG) == "needs_review"
        assert verdict_for_score(4, CFG) == "needs_review"
        assert verdict_for_score(5, CFG) == "phishing"


class TestScoreConsistency:
    @given(st.sets(st.sampled_from(sorted(DEFAULT_ENABLED))))
    def test_score_equals_weight_sum_of_fired(self, disabled):
        """Disabling any rule subset, the score always re-sums from weights."""
        cfg = CFG.with_disabled(set(disabled))
        msg = _msg(
            body="Dear customer, urgent: enter your password at "
                 "https://bit.ly/x and http://1.2.3.4/y",
            sender="a@gmail.com",
        )
        result = run_rules(msg, None, cfg)
        resum = sum(
            cfg.weights[r] for r, on in result.indicators.flags.items() if on
        )
        assert result.score == resum
        assert not (set(result.indicators.flags) & set(disabled))


class TestIndividualRules:
    def test_unknown_dns_fires_no_dns_rules(self):
        result = run_rules(_msg(), None, CFG)
        for rule in ("missing_mx", "no_spf", "no_dmarc", "spf_softfail"):
            assert not result.indicators.flags[rule]

    def test_missing_mx_and_no_spf_and_no_dmarc(self):
        dns = DnsRecordSet(has_mx=False, spf="none", has_dmarc=False)
        result = run_rules(_msg(), dns, CFG)
        assert result.indicators.flags["missing_mx"]
        assert result.indicators.flags["no_spf"]
        assert result.indicators.flags["no_dmarc"]
        assert result.score == 7

    def test_softfail_not_double_counted_with_no_spf(self):
        dns = DnsRecordSet(has_mx=True, spf="softfail", has_dmarc=True)
        result = run_rules(_msg(), dns, CFG)
        assert result.indicators.flags["spf_softfail"]
        assert not result.indicators.flags["no_spf"]

    def test_domain_mismatch_uses_registrable_domains(self):
        msg = _msg(body="https://mail.example.com/x", sender="a@example.com")
        assert not run_rules(msg, LEGIT_DNS, CFG).indicators.flags["domain_mismatch"]
        msg = _msg(body="https://other.net/x", sender="a@example.com")
        assert run_rules(msg, LEGIT_DNS, CFG).indicators.flags["domain_mismatch"]

    def test_ip_literal_does_not_count_as_mismatch(self):
        msg = _msg(body="http://10.0.0.1/x", sender="a@example.com")
        flags = run_rules(msg, LEGIT_DNS, CFG).indicators.flags
        assert flags["ip_literal_link"]
        assert not flags["domain_mismatch"]

    def test_url_obfuscation_param_cap(self):
        under = "https://example.com/p?" + "&".join(f"k{i}={i}" for i in range(8))
        over = "https://example.com/p?" + "&".join(f"k{i}={i}" for i in range(9))
        assert not run_rules(_msg(body=under, sender="a@example.com"), None,
                             CFG).indicators.flags["url_obfuscation"]
        assert run_rules(_msg(body=over, sender="a@example.com"), None,
                         CFG).indicators.flags["url_obfuscation"]

    def test_url_obfuscation_percent_escapes(self):
        msg = _msg(body="https://example.com/%70%61th", sender="a@example.com")
        assert run_rules(msg, None, CFG).indicators.flags["url_obfuscation"]

    def test_urgency_fires_once_for_many_phrases(self):
        msg = _msg(body="urgent! immediate action! pay now!")
        result = run_rules(msg, None, CFG)
        assert result.indicators.flags["urgency_keywords"]
        assert result.score == 1

    def test_credential_patterns_word_boundary(self):
        assert run_rules(_msg(body="reset your password"), None,
                         CFG).indicators.flags["credential_request"]
        assert not run_rules(_msg(body="passwordless sign-in"), None,
                             CFG).indicators.flags["credential_request"]

    def test_generic_greeting(self):
        assert run_rules(_msg(body="Dear Customer, welcome"), None,
                         CFG).indicators.flags["generic_greeting"]

    def test_freemail_domain(self):
        assert run_rules(_msg(sender="a@gmail.com"), None,
                         CFG).indicators.flags["freemail_domain"]
        assert not run_rules(_msg(sender="a@corp.com"), None,
                             CFG).indicators.flags["freemail_domain"]

    def test_extra_rules_disabled_by_default(self):
        result = run_rules(_msg(), LEGIT_DNS, CFG)
        for rule in ("lookalike_domain", "freemail_brand_claim",
                     "strict_dmarc_no_align"):
            assert rule not in result.indicators.flags

    def test_lookalike_domain_when_enabled(self):
        cfg = RuleConfig(
            enabled_rules=frozenset(DEFAULT_ENABLED | {"lookalike_domain"}),
            brand_domains=("paypal.com",),
        )
        msg = _msg(sender="a@paypa1.com")
        assert run_rules(msg, None, cfg).indicators.flags["lookalike_domain"]


class TestConfig:
    def test_weight_range_enforced(self):
        with pytest.raises(ValueError):
            RuleConfig(weights={**DEFAULT_WEIGHTS, "missing_mx": 4})

    def test_tier_order_enforced(self):
        with pytest.raises(ValueError):
            RuleConfig(benign_upper=5, phishing_lower=5)

    def test_disable_unknown_rule(self):
        with pytest.raises(UnknownRuleId):
            CFG.with_disabled({"not_a_rule"})

    def test_from_dict_weight_override(self):
        cfg = RuleConfig.from_dict({"weights": {"urgency_keywords": 2}})
        assert cfg.weights["urgency_keywords"] == 2
        assert cfg.weights["missing_mx"] == 3


class TestDeterminism:
    def test_same_input_same_output(self, corpus, resolver):
        for msg in corpus[:10]:
            dns = resolver.resolve(msg.from_domain) if msg.from_domain else None
            a = run_rules(msg, dns, CFG)
            b = run_rules(msg, dns, CFG)
            assert a == b


class TestAblation:
    def test_disabling_rule_never_raises_score(self, corpus, resolver):
        dataset = [
            (m, resolver.resolve(m.from_domain) if m.from_domain else None)
            for m in corpus
        ]
        full = rule_ablation(dataset)
        without = rule_ablation(dataset, disabled={"credential_request"})
        assert without.metrics.recall <= full.metrics.recall + 1e-9

    def test_per_rule_stats_shape(self, corpus, resolver):
        dataset = [
            (m, resolver.resolve(m.from_domain) if m.from_domain else None)
            for m in corpus
        ]
        report = rule_ablation(dataset)
        stats = report.per_rule["credential_request"]
        assert 0.0 <= stats["phishing_coverage"] <= 1.0
        assert stats["rule_precision"] is None or 0.0 <= stats["rule_precision"] <= 1.0
