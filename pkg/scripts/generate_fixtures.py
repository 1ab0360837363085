"""Regenerate the bundled fixture corpus, DNS snapshot, and seed corpus.

Every message is an instance of a hand-designed archetype with a known set
of fired rules. The expected fired sets are written to tests/data so the
test suite can recompute scores and verdicts independently of the engine.

Run from the repository root: python scripts/generate_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
ASSETS = ROOT / "src" / "mailsentry" / "assets" / "fixtures"
TESTDATA = ROOT / "tests" / "data"

NAMES = [
    "Jordan", "Riley", "Casey", "Morgan", "Avery", "Quinn", "Rowan", "Skyler",
    "Emerson", "Finley", "Harper", "Sage", "Reese", "Dakota", "Ellis",
]

# (key, count, label, sender, subject, body template, fired rules)
ARCHETYPES = [
    (
        "phish-naive", 1, "phishing", "security@mypatient-portal.tk",
        "URGENT: Your Patient Portal Will Be LOCKED - Verify Now!",
        "SECURITY ALERT: Your patient portal account will be locked in 24 "
        "hours due to suspicious activity. Visit "
        "http://198.45.123.67/portal-verify and enter your username, "
        "password, and SSN immediately to prevent account closure!",
        ["spf_softfail", "no_dmarc", "ip_literal_link", "urgency_keywords",
         "credential_request"],
    ),
    (
        "phish-harvest", 5, "phishing", "alerts@secure-billing.tk",
        "Account notice",
        "Dear customer, your password must be reset before Friday. Visit "
        "https://secure-billing-update.com/reset to continue. Reference "
        "case {name}.",
        ["missing_mx", "no_spf", "no_dmarc", "generic_greeting",
         "credential_request", "domain_mismatch"],
    ),
    (
        "phish-shortener", 4, "phishing", "billing@invoice-center.com",
        "Invoice due",
        "Your invoice requires immediate action. Pay now at "
        "https://bit.ly/inv-4821 to avoid late fees, {name}.",
        ["urgency_keywords", "url_shortener", "domain_mismatch"],
    ),
    (
        "phish-lowsignal", 4, "phishing", "newsletter@health-digest.com",
        "Wellness newsletter",
        "Hello {name}, please read our wellness newsletter at "
        "https://health-digest.com/news when you have a moment. Thank you.",
        [],
    ),
    (
        "phish-textonly", 2, "phishing", "contact@wellness-plan.net",
        "Urgent follow-up",
        "Hi {name}, it is urgent that we speak about your results. Call the "
        "office today.",
        ["urgency_keywords"],
    ),
    (
        "phish-legitdns", 3, "phishing", "accounts@trusted-partners.com",
        "Your statement",
        "Dear user, your statement is ready at "
        "https://trusted-partners.com/statements for account holder {name}.",
        ["generic_greeting"],
    ),
    (
        "phish-belowthresh", 3, "phishing", "offers@deal-stream.net",
        "Weekly offers",
        "Valued member, see this week's offers at "
        "https://deal-stream.net/offers curated for you, {name}.",
        ["generic_greeting"],
    ),
    (
        "phish-review-freemail", 2, "phishing", "promo@gmail.com",
        "Rewards summary",
        "Dear customer, your rewards summary is posted at "
        "https://reward-hub.net/summary for member {name}.",
        ["freemail_domain", "generic_greeting", "domain_mismatch"],
    ),
    (
        "phish-review-nospf", 2, "phishing", "support@account-services.ml",
        "Notice available",
        "Please review the attached notice at "
        "https://account-services.ml/notice at your convenience, {name}.",
        ["no_spf"],
    ),
    (
        "phish-obfuscated", 2, "phishing", "updates@patient-alerts.tk",
        "Immediate action required",
        "Please update your information at "
        "https://patient-alerts.tk/form?a=1&b=2&c=3&d=4&e=5&f=6&g=7&h=8&i=9 "
        "today, {name}.",
        ["spf_softfail", "no_dmarc", "url_obfuscation", "urgency_keywords"],
    ),
    (
        "phish-multifactor", 2, "phishing", "news@medbill-notice.cf",
        "Statement ready",
        "Urgent: Dear user, your statement is available at "
        "https://medbill-notice.cf/view for review, {name}.",
        ["urgency_keywords", "generic_greeting"],
    ),
    (
        "benign-reminder", 8, "benign", "care@lakeside-clinic.com",
        "Appointment reminder",
        "Hello {name}, this is a reminder of your appointment on Tuesday at "
        "10am. Reply to this message to confirm or reschedule.",
        [],
    ),
    (
        "benign-newsletter", 6, "benign", "news@wellness-weekly.org",
        "Spring issue",
        "Hi {name}, the spring issue is out: "
        "https://wellness-weekly.org/spring. Enjoy!",
        [],
    ),
    (
        "benign-invoice", 5, "benign", "billing@officesupply-co.com",
        "Invoice 2231",
        "Hello {name}, invoice 2231 for your March order is attached. "
        "Payment is due in 30 days. Questions? Reply here.",
        [],
    ),
    (
        "benign-personal", 4, "benign", "jamie.lee@gmail.com",
        "Lunch Thursday?",
        "Hey {name}, are we still on for lunch Thursday? Let me know.",
        ["freemail_domain"],
    ),
    (
        "benign-maintenance", 3, "benign", "it@lakeside-clinic.com",
        "Scheduled maintenance",
        "Hi {name}, systems are down for maintenance this weekend; status "
        "page: https://lakeside-clinic.com/status",
        [],
    ),
    (
        "benign-hr", 2, "benign", "hr@officesupply-co.com",
        "Open enrollment",
        "Hello team, open enrollment details for {name} and staff are at "
        "https://officesupply-co.com/hr.",
        [],
    ),
    (
        "benign-fp", 2, "benign", "deals@gmail.com",
        "Flash sale today",
        "Hi {name}, flash sale today! Grab the coupon: https://bit.ly/sale-22 "
        "via our shop https://shop-goodies.net/deals",
        ["freemail_domain", "url_shortener", "domain_mismatch"],
    ),
]

DNS = [
    {"domain": "mypatient-portal.tk", "has_mx": True, "spf": "softfail", "has_dmarc": False},
    {"domain": "secure-billing.tk", "has_mx": False, "spf": "none", "has_dmarc": False},
    {"domain": "invoice-center.com", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    {"domain": "health-digest.com", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    {"domain": "trusted-partners.com", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    {"domain": "gmail.com", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    {"domain": "account-services.ml", "has_mx": True, "spf": "none", "has_dmarc": True},
    {"domain": "patient-alerts.tk", "has_mx": True, "spf": "softfail", "has_dmarc": False},
    {"domain": "lakeside-clinic.com", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    {"domain": "wellness-weekly.org", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    {"domain": "officesupply-co.com", "has_mx": True, "spf": "pass_policy", "has_dmarc": True},
    # wellness-plan.net, deal-stream.net, medbill-notice.cf are deliberately
    # absent: unknown DNS fires no indicators.
]

# Reworded variants of the phishing archetypes; high n-gram overlap gives the
# evaluation corpus strong retrieval matches without duplicating any message.
SEED_SNIPPETS = [
    ("seed-001", "SECURITY ALERT: your patient portal account will be locked "
     "in 24 hours. Visit the portal-verify page and enter your username and "
     "secret code immediately to prevent account closure."),
    ("seed-002", "Dear customer, your account code must be reset before "
     "Friday. Visit the secure billing update page to continue."),
    ("seed-003", "Your invoice requires immediate action. Pay now at the "
     "short link to avoid late fees."),
    ("seed-004", "Urgent: Dear user, your statement is available for review "
     "at the notice page."),
    ("seed-005", "Please update your information at the alerts form today to "
     "keep your profile active."),
    ("seed-006", "Dear customer, your rewards summary is posted at the "
     "rewards hub for your member account."),
    ("seed-007", "Valued member, see this week's offers curated for you at "
     "the deal stream page."),
    ("seed-008", "It is urgent that we speak about your results. Call the "
     "office today before close of business."),
    ("seed-009", "Account notice: unusual sign-in activity detected. Confirm "
     "your identity at the review link within 24 hours."),
    ("seed-010", "Final reminder: your mailbox storage is full. Upgrade now "
     "at the storage portal to keep receiving mail."),
    ("seed-011", "Your package could not be delivered. Reschedule at the "
     "courier tracking page within 48 hours."),
    ("seed-012", "Payroll update required: confirm your direct deposit "
     "details at the employee portal before the next cycle."),
    ("seed-013", "Your tax refund is ready. Claim it at the revenue portal "
     "by providing your filing reference."),
    ("seed-014", "Security team: we blocked a sign-in from a new device. "
     "Review the attempt at the account safety page."),
    ("seed-015", "Your subscription payment failed. Update billing at the "
     "renewal page to avoid interruption."),
    ("seed-016", "Document shared with you: open the secure file at the "
     "sharing portal using your work account."),
    ("seed-017", "Benefits enrollment closes tonight. Confirm your elections "
     "at the benefits portal immediately."),
    ("seed-018", "Your prescription order is on hold. Verify your insurance "
     "member id at the pharmacy portal."),
    ("seed-019", "Appointment cancelled: rebook at the scheduling portal "
     "within 24 hours to keep your slot priority."),
    ("seed-020", "Invoice overdue: remit payment at the billing portal to "
     "avoid service suspension fees."),
]


def main() -> None:
    ASSETS.mkdir(parents=True, exist_ok=True)
    TESTDATA.mkdir(parents=True, exist_ok=True)

    corpus = []
    expected = {}
    counter = 0
    for key, count, label, sender, subject, body_tpl, fired in ARCHETYPES:
        for i in range(count):
            counter += 1
            name = NAMES[(counter - 1) % len(NAMES)]
            source = "clinic" if counter % 2 else "vendor"
            msg_id = f"{key}-{i + 1:02d}"
            corpus.append({
                "id": msg_id,
                "from": sender,
                "subject": subject,
                "body": body_tpl.format(name=name),
                "label": label,
                "source": source,
            })
            expected[msg_id] = {"fired": sorted(fired), "label": label}

    with open(ASSETS / "corpus.jsonl", "w", encoding="utf-8") as handle:
        for row in corpus:
            handle.write(json.dumps(row, sort_keys=True) + "\n")

    with open(ASSETS / "dns.jsonl", "w", encoding="utf-8") as handle:
        for row in DNS:
            handle.write(json.dumps(row, sort_keys=True) + "\n")

    with open(ASSETS / "seed_corpus.jsonl", "w", encoding="utf-8") as handle:
        for seed_id, text in SEED_SNIPPETS:
            handle.write(json.dumps(
                {"id": seed_id, "from": "", "subject": "", "body": text,
                 "label": "phishing", "source": "seed"},
                sort_keys=True) + "\n")

    with open(TESTDATA / "expected_rules.json", "w", encoding="utf-8") as handle:
        json.dump(expected, handle, indent=2, sort_keys=True)

    print(f"wrote {len(corpus)} messages, {len(DNS)} dns rows, "
          f"{len(SEED_SNIPPETS)} seed snippets")


if __name__ == "__main__":
    main()
