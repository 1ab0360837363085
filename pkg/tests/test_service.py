import json
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from mailsentry.redaction import scan_exposure
from mailsentry.service import default_service


def record_payload(i=0, body=None, verdict_hint="review"):
    """JSON corpus items crafted to hit specific phase-1 tiers."""
    if body is None:
        if verdict_hint == "review":
            # no_spf (2) via account-services.ml -> needs_review
            return {
                "id": f"review-{i}", "from": "support@account-services.ml",
                "subject": "Notice available",
                "body": "Please review the posted notice in your account area.",
            }
        if verdict_hint == "benign":
            return {
                "id": f"benign-{i}", "from": "care@lakeside-clinic.com",
                "subject": "Appointment reminder",
                "body": "Hello, see you Tuesday at 10am.",
            }
    return {"id": f"msg-{i}", "from": "a@b.com", "subject": "s", "body": body}


NAIVE = {
    "id": "naive-1",
    "from": "security@mypatient-portal.tk",
    "subject": "URGENT: Your Patient Portal Will Be LOCKED - Verify Now!",
    "body": "SECURITY ALERT: Your patient portal account will be locked in "
            "24 hours due to suspicious activity. Visit "
            "http://198.45.123.67/portal-verify and enter your username, "
            "password, and SSN immediately to prevent account closure!",
}


@pytest.fixture()
def client(tmp_path):
    app = default_service(tmp_path / "data", degraded=True)
    with TestClient(app) as c:
        yield c


class TestAnalyze:
    def test_naive_fixture_phishing_override(self, client):
        response = client.post("/api/analyze", json=NAIVE)
        assert response.status_code == 200
        record = response.json()
        assert record["decision"]["verdict"] == "phishing"
        assert record["decision"]["rationale_code"] == "phase1_override"
        assert record["phase1"]["score"] == 8
        assert record["degraded"] is True

    def test_benign_not_queued(self, client):
        client.post("/api/analyze", json=record_payload(verdict_hint="benign"))
        assert client.get("/api/queue").json() == []

    def test_oversized_body_rejected(self, client):
        huge = record_payload(body="x" * (300 * 1024))
        assert client.post("/api/analyze", json=huge).status_code == 400

    def test_raw_eml_accepted(self, client):
        raw = b"From: a@b.com\r\nSubject: hi\r\n\r\nplain body"
        response = client.post("/api/analyze", content=raw)
        assert response.status_code == 200
        assert response.json()["decision"]["verdict"] == "benign"

    def test_unparseable_rejected_400(self, client):
        assert client.post("/api/analyze", content=b"\x00\x01").status_code == 400


class TestQueue:
    def test_pending_ordering_and_exclusion(self, client):
        for i in range(3):
            client.post("/api/analyze", json=record_payload(i))
        queue = client.get("/api/queue").json()
        assert [q["message_id"] for q in queue] == ["review-0", "review-1",
                                                    "review-2"]
        client.post("/api/queue/review-1/decision",
                    json={"decision": "mark_benign", "reviewer": "rey"})
        queue = client.get("/api/queue").json()
        assert [q["message_id"] for q in queue] == ["review-0", "review-2"]

    def test_decision_write_once(self, client):
        client.post("/api/analyze", json=record_payload(0))
        first = client.post("/api/queue/review-0/decision",
                            json={"decision": "confirm_phishing",
                                  "reviewer": "a"})
        second = client.post("/api/queue/review-0/decision",
                             json={"decision": "mark_benign", "reviewer": "b"})
        assert first.status_code == 200
        assert second.status_code == 409
        detail = client.get("/api/records/review-0").json()
        assert detail["review"]["decision"] == "confirm_phishing"

    def test_concurrent_decisions_exactly_one_wins(self, client):
        client.post("/api/analyze", json=record_payload(0))

        def attempt(i):
            return client.post(
                "/api/queue/review-0/decision",
                json={"decision": "confirm_phishing", "reviewer": f"r{i}"},
            ).status_code

        with ThreadPoolExecutor(max_workers=8) as pool:
            codes = list(pool.map(attempt, range(8)))
        assert codes.count(200) == 1
        assert codes.count(409) == 7

    def test_unknown_record_404(self, client):
        response = client.post("/api/queue/ghost/decision",
                               json={"decision": "mark_benign", "reviewer": "x"})
        assert response.status_code == 404

    def test_bad_decision_value_400(self, client):
        client.post("/api/analyze", json=record_payload(0))
        response = client.post("/api/queue/review-0/decision",
                               json={"decision": "shrug", "reviewer": "x"})
        assert response.status_code == 400

    def test_audit_log_written(self, client, tmp_path):
        client.post("/api/analyze", json=record_payload(0))
        client.post("/api/queue/review-0/decision",
                    json={"decision": "mark_benign", "reviewer": "rey"})
        audit = (tmp_path / "data" / "audit.jsonl").read_text().strip()
        entry = json.loads(audit)
        assert entry["record_id"] == "review-0"
        assert entry["reviewer"] == "rey"


class TestMetricsEndpoint:
    def test_fresh_server_zero_counters(self, client):
        metrics = client.get("/api/metrics").json()
        assert metrics["total_analyzed"] == 0
        assert metrics["review_rate"] == 0.0

    def test_review_rate_counter_arithmetic(self, client):
        for i in range(13):
            client.post("/api/analyze", json=record_payload(i))
        for i in range(87):
            client.post("/api/analyze",
                        json={**record_payload(verdict_hint="benign"),
                              "id": f"benign-{i}"})
        metrics = client.get("/api/metrics").json()
        assert metrics["total_analyzed"] == 100
        assert metrics["review_rate"] == pytest.approx(0.13)

    def test_record_404(self, client):
        assert client.get("/api/records/ghost").status_code == 404


class TestCrashRecovery:
    def test_replay_restores_records_and_queue(self, tmp_path):
        data = tmp_path / "data"
        app = default_service(data, degraded=True)
        with TestClient(app) as client:
            client.post("/api/analyze", json=record_payload(0))
            client.post("/api/analyze", json=record_payload(1))
            client.post("/api/queue/review-0/decision",
                        json={"decision": "mark_benign", "reviewer": "rey"})
        # simulate restart: new app over the same event log
        reborn = default_service(data, degraded=True)
        with TestClient(reborn) as client:
            queue = client.get("/api/queue").json()
            assert [q["message_id"] for q in queue] == ["review-1"]
            detail = client.get("/api/records/review-0").json()
            assert detail["review"]["decision"] == "mark_benign"


class TestAuth:
    def test_token_required_when_configured(self, tmp_path):
        app = default_service(tmp_path / "data", degraded=True, token="hunter2")
        with TestClient(app) as client:
            assert client.get("/api/queue").status_code == 401
            ok = client.get("/api/queue",
                            headers={"Authorization": "Bearer hunter2"})
            assert ok.status_code == 200


class TestPrivacyBoundary:
    def test_store_scan_finds_zero_exposure(self, tmp_path):
        app = default_service(tmp_path / "data")  # full pipeline, local embedder
        pii_bodies = [
            "Contact me at jane.roe@example.com about your password reset",
            "My ssn is 123-45-6789 and my card is 4539-1488-0343-6467",
            "Call 555-123-4567; date of birth 01/02/1990 on file",
        ]
        with TestClient(app) as client:
            for i, body in enumerate(pii_bodies * 4):
                payload = record_payload(i, body=body)
                payload["id"] = f"pii-{i}"
                assert client.post("/api/analyze", json=payload).status_code == 200
        events = (tmp_path / "data" / "events.jsonl").read_text()
        for line in events.splitlines():
            report = scan_exposure(line)
            assert not report.exposure, line
