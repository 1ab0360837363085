import json
from importlib import resources
from pathlib import Path

import pytest

from mailsentry.dns import FixtureResolver
from mailsentry.message import load_jsonl_corpus
from mailsentry.redaction import redact
from mailsentry.retrieval.index import build_index
from mailsentry.retrieval.provider import HashingEmbedder

TESTDATA = Path(__file__).parent / "data"


def fixture_path(name: str) -> Path:
    base = resources.files("mailsentry").joinpath(f"assets/fixtures/{name}")
    return Path(str(base))


@pytest.fixture(scope="session")
def corpus():
    return load_jsonl_corpus(fixture_path("corpus.jsonl"))


@pytest.fixture(scope="session")
def seed_corpus():
    return load_jsonl_corpus(fixture_path("seed_corpus.jsonl"))


@pytest.fixture(scope="session")
def resolver():
    return FixtureResolver.from_jsonl(fixture_path("dns.jsonl"))


@pytest.fixture(scope="session")
def expected_rules():
    with open(TESTDATA / "expected_rules.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def provider():
    return HashingEmbedder(dim=256)


@pytest.fixture(scope="session")
def seed_index(seed_corpus, provider):
    return build_index(
        [(m.id, redact(m.body_text).redacted_text) for m in seed_corpus],
        provider,
        labels=[m.ground_truth for m in seed_corpus],
    )
