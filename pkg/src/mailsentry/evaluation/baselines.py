"""Reference classifiers: majority class, TF-IDF logistic regression, and a
zero-shot external-provider baseline with privacy-exposure accounting."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..errors import ConvergenceFailure, EmptyDataset, ProviderUnavailable
from ..message import EmailMessage
from ..redaction import redact, scan_exposure
from .metrics import MetricsReport, compute_metrics

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def _label_of(msg: EmailMessage) -> str:
    if msg.ground_truth is None:
        raise ValueError(f"message {msg.id} has no label")
    return msg.ground_truth


def baseline_majority(train: list[EmailMessage],
                      test: list[EmailMessage]) -> MetricsReport:
    """Predict the most frequent training label; ties go to benign."""
    if not train:
        raise EmptyDataset("majority baseline needs training data")
    phishing = sum(1 for m in train if _label_of(m) == "phishing")
    benign = len(train) - phishing
    verdict = "phishing" if phishing > benign else "benign"
    preds = [(verdict, _label_of(m)) for m in test]
    return compute_metrics(preds)


def _tokens(text: str) -> list[str]:
    words = _TOKEN_RE.findall(text.lower())
    return words + [f"{a} {b}" for a, b in zip(words, words[1:])]


@dataclass
class TfidfLogreg:
    """Unigram+bigram TF-IDF features with an L2-penalized logistic model
    fit by full-batch gradient descent."""

    vocabulary: dict[str, int] = field(default_factory=dict)
    idf: np.ndarray | None = None
    weights: np.ndarray | None = None
    bias: float = 0.0
    converged: bool = False

    def _featurize(self, docs: list[str], fit: bool) -> np.ndarray:
        token_lists = [_tokens(d) for d in docs]
        if fit:
            self.vocabulary = {}
            for toks in token_lists:
                for tok in sorted(set(toks)):
                    self.vocabulary.setdefault(tok, len(self.vocabulary))
            df = np.zeros(len(self.vocabulary))
            for toks in token_lists:
                for tok in set(toks):
                    df[self.vocabulary[tok]] += 1
            n = len(docs)
            self.idf = np.log((1 + n) / (1 + df)) + 1.0
        matrix = np.zeros((len(docs), len(self.vocabulary)))
        for i, toks in enumerate(token_lists):
            for tok in toks:
                j = self.vocabulary.get(tok)
                if j is not None:
                    matrix[i, j] += 1
            total = len(toks) or 1
            matrix[i] /= total
        matrix *= self.idf
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        return matrix / norms

    def fit(self, docs: list[str], labels: list[bool], lr: float = 1.0,
            l2: float = 1e-3, max_iter: int = 2000, tol: float = 1e-6) -> None:
        x = self._featurize(docs, fit=True)
        y = np.asarray(labels, dtype=float)
        n, d = x.shape
        self.weights = np.zeros(d)
        self.bias = 0.0
        prev_loss = math.inf
        for _ in range(max_iter):
            z = x @ self.weights + self.bias
            p = 1.0 / (1.0 + np.exp(-z))
            grad_w = x.T @ (p - y) / n + l2 * self.weights
            grad_b = float(np.mean(p - y))
            self.weights -= lr * grad_w
            self.bias -= lr * grad_b
            eps = 1e-12
            loss = float(
                -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
                + 0.5 * l2 * np.dot(self.weights, self.weights)
            )
            if abs(prev_loss - loss) < tol:
                self.converged = True
                return
            prev_loss = loss
        self.converged = False

    def predict(self, docs: list[str]) -> list[bool]:
        x = self._featurize(docs, fit=False)
        z = x @ self.weights + self.bias
        return [bool(v) for v in (z >= 0)]


def baseline_tfidf_logreg(train: list[EmailMessage], test: list[EmailMessage],
                          redact_first: bool = False,
                          max_iter: int = 2000,
                          strict_convergence: bool = False) -> MetricsReport:
    """TF-IDF + logistic regression baseline over subject and body text."""
    if not train:
        raise EmptyDataset("tfidf baseline needs training data")

    def text_of(msg: EmailMessage) -> str:
        raw = f"{msg.subject}\n{msg.body_text}"
        return redact(raw).redacted_text if redact_first else raw

    model = TfidfLogreg()
    model.fit([text_of(m) for m in train],
              [_label_of(m) == "phishing" for m in train],
              max_iter=max_iter)
    if not model.converged and strict_convergence:
        raise ConvergenceFailure(
            f"no convergence after {max_iter} iterations", model=model
        )
    preds = [
        ("phishing" if flag else "benign", _label_of(m))
        for flag, m in zip(model.predict([text_of(m) for m in test]), test)
    ]
    return compute_metrics(preds)


@dataclass(frozen=True)
class ExposureReportCard:
    metrics: MetricsReport
    exposure_rate: float
    exposed_count: int
    total: int
    estimated_cost: float
    provider_id: str


class RuleStubProvider:
    """Offline stand-in: flags a message when obvious cue words appear."""

    provider_id = "stub-rule"

    def generate(self, system_prompt: str, user_prompt: str) -> list[str]:
        lowered = user_prompt.lower()
        cues = ("password", "urgent", "verify", "suspend", "credential")
        return ["phishing" if any(c in lowered for c in cues) else "benign"]


def load_price_sheet(path: str | None = None) -> dict:
    if path is not None:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    raw = resources.files("mailsentry").joinpath("assets/prices.json")
    return json.loads(raw.read_text(encoding="utf-8"))


def _estimate_tokens(text: str) -> int:
    # Rough chars/4 heuristic; good enough for relative cost reporting.
    return max(1, len(text) // 4)


def exposure_baseline(test: list[EmailMessage], provider,
                      price_sheet: dict | None = None) -> ExposureReportCard:
    """Zero-shot provider baseline that deliberately sends unredacted text.

    Exposure rate counts payloads containing at least one PII hit as found
    by the shared redaction scanner; cost uses the per-provider price sheet
    (unknown providers cost 0).
    """
    if not test:
        raise EmptyDataset("exposure baseline needs test data")
    prices = price_sheet if price_sheet is not None else load_price_sheet()
    provider_id = getattr(provider, "provider_id", "unknown")
    per_1k = float(prices.get(provider_id, {}).get("usd_per_1k_tokens", 0.0))

    preds: list[tuple[str, str]] = []
    exposed = 0
    tokens = 0
    for msg in test:
        payload = f"Is this email phishing?\nSubject: {msg.subject}\n\n{msg.body_text}"
        if scan_exposure(payload).exposure:
            exposed += 1
        tokens += _estimate_tokens(payload)
        try:
            lines = provider.generate("You are an email security classifier.",
                                      payload)
        except ProviderUnavailable:
            raise
        answer = (lines[0].strip().lower() if lines else "benign")
        verdict = "phishing" if answer.startswith("phishing") else "benign"
        preds.append((verdict, _label_of(msg)))

    return ExposureReportCard(
        metrics=compute_metrics(preds),
        exposure_rate=exposed / len(test),
        exposed_count=exposed,
        total=len(test),
        estimated_cost=per_1k * tokens / 1000.0,
        provider_id=provider_id,
    )
