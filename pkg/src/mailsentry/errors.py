"""Exception types shared across the package."""

from __future__ import annotations


class MailSentryError(Exception):
    """Base class for all package errors."""


class MalformedMessage(MailSentryError):
    """Raw input is not a parseable RFC-822-style message."""


class EmptyArchive(MailSentryError):
    """An mbox archive contained no messages."""


class UnknownRuleId(MailSentryError):
    """A rule id was referenced that the engine does not know."""


class UnmappedIndicator(MailSentryError):
    """An indicator fired with no ontology property mapping."""


class InconsistentInput(MailSentryError):
    """Cross-module inputs disagree (e.g. a match cites an unfired property)."""


class EmptyDataset(MailSentryError):
    """An operation that needs data received none."""


class EmptySample(EmptyDataset):
    """A sampling-based report received an empty sample."""


class ProviderUnavailable(MailSentryError):
    """An external embedding or text-generation provider cannot be reached."""


class DimensionMismatch(MailSentryError):
    """Vector dimensions disagree between query, index, or provider."""


class UnredactedInput(MailSentryError):
    """Text failed the exposure scan before leaving the trust boundary."""


class MixedLabelCorpus(MailSentryError):
    """A retrieval corpus contained non-phishing rows without the mixed flag."""


class DuplicateId(MailSentryError):
    """Two corpus entries share an id."""


class EmptyIndex(MailSentryError):
    """Query against an index with no entries."""


class UnknownMode(MailSentryError):
    """Named operating mode not present in the modes config."""


class TooSmallStratum(MailSentryError):
    """A (source, label) cell is too small to stratify."""


class DegeneratePair(MailSentryError):
    """Paired classifier comparison has no discordant pairs."""


class EmptyGrid(MailSentryError):
    """Threshold sweep called with no thresholds."""


class ConvergenceFailure(MailSentryError):
    """Iterative fit did not converge; a partial model may still be attached."""

    def __init__(self, message: str, model=None):
        super().__init__(message)
        self.model = model


class ZeroCost(MailSentryError):
    """Total deployment cost is zero; ROI undefined."""
