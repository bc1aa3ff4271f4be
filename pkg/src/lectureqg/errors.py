"""Exception types shared across the toolkit.

Every error raised by the library derives from LectureQgError so callers
can catch one base class at the API boundary.
"""


class LectureQgError(Exception):
    """Base class for all library errors."""


class InvalidParameter(LectureQgError):
    """A caller-supplied parameter is out of range or malformed."""


# --- transcript ingest ---

class MalformedDocument(LectureQgError):
    """The transcript document could not be parsed or violates its invariants."""


class NonMonotonicTimestamps(LectureQgError):
    """Word start times decrease somewhere in the transcript."""


# --- document store ---

class NotFound(LectureQgError):
    """The referenced document or question rank does not exist."""


class VersionConflict(LectureQgError):
    """Compare-and-set failed: the document head moved past expected_version."""

    def __init__(self, message: str, current_version: int = 0):
        super().__init__(message)
        self.current_version = current_version


class NoSuchVersion(LectureQgError):
    """The requested version number is not in the document history."""


# --- text analysis ---

class PhraseNotInSegment(LectureQgError):
    """A custom keyword phrase does not occur in the segment text."""


# --- summarization and providers ---

class EmptyInput(LectureQgError):
    """The text to summarize contains no sentences."""


class ProviderUnavailable(LectureQgError):
    """The generative provider could not be reached or returned a server error."""


class ProviderProtocolError(LectureQgError):
    """The generative provider answered with a malformed or invalid response."""


# --- question generation ---

class KeywordNotInSegment(LectureQgError):
    """The answer keyword does not occur in the source segment."""


class EmptySummary(LectureQgError):
    """Question generation was asked to run over an empty summary."""


class KeywordNotInSummary(LectureQgError):
    """A gap-fill keyword does not occur in the summary text."""


class OverlappingKeywords(LectureQgError):
    """Every remaining occurrence of a gap-fill keyword overlaps an earlier gap."""


class InsufficientDistractors(LectureQgError):
    """No strategy could produce the requested number of distractors."""


# --- review workflow ---

class InvalidAnswerForType(LectureQgError):
    """The replacement answer is not valid for the question type."""


class MissingBestQuestion(LectureQgError):
    """A Good verdict on this set requires a best_question_rank."""


class InvalidRating(LectureQgError):
    """The rating payload violates the review protocol."""
