"""Transcript ingest: parse timed transcription documents and cut them into segments.

Two input formats are supported:

* ``timed_json``: UTF-8 JSON produced by a speech-to-text service, carrying one
  item per spoken word or punctuation mark with start/end offsets in seconds.
* ``plain_text``: raw UTF-8 text without timing. Synthetic timestamps are
  assigned at a uniform WORD_SPACING_S per word so the rest of the pipeline
  can treat both formats identically.

Segmentation is duration based: a boundary is drawn every ``max_duration_s``
seconds and each word lands in the slice that contains its end time, so a word
ending exactly on a boundary stays with the earlier segment. Punctuation
always follows the word it trails.
"""
from __future__ import annotations

import hashlib
import json
import math
import re
from bisect import bisect_left
from dataclasses import dataclass, field

from .errors import InvalidParameter, MalformedDocument, NonMonotonicTimestamps

PRONUNCIATION = "pronunciation"
PUNCTUATION = "punctuation"

#: Synthetic spacing used when a plain-text document has no timing info.
WORD_SPACING_S = 0.4

#: Sentence punctuation split off words in plain-text input.
_TRAILING_PUNCT_RE = re.compile(r"[.,!?;:]+$")


@dataclass(frozen=True)
class TimedWord:
    """One transcribed item: a spoken word or a punctuation mark."""

    start_s: float
    end_s: float
    text: str
    kind: str = PRONUNCIATION


@dataclass(frozen=True)
class TimedTranscript:
    """A full transcript for one video, words ordered by start time."""

    video_id: str
    title: str
    duration_s: float
    words: tuple[TimedWord, ...]

    @property
    def word_count(self) -> int:
        return sum(1 for w in self.words if w.kind == PRONUNCIATION)


@dataclass(frozen=True)
class SegmentationConfig:
    """Parameters controlling how a transcript is cut.

    mode is either "fixed_duration" (cut every max_duration_s seconds) or
    "explicit_cuts" (cut at the given offsets). cuts_s must be strictly
    increasing and lie strictly inside (0, duration).
    """

    max_duration_s: float = 300.0
    mode: str = "fixed_duration"
    cuts_s: tuple[float, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class TranscriptSegment:
    """A contiguous slice of a transcript.

    Segments of one video tile [0, duration_s] without gaps or overlaps and
    indices count up from 0. ``text`` is the rendering of the words the slice
    contains; ``words`` keeps the underlying items for downstream checks.
    """

    segment_id: str
    video_id: str
    index: int
    start_s: float
    end_s: float
    text: str
    words: tuple[TimedWord, ...] = field(default_factory=tuple)

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


def segment_id_for(video_id: str, index: int) -> str:
    """Deterministic segment id so re-ingesting the same video is stable."""
    digest = hashlib.sha256(f"{video_id}:{index}".encode("utf-8")).hexdigest()
    return digest[:16]


def render_words(words) -> str:
    """Join words with single spaces; punctuation attaches without a space."""
    parts: list[str] = []
    for w in words:
        if w.kind == PUNCTUATION and parts:
            parts[-1] += w.text
        elif w.kind == PUNCTUATION:
            parts.append(w.text)
        else:
            parts.append(w.text)
    return " ".join(parts)


def parse_transcript(
    raw: bytes,
    format: str,
    *,
    video_id: str | None = None,
    title: str | None = None,
) -> TimedTranscript:
    """Parse a transcript document into a TimedTranscript.

    Args:
        raw: document bytes.
        format: "timed_json" or "plain_text".
        video_id: identifier override; required metadata for plain_text input
            falls back to a content hash when omitted.
        title: display title override.

    Raises:
        MalformedDocument: undecodable bytes, missing fields, bad field types,
            or timing invariants broken (end before start, duration shorter
            than the last word, words present with zero duration).
        NonMonotonicTimestamps: word start times go backwards.
    """
    if format == "timed_json":
        return _parse_timed_json(raw, video_id, title)
    if format == "plain_text":
        return _parse_plain_text(raw, video_id, title)
    raise InvalidParameter(f"unknown transcript format: {format!r}")


def _decode_utf8(raw: bytes) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedDocument(f"document is not valid UTF-8: {exc}") from None


def _parse_timed_json(raw: bytes, video_id: str | None, title: str | None) -> TimedTranscript:
    try:
        doc = json.loads(_decode_utf8(raw))
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level JSON value must be an object")

    for key, types in (
        ("video_id", str),
        ("title", str),
        ("duration_s", (int, float)),
        ("items", list),
    ):
        if key not in doc:
            raise MalformedDocument(f"missing required field {key!r}")
        if not isinstance(doc[key], types) or isinstance(doc[key], bool):
            raise MalformedDocument(f"field {key!r} has the wrong type")

    words: list[TimedWord] = []
    for i, item in enumerate(doc["items"]):
        if not isinstance(item, dict):
            raise MalformedDocument(f"items[{i}] is not an object")
        try:
            start = float(item["start_s"])
            end = float(item["end_s"])
            text = item["text"]
            kind = item["kind"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDocument(f"items[{i}] is malformed: {exc}") from None
        if not isinstance(text, str) or not text:
            raise MalformedDocument(f"items[{i}].text must be a non-empty string")
        if kind not in (PRONUNCIATION, PUNCTUATION):
            raise MalformedDocument(f"items[{i}].kind must be pronunciation or punctuation")
        if end < start:
            raise MalformedDocument(f"items[{i}] ends before it starts")
        words.append(TimedWord(start_s=start, end_s=end, text=text, kind=kind))

    duration = float(doc["duration_s"])
    transcript = TimedTranscript(
        video_id=video_id or doc["video_id"],
        title=title or doc["title"],
        duration_s=duration,
        words=tuple(words),
    )
    _validate_timing(transcript)
    return transcript


def _parse_plain_text(raw: bytes, video_id: str | None, title: str | None) -> TimedTranscript:
    text = _decode_utf8(raw)
    words: list[TimedWord] = []
    clock = 0.0
    for chunk in text.split():
        match = _TRAILING_PUNCT_RE.search(chunk)
        core = chunk[: match.start()] if match else chunk
        trail = match.group(0) if match else ""
        if core:
            words.append(TimedWord(clock, clock + WORD_SPACING_S, core, PRONUNCIATION))
            clock += WORD_SPACING_S
        for mark in trail:
            # Zero-duration marks pinned to the end of the preceding word.
            words.append(TimedWord(clock, clock, mark, PUNCTUATION))

    if video_id is None:
        video_id = hashlib.sha256(raw).hexdigest()[:12]
    transcript = TimedTranscript(
        video_id=video_id,
        title=title or video_id,
        duration_s=clock,
        words=tuple(words),
    )
    _validate_timing(transcript)
    return transcript


def _validate_timing(t: TimedTranscript) -> None:
    last_start = None
    for i, w in enumerate(t.words):
        if w.end_s < w.start_s:
            raise MalformedDocument(f"word {i} ends before it starts")
        if last_start is not None and w.start_s < last_start:
            raise NonMonotonicTimestamps(
                f"word {i} starts at {w.start_s} before previous start {last_start}"
            )
        last_start = w.start_s
    if t.duration_s < 0:
        raise MalformedDocument("duration_s is negative")
    # A wordless transcript is fine (silence); its duration still segments.
    if t.words and t.duration_s < t.words[-1].end_s:
        raise MalformedDocument("duration_s is shorter than the last word")


def _boundaries(t: TimedTranscript, cfg: SegmentationConfig) -> list[float]:
    """Upper boundaries of every segment, last one equal to the duration."""
    if cfg.mode == "fixed_duration":
        if cfg.max_duration_s <= 0:
            raise InvalidParameter("max_duration_s must be positive")
        count = max(1, math.ceil(t.duration_s / cfg.max_duration_s))
        uppers = [min((k + 1) * cfg.max_duration_s, t.duration_s) for k in range(count)]
        uppers[-1] = t.duration_s
        return uppers
    if cfg.mode == "explicit_cuts":
        cuts = list(cfg.cuts_s)
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise InvalidParameter("cuts_s must be strictly increasing")
        if cuts and (cuts[0] <= 0 or cuts[-1] >= t.duration_s):
            raise InvalidParameter("cuts_s must lie strictly inside (0, duration)")
        return cuts + [t.duration_s]
    raise InvalidParameter(f"unknown segmentation mode: {cfg.mode!r}")


def segment_transcript(
    t: TimedTranscript, cfg: SegmentationConfig | None = None
) -> list[TranscriptSegment]:
    """Cut a transcript into consecutive segments.

    Placement rule: a word belongs to the earliest segment whose upper
    boundary is at or past the word's end time, so a word ending exactly on
    a boundary goes to the earlier segment. Punctuation marks stay with the
    word they follow regardless of their own timestamps. An empty transcript
    yields an empty list; slices that happen to contain no words still appear
    so that indices stay consecutive and the segments tile the duration.
    """
    cfg = cfg or SegmentationConfig()
    if t.duration_s == 0 and not t.words:
        return []
    uppers = _boundaries(t, cfg)
    last = len(uppers) - 1

    buckets: list[list[TimedWord]] = [[] for _ in uppers]
    prev_word_bucket: int | None = None
    for w in t.words:
        if w.kind == PUNCTUATION and prev_word_bucket is not None:
            buckets[prev_word_bucket].append(w)
            continue
        current = min(bisect_left(uppers, w.end_s), last)
        buckets[current].append(w)
        if w.kind == PRONUNCIATION:
            prev_word_bucket = current

    segments = []
    lower = 0.0
    for index, upper in enumerate(uppers):
        words = tuple(buckets[index])
        segments.append(
            TranscriptSegment(
                segment_id=segment_id_for(t.video_id, index),
                video_id=t.video_id,
                index=index,
                start_s=lower,
                end_s=upper,
                text=render_words(words),
                words=words,
            )
        )
        lower = upper
    return segments
