"""Teacher review workflow: edit, rate, accept, discard, export.

Question sets live in the store as one document per set. Each question inside
a set carries its status (generated, edited, accepted, discarded), its current
payload, and an append-only history of its text so edits never destroy the
machine output. Ratings are separate immutable documents; a correction is a
new rating that references the one it supersedes, and the effective rating of
a set is the newest one.

Rating protocol: a verdict is Good, Average, or Bad for the whole set. For
short-answer and multiple-choice sets a Good verdict must say which question
was best; yes/no and gap-fill sets are judged as a unit, so the best rank is
optional there. Gap-fill ratings also record the summary they judged, since
that is what the gaps hang off.
"""
from __future__ import annotations

import uuid

from . import store as store_mod
from .errors import (
    InvalidAnswerForType,
    InvalidRating,
    MissingBestQuestion,
    NotFound,
)

STATUS_GENERATED = "generated"
STATUS_EDITED = "edited"
STATUS_ACCEPTED = "accepted"
STATUS_DISCARDED = "discarded"
STATUSES = (STATUS_GENERATED, STATUS_EDITED, STATUS_ACCEPTED, STATUS_DISCARDED)

VERDICTS = ("Good", "Average", "Bad")

#: Question types whose Good rating must name a best question.
BEST_REQUIRED_TYPES = ("SAQ", "MCQ")

_GAP_MARKER = "___("


def new_id() -> str:
    return uuid.uuid4().hex[:12]


def _question_by_rank(doc: dict, rank: int) -> dict:
    for q in doc.get("questions", []):
        if q["rank"] == rank:
            return q
    raise NotFound(f"question set {doc['question_set_id']} has no rank {rank}")


def _text_field(qtype: str) -> str:
    return "gapped_text" if qtype == "GFQ" else "question_text"


def edit_question(
    repo: store_mod.Repository,
    question_set_id: str,
    rank: int,
    *,
    new_text: str | None = None,
    new_answer: str | None = None,
    author: str,
) -> dict:
    """Apply a teacher edit to one question of a set.

    Text edits append a version to the question's history and move its status
    to edited. Answer edits are type-checked: yes/no questions only flip
    between "yes" and "no", multiple choice must not collide with a
    distractor, and gap-fill answers are positional and cannot be replaced
    here. Suspicious but legal edits (a question without a question mark, a
    gap-fill text without gap markers) are accepted and flagged.

    Returns the updated question entry, including any warnings.
    """
    if new_text is None and new_answer is None:
        raise InvalidAnswerForType("nothing to edit: give new_text or new_answer")

    result: dict = {}

    def apply(doc: dict) -> dict:
        question = _question_by_rank(doc, rank)
        qtype = doc["qtype"]
        warnings: list[str] = []

        if new_answer is not None:
            if qtype == "BLQ":
                if new_answer not in ("yes", "no"):
                    raise InvalidAnswerForType("a yes/no answer must be yes or no")
                question["payload"]["answer"] = new_answer
            elif qtype == "SAQ":
                if not new_answer.strip():
                    raise InvalidAnswerForType("answer must not be empty")
                question["payload"]["answer"] = new_answer.strip()
            elif qtype == "MCQ":
                cleaned = new_answer.strip()
                if not cleaned:
                    raise InvalidAnswerForType("answer must not be empty")
                clash = any(
                    cleaned.lower() == d.lower()
                    for d in question["payload"]["distractors"]
                )
                if clash:
                    raise InvalidAnswerForType(
                        "replacement answer equals one of the distractors"
                    )
                question["payload"]["correct_answer"] = cleaned
            else:
                raise InvalidAnswerForType(
                    "gap-fill answers are positional and cannot be replaced"
                )

        if new_text is not None:
            field = _text_field(qtype)
            history = question.setdefault("history", {"versions": []})
            head = store_mod.head_version(history)
            store_mod.append_version(history, new_text, author, head)
            question["payload"][field] = new_text
            if qtype in ("SAQ", "BLQ", "MCQ") and not new_text.rstrip().endswith("?"):
                warnings.append("question text does not end with a question mark")
            if qtype == "GFQ" and _GAP_MARKER not in new_text:
                warnings.append("gapped text contains no gap markers")

        question["status"] = STATUS_EDITED
        question["warnings"] = warnings
        result.update(question)
        return doc

    repo.update("questions", question_set_id, apply)
    return result


def rate_question_set(
    repo: store_mod.Repository,
    question_set_id: str,
    verdict: str,
    *,
    best_question_rank: int | None = None,
    rater: str,
) -> dict:
    """Record an immutable rating for a question set.

    A repeat rating supersedes the previous effective one by reference; the
    old document stays on disk untouched.

    Raises:
        NotFound: unknown set.
        InvalidRating: unknown verdict, out-of-range best rank, or a best
            rank supplied with a verdict other than Good.
        MissingBestQuestion: Good verdict on a set type that requires one.
    """
    if verdict not in VERDICTS:
        raise InvalidRating(f"verdict must be one of {', '.join(VERDICTS)}")
    doc = repo.read("questions", question_set_id)
    qtype = doc["qtype"]

    if verdict == "Good" and qtype in BEST_REQUIRED_TYPES and best_question_rank is None:
        raise MissingBestQuestion(
            f"a Good rating on a {qtype} set must name the best question"
        )
    if verdict != "Good" and best_question_rank is not None:
        raise InvalidRating("best_question_rank is only valid with a Good verdict")
    if best_question_rank is not None:
        _question_by_rank(doc, best_question_rank)

    previous = effective_rating(repo, question_set_id)
    rating = {
        "rating_id": new_id(),
        "question_set_id": question_set_id,
        "qtype": qtype,
        "verdict": verdict,
        "best_question_rank": best_question_rank,
        "rater": rater,
        "rated_at": store_mod.utc_now_iso(),
        "supersedes": previous["rating_id"] if previous else None,
    }
    if qtype == "GFQ":
        rating["rated_summary"] = {
            "segment_id": doc["segment_id"],
            "summary_version_no": doc.get("summary_version_no"),
        }
    repo.write("ratings", rating["rating_id"], rating)
    return rating


def effective_ratings(ratings: list[dict]) -> list[dict]:
    """Reduce raw ratings to one effective rating per question set.

    Superseded documents are dropped first, then the newest remaining rating
    per set wins (ties go to the later document in input order).
    """
    superseded = {r.get("supersedes") for r in ratings if r.get("supersedes")}
    latest: dict[str, dict] = {}
    for rating in ratings:
        if rating["rating_id"] in superseded:
            continue
        key = rating["question_set_id"]
        held = latest.get(key)
        if held is None or rating["rated_at"] >= held["rated_at"]:
            latest[key] = rating
    return list(latest.values())


def effective_rating(repo: store_mod.Repository, question_set_id: str) -> dict | None:
    mine = [
        r
        for r in repo.read_all("ratings")
        if r["question_set_id"] == question_set_id
    ]
    reduced = effective_ratings(mine)
    return reduced[0] if reduced else None


def _set_statuses(
    repo: store_mod.Repository,
    question_set_id: str,
    ranks: list[int],
    status: str,
) -> dict:
    def apply(doc: dict) -> dict:
        for rank in ranks:
            _question_by_rank(doc, rank)["status"] = status
        return doc

    doc = repo.update("questions", question_set_id, apply)
    return {
        "question_set_id": question_set_id,
        "statuses": {q["rank"]: q["status"] for q in doc["questions"]},
    }


def accept_questions(
    repo: store_mod.Repository, question_set_id: str, ranks: list[int], author: str
) -> dict:
    """Mark the listed ranks accepted; other questions keep their status."""
    return _set_statuses(repo, question_set_id, ranks, STATUS_ACCEPTED)


def discard_questions(
    repo: store_mod.Repository, question_set_id: str, ranks: list[int], author: str
) -> dict:
    """Mark the listed ranks discarded, removing them from future exports."""
    return _set_statuses(repo, question_set_id, ranks, STATUS_DISCARDED)


def is_stale(repo: store_mod.Repository, set_doc: dict) -> bool:
    """True when the set's source text moved on after generation.

    Segment-sourced questions go stale when the transcript gains versions;
    summary-sourced questions also go stale when the summary is edited or
    rebuilt from a newer transcript version.
    """
    try:
        segment = repo.read("segments", set_doc["segment_id"])
    except NotFound:
        return True
    segment_head = store_mod.head_version(segment.get("text", {}))
    if set_doc.get("summary_version_no") is None:
        return set_doc.get("segment_version_no", segment_head) < segment_head
    try:
        summary = repo.read("summaries", set_doc["segment_id"])
    except NotFound:
        return True
    summary_head = store_mod.head_version(summary.get("text", {}))
    if set_doc["summary_version_no"] < summary_head:
        return True
    return summary.get("source_version_no", segment_head) < segment_head


def export_accepted(repo: store_mod.Repository, segment_id: str) -> list[dict]:
    """All accepted questions of a segment with full provenance.

    Raises NotFound for an unknown segment. Discarded and merely generated
    questions never appear.
    """
    repo.read("segments", segment_id)
    out = []
    for doc in repo.question_sets_for_segment(segment_id):
        stale = is_stale(repo, doc)
        for q in doc.get("questions", []):
            if q["status"] != STATUS_ACCEPTED:
                continue
            out.append(
                {
                    "qtype": doc["qtype"],
                    "payload": q["payload"],
                    "confidence": q["confidence"],
                    "source": q["source"],
                    "provenance": {
                        "video_id": doc["video_id"],
                        "segment_id": doc["segment_id"],
                        "segment_version_no": doc.get("segment_version_no"),
                        "summary_version_no": doc.get("summary_version_no"),
                        "question_set_id": doc["question_set_id"],
                        "rank": q["rank"],
                        "stale": stale,
                    },
                }
            )
    return out
