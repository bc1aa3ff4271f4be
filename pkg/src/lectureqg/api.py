"""REST service and the workflow functions behind it.

The module has two layers. The plain functions (ingest_document,
build_summary, refresh_keywords, build_question_set, ...) run the pipeline
against a Repository and are shared by the HTTP endpoints and the CLI. The
FastAPI app in ``create_app`` is a thin shell over them: one endpoint per
workflow action, library errors mapped onto 400/404/409/502.

Provider behavior: summary generation with backend "provider" fails with 502
when the provider is down (the response hints at the extractive fallback);
question generation degrades to the rule-based generators instead and records
a warning on the stored set, so the teacher flow never dead-ends on a model
outage.
"""
from __future__ import annotations

import dataclasses

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import qgen, review, summarize, textkit
from .analytics import keyword_length_histogram, summarize_ratings
from .config import ApiConfig
from .errors import (
    InvalidParameter,
    LectureQgError,
    NoSuchVersion,
    NotFound,
    ProviderProtocolError,
    ProviderUnavailable,
    VersionConflict,
)
from .ingest import SegmentationConfig, parse_transcript, segment_transcript
from .provider import GenerativeProvider, HttpProvider
from .store import (
    LATEST,
    Repository,
    head_version,
    new_text_history,
    utc_now_iso,
    version_entry,
)

MACHINE_AUTHOR = "machine"

EXTRACTIVE_BACKEND = "extractive_builtin"
PROVIDER_BACKEND = "provider"

PROVIDER_HINT = f"retry with backend={EXTRACTIVE_BACKEND}"


# --- ingest ------------------------------------------------------------------

def ingest_document(
    repo: Repository,
    raw: bytes,
    format: str,
    cfg: ApiConfig,
    *,
    video_id: str | None = None,
    title: str | None = None,
) -> dict:
    """Parse, segment, and persist one transcript document.

    Re-ingesting a video is safe: segment ids are deterministic, unchanged
    text is left alone, changed text lands as a new machine-authored version
    on top of the existing history, and segments beyond the new count are
    removed together with their dependent documents.
    """
    transcript = parse_transcript(raw, format, video_id=video_id, title=title)
    segments = segment_transcript(
        transcript, SegmentationConfig(max_duration_s=cfg.max_segment_duration_s)
    )

    repo.write(
        "videos",
        transcript.video_id,
        {
            "video_id": transcript.video_id,
            "title": transcript.title,
            "duration_s": transcript.duration_s,
            "segment_count": len(segments),
        },
    )

    for seg in segments:
        if repo.exists("segments", seg.segment_id):
            current = version_entry(repo.read("segments", seg.segment_id)["text"])
            if current["text"] != seg.text:
                repo.put_version(
                    "segments",
                    seg.segment_id,
                    seg.text,
                    MACHINE_AUTHOR,
                    current["version_no"],
                )
        else:
            repo.write(
                "segments",
                seg.segment_id,
                {
                    "segment_id": seg.segment_id,
                    "video_id": seg.video_id,
                    "index": seg.index,
                    "start_s": seg.start_s,
                    "end_s": seg.end_s,
                    "text": new_text_history(seg.text, MACHINE_AUTHOR),
                },
            )

    _drop_segments_beyond(repo, transcript.video_id, len(segments))
    return {
        "video_id": transcript.video_id,
        "title": transcript.title,
        "duration_s": transcript.duration_s,
        "segments": len(segments),
    }


def _drop_segments_beyond(repo: Repository, video_id: str, count: int) -> None:
    stale = [
        doc["segment_id"]
        for doc in repo.segments_for_video(video_id)
        if doc["index"] >= count
    ]
    for seg_id in stale:
        for set_doc in repo.question_sets_for_segment(seg_id):
            for rating in repo.read_all("ratings"):
                if rating["question_set_id"] == set_doc["question_set_id"]:
                    repo.delete("ratings", rating["rating_id"])
            repo.delete("questions", set_doc["question_set_id"])
        for coll in ("summaries", "keywords", "segments"):
            repo.delete(coll, seg_id)


# --- summaries and keywords ----------------------------------------------------

def _segment_text(repo: Repository, segment_id: str) -> tuple[str, int]:
    doc = repo.read("segments", segment_id)
    entry = version_entry(doc["text"], LATEST)
    return entry["text"], entry["version_no"]


def build_summary(
    repo: Repository,
    cfg: ApiConfig,
    segment_id: str,
    backend: str = EXTRACTIVE_BACKEND,
    provider: GenerativeProvider | None = None,
) -> dict:
    """Create (or rebuild) the summary document for a segment.

    Rebuilding starts a fresh history: version 1 is always machine output.
    """
    text, version_no = _segment_text(repo, segment_id)
    if backend == EXTRACTIVE_BACKEND:
        summary_text = summarize.summarize_extractive(
            text, ratio=cfg.summary_ratio, max_words=cfg.summary_max_words
        )
        provider_name = None
    elif backend == PROVIDER_BACKEND:
        if provider is None:
            raise InvalidParameter("no generative provider is configured")
        summary_text = summarize.summarize_via_provider(text, provider)
        provider_name = getattr(provider, "name", PROVIDER_BACKEND)
    else:
        raise InvalidParameter(f"unknown summary backend {backend!r}")

    doc = {
        "segment_id": segment_id,
        "source_version_no": version_no,
        "backend": backend,
        "provider_name": provider_name,
        "text": new_text_history(summary_text, MACHINE_AUTHOR),
    }
    repo.write("summaries", segment_id, doc)
    return doc


def refresh_keywords(
    repo: Repository, cfg: ApiConfig, segment_id: str, limit: int | None = None
) -> dict:
    """Recompute recommendations against the current transcript version.

    Stored custom keywords survive; their frequencies are refreshed against
    the current text.
    """
    text, version_no = _segment_text(repo, segment_id)
    recommended = textkit.extract_candidates(text, limit=limit or cfg.keyword_limit)
    try:
        existing = repo.read("keywords", segment_id)
    except NotFound:
        existing = {}
    custom = []
    for item in existing.get("custom", []):
        custom.append(
            dict(
                item,
                frequency=textkit.count_occurrences(text, item["phrase"]),
                first_offset=text.lower().find(item["phrase"].lower()),
            )
        )
    doc = {
        "segment_id": segment_id,
        "source_version_no": version_no,
        "recommended": [dataclasses.asdict(c) for c in recommended],
        "custom": custom,
    }
    repo.write("keywords", segment_id, doc)
    return doc


def add_custom_keyword(repo: Repository, cfg: ApiConfig, segment_id: str, phrase: str) -> dict:
    text, _ = _segment_text(repo, segment_id)
    candidate = textkit.validate_custom_keyword(text, phrase)
    doc = refresh_keywords(repo, cfg, segment_id)
    entry = dataclasses.asdict(candidate)
    known = {c["phrase"].lower() for c in doc["custom"]}
    if candidate.phrase.lower() not in known:
        doc["custom"].append(entry)
        repo.write("keywords", segment_id, doc)
    return entry


def _resolve_keyword(repo: Repository, cfg: ApiConfig, segment_id: str, phrase: str) -> dict:
    """Classify the requested keyword as recommended or custom."""
    text, _ = _segment_text(repo, segment_id)
    recommended = textkit.extract_candidates(text, limit=cfg.keyword_limit)
    for cand in recommended:
        if cand.phrase.lower() == phrase.strip().lower():
            return {"phrase": cand.phrase, "origin": textkit.RECOMMENDED}
    candidate = textkit.validate_custom_keyword(text, phrase)
    return {"phrase": candidate.phrase, "origin": textkit.CUSTOM}


# --- question sets -------------------------------------------------------------

def _summary_text(repo: Repository, segment_id: str) -> tuple[str, int]:
    try:
        doc = repo.read("summaries", segment_id)
    except NotFound:
        raise NotFound(
            f"segment {segment_id} has no summary yet; create one first"
        ) from None
    entry = version_entry(doc["text"], LATEST)
    return entry["text"], entry["version_no"]


def _payload_text(qtype: str, payload: dict) -> str:
    return payload["gapped_text"] if qtype == qgen.GFQ else payload["question_text"]


def _entry(qtype: str, q: qgen.GeneratedQuestion) -> dict:
    payload = dataclasses.asdict(q.payload)
    return {
        "rank": q.rank,
        "confidence": q.confidence,
        "source": q.source,
        "status": review.STATUS_GENERATED,
        "payload": payload,
        "history": new_text_history(_payload_text(qtype, payload), MACHINE_AUTHOR),
        "warnings": [],
    }


def build_question_set(
    repo: Repository,
    cfg: ApiConfig,
    segment_id: str,
    qtype: str,
    *,
    keyword: str | None = None,
    keywords: list[str] | None = None,
    n: int | None = None,
    seed: int = 0,
    provider: GenerativeProvider | None = None,
) -> dict:
    """Generate one question set and persist it.

    SAQ and MCQ need ``keyword``; GFQ needs ``keywords`` (phrases in the
    summary); BLQ and GFQ require the segment's summary to exist. When the
    provider fails mid-generation the set is regenerated without it and the
    outage is recorded on the set's warning field.
    """
    if qtype not in qgen.QUESTION_TYPES:
        raise InvalidParameter(f"unknown question type {qtype!r}")
    segment = repo.read("segments", segment_id)
    segment_text, segment_version = _segment_text(repo, segment_id)

    warning = None
    try:
        result = _generate(
            repo, cfg, segment_id, segment_text, qtype,
            keyword=keyword, keywords=keywords, n=n, seed=seed, provider=provider,
        )
    except (ProviderUnavailable, ProviderProtocolError) as exc:
        result = _generate(
            repo, cfg, segment_id, segment_text, qtype,
            keyword=keyword, keywords=keywords, n=n, seed=seed, provider=None,
        )
        warning = f"provider unavailable, used fallback generators only ({exc})"

    entries, summary_version, keyword_info, extra_warning = result
    warning = warning or extra_warning

    doc = {
        "question_set_id": review.new_id(),
        "video_id": segment["video_id"],
        "segment_id": segment_id,
        "qtype": qtype,
        "segment_version_no": segment_version,
        "summary_version_no": summary_version,
        "keyword": keyword_info,
        "seed": seed,
        "warning": warning,
        "created_at": utc_now_iso(),
        "questions": entries,
    }
    repo.write("questions", doc["question_set_id"], doc)
    return doc


def _generate(
    repo: Repository,
    cfg: ApiConfig,
    segment_id: str,
    segment_text: str,
    qtype: str,
    *,
    keyword: str | None,
    keywords: list[str] | None,
    n: int | None,
    seed: int,
    provider: GenerativeProvider | None,
) -> tuple[list[dict], int | None, dict | None, str | None]:
    if qtype == qgen.SAQ:
        if not keyword:
            raise InvalidParameter("SAQ generation needs a keyword")
        keyword_info = _resolve_keyword(repo, cfg, segment_id, keyword)
        questions = qgen.generate_saq(
            segment_text, keyword_info["phrase"], n=n or cfg.top_n, provider=provider
        )
        return [_entry(qtype, q) for q in questions], None, keyword_info, None

    if qtype == qgen.MCQ:
        if not keyword:
            raise InvalidParameter("MCQ generation needs a keyword")
        keyword_info = _resolve_keyword(repo, cfg, segment_id, keyword)
        saqs = qgen.generate_saq(
            segment_text, keyword_info["phrase"], n=n or cfg.top_n, provider=provider
        )
        entries = []
        for i, q in enumerate(saqs):
            payload = qgen.generate_mcq(
                q.payload,
                segment_text,
                n_distractors=cfg.n_distractors,
                seed=seed + i,
                provider=provider,
            )
            entries.append(
                _entry(
                    qtype,
                    qgen.GeneratedQuestion(
                        qtype=qgen.MCQ,
                        rank=q.rank,
                        confidence=q.confidence,
                        source=q.source,
                        payload=payload,
                    ),
                )
            )
        return entries, None, keyword_info, None

    if qtype == qgen.BLQ:
        summary_text, summary_version = _summary_text(repo, segment_id)
        blq = qgen.generate_blq(
            summary_text, n_per_polarity=n or cfg.blq_per_polarity, provider=provider
        )
        entries = [_entry(qtype, q) for q in blq.questions]
        return entries, summary_version, None, blq.warning

    # GFQ
    summary_text, summary_version = _summary_text(repo, segment_id)
    if not keywords:
        raise InvalidParameter("GFQ generation needs a non-empty keywords list")
    payload = qgen.generate_gfq(summary_text, list(keywords))
    question = qgen.GeneratedQuestion(
        qtype=qgen.GFQ, rank=1, confidence=qgen.FALLBACK_CAP,
        source=qgen.SOURCE_FALLBACK, payload=payload,
    )
    return [_entry(qtype, question)], summary_version, None, None


# --- FastAPI shell -------------------------------------------------------------

class PutTextBody(BaseModel):
    text: str
    expected_version: int = Field(ge=0)
    author: str = "teacher"


class SummaryBody(BaseModel):
    backend: str = EXTRACTIVE_BACKEND


class CustomKeywordBody(BaseModel):
    phrase: str


class QuestionsBody(BaseModel):
    qtype: str
    keyword: str | None = None
    keywords: list[str] | None = None
    n: int | None = Field(default=None, ge=1)
    seed: int = 0


class EditQuestionBody(BaseModel):
    text: str | None = None
    answer: str | None = None
    author: str = "teacher"


class RatingBody(BaseModel):
    verdict: str
    best_question_rank: int | None = None
    rater: str = "teacher"


class AcceptBody(BaseModel):
    ranks: list[int] = Field(default_factory=list)
    discard_ranks: list[int] = Field(default_factory=list)
    author: str = "teacher"


_STATUS_FOR = [
    (VersionConflict, 409),
    (NoSuchVersion, 404),
    (NotFound, 404),
    (ProviderUnavailable, 502),
    (ProviderProtocolError, 502),
]


def _http_status(exc: LectureQgError) -> int:
    for cls, status in _STATUS_FOR:
        if isinstance(exc, cls):
            return status
    return 400


def create_app(
    cfg: ApiConfig | None = None,
    repo: Repository | None = None,
    provider: GenerativeProvider | None = None,
) -> FastAPI:
    cfg = cfg or ApiConfig()
    repo = repo or Repository(cfg.store_root)
    if provider is None and cfg.provider_base_url:
        provider = HttpProvider(
            cfg.provider_base_url,
            name=cfg.provider_name,
            timeout_s=cfg.provider_timeout_s,
            max_concurrency=cfg.provider_max_concurrency,
        )

    app = FastAPI(title="lectureqg", version="0.1.0")

    @app.exception_handler(LectureQgError)
    async def _library_error(request: Request, exc: LectureQgError):
        body = {"error": str(exc), "type": type(exc).__name__}
        status = _http_status(exc)
        if isinstance(exc, VersionConflict):
            body["current_version"] = exc.current_version
        if status == 502:
            body["hint"] = PROVIDER_HINT
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": str(exc.errors()), "type": "ValidationError"},
        )

    @app.get("/videos")
    def list_videos():
        return repo.list_videos()

    @app.get("/videos/{video_id}/segments")
    def list_segments(video_id: str):
        repo.read("videos", video_id)
        out = []
        for doc in repo.segments_for_video(video_id):
            out.append(
                {
                    "segment_id": doc["segment_id"],
                    "video_id": doc["video_id"],
                    "index": doc["index"],
                    "start_s": doc["start_s"],
                    "end_s": doc["end_s"],
                    "head_version": head_version(doc["text"]),
                    "has_summary": repo.exists("summaries", doc["segment_id"]),
                }
            )
        return out

    @app.get("/segments/{segment_id}/text")
    def get_text(segment_id: str, version: int | None = Query(default=None, ge=1)):
        doc = repo.read("segments", segment_id)
        entry = version_entry(doc["text"], version if version else LATEST)
        return {
            "segment_id": segment_id,
            "version_no": entry["version_no"],
            "text": entry["text"],
            "edited_at": entry["edited_at"],
            "author": entry["author"],
            "head_version": head_version(doc["text"]),
        }

    @app.put("/segments/{segment_id}/text")
    def put_text(segment_id: str, body: PutTextBody):
        repo.read("segments", segment_id)
        history = repo.put_version(
            "segments", segment_id, body.text, body.author, body.expected_version
        )
        entry = version_entry(history, LATEST)
        return {
            "segment_id": segment_id,
            "version_no": entry["version_no"],
            "text": entry["text"],
            "edited_at": entry["edited_at"],
            "author": entry["author"],
            "head_version": entry["version_no"],
        }

    @app.get("/segments/{segment_id}/versions")
    def get_versions(segment_id: str):
        doc = repo.read("segments", segment_id)
        return [
            {"version_no": v["version_no"], "edited_at": v["edited_at"], "author": v["author"]}
            for v in doc["text"]["versions"]
        ]

    @app.post("/segments/{segment_id}/summary")
    def post_summary(segment_id: str, body: SummaryBody):
        return build_summary(repo, cfg, segment_id, backend=body.backend, provider=provider)

    @app.get("/segments/{segment_id}/summary")
    def get_summary(segment_id: str):
        return repo.read("summaries", segment_id)

    @app.put("/summaries/{segment_id}")
    def put_summary(segment_id: str, body: PutTextBody):
        repo.read("summaries", segment_id)
        history = repo.put_version(
            "summaries", segment_id, body.text, body.author, body.expected_version
        )
        entry = version_entry(history, LATEST)
        return {
            "segment_id": segment_id,
            "version_no": entry["version_no"],
            "text": entry["text"],
            "edited_at": entry["edited_at"],
            "author": entry["author"],
        }

    @app.get("/segments/{segment_id}/keywords")
    def get_keywords(segment_id: str, limit: int | None = Query(default=None, ge=1)):
        return refresh_keywords(repo, cfg, segment_id, limit=limit)

    @app.post("/segments/{segment_id}/keywords/custom")
    def post_custom_keyword(segment_id: str, body: CustomKeywordBody):
        return add_custom_keyword(repo, cfg, segment_id, body.phrase)

    @app.post("/segments/{segment_id}/questions")
    def post_questions(segment_id: str, body: QuestionsBody):
        return build_question_set(
            repo,
            cfg,
            segment_id,
            body.qtype,
            keyword=body.keyword,
            keywords=body.keywords,
            n=body.n,
            seed=body.seed,
            provider=provider,
        )

    @app.get("/segments/{segment_id}/questions")
    def list_question_sets(segment_id: str):
        repo.read("segments", segment_id)
        return repo.question_sets_for_segment(segment_id)

    @app.get("/questions/{question_set_id}")
    def get_question_set(question_set_id: str):
        doc = repo.read("questions", question_set_id)
        doc["stale"] = review.is_stale(repo, doc)
        return doc

    @app.put("/questions/{question_set_id}/{rank}")
    def edit_question(question_set_id: str, rank: int, body: EditQuestionBody):
        return review.edit_question(
            repo,
            question_set_id,
            rank,
            new_text=body.text,
            new_answer=body.answer,
            author=body.author,
        )

    @app.post("/questions/{question_set_id}/rating")
    def rate(question_set_id: str, body: RatingBody):
        return review.rate_question_set(
            repo,
            question_set_id,
            body.verdict,
            best_question_rank=body.best_question_rank,
            rater=body.rater,
        )

    @app.post("/questions/{question_set_id}/accept")
    def accept(question_set_id: str, body: AcceptBody):
        state = review.accept_questions(repo, question_set_id, body.ranks, body.author)
        if body.discard_ranks:
            state = review.discard_questions(
                repo, question_set_id, body.discard_ranks, body.author
            )
        return state

    @app.get("/export/{segment_id}")
    def export(segment_id: str):
        return review.export_accepted(repo, segment_id)

    @app.get("/analytics/ratings")
    def analytics_ratings():
        return summarize_ratings(repo.read_all("ratings"))

    @app.get("/analytics/keyword-lengths")
    def analytics_keyword_lengths():
        return keyword_length_histogram(
            repo.read_all("questions"), repo.read_all("ratings")
        )

    return app
