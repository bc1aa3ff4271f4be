"""File-backed JSON document store with append-only text version histories.

Layout under the store root, one JSON file per document:

    videos/{video_id}.json
    segments/{segment_id}.json      transcript text history embedded at "text"
    summaries/{segment_id}.json     summary text history embedded at "text"
    keywords/{segment_id}.json
    questions/{question_set_id}.json
    ratings/{rating_id}.json

Writes go to a temp file in the same directory followed by an atomic rename,
so an interrupted write leaves the previous document intact. Concurrent
writers are serialized per document and guarded by compare-and-set on the
version number: a writer presents the version it read, and loses with
VersionConflict if the head moved.
"""
from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from .errors import InvalidParameter, NoSuchVersion, NotFound, VersionConflict

COLLECTIONS = ("videos", "segments", "summaries", "keywords", "questions", "ratings")

#: Sentinel accepted by get_version for the newest version.
LATEST = "latest"

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


# --- version history helpers -------------------------------------------------

def new_text_history(text: str, author: str, edited_at: str | None = None) -> dict:
    """Start a history at version 1. Version 1 is the machine rendering."""
    return {
        "versions": [
            {
                "version_no": 1,
                "text": text,
                "edited_at": edited_at or utc_now_iso(),
                "author": author,
            }
        ]
    }


def head_version(history: dict) -> int:
    versions = history.get("versions") or []
    return versions[-1]["version_no"] if versions else 0


def version_entry(history: dict, version_no: int | str = LATEST) -> dict:
    versions = history.get("versions") or []
    if version_no == LATEST:
        if not versions:
            raise NoSuchVersion("history is empty")
        return versions[-1]
    for entry in versions:
        if entry["version_no"] == version_no:
            return entry
    raise NoSuchVersion(f"version {version_no} does not exist")


def append_version(history: dict, text: str, author: str, expected_version: int) -> dict:
    """Append one version under compare-and-set; mutates and returns history."""
    current = head_version(history)
    if expected_version != current:
        raise VersionConflict(
            f"expected version {expected_version} but head is {current}",
            current_version=current,
        )
    now = utc_now_iso()
    versions = history.setdefault("versions", [])
    if versions and versions[-1]["edited_at"] > now:
        # A clock step backwards must not break timestamp ordering.
        now = versions[-1]["edited_at"]
    versions.append(
        {"version_no": current + 1, "text": text, "edited_at": now, "author": author}
    )
    return history


# --- repository --------------------------------------------------------------

class Repository:
    """One store root on disk. Safe for concurrent in-process use."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        for name in COLLECTIONS:
            (self.root / name).mkdir(parents=True, exist_ok=True)
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, collection: str, doc_id: str) -> threading.Lock:
        key = (collection, doc_id)
        with self._locks_guard:
            lock = self._locks.get(key)
            if lock is None:
                lock = self._locks[key] = threading.Lock()
            return lock

    def _path(self, collection: str, doc_id: str) -> Path:
        if collection not in COLLECTIONS:
            raise InvalidParameter(f"unknown collection: {collection!r}")
        if not _ID_RE.match(doc_id):
            raise NotFound(f"no such document: {doc_id!r}")
        return self.root / collection / f"{doc_id}.json"

    # -- raw documents --

    def exists(self, collection: str, doc_id: str) -> bool:
        try:
            return self._path(collection, doc_id).is_file()
        except NotFound:
            return False

    def read(self, collection: str, doc_id: str) -> dict:
        path = self._path(collection, doc_id)
        try:
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            raise NotFound(f"{collection}/{doc_id} does not exist") from None

    def write(self, collection: str, doc_id: str, doc: dict) -> None:
        with self._lock(collection, doc_id):
            self._write_unlocked(collection, doc_id, doc)

    def _write_unlocked(self, collection: str, doc_id: str, doc: dict) -> None:
        path = self._path(collection, doc_id)
        fd, tmp = tempfile.mkstemp(prefix=f".{doc_id}.", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, ensure_ascii=False, indent=1)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def delete(self, collection: str, doc_id: str) -> None:
        path = self._path(collection, doc_id)
        with self._lock(collection, doc_id):
            try:
                path.unlink()
            except FileNotFoundError:
                pass

    def update(
        self,
        collection: str,
        doc_id: str,
        fn: Callable[[dict], dict],
        *,
        create: Callable[[], dict] | None = None,
    ) -> dict:
        """Read-modify-write one document under its lock.

        ``fn`` receives the current document (or the result of ``create`` when
        the document is missing and ``create`` is given) and returns the
        document to persist. Raising inside ``fn`` leaves the file untouched.
        """
        with self._lock(collection, doc_id):
            try:
                doc = self.read(collection, doc_id)
            except NotFound:
                if create is None:
                    raise
                doc = create()
            doc = fn(doc)
            self._write_unlocked(collection, doc_id, doc)
            return doc

    def list_ids(self, collection: str) -> list[str]:
        if collection not in COLLECTIONS:
            raise InvalidParameter(f"unknown collection: {collection!r}")
        folder = self.root / collection
        return sorted(p.stem for p in folder.glob("*.json"))

    def read_all(self, collection: str) -> list[dict]:
        return [self.read(collection, doc_id) for doc_id in self.list_ids(collection)]

    # -- versioned text embedded at doc["text"] --

    def put_version(
        self,
        collection: str,
        doc_id: str,
        new_text: str,
        author: str,
        expected_version: int,
    ) -> dict:
        """Append a text version to a document, creating it when expected is 0.

        Returns the updated history. Raises NotFound when the document is
        missing and expected_version is nonzero, VersionConflict when the
        head has moved past expected_version.
        """

        def create() -> dict:
            if expected_version != 0:
                raise NotFound(f"{collection}/{doc_id} does not exist")
            return {"doc_id": doc_id, "text": {"versions": []}}

        def apply(doc: dict) -> dict:
            history = doc.setdefault("text", {"versions": []})
            append_version(history, new_text, author, expected_version)
            return doc

        return self.update(collection, doc_id, apply, create=create)["text"]

    def get_version(
        self, collection: str, doc_id: str, version_no: int | str = LATEST
    ) -> dict:
        doc = self.read(collection, doc_id)
        history = doc.get("text") or {"versions": []}
        return version_entry(history, version_no)

    # -- domain queries --

    def list_videos(self) -> list[dict]:
        """All videos with their segment counts, ordered by title then id."""
        counts: dict[str, int] = {}
        for seg_id in self.list_ids("segments"):
            seg = self.read("segments", seg_id)
            counts[seg["video_id"]] = counts.get(seg["video_id"], 0) + 1
        videos = []
        for vid in self.list_ids("videos"):
            doc = self.read("videos", vid)
            videos.append(
                {
                    "video_id": doc["video_id"],
                    "title": doc.get("title", doc["video_id"]),
                    "duration_s": doc.get("duration_s"),
                    "segment_count": counts.get(doc["video_id"], 0),
                }
            )
        videos.sort(key=lambda v: (v["title"], v["video_id"]))
        return videos

    def segments_for_video(self, video_id: str) -> list[dict]:
        segs = [
            doc
            for doc in self.read_all("segments")
            if doc["video_id"] == video_id
        ]
        segs.sort(key=lambda d: d["index"])
        return segs

    def question_sets_for_segment(self, segment_id: str) -> list[dict]:
        sets = [
            doc
            for doc in self.read_all("questions")
            if doc["segment_id"] == segment_id
        ]
        sets.sort(key=lambda d: d.get("created_at", ""))
        return sets

    def verify_integrity(self) -> list[str]:
        """Cross-document referential checks; returns human-readable violations."""
        problems: list[str] = []
        video_ids = set(self.list_ids("videos"))
        segment_ids = set(self.list_ids("segments"))

        for seg_id in sorted(segment_ids):
            seg = self.read("segments", seg_id)
            if seg["video_id"] not in video_ids:
                problems.append(f"segment {seg_id} references missing video {seg['video_id']}")
            problems.extend(_check_history(f"segment {seg_id}", seg.get("text")))

        for coll in ("summaries", "keywords"):
            for doc_id in self.list_ids(coll):
                if doc_id not in segment_ids:
                    problems.append(f"{coll}/{doc_id} references a missing segment")

        for doc_id in self.list_ids("summaries"):
            problems.extend(_check_history(f"summary {doc_id}", self.read("summaries", doc_id).get("text")))

        set_ids = set(self.list_ids("questions"))
        for set_id in sorted(set_ids):
            doc = self.read("questions", set_id)
            if doc["segment_id"] not in segment_ids:
                problems.append(f"question set {set_id} references missing segment {doc['segment_id']}")
            else:
                seg = self.read("segments", doc["segment_id"])
                if doc.get("segment_version_no", 0) > head_version(seg.get("text", {})):
                    problems.append(f"question set {set_id} references a future segment version")
            ranks = [q["rank"] for q in doc.get("questions", [])]
            if ranks != list(range(1, len(ranks) + 1)):
                problems.append(f"question set {set_id} ranks are not consecutive from 1")
            confs = [q["confidence"] for q in doc.get("questions", [])]
            if any(a < b for a, b in zip(confs, confs[1:])):
                problems.append(f"question set {set_id} confidence increases with rank")

        for rating_id in self.list_ids("ratings"):
            rating = self.read("ratings", rating_id)
            if rating["question_set_id"] not in set_ids:
                problems.append(
                    f"rating {rating_id} references missing question set {rating['question_set_id']}"
                )
        return problems


def _check_history(label: str, history: dict | None) -> list[str]:
    problems = []
    versions = (history or {}).get("versions") or []
    numbers = [v["version_no"] for v in versions]
    if numbers != list(range(1, len(numbers) + 1)):
        problems.append(f"{label} version numbers are not consecutive from 1")
    stamps = [v["edited_at"] for v in versions]
    if any(a > b for a, b in zip(stamps, stamps[1:])):
        problems.append(f"{label} version timestamps decrease")
    return problems
