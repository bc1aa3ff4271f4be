"""Shared fixtures: a temp repository, transcript builders, a stub provider."""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from lectureqg.store import Repository

# A realistic lecture passage reused across the suite. Five sentences, one
# repeated three-word phrase, one duration, one coordinated noun pair.
LECTURE = (
    "Open source software started 25 years ago. "
    "Open source software is software with source code that anyone can "
    "inspect, modify, and enhance. "
    "Today many companies rely on open source software for their core products. "
    "It changed the development and distribution of software around the world. "
    "Students learn open source development in universities."
)


@pytest.fixture
def lecture_text():
    return LECTURE


@pytest.fixture
def repo(tmp_path):
    return Repository(tmp_path / "store")


def timed_json(video_id="vid1", title="Lecture", duration_s=420.0, items=()):
    """Serialize a timed transcript document."""
    return json.dumps(
        {
            "video_id": video_id,
            "title": title,
            "duration_s": duration_s,
            "items": list(items),
        }
    ).encode("utf-8")


def word(start, end, text, kind="pronunciation"):
    return {"start_s": start, "end_s": end, "text": text, "kind": kind}


def evenly_spaced_items(text, duration_s, punct_every=0):
    """Spread the words of ``text`` evenly over the duration.

    punct_every > 0 inserts a period after every k-th word, at the word's
    end time.
    """
    tokens = text.split()
    if not tokens:
        return []
    step = duration_s / len(tokens)
    items = []
    for i, tok in enumerate(tokens):
        start = i * step
        end = min(start + step * 0.8, duration_s)
        items.append(word(start, end, tok))
        if punct_every and (i + 1) % punct_every == 0:
            items.append(word(end, end, ".", kind="punctuation"))
    return items


def lecture_video(repo, cfg=None, video_id="lec1", duration_s=240.0):
    """Ingest LECTURE as one timed video and return its segment ids."""
    from lectureqg import api as service
    from lectureqg.config import ApiConfig

    cfg = cfg or ApiConfig()
    raw = timed_json(
        video_id=video_id,
        title="Intro lecture",
        duration_s=duration_s,
        items=evenly_spaced_items(LECTURE, duration_s),
    )
    report = service.ingest_document(repo, raw, "timed_json", cfg)
    segs = repo.segments_for_video(video_id)
    return report, [s["segment_id"] for s in segs]


class _StubProviderHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        if self.path != "/v1/generate":
            self.send_error(404)
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = json.loads(self.rfile.read(length) or b"{}")
        task = body.get("task")
        n = body.get("n") or 1
        answer = body.get("answer") or "it"
        if task == "summarize":
            cands = [
                {
                    "text": (
                        "Open source software started 25 years ago. "
                        "It reshaped software distribution. "
                        "Communities maintain 300 public projects."
                    ),
                    "score": 0.97,
                }
            ]
        elif task == "saq":
            cands = [
                {"text": f"Provider question {i + 1} about {answer}", "score": 0.98 - i * 0.01}
                for i in range(n)
            ]
        elif task == "boolq":
            polarity = body.get("polarity") or "yes"
            cands = [
                {"text": f"Provider {polarity} claim {i + 1}", "score": 0.97 - i * 0.01}
                for i in range(n)
            ]
        elif task == "distractors":
            cands = [
                {"text": f"plausible foil {i + 1}", "score": 0.96 - i * 0.01}
                for i in range(n)
            ]
        else:
            self.send_error(400)
            return
        payload = json.dumps({"candidates": cands}).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="session")
def stub_provider_url():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubProviderHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()
