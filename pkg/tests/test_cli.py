"""Command line interface: ingest, generate, analytics export, serve."""

import csv
import io
import json

import pytest
from conftest import LECTURE, evenly_spaced_items, timed_json

from lectureqg import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def store(tmp_path):
    return str(tmp_path / "store")


def write_timed(tmp_path, name="talk.json", video_id="talk", duration_s=240.0):
    path = tmp_path / name
    path.write_bytes(
        timed_json(
            video_id=video_id,
            title=video_id,
            duration_s=duration_s,
            items=evenly_spaced_items(LECTURE, duration_s),
        )
    )
    return path


def test_ingest_prints_per_file_counts(tmp_path, store, capsys):
    path = write_timed(tmp_path)
    code, out, err = run(capsys, "ingest", str(path), "--store", store)
    assert code == 0
    assert out == f"talk: 1 segments ({path})\n"
    assert err == ""


def test_ingest_plain_text_uses_the_file_stem(tmp_path, store, capsys):
    path = tmp_path / "biology-intro.txt"
    path.write_text("Plants make food from light. Roots pull water up.")
    code, out, err = run(capsys, "ingest", str(path), "--store", store)
    assert code == 0
    assert out.startswith("biology-intro: 1 segments")


def test_ingest_mixed_batch_continues_past_failures(tmp_path, store, capsys):
    good = write_timed(tmp_path)
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "ingest", str(good), str(bad), "--store", store)
    assert code == 0
    assert "talk: 1 segments" in out
    assert f"FAILED {bad}" in err


def test_ingest_all_failures_exit_nonzero(tmp_path, store, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "ingest", str(bad), "--store", store)
    assert code == 1
    assert out == ""


def test_ingest_missing_file_reported(tmp_path, store, capsys):
    code, out, err = run(capsys, "ingest", str(tmp_path / "ghost.json"), "--store", store)
    assert code == 1
    assert "FAILED" in err


def test_generate_batch_covers_all_four_types(tmp_path, store, capsys):
    path = write_timed(tmp_path)
    run(capsys, "ingest", str(path), "--store", store)
    code, out, err = run(capsys, "generate", "--store", store)
    assert code == 0
    assert err == ""
    line = out.strip()
    assert "SAQ=" in line and "MCQ=" in line and "BLQ=" in line and "GFQ=" in line


def test_generate_skips_wordless_segments(tmp_path, store, capsys):
    silent = tmp_path / "silent.json"
    silent.write_bytes(timed_json(video_id="quiet", duration_s=30.0, items=[]))
    run(capsys, "ingest", str(silent), "--store", store)
    code, out, err = run(capsys, "generate", "--store", store)
    assert code == 0
    assert "skipped (no words)" in out


def test_analytics_export_json_shape(tmp_path, store, capsys):
    path = write_timed(tmp_path)
    run(capsys, "ingest", str(path), "--store", store)
    run(capsys, "generate", "--store", store)
    code, out, err = run(capsys, "analytics", "export", "--store", store)
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"ratings", "keyword_lengths"}
    assert set(data["ratings"]) == {"SAQ", "BLQ", "GFQ", "MCQ"}
    assert data["ratings"]["SAQ"]["total"] == 0
    assert set(data["keyword_lengths"]) == {"recommended", "custom"}


def test_analytics_export_csv_shape(tmp_path, store, capsys):
    path = write_timed(tmp_path)
    run(capsys, "ingest", str(path), "--store", store)
    run(capsys, "generate", "--store", store)
    code, out, err = run(capsys, "analytics", "export", "--format", "csv", "--store", store)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == [
        "qtype", "good", "average", "bad", "total",
        "good_pct", "average_pct", "bad_pct", "acceptable_pct",
    ]
    assert [r[0] for r in rows[1:5]] == ["SAQ", "BLQ", "GFQ", "MCQ"]
    blank = rows.index([])
    assert rows[blank + 1] == ["origin", "word_length", "count", "good", "average", "bad"]
    # One SAQ set was generated on a three-word recommended keyword.
    assert ["recommended", "1", "1", "0", "0", "0"] in rows[blank + 2:]


def test_serve_wires_config_into_uvicorn(tmp_path, store, capsys, monkeypatch):
    seen = {}

    def fake_run(app, host, port, log_level):
        seen.update(host=host, port=port, log_level=log_level, app=app)

    import uvicorn

    monkeypatch.setattr(uvicorn, "run", fake_run)
    code, out, err = run(
        capsys, "serve", "--store", store, "--host", "127.0.0.9", "--port", "8123"
    )
    assert code == 0
    assert seen["host"] == "127.0.0.9"
    assert seen["port"] == 8123
    assert seen["app"].title == "lectureqg"


def test_config_file_feeds_the_cli(tmp_path, store, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"max_segment_duration_s": 60.0}))
    path = write_timed(tmp_path, duration_s=240.0)
    code, out, err = run(
        capsys, "ingest", str(path), "--store", store, "--config", str(cfg_path)
    )
    assert code == 0
    assert "talk: 4 segments" in out


def test_library_errors_become_clean_exit_codes(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"not_a_key": 1}))
    code, out, err = run(capsys, "generate", "--config", str(cfg_path))
    assert code == 1
    assert err.startswith("error: unknown config keys")
