"""Rating aggregation and keyword-length reporting."""

from lectureqg.analytics import (
    keyword_length_histogram,
    round_half_up,
    summarize_ratings,
)


def rating(set_id, qtype, verdict, rated_at="2026-01-01T00:00:00+00:00", supersedes=None):
    return {
        "rating_id": f"r-{set_id}-{verdict}-{rated_at}",
        "question_set_id": set_id,
        "qtype": qtype,
        "verdict": verdict,
        "rated_at": rated_at,
        "supersedes": supersedes,
    }


def test_round_half_up():
    assert round_half_up(84.9) == 85
    assert round_half_up(85.5) == 86
    assert round_half_up(85.49) == 85
    assert round_half_up(0.0) == 0
    assert round_half_up(99.5) == 100


def test_percentages_from_known_tallies():
    # 99 good, 13 average, 4 bad out of 116.
    ratings = (
        [rating(f"g{i}", "GFQ", "Good") for i in range(99)]
        + [rating(f"a{i}", "GFQ", "Average") for i in range(13)]
        + [rating(f"b{i}", "GFQ", "Bad") for i in range(4)]
    )
    got = summarize_ratings(ratings)["GFQ"]
    assert got["total"] == 116
    assert got["counts"] == {"good": 99, "average": 13, "bad": 4}
    assert got["percent"]["good"] == 85
    assert got["acceptable_percent"] == 97


def test_unrated_types_report_null_percentages():
    got = summarize_ratings([rating("s1", "SAQ", "Good")])
    assert got["MCQ"]["total"] == 0
    assert got["MCQ"]["percent"]["good"] is None
    assert got["MCQ"]["acceptable_percent"] is None
    assert got["SAQ"]["percent"]["good"] == 100


def test_superseded_ratings_are_not_counted():
    first = rating("s1", "SAQ", "Bad")
    second = rating(
        "s1", "SAQ", "Good", rated_at="2026-01-02T00:00:00+00:00",
        supersedes=first["rating_id"],
    )
    got = summarize_ratings([first, second])["SAQ"]
    assert got["counts"] == {"good": 1, "average": 0, "bad": 0}
    assert got["total"] == 1


def test_repeat_rating_without_supersedes_keeps_newest():
    older = rating("s1", "BLQ", "Bad", rated_at="2026-01-01T00:00:00+00:00")
    newer = rating("s1", "BLQ", "Average", rated_at="2026-03-01T00:00:00+00:00")
    got = summarize_ratings([newer, older])["BLQ"]
    assert got["counts"] == {"good": 0, "average": 1, "bad": 0}


def set_doc(set_id, qtype="SAQ", phrase="open source software", origin="recommended"):
    return {
        "question_set_id": set_id,
        "qtype": qtype,
        "keyword": {"phrase": phrase, "origin": origin} if phrase else None,
    }


def test_histogram_bins_by_word_count_and_origin():
    sets = [
        set_doc("s1", phrase="software"),
        set_doc("s2", phrase="open source software"),
        set_doc("s3", phrase="source code", origin="custom"),
        set_doc("s4", qtype="BLQ", phrase=None),
        set_doc("s5", qtype="GFQ", phrase="ignored"),
    ]
    ratings = [
        rating("s1", "SAQ", "Good"),
        rating("s3", "SAQ", "Bad"),
    ]
    got = keyword_length_histogram(sets, ratings)
    assert got["recommended"][1] == {"count": 1, "good": 1, "average": 0, "bad": 0}
    assert got["recommended"][3] == {"count": 1, "good": 0, "average": 0, "bad": 0}
    assert got["custom"][2] == {"count": 1, "good": 0, "average": 0, "bad": 1}
    assert 2 not in got["recommended"]


def test_histogram_counts_only_effective_ratings():
    sets = [set_doc("s1", phrase="kernel design")]
    first = rating("s1", "SAQ", "Bad")
    second = rating(
        "s1", "SAQ", "Good", rated_at="2026-02-01T00:00:00+00:00",
        supersedes=first["rating_id"],
    )
    got = keyword_length_histogram(sets, [first, second])
    assert got["recommended"][2] == {"count": 1, "good": 1, "average": 0, "bad": 0}


def test_histogram_empty_inputs():
    assert keyword_length_histogram([], []) == {"recommended": {}, "custom": {}}
