"""Aggregation over ratings and keyword usage.

Percentages are rounded half-up to whole points, which is why a report line
can read 85% Good / 97% acceptable from the same tallies; the acceptable
share counts Good and Average together. Question types with no ratings keep
their zero counts and report null percentages rather than dividing by zero.
"""
from __future__ import annotations

from .review import effective_ratings

QTYPES = ("SAQ", "BLQ", "GFQ", "MCQ")


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves away from zero (for x >= 0)."""
    return int(value + 0.5)


def _percent(part: int, total: int) -> int | None:
    if total == 0:
        return None
    return round_half_up(part * 100.0 / total)


def summarize_ratings(ratings: list[dict]) -> dict:
    """Per-question-type verdict counts and rounded percentages.

    Input may contain superseded or repeated ratings; only the effective
    rating of each question set is counted.
    """
    effective = effective_ratings(ratings)
    out: dict[str, dict] = {}
    for qtype in QTYPES:
        mine = [r for r in effective if r.get("qtype") == qtype]
        counts = {
            "good": sum(1 for r in mine if r["verdict"] == "Good"),
            "average": sum(1 for r in mine if r["verdict"] == "Average"),
            "bad": sum(1 for r in mine if r["verdict"] == "Bad"),
        }
        total = len(mine)
        out[qtype] = {
            "counts": counts,
            "total": total,
            "percent": {
                "good": _percent(counts["good"], total),
                "average": _percent(counts["average"], total),
                "bad": _percent(counts["bad"], total),
            },
            "acceptable_percent": _percent(counts["good"] + counts["average"], total),
        }
    return out


def keyword_length_histogram(question_sets: list[dict], ratings: list[dict]) -> dict:
    """Keyword word-length usage for short-answer sets, split by origin.

    Returns {"recommended": {length: bin}, "custom": {length: bin}} where a
    bin counts every SAQ set whose keyword has that many words and breaks
    down the verdicts of the sets that have an effective rating.
    """
    by_set = {r["question_set_id"]: r for r in effective_ratings(ratings)}
    out: dict[str, dict[int, dict]] = {"recommended": {}, "custom": {}}
    for doc in question_sets:
        if doc.get("qtype") != "SAQ":
            continue
        keyword = doc.get("keyword") or {}
        phrase = keyword.get("phrase")
        origin = keyword.get("origin", "recommended")
        if not phrase or origin not in out:
            continue
        length = len(phrase.split())
        bin_ = out[origin].setdefault(
            length, {"count": 0, "good": 0, "average": 0, "bad": 0}
        )
        bin_["count"] += 1
        rating = by_set.get(doc["question_set_id"])
        if rating is not None:
            bin_[rating["verdict"].lower()] += 1
    return out
