"""Distractor generation for multiple-choice questions.

Strategies are tried in a fixed order and each fills as many remaining slots
as it can: numeric substitution for answers shaped like "<integer> <unit
words> [ago]", then same-kind phrases mined from the segment, then the
generative provider. Falling short after all three raises
InsufficientDistractors. Every emitted distractor is case-insensitively
distinct from the answer and from the others; mined and provider phrases
additionally never contain or sit inside the answer, while the numeric
scheme is exempt ("13 years ago" is a fair foil for "3 years ago").
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import textkit
from .errors import InsufficientDistractors, InvalidParameter
from .provider import GenerativeProvider

#: Offsets applied to the leading integer, in emission order.
NUMERIC_DELTAS = (-5, -10, -15, 5, 10, 15)

_NUMERIC_ANSWER_RE = re.compile(r"(\d+)((?:\s+[A-Za-z]+)*)\s*$")


@dataclass(frozen=True)
class DistractorRequest:
    correct_answer: str
    context: str
    n: int = 3
    seed: int = 0


def _numeric_candidates(answer: str) -> list[str]:
    """Substitute the leading integer, keeping the unit words verbatim.

    Non-positive results are skipped, so small answers fall through to the
    additive offsets. The scheme never reproduces the original value.
    """
    m = _NUMERIC_ANSWER_RE.fullmatch(answer.strip())
    if not m:
        return []
    value = int(m.group(1))
    rest = m.group(2)
    out = []
    for delta in NUMERIC_DELTAS:
        candidate = value + delta
        if candidate > 0:
            out.append(f"{candidate}{rest}")
    return out


def _contains_either_way(a: str, b: str) -> bool:
    la, lb = a.lower(), b.lower()
    return la in lb or lb in la


def _answer_kind(answer: str, candidates: list[textkit.KeywordCandidate]) -> str:
    low = answer.lower()
    for cand in candidates:
        if cand.phrase.lower() == low:
            return cand.kind
    tokens = textkit.tag_text(answer)
    words = [t for t in tokens if t.is_word]
    if words and all(t.pos in (textkit.PROPN, textkit.NUM) for t in words):
        return textkit.NAMED_ENTITY
    if _NUMERIC_ANSWER_RE.fullmatch(answer.strip()):
        return textkit.NAMED_ENTITY
    return textkit.NOUN_PHRASE


def _mined_candidates(req: DistractorRequest) -> list[str]:
    """Same-kind corpus phrases within one token of the answer's length."""
    candidates = textkit.extract_candidates(req.context, limit=0)
    kind = _answer_kind(req.correct_answer, candidates)
    answer_len = len(req.correct_answer.split())
    out = []
    for cand in candidates:
        if cand.kind != kind:
            continue
        if abs(len(cand.phrase.split()) - answer_len) > 1:
            continue
        if _contains_either_way(cand.phrase, req.correct_answer):
            continue
        out.append(cand.phrase)
    return out


def generate_distractors(
    req: DistractorRequest, provider: GenerativeProvider | None = None
) -> list[str]:
    """Produce req.n distractors for a correct answer in its segment context.

    The output order is the generation order of the winning strategies, and
    identical requests yield identical lists.

    Raises:
        InsufficientDistractors: all strategies together filled fewer than n.
        InvalidParameter: n < 1.
    """
    if req.n < 1:
        raise InvalidParameter("n must be at least 1")

    chosen: list[str] = []
    seen = {req.correct_answer.lower()}

    def take(candidate: str, exclude_containment: bool = True) -> None:
        low = candidate.lower()
        if low in seen:
            return
        if exclude_containment and _contains_either_way(candidate, req.correct_answer):
            return
        seen.add(low)
        chosen.append(candidate)

    for candidate in _numeric_candidates(req.correct_answer):
        if len(chosen) >= req.n:
            break
        take(candidate, exclude_containment=False)

    if len(chosen) < req.n:
        for phrase in _mined_candidates(req):
            if len(chosen) >= req.n:
                break
            take(phrase)

    if len(chosen) < req.n and provider is not None:
        for cand in provider.generate(
            "distractors", req.context, answer=req.correct_answer, n=req.n - len(chosen)
        ):
            if len(chosen) >= req.n:
                break
            take(cand.text.strip())

    if len(chosen) < req.n:
        raise InsufficientDistractors(
            f"could only produce {len(chosen)} of {req.n} distractors"
        )
    return chosen[: req.n]
