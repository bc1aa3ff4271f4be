"""Question generation: short-answer, boolean, gap-fill, and multiple choice.

Each generator prefers candidates from a generative provider when one is
supplied and always has a deterministic rule-based fallback, so the pipeline
keeps working with no model behind it. Provider and fallback candidates are
merged, deduplicated on normalized question text, and ranked by confidence.
Fallback confidences are capped at 0.9 so a confident provider outranks them.

The rule-based question former works on one sentence at a time. It locates
the answer span, picks a WH-word from the answer's shape, then either fronts
an auxiliary already present in the sentence or falls back to do-support,
reusing the tagger's verb lexicon to recover the verb's base form.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from . import distract as distract_mod
from . import summarize, textkit
from .errors import (
    EmptySummary,
    InsufficientDistractors,
    InvalidParameter,
    KeywordNotInSegment,
    KeywordNotInSummary,
    OverlappingKeywords,
)
from .provider import GenerativeProvider

SAQ = "SAQ"
BLQ = "BLQ"
GFQ = "GFQ"
MCQ = "MCQ"
QUESTION_TYPES = (SAQ, BLQ, GFQ, MCQ)

SOURCE_PROVIDER = "provider"
SOURCE_FALLBACK = "fallback_builtin"

#: Upper bound on rule-based confidences; providers own (0.9, 1.0].
FALLBACK_CAP = 0.9

_DURATION_ANSWER_RE = re.compile(
    r"\d+\s+[A-Za-z]+(\s+ago)?$", re.IGNORECASE
)
_PURE_NUMBER_RE = re.compile(r"\d+([.,]\d+)?")
_GAP_RE = re.compile(r"___\((\d+)\)___")


@dataclass(frozen=True)
class SaqPayload:
    question_text: str
    answer: str


@dataclass(frozen=True)
class BlqPayload:
    question_text: str
    answer: str  # "yes" or "no"


@dataclass(frozen=True)
class GfqPayload:
    gapped_text: str
    answers: tuple[str, ...]


@dataclass(frozen=True)
class McqPayload:
    question_text: str
    correct_answer: str
    distractors: tuple[str, ...]
    option_order: tuple[int, ...]

    @property
    def options(self) -> tuple[str, ...]:
        """Answer options in display order."""
        pool = (self.correct_answer,) + self.distractors
        return tuple(pool[i] for i in self.option_order)


@dataclass(frozen=True)
class GeneratedQuestion:
    qtype: str
    rank: int
    confidence: float
    source: str
    payload: object


@dataclass(frozen=True)
class BlqSet:
    questions: tuple[GeneratedQuestion, ...]
    warning: str | None = None

    def by_answer(self, answer: str) -> list[GeneratedQuestion]:
        return [q for q in self.questions if q.payload.answer == answer]


@dataclass
class _Candidate:
    text: str
    score: float
    source: str
    payload_extra: dict = field(default_factory=dict)


def normalize_question_text(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip().rstrip("?.! ").lower()


def ensure_question_mark(text: str) -> str:
    text = text.strip()
    text = text.rstrip(".!? ")
    return text + "?"


def _tidy(text: str) -> str:
    """Collapse the seams left by removing or moving spans."""
    text = re.sub(r"\s+", " ", text).strip()
    text = re.sub(r"\s+([,.;:!?])", r"\1", text)
    text = re.sub(r"([,;:])\1+", r"\1", text)
    text = text.strip(" ,;:.")
    return text


def _lower_first(sentence_part: str, tokens: list[textkit.Token]) -> str:
    """Lowercase the leading word unless it is a proper noun or "I"."""
    part = sentence_part.lstrip()
    if not part:
        return part
    first = next((t for t in tokens if t.is_word), None)
    if first is not None and (first.pos == textkit.PROPN or first.text == "I"):
        return part
    return part[0].lower() + part[1:]


def _normalized_sentence_scores(text: str) -> dict[tuple[int, int], float]:
    scored = summarize.score_sentences(text)
    top = max((s for _, s in scored), default=0.0)
    out = {}
    for sent, score in scored:
        out[(sent.start, sent.end)] = (score / top) if top > 0 else 0.0
    return out


def _fallback_confidence(norm_score: float) -> float:
    return min(0.5 + 0.4 * norm_score, FALLBACK_CAP)


# --- WH-word selection -------------------------------------------------------

def _is_date_like(tokens: list[textkit.Token]) -> bool:
    return any(
        t.text[0].isupper() and t.text.lower() in textkit.MONTHS for t in tokens
    )


def _wh_word(
    answer: str,
    sentence: str,
    span: tuple[int, int],
    sent_tokens: list[textkit.Token],
) -> str:
    """Pick the question word from the shape of the answer phrase.

    The answer's tokens are taken from the tagged sentence, not re-tagged in
    isolation, so proper nouns keep their capitalization evidence.
    """
    words = [
        t for t in sent_tokens if t.is_word and span[0] <= t.start < span[1]
    ]
    duration = _DURATION_ANSWER_RE.fullmatch(answer.strip()) and any(
        t.text.lower() in textkit.DURATION_UNITS for t in words
    )
    if duration or _is_date_like(words):
        return "When"
    if words and all(_PURE_NUMBER_RE.fullmatch(t.text) for t in words):
        return "How many"
    if words and all(
        t.pos == textkit.PROPN or t.text.lower() in textkit.PERSON_TITLES
        for t in words
    ):
        before = sentence[: span[0]].split()
        prev = before[-1].rstrip(".").lower() if before else ""
        first = words[0].text.rstrip(".").lower()
        if prev in textkit.PERSON_TITLES or first in textkit.PERSON_TITLES:
            return "Who"
    return "What"


def _last_word_before(
    tokens: list[textkit.Token], offset: int
) -> textkit.Token | None:
    found = None
    for tok in tokens:
        if tok.end > offset:
            break
        if tok.is_word:
            found = tok
    return found


def _gap_is_filler(sentence: str, start: int, end: int) -> bool:
    return all(ch.isspace() or ch == "." for ch in sentence[start:end])


def _fold_title(
    sentence: str, tokens: list[textkit.Token], span: tuple[int, int]
) -> tuple[int, int]:
    """Pull a person title ("Mr.", "Dr.") just before the answer into the span."""
    prev = _last_word_before(tokens, span[0])
    if (
        prev is not None
        and prev.text.lower() in textkit.PERSON_TITLES
        and _gap_is_filler(sentence, prev.end, span[0])
    ):
        return (prev.start, span[1])
    return span


def _fold_preposition(
    sentence: str, tokens: list[textkit.Token], span: tuple[int, int]
) -> tuple[int, int]:
    """Pull the preposition of a time adjunct ("on March 14") into the span."""
    prev = _last_word_before(tokens, span[0])
    if (
        prev is not None
        and prev.pos == textkit.ADP
        and _gap_is_filler(sentence, prev.end, span[0])
    ):
        return (prev.start, span[1])
    return span


def _count_noun_after(
    sentence: str, tokens: list[textkit.Token], span: tuple[int, int]
) -> textkit.Token | None:
    """The counted noun right after a bare-number answer ("12 modules")."""
    for tok in tokens:
        if tok.start < span[1] or not tok.is_word:
            continue
        if tok.pos == textkit.NOUN and _gap_is_filler(sentence, span[1], tok.start):
            return tok
        return None
    return None


# --- rule-based SAQ ----------------------------------------------------------

def _find_main_verb(tokens: list[textkit.Token], after: int, span: tuple[int, int]) -> textkit.Token | None:
    """First plausible verb token after char offset ``after``, outside the answer."""
    for tok in tokens:
        if tok.start < after or not tok.is_word:
            continue
        if span[0] <= tok.start < span[1]:
            continue
        if tok.pos == textkit.VERB:
            return tok
    # Looser pass: an -ed / -s word right after the subject often is the verb
    # even when the lexicon does not know it.
    for tok in tokens:
        if tok.start < after or not tok.is_word:
            continue
        if span[0] <= tok.start < span[1]:
            continue
        if tok.pos in (textkit.DET, textkit.ADJ, textkit.NOUN, textkit.PROPN, textkit.NUM):
            low = tok.text.lower()
            if low.endswith("ed") or (low.endswith("s") and len(low) > 3):
                return tok
            continue
        break
    return None


def _verb_base(verb: str) -> str:
    low = verb.lower()
    if low in textkit.VERB_FORMS:
        return textkit.VERB_FORMS[low]
    if low.endswith("ied") and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith("ed"):
        stem = low[:-2]
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "aeiou":
            return stem[:-1]
        if stem + "e" in textkit.VERB_FORMS:
            return stem + "e"
        return stem
    if low.endswith("ies") and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith(("ches", "shes", "sses", "xes", "zes")):
        return low[:-2]
    if low.endswith("s") and len(low) > 3:
        return low[:-1]
    return low


def _do_auxiliary(verb: str) -> str:
    low = verb.lower()
    base = _verb_base(verb)
    if low.endswith("ed") or (low in textkit.VERB_FORMS and low != base and not low.endswith("s")):
        return "did"
    if low.endswith("s") and low != base:
        return "does"
    return "do"


def _saq_from_sentence(sentence: str, answer: str) -> str | None:
    """Turn one sentence containing the answer into a WH question, or give up."""
    spans = textkit.find_occurrences(sentence, answer)
    if not spans:
        return None
    span = spans[0]
    tokens = textkit.tag_text(sentence)
    wh = _wh_word(answer, sentence, span, tokens)

    # Widen the removed span so no function word is left dangling: the title
    # of a person answer, the preposition of a time adjunct, the noun counted
    # by a bare number (which joins the question word instead).
    if wh == "Who":
        span = _fold_title(sentence, tokens, span)
    elif wh == "When":
        span = _fold_preposition(sentence, tokens, span)
    elif wh == "How many":
        counted = _count_noun_after(sentence, tokens, span)
        if counted is not None:
            wh = f"How many {counted.text}"
            span = (span[0], counted.end)
        else:
            wh = "How much"

    prefix = sentence[: span[0]]
    suffix = sentence[span[1] :]
    prefix_words = [t for t in tokens if t.end <= span[0] and t.is_word]

    # Answer in subject position: the WH-word simply replaces it.
    if not prefix_words:
        body = _tidy(suffix)
        if not body:
            return None
        return ensure_question_mark(f"{wh} {body}")

    aux = next((t for t in tokens if t.is_word and t.pos == textkit.AUX), None)
    if aux is not None and aux.end <= span[0]:
        before_aux = sentence[: aux.start]
        between = sentence[aux.end : span[0]]
        body = _tidy(
            f"{_lower_first(before_aux, tokens)} {between} {suffix}"
        )
        return ensure_question_mark(f"{wh} {aux.text.lower()} {body}")
    if aux is not None and aux.start >= span[1]:
        # Answer precedes the auxiliary, so it was the subject.
        body = _tidy(sentence[aux.start :])
        return ensure_question_mark(f"{wh} {body}")

    verb = _find_main_verb(tokens, prefix_words[0].start, span)
    if verb is None:
        return None
    do_aux = _do_auxiliary(verb.text)
    base = _verb_base(verb.text)
    if verb.end <= span[0]:
        subject = sentence[: verb.start]
        rest = f"{sentence[verb.end : span[0]]} {suffix}"
    else:
        subject = prefix
        rest = sentence[verb.end :]
    body = _tidy(f"{_lower_first(subject, tokens)} {base} {rest}")
    return ensure_question_mark(f"{wh} {do_aux} {body}")


def _merge_ranked(
    provider_cands: list[_Candidate], fallback_cands: list[_Candidate], n: int
) -> list[_Candidate]:
    """Dedup on normalized text keeping the higher score, then rank.

    Ranking is by score descending; ties prefer provider candidates, then
    first appearance.
    """
    best: dict[str, tuple[int, _Candidate]] = {}
    for idx, cand in enumerate(provider_cands + fallback_cands):
        key = normalize_question_text(cand.text)
        if not key:
            continue
        if key not in best:
            best[key] = (idx, cand)
        elif cand.score > best[key][1].score:
            best[key] = (best[key][0], cand)
    ranked = sorted(
        best.values(),
        key=lambda pair: (
            -pair[1].score,
            0 if pair[1].source == SOURCE_PROVIDER else 1,
            pair[0],
        ),
    )
    return [cand for _, cand in ranked[:n]]


def generate_saq(
    segment_text: str,
    keyword: textkit.KeywordCandidate | str,
    n: int = 3,
    provider: GenerativeProvider | None = None,
) -> list[GeneratedQuestion]:
    """Generate up to ``n`` short-answer questions whose answer is the keyword.

    Questions are ranked by confidence, rank 1 first, confidences
    non-increasing. The answer phrase must occur in the segment.

    Raises:
        KeywordNotInSegment: the keyword never occurs in the segment text.
        InvalidParameter: n < 1.
    """
    if n < 1:
        raise InvalidParameter("n must be at least 1")
    phrase = keyword.phrase if isinstance(keyword, textkit.KeywordCandidate) else str(keyword)
    phrase = phrase.strip()
    if textkit.count_occurrences(segment_text, phrase) == 0:
        raise KeywordNotInSegment(f"{phrase!r} does not occur in the segment")

    provider_cands: list[_Candidate] = []
    if provider is not None:
        for cand in provider.generate("saq", segment_text, answer=phrase, n=n):
            provider_cands.append(
                _Candidate(ensure_question_mark(cand.text), cand.score, SOURCE_PROVIDER)
            )

    norm_scores = _normalized_sentence_scores(segment_text)
    fallback_cands: list[_Candidate] = []
    for sent in textkit.split_sentences(segment_text):
        if textkit.count_occurrences(sent.text, phrase) == 0:
            continue
        question = _saq_from_sentence(sent.text, phrase)
        if question is None:
            continue
        score = _fallback_confidence(norm_scores.get((sent.start, sent.end), 0.0))
        fallback_cands.append(_Candidate(question, score, SOURCE_FALLBACK))

    ranked = _merge_ranked(provider_cands, fallback_cands, n)
    return [
        GeneratedQuestion(
            qtype=SAQ,
            rank=i + 1,
            confidence=c.score,
            source=c.source,
            payload=SaqPayload(question_text=c.text, answer=phrase),
        )
        for i, c in enumerate(ranked)
    ]


# --- boolean questions -------------------------------------------------------

def _yes_no_question(sentence: str) -> str:
    """Front the first auxiliary, or wrap with "Is it true that ...?"."""
    tokens = textkit.tag_text(sentence)
    aux = next((t for t in tokens if t.is_word and t.pos == textkit.AUX), None)
    first_word = next((t for t in tokens if t.is_word), None)
    if aux is not None and first_word is not None:
        if aux.start == first_word.start:
            # Already auxiliary-led; just repunctuate.
            return ensure_question_mark(sentence)
        before = sentence[: aux.start]
        after = sentence[aux.end :]
        body = _tidy(f"{_lower_first(before, tokens)} {after}")
        return ensure_question_mark(f"{aux.text.capitalize()} {body}")
    body = _tidy(_lower_first(sentence, tokens))
    return ensure_question_mark(f"Is it true that {body}")


def _perturb_sentence(
    sentence: str, summary_candidates: list[textkit.KeywordCandidate], summary: str
) -> str | None:
    """Make the sentence factually wrong with one replacement.

    Numeric values are shifted through the distractor scheme first; otherwise
    the earliest keyword-like phrase in the sentence is swapped for a
    different phrase from elsewhere in the summary.
    """
    tokens = textkit.tag_text(sentence)
    for tok in tokens:
        if tok.pos == textkit.NUM and tok.text.isdigit():
            try:
                replacement = distract_mod.generate_distractors(
                    distract_mod.DistractorRequest(
                        correct_answer=tok.text, context=sentence, n=1
                    )
                )[0]
            except InsufficientDistractors:
                break
            return sentence[: tok.start] + replacement + sentence[tok.end :]

    in_sentence = []
    for cand in summary_candidates:
        occ = textkit.find_occurrences(sentence, cand.phrase)
        if occ:
            in_sentence.append((occ[0], cand))
    in_sentence.sort(key=lambda pair: pair[0][0])
    for (start, end), cand in in_sentence:
        for other in summary_candidates:
            if other.phrase.lower() == cand.phrase.lower():
                continue
            if other.phrase.lower() in sentence.lower():
                continue
            if _mutual_containment(cand.phrase, other.phrase):
                continue
            replacement = _fit_case(other.phrase, sentence[start:end])
            return sentence[:start] + replacement + sentence[end:]

    # Last resort: swap two phrases within the sentence itself. Skipped for
    # coordinated pairs ("A and B"), where swapping changes nothing factual.
    for i, ((a_start, a_end), a) in enumerate(in_sentence):
        for (b_start, b_end), b in in_sentence[i + 1 :]:
            if b_start < a_end:
                continue
            if _mutual_containment(a.phrase, b.phrase):
                continue
            a_text = sentence[a_start:a_end]
            b_text = sentence[b_start:b_end]
            if a_text.lower() == b_text.lower():
                continue
            between = sentence[a_end:b_start].replace(",", " ").split()
            if all(w.lower() in ("and", "or") for w in between):
                continue
            return (
                sentence[:a_start]
                + _fit_case(b_text, a_text)
                + sentence[a_end:b_start]
                + _fit_case(a_text, b_text)
                + sentence[b_end:]
            )
    return None


def _fit_case(replacement: str, slot_text: str) -> str:
    """Match the replacement's leading case to the slot it fills.

    Proper-noun runs keep their capitals even mid-sentence.
    """
    if slot_text[:1].isupper() and replacement[:1].islower():
        return replacement[0].upper() + replacement[1:]
    if slot_text[:1].islower() and replacement[:1].isupper():
        words = textkit.tag_text(replacement)
        if not any(t.pos == textkit.PROPN for t in words):
            return replacement[0].lower() + replacement[1:]
    return replacement


def _mutual_containment(a: str, b: str) -> bool:
    la, lb = a.lower(), b.lower()
    return la in lb or lb in la


def generate_blq(
    summary_text: str,
    n_per_polarity: int = 3,
    provider: GenerativeProvider | None = None,
) -> BlqSet:
    """Generate boolean questions over a summary, half keyed yes, half no.

    The yes set restates summary sentences as questions; the no set perturbs
    a fact first. When the summary is too short (or a sentence resists
    perturbation) the set is returned smaller with a warning instead of
    failing.

    Raises:
        EmptySummary: no sentences in the summary.
        InvalidParameter: n_per_polarity < 1.
    """
    if n_per_polarity < 1:
        raise InvalidParameter("n_per_polarity must be at least 1")
    sentences = textkit.split_sentences(summary_text)
    if not sentences:
        raise EmptySummary("summary has no sentences")

    norm_scores = _normalized_sentence_scores(summary_text)
    summary_candidates = textkit.extract_candidates(summary_text, limit=0)

    def provider_side(polarity: str) -> list[_Candidate]:
        if provider is None:
            return []
        cands = provider.generate(
            "boolq", summary_text, polarity=polarity, n=n_per_polarity
        )
        return [
            _Candidate(ensure_question_mark(c.text), c.score, SOURCE_PROVIDER)
            for c in cands
        ]

    yes_fallback: list[_Candidate] = []
    no_fallback: list[_Candidate] = []
    for sent in sentences:
        score = _fallback_confidence(norm_scores.get((sent.start, sent.end), 0.0))
        yes_fallback.append(_Candidate(_yes_no_question(sent.text), score, SOURCE_FALLBACK))
        perturbed = _perturb_sentence(sent.text, summary_candidates, summary_text)
        if perturbed is not None:
            no_fallback.append(_Candidate(_yes_no_question(perturbed), score, SOURCE_FALLBACK))

    yes_ranked = _merge_ranked(provider_side("yes"), yes_fallback, n_per_polarity)
    no_ranked = _merge_ranked(provider_side("no"), no_fallback, n_per_polarity)

    warning = None
    if len(yes_ranked) < n_per_polarity or len(no_ranked) < n_per_polarity:
        warning = (
            f"requested {n_per_polarity} per polarity but produced "
            f"{len(yes_ranked)} yes and {len(no_ranked)} no"
        )

    merged = [(c, "yes") for c in yes_ranked] + [(c, "no") for c in no_ranked]
    merged.sort(key=lambda pair: -pair[0].score)
    questions = tuple(
        GeneratedQuestion(
            qtype=BLQ,
            rank=i + 1,
            confidence=c.score,
            source=c.source,
            payload=BlqPayload(question_text=c.text, answer=answer),
        )
        for i, (c, answer) in enumerate(merged)
    )
    return BlqSet(questions=questions, warning=warning)


# --- gap-fill ----------------------------------------------------------------

def generate_gfq(
    summary_text: str, keywords: list[textkit.KeywordCandidate | str]
) -> GfqPayload:
    """Blank out one occurrence of every keyword in the summary.

    Each keyword consumes its first occurrence that does not overlap an
    already-consumed span. Blanks are numbered left to right in text order as
    ``___(k)___`` and answers are reported in the same order, preserving the
    summary's original casing so substituting them back reproduces the
    summary exactly.

    Raises:
        KeywordNotInSummary: a keyword never occurs in the summary.
        OverlappingKeywords: every occurrence of a keyword overlaps a span
            already consumed by an earlier keyword.
    """
    consumed: list[tuple[int, int]] = []
    for keyword in keywords:
        phrase = (
            keyword.phrase if isinstance(keyword, textkit.KeywordCandidate) else str(keyword)
        ).strip()
        occurrences = textkit.find_occurrences(summary_text, phrase)
        if not occurrences:
            raise KeywordNotInSummary(f"{phrase!r} does not occur in the summary")
        free = [
            (a, b)
            for a, b in occurrences
            if all(b <= ca or a >= cb for ca, cb in consumed)
        ]
        if not free:
            raise OverlappingKeywords(
                f"every occurrence of {phrase!r} overlaps an earlier gap"
            )
        consumed.append(free[0])

    consumed.sort()
    answers = tuple(summary_text[a:b] for a, b in consumed)
    parts = []
    prev = 0
    for k, (a, b) in enumerate(consumed, start=1):
        parts.append(summary_text[prev:a])
        parts.append(f"___({k})___")
        prev = b
    parts.append(summary_text[prev:])
    return GfqPayload(gapped_text="".join(parts), answers=answers)


def fill_gaps(gapped_text: str, answers: tuple[str, ...]) -> str:
    """Substitute answers back into numbered blanks (the round-trip check)."""
    def replace(m: re.Match) -> str:
        return answers[int(m.group(1)) - 1]

    return _GAP_RE.sub(replace, gapped_text)


# --- multiple choice ---------------------------------------------------------

def generate_mcq(
    saq: SaqPayload,
    segment_text: str,
    n_distractors: int = 3,
    seed: int = 0,
    provider: GenerativeProvider | None = None,
) -> McqPayload:
    """Wrap a short-answer question with distractors and a shuffled option order.

    The option order permutation is drawn from ``random.Random(seed)`` so a
    stored seed reproduces the exact display order.

    Raises:
        InvalidParameter: n_distractors < 1.
        InsufficientDistractors: propagated from the distractor chain.
    """
    if n_distractors < 1:
        raise InvalidParameter("n_distractors must be at least 1")
    distractors = distract_mod.generate_distractors(
        distract_mod.DistractorRequest(
            correct_answer=saq.answer,
            context=segment_text,
            n=n_distractors,
            seed=seed,
        ),
        provider=provider,
    )
    order = list(range(1 + len(distractors)))
    random.Random(seed).shuffle(order)
    return McqPayload(
        question_text=saq.question_text,
        correct_answer=saq.answer,
        distractors=tuple(distractors),
        option_order=tuple(order),
    )
