"""Segment summarization: a deterministic extractive path plus a provider path.

The extractive summarizer is frequency based. Every content word (not a
stopword, not punctuation) contributes its corpus frequency within the
segment; a sentence's score is that sum divided by the sentence's word-token
count, which stops long sentences from winning on length alone.
"""
from __future__ import annotations

import math
from collections import defaultdict

from . import textkit
from .errors import EmptyInput, ProviderProtocolError
from .provider import GenerativeProvider

DEFAULT_RATIO = 0.2
DEFAULT_MAX_WORDS = 100


def score_sentences(
    text: str, stopwords: frozenset[str] = textkit.DEFAULT_STOPWORDS
) -> list[tuple[textkit.Sentence, float]]:
    """Score every sentence of ``text`` against the whole text's word frequencies."""
    sentences = textkit.split_sentences(text)
    freq: dict[str, int] = defaultdict(int)
    token_lists = []
    for sent in sentences:
        tokens = [t for t in textkit.tokenize(sent.text) if t.is_word]
        token_lists.append(tokens)
        for tok in tokens:
            low = tok.text.lower()
            if low not in stopwords:
                freq[low] += 1

    scored = []
    for sent, tokens in zip(sentences, token_lists):
        if tokens:
            total = sum(freq[t.text.lower()] for t in tokens if t.text.lower() not in stopwords)
            score = total / len(tokens)
        else:
            score = 0.0
        scored.append((sent, score))
    return scored


def summarize_extractive(
    segment_text: str,
    ratio: float = DEFAULT_RATIO,
    max_words: int = DEFAULT_MAX_WORDS,
    stopwords: frozenset[str] = textkit.DEFAULT_STOPWORDS,
) -> str:
    """Pick the top-scoring sentences and return them in original order.

    ceil(ratio * sentence_count) sentences are selected, never fewer than
    one. Score ties go to the earlier sentence. If the selection exceeds
    max_words (whitespace-delimited), selected sentences are dropped from the
    end until it fits, but a single overlong sentence is kept whole.

    Raises:
        EmptyInput: the text contains no sentences.
    """
    scored = score_sentences(segment_text, stopwords)
    if not scored:
        raise EmptyInput("nothing to summarize")

    want = max(1, math.ceil(ratio * len(scored)))
    order = sorted(range(len(scored)), key=lambda i: (-scored[i][1], i))
    chosen = sorted(order[:want])

    def word_count(indices: list[int]) -> int:
        return sum(len(scored[i][0].text.split()) for i in indices)

    while len(chosen) > 1 and word_count(chosen) > max_words:
        chosen.pop()
    return " ".join(scored[i][0].text for i in chosen)


def summarize_via_provider(segment_text: str, provider: GenerativeProvider) -> str:
    """Ask a generative provider for a summary and return its best candidate.

    Provider errors (ProviderUnavailable, ProviderProtocolError) propagate to
    the caller, which decides whether to fall back to the extractive path.
    """
    candidates = provider.generate("summarize", segment_text, n=1)
    if not candidates:
        raise ProviderProtocolError("provider returned no summary candidates")
    return candidates[0].text
