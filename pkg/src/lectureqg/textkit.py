"""Rule-based text analysis: tokens, sentences, part-of-speech tags, keywords.

Everything in this module is deterministic and dictionary driven. A small
closed-class lexicon plus suffix heuristics stand in for a learned tagger,
which keeps keyword recommendation reproducible across runs and environments.
Tags are coarse on purpose: the downstream consumers only need to find noun
phrases, proper-noun runs, and number/unit patterns.

The default word lists live in this file so the package works with no data
files; ``load_wordlist`` reads a plain-text replacement (one entry per line,
``#`` comments allowed) for deployments that want to tune them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidParameter, PhraseNotInSegment

# Coarse tag set.
NOUN = "NOUN"
PROPN = "PROPN"
VERB = "VERB"
ADJ = "ADJ"
ADP = "ADP"
DET = "DET"
PRON = "PRON"
AUX = "AUX"
NUM = "NUM"
PUNCT = "PUNCT"
OTHER = "OTHER"

# Candidate kinds and origins.
NOUN_PHRASE = "noun_phrase"
NAMED_ENTITY = "named_entity"
RECOMMENDED = "recommended"
CUSTOM = "custom"

_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?|[A-Za-z]+(?:[-'][A-Za-z]+)*|\S")
_WORD_RE = re.compile(r"[A-Za-z0-9]")

DETERMINERS = frozenset(
    """the a an this that these those each every either neither some any no all
    both few several many much most more less another such""".split()
)

PREPOSITIONS = frozenset(
    """of in on at by for with from to into onto over under about between through
    during against among without within across behind beyond along around near
    after before since until toward towards upon off out up down as per via""".split()
)

PRONOUNS = frozenset(
    """i you he she it we they me him her us them my your his its their our mine
    yours hers ours theirs myself yourself himself herself itself ourselves
    themselves""".split()
)

AUXILIARIES = frozenset(
    """is are was were am be been being has have had do does did can could will
    would shall should may might must""".split()
)

#: Inflected form to base form for verbs the tagger should recognize outright.
VERB_FORMS: dict[str, str] = {}
for _base, _forms in {
    "make": ("makes", "made", "making"),
    "use": ("uses", "used"),
    "take": ("takes", "took", "taken"),
    "see": ("sees", "saw", "seen"),
    "know": ("knows", "knew", "known"),
    "think": ("thinks", "thought"),
    "say": ("says", "said"),
    "come": ("comes", "came"),
    "want": ("wants", "wanted"),
    "give": ("gives", "gave", "given"),
    "find": ("finds", "found"),
    "tell": ("tells", "told"),
    "become": ("becomes", "became"),
    "show": ("shows", "showed", "shown"),
    "leave": ("leaves", "left"),
    "put": ("puts",),
    "mean": ("means", "meant"),
    "keep": ("keeps", "kept"),
    "let": ("lets",),
    "begin": ("begins", "began", "begun"),
    "start": ("starts", "started"),
    "help": ("helps", "helped"),
    "provide": ("provides", "provided"),
    "enable": ("enables", "enabled"),
    "include": ("includes", "included"),
    "require": ("requires", "required"),
    "allow": ("allows", "allowed"),
    "create": ("creates", "created"),
    "generate": ("generates", "generated"),
    "produce": ("produces", "produced"),
    "contain": ("contains", "contained"),
    "describe": ("describes", "described"),
    "explain": ("explains", "explained"),
    "improve": ("improves", "improved"),
    "change": ("changes", "changed"),
    "rely": ("relies", "relied"),
    "maintain": ("maintains", "maintained"),
    "teach": ("teaches", "taught"),
    "write": ("writes", "wrote", "written"),
    "go": ("goes", "went", "gone"),
    "get": ("gets", "got"),
    "call": ("calls", "called"),
    "offer": ("offers", "offered"),
    "happen": ("happens", "happened"),
    "build": ("builds", "built"),
    "grow": ("grows", "grew", "grown"),
    "run": ("runs", "ran"),
    "hold": ("holds", "held"),
    "bring": ("brings", "brought"),
    "develop": ("develops", "developed"),
    "release": ("releases", "released"),
    "cover": ("covers", "covered"),
    "ship": ("ships", "shipped"),
    "learn": ("learns", "learned", "learnt"),
    "inspect": ("inspects", "inspected"),
    "modify": ("modifies", "modified"),
    "enhance": ("enhances", "enhanced"),
}.items():
    VERB_FORMS[_base] = _base
    for _f in _forms:
        VERB_FORMS[_f] = _base

ADJECTIVES = frozenset(
    """good new first last long great little own other old right big high
    different small large next early young important public bad same able recent
    major key main common simple free full low late general strong whole easy
    popular modern digital final""".split()
)

ADVERBS = frozenset(
    """very also however often always never now then here there too just only
    quite really perhaps maybe soon later not when where why how ago yes today
    yesterday tomorrow""".split()
)

CONJUNCTIONS = frozenset("and or but nor".split())

NUMBER_WORDS = frozenset(
    """zero one two three four five six seven eight nine ten eleven twelve
    thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty
    forty fifty sixty seventy eighty ninety hundred thousand million billion""".split()
)

#: Units that make "<number> <unit> [ago]" a duration expression.
DURATION_UNITS = frozenset(
    """second seconds minute minutes hour hours day days week weeks month months
    year years decade decades century centuries""".split()
)

MONTHS = frozenset(
    """january february march april may june july august september october
    november december""".split()
)

#: Titles that mark an adjacent proper-noun run as a person.
PERSON_TITLES = frozenset(
    """dr mr mrs ms prof professor president ceo sir dame doctor captain judge
    senator""".split()
)

NOUN_SUFFIXES = ("tion", "ment", "ness", "ity")
ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible")

#: Sentence-final abbreviations that never end a sentence.
DEFAULT_ABBREVIATIONS = ("e.g.", "i.e.", "Dr.", "Mr.", "Ms.", "etc.")

DEFAULT_STOPWORDS = frozenset(
    """a about above after again against all am an and any are as at be because
    been before being below between both but by could did do does doing down
    during each few for from further had has have having he her here hers him
    his how i if in into is it its itself just me more most my no nor not of off
    on once only or other our ours out over own same she should so some such
    than that the their theirs them then there these they this those through to
    too under until up very was we were what when where which while who whom why
    will with would you your yours""".split()
)


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Read one entry per line, ignoring blanks and ``#`` comments."""
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line.lower())
    return frozenset(entries)


@dataclass
class Token:
    """One token with its character span in the source text."""

    text: str
    start: int
    end: int
    pos: str = OTHER

    @property
    def is_word(self) -> bool:
        return bool(_WORD_RE.search(self.text))


@dataclass(frozen=True)
class Sentence:
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class KeywordCandidate:
    """A phrase recommended (or validated) as an answer keyword."""

    phrase: str
    kind: str
    frequency: int
    first_offset: int
    origin: str = RECOMMENDED


def tokenize(text: str) -> list[Token]:
    """Split text into word, number, and punctuation tokens with spans.

    Spans never overlap and appear in source order, so slicing the source
    with them reproduces the input exactly (plus the skipped whitespace).
    """
    return [Token(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def split_sentences(text: str, abbreviations=DEFAULT_ABBREVIATIONS) -> list[Sentence]:
    """Split on ., !, ? followed by whitespace and a capital letter.

    A terminator also ends a sentence at end of text. Periods that complete a
    known abbreviation never split. Offsets index into the original text;
    sentence strings carry their terminator and no surrounding whitespace.
    """
    lowered = tuple(a.lower() for a in abbreviations)
    boundaries: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch not in ".!?":
            i += 1
            continue
        run_end = i
        while run_end + 1 < n and text[run_end + 1] in ".!?":
            run_end += 1
        if ch == "." and run_end == i:
            prefix = text[: i + 1].lower()
            if any(prefix.endswith(abbr) for abbr in lowered):
                i = run_end + 1
                continue
        j = run_end + 1
        saw_space = False
        while j < n and text[j].isspace():
            saw_space = True
            j += 1
        if j >= n or (saw_space and text[j].isupper()):
            boundaries.append(run_end + 1)
        i = run_end + 1

    sentences: list[Sentence] = []
    prev = 0
    for b in boundaries:
        chunk = text[prev:b]
        stripped = chunk.strip()
        if stripped:
            start = prev + chunk.index(stripped[0])
            sentences.append(Sentence(stripped, start, start + len(stripped)))
        prev = b
    tail = text[prev:]
    stripped = tail.strip()
    if stripped:
        start = prev + tail.index(stripped[0])
        sentences.append(Sentence(stripped, start, start + len(stripped)))
    return sentences


#: Word chunks that precede a non-terminating "." (from the abbreviation list).
_ABBREV_WORDS = frozenset(
    part
    for abbr in DEFAULT_ABBREVIATIONS
    for part in abbr.lower().split(".")
    if part
)


def pos_tag(tokens: list[Token]) -> list[Token]:
    """Assign coarse tags in place (and return the list).

    Rule order per token: punctuation, digits, closed-class lexicon,
    -ing/-ed directly after an auxiliary, noun/adverb/adjective suffixes,
    capitalized but not sentence-initial, default NOUN. Sentence starts are
    inferred from the token stream itself: the first token and any token
    after ., !, ? except when the period belongs to a known abbreviation.
    """
    sentence_initial = True
    prev_word_tag: str | None = None
    prev_word_text: str | None = None
    for tok in tokens:
        if not tok.is_word:
            tok.pos = PUNCT
            if tok.text in ("!", "?"):
                sentence_initial = True
            elif tok.text == "." and (
                prev_word_text is None
                or prev_word_text.lower() not in _ABBREV_WORDS
            ):
                sentence_initial = True
            continue
        tok.pos = _tag_word(tok.text, sentence_initial, prev_word_tag)
        prev_word_tag = tok.pos
        prev_word_text = tok.text
        sentence_initial = False
    return tokens


def _tag_word(text: str, sentence_initial: bool, prev_word_tag: str | None) -> str:
    if text[0].isdigit():
        return NUM
    low = text.lower()
    if low in DETERMINERS:
        return DET
    if low in PREPOSITIONS:
        return ADP
    if low in PRONOUNS:
        return PRON
    if low in AUXILIARIES:
        return AUX
    if low in VERB_FORMS:
        return VERB
    if low in ADJECTIVES:
        return ADJ
    if low in ADVERBS or low in CONJUNCTIONS:
        return OTHER
    if low in NUMBER_WORDS:
        return NUM
    if (low.endswith("ing") or low.endswith("ed")) and prev_word_tag == AUX:
        return VERB
    base = low[:-1] if low.endswith("s") and len(low) > 3 else low
    if any(low.endswith(suf) or base.endswith(suf) for suf in NOUN_SUFFIXES):
        return NOUN
    if low.endswith("ly"):
        return OTHER
    if any(low.endswith(suf) or base.endswith(suf) for suf in ADJ_SUFFIXES):
        return ADJ
    if text[0].isupper() and not sentence_initial:
        return PROPN
    return NOUN


def tag_text(text: str) -> list[Token]:
    return pos_tag(tokenize(text))


def count_occurrences(text: str, phrase: str) -> int:
    """Non-overlapping, case-insensitive occurrence count of phrase in text."""
    if not phrase:
        return 0
    return text.lower().count(phrase.lower())


def find_occurrences(text: str, phrase: str) -> list[tuple[int, int]]:
    """Spans of non-overlapping case-insensitive occurrences, left to right."""
    spans = []
    if not phrase:
        return spans
    hay, needle = text.lower(), phrase.lower()
    pos = hay.find(needle)
    while pos != -1:
        spans.append((pos, pos + len(needle)))
        pos = hay.find(needle, pos + len(needle))
    return spans


def _chunk_spans(tokens: list[Token]) -> list[tuple[int, int]]:
    """Maximal noun-phrase chunks as (first_token, last_token) index pairs.

    Pattern: an optional determiner, any adjectives, then one or more nouns
    or proper nouns; separately, number tokens followed by nouns. The leading
    determiner is not part of the reported span.
    """
    spans = []
    i = 0
    n = len(tokens)
    while i < n:
        tag = tokens[i].pos
        if tag == NUM:
            j = i
            while j + 1 < n and tokens[j + 1].pos == NUM:
                j += 1
            k = j
            while k + 1 < n and tokens[k + 1].pos in (NOUN, PROPN):
                k += 1
            if k > j:
                spans.append((i, k))
                i = k + 1
                continue
            i = j + 1
            continue
        start = i
        if tag == DET:
            i += 1
        while i < n and tokens[i].pos == ADJ:
            i += 1
        first_noun = i
        while i < n and tokens[i].pos in (NOUN, PROPN):
            i += 1
        if i > first_noun:
            head = start if tokens[start].pos != DET else start + 1
            spans.append((head, i - 1))
        elif i == start:
            i += 1
    return spans


def _entity_spans(tokens: list[Token]) -> list[tuple[int, int]]:
    """Proper-noun runs plus date, time, and duration patterns."""
    spans = []
    n = len(tokens)
    i = 0
    while i < n:
        if tokens[i].pos == PROPN:
            j = i
            while j + 1 < n and tokens[j + 1].pos == PROPN:
                j += 1
            spans.append((i, j))
            i = j + 1
        else:
            i += 1

    def low(k: int) -> str:
        return tokens[k].text.lower()

    def is_month(k: int) -> bool:
        return tokens[k].text[0].isupper() and low(k) in MONTHS

    i = 0
    while i < n:
        # <number> <unit> [ago]
        if tokens[i].pos == NUM and i + 1 < n and low(i + 1) in DURATION_UNITS:
            j = i + 1
            if j + 1 < n and low(j + 1) == "ago":
                j += 1
            spans.append((i, j))
            i = j + 1
            continue
        # March 2020 | March 5, 2020 | 5 March 2020
        if is_month(i):
            j = i
            if j + 1 < n and tokens[j + 1].pos == NUM:
                j += 1
                if (
                    j + 2 < n
                    and tokens[j + 1].text == ","
                    and tokens[j + 2].pos == NUM
                ):
                    j += 2
                spans.append((i, j))
                i = j + 1
                continue
            i += 1
            continue
        if (
            tokens[i].pos == NUM
            and i + 1 < n
            and is_month(i + 1)
        ):
            j = i + 1
            if j + 1 < n and tokens[j + 1].pos == NUM:
                j += 1
            spans.append((i, j))
            i = j + 1
            continue
        # clock time 5:30
        if (
            tokens[i].pos == NUM
            and i + 2 < n
            and tokens[i + 1].text == ":"
            and tokens[i + 2].pos == NUM
        ):
            spans.append((i, i + 2))
            i = i + 3
            continue
        i += 1
    return spans


def extract_candidates(segment_text: str, limit: int = 20) -> list[KeywordCandidate]:
    """Recommend keyword candidates for a segment.

    Candidates come from noun-phrase chunks and entity patterns, deduplicated
    case-insensitively. Frequency is the non-overlapping case-insensitive
    count of the phrase in the segment text; ordering is frequency descending,
    then first occurrence, then the phrase itself.

    Args:
        segment_text: text of one transcript segment.
        limit: maximum number of candidates returned; non-positive means all.
    """
    tokens = tag_text(segment_text)
    found: dict[str, dict] = {}

    def add(first_tok: int, last_tok: int, kind: str) -> None:
        start = tokens[first_tok].start
        end = tokens[last_tok].end
        phrase = segment_text[start:end].strip()
        if not phrase or not _WORD_RE.search(phrase):
            return
        key = phrase.lower()
        entry = found.get(key)
        if entry is None:
            found[key] = {"phrase": phrase, "kind": kind, "first_offset": start}
        else:
            entry["first_offset"] = min(entry["first_offset"], start)
            if kind == NAMED_ENTITY:
                entry["kind"] = NAMED_ENTITY

    for a, b in _chunk_spans(tokens):
        add(a, b, NOUN_PHRASE)
    for a, b in _entity_spans(tokens):
        add(a, b, NAMED_ENTITY)

    candidates = [
        KeywordCandidate(
            phrase=e["phrase"],
            kind=e["kind"],
            frequency=count_occurrences(segment_text, e["phrase"]),
            first_offset=e["first_offset"],
            origin=RECOMMENDED,
        )
        for e in found.values()
    ]
    candidates.sort(key=lambda c: (-c.frequency, c.first_offset, c.phrase.lower()))
    if limit and limit > 0:
        candidates = candidates[:limit]
    return candidates


def validate_custom_keyword(segment_text: str, phrase: str) -> KeywordCandidate:
    """Check a teacher-entered phrase against the segment.

    The phrase is kept as typed apart from surrounding whitespace. Raises
    PhraseNotInSegment when it does not occur (case-insensitively).
    """
    phrase = phrase.strip()
    if not phrase:
        raise InvalidParameter("keyword phrase must not be empty")
    frequency = count_occurrences(segment_text, phrase)
    if frequency == 0:
        raise PhraseNotInSegment(f"{phrase!r} does not occur in the segment")
    first = segment_text.lower().find(phrase.lower())
    return KeywordCandidate(
        phrase=phrase,
        kind=NOUN_PHRASE,
        frequency=frequency,
        first_offset=first,
        origin=CUSTOM,
    )
