"""Deterministic Persian text preprocessing.

Pipeline: normalize -> sentence split -> tokenize -> stop-word flagging ->
stem/lemma lookup. All steps are pure functions of the input text plus a
``PreprocessConfig``; stop words are flagged, never deleted, so position
features downstream always see the true first and last tokens.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import ResourceError

ZWNJ = "‌"

# Arabic presentation variants folded to their Persian letters.
ARABIC_TO_PERSIAN = {
    "ي": "ی",  # ARABIC LETTER YEH -> FARSI YEH
    "ك": "ک",  # ARABIC LETTER KAF -> KEHEH
}

# Arabic-Indic digits unified to Extended Arabic-Indic (Persian) digits.
DIGIT_MAP = {chr(0x0660 + i): chr(0x06F0 + i) for i in range(10)}

# Zero-width and joiner characters dropped during normalization; ZWNJ survives
# because it is orthographically meaningful in Persian.
ZERO_WIDTH_DROP = frozenset({
    "​", "‍", "‎", "‏", "⁠", "﻿", "­",
})

PERSIAN_QUESTION_MARK = "؟"
CANONICAL_QUESTION_MARK = "?"

SENTENCE_TERMINATORS = {".", "!", "?", PERSIAN_QUESTION_MARK}

# Suffixes stripped by the rule-based stemmer, longest match first: the
# superlative, attached plural/possessive clitics, plural markers, the
# comparative, then single-letter clitics.
STEM_SUFFIXES = ("ترین", "مان", "تان", "شان", "ها", "ان", "تر", "م", "ت", "ش")
STEM_PREFIXES = ("نمی" + ZWNJ, "می" + ZWNJ)
STEM_MIN_LETTERS = 2

_TOKEN_RE = re.compile(r"[\w‌]+|\S")
_WORD_CHAR_RE = re.compile(r"[\w‌]")


@dataclass(frozen=True)
class PreprocessConfig:
    nfc: bool = True
    map_arabic_letters: bool = True
    unify_digits: bool = True
    strip_zero_width: bool = True
    collapse_whitespace: bool = True
    unify_question_mark: bool = True
    mark_stopwords: bool = True
    stem: bool = True
    lemmatize: bool = True

    @classmethod
    def from_config(cls, cfg) -> "PreprocessConfig":
        return cls(
            nfc=cfg.get_bool("preprocess.nfc"),
            map_arabic_letters=cfg.get_bool("preprocess.map_arabic_letters"),
            unify_digits=cfg.get_bool("preprocess.unify_digits"),
            strip_zero_width=cfg.get_bool("preprocess.strip_zero_width"),
            collapse_whitespace=cfg.get_bool("preprocess.collapse_whitespace"),
            unify_question_mark=cfg.get_bool("preprocess.unify_question_mark"),
            mark_stopwords=cfg.get_bool("preprocess.mark_stopwords"),
            stem=cfg.get_bool("preprocess.stem"),
            lemmatize=cfg.get_bool("preprocess.lemmatize"),
        )

    def canonical(self) -> str:
        keys = sorted(self.__dataclass_fields__)
        return "\n".join(f"{k}={getattr(self, k)}" for k in keys)


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    lemma: str
    is_stopword: bool = False
    is_punct: bool = False
    span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    terminal_punct: str | None
    char_span: tuple[int, int]

    def word_tokens(self) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if not t.is_punct)


@dataclass(frozen=True)
class ProcessedText:
    original: str
    normalized: str
    sentences: tuple[Sentence, ...]
    config_fingerprint: str

    def single_sentence(self, index: int) -> "ProcessedText":
        """View containing just one sentence, for per-sentence prediction."""
        return ProcessedText(self.original, self.normalized,
                             (self.sentences[index],), self.config_fingerprint)


def normalize(text: str, config: PreprocessConfig | None = None) -> str:
    """Canonicalize raw text. Total and idempotent."""
    cfg = config or PreprocessConfig()
    if cfg.nfc:
        text = unicodedata.normalize("NFC", text)
    if cfg.map_arabic_letters:
        text = "".join(ARABIC_TO_PERSIAN.get(ch, ch) for ch in text)
    if cfg.unify_digits:
        text = "".join(DIGIT_MAP.get(ch, ch) for ch in text)
    if cfg.strip_zero_width:
        text = "".join(ch for ch in text if ch not in ZERO_WIDTH_DROP)
    if cfg.collapse_whitespace:
        # Runs containing a newline become a single newline so sentence
        # splitting can still treat line breaks as terminators; all other
        # whitespace runs collapse to one space.
        text = re.sub(r"[^\S\n]*\n\s*", "\n", text)
        text = re.sub(r"[^\S\n]+", " ", text)
        text = text.strip()
    if cfg.unify_question_mark:
        text = text.replace(PERSIAN_QUESTION_MARK, CANONICAL_QUESTION_MARK)
    return text


def split_sentences(text: str) -> list[tuple[int, int, str | None]]:
    """Split normalized text into (start, end, terminal_punct) spans.

    Splits on ``.``, ``!``, ``?`` (plus the Arabic question mark, in case the
    input skipped normalization) and newlines. Terminal punctuation stays
    attached to the preceding sentence; whitespace-only segments are dropped.
    A newline- or end-terminated segment whose last character is ``:`` gets
    ``:`` as its terminal punctuation.
    """
    spans: list[tuple[int, int, str | None]] = []
    seg_start = 0

    def emit(body_start: int, body_end: int, end: int, terminal: str | None):
        while body_start < body_end and text[body_start].isspace():
            body_start += 1
        body = text[body_start:body_end]
        if not body.strip():
            return
        if terminal is None:
            body_end = body_start + len(body.rstrip())
            end = body_end
            if text[body_end - 1] == ":":
                terminal = ":"
        spans.append((body_start, end, terminal))

    for i, ch in enumerate(text):
        if ch in SENTENCE_TERMINATORS:
            terminal = CANONICAL_QUESTION_MARK if ch == PERSIAN_QUESTION_MARK else ch
            emit(seg_start, i, i + 1, terminal)
            seg_start = i + 1
        elif ch == "\n":
            emit(seg_start, i, i, None)
            seg_start = i + 1
    emit(seg_start, len(text), len(text), None)
    return spans


def tokenize(text: str, offset: int = 0) -> list[Token]:
    """Split one sentence into word and punctuation tokens.

    ZWNJ-joined compounds stay single tokens; every other non-space,
    non-word character becomes its own token flagged as punctuation.
    """
    tokens: list[Token] = []
    for match in _TOKEN_RE.finditer(text):
        surface = match.group()
        start, end = match.start(), match.end()
        lead = len(surface) - len(surface.lstrip(ZWNJ))
        trail = len(surface) - len(surface.rstrip(ZWNJ))
        surface = surface.strip(ZWNJ)
        if not surface:
            continue
        start += lead
        end -= trail
        is_punct = not _WORD_CHAR_RE.match(surface)
        tokens.append(Token(surface=surface, stem=surface, lemma=surface,
                            is_punct=is_punct,
                            span=(offset + start, offset + end)))
    return tokens


def _letter_count(token: str) -> int:
    return sum(1 for ch in token if ch != ZWNJ)


def stem(token: str) -> str:
    """Rule-based affix stripping; never reduces a token below 2 letters."""
    base = token
    for prefix in STEM_PREFIXES:
        if base.startswith(prefix) and _letter_count(base[len(prefix):]) >= STEM_MIN_LETTERS:
            base = base[len(prefix):]
            break
    stripped = True
    while stripped:
        stripped = False
        for suffix in STEM_SUFFIXES:
            if base.endswith(suffix):
                remainder = base[:-len(suffix)].rstrip(ZWNJ)
                if _letter_count(remainder) >= STEM_MIN_LETTERS:
                    base = remainder
                    stripped = True
                    break
    return base.strip(ZWNJ)


def lemmatize(token: str, lemma_table: Mapping[str, str] | None = None) -> str:
    if lemma_table:
        hit = lemma_table.get(token)
        if hit is not None:
            return hit
    return stem(token)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line; # starts a comment."""
    words = set()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read stop-word file {path}: {exc}") from exc
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(normalize(word))
    return frozenset(words)


def load_lemma_table(path: str | Path) -> dict[str, str]:
    """Two-column tab-separated surface<TAB>lemma."""
    table: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read lemma table {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ResourceError(f"{path}:{lineno}: expected surface<TAB>lemma")
        table[normalize(parts[0])] = normalize(parts[1])
    return table


def config_fingerprint(config: PreprocessConfig,
                       stopwords: frozenset[str] = frozenset(),
                       lemma_table: Mapping[str, str] | None = None) -> str:
    hasher = hashlib.sha256()
    hasher.update(config.canonical().encode("utf-8"))
    hasher.update("\x00".join(sorted(stopwords)).encode("utf-8"))
    if lemma_table:
        items = sorted(lemma_table.items())
        hasher.update("\x00".join(f"{s}\x01{l}" for s, l in items).encode("utf-8"))
    return hasher.hexdigest()


def process(text: str,
            config: PreprocessConfig | None = None,
            stopwords: frozenset[str] = frozenset(),
            lemma_table: Mapping[str, str] | None = None) -> ProcessedText:
    """Run the full pipeline on one text."""
    cfg = config or PreprocessConfig()
    normalized = normalize(text, cfg)
    sentences: list[Sentence] = []
    for start, end, terminal in split_sentences(normalized):
        raw_tokens = tokenize(normalized[start:end], offset=start)
        if not raw_tokens:
            continue
        toks = []
        for tok in raw_tokens:
            if tok.is_punct:
                toks.append(tok)
                continue
            stemmed = stem(tok.surface) if cfg.stem else tok.surface
            if cfg.lemmatize:
                lemma = lemmatize(tok.surface, lemma_table)
            else:
                lemma = tok.surface
            is_stop = cfg.mark_stopwords and tok.surface in stopwords
            toks.append(replace(tok, stem=stemmed, lemma=lemma,
                                is_stopword=is_stop))
        sentences.append(Sentence(tokens=tuple(toks), terminal_punct=terminal,
                                  char_span=(start, end)))
    return ProcessedText(
        original=text, normalized=normalized, sentences=tuple(sentences),
        config_fingerprint=config_fingerprint(cfg, stopwords, lemma_table))
