import numpy as np
import pytest

from speechact import preprocess
from speechact.preprocess import (PreprocessConfig, ZWNJ, normalize, process,
                                  split_sentences, stem, tokenize, lemmatize)

FUZZ_CHARS = list("ابپتث كي ۀ٤12۳?؟!.:\n\t") + [ZWNJ, "​", "‍"]


def _fuzz_strings(n, seed=11, maxlen=40):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        size = int(rng.integers(0, maxlen))
        yield "".join(rng.choice(FUZZ_CHARS, size=size))


def test_arabic_kaf_mapped():
    assert normalize("كتاب") == "کتاب"


def test_arabic_yeh_mapped():
    assert normalize("علي") == "علی"


def test_double_space_collapsed():
    assert normalize("a  b") == "a b"


def test_newline_survives_collapse():
    assert normalize("a \n  b") == "a\nb"


def test_arabic_digits_unified():
    assert normalize("٤٥") == "۴۵"


def test_zwnj_preserved_other_zero_width_dropped():
    assert normalize("می" + ZWNJ + "روم" + "​‍") == "می" + ZWNJ + "روم"


def test_question_mark_unified():
    assert normalize("چرا؟") == "چرا?"


def test_normalize_idempotent_fuzz():
    for s in _fuzz_strings(1000):
        once = normalize(s)
        assert normalize(once) == once


def test_split_two_sentences_with_terminals():
    spans = split_sentences("A. B؟")
    assert len(spans) == 2
    assert [t for _, _, t in spans] == [".", "?"]


def test_split_no_terminator_single_sentence():
    spans = split_sentences("یک جمله بدون پایان")
    assert len(spans) == 1
    assert spans[0][2] is None


def test_split_colon_terminal_at_line_end():
    spans = split_sentences("او گفت:\nبرو")
    assert [t for _, _, t in spans] == [":", None]


def test_split_empty_segments_dropped():
    spans = split_sentences("برو!!")
    assert len(spans) == 1
    assert spans[0][2] == "!"


def test_split_count_matches_generated_concatenation():
    rng = np.random.default_rng(5)
    bodies = ["برو", "کتاب خوب", "من آمدم", "چرا نه"]
    terminals = [".", "!", "?"]
    for _ in range(50):
        n = int(rng.integers(1, 8))
        parts = [bodies[int(rng.integers(0, len(bodies)))]
                 + terminals[int(rng.integers(0, len(terminals)))]
                 for _ in range(n)]
        text = " ".join(parts)
        assert len(split_sentences(text)) == n


def test_tokenize_two_words():
    tokens = tokenize("لطفا برو")
    assert [t.surface for t in tokens] == ["لطفا", "برو"]


def test_tokenize_zwnj_compound_single_token():
    tokens = tokenize("می" + ZWNJ + "روم")
    assert len(tokens) == 1
    assert tokens[0].surface == "می" + ZWNJ + "روم"


def test_tokenize_punct_separate_and_flagged():
    tokens = tokenize("برو!")
    assert [t.surface for t in tokens] == ["برو", "!"]
    assert [t.is_punct for t in tokens] == [False, True]


def _reference_token_count(text):
    """Character-class walk, independent of the regex tokenizer."""
    count = 0
    in_word = False
    for ch in text:
        if ch.isspace():
            in_word = False
        elif ch.isalnum() or ch == "_" or ch == ZWNJ:
            if ch == ZWNJ and not in_word:
                continue  # stray joiner outside a word is dropped
            if not in_word:
                count += 1
                in_word = True
        else:
            count += 1  # punctuation chars are single tokens
            in_word = False
    return count


def test_token_count_matches_reference_splitter_fuzz():
    for s in _fuzz_strings(400, seed=23):
        s = normalize(s)
        expected = _reference_token_count(s)
        assert len(tokenize(s)) == expected, repr(s)


def test_stopwords_flagged_not_removed():
    text = "کتاب و قلم"
    processed = process(text, stopwords=frozenset(["و"]))
    tokens = processed.sentences[0].tokens
    assert [t.is_stopword for t in tokens] == [False, True, False]
    assert len(tokens) == 3


def test_empty_stoplist_flags_nothing():
    processed = process("کتاب و قلم", stopwords=frozenset())
    assert not any(t.is_stopword for t in processed.sentences[0].tokens)


def test_stopword_flag_count_matches_set_oracle_fuzz():
    rng = np.random.default_rng(17)
    vocab = ["با", "کتاب", "رفتن", "و", "قلم", "من"]
    stoplist = frozenset(["و", "با", "من"])
    for _ in range(200):
        words = [vocab[int(rng.integers(0, len(vocab)))]
                 for _ in range(int(rng.integers(1, 10)))]
        processed = process(" ".join(words), stopwords=stoplist)
        flagged = sum(t.is_stopword for s in processed.sentences
                      for t in s.tokens)
        expected = sum(1 for w in words if w in stoplist)
        assert flagged == expected


def test_stem_plural_ha_with_zwnj():
    assert stem("کتاب" + ZWNJ + "ها") == "کتاب"


def test_stem_short_token_unchanged():
    assert stem("ها") == "ها"
    assert stem("آب") == "آب"


def test_stem_verbal_prefix_and_person_clitic():
    # prefix strip, then the trailing person clitic goes too
    assert stem("می" + ZWNJ + "روم") == "رو"


def test_stem_comparative():
    assert stem("بزرگتر") == "بزرگ"


def test_lemma_table_hit_beats_stemmer():
    assert lemmatize("رفتم", {"رفتم": "رفتن"}) == "رفتن"
    assert lemmatize("رفتم", {}) == stem("رفتم")


def test_spans_reconstruct_normalized_text_fuzz():
    rng = np.random.default_rng(31)
    vocab = ["کتاب", "می" + ZWNJ + "روم", "چرا", "برو", "خوب"]
    terminals = [". ", "? ", "! ", "\n"]
    for _ in range(100):
        parts = []
        for _ in range(int(rng.integers(1, 6))):
            words = [vocab[int(rng.integers(0, len(vocab)))]
                     for _ in range(int(rng.integers(1, 5)))]
            parts.append(" ".join(words)
                         + terminals[int(rng.integers(0, len(terminals)))])
        processed = process("".join(parts))
        norm = processed.normalized
        covered_end = 0
        for sentence in processed.sentences:
            start, end = sentence.char_span
            assert norm[covered_end:start].strip() == ""
            for tok in sentence.tokens:
                ts, te = tok.span
                assert norm[ts:te] == tok.surface
            covered_end = end
        assert norm[covered_end:].strip() == ""


def test_process_is_pure():
    text = "كتاب  خوب است. چرا؟"
    a = process(text, stopwords=frozenset(["است"]))
    b = process(text, stopwords=frozenset(["است"]))
    assert a == b
    assert a.config_fingerprint == b.config_fingerprint


def test_config_fingerprint_tracks_resources():
    a = preprocess.config_fingerprint(PreprocessConfig(), frozenset())
    b = preprocess.config_fingerprint(PreprocessConfig(), frozenset(["و"]))
    c = preprocess.config_fingerprint(PreprocessConfig(stem=False), frozenset())
    assert len({a, b, c}) == 3
