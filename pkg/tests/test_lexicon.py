import numpy as np
import pytest

from speechact import lexicon
from speechact.corpus_io import SA_CLASSES
from speechact.errors import ResourceError
from speechact.lexicon import (Ontology, build_dictionary, enrich,
                               load_dictionary, load_ontology, load_sentiment,
                               save_dictionary, synonyms)

import synth


def onto(*groups):
    return Ontology.from_synsets({f"S{i}": g for i, g in enumerate(groups)})


def test_synonyms_definition():
    o = onto({"a", "b", "c"})
    assert synonyms("a", o) == {"b", "c"}


def test_synonyms_unknown_word_empty():
    o = onto({"a", "b"})
    assert synonyms("z", o) == frozenset()


def test_synonyms_union_over_synsets():
    o = onto({"a", "b"}, {"a", "d"})
    assert synonyms("a", o) == {"b", "d"}


def test_enrich_adds_to_matching_list_and_bumps_version():
    d = build_dictionary({"Req": {"cue_words": ["b"]}})
    o = onto({"a", "b"})
    new, added = enrich(d, "a", o)
    assert ("Req", "cue_words") in added
    assert "a" in new.words("Req", "cue_words")
    assert new.version == d.version + 1
    assert "a" not in d.words("Req", "cue_words")  # copy-on-write


def test_enrich_without_synonyms_is_noop():
    d = build_dictionary({"Req": {"cue_words": ["b"]}})
    o = onto({"x", "y"})
    new, added = enrich(d, "a", o)
    assert new is d
    assert added == frozenset()


def test_enrich_adds_to_every_matching_class_and_kind():
    d = build_dictionary({"Req": {"cue_words": ["b"], "base_words": ["b"]},
                          "Thrt": {"sa_verbs": ["c"]}})
    o = onto({"a", "b", "c"})
    new, added = enrich(d, "a", o)
    assert added == {("Req", "cue_words"), ("Req", "base_words"),
                     ("Thrt", "sa_verbs")}


def test_enrich_extends_vulgar_list():
    d = build_dictionary(vulgar=["v"])
    o = onto({"v", "w"})
    new, added = enrich(d, "w", o)
    assert ("vulgar", "vulgar") in added
    assert "w" in new.vulgar_words


def test_enrich_records_provenance_with_synset():
    d = build_dictionary({"Req": {"cue_words": ["b"]}})
    o = Ontology.from_synsets({"S7": ["a", "b"]})
    new, _ = enrich(d, "a", o)
    assert new.provenance["a"] == (lexicon.ENRICHED, "S7")


def test_contains_probe_order_and_lemma_lookup():
    d = build_dictionary({"Req": {"cue_words": ["w"], "base_words": ["w", "x"]}})
    assert d.contains("Req", "w") == (True, "cue_words")
    assert d.contains("Req", "x") == (True, "base_words")
    assert d.contains("Req", "zzz") == (False, None)


def test_enrichment_properties_randomized():
    rng = np.random.default_rng(42)
    for _ in range(200):
        d, o, fresh = synth.random_lexicon_case(rng)
        word = fresh[int(rng.integers(0, len(fresh)))]
        new, added = enrich(d, word, o)
        # monotonicity: only supersets
        for c in SA_CLASSES:
            for kind in lexicon.LIST_KINDS:
                assert d.words(c, kind) <= new.words(c, kind)
        assert d.vulgar_words <= new.vulgar_words
        # idempotence via the internal presence check
        again, added2 = enrich(new, word, o)
        assert again is new
        assert added2 == frozenset()
        # provenance completeness
        all_words = set(new.vulgar_words)
        for c in SA_CLASSES:
            for kind in lexicon.LIST_KINDS:
                all_words |= new.words(c, kind)
        for w in all_words:
            origin, synset = new.provenance[w]
            assert origin in (lexicon.SEED, lexicon.ENRICHED)
            if origin == lexicon.ENRICHED:
                assert synset in o.synsets
        # version moves only when something was added
        assert (new.version == d.version + 1) == bool(added)


def test_ontology_inverse_index_exact():
    rng = np.random.default_rng(9)
    for _ in range(100):
        _, o, _ = synth.random_lexicon_case(rng)
        for sid, lemmas in o.synsets.items():
            for lemma in lemmas:
                assert sid in o.lemma_index[lemma]
        for lemma, sids in o.lemma_index.items():
            for sid in sids:
                assert lemma in o.synsets[sid]


def test_dictionary_file_round_trip(tmp_path):
    d = synth.make_dictionary()
    path = tmp_path / "dict.txt"
    save_dictionary(d, path)
    loaded = load_dictionary(path)
    assert loaded.version == d.version
    for c in SA_CLASSES:
        for kind in lexicon.LIST_KINDS:
            assert loaded.words(c, kind) == d.words(c, kind)
    assert loaded.vulgar_words == d.vulgar_words
    assert loaded.fingerprint() == d.fingerprint()


def test_dictionary_version_header_round_trip(tmp_path):
    d = build_dictionary({"Req": {"cue_words": ["b"]}})
    o = onto({"a", "b"})
    enriched, _ = enrich(d, "a", o)
    path = tmp_path / "dict.txt"
    save_dictionary(enriched, path)
    assert load_dictionary(path).version == 2


def test_dictionary_bad_section_rejected(tmp_path):
    path = tmp_path / "dict.txt"
    path.write_text("[Nope.cue_words]\nword\n", encoding="utf-8")
    with pytest.raises(ResourceError, match="bad section"):
        load_dictionary(path)


def test_dictionary_word_outside_section_rejected(tmp_path):
    path = tmp_path / "dict.txt"
    path.write_text("word\n", encoding="utf-8")
    with pytest.raises(ResourceError, match="outside any section"):
        load_dictionary(path)


def test_ontology_file_round_trip(tmp_path):
    o = synth.make_ontology()
    path = tmp_path / "syn.tsv"
    path.write_text(o.canonical(), encoding="utf-8")
    loaded = load_ontology(path)
    assert loaded.synsets == o.synsets
    assert loaded.fingerprint() == o.fingerprint()


def test_sentiment_lexicon_load_and_errors(tmp_path):
    path = tmp_path / "sent.tsv"
    path.write_text("خوب\tpos\nبد\tneg\nمیز\tneutral\n", encoding="utf-8")
    lex = load_sentiment(path)
    assert lex.polarity("خوب") == "pos"
    assert lex.polarity("ناشناخته") is None
    bad = tmp_path / "bad.tsv"
    bad.write_text("خوب\tgreat\n", encoding="utf-8")
    with pytest.raises(ResourceError):
        load_sentiment(bad)


def test_words_normalized_on_load(tmp_path):
    path = tmp_path / "dict.txt"
    # Arabic kaf in the file; lookups use the Persian form
    path.write_text("[Req.cue_words]\nكتاب\n", encoding="utf-8")
    d = load_dictionary(path)
    assert d.contains("Req", "کتاب") == (True, "cue_words")
