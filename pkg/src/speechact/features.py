"""Feature extraction: one named numeric vector per text.

The schema is fixed and shared between training and prediction; enrichment
changes dictionary contents (and therefore feature values), never the schema,
and archived models re-align incoming vectors by feature name.

Per speech-act class the vector carries dictionary hit counts (cue words,
particular words, performative verbs), unigram/bigram matches against the
particular-word list, boundary-word binaries and the base-feature binary.
Text-level globals: the sentiment score, POS group counts with interjection
and IF flags, the three punctuation binaries and the vulgar binary. Counts
aggregate over sentences by sum, binaries by OR.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import lexicon as lexicon_mod
from . import pos_tagger
from .corpus_io import SA_CLASSES
from .errors import ResourceError, SchemaMismatchError
from .lexicon import Ontology, SaDictionary, SentimentLexicon
from .pos_tagger import POS_GROUPS, HmmModel
from .preprocess import ProcessedText, Sentence, Token

BINARY = "binary"
COUNT = "count"
REAL = "real"

_CLASS_FAMILIES = (
    ("cue_count", COUNT),
    ("particular_count", COUNT),
    ("saverb_count", COUNT),
    ("unigram_count", COUNT),
    ("bigram_count", COUNT),
    ("first_word", BINARY),
    ("last_word", BINARY),
    ("base", BINARY),
)

_FAMILY_TO_LIST = {
    "cue_count": "cue_words",
    "particular_count": "particular_words",
    "saverb_count": "sa_verbs",
}


@dataclass(frozen=True)
class FeatureSchema:
    names: tuple[str, ...]
    kinds: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) != len(self.kinds):
            raise SchemaMismatchError("schema names and kinds differ in length")

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class FeatureVector:
    schema: FeatureSchema
    values: np.ndarray
    text_id: str | None = None

    def get(self, name: str) -> float:
        return float(self.values[self.schema.index(name)])


@dataclass(frozen=True)
class SentimentScore:
    score: float
    pos_count: int
    neg_count: int


@dataclass(frozen=True)
class FeatureConfig:
    """``enrich`` switches ontology use on or off entirely: synonym fallback
    during lookups plus copy-on-write dictionary growth for unknown words."""
    enrich: bool = True


@dataclass
class Resources:
    dictionary: SaDictionary
    hmm: HmmModel
    group_map: Mapping[str, str]
    ontology: Ontology | None = None
    sentiment: SentimentLexicon | None = None
    stopwords: frozenset[str] = frozenset()
    lemma_table: Mapping[str, str] = field(default_factory=dict)

    def fingerprints(self) -> dict[str, str]:
        import hashlib
        prints = {
            "dictionary": self.dictionary.fingerprint(),
            "tagger": pos_tagger.hmm_fingerprint(self.hmm),
            "tag_groups": pos_tagger.group_map_fingerprint(self.group_map),
        }
        if self.ontology is not None:
            prints["ontology"] = self.ontology.fingerprint()
        if self.sentiment is not None:
            prints["sentiment"] = self.sentiment.fingerprint()
        stop_canon = "\n".join(sorted(self.stopwords))
        prints["stopwords"] = hashlib.sha256(stop_canon.encode("utf-8")).hexdigest()
        return prints


def build_schema() -> FeatureSchema:
    names: list[str] = []
    kinds: list[str] = []
    for sa_class in SA_CLASSES:
        for family, kind in _CLASS_FAMILIES:
            names.append(f"{family}.{sa_class}")
            kinds.append(kind)
    names.append("sentiment_score")
    kinds.append(REAL)
    for group in POS_GROUPS:
        names.append(f"pos_count.{group}")
        kinds.append(COUNT)
    names.extend(["interjection_flag", "if_tag_flag"])
    kinds.extend([BINARY, BINARY])
    names.extend(["punct.question", "punct.exclaim", "punct.colon"])
    kinds.extend([BINARY, BINARY, BINARY])
    names.append("vulgar_flag")
    kinds.append(BINARY)
    return FeatureSchema(names=tuple(names), kinds=tuple(kinds))


def save_schema(schema: FeatureSchema, path: str | Path) -> None:
    lines = [f"{n}\t{k}" for n, k in zip(schema.names, schema.kinds)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_schema(path: str | Path) -> FeatureSchema:
    names, kinds = [], []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read schema file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in (BINARY, COUNT, REAL):
            raise ResourceError(f"{path}:{lineno}: expected name<TAB>kind")
        names.append(parts[0])
        kinds.append(parts[1])
    return FeatureSchema(names=tuple(names), kinds=tuple(kinds))


def align_to_schema(vector: FeatureVector, schema: FeatureSchema) -> FeatureVector:
    """Reorder a vector's values to another schema of the same feature names."""
    if vector.schema.names == schema.names:
        return vector
    have = set(vector.schema.names)
    want = set(schema.names)
    if have != want:
        missing = sorted(want - have)
        extra = sorted(have - want)
        raise SchemaMismatchError(
            f"feature names do not match schema; missing={missing} extra={extra}")
    index = {n: i for i, n in enumerate(vector.schema.names)}
    values = np.array([vector.values[index[n]] for n in schema.names], dtype=float)
    return FeatureVector(schema=schema, values=values, text_id=vector.text_id)


def _hit(lemma: str, words: frozenset[str], ontology: Ontology | None) -> bool:
    if lemma in words:
        return True
    if ontology is not None:
        return bool(lexicon_mod.synonyms(lemma, ontology) & words)
    return False


def extract_ngrams(tokens: Sequence[Token], n: int) -> Counter:
    """Unigrams over non-stopword word tokens; bigrams over adjacent word
    tokens (stop words keep their place in bigrams). Lemma-based."""
    if n not in (1, 2):
        raise ValueError("only unigrams and bigrams are supported")
    words = [t for t in tokens if not t.is_punct]
    if n == 1:
        return Counter(t.lemma for t in words if not t.is_stopword)
    return Counter(f"{a.lemma} {b.lemma}" for a, b in zip(words, words[1:]))


def sentiment_counts(tokens: Sequence[Token],
                     sentiment: SentimentLexicon | None) -> tuple[int, int]:
    pos = neg = 0
    if sentiment is not None:
        for tok in tokens:
            if tok.is_punct:
                continue
            polarity = sentiment.polarity(tok.lemma)
            if polarity == "pos":
                pos += 1
            elif polarity == "neg":
                neg += 1
    return pos, neg


def sentiment_score(tokens: Sequence[Token],
                    sentiment: SentimentLexicon | None) -> SentimentScore:
    """(pos - neg) / (pos + neg), or 0 when the text has no polar words."""
    pos, neg = sentiment_counts(tokens, sentiment)
    score = (pos - neg) / (pos + neg) if pos + neg > 0 else 0.0
    return SentimentScore(score=score, pos_count=pos, neg_count=neg)


def punctuation_flags(sentence: Sentence) -> dict[str, int]:
    chars = set()
    for tok in sentence.tokens:
        if tok.is_punct:
            chars.update(tok.surface)
    if sentence.terminal_punct:
        chars.add(sentence.terminal_punct)
    return {
        "question": int("?" in chars or "؟" in chars),
        "exclaim": int("!" in chars),
        "colon": int(":" in chars),
    }


def _boundary_lemmas(sentence: Sentence) -> tuple[str | None, str | None]:
    words = sentence.word_tokens()
    if not words:
        return None, None
    return words[0].lemma, words[-1].lemma


def token_position_features(sentence: Sentence, dictionary: SaDictionary,
                            ontology: Ontology | None = None) -> dict[str, tuple[int, int]]:
    """Per class: does the first / last word hit the class's cue, particular
    or base list (synonym fallback included when an ontology is given)."""
    first, last = _boundary_lemmas(sentence)
    out = {}
    for sa_class in SA_CLASSES:
        pool = (dictionary.words(sa_class, "cue_words")
                | dictionary.words(sa_class, "particular_words")
                | dictionary.words(sa_class, "base_words"))
        first_hit = int(first is not None and _hit(first, pool, ontology))
        last_hit = int(last is not None and _hit(last, pool, ontology))
        out[sa_class] = (first_hit, last_hit)
    return out


def base_features(sentence: Sentence, dictionary: SaDictionary,
                  ontology: Ontology | None = None) -> dict[str, int]:
    """Class-trigger binaries combining base words, position and punctuation.

    A question mark only triggers the question class when no request word
    sits at the sentence boundary; a request word at the start or end always
    triggers the request class.
    """
    first, last = _boundary_lemmas(sentence)
    q_mark = bool(punctuation_flags(sentence)["question"])

    def base_hit(sa_class: str, lemma: str | None) -> bool:
        return lemma is not None and _hit(
            lemma, dictionary.words(sa_class, "base_words"), ontology)

    req_boundary = base_hit("Req", first) or base_hit("Req", last)
    flags = {}
    for sa_class in SA_CLASSES:
        if sa_class == "Ques":
            flags[sa_class] = int(base_hit("Ques", first)
                                  or (q_mark and not req_boundary))
        elif sa_class == "Req":
            flags[sa_class] = int(req_boundary)
        else:
            flags[sa_class] = int(base_hit(sa_class, first)
                                  or base_hit(sa_class, last))
    return flags


def vulgar_flag(tokens: Sequence[Token], dictionary: SaDictionary) -> int:
    return int(any(not t.is_punct and t.lemma in dictionary.vulgar_words
                   for t in tokens))


def enrich_from_text(processed: ProcessedText, dictionary: SaDictionary,
                     ontology: Ontology) -> SaDictionary:
    """Offline enrichment pass: every lemma absent from all lists is offered
    to the ontology; synset-mate matches are committed copy-on-write."""
    seen: set[str] = set()
    for sentence in processed.sentences:
        for tok in sentence.word_tokens():
            lemma = tok.lemma
            if lemma in seen:
                continue
            seen.add(lemma)
            if not dictionary.contains_anywhere(lemma):
                dictionary, _ = lexicon_mod.enrich(dictionary, lemma, ontology)
    return dictionary


def vectorize(processed: ProcessedText, resources: Resources,
              config: FeatureConfig | None = None,
              text_id: str | None = None,
              schema: FeatureSchema | None = None) -> tuple[FeatureVector, SaDictionary]:
    """Turn one processed text into a feature vector.

    Returns the vector together with the dictionary version that produced it:
    with enrichment on, unknown words whose synset-mates are listed get
    committed first and the enriched dictionary is handed back to the caller.
    """
    cfg = config or FeatureConfig()
    schema = schema or build_schema()
    dictionary = resources.dictionary
    ontology = resources.ontology if cfg.enrich else None
    if cfg.enrich:
        if resources.ontology is None:
            raise ResourceError("enrichment requires an ontology resource")
        dictionary = enrich_from_text(processed, dictionary, resources.ontology)

    values = {name: 0.0 for name in schema.names}
    pos_total = neg_total = 0

    mates_cache: dict[str, frozenset[str]] = {}

    def lemma_hit(lemma: str, words: frozenset[str]) -> bool:
        if lemma in words:
            return True
        if ontology is None:
            return False
        mates = mates_cache.get(lemma)
        if mates is None:
            mates = lexicon_mod.synonyms(lemma, ontology)
            mates_cache[lemma] = mates
        return bool(mates & words)

    for sentence in processed.sentences:
        words = sentence.word_tokens()
        for tok in words:
            for sa_class in SA_CLASSES:
                for family, list_kind in _FAMILY_TO_LIST.items():
                    if lemma_hit(tok.lemma, dictionary.words(sa_class, list_kind)):
                        values[f"{family}.{sa_class}"] += 1

        unigrams = extract_ngrams(sentence.tokens, 1)
        bigrams = extract_ngrams(sentence.tokens, 2)
        for sa_class in SA_CLASSES:
            particular = dictionary.words(sa_class, "particular_words")
            values[f"unigram_count.{sa_class}"] += sum(
                cnt for gram, cnt in unigrams.items() if gram in particular)
            values[f"bigram_count.{sa_class}"] += sum(
                cnt for gram, cnt in bigrams.items() if gram in particular)

        for sa_class, (first_hit, last_hit) in token_position_features(
                sentence, dictionary, ontology).items():
            name_f, name_l = f"first_word.{sa_class}", f"last_word.{sa_class}"
            values[name_f] = max(values[name_f], float(first_hit))
            values[name_l] = max(values[name_l], float(last_hit))

        for sa_class, flag in base_features(sentence, dictionary, ontology).items():
            name = f"base.{sa_class}"
            values[name] = max(values[name], float(flag))

        for key, flag in punctuation_flags(sentence).items():
            name = f"punct.{key}"
            values[name] = max(values[name], float(flag))

        tags = pos_tagger.viterbi_tag(resources.hmm, [t.surface for t in sentence.tokens])
        grouped = pos_tagger.pos_feature_groups(tags, resources.group_map)
        for group, count in grouped["counts"].items():
            values[f"pos_count.{group}"] += count
        if grouped["interjection"]:
            values["interjection_flag"] = 1.0
        if grouped["if_tag"]:
            values["if_tag_flag"] = 1.0

        pos, neg = sentiment_counts(sentence.tokens, resources.sentiment)
        pos_total += pos
        neg_total += neg

        if vulgar_flag(sentence.tokens, dictionary):
            values["vulgar_flag"] = 1.0

    total = pos_total + neg_total
    values["sentiment_score"] = (pos_total - neg_total) / total if total else 0.0

    array = np.array([values[name] for name in schema.names], dtype=float)
    return FeatureVector(schema=schema, values=array, text_id=text_id), dictionary


class Vectorizer:
    """Single-writer wrapper that accumulates dictionary enrichment across a
    corpus pass; readers of earlier versions stay valid (copy-on-write)."""

    def __init__(self, resources: Resources, config: FeatureConfig | None = None,
                 schema: FeatureSchema | None = None):
        self.resources = resources
        self.config = config or FeatureConfig()
        self.schema = schema or build_schema()

    @property
    def dictionary(self) -> SaDictionary:
        return self.resources.dictionary

    def vectorize(self, processed: ProcessedText,
                  text_id: str | None = None) -> FeatureVector:
        vector, new_dict = vectorize(processed, self.resources, self.config,
                                     text_id=text_id, schema=self.schema)
        if new_dict is not self.resources.dictionary:
            self.resources = Resources(
                dictionary=new_dict, hmm=self.resources.hmm,
                group_map=self.resources.group_map,
                ontology=self.resources.ontology,
                sentiment=self.resources.sentiment,
                stopwords=self.resources.stopwords,
                lemma_table=self.resources.lemma_table)
        return vector
