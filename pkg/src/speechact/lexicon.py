"""Per-class word dictionaries, synset ontology, sentiment lexicon.

The dictionary holds four word lists per speech-act class (cue words,
particular words, performative verbs, base words) plus one shared vulgar
list. Enrichment is copy-on-write: adding a word because a synset-mate is
already listed produces a new dictionary value with a bumped version, so
concurrent readers never observe a half-updated dictionary.

File formats:
    Dictionary: ``[<class>.<list_kind>]`` section headers followed by one
        word per line; ``[vulgar]`` holds the shared list; an optional
        ``#version=N`` first line carries the version.
    Synsets: ``synset_id<TAB>lemma1,lemma2,...`` per line.
    Sentiment: ``lemma<TAB>{pos|neg|neutral}`` per line.
    Plain word lists: one word per line, ``#`` comments.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus_io import SA_CLASSES
from .errors import ResourceError
from .preprocess import normalize

LIST_KINDS = ("cue_words", "particular_words", "sa_verbs", "base_words")
VULGAR_SECTION = "vulgar"

SEED = "seed"
ENRICHED = "enriched"


@dataclass(frozen=True)
class SaDictionary:
    version: int
    lists: Mapping[str, Mapping[str, frozenset[str]]]  # class -> kind -> words
    vulgar_words: frozenset[str]
    provenance: Mapping[str, tuple[str, str | None]]   # word -> (origin, synset)

    def words(self, sa_class: str, kind: str) -> frozenset[str]:
        return self.lists[sa_class][kind]

    def contains(self, sa_class: str, word: str) -> tuple[bool, str | None]:
        """Exact membership check; lists probed cue -> particular ->
        sa_verbs -> base, first hit wins. ``word`` must be a normalized lemma."""
        for kind in LIST_KINDS:
            if word in self.lists[sa_class][kind]:
                return True, kind
        return False, None

    def contains_anywhere(self, word: str) -> bool:
        if word in self.vulgar_words:
            return True
        return any(self.contains(c, word)[0] for c in SA_CLASSES)

    def canonical(self) -> str:
        parts = [f"#version={self.version}"]
        for sa_class in SA_CLASSES:
            for kind in LIST_KINDS:
                parts.append(f"[{sa_class}.{kind}]")
                parts.extend(sorted(self.lists[sa_class][kind]))
        parts.append(f"[{VULGAR_SECTION}]")
        parts.extend(sorted(self.vulgar_words))
        return "\n".join(parts) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


def build_dictionary(class_lists: Mapping[str, Mapping[str, Iterable[str]]] | None = None,
                     vulgar: Iterable[str] = (),
                     version: int = 1) -> SaDictionary:
    """Assemble a dictionary from plain iterables; everything becomes a seed."""
    lists: dict[str, dict[str, frozenset[str]]] = {}
    provenance: dict[str, tuple[str, str | None]] = {}
    for sa_class in SA_CLASSES:
        per_kind = {}
        for kind in LIST_KINDS:
            words = frozenset(normalize(w) for w in (class_lists or {}).get(sa_class, {}).get(kind, ()))
            per_kind[kind] = words
            for w in words:
                provenance[w] = (SEED, None)
        lists[sa_class] = per_kind
    vulgar_set = frozenset(normalize(w) for w in vulgar)
    for w in vulgar_set:
        provenance[w] = (SEED, None)
    return SaDictionary(version=version, lists=lists, vulgar_words=vulgar_set,
                        provenance=provenance)


def load_dictionary(path: str | Path) -> SaDictionary:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read dictionary {path}: {exc}") from exc
    version = 1
    section: tuple[str, str] | None = None
    class_lists: dict[str, dict[str, set[str]]] = {
        c: {k: set() for k in LIST_KINDS} for c in SA_CLASSES}
    vulgar: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if stripped.startswith("#version="):
                version = int(stripped[len("#version="):])
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1]
            if name == VULGAR_SECTION:
                section = (VULGAR_SECTION, VULGAR_SECTION)
                continue
            if "." not in name:
                raise ResourceError(f"{path}:{lineno}: bad section [{name}]")
            sa_class, _, kind = name.partition(".")
            if sa_class not in SA_CLASSES or kind not in LIST_KINDS:
                raise ResourceError(f"{path}:{lineno}: bad section [{name}]")
            section = (sa_class, kind)
            continue
        if section is None:
            raise ResourceError(f"{path}:{lineno}: word outside any section")
        word = normalize(stripped)
        if section[0] == VULGAR_SECTION:
            vulgar.add(word)
        else:
            class_lists[section[0]][section[1]].add(word)
    return build_dictionary(class_lists, vulgar, version=version)


def save_dictionary(dictionary: SaDictionary, path: str | Path) -> None:
    Path(path).write_text(dictionary.canonical(), encoding="utf-8")


def save_provenance(dictionary: SaDictionary, path: str | Path) -> None:
    lines = []
    for word in sorted(dictionary.provenance):
        origin, synset = dictionary.provenance[word]
        lines.append(f"{word}\t{origin}\t{synset or '-'}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class Ontology:
    synsets: Mapping[str, frozenset[str]]
    lemma_index: Mapping[str, frozenset[str]]  # lemma -> synset ids

    @classmethod
    def from_synsets(cls, synsets: Mapping[str, Iterable[str]]) -> "Ontology":
        normed = {sid: frozenset(normalize(l) for l in lemmas)
                  for sid, lemmas in synsets.items()}
        index: dict[str, set[str]] = {}
        for sid, lemmas in normed.items():
            for lemma in lemmas:
                index.setdefault(lemma, set()).add(sid)
        return cls(synsets=normed,
                   lemma_index={l: frozenset(s) for l, s in index.items()})

    def canonical(self) -> str:
        lines = [f"{sid}\t{','.join(sorted(self.synsets[sid]))}"
                 for sid in sorted(self.synsets)]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


def load_ontology(path: str | Path) -> Ontology:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read synset file {path}: {exc}") from exc
    synsets: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ResourceError(f"{path}:{lineno}: expected synset_id<TAB>lemmas")
        sid, lemmas = parts
        if sid in synsets:
            raise ResourceError(f"{path}:{lineno}: duplicate synset id {sid}")
        synsets[sid] = [l for l in lemmas.split(",") if l.strip()]
    return Ontology.from_synsets(synsets)


def synonyms(word: str, ontology: Ontology) -> frozenset[str]:
    """Union of all synsets containing ``word``, minus the word itself."""
    mates: set[str] = set()
    for sid in ontology.lemma_index.get(word, ()):
        mates.update(ontology.synsets[sid])
    mates.discard(word)
    return frozenset(mates)


def enrich(dictionary: SaDictionary, word: str,
           ontology: Ontology) -> tuple[SaDictionary, frozenset[tuple[str, str]]]:
    """Add ``word`` to every list that already holds one of its synset-mates.

    Returns the (possibly unchanged) dictionary and the set of
    (class, list_kind) pairs the word was added to; the shared vulgar list
    participates as ("vulgar", "vulgar"). Words already present anywhere are
    left alone, which makes enrichment idempotent.
    """
    if dictionary.contains_anywhere(word):
        return dictionary, frozenset()
    mates = synonyms(word, ontology)
    if not mates:
        return dictionary, frozenset()

    added: list[tuple[str, str]] = []
    matched: set[str] = set()
    for sa_class in SA_CLASSES:
        for kind in LIST_KINDS:
            hit = dictionary.lists[sa_class][kind] & mates
            if hit:
                added.append((sa_class, kind))
                matched.update(hit)
    vulgar_hit = dictionary.vulgar_words & mates
    if vulgar_hit:
        added.append((VULGAR_SECTION, VULGAR_SECTION))
        matched.update(vulgar_hit)
    if not added:
        return dictionary, frozenset()

    added_set = frozenset(added)
    via_synset = min(
        sid for sid in ontology.lemma_index[word]
        if ontology.synsets[sid] & matched)
    new_lists = {
        sa_class: {
            kind: (words | {word}) if (sa_class, kind) in added_set else words
            for kind, words in kinds.items()}
        for sa_class, kinds in dictionary.lists.items()}
    new_vulgar = dictionary.vulgar_words | {word} if vulgar_hit else dictionary.vulgar_words
    new_prov = dict(dictionary.provenance)
    new_prov[word] = (ENRICHED, via_synset)
    return SaDictionary(version=dictionary.version + 1, lists=new_lists,
                        vulgar_words=new_vulgar, provenance=new_prov), added_set


@dataclass(frozen=True)
class SentimentLexicon:
    polarities: Mapping[str, str]  # lemma -> pos | neg | neutral

    def polarity(self, lemma: str) -> str | None:
        return self.polarities.get(lemma)

    def canonical(self) -> str:
        lines = [f"{l}\t{self.polarities[l]}" for l in sorted(self.polarities)]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()


def load_sentiment(path: str | Path) -> SentimentLexicon:
    polarities: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read sentiment lexicon {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in ("pos", "neg", "neutral"):
            raise ResourceError(
                f"{path}:{lineno}: expected lemma<TAB>pos|neg|neutral")
        polarities[normalize(parts[0])] = parts[1]
    return SentimentLexicon(polarities=polarities)


def load_word_list(path: str | Path) -> frozenset[str]:
    """One word per line, # comments; words normalized on load."""
    words = set()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read word list {path}: {exc}") from exc
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(normalize(word))
    return frozenset(words)
