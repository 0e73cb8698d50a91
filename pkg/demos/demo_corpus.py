"""Shared synthetic-corpus builder for the demo scripts.

Builds small Persian corpora with a planted, fully controlled signal: each
speech-act class gets a handful of cue words (stored in lemma form), every
text starts with one of them, and an ontology links some cue words to
synonyms that never appear in the dictionary itself.
"""

import numpy as np

from speechact.corpus_io import LabeledCorpus, Record, SA_CLASSES
from speechact.features import Resources
from speechact.lexicon import Ontology, build_dictionary
from speechact.pos_tagger import train_hmm
from speechact.preprocess import stem

CUES = {
    "Ques": ["چرا", "آیا", "چطور", "کجا"],
    "Req": ["لطفا", "ممکنه", stem("خواهشمندم"), "بده"],
    "Dir": ["باید", "برو", "بکن", "حتما"],
    "Thrt": ["تهدید", "مواظب", "بلا", "وگرنه"],
    "Quot": [stem("گفت"), stem("نوشت"), stem("اعلام"), stem("گزارش")],
    "Declar": [stem("است"), "شد", "خواهد", "امروز"],
    "Narrv": ["سپس", "روزی", "بود", stem("ناگهان")],
}

# synonyms absent from the dictionary; the ontology maps them to cue words
SYNONYM_OF = {
    "چگونه": ("Ques", "چطور"),
    "خواهش": ("Req", "لطفا"),
    "الزاما": ("Dir", "باید"),
    "خطر": ("Thrt", "بلا"),
}

FILLERS = ["کتاب", "خانه", "اخبار", "شهر", "دیروز", "فردا", "خبر", "میز",
           "راه", "آب", "نان", "در"]

TAGGED_SENTENCES = [
    [("کتاب", "N"), ("خوب", "AJ"), ("بود", "V"), (".", "P")],
    [("خبر", "N"), ("مهم", "AJ"), ("شد", "V"), (".", "P")],
    [("مردم", "N"), ("دیروز", "AV"), ("رفتند", "V"), (".", "P")],
    [("شهر", "N"), ("بزرگ", "AJ"), ("است", "V"), (".", "P")],
    [("او", "N"), ("فردا", "AV"), ("خواهد", "V"), ("آمد", "V"), (".", "P")],
    [("آب", "N"), ("سرد", "AJ"), ("بود", "V"), ("!", "P")],
    [("به", "PP"), ("خانه", "N"), ("برو", "V"), ("?", "P")],
    [("اگر", "IFW"), ("بیایی", "V"), ("خوشحالم", "AJ"), (".", "P")],
    [("آخ", "INT"), ("چه", "N"), ("دردی", "N"), ("!", "P")],
]

GROUP_MAP = {"N": "noun", "AJ": "adjective", "AV": "adverb", "V": "verb",
             "P": "other", "PP": "other", "IFW": "if", "INT": "interjection"}


def build_resources(with_ontology: bool = True) -> Resources:
    dictionary = build_dictionary(
        {c: {"cue_words": words, "base_words": words, "particular_words": words}
         for c, words in CUES.items()})
    ontology = None
    if with_ontology:
        synsets = {f"S{i}": [syn, cue]
                   for i, (syn, (_, cue)) in enumerate(SYNONYM_OF.items())}
        ontology = Ontology.from_synsets(synsets)
    return Resources(dictionary=dictionary, hmm=train_hmm(TAGGED_SENTENCES),
                     group_map=dict(GROUP_MAP), ontology=ontology)


def sentence(sa_class: str, rng, use_synonym: bool = False) -> str:
    cue = CUES[sa_class][int(rng.integers(0, len(CUES[sa_class])))]
    if use_synonym:
        options = [syn for syn, (c, _) in SYNONYM_OF.items() if c == sa_class]
        if options:
            cue = options[int(rng.integers(0, len(options)))]
    words = [cue] + [FILLERS[int(rng.integers(0, len(FILLERS)))]
                     for _ in range(int(rng.integers(2, 5)))]
    terminal = "؟" if sa_class == "Ques" else "."
    return " ".join(words) + terminal


def speech_act_corpus(n_per_class: int, seed: int = 0,
                      synonym_fraction: float = 0.0) -> LabeledCorpus:
    rng = np.random.default_rng(seed)
    records = []
    for sa_class in SA_CLASSES:
        for i in range(n_per_class):
            use_syn = i < synonym_fraction * n_per_class
            records.append(Record(id=f"{sa_class}-{i}",
                                  text=sentence(sa_class, rng, use_syn),
                                  label=sa_class))
    order = rng.permutation(len(records))
    return LabeledCorpus(tuple(records[i] for i in order), SA_CLASSES)


def rumor_corpus(n_per_group: int, seed: int = 0) -> LabeledCorpus:
    """Rumors are threat/question-heavy, non-rumors declaration/narration.

    Within the rumors, false ones (FR) lean on threats and true ones (TR) on
    questions, so the FR/TR significance analysis has a real planted effect.
    """
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_per_group):
        fr = i % 2 == 0
        thrt = (2 + i % 2) if fr else (1 + i % 2)
        rumor_classes = ["Thrt"] * thrt + ["Ques"] * (4 - thrt)
        other_classes = ["Declar", "Narrv", "Declar", "Narrv"]
        records.append(Record(
            id=f"r{i}", label="Rumor", veracity="FR" if fr else "TR",
            text=" ".join(sentence(c, rng) for c in rumor_classes)))
        records.append(Record(
            id=f"n{i}", label="NonRumor",
            text=" ".join(sentence(c, rng) for c in other_classes)))
    order = rng.permutation(len(records))
    return LabeledCorpus(tuple(records[i] for i in order),
                         ("Rumor", "NonRumor"))
