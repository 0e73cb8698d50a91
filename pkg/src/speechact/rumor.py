"""Rumor/non-rumor features: common context features plus speech-act profiles.

A text's speech-act profile is the per-class fraction of its sentences the
trained speech-act model predicts into each class. The significance analysis
t-tests each profile component between false-rumor and true-rumor groups;
the ablation compares context-only features against context plus the selected
profile components under byte-identical fold assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import classifiers, eval_stats, pos_tagger
from .corpus_io import SA_CLASSES, LabeledCorpus, RUMOR_LABELS
from .errors import DataError, ResourceError
from .features import (FeatureConfig, FeatureSchema, FeatureVector, Resources,
                       Vectorizer, sentiment_counts)
from .lexicon import load_word_list
from .preprocess import PreprocessConfig, ProcessedText, process

DEFAULT_SELECTED_CLASSES = ("Ques", "Thrt", "Declar", "Narrv")

CONTEXT_FEATURE_KINDS = (
    ("sentiment_pos_count", "count"),
    ("sentiment_neg_count", "count"),
    ("negation_count", "count"),
    ("uncertainty_count", "count"),
    ("certainty_count", "count"),
    ("lexical_diversity", "real"),
    ("pronoun_count", "count"),
    ("word_count", "count"),
    ("sentence_count", "count"),
    ("mean_word_length", "real"),
    ("mean_sentence_length", "real"),
    ("punct_question_count", "count"),
    ("punct_exclaim_count", "count"),
    ("punct_colon_count", "count"),
    ("adjective_count", "count"),
    ("adverb_count", "count"),
    ("verb_count", "count"),
)


@dataclass(frozen=True)
class SaProfile:
    fractions: Mapping[str, float]

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(self.fractions[c] for c in SA_CLASSES)


@dataclass(frozen=True)
class RumorLexicons:
    negation: frozenset[str]
    uncertainty: frozenset[str]
    certainty: frozenset[str]
    pronouns: frozenset[str]

    @classmethod
    def from_files(cls, negation=None, uncertainty=None, certainty=None,
                   pronouns=None) -> "RumorLexicons":
        def load(name, path):
            if path is None:
                raise ResourceError(f"missing word-list resource: {name}")
            return load_word_list(path)
        return cls(negation=load("negation", negation),
                   uncertainty=load("uncertainty", uncertainty),
                   certainty=load("certainty", certainty),
                   pronouns=load("pronouns", pronouns))


@dataclass(frozen=True)
class SignificanceRow:
    feature: str
    mean_fr: float
    mean_tr: float
    t_statistic: float
    p_value: float
    significant: bool


@dataclass(frozen=True)
class AblationResult:
    context_only: eval_stats.EvalReport
    with_sa: eval_stats.EvalReport


def sa_profile(processed: ProcessedText, sa_model: classifiers.Model,
               resources: Resources,
               config: FeatureConfig | None = None) -> SaProfile:
    """Fraction of sentences predicted into each speech-act class."""
    if not processed.sentences:
        raise DataError("cannot profile a text with zero sentences")
    vectorizer = Vectorizer(resources, config)
    counts = {c: 0 for c in SA_CLASSES}
    for i in range(len(processed.sentences)):
        vec = vectorizer.vectorize(processed.single_sentence(i))
        pred = classifiers.predict(sa_model, vec)
        counts[pred.label] += 1
    n = len(processed.sentences)
    return SaProfile(fractions={c: counts[c] / n for c in SA_CLASSES})


def context_features(processed: ProcessedText, resources: Resources,
                     rumor_lexicons: RumorLexicons) -> dict[str, float]:
    """Common context features, in the documented schema order."""
    out = {name: 0.0 for name, _ in CONTEXT_FEATURE_KINDS}
    all_lemmas: list[str] = []
    word_lengths: list[int] = []
    words_per_sentence: list[int] = []
    pos_total = neg_total = 0

    for sentence in processed.sentences:
        words = sentence.word_tokens()
        words_per_sentence.append(len(words))
        for tok in words:
            all_lemmas.append(tok.lemma)
            word_lengths.append(len(tok.surface))
            if tok.lemma in rumor_lexicons.negation:
                out["negation_count"] += 1
            if tok.lemma in rumor_lexicons.uncertainty:
                out["uncertainty_count"] += 1
            if tok.lemma in rumor_lexicons.certainty:
                out["certainty_count"] += 1
            if tok.lemma in rumor_lexicons.pronouns:
                out["pronoun_count"] += 1
        # terminal punctuation is part of the sentence span, so the token
        # stream already carries it
        chars = "".join(t.surface for t in sentence.tokens if t.is_punct)
        out["punct_question_count"] += chars.count("?")
        out["punct_exclaim_count"] += chars.count("!")
        out["punct_colon_count"] += chars.count(":")

        tags = pos_tagger.viterbi_tag(resources.hmm,
                                      [t.surface for t in sentence.tokens])
        grouped = pos_tagger.pos_feature_groups(tags, resources.group_map)
        out["adjective_count"] += grouped["counts"]["adjective"]
        out["adverb_count"] += grouped["counts"]["adverb"]
        out["verb_count"] += grouped["counts"]["verb"]

        pos, neg = sentiment_counts(sentence.tokens, resources.sentiment)
        pos_total += pos
        neg_total += neg

    out["sentiment_pos_count"] = float(pos_total)
    out["sentiment_neg_count"] = float(neg_total)
    out["word_count"] = float(len(all_lemmas))
    out["sentence_count"] = float(len(processed.sentences))
    out["lexical_diversity"] = (len(set(all_lemmas)) / len(all_lemmas)
                                if all_lemmas else 0.0)
    out["mean_word_length"] = (sum(word_lengths) / len(word_lengths)
                               if word_lengths else 0.0)
    out["mean_sentence_length"] = (sum(words_per_sentence) / len(words_per_sentence)
                                   if words_per_sentence else 0.0)
    return out


def rumor_schema(selected_classes: Sequence[str] = DEFAULT_SELECTED_CLASSES,
                 include_sa: bool = True,
                 include_depth: bool = False) -> FeatureSchema:
    names = [name for name, _ in CONTEXT_FEATURE_KINDS]
    kinds = [kind for _, kind in CONTEXT_FEATURE_KINDS]
    if include_depth:
        names.append("dependency_depth")
        kinds.append("real")
    if include_sa:
        for sa_class in SA_CLASSES:
            if sa_class in selected_classes:
                names.append(f"sa.{sa_class}")
                kinds.append("real")
    return FeatureSchema(names=tuple(names), kinds=tuple(kinds))


def rumor_features(processed: ProcessedText, resources: Resources,
                   rumor_lexicons: RumorLexicons,
                   sa_model: classifiers.Model | None = None,
                   selected_classes: Sequence[str] = DEFAULT_SELECTED_CLASSES,
                   include_sa: bool = True,
                   config: FeatureConfig | None = None,
                   extra: Mapping[str, float] | None = None,
                   text_id: str | None = None) -> FeatureVector:
    """Context features, optionally followed by the selected profile entries.

    ``dependency_depth`` is only ever read from a precomputed ``extra``
    column; no parsing happens here.
    """
    if include_sa and not selected_classes:
        raise DataError("include_sa requires a non-empty class selection")
    include_depth = bool(extra and "dependency_depth" in extra)
    schema = rumor_schema(selected_classes, include_sa, include_depth)
    values = context_features(processed, resources, rumor_lexicons)
    if include_depth:
        values["dependency_depth"] = float(extra["dependency_depth"])
    if include_sa:
        if sa_model is None:
            raise DataError("include_sa requires a trained speech-act model")
        profile = sa_profile(processed, sa_model, resources, config)
        for sa_class in SA_CLASSES:
            if sa_class in selected_classes:
                values[f"sa.{sa_class}"] = profile.fractions[sa_class]
    array = np.array([values[n] for n in schema.names], dtype=float)
    return FeatureVector(schema=schema, values=array, text_id=text_id)


def _preprocess_record(record, resources: Resources,
                       preprocess_config: PreprocessConfig | None) -> ProcessedText:
    return process(record.text, preprocess_config,
                   stopwords=resources.stopwords,
                   lemma_table=resources.lemma_table)


def feature_significance(corpus: LabeledCorpus, sa_model: classifiers.Model,
                         resources: Resources,
                         config: FeatureConfig | None = None,
                         preprocess_config: PreprocessConfig | None = None,
                         alpha: float = 0.05,
                         variant: str = "welch") -> list[SignificanceRow]:
    """T-test every profile component between FR and TR rumor groups.

    Groups where both sides are constant and equal are reported as t=0, p=1
    (indistinguishable by construction) instead of raising.
    """
    groups: dict[str, list[tuple[float, ...]]] = {"FR": [], "TR": []}
    for record in corpus.records:
        if record.veracity is None:
            continue
        processed = _preprocess_record(record, resources, preprocess_config)
        profile = sa_profile(processed, sa_model, resources, config)
        groups[record.veracity].append(profile.as_tuple())
    if len(groups["FR"]) < 2 or len(groups["TR"]) < 2:
        raise DataError("need at least two FR and two TR records")
    fr = np.array(groups["FR"])
    tr = np.array(groups["TR"])
    rows = []
    for j, sa_class in enumerate(SA_CLASSES):
        a, b = fr[:, j], tr[:, j]
        if a.var(ddof=1) == 0.0 and b.var(ddof=1) == 0.0 and a.mean() == b.mean():
            rows.append(SignificanceRow(
                feature=f"sa.{sa_class}", mean_fr=float(a.mean()),
                mean_tr=float(b.mean()), t_statistic=0.0, p_value=1.0,
                significant=False))
            continue
        result = eval_stats.t_test(a, b, variant=variant)
        rows.append(SignificanceRow(
            feature=f"sa.{sa_class}", mean_fr=result.mean_a,
            mean_tr=result.mean_b, t_statistic=result.t_statistic,
            p_value=result.p_value, significant=result.p_value <= alpha))
    return rows


def build_rumor_dataset(corpus: LabeledCorpus, resources: Resources,
                        rumor_lexicons: RumorLexicons,
                        sa_model: classifiers.Model | None,
                        selected_classes: Sequence[str],
                        include_sa: bool,
                        config: FeatureConfig | None = None,
                        preprocess_config: PreprocessConfig | None = None
                        ) -> list[tuple[FeatureVector, str]]:
    with_depth = [r.id for r in corpus.records if "dependency_depth" in r.extra]
    if with_depth and len(with_depth) != len(corpus.records):
        missing = [r.id for r in corpus.records
                   if "dependency_depth" not in r.extra]
        raise DataError(
            "dependency_depth must be supplied for every record or none; "
            f"missing on: {', '.join(missing[:5])}")
    dataset = []
    for record in corpus.records:
        processed = _preprocess_record(record, resources, preprocess_config)
        vec = rumor_features(processed, resources, rumor_lexicons,
                             sa_model=sa_model,
                             selected_classes=selected_classes,
                             include_sa=include_sa, config=config,
                             extra=record.extra, text_id=record.id)
        dataset.append((vec, record.label))
    return dataset


def ablation(corpus: LabeledCorpus, sa_model: classifiers.Model,
             resources: Resources, rumor_lexicons: RumorLexicons,
             k: int, seed: int,
             kind: str = "rf",
             hyperparams: Mapping[str, float] | None = None,
             selected_classes: Sequence[str] = DEFAULT_SELECTED_CLASSES,
             config: FeatureConfig | None = None,
             preprocess_config: PreprocessConfig | None = None) -> AblationResult:
    """Cross-validate context-only against context+profile on identical folds."""
    args = (corpus, resources, rumor_lexicons)
    ctx_data = build_rumor_dataset(*args, sa_model=None,
                                   selected_classes=selected_classes,
                                   include_sa=False, config=config,
                                   preprocess_config=preprocess_config)
    sa_data = build_rumor_dataset(*args, sa_model=sa_model,
                                  selected_classes=selected_classes,
                                  include_sa=True, config=config,
                                  preprocess_config=preprocess_config)
    context_only = eval_stats.cross_validate(kind, ctx_data, k, hyperparams,
                                             seed, label_order=RUMOR_LABELS)
    with_sa = eval_stats.cross_validate(kind, sa_data, k, hyperparams,
                                        seed, label_order=RUMOR_LABELS)
    if context_only.fold_hash != with_sa.fold_hash:
        raise DataError("ablation arms diverged on fold assignments")
    return AblationResult(context_only=context_only, with_sa=with_sa)


def format_significance_table(rows: Sequence[SignificanceRow]) -> str:
    """Seven profile columns in taxonomy order, FR/TR means and p-values."""
    lines = ["# speech-act profile significance: false rumors vs true rumors"]
    lines.append("feature\t" + "\t".join(r.feature for r in rows))
    lines.append("mean_FR\t" + "\t".join(f"{r.mean_fr:.6f}" for r in rows))
    lines.append("mean_TR\t" + "\t".join(f"{r.mean_tr:.6f}" for r in rows))
    lines.append("t\t" + "\t".join(f"{r.t_statistic:.6g}" for r in rows))
    lines.append("p_value\t" + "\t".join(f"{r.p_value:.6g}" for r in rows))
    lines.append("significant\t" + "\t".join("yes" if r.significant else "no"
                                             for r in rows))
    return "\n".join(lines) + "\n"


def format_ablation_report(result: AblationResult) -> str:
    """Two blocks (context only, context plus profile), each with per-class
    precision/recall/F-measure rows and an Avg row."""
    def block(title: str, report: eval_stats.EvalReport) -> list[str]:
        lines = [f"# {title}", "class\tprecision\trecall\tf1"]
        for label in report.labels:
            lines.append(f"{label}\t{report.precision[label]:.6f}"
                         f"\t{report.recall[label]:.6f}\t{report.f1[label]:.6f}")
        lines.append(f"Avg\t{report.macro_precision:.6f}"
                     f"\t{report.macro_recall:.6f}\t{report.macro_f1:.6f}")
        return lines

    lines = block("context features only", result.context_only)
    lines.append("")
    lines.extend(block("context features + speech-act profile", result.with_sa))
    lines.append("")
    lines.append(f"# fold_hash_context={result.context_only.fold_hash}")
    lines.append(f"# fold_hash_with_sa={result.with_sa.fold_hash}")
    return "\n".join(lines) + "\n"
