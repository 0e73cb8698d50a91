"""Command-line entry point: one binary, one subcommand per pipeline stage.

Every subcommand is batch-mode and deterministic given its config and seed.
Output files are written to a temporary sibling and atomically renamed, so a
failing run never leaves a partial file behind.

Exit codes: 0 success, 2 usage error, 3 data error, 4 resource error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import classifiers, corpus_io, eval_stats, features, lexicon
from . import pos_tagger, preprocess as prep, rumor as rumor_mod
from .config import Config, resolve
from .corpus_io import RUMOR_LABELS, SA_CLASSES
from .errors import DataError, ResourceError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_RESOURCE = 4

_RESOURCE_FLAGS = {
    "dict": "resources.dictionary",
    "ontology": "resources.ontology",
    "sentiment": "resources.sentiment",
    "stopwords": "resources.stopwords",
    "lemmas": "resources.lemmas",
    "tagger": "resources.tagger",
    "tag_groups": "resources.tag_groups",
    "negation": "rumor.negation_words",
    "uncertainty": "rumor.uncertainty_words",
    "certainty": "rumor.certainty_words",
    "pronouns": "rumor.pronoun_words",
}


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _add_common(parser: argparse.ArgumentParser, resource_flags=()) -> None:
    parser.add_argument("--config", help="key=value config file")
    for flag in resource_flags:
        parser.add_argument(f"--{flag.replace('_', '-')}",
                            dest=f"res_{flag}", help=f"{flag} resource file")


def _resolved_config(args) -> Config:
    overrides = {}
    for flag, key in _RESOURCE_FLAGS.items():
        value = getattr(args, f"res_{flag}", None)
        if value is not None:
            overrides[key] = value
    cfg = resolve(getattr(args, "config", None), overrides)
    if getattr(args, "no_enrich", False):
        cfg.set("features.enrich", "false")
    return cfg


def _require(cfg: Config, key: str) -> str:
    value = cfg.get(key)
    if not value:
        raise ResourceError(f"missing required resource (config key {key})")
    return value


def _load_resources(cfg: Config) -> features.Resources:
    enrich = cfg.get_bool("features.enrich")
    dictionary = lexicon.load_dictionary(_require(cfg, "resources.dictionary"))
    hmm = pos_tagger.load_hmm(_require(cfg, "resources.tagger"))
    group_map = pos_tagger.load_group_map(_require(cfg, "resources.tag_groups"))
    ontology = None
    if cfg.get("resources.ontology"):
        ontology = lexicon.load_ontology(cfg.get("resources.ontology"))
    elif enrich:
        raise ResourceError("enrichment is on but no ontology resource was given")
    sentiment = (lexicon.load_sentiment(cfg.get("resources.sentiment"))
                 if cfg.get("resources.sentiment") else None)
    stopwords = (prep.load_stopwords(cfg.get("resources.stopwords"))
                 if cfg.get("resources.stopwords") else frozenset())
    lemma_table = (prep.load_lemma_table(cfg.get("resources.lemmas"))
                   if cfg.get("resources.lemmas") else {})
    return features.Resources(dictionary=dictionary, hmm=hmm,
                              group_map=group_map, ontology=ontology,
                              sentiment=sentiment, stopwords=stopwords,
                              lemma_table=lemma_table)


def _load_rumor_lexicons(cfg: Config) -> rumor_mod.RumorLexicons:
    return rumor_mod.RumorLexicons.from_files(
        negation=cfg.get("rumor.negation_words"),
        uncertainty=cfg.get("rumor.uncertainty_words"),
        certainty=cfg.get("rumor.certainty_words"),
        pronouns=cfg.get("rumor.pronoun_words"))


def _hyperparams(cfg: Config) -> dict[str, float]:
    return {"alpha": cfg.get_float("nb.alpha"),
            "k": cfg.get_int("knn.k"),
            "trees": cfg.get_int("rf.trees"),
            "lambda": cfg.get_float("svm.lambda"),
            "epochs": cfg.get_int("svm.epochs")}


def _feature_config(cfg: Config) -> features.FeatureConfig:
    return features.FeatureConfig(enrich=cfg.get_bool("features.enrich"))


def _preprocess_record(record, cfg: Config, resources) -> prep.ProcessedText:
    return prep.process(record.text, prep.PreprocessConfig.from_config(cfg),
                        stopwords=resources.stopwords,
                        lemma_table=resources.lemma_table)


def _build_sa_dataset(corpus, cfg, resources):
    vectorizer = features.Vectorizer(resources, _feature_config(cfg))
    dataset = []
    for record in corpus.records:
        processed = _preprocess_record(record, cfg, resources)
        dataset.append((vectorizer.vectorize(processed, text_id=record.id),
                        record.label))
    return dataset, vectorizer


# --- subcommands -----------------------------------------------------------

def cmd_preprocess(args) -> int:
    cfg = _resolved_config(args)
    stopwords = (prep.load_stopwords(cfg.get("resources.stopwords"))
                 if cfg.get("resources.stopwords") else frozenset())
    lemma_table = (prep.load_lemma_table(cfg.get("resources.lemmas"))
                   if cfg.get("resources.lemmas") else {})
    corpus = corpus_io.load_corpus(args.infile, require_labels=False)
    pc = prep.PreprocessConfig.from_config(cfg)
    lines = []
    for record in corpus.records:
        processed = prep.process(record.text, pc, stopwords, lemma_table)
        lines.append(json.dumps({
            "id": record.id,
            "normalized": processed.normalized,
            "sentences": [{
                "terminal_punct": s.terminal_punct,
                "tokens": [{"surface": t.surface, "stem": t.stem,
                            "lemma": t.lemma, "is_stopword": t.is_stopword,
                            "is_punct": t.is_punct} for t in s.tokens],
            } for s in processed.sentences],
        }, ensure_ascii=False))
    atomic_write(args.out, "\n".join(lines) + "\n")
    print(f"preprocessed {len(corpus.records)} records -> {args.out}")
    return EXIT_OK


def cmd_build_dict(args) -> int:
    cfg = _resolved_config(args)
    dictionary = lexicon.load_dictionary(args.seed)
    ontology = lexicon.load_ontology(args.ontology)
    stopwords = (prep.load_stopwords(cfg.get("resources.stopwords"))
                 if cfg.get("resources.stopwords") else frozenset())
    lemma_table = (prep.load_lemma_table(cfg.get("resources.lemmas"))
                   if cfg.get("resources.lemmas") else {})
    corpus = corpus_io.load_corpus(args.corpus, require_labels=False)
    pc = prep.PreprocessConfig.from_config(cfg)
    before = dictionary.version
    for record in corpus.records:
        processed = prep.process(record.text, pc, stopwords, lemma_table)
        dictionary = features.enrich_from_text(processed, dictionary, ontology)
    atomic_write(args.out, dictionary.canonical())
    if args.provenance:
        lines = []
        for word in sorted(dictionary.provenance):
            origin, synset = dictionary.provenance[word]
            lines.append(f"{word}\t{origin}\t{synset or '-'}")
        atomic_write(args.provenance, "\n".join(lines) + "\n")
    print(f"dictionary version {before} -> {dictionary.version} "
          f"({dictionary.version - before} words added)")
    return EXIT_OK


def cmd_train_tagger(args) -> int:
    corpus = pos_tagger.load_tagged_corpus(args.corpus)
    model = pos_tagger.train_hmm(corpus)
    pos_tagger.save_hmm(model, args.out)
    print(f"trained tagger: {len(model.tagset)} tags, "
          f"{model.token_total} tokens -> {args.out}")
    return EXIT_OK


def cmd_tag(args) -> int:
    model = pos_tagger.load_hmm(args.model)
    try:
        text = Path(args.infile).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read input text {args.infile}: {exc}") from exc
    normalized = prep.normalize(text)
    out_lines = []
    for start, end, _ in prep.split_sentences(normalized):
        tokens = [t.surface for t in prep.tokenize(normalized[start:end], start)]
        if not tokens:
            continue
        tags = pos_tagger.viterbi_tag(model, tokens)
        out_lines.append(" ".join(f"{w}/{t}" for w, t in zip(tokens, tags)))
    output = "\n".join(out_lines) + "\n"
    if args.out:
        atomic_write(args.out, output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


def cmd_train_sa(args) -> int:
    cfg = _resolved_config(args)
    resources = _load_resources(cfg)
    corpus = corpus_io.load_corpus(args.corpus, expected_labels=SA_CLASSES)
    dataset, vectorizer = _build_sa_dataset(corpus, cfg, resources)
    model = classifiers.train(args.algo, dataset, _hyperparams(cfg),
                              seed=args.seed)
    model.resource_fingerprints = vectorizer.resources.fingerprints()
    corpus_io.save_model(model, args.out)
    print(f"trained {args.algo} on {len(dataset)} records -> {args.out}")
    return EXIT_OK


def cmd_classify_sa(args) -> int:
    cfg = _resolved_config(args)
    resources = _load_resources(cfg)
    model = corpus_io.load_model(args.model,
                                 current_fingerprints=resources.fingerprints())
    corpus = corpus_io.load_corpus(args.infile, require_labels=False)
    vectorizer = features.Vectorizer(resources, _feature_config(cfg))
    lines = []
    for record in corpus.records:
        processed = _preprocess_record(record, cfg, resources)
        vec = vectorizer.vectorize(processed, text_id=record.id)
        pred = classifiers.predict(model, vec)
        scores = "\t".join(f"score.{l}={pred.scores[l]!r}" for l in model.labels)
        lines.append(f"{record.id}\t{pred.label}\t{scores}")
    atomic_write(args.out, "\n".join(lines) + "\n")
    print(f"classified {len(corpus.records)} records -> {args.out}")
    return EXIT_OK


def cmd_eval_sa(args) -> int:
    cfg = _resolved_config(args)
    resources = _load_resources(cfg)
    corpus = corpus_io.load_corpus(args.corpus, expected_labels=SA_CLASSES)
    dataset, _ = _build_sa_dataset(corpus, cfg, resources)
    present = [c for c in SA_CLASSES
               if any(label == c for _, label in dataset)]
    report = eval_stats.cross_validate(args.algo, dataset, args.k,
                                       _hyperparams(cfg), seed=args.seed,
                                       label_order=present)
    atomic_write(args.report, eval_stats.format_report(report))
    print(f"macro_f1={report.macro_f1:.6f}")
    return EXIT_OK


def cmd_ttest(args) -> int:
    cfg = _resolved_config(args)
    resources = _load_resources(cfg)
    model = corpus_io.load_model(args.sa_model,
                                 current_fingerprints=resources.fingerprints())
    corpus = corpus_io.load_corpus(args.corpus, expected_labels=RUMOR_LABELS)
    rows = rumor_mod.feature_significance(
        corpus, model, resources, config=_feature_config(cfg),
        preprocess_config=prep.PreprocessConfig.from_config(cfg),
        alpha=cfg.get_float("ttest.alpha"),
        variant=cfg.get("ttest.variant"))
    table = rumor_mod.format_significance_table(rows)
    atomic_write(args.out, table)
    sys.stdout.write(table)
    return EXIT_OK


def cmd_eval_rumor(args) -> int:
    cfg = _resolved_config(args)
    resources = _load_resources(cfg)
    rumor_lex = _load_rumor_lexicons(cfg)
    model = corpus_io.load_model(args.sa_model,
                                 current_fingerprints=resources.fingerprints())
    corpus = corpus_io.load_corpus(args.corpus, expected_labels=RUMOR_LABELS)
    selected = tuple(cfg.get_list("rumor.selected_classes"))
    kind = cfg.get("rumor.classifier")
    pc = prep.PreprocessConfig.from_config(cfg)
    if args.ablate:
        result = rumor_mod.ablation(
            corpus, model, resources, rumor_lex, k=args.k, seed=args.seed,
            kind=kind, hyperparams=_hyperparams(cfg),
            selected_classes=selected, config=_feature_config(cfg),
            preprocess_config=pc)
        atomic_write(args.out, rumor_mod.format_ablation_report(result))
        print(f"context_only_macro_f1={result.context_only.macro_f1:.6f}")
        print(f"with_sa_macro_f1={result.with_sa.macro_f1:.6f}")
    else:
        dataset = rumor_mod.build_rumor_dataset(
            corpus, resources, rumor_lex, sa_model=model,
            selected_classes=selected, include_sa=True,
            config=_feature_config(cfg), preprocess_config=pc)
        report = eval_stats.cross_validate(kind, dataset, args.k,
                                           _hyperparams(cfg), seed=args.seed,
                                           label_order=RUMOR_LABELS)
        atomic_write(args.out, eval_stats.format_report(report))
        print(f"macro_f1={report.macro_f1:.6f}")
    return EXIT_OK


def cmd_dump_config(args) -> int:
    cfg = _resolved_config(args)
    sys.stdout.write(cfg.dump())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speechact",
        description="Persian speech-act classification and rumor detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="normalize/tokenize a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _add_common(p, ("stopwords", "lemmas"))
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("build-dict", help="offline dictionary enrichment pass")
    p.add_argument("--seed", required=True, metavar="DICT",
                   help="seed dictionary file")
    p.add_argument("--ontology", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--provenance", help="write a word provenance log")
    _add_common(p, ("stopwords", "lemmas"))
    p.set_defaults(func=cmd_build_dict)

    p = sub.add_parser("train-tagger", help="train the HMM POS tagger")
    p.add_argument("--corpus", required=True, help="word/TAG tagged corpus")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_train_tagger)

    p = sub.add_parser("tag", help="POS-tag plain text")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_tag)

    resource_flags = ("dict", "ontology", "sentiment", "stopwords", "lemmas",
                      "tagger", "tag_groups")

    p = sub.add_parser("train-sa", help="train a speech-act classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--algo", required=True, choices=classifiers.KINDS)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-enrich", action="store_true",
                   help="disable ontology synonym expansion")
    _add_common(p, resource_flags)
    p.set_defaults(func=cmd_train_sa)

    p = sub.add_parser("classify-sa", help="predict speech acts for texts")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-enrich", action="store_true")
    _add_common(p, resource_flags)
    p.set_defaults(func=cmd_classify_sa)

    p = sub.add_parser("eval-sa", help="cross-validated speech-act evaluation")
    p.add_argument("--corpus", required=True)
    p.add_argument("--algo", required=True, choices=classifiers.KINDS)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default="sa-eval-report.tsv")
    p.add_argument("--no-enrich", action="store_true",
                   help="evaluate without ontology synonym expansion")
    _add_common(p, resource_flags)
    p.set_defaults(func=cmd_eval_sa)

    rumor_flags = resource_flags + ("negation", "uncertainty", "certainty",
                                    "pronouns")

    p = sub.add_parser("ttest", help="profile significance, FR vs TR rumors")
    p.add_argument("--corpus", required=True, help="rumor corpus with veracity")
    p.add_argument("--sa-model", required=True)
    p.add_argument("--out", default="ttest-report.tsv")
    p.add_argument("--no-enrich", action="store_true")
    _add_common(p, resource_flags)
    p.set_defaults(func=cmd_ttest)

    p = sub.add_parser("eval-rumor", help="rumor/non-rumor evaluation")
    p.add_argument("--corpus", required=True)
    p.add_argument("--sa-model", required=True)
    p.add_argument("--ablate", action="store_true",
                   help="compare context-only vs context+profile arms")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="rumor-eval-report.tsv")
    p.add_argument("--no-enrich", action="store_true")
    _add_common(p, rumor_flags)
    p.set_defaults(func=cmd_eval_rumor)

    p = sub.add_parser("dump-config", help="print the resolved configuration")
    _add_common(p, rumor_flags)
    p.set_defaults(func=cmd_dump_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"error: resource: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DataError as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: resource: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
