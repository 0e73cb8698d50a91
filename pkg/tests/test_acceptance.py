"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the pytest verdicts.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate

from speechact import classifiers, corpus_io, eval_stats, features, lexicon
from speechact import pos_tagger
from speechact.cli import main
from speechact.corpus_io import SA_CLASSES
from speechact.features import (FeatureConfig, FeatureVector, Resources,
                                Vectorizer, sentiment_score, vectorize)
from speechact.preprocess import Token, process

import synth
from test_pos_tagger import run_viterbi_oracle_trials


def _report(num, name, ok, detail=""):
    print(f"\n[ACCEPTANCE {num:02d}] {name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def resources():
    return synth.make_resources()


@pytest.fixture(scope="module")
def sa_reports(resources):
    """10-fold reports for all four classifiers on the 200-per-class corpus,
    plus the wall time the whole pipeline took."""
    t0 = time.perf_counter()
    corpus = synth.make_sa_corpus(200, seed=0)
    vectorizer = Vectorizer(resources)
    dataset = [(vectorizer.vectorize(process(rec.text), rec.id), rec.label)
               for rec in corpus.records]
    hyper = {"trees": 25, "epochs": 10}
    reports = {kind: eval_stats.cross_validate(kind, dataset, 10, hyper, seed=0,
                                               label_order=SA_CLASSES)
               for kind in classifiers.KINDS}
    return reports, time.perf_counter() - t0


@pytest.fixture(scope="module")
def cli_workspace(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("acceptance")
    paths = synth.write_resource_files(tmp)
    paths["tmp"] = tmp
    return paths


def _cli_resource_args(paths, rumor_lists=False):
    args = ["--dict", paths["dict"], "--ontology", paths["ontology"],
            "--tagger", paths["tagger"], "--tag-groups", paths["tag_groups"]]
    if rumor_lists:
        args += ["--negation", paths["negation"],
                 "--uncertainty", paths["uncertainty"],
                 "--certainty", paths["certainty"],
                 "--pronouns", paths["pronouns"]]
    return args


def test_criterion_01_sentiment_equation_exact():
    lex = lexicon.SentimentLexicon({"p": "pos", "n": "neg", "z": "neutral"})

    def tok(w):
        return Token(surface=w, stem=w, lemma=w)

    rng = np.random.default_rng(100)
    t0 = time.perf_counter()
    checked = 0
    for _ in range(1000):
        p = int(rng.integers(0, 40))
        n = int(rng.integers(0, 40))
        tokens = [tok("p")] * p + [tok("n")] * n + [tok("z")]
        result = sentiment_score(tokens, lex)
        if p + n == 0:
            assert result.score == 0.0
        else:
            assert result.score == (p - n) / (p + n)  # exact, same float op
        assert -1.0 <= result.score <= 1.0
        assert (result.pos_count, result.neg_count) == (p, n)
        checked += 1
    elapsed = time.perf_counter() - t0
    _report(1, "sentiment equation exact on random count pairs",
            checked == 1000 and elapsed < 1.0, f"({elapsed:.2f}s)")


def test_criterion_02_viterbi_equals_enumeration():
    t0 = time.perf_counter()
    run_viterbi_oracle_trials(200, seed=2024)
    elapsed = time.perf_counter() - t0
    _report(2, "viterbi matches exhaustive enumeration on 200 random models",
            elapsed < 10.0, f"({elapsed:.2f}s)")


def test_criterion_03_nb_closed_form():
    schema = features.FeatureSchema(("f0", "f1"), ("count", "count"))
    data = [(FeatureVector(schema, np.array([1.0, 0.0])), "A"),
            (FeatureVector(schema, np.array([0.0, 1.0])), "B")]
    model = classifiers.train("nb", data, {"alpha": 1.0})
    lik = np.exp(model.params["log_likelihoods"])
    hand_lik = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    ok = np.all(np.abs(lik - hand_lik) < 1e-12)
    x = np.array([3.0, 1.0])
    hand_post = {}
    for ci, label in enumerate(("A", "B")):
        hand_post[label] = math.log(0.5) + x @ model.params["log_likelihoods"][ci]
    z = math.log(sum(math.exp(v) for v in hand_post.values()))
    result = classifiers.predict(model, FeatureVector(schema, x))
    for label in ("A", "B"):
        ok = ok and abs(result.scores[label] - math.exp(hand_post[label] - z)) < 1e-12
    _report(3, "naive bayes posteriors match hand-computed smoothing", bool(ok))


def test_criterion_04_classifier_sanity(sa_reports):
    reports, elapsed = sa_reports
    scores = {kind: reports[kind].macro_f1 for kind in classifiers.KINDS}
    ok = all(f1 >= 0.95 for f1 in scores.values()) and elapsed < 120.0
    detail = " ".join(f"{k}={v:.3f}" for k, v in scores.items())
    _report(4, "all four classifiers reach macro-F1 >= 0.95",
            ok, f"({detail}; {elapsed:.1f}s)")


def test_criterion_05_enrichment_ablation(cli_workspace, capsys):
    tmp = cli_workspace["tmp"]
    deltas = []
    for seed in range(5):
        corpus_path = tmp / f"mates-{seed}.txt"
        synth.write_corpus(
            synth.make_sa_corpus(12, seed=200 + seed, mate_fraction=0.5),
            corpus_path)

        def run_eval(extra):
            rc = main(["eval-sa", "--corpus", str(corpus_path), "--algo", "nb",
                       "--k", "4", "--seed", str(seed),
                       "--report", str(tmp / "r.tsv")]
                      + _cli_resource_args(cli_workspace) + extra)
            assert rc == 0
            return float(capsys.readouterr().out.strip().splitlines()[-1]
                         .split("=")[1])

        enriched = run_eval([])
        plain = run_eval(["--no-enrich"])
        deltas.append(enriched - plain)
    ok = all(d >= 0.10 for d in deltas)
    _report(5, "ontology enrichment beats no-enrich by >= 0.10 on 5/5 seeds",
            ok, "deltas=" + ",".join(f"{d:.3f}" for d in deltas))


def test_criterion_06_enrichment_invariants():
    rng = np.random.default_rng(600)
    cases = 0
    for _ in range(500):
        d, onto, fresh = synth.random_lexicon_case(rng)
        word = fresh[int(rng.integers(0, len(fresh)))]
        new, added = lexicon.enrich(d, word, onto)
        for c in SA_CLASSES:
            for kind in lexicon.LIST_KINDS:
                assert d.words(c, kind) <= new.words(c, kind)
        assert d.vulgar_words <= new.vulgar_words
        again, added2 = lexicon.enrich(new, word, onto)
        assert again is new and not added2
        words_all = set(new.vulgar_words)
        for c in SA_CLASSES:
            for kind in lexicon.LIST_KINDS:
                words_all |= new.words(c, kind)
        for w in words_all:
            origin, synset = new.provenance[w]
            assert origin in (lexicon.SEED, lexicon.ENRICHED)
            if origin == lexicon.ENRICHED:
                assert synset in onto.synsets
        cases += 1

    # synonym-substitution vector invariance with a single-tag tagger
    trivial = Resources(
        dictionary=synth.make_dictionary(),
        hmm=pos_tagger.train_hmm([[("x", "T")]]),
        group_map={"T": "other"},
        ontology=synth.make_ontology())
    swap_cases = 0
    for _ in range(500):
        sa_class = SA_CLASSES[int(rng.integers(0, 7))]
        idx = int(rng.integers(0, 5))
        cue = synth.CLASS_CUES[sa_class][idx]
        mate = synth.CLASS_MATES[sa_class][idx][int(rng.integers(0, 2))]
        fillers = [synth.FILLERS[int(rng.integers(0, 40))]
                   for _ in range(int(rng.integers(0, 4)))]
        v1, _ = vectorize(process(" ".join([cue] + fillers) + "."),
                          trivial, FeatureConfig(True))
        v2, _ = vectorize(process(" ".join([mate] + fillers) + "."),
                          trivial, FeatureConfig(True))
        assert np.array_equal(v1.values, v2.values)
        swap_cases += 1
    _report(6, "enrichment invariants over randomized cases",
            cases == 500 and swap_cases == 500,
            f"({cases} structural + {swap_cases} substitution cases)")


def _t_cdf_quadrature(t, df):
    def pdf(x):
        log_pdf = (math.lgamma((df + 1) / 2) - math.lgamma(df / 2)
                   - 0.5 * math.log(df * math.pi)
                   - (df + 1) / 2 * math.log1p(x * x / df))
        return math.exp(log_pdf)
    value, _ = integrate.quad(pdf, -np.inf, t)
    return value


def test_criterion_07_t_machinery():
    identical = eval_stats.t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    ok = identical.t_statistic == 0.0 and identical.p_value == 1.0
    pooled = eval_stats.t_test([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], "pooled")
    welch = eval_stats.t_test([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], "welch")
    ok = ok and pooled.t_statistic == welch.t_statistic
    worst = 0.0
    for df in (1, 2, 5, 10, 30, 100, 1000):
        for t10 in range(-50, 55, 5):
            t = t10 / 10.0
            err = abs(eval_stats.t_cdf(t, df) - _t_cdf_quadrature(t, df))
            worst = max(worst, err)
    ok = ok and worst <= 1e-6
    _report(7, "t-test identities and t_cdf vs quadrature grid",
            ok, f"(max |err|={worst:.2e})")


def test_criterion_08_significance_table_shape(cli_workspace, capsys):
    tmp = cli_workspace["tmp"]
    corpus_path = tmp / "frtr.txt"
    synth.write_corpus(synth.make_rumor_corpus("frtr", 12, seed=801),
                       corpus_path)
    model_path = tmp / "sa-for-ttest.json"
    sa_corpus = tmp / "sa-train.txt"
    synth.write_corpus(synth.make_sa_corpus(20, seed=802), sa_corpus)
    rc = main(["train-sa", "--corpus", str(sa_corpus), "--algo", "nb",
               "--out", str(model_path)] + _cli_resource_args(cli_workspace))
    assert rc == 0
    out_path = tmp / "ttest.tsv"
    rc = main(["ttest", "--corpus", str(corpus_path),
               "--sa-model", str(model_path), "--out", str(out_path)]
              + _cli_resource_args(cli_workspace))
    capsys.readouterr()
    assert rc == 0
    lines = out_path.read_text(encoding="utf-8").splitlines()
    header = next(l for l in lines if l.startswith("feature")).split("\t")[1:]
    flags = next(l for l in lines if l.startswith("significant")).split("\t")[1:]
    shape_ok = header == [f"sa.{c}" for c in SA_CLASSES]
    flagged = {name for name, f in zip(header, flags) if f == "yes"}
    ok = shape_ok and flagged == {"sa.Thrt", "sa.Declar"}
    _report(8, "significance table flags exactly the planted classes",
            ok, f"(flagged={sorted(flagged)})")


def test_criterion_09_ablation_direction(cli_workspace, capsys):
    tmp = cli_workspace["tmp"]
    corpus_path = tmp / "rumor-sa.txt"
    synth.write_corpus(synth.make_rumor_corpus("sa", 16, seed=901), corpus_path)
    model_path = tmp / "sa-for-rumor.json"
    sa_corpus = tmp / "sa-train-2.txt"
    synth.write_corpus(synth.make_sa_corpus(20, seed=902), sa_corpus)
    rc = main(["train-sa", "--corpus", str(sa_corpus), "--algo", "nb",
               "--out", str(model_path)] + _cli_resource_args(cli_workspace))
    assert rc == 0
    cfg = tmp / "rf.cfg"
    cfg.write_text("rf.trees=15\n", encoding="utf-8")
    out_path = tmp / "ablation.tsv"
    rc = main(["eval-rumor", "--corpus", str(corpus_path),
               "--sa-model", str(model_path), "--ablate", "--k", "4",
               "--seed", "9", "--out", str(out_path), "--config", str(cfg)]
              + _cli_resource_args(cli_workspace, rumor_lists=True))
    stdout = capsys.readouterr().out
    assert rc == 0
    ctx = float(next(l for l in stdout.splitlines()
                     if l.startswith("context_only_macro_f1=")).split("=")[1])
    with_sa = float(next(l for l in stdout.splitlines()
                         if l.startswith("with_sa_macro_f1=")).split("=")[1])
    text = out_path.read_text(encoding="utf-8")
    hashes = [l.split("=")[1] for l in text.splitlines()
              if l.startswith("# fold_hash")]
    ok = with_sa > ctx and len(hashes) == 2 and hashes[0] == hashes[1]
    _report(9, "context+profile beats context-only on identical folds",
            ok, f"({ctx:.3f} -> {with_sa:.3f})")


def test_criterion_10_determinism_and_persistence(cli_workspace, resources,
                                                  capsys):
    tmp = cli_workspace["tmp"]
    corpus_path = tmp / "det-corpus.txt"
    corpus = synth.make_sa_corpus(10, seed=1000)
    synth.write_corpus(corpus, corpus_path)

    ok = True
    for algo in ("nb", "rf"):
        archives = []
        for run in range(2):
            model_path = tmp / f"det-{algo}-{run}.json"
            rc = main(["train-sa", "--corpus", str(corpus_path), "--algo",
                       algo, "--seed", "5", "--out", str(model_path)]
                      + _cli_resource_args(cli_workspace))
            assert rc == 0
            archives.append(model_path.read_bytes())
        ok = ok and archives[0] == archives[1]

    reports = []
    for run in range(2):
        report_path = tmp / f"det-report-{run}.tsv"
        rc = main(["eval-sa", "--corpus", str(corpus_path), "--algo", "svm",
                   "--k", "4", "--seed", "5", "--report", str(report_path)]
                  + _cli_resource_args(cli_workspace))
        assert rc == 0
        reports.append(report_path.read_bytes())
    capsys.readouterr()
    ok = ok and reports[0] == reports[1]

    # save/load preserves every prediction bit-for-bit on 20 fixture texts
    vectorizer = Vectorizer(resources)
    dataset = [(vectorizer.vectorize(process(rec.text), rec.id), rec.label)
               for rec in corpus.records[:40]]
    for kind in classifiers.KINDS:
        model = classifiers.train(kind, dataset, {"trees": 9}, seed=7)
        path = tmp / f"rt-{kind}.json"
        corpus_io.save_model(model, path)
        loaded = corpus_io.load_model(path)
        for vec, _ in dataset[:20]:
            a = classifiers.predict(model, vec)
            b = classifiers.predict(loaded, vec)
            ok = ok and a.label == b.label and a.scores == b.scores
        if kind == "rf":
            for vec, _ in dataset[:20]:
                ok = ok and (classifiers.rf_tree_votes(model, vec)
                             == classifiers.rf_tree_votes(loaded, vec))
    _report(10, "fixed-seed runs byte-reproducible, archives predict identically",
            bool(ok))


def test_criterion_11_cv_bookkeeping(sa_reports):
    rng = np.random.default_rng(1100)
    ok = True
    for _ in range(100):
        n = int(rng.integers(8, 60))
        labels = [SA_CLASSES[int(rng.integers(0, 7))] for _ in range(n)]
        k = int(rng.integers(2, min(n, 10) + 1))
        folds = eval_stats.stratified_kfold(labels, k, int(rng.integers(0, 99)))
        flat = sorted(i for fold in folds for i in fold)
        ok = ok and flat == list(range(n))
        for label in set(labels):
            counts = [sum(labels[i] == label for i in fold) for fold in folds]
            ok = ok and max(counts) - min(counts) <= 1
    reports, _ = sa_reports
    for report in reports.values():
        ok = ok and report.micro_f1 == report.accuracy
        ok = ok and report.confusion.sum() == 1400
    _report(11, "fold partitions stratified; micro-F1 equals accuracy", bool(ok))
