"""Trainable trigram HMM part-of-speech tagger with Viterbi decoding.

Counting conventions (fixed so that training is exactly reproducible):

* every sentence is padded to ``[BOS, BOS] + tags + [EOS]``;
* trigram and bigram counts run over consecutive windows of the padded
  sequence, unigram counts over every padded position (so BOS is counted
  twice per sentence, EOS once);
* the unigram distribution used for prediction is over real tags plus EOS
  (BOS is never predicted), with total N;
* transition probabilities interpolate maximum-likelihood unigram, bigram
  and trigram estimates with weights (l1, l2, l3) chosen by deleted
  interpolation; when the deleted-interpolation comparison ties, the weight
  of the lowest-order estimate wins (a documented, deterministic choice);
* words seen at most ``RARE_THRESHOLD`` times feed a suffix model (suffix
  lengths 0..4) that scores unknown words via P(tag|suffix) / P(tag).

Viterbi ties are broken toward the lexicographically smallest tag sequence.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DataError, ResourceError

BOS = "<s>"
EOS = "</s>"

RARE_THRESHOLD = 10
MAX_SUFFIX_LEN = 4

POS_GROUPS = ("noun", "adjective", "adverb", "verb", "other")
SPECIAL_GROUPS = ("interjection", "if")

TaggedSentence = Sequence[tuple[str, str]]


@dataclass(frozen=True)
class HmmModel:
    tagset: tuple[str, ...]
    lambdas: tuple[float, float, float]
    unigrams: Mapping[str, int]            # padded positions, BOS included
    bigrams: Mapping[tuple[str, str], int]
    trigrams: Mapping[tuple[str, str, str], int]
    emissions: Mapping[str, Mapping[str, int]]   # tag -> word -> count
    tag_totals: Mapping[str, int]          # real-tag occurrence counts
    suffix_counts: Mapping[str, Mapping[str, int]]  # suffix -> tag -> count
    vocab: frozenset[str]
    token_total: int                       # N: real tags + EOS
    _bigram_ctx: Mapping[str, int] = field(default_factory=dict, repr=False)
    _trigram_ctx: Mapping[tuple[str, str], int] = field(default_factory=dict, repr=False)
    _suffix_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        # Context totals sum over predictable successors only (never BOS), so
        # each conditional distribution normalizes over real tags plus EOS.
        bctx: dict[str, int] = {}
        for (t1, t2), n in self.bigrams.items():
            if t2 != BOS:
                bctx[t1] = bctx.get(t1, 0) + n
        tctx: dict[tuple[str, str], int] = {}
        for (t1, t2, t3), n in self.trigrams.items():
            if t3 != BOS:
                tctx[(t1, t2)] = tctx.get((t1, t2), 0) + n
        object.__setattr__(self, "_bigram_ctx", bctx)
        object.__setattr__(self, "_trigram_ctx", tctx)
        object.__setattr__(self, "_suffix_cache", {})

    def unigram_prob(self, tag: str) -> float:
        if self.token_total == 0:
            return 0.0
        return self.unigrams.get(tag, 0) / self.token_total

    def bigram_prob(self, prev: str, tag: str) -> float:
        total = self._bigram_ctx.get(prev, 0)
        if total == 0:
            return 0.0
        return self.bigrams.get((prev, tag), 0) / total

    def trigram_prob(self, t1: str, t2: str, tag: str) -> float:
        total = self._trigram_ctx.get((t1, t2), 0)
        if total == 0:
            return 0.0
        return self.trigrams.get((t1, t2, tag), 0) / total

    def transition_prob(self, t1: str, t2: str, tag: str) -> float:
        l1, l2, l3 = self.lambdas
        return (l1 * self.unigram_prob(tag)
                + l2 * self.bigram_prob(t2, tag)
                + l3 * self.trigram_prob(t1, t2, tag))

    def emission_score(self, word: str, tag: str) -> float:
        """P(word|tag) for known words; a P(tag|suffix)/P(tag) likelihood
        ratio for unknown ones (uniform when no suffix information exists)."""
        if word in self.vocab:
            total = self.tag_totals.get(tag, 0)
            if total == 0:
                return 0.0
            return self.emissions.get(tag, {}).get(word, 0) / total
        dist = self._suffix_dist(word)
        if dist is None:
            return 1.0 / len(self.tagset)
        p_tag = self.unigram_prob(tag)
        if p_tag == 0.0:
            return 0.0
        return dist.get(tag, 0.0) / p_tag

    def _suffix_dist(self, word: str) -> dict[str, float] | None:
        if word in self._suffix_cache:
            return self._suffix_cache[word]
        dist = None
        for length in range(min(MAX_SUFFIX_LEN, len(word)), -1, -1):
            suffix = word[len(word) - length:]
            counts = self.suffix_counts.get(suffix)
            if counts:
                total = sum(counts.values())
                dist = {t: n / total for t, n in counts.items()}
                break
        self._suffix_cache[word] = dist
        return dist


def load_tagged_corpus(path: str | Path) -> list[list[tuple[str, str]]]:
    """One sentence per line, tokens as word/TAG separated by spaces."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read tagged corpus {path}: {exc}") from exc
    sentences = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        pairs = []
        for token in line.split():
            if "/" not in token:
                raise DataError(f"{path}:{lineno}: token {token!r} lacks /TAG")
            word, _, tag = token.rpartition("/")
            if not word or not tag:
                raise DataError(f"{path}:{lineno}: token {token!r} lacks /TAG")
            pairs.append((word, tag))
        if pairs:
            sentences.append(pairs)
    return sentences


def train_hmm(corpus: Sequence[TaggedSentence]) -> HmmModel:
    if not corpus:
        raise DataError("cannot train tagger on an empty corpus")

    unigrams: Counter = Counter()
    bigrams: Counter = Counter()
    trigrams: Counter = Counter()
    emissions: dict[str, Counter] = {}
    tag_totals: Counter = Counter()
    word_freq: Counter = Counter()
    tagset: set[str] = set()

    for sentence in corpus:
        if not sentence:
            continue
        tags = [tag for _, tag in sentence]
        for word, tag in sentence:
            if tag in (BOS, EOS):
                raise DataError(f"tag {tag!r} collides with a boundary marker")
            tagset.add(tag)
            emissions.setdefault(tag, Counter())[word] += 1
            tag_totals[tag] += 1
            word_freq[word] += 1
        padded = [BOS, BOS] + tags + [EOS]
        unigrams.update(padded)
        for i in range(1, len(padded)):
            bigrams[(padded[i - 1], padded[i])] += 1
        for i in range(2, len(padded)):
            trigrams[(padded[i - 2], padded[i - 1], padded[i])] += 1

    if not tagset:
        raise DataError("cannot train tagger on an empty corpus")

    token_total = sum(n for t, n in unigrams.items() if t != BOS)
    lambdas = _deleted_interpolation(unigrams, bigrams, trigrams, token_total)

    suffix_counts: dict[str, Counter] = {}
    for sentence in corpus:
        for word, tag in sentence:
            if word_freq[word] > RARE_THRESHOLD:
                continue
            for length in range(0, min(MAX_SUFFIX_LEN, len(word)) + 1):
                suffix = word[len(word) - length:] if length else ""
                suffix_counts.setdefault(suffix, Counter())[tag] += 1

    return HmmModel(
        tagset=tuple(sorted(tagset)),
        lambdas=lambdas,
        unigrams=dict(unigrams),
        bigrams=dict(bigrams),
        trigrams=dict(trigrams),
        emissions={t: dict(c) for t, c in emissions.items()},
        tag_totals=dict(tag_totals),
        suffix_counts={s: dict(c) for s, c in suffix_counts.items()},
        vocab=frozenset(word_freq),
        token_total=token_total,
    )


def _deleted_interpolation(unigrams: Mapping[str, int],
                           bigrams: Mapping[tuple[str, str], int],
                           trigrams: Mapping[tuple[str, str, str], int],
                           token_total: int) -> tuple[float, float, float]:
    weights = [0.0, 0.0, 0.0]
    for t1, t2, t3 in sorted(trigrams):
        c3 = trigrams[(t1, t2, t3)]
        b12 = bigrams.get((t1, t2), 0)
        b23 = bigrams.get((t2, t3), 0)
        u2 = unigrams.get(t2, 0)
        u3 = unigrams.get(t3, 0)
        d3 = (c3 - 1) / (b12 - 1) if b12 > 1 else 0.0
        d2 = (b23 - 1) / (u2 - 1) if u2 > 1 else 0.0
        d1 = (u3 - 1) / (token_total - 1) if token_total > 1 else 0.0
        # ties go to the lowest-order estimate
        best = max(d1, d2, d3)
        if d1 == best:
            weights[0] += c3
        elif d2 == best:
            weights[1] += c3
        else:
            weights[2] += c3
    total = sum(weights)
    if total == 0:
        return (1.0, 0.0, 0.0)
    return (weights[0] / total, weights[1] / total, weights[2] / total)


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else float("-inf")


def viterbi_tag(model: HmmModel, tokens: Sequence[str]) -> list[str]:
    """Most probable tag sequence under the interpolated trigram model.

    The score includes the final transition into EOS. Equal-scoring paths
    resolve to the lexicographically smallest tag sequence, so decoding is
    fully deterministic.
    """
    if not tokens:
        raise DataError("cannot tag an empty token sequence")
    tags = model.tagset
    # state: (prev2, prev1) -> (score, path)
    best: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {
        (BOS, BOS): (0.0, ())}
    for word in tokens:
        log_emit = {tag: _log(model.emission_score(word, tag)) for tag in tags}
        nxt: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {}
        for (t1, t2), (score, path) in best.items():
            for tag in tags:
                step = _log(model.transition_prob(t1, t2, tag)) + log_emit[tag]
                cand = (score + step, path + (tag,))
                key = (t2, tag)
                cur = nxt.get(key)
                if cur is None or _path_better(cand, cur):
                    nxt[key] = cand
        best = nxt
    final: tuple[float, tuple[str, ...]] | None = None
    for (t1, t2), (score, path) in best.items():
        cand = (score + _log(model.transition_prob(t1, t2, EOS)), path)
        if final is None or _path_better(cand, final):
            final = cand
    assert final is not None
    return list(final[1])


def _path_better(cand: tuple[float, tuple[str, ...]],
                 cur: tuple[float, tuple[str, ...]]) -> bool:
    if cand[0] != cur[0]:
        return cand[0] > cur[0]
    return cand[1] < cur[1]


def sequence_log_score(model: HmmModel, tokens: Sequence[str],
                       tags: Sequence[str]) -> float:
    """Log probability of one (tokens, tags) pairing, EOS factor included."""
    if len(tokens) != len(tags):
        raise DataError("tokens and tags differ in length")
    score = 0.0
    t1, t2 = BOS, BOS
    for word, tag in zip(tokens, tags):
        score += (_log(model.transition_prob(t1, t2, tag))
                  + _log(model.emission_score(word, tag)))
        t1, t2 = t2, tag
    return score + _log(model.transition_prob(t1, t2, EOS))


def load_group_map(path: str | Path) -> dict[str, str]:
    """TAG<TAB>group per line; group is one of the five canonical groups or
    the special markers ``interjection``/``if``."""
    valid = set(POS_GROUPS) | set(SPECIAL_GROUPS)
    mapping: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read tag group map {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ResourceError(f"{path}:{lineno}: expected TAG<TAB>group")
        tag, group = parts[0].strip(), parts[1].strip()
        if group not in valid:
            raise ResourceError(f"{path}:{lineno}: unknown group {group!r}")
        mapping[tag] = group
    return mapping


def group_map_fingerprint(group_map: Mapping[str, str]) -> str:
    import hashlib
    canon = "\n".join(f"{t}\t{group_map[t]}" for t in sorted(group_map))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def pos_feature_groups(tags: Sequence[str],
                       group_map: Mapping[str, str]) -> dict[str, object]:
    """Count tags per canonical group and flag interjection / IF tags.

    Tags mapped to ``interjection`` or ``if`` count toward ``other`` so the
    five group counts always sum to the number of tags.
    """
    counts = {g: 0 for g in POS_GROUPS}
    interjection = False
    if_tag = False
    for tag in tags:
        group = group_map.get(tag)
        if group is None:
            raise ResourceError(f"tag {tag!r} missing from the group map")
        if group == "interjection":
            interjection = True
            counts["other"] += 1
        elif group == "if":
            if_tag = True
            counts["other"] += 1
        else:
            counts[group] += 1
    return {"counts": counts, "interjection": interjection, "if_tag": if_tag}


def save_hmm(model: HmmModel, path: str | Path) -> None:
    """Canonical JSON serialization; identical corpora give identical bytes."""
    blob = {
        "schema_version": 1,
        "model_kind": "hmm",
        "tagset": list(model.tagset),
        "lambdas": list(model.lambdas),
        "unigrams": {t: model.unigrams[t] for t in sorted(model.unigrams)},
        "bigrams": {" ".join(k): model.bigrams[k] for k in sorted(model.bigrams)},
        "trigrams": {" ".join(k): model.trigrams[k] for k in sorted(model.trigrams)},
        "emissions": {t: {w: model.emissions[t][w] for w in sorted(model.emissions[t])}
                      for t in sorted(model.emissions)},
        "tag_totals": {t: model.tag_totals[t] for t in sorted(model.tag_totals)},
        "suffix_counts": {s: {t: model.suffix_counts[s][t]
                              for t in sorted(model.suffix_counts[s])}
                          for s in sorted(model.suffix_counts)},
        "vocab": sorted(model.vocab),
        "token_total": model.token_total,
    }
    Path(path).write_text(json.dumps(blob, ensure_ascii=True, indent=2) + "\n",
                          encoding="utf-8")


def load_hmm(path: str | Path) -> HmmModel:
    try:
        blob = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ResourceError(f"cannot read tagger model {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"corrupt tagger model {path}: {exc}") from exc
    if blob.get("schema_version") != 1 or blob.get("model_kind") != "hmm":
        raise DataError(f"{path} is not a supported tagger model")
    return HmmModel(
        tagset=tuple(blob["tagset"]),
        lambdas=tuple(blob["lambdas"]),
        unigrams=dict(blob["unigrams"]),
        bigrams={tuple(k.split(" ")): v for k, v in blob["bigrams"].items()},
        trigrams={tuple(k.split(" ")): v for k, v in blob["trigrams"].items()},
        emissions={t: dict(words) for t, words in blob["emissions"].items()},
        tag_totals=dict(blob["tag_totals"]),
        suffix_counts={s: dict(c) for s, c in blob["suffix_counts"].items()},
        vocab=frozenset(blob["vocab"]),
        token_total=blob["token_total"],
    )


def hmm_fingerprint(model: HmmModel) -> str:
    import hashlib
    blob = json.dumps({
        "tagset": list(model.tagset), "lambdas": list(model.lambdas),
        "unigrams": sorted(model.unigrams.items()),
        "bigrams": sorted((" ".join(k), v) for k, v in model.bigrams.items()),
        "trigrams": sorted((" ".join(k), v) for k, v in model.trigrams.items()),
        "emissions": sorted((t, sorted(ws.items())) for t, ws in model.emissions.items()),
        "suffix": sorted((s, sorted(c.items())) for s, c in model.suffix_counts.items()),
        "token_total": model.token_total,
    }, ensure_ascii=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
