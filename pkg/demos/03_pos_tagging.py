"""Train the trigram HMM tagger on a toy corpus and decode new sentences.

Run: python3 demos/03_pos_tagging.py
"""

from speechact.pos_tagger import (pos_feature_groups, train_hmm, viterbi_tag)

from demo_corpus import GROUP_MAP, TAGGED_SENTENCES

model = train_hmm(TAGGED_SENTENCES)

print(f"tagset ({len(model.tagset)} tags):", ", ".join(model.tagset))
l1, l2, l3 = model.lambdas
print(f"deleted-interpolation weights: l1={l1:.3f} l2={l2:.3f} l3={l3:.3f}")
print(f"vocabulary: {len(model.vocab)} words, {model.token_total} tokens")
print()

sentences = [
    ["کتاب", "خوب", "بود", "."],
    ["خبر", "فردا", "خواهد", "آمد", "."],
    # the last word is unseen: the suffix model has to guess it
    ["شهر", "قشنگی", "بود", "."],
]
for tokens in sentences:
    tags = viterbi_tag(model, tokens)
    print("  " + " ".join(f"{w}/{t}" for w, t in zip(tokens, tags)))
print()

tags = viterbi_tag(model, ["آخ", "کتاب", "مهم", "بود", "!"])
grouped = pos_feature_groups(tags, GROUP_MAP)
print("grouped counts for the last sentence:", grouped["counts"])
print("interjection present:", grouped["interjection"],
      "| IF tag present:", grouped["if_tag"])
