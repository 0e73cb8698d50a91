"""Dictionary enrichment: unknown words join the lists their synonyms live in.

Run: python3 demos/02_dictionary_enrichment.py
"""

from speechact.lexicon import (Ontology, build_dictionary, enrich, synonyms)

# Seed dictionary: a couple of request cue words and one threat verb.
dictionary = build_dictionary({
    "Req": {"cue_words": ["لطفا", "ممکنه"], "base_words": ["لطفا"]},
    "Thrt": {"sa_verbs": ["تهدید"]},
}, vulgar=["ناسزا"])

# A tiny WordNet-style ontology: synsets of mutually synonymous lemmas.
ontology = Ontology.from_synsets({
    "S1": ["لطفا", "خواهشمند"],        # please ~ kindly
    "S2": ["تهدید", "ارعاب"],          # threat ~ intimidation
    "S3": ["ناسزا", "دشنام"],          # slur ~ curse
    "S4": ["کتاب", "نسک"],             # unrelated to any dictionary entry
})

print("version:", dictionary.version)
print("Req cue words:", sorted(dictionary.words("Req", "cue_words")))
print()

print("synonyms('لطفا') =", sorted(synonyms("لطفا", ontology)))
print()

for word in ["خواهشمند", "ارعاب", "دشنام", "نسک"]:
    dictionary, added = enrich(dictionary, word, ontology)
    where = ", ".join(f"{c}.{k}" for c, k in sorted(added)) or "nowhere"
    print(f"enrich({word}): added to {where} (version {dictionary.version})")

print()
print("Req cue words now:", sorted(dictionary.words("Req", "cue_words")))
print("vulgar list now:  ", sorted(dictionary.vulgar_words))
print()

print("Provenance distinguishes seeds from enriched words:")
for word in sorted(dictionary.provenance):
    origin, synset = dictionary.provenance[word]
    via = f" via {synset}" if synset else ""
    print(f"  {word:<12} {origin}{via}")

print()
print("Enrichment is copy-on-write; re-offering a known word is a no-op:")
same, added = enrich(dictionary, "خواهشمند", ontology)
print("  same object:", same is dictionary, "| added:", set(added))
