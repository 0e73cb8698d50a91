"""Persian speech-act classification and rumor detection features.

Pipeline: preprocess -> dictionary/ontology feature extraction -> one of four
from-scratch classifiers -> stratified cross-validation reports; the trained
speech-act model then feeds per-text profiles into rumor/non-rumor features
with t-test significance analysis.
"""

from . import (classifiers, config, corpus_io, eval_stats, features, lexicon,
               pos_tagger, preprocess, rumor)
from .corpus_io import SA_CLASSES, RUMOR_LABELS, LabeledCorpus, Record
from .errors import (ArchiveVersionError, DataError, ResourceError,
                     SchemaMismatchError)
from .features import FeatureConfig, FeatureSchema, FeatureVector, Resources

__version__ = "0.1.0"

__all__ = [
    "SA_CLASSES", "RUMOR_LABELS", "LabeledCorpus", "Record",
    "FeatureConfig", "FeatureSchema", "FeatureVector", "Resources",
    "DataError", "ResourceError", "SchemaMismatchError", "ArchiveVersionError",
    "classifiers", "config", "corpus_io", "eval_stats", "features",
    "lexicon", "pos_tagger", "preprocess", "rumor",
]
