"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed input data: corpus records, labels, feature schemas."""


class ResourceError(ValueError):
    """Missing or malformed resource file (dictionary, lexicon, tagger, config)."""


class SchemaMismatchError(DataError):
    """Feature names do not match the schema a model was trained with."""


class ArchiveVersionError(DataError):
    """Model archive written under an unsupported schema version."""
