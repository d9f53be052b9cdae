"""Exception types shared across the pipeline.

The CLI maps exceptions to exit statuses via `exit_code`:
1 = configuration error, 2 = data error, 3 = internal error.
Plain OSError from file access is treated as a data error (exit 2).
"""


class CodemixError(Exception):
    exit_code = 3


class ConfigError(CodemixError):
    """Invalid configuration: bad flags, malformed config file, missing keys."""

    exit_code = 1


class DataError(CodemixError):
    """Invalid or inconsistent input data."""

    exit_code = 2


# --- language identification ---

class EmptyCorpus(DataError):
    """LID training corpus has no entries for one of the languages."""


class FormatVersionMismatch(DataError):
    """Model file carries an unsupported format version."""


class CorruptModel(DataError):
    """Model file is truncated, has a bad magic, or fails its checksum."""


# --- augmentation ---

class MixedCaseToken(DataError):
    """A token to be augmented contains an uppercase letter.

    Words must be lowercased before tagging so they can never collide with
    the uppercase HI/EN tag tokens; an uppercase input token signals that
    normalization was skipped or ran out of order.
    """


class MalformedAugmentation(DataError):
    """Augmented text cannot be parsed back under the claimed mode."""


# --- datasets ---

class SchemaError(DataError):
    """A required field/column is missing from an input record."""


class DuplicateId(DataError):
    """Two dataset rows share the same id."""


class EmptyDataset(DataError):
    """Operation requires a non-empty dataset."""


class StratumTooSmall(DataError):
    """Stratified splitting needs at least 3 examples per class."""


class LengthMismatch(DataError):
    """Two aligned sequences differ in length (tags vs tokens, true vs pred)."""


class UnknownTag(DataError):
    """A language tag outside {HI, EN} was encountered."""


class MissingId(DataError):
    """An id referenced on one side of a join is absent on the other."""


class UntaggedExample(DataError):
    """Operation requires every example to carry language tags."""


# --- evaluation ---

class UnknownLabel(DataError):
    """A label outside the declared label set was encountered."""


# --- baseline classifier ---

class SingleClass(DataError):
    """Training data contains fewer than two distinct classes."""


class NonFiniteLoss(CodemixError):
    """Training loss became NaN or infinite."""
