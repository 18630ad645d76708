"""Exception hierarchy shared across the pipeline.

Exit-code mapping used by the CLI: UsageError -> 1, DataError -> 2,
NumericalError -> 3.
"""


class ReadmitError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 2


class UsageError(ReadmitError):
    """Bad flags, bad config values, unknown model/task names."""

    exit_code = 1


class DataError(ReadmitError):
    """Missing or malformed input data."""

    exit_code = 2


class NumericalError(ReadmitError):
    """Non-finite objective/gradient or other numerical breakdown."""

    exit_code = 3
