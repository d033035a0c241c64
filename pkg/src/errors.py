"""
Exception types for SpanTag
"""


class SpanTagError(Exception):
    """Base class for every error the toolkit raises on purpose"""


class UsageError(SpanTagError):
    """Bad command-line flags or configuration values"""


class DataError(SpanTagError):
    """
    Bad input data.

    Args:
        message (str): What went wrong
        path (str, optional): File the data came from
        line (int, optional): 1-based line number inside that file
    """

    def __init__(self, message, path=None, line=None):
        self.message = message
        self.path = path
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        location = ""
        if self.path is not None:
            location = f"{self.path}:"
            if self.line is not None:
                location += f"{self.line}:"
            location += " "
        elif self.line is not None:
            location = f"line {self.line}: "
        return f"{location}{self.message}"


class ArticleNotFoundError(DataError):
    pass


class ArticleDecodeError(DataError):
    pass


class ArticleIdError(DataError):
    pass


class AnnotationFormatError(DataError):
    pass


class OffsetError(DataError):
    """An annotation offset falls outside its article"""


class TagSchemeError(DataError):
    pass


class ScoringError(DataError):
    pass


class ModelFormatError(DataError):
    pass


class DimensionMismatchError(DataError):
    pass
