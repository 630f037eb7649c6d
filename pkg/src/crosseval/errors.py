"""Exception types raised by crosseval.

Every validation problem derives from :class:`ValidationError`; the CLI maps
those to exit status 1 and ``OSError`` to exit status 2.
"""


class CrossEvalError(Exception):
    """Base class for all crosseval errors."""


class ValidationError(CrossEvalError):
    """Input data or configuration is invalid."""


class EmptySubset(ValidationError):
    def __init__(self, subset_id=None):
        self.subset_id = subset_id
        where = f" '{subset_id}'" if subset_id is not None else ""
        super().__init__(f"subset{where} contains no trials")


class NonFiniteScore(ValidationError):
    def __init__(self, detail=""):
        super().__init__(f"non-finite score{': ' + detail if detail else ''}")


class MalformedLine(ValidationError):
    def __init__(self, line, content):
        self.line = line
        self.content = content
        super().__init__(f"line {line}: malformed record {content!r}")


class DuplicateId(ValidationError):
    def __init__(self, utt_id, line):
        self.utt_id = utt_id
        self.line = line
        super().__init__(f"line {line}: duplicate utterance id {utt_id!r}")


class BadHeader(ValidationError):
    def __init__(self, found):
        self.found = found
        super().__init__(f"manifest header must be 'utt_id,label,subset_id', got {found!r}")


class BadLabel(ValidationError):
    def __init__(self, line, label):
        self.line = line
        self.label = label
        super().__init__(f"line {line}: label must be 'bonafide' or 'spoof', got {label!r}")


class InconsistentSubsetLabel(ValidationError):
    def __init__(self, subset_id):
        self.subset_id = subset_id
        super().__init__(f"subset {subset_id!r} appears with both labels")


class MissingScore(ValidationError):
    def __init__(self, utt_id):
        self.utt_id = utt_id
        super().__init__(f"manifest trial {utt_id!r} has no score")


class InvalidSpec(ValidationError):
    pass


class UnknownSubset(ValidationError):
    def __init__(self, subset_id):
        self.subset_id = subset_id
        super().__init__(f"unknown subset {subset_id!r}")
