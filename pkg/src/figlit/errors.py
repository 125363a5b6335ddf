"""Exception types. Everything here signals bad input, not a bug."""


class FiglitError(ValueError):
    pass


class LexiconFormatError(FiglitError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class GlossEmptyAfterCleaning(FiglitError):
    pass


class EmptyDictionaryError(FiglitError):
    pass


class ScoresFormatError(FiglitError):
    pass


class CorpusFormatError(FiglitError):
    pass


class LiteralizationError(FiglitError):
    pass


class EvaluationError(FiglitError):
    pass
