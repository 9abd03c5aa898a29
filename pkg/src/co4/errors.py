"""Exception hierarchy shared by all stages."""


class Co4Error(Exception):
    """Base class for user-facing errors."""


class SourceError(Co4Error):
    """An error tied to a location in a program file."""

    def __init__(self, message, loc=None, path=None):
        super().__init__(message)
        self.message = message
        self.loc = loc
        self.path = path

    def __str__(self):
        where = self.path or "<input>"
        if self.loc is not None:
            return f"{where}:{self.loc[0]}:{self.loc[1]}: {self.message}"
        return f"{where}: {self.message}"


class ParseError(SourceError):
    pass


class ScopeError(SourceError):
    pass


class PatternError(SourceError):
    pass


class TypeCheckError(SourceError):
    pass


class InstantiationError(SourceError):
    pass


class ValueSyntaxError(Co4Error):
    pass


class ValueTypeError(Co4Error):
    pass


class AllocatorError(Co4Error):
    pass


class EncodeError(Co4Error):
    pass


class EvaluationError(Co4Error):
    """Internal evaluation failure, e.g. an unbound variable."""


class StepLimitExceeded(Co4Error):
    """The concrete interpreter ran out of reduction steps."""


class CompilationLimitExceeded(Co4Error):
    """Abstract evaluation built more formula nodes than allowed."""


class SolverError(Co4Error):
    def __init__(self, message, output=""):
        super().__init__(message)
        self.output = output


class PipelineError(Co4Error):
    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
