"""Exception types shared by the library and the command line."""


class ArtifactError(Exception):
    """Base class for domain errors (mapped to exit code 65 by the CLI)."""


class InvalidInput(ArtifactError, ValueError):
    pass


class WordParseError(InvalidInput):
    """Malformed word text; the CLI treats this as a usage error."""


class BudgetExceeded(ArtifactError):
    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class UnsupportedVariant(ArtifactError):
    pass


class ContractError(ArtifactError):
    pass
