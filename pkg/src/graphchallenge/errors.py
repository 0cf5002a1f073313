"""Exception hierarchy shared by the kernels, readers and CLI."""


class GraphChallengeError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(GraphChallengeError, ValueError):
    """An operation was called with arguments outside its precondition."""


class MalformedIncidenceError(ContractViolation):
    """A matrix used as an unoriented incidence has a row without exactly two 1s."""


class InvalidAdjacencyError(ContractViolation):
    """A kernel detected an adjacency that is not symmetric, binary and loop-free."""


class ParseError(GraphChallengeError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
