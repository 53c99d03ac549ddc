"""Exception taxonomy shared by every module.

The CLI maps these onto its exit codes: invalid/degenerate/unsupported
input -> 2, verification or construction failure -> 3, resource guard -> 4.
"""


class EhrhartForgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(EhrhartForgeError, ValueError):
    """A precondition on user-supplied data was violated."""


class DegenerateConstructionError(InvalidInputError):
    """A geometric construction collapsed (e.g. empty shared x-range)."""


class UnsupportedInputError(InvalidInputError):
    """The input is well-formed but outside what the algorithm can decide."""


class ResourceLimitError(EhrhartForgeError):
    """An enumeration would exceed the configured cell guard."""


class VerificationError(EhrhartForgeError):
    """A self-check or contract verification failed.

    Carries an optional ``detail`` payload (JSON-serializable) describing
    the first counterexample found.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail
