"""Exception hierarchy.

`InputError` subclasses signal that a weight matrix violates a mathematical
hypothesis (the CLI maps them to exit code 2).  `InvariantViolation` signals
that a computed object failed one of its own postconditions (exit code 3).
"""


class TorusQuotError(Exception):
    pass


class InputError(TorusQuotError, ValueError):
    hypothesis = "valid weight matrix"


class NotFaithfulError(InputError):
    hypothesis = "faithful action (all invariant factors of the weight matrix equal 1)"

    def __init__(self, message, invariant_factors=()):
        super().__init__(message)
        self.invariant_factors = tuple(invariant_factors)


class NotOneModularError(InputError):
    hypothesis = "1-modular module (every l x (n-1) submatrix has rank l)"


class NotStableError(InputError):
    hypothesis = "stable module (apply the sign normalization first)"


class NotMinimalError(InputError):
    hypothesis = "minimal data (no type-O slice); reduce the input first"


class NoTypeOSliceError(InputError):
    hypothesis = "module with a type-O slice"


class DisconnectedStabilizerError(InputError):
    hypothesis = (
        "connected stabilizer at every case-two step that is followed by further "
        "reduction (reduction over non-connected groups is not supported)"
    )


class InvariantViolation(TorusQuotError, AssertionError):
    pass
