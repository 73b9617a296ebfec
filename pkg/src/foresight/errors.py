"""Exception types shared across the library.

Every error raised by foresight derives from :class:`ForesightError`, so
callers can catch one type at an API boundary.  The CLI maps these onto its
exit-status contract (0 ok, 1 validation failure, 2 parse/I-O failure).
"""


class ForesightError(Exception):
    """Base class for all foresight errors."""


class SchemaError(ForesightError, ValueError):
    """A characteristic schema or event space violates its invariants."""


class EmptySubsetError(ForesightError, ValueError):
    """An operation that needs a nonempty subset received the empty one."""


class NegativeMassError(ForesightError, ValueError):
    """A mass or probability entry is negative."""


class EmptyFocalSetError(ForesightError, ValueError):
    """A mass entry was keyed by the empty subset."""


class NotNormalizedError(ForesightError, ValueError):
    """Masses or probabilities do not sum to one within tolerance."""


class LatticeTooLargeError(ForesightError, ValueError):
    """The dense lattice path was requested above the atom-count cap."""


class ProfileLengthMismatchError(ForesightError, ValueError):
    """A characteristic profile has the wrong number of values."""


class UnknownAtomError(ForesightError, LookupError):
    """An atom id does not exist in the event space."""


class AllMassUnforeseeableError(ForesightError, ValueError):
    """Conditioning is impossible: the whole assessment sits on no-match."""


class MissingUtilityError(ForesightError, LookupError):
    """A (decision, atom) utility required by an evaluator is absent."""


class KindMismatchError(ForesightError, TypeError):
    """A commonality vector of the wrong kind was supplied."""


class SpaceTooLargeError(ForesightError, ValueError):
    """A brute-force oracle was invoked above its atom-count cap."""


class DocumentError(ForesightError, ValueError):
    """A problem document failed to parse or validate."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class NoReferenceSweepWarning(UserWarning):
    """No atom matches the reference-except-one pattern for a characteristic.

    The characteristic's importance is reported as zero; this is a
    diagnostic, not a failure.
    """
