"""Exception types raised by the analytics engine.

Grouping mirrors how callers handle failures: ValidationFailure for bad
inputs (CSV rows, query parameters), NotFound for missing entities,
StateError for operations applied to data in the wrong form.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class ValidationFailure(EngineError):
    """Input rejected by a validation rule."""


class NotFound(EngineError):
    """A referenced entity does not exist."""


class StateError(EngineError):
    """Operation applied to data in the wrong state."""


# -- ingestion ---------------------------------------------------------------

class MalformedCsv(ValidationFailure):
    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class UnknownSymptom(ValidationFailure):
    pass


class RatingOutOfRange(ValidationFailure):
    pass


class UnknownTimepointLabel(ValidationFailure):
    pass


class DuplicateCell(ValidationFailure):
    pass


class AlreadyImputed(StateError):
    pass


class UnimputedDataset(StateError):
    pass


# -- rule mining -------------------------------------------------------------

class ImputedInputRejected(StateError):
    pass


class EmptyTransactionSet(ValidationFailure):
    pass


class ZeroMarginalSupport(ValidationFailure):
    pass


# -- clustering --------------------------------------------------------------

class EmptySymptomSubset(ValidationFailure):
    pass


class NoEligiblePatients(ValidationFailure):
    pass


class TooFewPatients(ValidationFailure):
    pass


# -- trajectory geometry -----------------------------------------------------

class DeltaOutOfRange(ValidationFailure):
    pass


class NonAdjacentTimepoints(ValidationFailure):
    pass


class UnimputedSeries(StateError):
    pass


# -- cohort statistics -------------------------------------------------------

class TooFewReporters(ValidationFailure):
    pass


class NoReporters(ValidationFailure):
    pass


# -- rule graph --------------------------------------------------------------

class EmptyRuleList(ValidationFailure):
    pass


# -- storage / API -----------------------------------------------------------

class UnknownDataset(NotFound):
    pass


class UnknownPatient(NotFound):
    pass
