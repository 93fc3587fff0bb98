"""Exception hierarchy.

Every error carries a stable ``code`` so the command line front end can map
it to an exit status without inspecting messages.
"""

from __future__ import annotations


class UnifiedProductsError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"
    exit_status = 2


class InputError(UnifiedProductsError):
    """Malformed or inconsistent user-supplied data."""

    code = "input-error"
    exit_status = 2


class OutOfRangeEntry(InputError):
    code = "out-of-range-entry"


class ParseError(InputError):
    code = "parse-error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class InvalidGroup(InputError):
    code = "invalid-group"

    def __init__(self, report):
        self.report = report
        super().__init__(f"table is not a group: {report.summary()}")


class NotASubgroup(InputError):
    code = "not-a-subgroup"


class NotATransversal(InputError):
    code = "not-a-transversal"


class NotNormal(InputError):
    code = "not-normal"


class NotNormalized(InputError):
    """An extending datum violates a normalization condition."""

    code = "not-normalized"


class NotExactFactorization(InputError):
    code = "not-exact-factorization"


class PreconditionFailed(InputError):
    code = "precondition-failed"


class BudgetExhausted(UnifiedProductsError):
    """A bounded search was truncated. This is never a negative answer."""

    code = "budget-exhausted"
    exit_status = 3

    def __init__(self, message: str, explored: int = 0, partial=None, checkpoint=None):
        self.explored = explored
        self.partial = partial
        self.checkpoint = checkpoint
        super().__init__(message)


class Violation(UnifiedProductsError):
    """A definite negative: some law fails, with a witness attached."""

    code = "violation"
    exit_status = 1


class AxiomViolation(Violation):
    code = "axiom-violation"

    def __init__(self, report):
        self.report = report
        super().__init__(f"extending datum is not a group extending structure: {report.summary()}")


class CrossedAxiomViolation(Violation):
    code = "crossed-axiom-violation"

    def __init__(self, report):
        self.report = report
        super().__init__(f"not a crossed system: {report.summary()}")


class MatchedPairViolation(Violation):
    code = "matched-pair-violation"

    def __init__(self, report):
        self.report = report
        super().__init__(f"not a matched pair: {report.summary()}")


class TwistedViolation(Violation):
    code = "twisted-violation"

    def __init__(self, report):
        self.report = report
        super().__init__(f"twisted product data incompatible: {report.summary()}")


class TransitionIncompatible(Violation):
    code = "transition-incompatible"

    def __init__(self, report):
        self.report = report
        super().__init__(f"transition map data incompatible: {report.summary()}")


class NotAnObjectC(Violation):
    code = "not-an-object-c"

    def __init__(self, report):
        self.report = report
        super().__init__(f"candidate is not an object of the initial category: {report.summary()}")


class NotAnObjectD(Violation):
    code = "not-an-object-d"

    def __init__(self, report):
        self.report = report
        super().__init__(f"candidate is not an object of the final category: {report.summary()}")


class InternalInconsistency(UnifiedProductsError):
    """A guaranteed property failed to verify. Indicates a bug."""

    code = "internal-inconsistency"
    exit_status = 4
