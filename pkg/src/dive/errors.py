"""Exception hierarchy shared by all engine layers.

Every error carries a stable ``code`` string that survives onto the wire
(CLI ``--json`` output and HTTP error bodies use it verbatim).
"""

from __future__ import annotations


class DiveError(Exception):
    """Base class for all engine errors."""

    code = "Error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


# --- document / model -------------------------------------------------------

class DuplicateIdError(DiveError):
    code = "DuplicateId"


class DuplicateEdgeError(DiveError):
    code = "DuplicateEdge"


class KindFieldMismatchError(DiveError):
    code = "KindFieldMismatch"


class UnknownEndpointError(DiveError):
    code = "UnknownEndpoint"


class KindConstraintError(DiveError):
    code = "KindConstraintViolation"


class CycleIntroducedError(DiveError):
    """Adding an edge closed a cycle in the derivation subgraph."""

    code = "CycleIntroduced"

    def __init__(self, message: str, cycle: tuple[str, ...]):
        super().__init__(message)
        self.cycle = cycle


class UnknownReferenceError(DiveError):
    code = "UnknownReference"


class DuplicateAppraisalError(DiveError):
    code = "DuplicateAppraisal"


class OutOfRangeError(DiveError):
    code = "RangeError"


# --- ingest ------------------------------------------------------------------

class DocumentSyntaxError(DiveError):
    """Input is not well-formed JSON; carries the offending position."""

    code = "SyntaxError"

    def __init__(self, message: str, line: int = 0, column: int = 0, pos: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column
        self.pos = pos


class SchemaError(DiveError):
    """JSON is well-formed but does not match the dive/1 layout."""

    code = "SchemaError"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationFailedError(DiveError):
    """Document parsed but violates model invariants; carries them all."""

    code = "ValidationFailed"

    def __init__(self, violations):
        lines = "; ".join(v.message for v in violations[:3])
        more = f" (+{len(violations) - 3} more)" if len(violations) > 3 else ""
        super().__init__(f"document is invalid: {lines}{more}")
        self.violations = tuple(violations)


# --- tms / catalog -----------------------------------------------------------

class UnknownNodeError(DiveError):
    code = "UnknownNode"


class UnknownElementError(DiveError):
    code = "UnknownElement"


class MalformedFactorError(DiveError):
    code = "MalformedFactor"


class CyclicProvenanceError(DiveError):
    code = "CyclicProvenance"

    def __init__(self, message: str, cycle: tuple[str, ...] = ()):
        super().__init__(message)
        self.cycle = cycle


class LabelExplosionError(DiveError):
    code = "LabelExplosion"

    def __init__(self, node: str, count: int, cap: int):
        super().__init__(
            f"environment count for {node!r} exceeded the cap ({count} > {cap})"
        )
        self.node = node
        self.count = count
        self.cap = cap


# --- propagation -------------------------------------------------------------

class PreconditionViolatedError(DiveError):
    code = "PreconditionViolated"


class InconsistentStateError(DiveError):
    code = "InconsistentState"
