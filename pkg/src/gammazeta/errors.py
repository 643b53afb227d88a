"""Exception hierarchy shared by every module.

Every domain error derives from :class:`LabError`; the CLI maps those to
exit code 1 and prints the class name on stderr.
"""

from __future__ import annotations


class LabError(Exception):
    """Base class for domain errors."""


# graph file handling
class ParseError(LabError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReferenceError(LabError):  # noqa: A001 - shadows the builtin on purpose
    """An edge refers to a vertex id that was never declared."""


class MissingEmbedding(LabError):
    pass


# zeta
class NotMd2(LabError):
    """Graph is disconnected or has a vertex of degree < 2."""


class CombinatorialBlowup(LabError):
    pass


class IncompleteClasses(LabError):
    pass


class ConvergenceFailure(LabError):
    pass


# leaf geometry
class QuadratureFailure(LabError):
    pass


class NoBracket(LabError):
    pass


class OdeFailure(LabError):
    pass


# interface construction
class OpenContour(LabError):
    pass


class DegenerateIntersection(LabError):
    pass


# surgery
class GluingMismatch(LabError):
    pass


class NonTransverse(LabError):
    pass


# holonomy
class NotClosed(LabError):
    pass


class NotTangent(LabError):
    pass


class BasepointMismatch(LabError):
    pass


# strata
class ShapeMismatch(LabError):
    pass


class NotChainMap(LabError):
    pass


class NotCochainComplex(LabError):
    pass
