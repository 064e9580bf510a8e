"""Exception hierarchy shared by all modules."""


class LinctxError(Exception):
    pass


class ParseError(LinctxError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


# typing

class TypeCheckError(LinctxError):
    pass


class UnboundVariable(TypeCheckError):
    pass


class LinearityViolation(TypeCheckError):
    pass


class TypeMismatch(TypeCheckError):
    pass


class BranchConsumptionMismatch(TypeCheckError):
    pass


class HoleUnused(TypeCheckError):
    pass


class ExtraFreeVariable(TypeCheckError):
    pass


# reduction

class OpenTermError(LinctxError):
    pass


class StuckNonCanonical(LinctxError):
    """A closed, irreducible term that is not a value: the semantics is broken."""


# transitions and contexts

class NotIrreducible(LinctxError):
    pass


class TraceNotInSet(LinctxError):
    pass


class NotEvaluationContext(LinctxError):
    pass


class UnclassifiableReduction(LinctxError):
    pass


class TraceNotTaken(LinctxError):
    pass


class MalformedTrace(LinctxError):
    pass


# generation and checks

class Unconstructible(LinctxError):
    pass


class UnknownCheck(LinctxError):
    pass
