"""Exception hierarchy shared by every module."""


class CatmodError(Exception):
    pass


class FormulaSyntaxError(CatmodError):
    def __init__(self, message, position=None, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if position is not None:
            detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class SortError(CatmodError):
    pass


class EqualityForbidden(CatmodError):
    pass


class SignatureMismatch(CatmodError):
    pass


class UnboundVariable(CatmodError):
    pass


class BoundsExceeded(CatmodError):
    pass


class TermAlgebraInfinite(CatmodError):
    pass


class NotAReductHom(CatmodError):
    pass


class AxiomViolation(CatmodError):
    def __init__(self, report):
        self.report = list(report)
        lines = "; ".join(str(v) for v in self.report[:5])
        super().__init__(f"{len(self.report)} axiom violation(s): {lines}")


class NotParallel(CatmodError):
    pass


class SignatureNotUnary(CatmodError):
    pass


class ImproperFilter(CatmodError):
    pass


class NoNullObject(CatmodError):
    pass


class NoProductCone(CatmodError):
    pass


class MissingTripleProduct(CatmodError):
    pass


class AxiomFailure(CatmodError):
    pass


class NotAGroup(CatmodError):
    pass
