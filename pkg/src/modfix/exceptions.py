"""Exception hierarchy shared by all modules."""


class ModfixError(Exception):
    """Base class for errors raised by modfix."""


class DomainError(ModfixError, ValueError):
    """An input is outside the domain of an operation."""


class NotInNormalizerError(DomainError):
    """Conjugation by a group element leaves the span of an algebra."""


class ActionConstructionError(DomainError):
    """A template does not define a Lie algebra representation."""


class UnsupportedSymmetryError(DomainError):
    """No homomorphism enumeration exists for the requested source algebra.

    Sources are limited to su(2), the circle, the line and tori; anything else
    is refused rather than searched incompletely.
    """


class SchemaError(DomainError):
    """A problem file does not match the schema.

    Attributes
    ----------
    path : str
        Dotted location of the offending field.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class HypothesisError(ModfixError):
    """The gauge and symmetry actions do not commute; solving must not proceed.

    Attributes
    ----------
    report : CommutingReport
    """

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"actions do not commute: group residual {report.group_residual:.3e}, "
            f"algebra residual {report.algebra_residual:.3e}"
        )
