"""Exception hierarchy shared by every module of the package."""


class OrdpermError(Exception):
    """Base class for all errors raised by ordperm."""


class NonMonotonicInput(OrdpermError, ValueError):
    pass


class NotInvariant(OrdpermError, ValueError):
    pass


class ModelMismatch(OrdpermError, ValueError):
    pass


class IdenticalPoints(OrdpermError, ValueError):
    pass


class NotInStabilizer(OrdpermError, ValueError):
    pass


class OverlappingBlocks(OrdpermError, ValueError):
    pass


class NotInQ(OrdpermError, ValueError):
    pass


class SupportsNotDisjoint(OrdpermError, ValueError):
    pass


class NoSupportingInterval(OrdpermError, ValueError):
    pass


class DepthExhausted(OrdpermError):
    """No strictly smaller block level is available for the construction."""


class LocallyAbelian(OrdpermError):
    """The bottom component is abelian, so bump constructions are unavailable."""


class IdentityBase(OrdpermError, ValueError):
    pass


class MalformedCert(OrdpermError, ValueError):
    pass


class UnknownSuite(OrdpermError, ValueError):
    pass


class DepthOutOfRange(OrdpermError, ValueError):
    pass


class ParseError(OrdpermError, ValueError):
    """Text could not be parsed; carries a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
