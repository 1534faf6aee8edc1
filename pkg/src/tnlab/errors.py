"""Exception types raised across tnlab."""


class TNError(Exception):
    """Base class for all tnlab errors."""


class InvalidSupport(TNError, ValueError):
    pass


class OverlappingSupports(TNError, ValueError):
    pass


class BlockSizeMismatch(TNError, ValueError):
    pass


class DimensionError(TNError, ValueError):
    pass


class ClosureError(TNError, ValueError):
    """Raised when a validated group fails closure, identity or inverse."""


class NonFiniteInput(TNError, ValueError):
    pass


class InvalidTemplate(TNError, ValueError):
    pass


class EmptyNode(TNError, ValueError):
    pass


class OrbitMismatch(TNError, ValueError):
    """The observed sequence is not the orbit of its first entry."""


class UnsupportedTransform(TNError, ValueError):
    """Transform lies outside the class a certification is defined on."""


class ConfigError(TNError, ValueError):
    """Experiment configuration failed validation.

    ``path`` names the offending field (dotted), ``reason`` what is wrong.
    """

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")
