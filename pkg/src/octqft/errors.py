"""Exception hierarchy shared by all modules."""


class OCTQFTError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class ShapeMismatch(OCTQFTError, ValueError):
    pass


class SingularPairing(OCTQFTError, ValueError):
    pass


class NotPositiveDefinite(OCTQFTError, ValueError):
    pass


class EmptyBraneSet(OCTQFTError, ValueError):
    pass


class UnknownBrane(OCTQFTError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class WordTypeError(OCTQFTError, TypeError):
    """A layer slot does not match the boundary object it is applied to."""

    def __init__(self, layer, slot, expected, found):
        self.layer = layer
        self.slot = slot
        self.expected = expected
        self.found = found
        super().__init__(
            f"layer {layer}, slot {slot}: expected {expected}, found {found}"
        )


class BoundaryMismatch(OCTQFTError, ValueError):
    pass


class InconsistentOracle(OCTQFTError, ValueError):
    pass


class NonUnitTwist(OCTQFTError, ValueError):
    pass


class OpenCycle(OCTQFTError, ValueError):
    pass


class NotAFaceCycle(OCTQFTError, ValueError):
    pass


class InvalidParams(OCTQFTError, ValueError):
    pass


class SchemaError(OCTQFTError, ValueError):
    """Malformed input document; ``path`` names the offending JSON location."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
