"""Exception hierarchy shared across the package."""


class InputError(ValueError):
    """Malformed complex, multivector field, block family or input file."""


class FenceError(InputError):
    """Adjacent fields of a parameterized sequence are not comparable."""


class EngineError(RuntimeError):
    """An internal invariant of the barcode engine was violated."""
