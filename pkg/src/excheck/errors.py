"""Exception types separating bad inputs from broken internal guarantees."""


class InputError(ValueError):
    """Invalid instance data, malformed arguments, or a violated precondition."""


class EmptySliceError(InputError):
    """A requested restriction has an empty effective domain."""


class InternalCheckError(RuntimeError):
    """A relation that must hold by construction failed; this is a bug."""
