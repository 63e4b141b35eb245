"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed documents, unknown relations, arity mismatches, bad arguments."""


class DisconnectedTemplateError(ValueError):
    """An operation that requires a connected distance graph got a disconnected one."""


class CapExceededError(RuntimeError):
    """A bounded search refused to run because its size estimate is over the cap."""


class InternalInvariantError(RuntimeError):
    """An internal consistency contract was violated; this indicates a bug."""
