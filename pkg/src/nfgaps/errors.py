"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called with inputs that violate its contract.

    The message states the violated precondition; the CLI prints it
    verbatim and exits with status 2.
    """


class SingularPointError(ValueError):
    """Evaluation was requested exactly at a non-differentiable point."""
