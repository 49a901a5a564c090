"""Exception types shared across the package."""


class StateError(ValueError):
    """Invalid quantum-state data or an operation applied to an unsuitable state."""


class PartitionError(ValueError):
    """Malformed partition text or an ill-posed partition operation."""


class GuardError(RuntimeError):
    """A size guard was exceeded (label count or Hilbert-space dimension)."""
