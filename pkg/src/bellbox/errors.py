"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class IntegrityError(RuntimeError):
    """A numerical integrity check failed (spectrum or transport consistency).

    Raised when a computed quantity violates a structural guarantee of the
    Bell process, e.g. the dominant eigenvalue of a cumulative transition
    matrix drifting away from 1, or the master-equation probabilities
    losing track of the Schroedinger probabilities.
    """
