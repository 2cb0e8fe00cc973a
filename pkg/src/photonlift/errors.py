"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Array or occupation has the wrong shape, length, or photon total."""


class ValidationError(ValueError):
    """Input violates a numerical precondition (e.g. a matrix is not unitary)."""


class CapacityError(RuntimeError):
    """Requested computation exceeds a configured resource guard."""


class ConvergenceError(RuntimeError):
    """An optimizer failed to converge on every restart."""
