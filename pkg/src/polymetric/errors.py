"""Exception hierarchy.

Two families matter to callers (and to the CLI's exit codes):
``ConfigurationError`` for malformed inputs caught before any numerics run,
and ``MathematicalError`` for failures detected by the numerics themselves.
"""

from __future__ import annotations


class PolymetricError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(PolymetricError, ValueError):
    """Inputs are structurally invalid (empty parts, bad weights, ...)."""


class DimensionError(ConfigurationError):
    def __init__(self, expected: int, actual: int, what: str = "point"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} has dimension {actual}, expected {expected}")


class MathematicalError(PolymetricError):
    """A numerical check failed: axiom violation, non-contraction, divergence."""


class AxiomViolationError(MathematicalError):
    def __init__(self, report):
        self.report = report
        super().__init__(
            "metric axioms violated: "
            f"definiteness={report.definiteness_failures}, "
            f"symmetry={report.symmetry_failures}, "
            f"triangle={report.triangle_failures}"
        )


class MapUndefinedError(MathematicalError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"map undefined here: {list(point)} lies in no guard component")


class NotAContractionError(MathematicalError):
    def __init__(self, estimate):
        self.estimate = estimate
        super().__init__(
            f"not a contraction: alpha_hat={estimate.alpha_hat:.6g}, "
            f"violations={estimate.violations}"
        )


class NoConvergenceError(MathematicalError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = [
            f"seed component {d.seed_component}: {d.iterations} iterations, last step {d.last_step:.3g}"
            for d in self.diagnostics
        ]
        super().__init__("no convergence: " + "; ".join(lines))


class ResidualIncomparableError(MathematicalError):
    def __init__(self, point, image):
        self.point = point
        self.image = image
        super().__init__(
            f"residual incomparable: {list(point)} and its image {list(image)} share no component"
        )


class NestingError(MathematicalError):
    """Disk sequence is not nested, or its radii do not strictly decrease."""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(message)


class PreconditionError(MathematicalError):
    """An input sequence does not satisfy what an analysis requires of it."""

    def __init__(self, message: str, which: str):
        self.which = which
        super().__init__(message)
