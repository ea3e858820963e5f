"""Error types shared across the package."""


class GammapermError(Exception):
    """Base class for structured failures raised by the engine."""


class ClosureBoundExceeded(GammapermError):
    """Congruence closure did not stabilize within the configured bound."""


class ArityMismatch(GammapermError):
    """A multimorphism or transformation was used at the wrong arity."""


class LevelOutOfRange(GammapermError):
    """A level beyond the truncation bound was requested."""


class TruncationTooSmall(GammapermError):
    """The requested output cannot be represented within the input truncations."""


class UnknownSuite(GammapermError):
    """run_suite was asked for a suite name that is not registered."""


class IllFormedDiagram(GammapermError):
    """A diagram handed to check_diagram is structurally broken."""


class NaturalityFailure(GammapermError):
    """A naturality square failed; the witness records the offending input."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CoherenceFailure(GammapermError):
    """A coherence diagram failed on a concrete instance."""

    def __init__(self, diagram, instance, detail=""):
        self.diagram = diagram
        self.instance = instance
        msg = "%s fails at %r" % (diagram, instance)
        if detail:
            msg += ": " + detail
        super().__init__(msg)
