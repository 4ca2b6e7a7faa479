"""Exception types shared across the toolkit."""


class MalformedAnnotationError(ValueError):
    """A label, detection, or label-map file violates its format contract."""


class EvaluationError(RuntimeError):
    """An evaluation cannot produce a defined result (e.g. no class has AP)."""


class ProtocolError(RuntimeError):
    """A detector backend violated the line protocol."""


class BackendStartError(RuntimeError):
    """A detector backend could not be started at all."""
