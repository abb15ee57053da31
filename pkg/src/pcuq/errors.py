"""Exception types shared across the toolkit."""


class PcuqError(Exception):
    pass


class DomainError(PcuqError):
    """A point lies outside the parameter box."""


class ShapeError(PcuqError):
    """Array dimensions do not match the expected layout."""


class SizeError(PcuqError):
    """A requested object would exceed the supported size."""


class ConfigError(PcuqError):
    """Invalid or inconsistent run configuration."""


class StaleCacheError(PcuqError):
    """A cached node-solution file does not match the current configuration."""


class DegenerateColumnError(PcuqError):
    """A coefficient column is identically zero, so a relative error is undefined."""


class SolverError(PcuqError):
    """Base class for model-evaluation failures."""


class MeshError(SolverError):
    pass


class DivergenceError(SolverError):
    """Non-finite residual during assembly."""

    def __init__(self, msg, row=None):
        super().__init__(msg)
        self.row = row


class NewtonError(SolverError):
    """Newton iteration failed to converge within the iteration budget."""

    def __init__(self, msg, time=None, history=None):
        super().__init__(msg)
        self.time = time
        self.history = list(history) if history is not None else []


class NodeSolveError(SolverError):
    """Model evaluation failed at one cubature node."""

    def __init__(self, msg, node_index, point):
        super().__init__(msg)
        self.node_index = node_index
        self.point = point
