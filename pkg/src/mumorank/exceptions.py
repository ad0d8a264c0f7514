"""Exception hierarchy shared by all mumorank modules."""


class MuMoRankError(Exception):
    """Base class for every error raised by this package."""


class HypergraphError(MuMoRankError, ValueError):
    """The hypergraph violates a structural invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnknownNodeError(MuMoRankError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown node"


class DegenerateSetError(MuMoRankError, ValueError):
    """A preferred set is empty or carries no degree mass."""


class ConvergenceError(MuMoRankError, RuntimeError):
    def __init__(self, message, n_iter, residual):
        super().__init__(f"{message} (iterations={n_iter}, residual={residual:.3e})")
        self.n_iter = n_iter
        self.residual = residual


class InputFormatError(MuMoRankError, ValueError):
    """Malformed CSV input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(MuMoRankError, ValueError):
    pass
