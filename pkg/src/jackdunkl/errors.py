"""Exception taxonomy shared across the package."""


class JackDunklError(Exception):
    """Base class for all package errors."""


class ParamError(JackDunklError, ValueError):
    """Invalid parameter object (bad n, non-rational k, out-of-range value)."""


class CellError(JackDunklError, ValueError):
    """Diagram cell (i, j) outside the composition."""


class EvalError(JackDunklError, ValueError):
    """Polynomial evaluation impossible (zero coordinate with negative
    exponent, missing parameter value for a symbolic coefficient)."""


class PoleError(JackDunklError, ArithmeticError):
    """Argument hits (or is numerically indistinguishable from) a pole."""


class DomainError(JackDunklError, ValueError):
    """Arguments outside the guaranteed convergence region."""


class ConvergenceError(JackDunklError, RuntimeError):
    """Requested tolerance not certifiable within the configured budget."""


class CacheError(JackDunklError, RuntimeError):
    """Table cache file missing, corrupt, or inconsistent with its header."""
