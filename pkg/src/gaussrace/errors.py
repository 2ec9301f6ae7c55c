class ConfigError(ValueError):
    """Invalid run configuration or malformed input file."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed (e.g. a decomposition did not verify)."""
