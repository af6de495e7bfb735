"""Error types that map to distinct CLI exit codes."""


class ResourceLimitError(RuntimeError):
    """A dynamic-programming table grew past the configured cap."""


class OracleCapError(RuntimeError):
    """A brute-force enumeration request exceeds the configured cap."""
