"""Exception types shared across the package."""


class GloctmError(Exception):
    """Base class for all runtime failures raised by this package."""


class ConfigError(GloctmError):
    """Invalid configuration or invalid input files discovered before any work runs."""


class IngestionError(GloctmError):
    """Malformed corpus, label, embedding, or reference data."""
