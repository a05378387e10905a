"""Cross-lingual topic modeling with a shared global context space."""

__version__ = "0.1.0"

from .errors import ConfigError, GloctmError, IngestionError

__all__ = ["ConfigError", "GloctmError", "IngestionError", "__version__"]
