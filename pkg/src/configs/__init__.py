from .logging_config import setup_logging
from .settings import BoundSettings, configure, get_settings

__all__ = ["BoundSettings", "configure", "get_settings", "setup_logging"]
