import logging
import os
import time
from typing import Optional

import logzero

from configs.settings import BoundSettings, get_settings


def setup_logging(settings: Optional[BoundSettings] = None) -> logging.Logger:
    """Route every module logger through logzero's formatter on stderr.

    When ``log_dir`` is configured, a date-named folder under it receives
    ``app.log`` as well.
    """
    settings = settings or get_settings()
    level = logging.getLevelName(settings.log_level.upper())
    if not isinstance(level, int):
        level = logging.WARNING

    logfile = None
    if settings.log_dir:
        # Create a log folder based on the current date
        log_folder = time.strftime("%Y-%m-%d", time.localtime())
        log_folder_path = os.path.join(settings.log_dir, log_folder)
        os.makedirs(log_folder_path, exist_ok=True)
        logfile = os.path.join(log_folder_path, "app.log")

    return logzero.setup_logger(
        name="drm_bounds",
        logfile=logfile,
        level=level,
        isRootLogger=True,
    )
