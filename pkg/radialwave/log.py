"""
Handlers for the ``radialwave`` logger hierarchy. Library modules only log
through ``logging.getLogger(__name__)``; the command line attaches handlers
here.
"""

import logging

_FORMAT = '[%(asctime)s UTC] [%(name)s] [%(levelname)s] %(message)s'

logger = logging.getLogger('radialwave')
logger.setLevel(logging.DEBUG)
logger.propagate = False
logger.addHandler(logging.NullHandler())

_console_handler = None
_file_handler = None

def _formatter():
    formatter = logging.Formatter(_FORMAT)
    import time
    formatter.converter = time.gmtime
    return formatter

def add_console_handler(level=logging.WARNING):
    # pylint: disable=global-statement
    global _console_handler
    if _console_handler is None:
        _console_handler = logging.StreamHandler()
        _console_handler.setFormatter(_formatter())
        logger.addHandler(_console_handler)
    _console_handler.setLevel(level)

def set_console_log_level(level):
    if _console_handler is None:
        add_console_handler(level)
    else:
        _console_handler.setLevel(level)

def enable_file_logging(filename, level=logging.WARNING):
    # pylint: disable=global-statement
    global _file_handler
    if _file_handler is not None:
        logger.removeHandler(_file_handler)
        _file_handler.close()
    _file_handler = logging.FileHandler(filename)
    _file_handler.setFormatter(_formatter())
    _file_handler.setLevel(level)
    logger.addHandler(_file_handler)

def set_filehandler_log_level(level):
    if _file_handler is None:
        raise ValueError('file logging is not enabled')
    _file_handler.setLevel(level)

def remove_handlers():
    # pylint: disable=global-statement
    global _console_handler, _file_handler
    for handler in (_console_handler, _file_handler):
        if handler is not None:
            logger.removeHandler(handler)
            handler.close()
    _console_handler = None
    _file_handler = None

def level_named(name):
    """
    Logging level for a name such as ``INFO``.
    """
    level = getattr(logging, str(name).upper(), None)
    if not isinstance(level, int):
        raise ValueError('unknown log level %s' % name)
    return level
