'''
Logging helpers. All loggers of the package live below the ``rerankd``
logger; library code only creates loggers, the command line tool installs
the handler.
'''
import logging
import sys

__all__ = ['get_logger', 'configure_logging']

ROOT_LOGGER_NAME = 'rerankd'
LOG_FORMAT = '%(levelname)-8s %(name)s: %(message)s'


def get_logger(module_name='rerankd'):
    '''
    Get a logger for a module of the package.

    Parameters
    ----------
    module_name : str, optional
        The name of the module, usually ``__name__``. Names outside of the
        ``rerankd`` hierarchy are placed below it.

    Returns
    -------
    logger : `logging.Logger`
    '''
    if (module_name != ROOT_LOGGER_NAME and
            not module_name.startswith(ROOT_LOGGER_NAME + '.')):
        module_name = '%s.%s' % (ROOT_LOGGER_NAME, module_name)
    return logging.getLogger(module_name)


def configure_logging(verbosity=0, stream=None):
    '''
    Install a single handler on the package logger.

    Parameters
    ----------
    verbosity : int, optional
        ``0`` logs warnings and errors, ``1`` adds info messages, ``2`` or
        more adds debug messages, negative values only log errors.
    stream : file-like, optional
        Where to write log messages, defaults to ``sys.stderr``.
    '''
    if verbosity < 0:
        level = logging.ERROR
    elif verbosity == 0:
        level = logging.WARNING
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.DEBUG
    root = logging.getLogger(ROOT_LOGGER_NAME)
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(stream if stream is not None
                                    else sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
    return root
