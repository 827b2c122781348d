'''
Default values of all tunable settings. Command line flags override these,
the service port can additionally be set through the ``RERANKD_PORT``
environment variable.
'''
import os

# retrieval
DEFAULT_H = 10
DEFAULT_TOP_N = 5
BM25_K1 = 0.9
BM25_B = 0.4

# model
DEFAULT_EMBED_DIM = 50
DEFAULT_FILTER_WIDTH = 5
DEFAULT_NUM_FILTERS = 100
DEFAULT_HIDDEN_SIZE = 204
DEFAULT_SEED = 42
UNKNOWN_TOKEN = '<unk>'
MODEL_FORMAT_VERSION = 1

# service
DEFAULT_HOST = '127.0.0.1'
DEFAULT_PORT = 9090
PORT_ENV_VAR = 'RERANKD_PORT'
MAX_FRAME_SIZE = 1024 * 1024

# benchmarking
DEFAULT_WARMUP = 100
THREAD_ENV_VARS = ('OMP_NUM_THREADS', 'OPENBLAS_NUM_THREADS',
                   'MKL_NUM_THREADS')

# codegen
CONFORMANCE_RTOL = 1e-6


def resolve_port(value=None, environ=None):
    '''
    Determine the service port.

    Parameters
    ----------
    value : int or str, optional
        Explicitly requested port (e.g. from a command line flag). Takes
        precedence over the environment.
    environ : dict, optional
        The environment to consult, defaults to ``os.environ``.

    Returns
    -------
    port : int
    '''
    if environ is None:
        environ = os.environ
    source = 'argument'
    if value is None:
        value = environ.get(PORT_ENV_VAR)
        source = PORT_ENV_VAR
    if value is None or value == '':
        return DEFAULT_PORT
    try:
        port = int(value)
    except (TypeError, ValueError):
        raise ValueError('Invalid port %r (from %s)' % (value, source))
    if not 0 <= port <= 65535:
        raise ValueError('Port %d (from %s) is out of range' % (port, source))
    return port


def parse_endpoint(endpoint, default_host=DEFAULT_HOST):
    '''
    Split a ``host:port`` string. A bare port uses ``default_host``.
    '''
    if isinstance(endpoint, tuple):
        return endpoint[0], int(endpoint[1])
    host, sep, port = str(endpoint).rpartition(':')
    if not sep:
        host, port = default_host, endpoint
    try:
        return host or default_host, int(port)
    except ValueError:
        raise ValueError('Invalid endpoint %r, expected host:port' % endpoint)
