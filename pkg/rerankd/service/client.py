'''
Client of the scoring service. One persistent connection, one outstanding
request at a time.
'''
import itertools
import socket

from ..config import MAX_FRAME_SIZE, parse_endpoint
from ..logger import get_logger
from .protocol import (ProtocolError, RemoteError, TransportError,
                       encode_request, pack_frame, parse_response, read_frame)

__all__ = ['ScoringClient', 'client_get_score']

logger = get_logger(__name__)


class ScoringClient(object):
    '''
    Calls ``getScore`` on a remote server like an ordinary function.

    Parameters
    ----------
    endpoint : str or tuple
        ``"host:port"`` or ``(host, port)``.
    timeout : float, optional
        Socket timeout in seconds, ``None`` (the default) blocks.

    Examples
    --------
    >>> with ScoringClient('127.0.0.1:9090') as client:  # doctest: +SKIP
    ...     client.get_score('what color is the sky?', 'the sky is blue.')
    '''
    def __init__(self, endpoint, timeout=None,
                 max_frame_size=MAX_FRAME_SIZE):
        self.address = parse_endpoint(endpoint)
        self.timeout = timeout
        self.max_frame_size = max_frame_size
        self._ids = itertools.count(1)
        self._sock = None
        self._rfile = None

    def connect(self):
        if self._sock is not None:
            return self
        try:
            sock = socket.create_connection(self.address, timeout=self.timeout)
        except OSError as ex:
            raise TransportError('Cannot connect to %s:%d: %s'
                                 % (self.address[0], self.address[1], ex))
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        self._sock = sock
        self._rfile = sock.makefile('rb')
        return self

    def close(self):
        if self._rfile is not None:
            self._rfile.close()
            self._rfile = None
        if self._sock is not None:
            self._sock.close()
            self._sock = None

    def __enter__(self):
        return self.connect()

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()

    def get_score(self, question, answer):
        '''
        Score ``answer`` for ``question`` on the server.

        Raises
        ------
        TransportError
            If the connection fails or is closed by the server.
        RemoteError
            If the server answers with an error.
        ProtocolError
            If the response is malformed or has the wrong id.
        '''
        self.connect()
        request_id = next(self._ids)
        frame = pack_frame(encode_request(request_id, question, answer),
                           self.max_frame_size)
        try:
            self._sock.sendall(frame)
            payload = read_frame(self._rfile, self.max_frame_size)
        except OSError as ex:
            self.close()
            raise TransportError('Connection to %s:%d failed: %s'
                                 % (self.address[0], self.address[1], ex))
        except ProtocolError:
            self.close()
            raise
        if payload is None:
            self.close()
            raise TransportError('Connection closed by %s:%d'
                                 % self.address)
        response_id, result, error = parse_response(payload)
        if response_id != request_id:
            self.close()
            raise ProtocolError('Response id %r does not match request id %d'
                                % (response_id, request_id))
        if error is not None:
            raise RemoteError(error)
        return result


def client_get_score(endpoint, question, answer, timeout=None):
    '''
    Score a single pair over a fresh connection. Use `ScoringClient` to
    send many requests over one connection.
    '''
    with ScoringClient(endpoint, timeout=timeout) as client:
        return client.get_score(question, answer)
