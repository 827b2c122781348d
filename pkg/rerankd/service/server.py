'''
The scoring server: a single-threaded server that accepts one connection at
a time and processes its requests strictly in order until the client closes
the connection.
'''
import socketserver
import threading

from ..config import DEFAULT_HOST, MAX_FRAME_SIZE
from ..logger import get_logger
from .protocol import (FrameTooLargeError, ProtocolError, RequestError,
                       encode_response, pack_frame, parse_request, read_frame)

__all__ = ['StartupError', 'ScoringRequestHandler', 'ScoringServer', 'serve',
           'start_server_thread']

logger = get_logger(__name__)


class StartupError(RuntimeError):
    '''Raised when the server cannot bind its address.'''
    pass


class ScoringRequestHandler(socketserver.StreamRequestHandler):
    '''
    Serves the requests of a single connection.

    Malformed payloads get an error response when their id can be
    recovered, otherwise (and for truncated or oversized frames) the
    connection is dropped.
    '''
    disable_nagle_algorithm = True

    def _send(self, payload):
        self.wfile.write(pack_frame(payload, self.server.max_frame_size))

    def handle(self):
        server = self.server
        while True:
            try:
                payload = read_frame(self.rfile, server.max_frame_size)
            except FrameTooLargeError:
                logger.warning('Frame from %s:%d exceeds %d bytes, dropping '
                               'connection' % (self.client_address[0],
                                               self.client_address[1],
                                               server.max_frame_size))
                self._send(encode_response(None, error='frame too large'))
                return
            except ProtocolError as ex:
                logger.warning('Dropping connection: %s' % ex)
                return
            if payload is None:
                return
            try:
                request_id, question, answer = parse_request(payload)
            except RequestError as ex:
                if ex.request_id is None:
                    logger.warning('Dropping connection: %s' % ex.message)
                    return
                self._send(encode_response(ex.request_id, error=ex.message))
                continue
            try:
                response = encode_response(request_id,
                                           result=server.scorer(question,
                                                                answer))
            except Exception as ex:
                logger.error('Scoring request %d failed: %s' % (request_id,
                                                                ex))
                response = encode_response(request_id,
                                           error='internal error: %s' % ex)
            self._send(response)
            server.requests_served += 1


class ScoringServer(socketserver.TCPServer):
    '''
    `socketserver.TCPServer` serving ``getScore`` requests with ``scorer``.

    Parameters
    ----------
    server_address : tuple
        ``(host, port)``, port 0 picks a free port.
    scorer : callable
        ``scorer(question, answer) -> float``.
    max_frame_size : int, optional
        Frame size cap in bytes.
    '''
    allow_reuse_address = True

    def __init__(self, server_address, scorer, max_frame_size=MAX_FRAME_SIZE):
        self.scorer = scorer
        self.max_frame_size = max_frame_size
        self.requests_served = 0
        try:
            socketserver.TCPServer.__init__(self, server_address,
                                            ScoringRequestHandler)
        except OSError as ex:
            raise StartupError('Cannot listen on %s:%s: %s'
                               % (server_address[0], server_address[1], ex))

    @property
    def endpoint(self):
        host, port = self.server_address[:2]
        return host, port

    def handle_error(self, request, client_address):
        # the connection is lost, the server keeps accepting
        logger.warning('Connection from %s:%s failed' % client_address[:2],
                       exc_info=True)


def serve(scorer, port, host=DEFAULT_HOST, max_frame_size=MAX_FRAME_SIZE):
    '''
    Serve ``scorer`` on ``host:port`` until interrupted.

    Raises
    ------
    StartupError
        If the address cannot be bound.
    '''
    with ScoringServer((host, port), scorer, max_frame_size) as server:
        logger.info('Serving getScore on %s:%d' % server.endpoint)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            logger.info('Shutting down after %d requests'
                        % server.requests_served)


def start_server_thread(scorer, host=DEFAULT_HOST, port=0,
                        max_frame_size=MAX_FRAME_SIZE):
    '''
    Run a `ScoringServer` in a daemon thread.

    Returns
    -------
    server : `ScoringServer`
        Call ``server.shutdown()`` and ``server.server_close()`` to stop it.
    thread : `threading.Thread`
    '''
    server = ScoringServer((host, port), scorer, max_frame_size)
    thread = threading.Thread(target=server.serve_forever,
                              name='rerankd-server', daemon=True)
    thread.start()
    logger.debug('Started server thread on %s:%d' % server.endpoint)
    return server, thread
