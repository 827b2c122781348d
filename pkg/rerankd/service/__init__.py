"""
The ``getScore`` scoring service: wire protocol, server and client.
"""
from .protocol import (METHOD_GET_SCORE, ProtocolError, FrameTooLargeError,
                       TransportError, RemoteError, RequestError,
                       encode_request, encode_response, pack_frame,
                       read_frame, parse_request, parse_response)
from .server import StartupError, ScoringServer, serve, start_server_thread
from .client import ScoringClient, client_get_score

__all__ = ['METHOD_GET_SCORE', 'ProtocolError', 'FrameTooLargeError',
           'TransportError', 'RemoteError', 'RequestError', 'encode_request',
           'encode_response', 'pack_frame', 'read_frame', 'parse_request',
           'parse_response', 'StartupError', 'ScoringServer', 'serve',
           'start_server_thread', 'ScoringClient', 'client_get_score']
