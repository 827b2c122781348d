'''
The wire protocol of the scoring service.

Every message is a frame: a 4 byte big-endian unsigned length followed by
exactly that many bytes of UTF-8 encoded JSON. Frames are capped at 1 MiB.

Requests and responses have a canonical field order and no whitespace::

    {"id":1,"method":"getScore","params":{"question":"...","answer":"..."}}
    {"id":1,"result":0.73}
    {"id":1,"error":"unknown method"}

Floats are written with their shortest round-trip representation, so a
score survives the wire bit-exactly.
'''
import json
import struct
from collections import OrderedDict

from ..config import MAX_FRAME_SIZE

__all__ = ['METHOD_GET_SCORE', 'HEADER', 'ProtocolError',
           'FrameTooLargeError', 'TransportError', 'RemoteError',
           'RequestError', 'encode_payload', 'pack_frame', 'read_frame',
           'encode_request', 'encode_response', 'parse_request',
           'parse_response']

METHOD_GET_SCORE = 'getScore'
HEADER = struct.Struct('>I')


class ProtocolError(RuntimeError):
    '''Raised for malformed frames and unexpected messages.'''
    pass


class FrameTooLargeError(ProtocolError):
    pass


class TransportError(ConnectionError):
    '''Raised when the connection to the peer fails.'''
    pass


class RemoteError(RuntimeError):
    '''An error response sent by the server; ``message`` is its text.'''
    def __init__(self, message):
        super(RemoteError, self).__init__(message)
        self.message = message


class RequestError(ValueError):
    '''
    A request that cannot be served. ``request_id`` is ``None`` if not even
    the id could be recovered from the payload.
    '''
    def __init__(self, request_id, message):
        super(RequestError, self).__init__(message)
        self.request_id = request_id
        self.message = message


def encode_payload(obj):
    '''Serialize a message to compact UTF-8 JSON.'''
    return json.dumps(obj, ensure_ascii=False, separators=(',', ':'),
                      allow_nan=False).encode('utf-8')


def pack_frame(payload, max_size=MAX_FRAME_SIZE):
    '''Prefix ``payload`` (bytes) with its length.'''
    if len(payload) > max_size:
        raise FrameTooLargeError('frame too large (%d > %d bytes)'
                                 % (len(payload), max_size))
    return HEADER.pack(len(payload)) + payload


def read_frame(stream, max_size=MAX_FRAME_SIZE):
    '''
    Read one frame from a binary file-like object.

    Returns
    -------
    payload : bytes or None
        ``None`` if the stream ended cleanly before a new frame.

    Raises
    ------
    FrameTooLargeError
        If the announced length exceeds ``max_size`` (the payload is not
        read).
    ProtocolError
        If the stream ends in the middle of a frame.
    '''
    header = stream.read(HEADER.size)
    if not header:
        return None
    if len(header) < HEADER.size:
        raise ProtocolError('connection closed inside a frame header')
    length, = HEADER.unpack(header)
    if length > max_size:
        raise FrameTooLargeError('frame too large')
    payload = stream.read(length) if length else b''
    if len(payload) < length:
        raise ProtocolError('connection closed inside a frame (%d of %d '
                            'bytes)' % (len(payload), length))
    return payload


def encode_request(request_id, question, answer):
    return encode_payload(OrderedDict([
        ('id', request_id),
        ('method', METHOD_GET_SCORE),
        ('params', OrderedDict([('question', question),
                                ('answer', answer)]))]))


def encode_response(request_id, result=None, error=None):
    '''
    Serialize a response carrying either ``result`` or ``error``.
    '''
    if (result is None) == (error is None):
        raise ValueError('A response carries exactly one of result and error')
    if error is None:
        return encode_payload(OrderedDict([('id', request_id),
                                           ('result', float(result))]))
    return encode_payload(OrderedDict([('id', request_id),
                                       ('error', str(error))]))


def _valid_id(value):
    return (isinstance(value, int) and not isinstance(value, bool) and
            value >= 0)


def parse_request(payload):
    '''
    Decode a request payload.

    Returns
    -------
    request_id, question, answer : int, str, str

    Raises
    ------
    RequestError
    '''
    try:
        obj = json.loads(payload.decode('utf-8'))
    except (ValueError, RecursionError):
        raise RequestError(None, 'malformed payload')
    if not isinstance(obj, dict) or not _valid_id(obj.get('id')):
        raise RequestError(None, 'missing or invalid id')
    request_id = obj['id']
    if obj.get('method') != METHOD_GET_SCORE:
        raise RequestError(request_id, 'unknown method')
    params = obj.get('params')
    if (not isinstance(params, dict) or
            not isinstance(params.get('question'), str) or
            not isinstance(params.get('answer'), str)):
        raise RequestError(request_id, 'invalid params')
    return request_id, params['question'], params['answer']


def parse_response(payload):
    '''
    Decode a response payload.

    Returns
    -------
    request_id, result, error
        Exactly one of ``result`` (float) and ``error`` (str) is not None.

    Raises
    ------
    ProtocolError
    '''
    try:
        obj = json.loads(payload.decode('utf-8'))
    except (ValueError, RecursionError):
        raise ProtocolError('malformed response payload')
    if not isinstance(obj, dict) or 'id' not in obj:
        raise ProtocolError('response without id')
    has_result = 'result' in obj
    has_error = 'error' in obj
    if has_result == has_error:
        raise ProtocolError('response needs exactly one of result and error')
    if has_result:
        result = obj['result']
        if isinstance(result, bool) or not isinstance(result, (int, float)):
            raise ProtocolError('non-numeric result %r' % (result, ))
        return obj['id'], float(result), None
    return obj['id'], None, str(obj['error'])
