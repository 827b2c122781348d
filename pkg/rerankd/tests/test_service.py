import json
import socket
import struct

import numpy as np
import pytest

from rerankd.nn import Scorer
from rerankd.service import (ProtocolError, FrameTooLargeError,
                             TransportError, RemoteError, RequestError,
                             StartupError, ScoringClient, client_get_score,
                             encode_request, encode_response, pack_frame,
                             read_frame, parse_request, parse_response,
                             start_server_thread)
from rerankd.tests.conftest import random_pairs


@pytest.fixture
def server(tiny_bundle):
    server, thread = start_server_thread(Scorer(tiny_bundle))
    yield server
    server.shutdown()
    server.server_close()
    thread.join()


def _connect(server):
    sock = socket.create_connection(server.endpoint, timeout=10)
    return sock


def _request(sock, payload):
    sock.sendall(struct.pack('>I', len(payload)) + payload)
    return read_frame(sock.makefile('rb'))


def test_canonical_response_bytes():
    assert encode_response(7, result=0.5) == b'{"id":7,"result":0.5}'
    assert (encode_response(3, error='unknown method') ==
            b'{"id":3,"error":"unknown method"}')
    assert (encode_request(1, 'q', 'a') ==
            b'{"id":1,"method":"getScore","params":{"question":"q",'
            b'"answer":"a"}}')
    with pytest.raises(ValueError):
        encode_response(1)


def test_parse_request():
    assert parse_request(encode_request(5, 'q', 'a')) == (5, 'q', 'a')
    with pytest.raises(RequestError) as exc:
        parse_request(b'{"id":2,"method":"foo","params":{}}')
    assert exc.value.request_id == 2
    assert exc.value.message == 'unknown method'
    with pytest.raises(RequestError) as exc:
        parse_request(b'{"id":2,"method":"getScore","params":{"question":1}}')
    assert exc.value.message == 'invalid params'
    for payload in (b'\xff\xfe', b'[1, 2]', b'{"id":-1}', b'{"id":true}',
                    b'{"method":"getScore"}'):
        with pytest.raises(RequestError) as exc:
            parse_request(payload)
        assert exc.value.request_id is None


def test_parse_response():
    assert parse_response(b'{"id":7,"result":0.5}') == (7, 0.5, None)
    assert parse_response(b'{"id":7,"error":"x"}') == (7, None, 'x')
    for payload in (b'nope', b'{"result":1.0}', b'{"id":1}',
                    b'{"id":1,"result":1.0,"error":"x"}',
                    b'{"id":1,"result":"1.0"}'):
        with pytest.raises(ProtocolError):
            parse_response(payload)


def test_frames():
    import io
    stream = io.BytesIO(pack_frame(b'abc') + pack_frame(b''))
    assert read_frame(stream) == b'abc'
    assert read_frame(stream) == b''
    assert read_frame(stream) is None
    with pytest.raises(ProtocolError):
        read_frame(io.BytesIO(b'\x00\x00'))
    with pytest.raises(ProtocolError):
        read_frame(io.BytesIO(b'\x00\x00\x00\x05ab'))
    with pytest.raises(FrameTooLargeError):
        read_frame(io.BytesIO(struct.pack('>I', 2 * 1024 * 1024)))
    with pytest.raises(FrameTooLargeError):
        pack_frame(b'x' * 11, max_size=10)


def test_score_round_trip_is_bit_exact(server, tiny_bundle, rng):
    scorer = Scorer(tiny_bundle)
    pairs = random_pairs(rng, 500)
    with ScoringClient(server.endpoint) as client:
        for question, answer in pairs:
            remote = client.get_score(question, answer)
            assert remote == scorer(question, answer)
    assert server.requests_served == 500


def test_client_get_score(server, tiny_bundle):
    host, port = server.endpoint
    score = client_get_score('%s:%d' % (host, port), 'the sky', 'is blue')
    assert score == Scorer(tiny_bundle)('the sky', 'is blue')


def test_sequential_calls_keep_order(server, tiny_bundle, rng):
    pairs = random_pairs(rng, 1000)
    with ScoringClient(server.endpoint) as client:
        scores = [client.get_score(q, a) for q, a in pairs]
    scorer = Scorer(tiny_bundle)
    assert scores == [scorer(q, a) for q, a in pairs]


def test_error_responses(server):
    sock = _connect(server)
    try:
        response = _request(sock, b'{"id":4,"method":"foo","params":{}}')
        assert response == b'{"id":4,"error":"unknown method"}'
        response = _request(sock, b'{"id":5,"method":"getScore",'
                                  b'"params":{"question":"q"}}')
        assert response == b'{"id":5,"error":"invalid params"}'
        # the connection is still usable
        response = _request(sock, encode_request(6, 'q', 'a'))
        assert parse_response(response)[0] == 6
    finally:
        sock.close()


def test_unrecoverable_id_drops_connection(server):
    sock = _connect(server)
    try:
        assert _request(sock, b'not json at all') is None
    finally:
        sock.close()
    assert client_get_score(server.endpoint, 'q', 'a') >= 0


def test_oversized_frame(server):
    sock = _connect(server)
    try:
        # the header alone announces 2 MiB
        sock.sendall(struct.pack('>I', 2 * 1024 * 1024))
        stream = sock.makefile('rb')
        assert (read_frame(stream) ==
                b'{"id":null,"error":"frame too large"}')
        assert read_frame(stream) is None
    finally:
        sock.close()


def test_internal_error_is_reported(tiny_bundle):
    def failing(question, answer):
        raise RuntimeError('boom')
    server, thread = start_server_thread(failing)
    try:
        with ScoringClient(server.endpoint) as client:
            with pytest.raises(RemoteError) as exc:
                client.get_score('q', 'a')
            assert exc.value.message == 'internal error: boom'
    finally:
        server.shutdown()
        server.server_close()
        thread.join()


def test_client_without_server():
    sock = socket.socket()
    sock.bind(('127.0.0.1', 0))
    port = sock.getsockname()[1]
    sock.close()
    with pytest.raises(TransportError):
        client_get_score(('127.0.0.1', port), 'q', 'a')


def test_startup_error(server):
    with pytest.raises(StartupError):
        start_server_thread(lambda q, a: 0.0, port=server.endpoint[1])


def test_fuzzed_frames_never_crash_the_server(server):
    rng = np.random.default_rng(99)
    valid = encode_request(1, 'q', 'a')
    for i in range(10000):
        kind = i % 4
        if kind == 0:
            payload = rng.bytes(int(rng.integers(0, 64)))
        elif kind == 1:
            # corrupted valid request
            payload = bytearray(valid)
            for pos in rng.integers(0, len(payload), size=3):
                payload[pos] = int(rng.integers(0, 256))
            payload = bytes(payload)
        elif kind == 2:
            payload = json.dumps({'id': int(rng.integers(0, 100)),
                                  'method': 'getScore',
                                  'params': {'question': 'x',
                                             'answer': int(i)}}).encode()
        else:
            payload = valid[:int(rng.integers(0, len(valid)))]
        # headers are random too now and then
        if i % 7 == 0:
            frame = rng.bytes(int(rng.integers(0, 8))) + payload
        else:
            frame = struct.pack('>I', len(payload)) + payload
        sock = _connect(server)
        try:
            sock.sendall(frame)
            sock.shutdown(socket.SHUT_WR)
            stream = sock.makefile('rb')
            try:
                while True:
                    response = read_frame(stream)
                    if response is None:
                        break
                    obj = json.loads(response.decode('utf-8'))
                    assert 'error' in obj or 'result' in obj
            except (ProtocolError, ConnectionResetError):
                # a clean disconnect is an acceptable outcome
                pass
        finally:
            sock.close()
    # still serving
    assert client_get_score(server.endpoint, 'q', 'a') >= 0
