'''
The network compiler: turns a `ModelBundle` into a standalone evaluator
program with all weights, shapes and text statistics baked in as constants.

The generated program only needs numpy. It offers ``--score QUESTION
ANSWER``, ``--batch PATH`` and, optionally, ``--serve PORT`` speaking the
wire protocol of `rerankd.service`.
'''
import importlib.util
import os
from dataclasses import dataclass, field
from string import Template

from ..config import DEFAULT_HOST, MAX_FRAME_SIZE
from ..logger import get_logger
from ..nn.tensor import flatten_filters
from ..service.protocol import METHOD_GET_SCORE
from .rendering import (render_float_tuple, render_dict, render_frozenset,
                        render_int)

__all__ = ['GenOptions', 'GeneratedSource', 'EvaluatorGenerator',
           'ENTRY_POINT', 'generate_evaluator', 'write_source',
           'load_evaluator']

logger = get_logger(__name__)

ENTRY_POINT = 'evaluator.py'
# prefix of the names holding weight literals
WEIGHT_PREFIX = 'W_'


@dataclass(frozen=True)
class GenOptions:
    '''
    What the generated program offers besides ``--score``.

    Floats are always written as shortest round-trip decimals.
    '''
    emit_service: bool = True
    emit_batch_cli: bool = True

    def __post_init__(self):
        if not (self.emit_service or self.emit_batch_cli):
            raise ValueError('At least one of emit_service and '
                             'emit_batch_cli has to be set')


@dataclass(frozen=True)
class GeneratedSource:
    '''
    Generated program text.

    Attributes
    ----------
    files : dict
        Maps a relative path to the file's text.
    entry_point : str
        Relative path of the file to run.
    '''
    files: dict = field(default_factory=dict)
    entry_point: str = ENTRY_POINT

    @property
    def main_source(self):
        return self.files[self.entry_point]


_HEADER = Template('''\
#!/usr/bin/env python
"""
Standalone evaluator of a Siamese CNN answer reranker (|V|=$vocab_size,
d=$embed_dim, w=$filter_width, k=$num_filters, hidden=$hidden_size).

Generated by rerankd, do not edit. All weights are constants of this file.
"""
''')

_TEXT_PROCESSING = '''\
_TOKEN_RE = re.compile(r'[A-Za-z0-9]+')


def tokenize(text):
    return [token.lower() for token in _TOKEN_RE.findall(text)]


def _idf(term):
    return math.log((IDF_N_DOCS + 1.0) / (IDF_DF.get(term, 0) + 1.0))


def _overlap_pair(q_set, c_set):
    common = q_set & c_set
    total = len(q_set) + len(c_set)
    overlap = len(common) / total if total else 0.0
    weight_common = sum(_idf(t) for t in sorted(common))
    weight_union = sum(_idf(t) for t in sorted(q_set | c_set))
    idf_overlap = weight_common / weight_union if weight_union > 0 else 0.0
    return overlap, idf_overlap


def features(question, answer):
    q_set = set(question)
    c_set = set(answer)
    overlap_all, idf_overlap_all = _overlap_pair(q_set, c_set)
    overlap_nonstop, idf_overlap_nonstop = _overlap_pair(q_set - STOPWORDS,
                                                         c_set - STOPWORDS)
    return (overlap_all, idf_overlap_all, overlap_nonstop,
            idf_overlap_nonstop)
'''

_NETWORK = '''\
def embed(tokens):
    rows = [VOCAB.get(token, 0) for token in tokens] or [0]
    return EMBEDDINGS[rows].T


def score_tokens(question, answer):
    x_join = np.concatenate([_arm_q(embed(question)),
                             _arm_a(embed(answer)),
                             np.array(features(question, answer))])
    hidden = np.maximum(FC1_WEIGHT @ x_join + FC1_BIAS, 0.0)
    logits = FC2_WEIGHT @ hidden + FC2_BIAS
    shifted = np.exp(logits - np.max(logits))
    return float((shifted / np.sum(shifted))[1])


def score(question, answer):
    return score_tokens(tokenize(question), tokenize(answer))
'''

_BATCH = '''\
def score_file(path, out):
    with open(path, 'r', encoding='utf-8', newline='\\n') as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip('\\n')
            if not line:
                continue
            question, sep, answer = line.partition('\\t')
            if not sep:
                raise ValueError('%s:%d: expected "question<TAB>answer"'
                                 % (path, line_no))
            out.write('%.17g\\n' % score(question, answer))
'''

_SERVICE = Template('''\
MAX_FRAME_SIZE = $max_frame_size
_FRAME_HEADER = struct.Struct('>I')


def _encode(obj):
    return json.dumps(obj, ensure_ascii=False, separators=(',', ':'),
                      allow_nan=False).encode('utf-8')


def _valid_id(value):
    return (isinstance(value, int) and not isinstance(value, bool) and
            value >= 0)


def _respond(payload):
    # None drops the connection
    try:
        obj = json.loads(payload.decode('utf-8'))
    except (ValueError, RecursionError):
        return None
    if not isinstance(obj, dict) or not _valid_id(obj.get('id')):
        return None
    request_id = obj['id']
    if obj.get('method') != $method:
        return {'id': request_id, 'error': 'unknown method'}
    params = obj.get('params')
    if (not isinstance(params, dict) or
            not isinstance(params.get('question'), str) or
            not isinstance(params.get('answer'), str)):
        return {'id': request_id, 'error': 'invalid params'}
    try:
        result = score(params['question'], params['answer'])
    except Exception as ex:
        return {'id': request_id, 'error': 'internal error: %s' % ex}
    return {'id': request_id, 'result': result}


class ScoringHandler(socketserver.StreamRequestHandler):
    disable_nagle_algorithm = True

    def _send(self, obj):
        payload = _encode(obj)
        self.wfile.write(_FRAME_HEADER.pack(len(payload)) + payload)

    def handle(self):
        while True:
            header = self.rfile.read(_FRAME_HEADER.size)
            if len(header) < _FRAME_HEADER.size:
                return
            length, = _FRAME_HEADER.unpack(header)
            if length > MAX_FRAME_SIZE:
                self._send({'id': None, 'error': 'frame too large'})
                return
            payload = self.rfile.read(length)
            if len(payload) < length:
                return
            response = _respond(payload)
            if response is None:
                return
            self._send(response)


class ScoringServer(socketserver.TCPServer):
    allow_reuse_address = True

    def handle_error(self, request, client_address):
        sys.stderr.write('connection from %s:%s failed\\n'
                         % client_address[:2])


def serve(port, host):
    with ScoringServer((host, port), ScoringHandler) as server:
        sys.stderr.write('serving getScore on %s:%d\\n'
                         % server.server_address[:2])
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
''')


def _plus(offset):
    return 'n + %d' % offset if offset else 'n'


class EvaluatorGenerator(object):
    '''
    Builds the source of an evaluator program section by section.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
        A valid model.
    options : `GenOptions`, optional
    '''
    def __init__(self, bundle, options=None):
        if options is None:
            options = GenOptions()
        bundle.validate()
        self.bundle = bundle
        self.options = options
        self._sections = []
        self.n_constants = 0

    def add_header(self):
        c = self.bundle.config
        self._sections.append(_HEADER.substitute(
            vocab_size=len(c.vocab), embed_dim=c.embed_dim,
            filter_width=c.filter_width, num_filters=c.num_filters,
            hidden_size=c.hidden_size))
        modules = ['argparse', 'math', 're', 'sys']
        if self.options.emit_service:
            modules += ['json', 'socketserver', 'struct']
        self._sections.append(''.join('import %s\n' % m
                                      for m in sorted(modules)) +
                              '\nimport numpy as np\n')

    def add_text_statistics(self):
        c = self.bundle.config
        self._sections.append(
            render_dict('VOCAB', self.bundle.vocab_index) + '\n' +
            'IDF_N_DOCS = %s\n' % render_int(c.idf.n_docs) +
            render_dict('IDF_DF', c.idf.df) + '\n' +
            render_frozenset('STOPWORDS', c.stopwords))
        self._sections.append(_TEXT_PROCESSING)

    def _add_weights(self, name, values, shape):
        values = list(values)
        self.n_constants += len(values)
        const = name.upper().replace('.', '_')
        self._sections.append(render_float_tuple(WEIGHT_PREFIX + const,
                                                 values))
        return '%s = np.array(%s%s).reshape(%s)\n' % (
            const, WEIGHT_PREFIX, const, ', '.join(render_int(s)
                                                   for s in shape))

    def add_weights(self):
        '''
        Every weight exactly once. Filters are stored flattened in im2col
        order, ``[k, w * d]``.
        '''
        arrays = self.bundle.arrays
        reshapes = []
        for name in ('embeddings', 'fc1.weight', 'fc2.weight'):
            reshapes.append(self._add_weights(name, arrays[name].ravel(),
                                              arrays[name].shape))
        for name in ('fc1.bias', 'fc2.bias', 'conv_q.bias', 'conv_a.bias'):
            reshapes.append(self._add_weights(name, arrays[name].ravel(),
                                              arrays[name].shape))
        for name in ('conv_q.filters', 'conv_a.filters'):
            flat = flatten_filters(arrays[name])
            reshapes.append(self._add_weights(name, flat.ravel(), flat.shape))
        self._sections.append(''.join(reshapes))

    def _arm_function(self, arm):
        c = self.bundle.config
        d, w = c.embed_dim, c.filter_width
        prefix = 'CONV_%s' % arm.upper()
        lines = ['def _arm_%s(x):' % arm,
                 '    n = x.shape[1]',
                 '    padded = np.zeros((%d, %s))' % (d, _plus(2 * (w - 1))),
                 '    padded[:, %d:%s] = x' % (w - 1, _plus(w - 1)),
                 '    cols = np.empty((%d, %s))' % (d * w, _plus(w - 1))]
        for o in range(w):
            lines.append('    cols[%d:%d] = padded[:, %d:%s]'
                         % (o * d, (o + 1) * d, o, _plus(o + w - 1)))
        lines += ['    out = %s_FILTERS @ cols' % prefix,
                  '    out += %s_BIAS[:, np.newaxis]' % prefix,
                  '    return np.max(np.maximum(out, 0.0), axis=1)']
        return '\n'.join(lines) + '\n'

    def add_network(self):
        self._sections.append(self._arm_function('q') + '\n\n' +
                              self._arm_function('a'))
        self._sections.append(_NETWORK)

    def add_batch_cli(self):
        self._sections.append(_BATCH)

    def add_service(self):
        self._sections.append(_SERVICE.substitute(
            max_frame_size=MAX_FRAME_SIZE, method=repr(METHOD_GET_SCORE)))

    def add_main(self):
        lines = ['def main(argv=None):',
                 "    parser = argparse.ArgumentParser(",
                 "        description='Score answer sentences for a "
                 "question.')",
                 '    group = parser.add_mutually_exclusive_group('
                 'required=True)',
                 "    group.add_argument('--score', nargs=2, "
                 "metavar=('QUESTION', 'ANSWER'))"]
        if self.options.emit_batch_cli:
            lines.append("    group.add_argument('--batch', metavar='PATH')")
        if self.options.emit_service:
            lines += ["    group.add_argument('--serve', type=int, "
                      "metavar='PORT')",
                      "    parser.add_argument('--host', default=%r)"
                      % DEFAULT_HOST]
        lines += ['    args = parser.parse_args(argv)',
                  '    try:',
                  '        if args.score is not None:',
                  "            sys.stdout.write('%.17g\\n' % "
                  "score(*args.score))"]
        if self.options.emit_batch_cli:
            lines += ['        elif args.batch is not None:',
                      '            score_file(args.batch, sys.stdout)']
        if self.options.emit_service:
            lines += ['        elif args.serve is not None:',
                      '            serve(args.serve, args.host)']
        lines += ['    except (OSError, ValueError) as ex:',
                  "        sys.stderr.write('error: %s\\n' % ex)",
                  '        return 2',
                  '    return 0',
                  '',
                  '',
                  "if __name__ == '__main__':",
                  '    sys.exit(main())']
        self._sections.append('\n'.join(lines) + '\n')

    def build(self):
        '''
        Assemble all sections.

        Returns
        -------
        source : `GeneratedSource`
        '''
        self._sections = []
        self.n_constants = 0
        self.add_header()
        self.add_text_statistics()
        self.add_weights()
        self.add_network()
        if self.options.emit_batch_cli:
            self.add_batch_cli()
        if self.options.emit_service:
            self.add_service()
        self.add_main()
        text = '\n\n'.join(s.rstrip('\n') + '\n' for s in self._sections)
        if self.n_constants != self.bundle.n_weights:
            raise AssertionError('Emitted %d weight constants for %d weights'
                                 % (self.n_constants, self.bundle.n_weights))
        return GeneratedSource(files={ENTRY_POINT: text},
                               entry_point=ENTRY_POINT)


def generate_evaluator(bundle, options=None):
    '''
    Generate the evaluator program of ``bundle``.

    Parameters
    ----------
    bundle : `~rerankd.model.ModelBundle`
        The model, validated before anything is generated.
    options : `GenOptions`, optional
        Defaults to emitting both the batch mode and the service.

    Returns
    -------
    source : `GeneratedSource`
        Deterministic in ``(bundle, options)``.

    Raises
    ------
    ModelValidationError
        If ``bundle`` is invalid.
    '''
    source = EvaluatorGenerator(bundle, options).build()
    logger.debug('Generated %s with %d characters'
                 % (source.entry_point, len(source.main_source)))
    return source


def write_source(source, output_dir):
    '''
    Write all files of ``source`` below ``output_dir``.

    Returns
    -------
    entry_point : str
        Path of the written entry point.
    '''
    for relpath, text in sorted(source.files.items()):
        filename = os.path.join(output_dir, relpath)
        dirname = os.path.dirname(filename)
        if dirname:
            os.makedirs(dirname, exist_ok=True)
        with open(filename, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    logger.info('Wrote evaluator to "%s"' % output_dir)
    return os.path.join(output_dir, source.entry_point)


def load_evaluator(filename, module_name='rerankd_generated_evaluator'):
    '''
    Import a generated program as a module, e.g. to time its ``score``
    function in-process.
    '''
    spec = importlib.util.spec_from_file_location(module_name, filename)
    if spec is None:
        raise ImportError('Cannot load evaluator from "%s"' % filename)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module
