'''
The model container: named flat weight records with their dimensions, the
hyperparameters and the text statistics the model was built with.
'''
import math
from dataclasses import dataclass, field

import numpy as np

from ..config import (DEFAULT_EMBED_DIM, DEFAULT_FILTER_WIDTH,
                      DEFAULT_NUM_FILTERS, DEFAULT_HIDDEN_SIZE, UNKNOWN_TOKEN)
from ..logger import get_logger
from ..nn.tensor import as_tensor, from_flat
from ..text.stopwords import sorted_stopwords
from ..text.textproc import IdfTable
from .prng import SplitMix64

__all__ = ['ModelValidationError', 'MissingParameterError', 'ReshapeError',
           'FormatVersionError', 'PARAM_NAMES', 'ParamRecord', 'ModelConfig',
           'ModelBundle', 'expected_dims', 'init_model']

logger = get_logger(__name__)

# canonical order of the records, also the initialization order
PARAM_NAMES = ('embeddings',
               'conv_q.filters', 'conv_q.bias',
               'conv_a.filters', 'conv_a.bias',
               'fc1.weight', 'fc1.bias',
               'fc2.weight', 'fc2.bias')

EMBEDDING_SCALE = 0.25


class ModelValidationError(ValueError):
    '''
    Raised when a model (or model file) violates the container contract.
    '''
    pass


class MissingParameterError(ModelValidationError):
    pass


class ReshapeError(ModelValidationError):
    pass


class FormatVersionError(ModelValidationError):
    pass


def _positive_int(name, value):
    try:
        valid = (not isinstance(value, bool) and int(value) == value and
                 value >= 1)
    except (TypeError, ValueError):
        valid = False
    if not valid:
        raise ModelValidationError('%s has to be a positive integer, got %r'
                                   % (name, value))
    return int(value)


@dataclass(frozen=True)
class ModelConfig:
    '''
    Hyperparameters and text statistics of a model.

    Attributes
    ----------
    vocab : tuple of str
        The vocabulary, index 0 is always ``<unk>``.
    embed_dim, filter_width, num_filters, hidden_size : int
        ``d``, ``w``, ``k`` and the size of the hidden layer.
    stopwords : tuple of str
        Terms removed for the non-stopword overlap features.
    idf : `IdfTable`
        Collection statistics for the idf-weighted overlap features.
    '''
    vocab: tuple
    idf: IdfTable
    embed_dim: int = DEFAULT_EMBED_DIM
    filter_width: int = DEFAULT_FILTER_WIDTH
    num_filters: int = DEFAULT_NUM_FILTERS
    hidden_size: int = DEFAULT_HIDDEN_SIZE
    stopwords: tuple = field(default_factory=lambda: tuple(sorted_stopwords()))

    def __post_init__(self):
        for name in ('embed_dim', 'filter_width', 'num_filters',
                     'hidden_size'):
            object.__setattr__(self, name,
                               _positive_int(name, getattr(self, name)))
        vocab = tuple(self.vocab)
        if not vocab or vocab[0] != UNKNOWN_TOKEN:
            raise ModelValidationError('The vocabulary has to start with %s'
                                       % UNKNOWN_TOKEN)
        if len(set(vocab)) != len(vocab):
            raise ModelValidationError('The vocabulary contains duplicate '
                                       'entries')
        object.__setattr__(self, 'vocab', vocab)
        object.__setattr__(self, 'stopwords', tuple(self.stopwords))
        if not isinstance(self.idf, IdfTable):
            raise ModelValidationError('idf has to be an IdfTable, got %r'
                                       % type(self.idf))

    @property
    def join_size(self):
        '''Length of the join vector, ``2k + 4``.'''
        return 2 * self.num_filters + 4


def expected_dims(config):
    '''
    The dimensions every parameter record must have under ``config``.

    Returns
    -------
    dims : dict
        Maps each name of `PARAM_NAMES` to a tuple of dimensions.
    '''
    d, w, k = config.embed_dim, config.filter_width, config.num_filters
    hdim = config.hidden_size
    return {'embeddings': (len(config.vocab), d),
            'conv_q.filters': (k, d, w),
            'conv_q.bias': (k, ),
            'conv_a.filters': (k, d, w),
            'conv_a.bias': (k, ),
            'fc1.weight': (hdim, config.join_size),
            'fc1.bias': (hdim, ),
            'fc2.weight': (2, hdim),
            'fc2.bias': (2, )}


class ParamRecord(object):
    '''
    One named parameter: its dimensions and its weights flattened in
    row-major order.
    '''
    __slots__ = ('name', 'dims', 'weights')

    def __init__(self, name, dims, weights):
        self.name = str(name)
        self.dims = tuple(int(d) for d in dims)
        weights = np.array(weights, dtype=np.float64).ravel()
        weights.setflags(write=False)
        self.weights = weights

    @classmethod
    def from_array(cls, name, array):
        array = as_tensor(array)
        return cls(name, array.shape, array.ravel())

    def check(self):
        '''
        Check the reshape contract ``product(dims) == len(weights)``.
        '''
        if not self.dims or any(d < 1 for d in self.dims):
            raise ReshapeError('Parameter %s has invalid dimensions %s'
                               % (self.name, list(self.dims)))
        if int(np.prod(self.dims)) != self.weights.size:
            raise ReshapeError('Cannot reshape parameter %s: %d weights for '
                               'dimensions %s' % (self.name, self.weights.size,
                                                  list(self.dims)))
        if not np.all(np.isfinite(self.weights)):
            raise ModelValidationError('Parameter %s contains non-finite '
                                       'weights' % self.name)

    def array(self):
        '''The weights restored to their dimensions (read-only).'''
        self.check()
        return from_flat(self.dims, self.weights)

    def __eq__(self, other):
        if not isinstance(other, ParamRecord):
            return NotImplemented
        # bit-for-bit comparison
        return (self.name == other.name and self.dims == other.dims and
                self.weights.tobytes() == other.weights.tobytes())

    def __repr__(self):
        return 'ParamRecord(%r, dims=%s)' % (self.name, list(self.dims))


class ModelBundle(object):
    '''
    A complete model: configuration plus the nine parameter records of
    `PARAM_NAMES`. Treat as immutable.

    Parameters
    ----------
    config : `ModelConfig`
    params : iterable of `ParamRecord`
    '''
    def __init__(self, config, params):
        self.config = config
        self.params = tuple(params)
        self._arrays = None
        self._vocab_index = None

    def validate(self):
        '''
        Check record completeness, the reshape contract of every record and
        the record dimensions against the configuration.

        Raises
        ------
        MissingParameterError, ReshapeError, ModelValidationError
        '''
        names = [p.name for p in self.params]
        for name in PARAM_NAMES:
            if name not in names:
                raise MissingParameterError('missing parameter %s' % name)
        for name in names:
            if name not in PARAM_NAMES:
                raise ModelValidationError('unexpected parameter %s' % name)
            if names.count(name) > 1:
                raise ModelValidationError('duplicate parameter %s' % name)
        expected = expected_dims(self.config)
        for record in self.params:
            record.check()
            if record.dims != expected[record.name]:
                raise ModelValidationError(
                    'Parameter %s has dimensions %s, the configuration '
                    'requires %s' % (record.name, list(record.dims),
                                     list(expected[record.name])))
        return self

    def param(self, name):
        '''The record called ``name``.'''
        for record in self.params:
            if record.name == name:
                return record
        raise MissingParameterError('missing parameter %s' % name)

    @property
    def arrays(self):
        '''
        Validated weights by name, restored to their dimensions.
        '''
        if self._arrays is None:
            self.validate()
            self._arrays = {p.name: p.array() for p in self.params}
        return self._arrays

    @property
    def vocab_index(self):
        '''Maps each vocabulary term to its row in the embedding table.'''
        if self._vocab_index is None:
            self._vocab_index = {term: i
                                 for i, term in enumerate(self.config.vocab)}
        return self._vocab_index

    @property
    def n_weights(self):
        return sum(p.weights.size for p in self.params)

    def replace(self, **arrays):
        '''
        A copy of this bundle with some records replaced. Keyword names use
        ``__`` for the dot, e.g. ``conv_q__bias=np.zeros(k)``.
        '''
        replaced = dict((name.replace('__', '.'), value)
                        for name, value in arrays.items())
        params = []
        for record in self.params:
            if record.name in replaced:
                params.append(ParamRecord.from_array(record.name,
                                                     replaced.pop(record.name)))
            else:
                params.append(record)
        if replaced:
            raise KeyError('Unknown parameters: %s' % ', '.join(sorted(replaced)))
        return ModelBundle(self.config, params)

    def __eq__(self, other):
        if not isinstance(other, ModelBundle):
            return NotImplemented
        return self.config == other.config and self.params == other.params

    def __repr__(self):
        c = self.config
        return ('<ModelBundle: |V|=%d, d=%d, w=%d, k=%d, hidden=%d>'
                % (len(c.vocab), c.embed_dim, c.filter_width, c.num_filters,
                   c.hidden_size))


def _init_scale(name, dims):
    if name == 'embeddings':
        return EMBEDDING_SCALE
    if name.endswith('.bias'):
        return 0.0
    if name.endswith('.filters'):
        k, d, w = dims
        fan_in, fan_out = d * w, k * w
    else:
        fan_out, fan_in = dims
    return math.sqrt(6.0 / (fan_in + fan_out))


def init_model(config, seed):
    '''
    Deterministically initialize all weights of a model.

    Weights are drawn from a single splitmix64 stream seeded with ``seed``,
    record by record in the order of `PARAM_NAMES`, each record row-major.
    A weight is ``(2u - 1) * s`` with ``s = 0.25`` for the embeddings and
    ``s = sqrt(6 / (fan_in + fan_out))`` for the filters and weight
    matrices. Biases are zero and consume no draws.

    Parameters
    ----------
    config : `ModelConfig`
    seed : int

    Returns
    -------
    bundle : `ModelBundle`
    '''
    rng = SplitMix64(seed)
    params = []
    for name, dims in sorted(expected_dims(config).items(),
                             key=lambda item: PARAM_NAMES.index(item[0])):
        size = int(np.prod(dims))
        scale = _init_scale(name, dims)
        if scale == 0.0:
            weights = np.zeros(size)
        else:
            weights = rng.uniform(size, scale)
        params.append(ParamRecord(name, dims, weights))
    logger.debug('Initialized %d weights with seed %d'
                 % (sum(p.weights.size for p in params), seed))
    return ModelBundle(config, params).validate()
