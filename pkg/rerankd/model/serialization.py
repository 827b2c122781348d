'''
Reading and writing the model file.

The file is a single JSON object with the keys ``format_version``,
``config`` and ``params`` in this order. Every parameter is stored flat as
``{"name": ..., "dims": [...], "weights": [...]}`` and restored to its
dimensions on load. Floats are written with their shortest round-trip
representation, so a save/load cycle is bit-exact. Each record is written
on its own line to keep files diffable.
'''
import io
import json
from collections import OrderedDict

from ..config import MODEL_FORMAT_VERSION
from ..logger import get_logger
from ..text.textproc import IdfTable
from .bundle import (ModelBundle, ModelConfig, ParamRecord,
                     ModelValidationError, FormatVersionError, PARAM_NAMES)

__all__ = ['config_to_dict', 'config_from_dict', 'save_model', 'load_model']

logger = get_logger(__name__)

CONFIG_KEYS = ('embed_dim', 'filter_width', 'num_filters', 'hidden_size',
               'vocab', 'stopwords', 'idf')


def _dumps(obj):
    # allow_nan=False: the format has no representation for NaN/inf
    return json.dumps(obj, ensure_ascii=False, separators=(',', ':'),
                      allow_nan=False)


def config_to_dict(config):
    '''
    The ``config`` object of the model file, keys in canonical order.
    '''
    idf = OrderedDict([('n_docs', config.idf.n_docs),
                       ('df', OrderedDict(sorted(config.idf.df.items())))])
    return OrderedDict([('embed_dim', config.embed_dim),
                        ('filter_width', config.filter_width),
                        ('num_filters', config.num_filters),
                        ('hidden_size', config.hidden_size),
                        ('vocab', list(config.vocab)),
                        ('stopwords', list(config.stopwords)),
                        ('idf', idf)])


def config_from_dict(obj):
    '''
    Build a `ModelConfig` from the ``config`` object of a model file.
    '''
    if not isinstance(obj, dict):
        raise ModelValidationError('config has to be an object')
    missing = [key for key in CONFIG_KEYS if key not in obj]
    if missing:
        raise ModelValidationError('config lacks %s' % ', '.join(missing))
    idf = obj['idf']
    if not isinstance(idf, dict) or 'n_docs' not in idf or 'df' not in idf:
        raise ModelValidationError('config.idf needs n_docs and df')
    try:
        idf_table = IdfTable(n_docs=idf['n_docs'], df=idf['df'])
    except (TypeError, ValueError) as ex:
        raise ModelValidationError('Invalid idf table: %s' % ex)
    return ModelConfig(vocab=tuple(obj['vocab']),
                       idf=idf_table,
                       embed_dim=obj['embed_dim'],
                       filter_width=obj['filter_width'],
                       num_filters=obj['num_filters'],
                       hidden_size=obj['hidden_size'],
                       stopwords=tuple(obj['stopwords']))


def save_model(bundle, filename):
    '''
    Write ``bundle`` to ``filename``. The bundle is validated first; nothing
    is written for an invalid bundle.

    Parameters
    ----------
    bundle : `ModelBundle`
    filename : str
    '''
    bundle.validate()
    records = []
    for name in PARAM_NAMES:
        record = bundle.param(name)
        records.append(_dumps(OrderedDict([('name', record.name),
                                           ('dims', list(record.dims)),
                                           ('weights',
                                            record.weights.tolist())])))
    text = ('{"format_version":%d,\n"config":%s,\n"params":[\n%s\n]}\n'
            % (MODEL_FORMAT_VERSION, _dumps(config_to_dict(bundle.config)),
               ',\n'.join(records)))
    with io.open(filename, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    logger.info('Saved model with %d weights to "%s"' % (bundle.n_weights,
                                                        filename))


def _record_from_dict(obj, position):
    if not isinstance(obj, dict) or 'name' not in obj:
        raise ModelValidationError('params[%d] is not a parameter record'
                                   % position)
    for key in ('dims', 'weights'):
        if not isinstance(obj.get(key), list):
            raise ModelValidationError('Parameter %s lacks %s'
                                       % (obj['name'], key))
    try:
        return ParamRecord(obj['name'], obj['dims'], obj['weights'])
    except (TypeError, ValueError) as ex:
        raise ModelValidationError('Parameter %s is malformed: %s'
                                   % (obj['name'], ex))


def load_model(filename):
    '''
    Read and validate a model file.

    Raises
    ------
    FormatVersionError
        If the file has an unknown ``format_version``.
    MissingParameterError
        If a record is missing (``missing parameter <name>``).
    ReshapeError
        If the dimensions of a record do not match its number of weights.
    ModelValidationError
        For all other violations of the container contract.
    '''
    with io.open(filename, 'r', encoding='utf-8') as f:
        try:
            obj = json.load(f)
        except ValueError as ex:
            raise ModelValidationError('"%s" is not a model file: %s'
                                       % (filename, ex))
    if not isinstance(obj, dict):
        raise ModelValidationError('"%s" is not a model file' % filename)
    version = obj.get('format_version')
    if version != MODEL_FORMAT_VERSION or isinstance(version, bool):
        raise FormatVersionError('Unsupported model format_version %r '
                                 '(supported: %d)' % (version,
                                                      MODEL_FORMAT_VERSION))
    params = obj.get('params')
    if not isinstance(params, list):
        raise ModelValidationError('"%s" has no params list' % filename)
    records = [_record_from_dict(p, i) for i, p in enumerate(params)]
    bundle = ModelBundle(config_from_dict(obj.get('config')), records)
    bundle.validate()
    logger.debug('Loaded %r from "%s"' % (bundle, filename))
    return bundle
