import json
import os

import numpy as np
import pytest
from numpy.testing import assert_equal

from rerankd.model import (ModelValidationError, MissingParameterError,
                           ReshapeError, FormatVersionError, PARAM_NAMES,
                           ParamRecord, ModelConfig, ModelBundle,
                           expected_dims, init_model, save_model, load_model,
                           SplitMix64)
from rerankd.nn import ShapeError
from rerankd.text import IdfTable
from rerankd.tests.conftest import tiny_config


def test_splitmix64_reference_values():
    # published reference outputs for seed 0
    rng = SplitMix64(0)
    assert [int(v) for v in rng.next_uint64(3)] == [0xE220A8397B1DCDAF,
                                                    0x6E789E6AA1B965F4,
                                                    0x06C45D188009454F]
    # drawing in blocks continues the same stream
    a = SplitMix64(123).next_uint64(10)
    rng = SplitMix64(123)
    b = np.concatenate([rng.next_uint64(4), rng.next_uint64(6)])
    assert_equal(a, b)


def test_splitmix64_uniform_range():
    values = SplitMix64(42).uniform(10000, 0.25)
    assert values.min() >= -0.25
    assert values.max() < 0.25


def test_model_config_validation():
    idf = IdfTable(n_docs=1)
    with pytest.raises(ModelValidationError):
        ModelConfig(vocab=('sky', ), idf=idf)
    with pytest.raises(ModelValidationError):
        ModelConfig(vocab=('<unk>', 'a', 'a'), idf=idf)
    with pytest.raises(ModelValidationError):
        ModelConfig(vocab=('<unk>', ), idf=idf, embed_dim=0)
    with pytest.raises(ModelValidationError):
        ModelConfig(vocab=('<unk>', ), idf=idf, num_filters='many')
    config = ModelConfig(vocab=('<unk>', ), idf=idf)
    assert (config.embed_dim, config.filter_width, config.num_filters,
            config.hidden_size) == (50, 5, 100, 204)
    assert config.join_size == 204
    assert len(config.stopwords) == 33


def test_expected_dims():
    dims = expected_dims(tiny_config())
    assert dims == {'embeddings': (3, 2),
                    'conv_q.filters': (1, 2, 2), 'conv_q.bias': (1, ),
                    'conv_a.filters': (1, 2, 2), 'conv_a.bias': (1, ),
                    'fc1.weight': (2, 6), 'fc1.bias': (2, ),
                    'fc2.weight': (2, 2), 'fc2.bias': (2, )}


def test_init_model_deterministic(tiny_bundle):
    again = init_model(tiny_config(), seed=7)
    assert again == tiny_bundle
    other = init_model(tiny_config(), seed=8)
    assert other != tiny_bundle
    assert [p.name for p in tiny_bundle.params] == list(PARAM_NAMES)
    arrays = tiny_bundle.arrays
    for name in ('conv_q.bias', 'conv_a.bias', 'fc1.bias', 'fc2.bias'):
        assert_equal(arrays[name], 0)
    assert np.all(np.abs(arrays['embeddings']) < 0.25)
    # fan_in = d*w = 4, fan_out = k*w = 2
    assert np.all(np.abs(arrays['conv_q.filters']) < np.sqrt(6 / 6.))
    assert np.all(np.abs(arrays['fc1.weight']) < np.sqrt(6 / 8.))


def test_init_model_draw_order(tiny_bundle):
    rng = SplitMix64(7)
    assert_equal(tiny_bundle.arrays['embeddings'].ravel(),
                 rng.uniform(6, 0.25))
    assert_equal(tiny_bundle.arrays['conv_q.filters'].ravel(),
                 rng.uniform(4, np.sqrt(6. / 6.)))
    # biases consume no draws
    assert_equal(tiny_bundle.arrays['conv_a.filters'].ravel(),
                 rng.uniform(4, np.sqrt(6. / 6.)))


def test_param_record():
    record = ParamRecord.from_array('fc2.bias', [1.0, 2.0])
    assert record.dims == (2, )
    assert_equal(record.array(), [1.0, 2.0])
    with pytest.raises(ReshapeError):
        ParamRecord('fc2.bias', (3, ), [1.0, 2.0]).check()
    with pytest.raises(ModelValidationError):
        ParamRecord('fc2.bias', (2, ), [1.0, np.nan]).check()
    # bit-exact comparison distinguishes 0.0 and -0.0
    assert (ParamRecord('x', (1, ), [0.0]) !=
            ParamRecord('x', (1, ), [-0.0]))


def test_param_record_array_is_read_only():
    record = ParamRecord('conv_q.filters', (2, 1, 3), range(6))
    arr = record.array()
    assert arr.shape == (2, 1, 3)
    assert_equal(arr, np.arange(6.0).reshape(2, 1, 3))
    assert not arr.flags.writeable
    with pytest.raises(ValueError):
        arr[0, 0, 0] = 1.0
    with pytest.raises(ShapeError):
        ParamRecord.from_array('fc2.bias', 1.0)
    with pytest.raises(ShapeError):
        ParamRecord.from_array('fc2.bias', [])


def test_validate_errors(tiny_bundle):
    params = [p for p in tiny_bundle.params if p.name != 'fc1.bias']
    with pytest.raises(MissingParameterError) as exc:
        ModelBundle(tiny_bundle.config, params).validate()
    assert str(exc.value) == 'missing parameter fc1.bias'
    with pytest.raises(ModelValidationError):
        tiny_bundle.replace(fc2__bias=np.zeros(3)).validate()
    with pytest.raises(ModelValidationError):
        ModelBundle(tiny_bundle.config,
                    tiny_bundle.params + (tiny_bundle.params[0], )).validate()
    with pytest.raises(KeyError):
        tiny_bundle.replace(nonsense=np.zeros(1))


def test_save_load_round_trip(tmpdir):
    rng = np.random.default_rng(3)
    filename = os.path.join(str(tmpdir), 'model.json')
    for i in range(20):
        d, w, k, hdim = [int(v) for v in rng.integers(1, 6, size=4)]
        vocab = ('<unk>', ) + tuple('t%d' % j
                                    for j in range(rng.integers(0, 8)))
        config = ModelConfig(vocab=vocab,
                             idf=IdfTable(n_docs=4, df={'t0': 2, 'x': 4}),
                             embed_dim=d, filter_width=w, num_filters=k,
                             hidden_size=hdim)
        bundle = init_model(config, seed=int(rng.integers(0, 2**32)))
        # exercise awkward values
        bundle = bundle.replace(fc2__bias=[-0.0, 1e-300])
        save_model(bundle, filename)
        loaded = load_model(filename)
        assert loaded == bundle
        for name in PARAM_NAMES:
            assert (loaded.arrays[name].tobytes() ==
                    bundle.arrays[name].tobytes())


def test_model_file_layout(tmpdir, tiny_bundle):
    filename = os.path.join(str(tmpdir), 'model.json')
    save_model(tiny_bundle, filename)
    with open(filename, encoding='utf-8') as f:
        text = f.read()
    assert text.startswith('{"format_version":1,\n"config":')
    obj = json.loads(text)
    assert list(obj) == ['format_version', 'config', 'params']
    assert [p['name'] for p in obj['params']] == list(PARAM_NAMES)
    assert obj['params'][0]['dims'] == [3, 2]
    assert len(obj['params'][0]['weights']) == 6


def _write_modified(filename, source, modify):
    with open(source, encoding='utf-8') as f:
        obj = json.load(f)
    modify(obj)
    with open(filename, 'w', encoding='utf-8') as f:
        json.dump(obj, f)


def test_load_corrupted_models(tmpdir, tiny_bundle):
    good = os.path.join(str(tmpdir), 'good.json')
    bad = os.path.join(str(tmpdir), 'bad.json')
    save_model(tiny_bundle, good)

    def drop_record(obj):
        del obj['params'][3]
    _write_modified(bad, good, drop_record)
    with pytest.raises(MissingParameterError) as exc:
        load_model(bad)
    assert 'conv_a.filters' in str(exc.value)

    def wrong_dims(obj):
        obj['params'][5]['dims'] = [3, 6]
    _write_modified(bad, good, wrong_dims)
    with pytest.raises(ReshapeError) as exc:
        load_model(bad)
    assert 'fc1.weight' in str(exc.value)

    def bad_version(obj):
        obj['format_version'] = 2
    _write_modified(bad, good, bad_version)
    with pytest.raises(FormatVersionError):
        load_model(bad)

    def mismatching_dims(obj):
        # consistent record, but not what the config requires
        obj['params'][8]['dims'] = [1, 2]
    _write_modified(bad, good, mismatching_dims)
    with pytest.raises(ModelValidationError):
        load_model(bad)

    with open(bad, 'w') as f:
        f.write('not json')
    with pytest.raises(ModelValidationError):
        load_model(bad)


def test_save_invalid_model_writes_nothing(tmpdir, tiny_bundle):
    filename = os.path.join(str(tmpdir), 'model.json')
    broken = ModelBundle(tiny_bundle.config, tiny_bundle.params[:-1])
    with pytest.raises(MissingParameterError):
        save_model(broken, filename)
    assert not os.path.exists(filename)
