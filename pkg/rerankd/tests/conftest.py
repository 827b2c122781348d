'''
Shared fixtures: a tiny hand-sized model, a seeded model of moderate size,
a small corpus and random text.
'''
import numpy as np
import pytest

from rerankd.model import ModelConfig, init_model
from rerankd.retrieval import index_documents
from rerankd.text import IdfTable

CORPUS = [
    ('d1', 'The sky is blue. Grass is green! Why is the sky blue?'),
    ('d2', 'Paris is the capital of France. It lies on the Seine.'),
    ('d3', 'The capital of Italy is Rome. Rome is old.'),
    ('d4', 'Blue whales are the largest animals.'),
    ('d5', 'Nothing to see here'),
]

WORDS = ('the sky is blue green grass paris capital of france seine italy '
         'rome old whales largest animals what where why who zebra quartz '
         'a an and in on to').split()


def random_sentence(rng, max_len=12):
    n = rng.integers(0, max_len + 1)
    return ' '.join(rng.choice(WORDS, size=n))


def random_pairs(rng, n, max_len=12):
    return [(random_sentence(rng, max_len), random_sentence(rng, max_len))
            for _ in range(n)]


def tiny_config():
    return ModelConfig(vocab=('<unk>', 'sky', 'blue'),
                       idf=IdfTable(n_docs=3, df={'sky': 2, 'blue': 1}),
                       embed_dim=2, filter_width=2, num_filters=1,
                       hidden_size=2)


@pytest.fixture
def tiny_bundle():
    return init_model(tiny_config(), seed=7)


# every weight of the tiny architecture written out, biases non-zero
ENUMERATED_WEIGHTS = {
    'embeddings': [[0.1, -0.2], [0.5, 0.3], [-0.4, 0.7]],
    'conv_q.filters': [[[0.2, -0.5], [0.6, 0.1]]],
    'conv_q.bias': [0.05],
    'conv_a.filters': [[[-0.3, 0.4], [0.25, -0.15]]],
    'conv_a.bias': [-0.02],
    'fc1.weight': [[0.3, -0.6, 1.2, 0.8, -0.4, 0.5],
                   [-0.7, 0.9, 0.1, -1.1, 0.6, 0.2]],
    'fc1.bias': [0.1, -0.05],
    'fc2.weight': [[0.4, -0.9], [-0.3, 1.1]],
    'fc2.bias': [0.2, -0.1]}


@pytest.fixture
def enumerated_bundle():
    bundle = init_model(tiny_config(), seed=0)
    return bundle.replace(**dict((name.replace('.', '__'), np.array(value))
                                 for name, value in
                                 ENUMERATED_WEIGHTS.items()))


@pytest.fixture(scope='session')
def corpus_index():
    return index_documents(CORPUS)


@pytest.fixture(scope='session')
def seeded_bundle():
    # the default architecture scaled down: d=8, k=16, hidden=2k+4
    index = index_documents(CORPUS)
    from rerankd.pipeline import config_from_index
    config = config_from_index(index, embed_dim=8, filter_width=5,
                               num_filters=16, hidden_size=36)
    return init_model(config, seed=42)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
